#pragma once

#include "fklab/chain_opt.hpp"

#include <cstdint>
#include <vector>

namespace fklab {

/// Grid values of the Mane subadditive cocycle Phi(w, t) for t = k h, |t| <= X,
/// minimized over strictly monotone grid chains from 0 to t with at most n_max steps.
class ManeTable {
public:
    ManeTable(const LagrangianSpec& m, const EnvPoint& env, double ebar, double X, double h, int n_max);

    int half_count() const { return K_; }
    std::size_t size() const { return phi_.size(); }
    double t(std::size_t idx) const { return static_cast<double>(static_cast<int>(idx) - K_) * h_; }
    double phi(std::size_t idx) const { return phi_[idx]; }
    int steps(std::size_t idx) const { return steps_[idx]; }
    std::size_t index_of(double t) const;
    /// The argmin chain for grid target idx.
    std::vector<double> chain(std::size_t idx) const;

    /// Some target's optimum used all n_max steps while longer monotone chains exist.
    bool truncated() const { return truncated_; }

    const LagrangianSpec& model() const { return m_; }
    const EnvPoint& env() const { return env_; }
    double ebar() const { return ebar_; }
    double X() const { return X_; }
    double h() const { return h_; }
    int n_max() const { return n_max_; }

private:
    LagrangianSpec m_;
    EnvPoint env_;
    double ebar_, X_, h_;
    int n_max_, K_;
    bool truncated_ = false;
    std::vector<double> phi_;
    std::vector<int> steps_;
    // prev_[r][idx]: grid index before idx on the best r-step chain, -1 for the origin
    std::vector<std::vector<int>> prev_;
};

ManeTable mane_table(const LagrangianSpec& m, const EnvPoint& env, double ebar, double X, double h, int n_max);

struct CocycleDefects {
    double subadd_max = 0.0;          ///< max Phi(s+t) - Phi(s) - Phi_{tau_s}(t) over samples
    double one_step_max = 0.0;        ///< max Phi(t) - (L(w, t) - E)
    double lower_bound_max = 0.0;     ///< max (E - L(tau_t w, -t)) - Phi(t)
    double sublinearity_ratio = 0.0;  ///< max |Phi(t)| / (1 + |t|)
    double lipschitz = 0.0;           ///< Lipschitz bound of L on |t| <= X
    int samples = 0;
};

CocycleDefects cocycle_defects(const ManeTable& table, int samples, std::uint64_t seed = 1);

struct PairDefect {
    int m = 0;
    int n = 0;
    double defect = 0.0;              ///< with the certified lower bound for E
    double defect_extrapolated = 0.0; ///< with the extrapolated E
};

struct CalibrationReport {
    Chain outer;                ///< the free minimizer of length N_outer
    int first = 0;              ///< index of the first window point in outer
    std::vector<double> window; ///< the middle 2W+1 points
    std::vector<PairDefect> defects;
    double max_defect = 0.0;
    double min_defect = 0.0;
    double max_defect_extrapolated = 0.0;
    double ebar_lower = 0.0;
    double ebar_extrapolated = 0.0;
    double rotation = 0.0;      ///< (x_N - x_0) / N
    double max_jump = 0.0;
    double min_jump = 0.0;
    double tolerance = 0.0;     ///< 10 (h + C / N_outer)
};

struct CalibrationOptions {
    SolverOptions solver;
    std::vector<int> n_list = default_n_list();
    int threads = 1;  ///< workers for the per-pair potentials
};

CalibrationReport calibrate_window(const LagrangianSpec& m, const EnvPoint& env, int N_outer, int W,
                                   const CalibrationOptions& opt = {});

/// Defects of every pair (m, n), n - m <= W, of an explicit chain. Pairs are
/// independent and are split across `threads` workers; the result order is fixed.
std::vector<PairDefect> chain_defects(const LagrangianSpec& m, const EnvPoint& env, const std::vector<double>& x,
                                      int W, double ebar_lower, double ebar_extrapolated, const SolverOptions& opt,
                                      int threads = 1);

/// inf over chains x -> y of E(chain) - n E, by monotone grid DP plus Newton polish.
double mane_potential(const LagrangianSpec& m, const EnvPoint& env, double x, double y, double ebar,
                      const SolverOptions& opt, int max_steps);

struct RotationReport {
    bool degenerate = false;    ///< inf E(x, x) equals the ground energy
    std::vector<int> n;
    std::vector<double> rotation;
    double positive_lower = 0.0; ///< min over the upper half of the list
    double ebar = 0.0;
    double diagonal_inf = 0.0;
    Chain constant;             ///< returned in the degenerate case
};

RotationReport rotation_number(const LagrangianSpec& m, const EnvPoint& env, const std::vector<int>& n_list,
                               const SolverOptions& opt = {});

struct EquidistributionResult {
    std::vector<double> returns;     ///< return times inside the chain span
    std::vector<int> counts;         ///< interior intervals
    std::vector<int> boundary_counts; ///< intervals sticking out of the span
    int spread() const;
};

EquidistributionResult equidistribution_counts(const std::vector<double>& chain, const EnvPoint& env,
                                               const CylinderSpec& section, double R);

} // namespace fklab
