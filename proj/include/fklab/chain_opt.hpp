#pragma once

#include "fklab/lagrangians.hpp"

#include <vector>

namespace fklab {

/// A finite configuration x_0, ..., x_n with its energy.
struct Chain {
    std::vector<double> x;
    double energy = 0.0;

    std::size_t steps() const { return x.empty() ? 0 : x.size() - 1; }
};

Chain make_chain(const LagrangianSpec& m, const EnvPoint& env, std::vector<double> x);

struct SolverOptions {
    double h = 0.05;          ///< DP grid step
    double R_max = 0.0;       ///< jump cap; 0 means |lambda| + 3
    int max_iterations = 500;
    double tolerance = 1e-9;  ///< stop when no coordinate moves more than this

    double jump_cap(const LagrangianSpec& m) const;
};

struct MinimizeResult {
    Chain chain;       ///< refined
    Chain grid_chain;  ///< stage-1 DP optimum
    int iterations = 0;
};

/// Minimizes E(x_0..x_n) with x_0 = x_start, x_n = x_end.
MinimizeResult minimize_fixed(const LagrangianSpec& m, const EnvPoint& env, double x_start, double x_end, int n,
                              const SolverOptions& opt = {});

/// Minimizes E(x_0..x_n) over chains inside [lo, hi].
MinimizeResult minimize_free(const LagrangianSpec& m, const EnvPoint& env, int n, double lo, double hi,
                             const SolverOptions& opt = {});

/// Newton refinement of a chain; endpoints move only when flagged free.
/// Energy never increases. Throws NumericalFailure after max_iterations.
MinimizeResult refine_chain(const LagrangianSpec& m, const EnvPoint& env, std::vector<double> x, bool free_start,
                            bool free_end, const SolverOptions& opt = {});

struct GroundEnergyEstimate {
    std::vector<int> n;
    std::vector<double> m_n;
    std::vector<Chain> minimizers;
    double lower_bound = 0.0;       ///< max m_n / n, certified up to solver precision
    double extrapolated = 0.0;      ///< fit m_n/n = E - c/n, clamped into the a-priori sandwich
    double apriori_lower = 0.0;     ///< inf E(x, y) (= m_1)
    double apriori_upper = 0.0;     ///< sampled inf E(x, x)
    double h = 0.0;
    double R_max = 0.0;
};

/// Powers of two 1, 2, 4, ..., 64.
std::vector<int> default_n_list();

GroundEnergyEstimate ground_energy(const LagrangianSpec& m, const EnvPoint& env, const std::vector<int>& n_list,
                                   const SolverOptions& opt = {});

/// inf over x of E(x, x), by grid scan over one period (or [-16, 16]) and Newton polish.
double diagonal_infimum(const LagrangianSpec& m, const EnvPoint& env, double h, double* argmin = nullptr);

struct RepairResult {
    Chain chain;                       ///< the retained subsequence
    std::vector<int> retained;         ///< indices into the input chain
    std::vector<double> fixed_points;  ///< dropped points, charged E(x, x)
    double energy = 0.0;               ///< chain energy plus fixed point energies
};

/// Best strictly monotone subsequence keeping both endpoints, with every dropped
/// point charged as a fixed point. A strictly monotone input comes back as is.
RepairResult aubry_exchange_repair(const LagrangianSpec& m, const EnvPoint& env, const std::vector<double>& chain);

/// [E(x0,x1) + E(y0,y1)] - [E(x0,y1) + E(y0,x1)] for crossing segments.
double crossing_gain(const LagrangianSpec& m, const EnvPoint& env, double x0, double x1, double y0, double y1);

struct StructureReport {
    bool strictly_monotone = false;
    double max_jump = 0.0;
    double interior_perturbation_defect = 0.0;
    bool jumps_within_R = false;
};

StructureReport structure_report(const Chain& chain, const LagrangianSpec& m, const EnvPoint& env, double R);

bool strictly_monotone(const std::vector<double>& x);

} // namespace fklab
