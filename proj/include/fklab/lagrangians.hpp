#pragma once

#include "fklab/environments.hpp"

#include <utility>
#include <variant>
#include <vector>

namespace fklab {

enum class SpringKind { Quadratic, Quartic };

/// K/(4 pi^2) (1 - cos 2 pi phase).
struct CircleCosine {
    double K = 0.0;
};
/// Sum of two cosine wells in phase1 and phase2.
struct TorusDoubleCosine {
    double K1 = 0.0;
    double K2 = 0.0;
};
/// U_i(s) = a_i (s/l)^2 (1 - s/l)^2 on a gap of length l = floor(1/alpha) + i.
struct QuasicrystalBumps {
    double a0 = 0.0;
    double a1 = 0.0;
};

using Potential = std::variant<CircleCosine, TorusDoubleCosine, QuasicrystalBumps>;

/// E_w(x, y) = W(y - x) + V(tau_x w).
struct LagrangianSpec {
    SpringKind spring = SpringKind::Quadratic;
    double lambda = 0.0;
    Potential potential = CircleCosine{};

    /// Throws DomainError for the quartic spring on the quasicrystal family.
    void validate() const;
    /// Throws DomainError unless the potential matches the environment variant.
    void check_env(const EnvPoint& env) const;
};

LagrangianSpec circle_model(double lambda, double K, SpringKind spring = SpringKind::Quadratic);
LagrangianSpec torus_model(double lambda, double K1, double K2, SpringKind spring = SpringKind::Quadratic);
LagrangianSpec sturm_model(double lambda, double a0, double a1);

struct Jet {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

Jet spring_jet(const LagrangianSpec& m, double t);
/// V(tau_x w) and its derivatives in x.
Jet potential_jet(const LagrangianSpec& m, const EnvPoint& env, double x);

double energy(const LagrangianSpec& m, const EnvPoint& env, double x, double y);
double equivariant_potential(const LagrangianSpec& m, const EnvPoint& env, double x);
double chain_energy(const LagrangianSpec& m, const EnvPoint& env, const std::vector<double>& chain);

struct Box {
    double x_lo, x_hi, y_lo, y_hi;
};

/// Largest sampled central-difference estimate of the mixed derivative of E.
double twist_defect(const LagrangianSpec& m, const EnvPoint& env, const Box& box, int grid);

/// Sampled inf of E over |y - x| >= R for each R of the ladder.
std::vector<std::pair<double, double>> coercivity_probe(const LagrangianSpec& m, const EnvPoint& env,
                                                        const std::vector<double>& radii);

/// Bound on |dE/dx| + |dE/dy| over |y - x| <= jump.
double lipschitz_bound(const LagrangianSpec& m, double jump);

/// Sup of |V'| over the hull.
double potential_slope_bound(const LagrangianSpec& m);

} // namespace fklab
