#pragma once

#include "fklab/lagrangians.hpp"
#include "fklab/simplex.hpp"

#include <vector>

namespace fklab {

/// Arc j -> (j + k) mod N of the circle grid, jump t_k = k / N.
struct Arc {
    int from = 0;
    int to = 0;
    int k = 0;
    double cost = 0.0;  ///< L(j / N, k / N)
};

struct LPProblem {
    int N = 0;
    int jump_max = 0;   ///< T_max * N, the largest |k|
    double T_max = 0.0;
    std::vector<Arc> arcs;
};

struct DiscreteMeasure {
    std::vector<double> weight;  ///< one per arc
};

struct PrimalSolution {
    DiscreteMeasure mu;
    double value = 0.0;
    SimplexResult simplex;
};

struct DualPotential {
    std::vector<double> u;  ///< one per grid point
    double value = 0.0;
};

/// Largest admissible arc count.
inline constexpr std::size_t kMaxArcs = 400000;

LPProblem discretize_circle(const LagrangianSpec& m, int N, double T_max);

PrimalSolution solve_primal(const LPProblem& lp);

/// Duals read off the final simplex tableau.
DualPotential solve_dual(const LPProblem& lp, const PrimalSolution& primal);

/// Independent dual: bisection on the value with Bellman-Ford feasibility of u.
DualPotential solve_dual_bellman_ford(const LPProblem& lp, double tol = 1e-12);

struct SupportArc {
    int j = 0;
    int k = 0;
    double weight = 0.0;
};

std::vector<SupportArc> mather_support(const LPProblem& lp, const DiscreteMeasure& mu, double threshold = 1e-6);

/// Sorted distinct grid points j carrying support.
std::vector<int> projected_support(const std::vector<SupportArc>& support);

/// max_j |inflow - outflow|.
double holonomy_residual(const LPProblem& lp, const DiscreteMeasure& mu);

/// max over arcs of (value - cost - u[from] + u[to]); <= 0 for a feasible dual.
double dual_violation(const LPProblem& lp, const DualPotential& dual);

} // namespace fklab
