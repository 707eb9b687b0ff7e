#include "fklab/holonomic_lp.hpp"

#include "fklab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fklab {

LPProblem discretize_circle(const LagrangianSpec& m, int N, double T_max)
{
    if (!std::holds_alternative<CircleCosine>(m.potential))
        throw DomainError("discretize_circle: circle model required");
    if (N < 8 || N > 512)
        throw DomainError("discretize_circle: N must lie in [8, 512]");
    if (!(T_max >= std::fabs(m.lambda) + 1))
        throw DomainError("discretize_circle: T_max must be at least |lambda| + 1");
    const double jumps = std::floor(T_max * N + 1e-9);
    if (static_cast<double>(N) * (2 * jumps + 1) > static_cast<double>(kMaxArcs))
        throw ResourceError("discretize_circle: " + std::to_string(N * (2 * jumps + 1)) + " arcs exceed the cap");

    LPProblem lp;
    lp.N = N;
    lp.T_max = T_max;
    lp.jump_max = static_cast<int>(jumps);
    lp.arcs.reserve(static_cast<std::size_t>(N) * (2 * lp.jump_max + 1));
    for (int j = 0; j < N; ++j) {
        const EnvPoint w = make_circle(static_cast<double>(j) / N);
        for (int k = -lp.jump_max; k <= lp.jump_max; ++k) {
            Arc a;
            a.from = j;
            a.to = ((j + k) % N + N) % N;
            a.k = k;
            a.cost = energy(m, w, 0.0, static_cast<double>(k) / N);
            lp.arcs.push_back(a);
        }
    }
    return lp;
}

PrimalSolution solve_primal(const LPProblem& lp)
{
    const int N = lp.N;
    const int n = static_cast<int>(lp.arcs.size());
    // rows 0..N-2: outflow - inflow at j (row N-1 is implied); row N-1: total mass
    std::vector<std::vector<double>> A(N, std::vector<double>(n, 0.0));
    std::vector<double> b(N, 0.0), c(n);
    b[N - 1] = 1.0;
    std::vector<int> crash;
    int self0 = -1;
    std::vector<int> step(N, -1);
    for (int a = 0; a < n; ++a) {
        const Arc& arc = lp.arcs[a];
        c[a] = arc.cost;
        if (arc.from != arc.to) {
            if (arc.from < N - 1)
                A[arc.from][a] += 1.0;
            if (arc.to < N - 1)
                A[arc.to][a] -= 1.0;
        }
        A[N - 1][a] = 1.0;
        if (arc.k == 0 && arc.from == 0)
            self0 = a;
        if (arc.k == 1)
            step[arc.from] = a;
    }
    // all mass on the self-loop at 0, plus the unit steps j -> j+1
    crash.push_back(self0);
    for (int j = 0; j + 1 < N; ++j)
        crash.push_back(step[j]);

    PrimalSolution sol;
    sol.simplex = simplex_solve(A, b, c, crash);
    sol.mu.weight = sol.simplex.x;
    sol.value = sol.simplex.value;
    return sol;
}

DualPotential solve_dual(const LPProblem& lp, const PrimalSolution& primal)
{
    const int N = lp.N;
    DualPotential d;
    d.u.assign(N, 0.0);
    for (int j = 0; j + 1 < N; ++j)
        d.u[j] = -primal.simplex.y[j];
    d.value = primal.simplex.y[N - 1];
    return d;
}

namespace {

// Potentials u with cost + u[from] - u[to] >= v, or false when a negative cycle exists.
bool bellman_ford(const LPProblem& lp, double v, std::vector<double>& u)
{
    // shortest distances with dist[to] <= dist[from] + (cost - v); u = dist then satisfies
    // cost + u[from] - u[to] >= v
    const int N = lp.N;
    std::vector<double> dist(N, 0.0);
    for (int round = 0; round <= N; ++round) {
        bool changed = false;
        for (const Arc& a : lp.arcs) {
            const double cand = dist[a.from] + (a.cost - v);
            if (cand < dist[a.to] - 1e-15) {
                dist[a.to] = cand;
                changed = true;
            }
        }
        if (!changed) {
            u = dist;
            return true;
        }
    }
    return false;
}

} // namespace

DualPotential solve_dual_bellman_ford(const LPProblem& lp, double tol)
{
    // the optimum lies between the cheapest arc and the cheapest self-loop
    double lo = std::numeric_limits<double>::infinity();
    double hi = lo;
    for (const Arc& a : lp.arcs) {
        lo = std::min(lo, a.cost);
        if (a.k == 0)
            hi = std::min(hi, a.cost);
    }
    std::vector<double> u;
    while (hi - lo > tol * (1 + std::fabs(lo))) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (bellman_ford(lp, mid, u))
            lo = mid;
        else
            hi = mid;
    }
    DualPotential d;
    d.value = lo;
    if (!bellman_ford(lp, lo, d.u))
        throw NumericalFailure("solve_dual_bellman_ford: lower bracket infeasible");
    return d;
}

std::vector<SupportArc> mather_support(const LPProblem& lp, const DiscreteMeasure& mu, double threshold)
{
    if (!(threshold > 0 && threshold < 1))
        throw DomainError("mather_support: threshold must lie in (0, 1)");
    double top = 0;
    for (double w : mu.weight)
        top = std::max(top, w);
    std::vector<SupportArc> out;
    for (std::size_t a = 0; a < mu.weight.size(); ++a)
        if (mu.weight[a] > threshold * top)
            out.push_back({lp.arcs[a].from, lp.arcs[a].k, mu.weight[a]});
    return out;
}

std::vector<int> projected_support(const std::vector<SupportArc>& support)
{
    std::vector<int> js;
    for (const auto& s : support)
        js.push_back(s.j);
    std::sort(js.begin(), js.end());
    js.erase(std::unique(js.begin(), js.end()), js.end());
    return js;
}

double holonomy_residual(const LPProblem& lp, const DiscreteMeasure& mu)
{
    std::vector<double> net(lp.N, 0.0);
    for (std::size_t a = 0; a < lp.arcs.size(); ++a) {
        net[lp.arcs[a].from] += mu.weight[a];
        net[lp.arcs[a].to] -= mu.weight[a];
    }
    double worst = 0;
    for (double v : net)
        worst = std::max(worst, std::fabs(v));
    return worst;
}

double dual_violation(const LPProblem& lp, const DualPotential& dual)
{
    double worst = -std::numeric_limits<double>::infinity();
    for (const Arc& a : lp.arcs)
        worst = std::max(worst, dual.value - (a.cost + dual.u[a.from] - dual.u[a.to]));
    return worst;
}

} // namespace fklab
