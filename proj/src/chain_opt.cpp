#include "fklab/chain_opt.hpp"

#include "fklab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace fklab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Grid x_i = anchor + (i - anchor_index) h, so the anchor is represented exactly.
struct Grid {
    double anchor;
    int anchor_index;
    double h;
    int size;

    double at(int i) const { return anchor + static_cast<double>(i - anchor_index) * h; }
};

Grid make_grid(double anchor, double lo, double hi, double h)
{
    if (!(h > 0))
        throw DomainError("grid step must be positive");
    const double count = (hi - lo) / h;
    if (count > 5e7)
        throw ResourceError("DP grid too large: " + std::to_string(count) + " points");
    Grid g;
    g.anchor = anchor;
    g.h = h;
    g.anchor_index = static_cast<int>(std::ceil((anchor - lo) / h - 1e-9));
    g.size = g.anchor_index + static_cast<int>(std::floor((hi - anchor) / h + 1e-9)) + 1;
    return g;
}

struct PairTables {
    std::vector<double> V; // V(tau_{x_i} w)
    std::vector<double> W; // W((j - i) h), indexed by j - i + J
    int J;
};

PairTables make_tables(const LagrangianSpec& m, const EnvPoint& env, const Grid& g, double R)
{
    PairTables t;
    t.J = static_cast<int>(std::floor(R / g.h + 1e-9));
    t.V.resize(g.size);
    for (int i = 0; i < g.size; ++i)
        t.V[i] = potential_jet(m, env, g.at(i)).v;
    t.W.resize(2 * t.J + 1);
    for (int d = -t.J; d <= t.J; ++d)
        t.W[d + t.J] = spring_jet(m, static_cast<double>(d) * g.h).v;
    return t;
}

// out[i] = V[i] + min_j W[j - i] + next[j]; succ[i] = smallest minimizing j.
void relax(const PairTables& t, const std::vector<double>& next, std::vector<double>& out, int* succ)
{
    const int G = static_cast<int>(next.size());
    out.assign(G, kInf);
    for (int i = 0; i < G; ++i) {
        const int j0 = std::max(0, i - t.J);
        const int j1 = std::min(G - 1, i + t.J);
        double best = kInf;
        int arg = -1;
        const double* w = t.W.data() + (j0 - i + t.J);
        for (int j = j0; j <= j1; ++j, ++w) {
            const double c = *w + next[j];
            if (c < best) {
                best = c;
                arg = j;
            }
        }
        if (arg >= 0) {
            out[i] = best + t.V[i];
            if (succ)
                succ[i] = arg;
        }
    }
}

bool thomas_solve(const std::vector<double>& diag, const std::vector<double>& off, double shift,
                  std::vector<double>& rhs)
{
    const std::size_t n = diag.size();
    std::vector<double> c(n, 0.0);
    double scale = 0;
    for (double d : diag)
        scale = std::max(scale, std::fabs(d));
    const double eps = 1e-13 * (1 + scale);
    double piv = diag[0] + shift;
    if (!(piv > eps))
        return false;
    c[0] = n > 1 ? off[0] / piv : 0.0;
    rhs[0] /= piv;
    for (std::size_t k = 1; k < n; ++k) {
        piv = diag[k] + shift - off[k - 1] * c[k - 1];
        if (!(piv > eps))
            return false;
        if (k + 1 < n)
            c[k] = off[k] / piv;
        rhs[k] = (rhs[k] - off[k - 1] * rhs[k - 1]) / piv;
    }
    for (std::size_t k = n - 1; k-- > 0;)
        rhs[k] -= c[k] * rhs[k + 1];
    return true;
}

class Refiner {
public:
    Refiner(const LagrangianSpec& m, const EnvPoint& env, bool free_start, bool free_end)
        : m_(m), env_(env), free_start_(free_start), free_end_(free_end) {}

    double total(const std::vector<double>& x) const { return chain_energy(m_, env_, x); }

    // Newton step on the free coordinates; returns the largest accepted move.
    double newton_step(std::vector<double>& x, double& F) const
    {
        const int n = static_cast<int>(x.size()) - 1;
        const int a = free_start_ ? 0 : 1;
        const int b = free_end_ ? n : n - 1;
        if (b < a)
            return 0.0;
        const int nv = b - a + 1;
        std::vector<Jet> pot(n), spr(n);
        for (int k = 0; k < n; ++k) {
            pot[k] = potential_jet(m_, env_, x[k]);
            spr[k] = spring_jet(m_, x[k + 1] - x[k]);
        }
        std::vector<double> g(nv, 0.0), diag(nv, 0.0), off(std::max(nv - 1, 0), 0.0);
        for (int v = 0; v < nv; ++v) {
            const int k = a + v;
            if (k >= 1) {
                g[v] += spr[k - 1].d1;
                diag[v] += spr[k - 1].d2;
            }
            if (k < n) {
                g[v] += -spr[k].d1 + pot[k].d1;
                diag[v] += spr[k].d2 + pot[k].d2;
            }
            if (v + 1 < nv)
                off[v] = -spr[k].d2;
        }
        double gmax = 0;
        for (double gi : g)
            gmax = std::max(gmax, std::fabs(gi));
        if (gmax == 0)
            return 0.0;

        std::vector<double> p;
        double shift = 0;
        for (int attempt = 0; attempt < 60; ++attempt) {
            p.assign(g.size(), 0.0);
            for (int v = 0; v < nv; ++v)
                p[v] = -g[v];
            if (thomas_solve(diag, off, shift, p))
                break;
            p.clear();
            shift = shift == 0 ? 1e-8 * (1 + gmax) : shift * 4;
        }
        if (p.empty())
            return 0.0;

        std::vector<double> trial = x;
        for (double step = 1.0; step > 1e-12; step *= 0.5) {
            for (int v = 0; v < nv; ++v)
                trial[a + v] = x[a + v] + step * p[v];
            const double Ft = total(trial);
            if (Ft <= F) {
                double move = 0;
                for (int v = 0; v < nv; ++v)
                    move = std::max(move, std::fabs(trial[a + v] - x[a + v]));
                x.swap(trial);
                F = Ft;
                return move;
            }
        }
        return 0.0;
    }

    // One sweep of 1-D minimizations, golden section where the curvature vanishes.
    double coordinate_sweep(std::vector<double>& x, double& F, double bracket) const
    {
        const int n = static_cast<int>(x.size()) - 1;
        const int a = free_start_ ? 0 : 1;
        const int b = free_end_ ? n : n - 1;
        double move = 0;
        for (int k = a; k <= b; ++k) {
            auto local = [&](double y) {
                double s = 0;
                if (k >= 1)
                    s += energy(m_, env_, x[k - 1], y);
                if (k < n)
                    s += energy(m_, env_, y, x[k + 1]);
                return s;
            };
            const double y0 = x[k];
            const double f0 = local(y0);
            double d1 = 0, d2 = 0;
            if (k >= 1) {
                const Jet w = spring_jet(m_, y0 - x[k - 1]);
                d1 += w.d1;
                d2 += w.d2;
            }
            if (k < n) {
                const Jet w = spring_jet(m_, x[k + 1] - y0);
                const Jet v = potential_jet(m_, env_, y0);
                d1 += -w.d1 + v.d1;
                d2 += w.d2 + v.d2;
            }
            double best = y0, fbest = f0;
            if (d2 > 1e-12) {
                for (double step = 1.0; step > 1e-12; step *= 0.5) {
                    const double y = y0 - step * d1 / d2;
                    const double f = local(y);
                    if (f < fbest) {
                        best = y;
                        fbest = f;
                        break;
                    }
                }
            } else {
                constexpr double kRatio = 0.6180339887498949;
                double lo = y0 - bracket, hi = y0 + bracket;
                double c = hi - kRatio * (hi - lo), d = lo + kRatio * (hi - lo);
                double fc = local(c), fd = local(d);
                for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
                    if (fc < fd) {
                        hi = d;
                        d = c;
                        fd = fc;
                        c = hi - kRatio * (hi - lo);
                        fc = local(c);
                    } else {
                        lo = c;
                        c = d;
                        fc = fd;
                        d = lo + kRatio * (hi - lo);
                        fd = local(d);
                    }
                }
                const double y = 0.5 * (lo + hi);
                const double f = local(y);
                if (f < fbest) {
                    best = y;
                    fbest = f;
                }
            }
            if (best != y0) {
                x[k] = best;
                move = std::max(move, std::fabs(best - y0));
            }
        }
        F = total(x);
        return move;
    }

private:
    const LagrangianSpec& m_;
    const EnvPoint& env_;
    bool free_start_;
    bool free_end_;
};

struct FreeDP {
    Grid grid;
    std::vector<double> value;          // m_r on the grid, r = 0..n_max
    std::vector<int> start;             // argmin start index for each r
    std::vector<std::vector<int>> succ; // succ[r][i]: next index of an optimal r-step chain from i
};

FreeDP free_dp(const LagrangianSpec& m, const EnvPoint& env, int n_max, double lo, double hi, double h, double R)
{
    FreeDP dp;
    // anchor at the origin when it lies in the window, so x = 0 is a grid point
    dp.grid = make_grid(lo <= 0 && 0 <= hi ? 0.0 : lo, lo, hi, h);
    const PairTables t = make_tables(m, env, dp.grid, R);
    const int G = dp.grid.size;
    dp.value.assign(n_max + 1, 0.0);
    dp.start.assign(n_max + 1, 0);
    dp.succ.assign(n_max + 1, {});
    std::vector<double> B(G, 0.0), next;
    for (int r = 1; r <= n_max; ++r) {
        dp.succ[r].assign(G, -1);
        relax(t, B, next, dp.succ[r].data());
        B.swap(next);
        int arg = 0;
        for (int i = 1; i < G; ++i)
            if (B[i] < B[arg])
                arg = i;
        dp.value[r] = B[arg];
        dp.start[r] = arg;
    }
    return dp;
}

std::vector<double> trace(const FreeDP& dp, int r)
{
    std::vector<double> x;
    int i = dp.start[r];
    x.push_back(dp.grid.at(i));
    for (int s = r; s >= 1; --s) {
        i = dp.succ[s][i];
        x.push_back(dp.grid.at(i));
    }
    return x;
}

} // namespace

Chain make_chain(const LagrangianSpec& m, const EnvPoint& env, std::vector<double> x)
{
    Chain c;
    c.energy = chain_energy(m, env, x);
    c.x = std::move(x);
    return c;
}

double SolverOptions::jump_cap(const LagrangianSpec& m) const
{
    return R_max > 0 ? R_max : std::fabs(m.lambda) + 3.0;
}

MinimizeResult refine_chain(const LagrangianSpec& m, const EnvPoint& env, std::vector<double> x, bool free_start,
                            bool free_end, const SolverOptions& opt)
{
    if (x.size() < 2)
        throw DomainError("refine_chain: a chain needs at least two points");
    MinimizeResult res;
    res.grid_chain = make_chain(m, env, x);
    Refiner r(m, env, free_start, free_end);
    double F = res.grid_chain.energy;
    for (int it = 1; it <= opt.max_iterations; ++it) {
        double move = r.newton_step(x, F);
        if (move == 0.0)
            move = r.coordinate_sweep(x, F, std::max(opt.h, 1e-3));
        if (move < opt.tolerance) {
            res.iterations = it;
            res.chain = make_chain(m, env, std::move(x));
            return res;
        }
    }
    throw NumericalFailure("chain refinement did not converge in " + std::to_string(opt.max_iterations)
                               + " iterations",
                           x);
}

MinimizeResult minimize_fixed(const LagrangianSpec& m, const EnvPoint& env, double x_start, double x_end, int n,
                              const SolverOptions& opt)
{
    m.check_env(env);
    if (n < 1)
        throw DomainError("minimize_fixed: n must be at least 1");
    const double R = opt.jump_cap(m);
    if (std::fabs(x_end - x_start) > n * R)
        throw DomainError("minimize_fixed: endpoints farther apart than n * R_max");
    if (n == 1) {
        MinimizeResult res;
        res.chain = make_chain(m, env, {x_start, x_end});
        res.grid_chain = res.chain;
        return res;
    }
    const Grid g = make_grid(x_start, std::min(x_start, x_end) - R, std::max(x_start, x_end) + R, opt.h);
    const PairTables t = make_tables(m, env, g, R);

    // S_r(i): best r-step chain from grid point i to the exact endpoint.
    std::vector<double> S(g.size, kInf), next;
    for (int i = 0; i < g.size; ++i) {
        const double xi = g.at(i);
        if (std::fabs(x_end - xi) <= R + opt.h)
            S[i] = energy(m, env, xi, x_end);
    }
    std::vector<std::vector<int>> succ(n + 1);
    for (int r = 2; r <= n; ++r) {
        succ[r].assign(g.size, -1);
        relax(t, S, next, succ[r].data());
        S.swap(next);
    }
    int i = g.anchor_index;
    if (!std::isfinite(S[i]))
        throw DomainError("minimize_fixed: endpoint unreachable under the jump cap");
    std::vector<double> x{x_start};
    for (int r = n; r >= 2; --r) {
        i = succ[r][i];
        x.push_back(g.at(i));
    }
    x.push_back(x_end);
    return refine_chain(m, env, std::move(x), false, false, opt);
}

MinimizeResult minimize_free(const LagrangianSpec& m, const EnvPoint& env, int n, double lo, double hi,
                             const SolverOptions& opt)
{
    m.check_env(env);
    if (n < 1)
        throw DomainError("minimize_free: n must be at least 1");
    if (!(hi > lo))
        throw DomainError("minimize_free: empty window");
    const FreeDP dp = free_dp(m, env, n, lo, hi, opt.h, opt.jump_cap(m));
    return refine_chain(m, env, trace(dp, n), true, true, opt);
}

std::vector<int> default_n_list() { return {1, 2, 4, 8, 16, 32, 64}; }

double diagonal_infimum(const LagrangianSpec& m, const EnvPoint& env, double h, double* argmin)
{
    m.check_env(env);
    const bool periodic = std::holds_alternative<CirclePoint>(env);
    const double lo = periodic ? 0.0 : -16.0;
    const double hi = periodic ? 1.0 : 16.0;
    const double step = std::min(h, 0.05) / 4;
    const int count = static_cast<int>(std::ceil((hi - lo) / step));
    double best = kInf, bx = lo;
    for (int i = 0; i <= count; ++i) {
        const double x = lo + i * step;
        const double v = potential_jet(m, env, x).v;
        if (v < best) {
            best = v;
            bx = x;
        }
    }
    // Newton polish on V; never accept an increase
    for (int it = 0; it < 50; ++it) {
        const Jet j = potential_jet(m, env, bx);
        if (!(j.d2 > 1e-12))
            break;
        const double y = bx - j.d1 / j.d2;
        const double v = potential_jet(m, env, y).v;
        if (!(v <= best) || std::fabs(y - bx) > step)
            break;
        const bool done = std::fabs(y - bx) < 1e-15;
        best = v;
        bx = y;
        if (done)
            break;
    }
    if (argmin)
        *argmin = bx;
    return spring_jet(m, 0.0).v + best;
}

GroundEnergyEstimate ground_energy(const LagrangianSpec& m, const EnvPoint& env, const std::vector<int>& n_list,
                                   const SolverOptions& opt)
{
    m.check_env(env);
    if (n_list.empty())
        throw DomainError("ground_energy: empty n list");
    for (std::size_t i = 0; i < n_list.size(); ++i)
        if (n_list[i] < 1 || (i > 0 && n_list[i] <= n_list[i - 1]))
            throw DomainError("ground_energy: n list must be positive and increasing");
    if (n_list.back() > 64)
        throw DomainError("ground_energy: n list may not exceed 64");

    const double R = opt.jump_cap(m);
    const int n_max = n_list.back();
    const double half = 0.5 * (n_max * R + 2 * R);
    const FreeDP dp = free_dp(m, env, n_max, -half, half, opt.h, R);

    GroundEnergyEstimate est;
    est.h = opt.h;
    est.R_max = R;
    est.lower_bound = -kInf;
    for (int n : n_list) {
        MinimizeResult r = refine_chain(m, env, trace(dp, n), true, true, opt);
        est.n.push_back(n);
        est.m_n.push_back(r.chain.energy);
        est.lower_bound = std::max(est.lower_bound, r.chain.energy / n);
        est.minimizers.push_back(std::move(r.chain));
    }
    est.apriori_lower = n_list.front() == 1 ? est.m_n.front()
                                            : refine_chain(m, env, trace(dp, 1), true, true, opt).chain.energy;
    est.apriori_upper = diagonal_infimum(m, env, opt.h);

    // least squares for m_n/n = E - c/n over the upper half of the list
    const std::size_t first = n_list.size() / 2;
    if (n_list.size() - first >= 2) {
        double s1 = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = first; i < n_list.size(); ++i) {
            const double u = 1.0 / n_list[i];
            const double y = est.m_n[i] / n_list[i];
            s1 += 1;
            sx += u;
            sy += y;
            sxx += u * u;
            sxy += u * y;
        }
        const double det = s1 * sxx - sx * sx;
        est.extrapolated = det != 0 ? (sy * sxx - sx * sxy) / det : sy / s1;
    } else {
        est.extrapolated = est.lower_bound;
    }
    est.extrapolated = std::clamp(est.extrapolated, est.lower_bound, std::max(est.lower_bound, est.apriori_upper));
    return est;
}

bool strictly_monotone(const std::vector<double>& x)
{
    if (x.size() < 2)
        return true;
    bool inc = true, dec = true;
    for (std::size_t k = 1; k < x.size(); ++k) {
        inc = inc && x[k] > x[k - 1];
        dec = dec && x[k] < x[k - 1];
    }
    return inc || dec;
}

RepairResult aubry_exchange_repair(const LagrangianSpec& m, const EnvPoint& env, const std::vector<double>& chain)
{
    if (chain.size() < 2)
        throw DomainError("aubry_exchange_repair: a chain needs at least two points");
    const int n = static_cast<int>(chain.size()) - 1;
    RepairResult out;
    if (strictly_monotone(chain)) {
        out.chain = make_chain(m, env, chain);
        out.retained.resize(chain.size());
        std::iota(out.retained.begin(), out.retained.end(), 0);
        out.energy = out.chain.energy;
        return out;
    }

    std::vector<double> fixed(n + 1), prefix(n + 2, 0.0);
    for (int i = 0; i <= n; ++i) {
        fixed[i] = energy(m, env, chain[i], chain[i]);
        prefix[i + 1] = prefix[i] + fixed[i];
    }
    auto dropped = [&](int i, int j) { return prefix[j] - prefix[i + 1]; }; // strictly between i and j

    std::vector<int> keep;
    if (chain[0] == chain[n]) {
        keep = {0, n};
    } else {
        const double dir = chain[n] > chain[0] ? 1.0 : -1.0;
        std::vector<double> best(n + 1, kInf);
        std::vector<int> prev(n + 1, -1);
        best[0] = 0;
        for (int j = 1; j <= n; ++j)
            for (int i = 0; i < j; ++i) {
                if (!std::isfinite(best[i]) || !(dir * (chain[j] - chain[i]) > 0))
                    continue;
                const double c = best[i] + energy(m, env, chain[i], chain[j]) + dropped(i, j);
                if (c < best[j]) {
                    best[j] = c;
                    prev[j] = i;
                }
            }
        for (int j = n; j != -1; j = prev[j])
            keep.push_back(j);
        std::reverse(keep.begin(), keep.end());
    }

    std::vector<double> x;
    double fixed_sum = 0;
    std::size_t p = 0;
    for (int i = 0; i <= n; ++i) {
        if (p < keep.size() && keep[p] == i) {
            x.push_back(chain[i]);
            ++p;
        } else {
            out.fixed_points.push_back(chain[i]);
            fixed_sum += fixed[i];
        }
    }
    out.retained = keep;
    out.chain = make_chain(m, env, std::move(x));
    out.energy = out.chain.energy + fixed_sum;
    return out;
}

double crossing_gain(const LagrangianSpec& m, const EnvPoint& env, double x0, double x1, double y0, double y1)
{
    if (!((y0 - x0) * (y1 - x1) < 0))
        throw DomainError("crossing_gain: segments do not cross");
    return (energy(m, env, x0, x1) + energy(m, env, y0, y1)) - (energy(m, env, x0, y1) + energy(m, env, y0, x1));
}

StructureReport structure_report(const Chain& chain, const LagrangianSpec& m, const EnvPoint& env, double R)
{
    StructureReport rep;
    const auto& x = chain.x;
    rep.strictly_monotone = strictly_monotone(x);
    for (std::size_t k = 1; k < x.size(); ++k)
        rep.max_jump = std::max(rep.max_jump, std::fabs(x[k] - x[k - 1]));
    rep.jumps_within_R = rep.max_jump <= R;
    static const double kOffsets[] = {1e-4, 1e-3, 1e-2, 1e-1};
    double gain = 0;
    for (std::size_t k = 1; k + 1 < x.size(); ++k) {
        const double base = energy(m, env, x[k - 1], x[k]) + energy(m, env, x[k], x[k + 1]);
        for (double d : kOffsets)
            for (double s : {-d, d}) {
                const double y = x[k] + s;
                const double e = energy(m, env, x[k - 1], y) + energy(m, env, y, x[k + 1]);
                gain = std::max(gain, base - e);
            }
    }
    rep.interior_perturbation_defect = gain;
    return rep;
}

} // namespace fklab
