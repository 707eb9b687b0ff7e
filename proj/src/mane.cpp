#include "fklab/mane.hpp"

#include "fklab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <thread>

namespace fklab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

ManeTable::ManeTable(const LagrangianSpec& m, const EnvPoint& env, double ebar, double X, double h, int n_max)
    : m_(m), env_(env), ebar_(ebar), X_(X), h_(h), n_max_(n_max)
{
    m.check_env(env);
    if (!(h > 0) || !(X >= h))
        throw DomainError("mane_table: need h > 0 and X >= h");
    if (n_max < 1 || n_max > 4.0 * X / h + 1e-9)
        throw DomainError("mane_table: n_max must lie in [1, 4 X / h]");
    K_ = static_cast<int>(std::floor(X / h + 1e-9));
    if (K_ > 20000)
        throw ResourceError("mane_table: grid too large");
    const int size = 2 * K_ + 1;
    phi_.assign(size, kInf);
    steps_.assign(size, 0);
    prev_.assign(n_max + 1, std::vector<int>(size, -1));

    phi_[K_] = energy(m, env, 0.0, 0.0) - ebar;
    steps_[K_] = 1;

    for (int sign : {1, -1}) {
        // positions sign * j h for j = 0..K
        std::vector<double> V(K_ + 1), Wt(K_ + 1);
        for (int j = 0; j <= K_; ++j) {
            V[j] = potential_jet(m, env, sign * j * h).v;
            Wt[j] = spring_jet(m, sign * j * h).v;
        }
        std::vector<double> D(K_ + 1, kInf), next(K_ + 1);
        D[0] = 0;
        for (int r = 1; r <= n_max; ++r) {
            std::fill(next.begin(), next.end(), kInf);
            std::vector<int>& prev = prev_[r];
            for (int k = 1; k <= K_; ++k) {
                double best = kInf;
                int arg = -1;
                for (int j = 0; j < k; ++j) {
                    if (D[j] == kInf)
                        continue;
                    const double c = D[j] + Wt[k - j] + V[j] - ebar;
                    if (c < best) {
                        best = c;
                        arg = j;
                    }
                }
                next[k] = best;
                if (arg >= 0)
                    prev[K_ + sign * k] = arg == 0 ? -1 : K_ + sign * arg;
            }
            D.swap(next);
            for (int k = 1; k <= K_; ++k) {
                const int idx = K_ + sign * k;
                if (D[k] < phi_[idx]) {
                    phi_[idx] = D[k];
                    steps_[idx] = r;
                }
            }
            D[0] = kInf;
        }
        for (int k = 1; k <= K_; ++k)
            if (steps_[K_ + sign * k] == n_max && n_max < k)
                truncated_ = true;
    }
}

std::size_t ManeTable::index_of(double t) const
{
    const long idx = std::lround(t / h_) + K_;
    if (idx < 0 || idx >= static_cast<long>(phi_.size()))
        throw DomainError("mane table: target outside [-X, X]");
    return static_cast<std::size_t>(idx);
}

std::vector<double> ManeTable::chain(std::size_t idx) const
{
    if (static_cast<int>(idx) == K_)
        return {0.0, 0.0};
    std::vector<double> x;
    int cur = static_cast<int>(idx);
    for (int r = steps_[idx]; r >= 1; --r) {
        x.push_back(t(cur));
        cur = prev_[r][cur];
        if (cur < 0)
            break;
    }
    x.push_back(0.0);
    std::reverse(x.begin(), x.end());
    return x;
}

ManeTable mane_table(const LagrangianSpec& m, const EnvPoint& env, double ebar, double X, double h, int n_max)
{
    return ManeTable(m, env, ebar, X, h, n_max);
}

CocycleDefects cocycle_defects(const ManeTable& table, int samples, std::uint64_t seed)
{
    if (samples < 10)
        throw DomainError("cocycle_defects: at least 10 samples required");
    const auto& m = table.model();
    const auto& env = table.env();
    const double E = table.ebar();
    CocycleDefects out;
    out.samples = samples;
    out.lipschitz = lipschitz_bound(m, table.X());
    out.one_step_max = -kInf;
    out.lower_bound_max = -kInf;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const double t = table.t(i);
        const double phi = table.phi(i);
        out.one_step_max = std::max(out.one_step_max, phi - (energy(m, env, 0.0, t) - E));
        out.lower_bound_max = std::max(out.lower_bound_max, (E - energy(m, env, t, 0.0)) - phi);
        out.sublinearity_ratio = std::max(out.sublinearity_ratio, std::fabs(phi) / (1 + std::fabs(t)));
    }

    const int K = table.half_count();
    std::mt19937_64 rng(seed);
    std::map<int, ManeTable> shifted;
    out.subadd_max = -kInf;
    for (int i = 0; i < samples; ++i) {
        const int s = std::uniform_int_distribution<int>(-K, K)(rng);
        const int t = std::uniform_int_distribution<int>(std::max(-K, -K - s), std::min(K, K - s))(rng);
        auto it = shifted.find(s);
        if (it == shifted.end())
            it = shifted
                     .emplace(s, ManeTable(m, translate_env(env, table.t(K + s)), E, table.X(), table.h(),
                                           table.n_max()))
                     .first;
        const double lhs = table.phi(K + s + t);
        const double rhs = table.phi(K + s) + it->second.phi(K + t);
        out.subadd_max = std::max(out.subadd_max, lhs - rhs);
    }
    return out;
}

double mane_potential(const LagrangianSpec& m, const EnvPoint& env, double x, double y, double ebar,
                      const SolverOptions& opt, int max_steps)
{
    if (x == y)
        return energy(m, env, x, x) - ebar;
    const double sign = y > x ? 1.0 : -1.0;
    const double dist = std::fabs(y - x);
    const double h = opt.h;
    const double R = opt.jump_cap(m);
    // grid points strictly before the target
    int M = static_cast<int>(std::ceil(dist / h)) - 1;
    M = std::max(M, 0);
    const int J = std::max(1, static_cast<int>(std::floor(R / h + 1e-9)));
    std::vector<double> pos(M + 1), V(M + 1), Wt(J + 1);
    for (int i = 0; i <= M; ++i) {
        pos[i] = x + sign * i * h;
        V[i] = potential_jet(m, env, pos[i]).v;
    }
    for (int d = 0; d <= J; ++d)
        Wt[d] = spring_jet(m, sign * d * h).v;

    std::vector<std::vector<int>> prev(max_steps + 1, std::vector<int>(M + 1, -1));
    std::vector<double> D(M + 1, kInf), next(M + 1);
    D[0] = 0;
    double best = kInf;
    for (int k = 1; k <= max_steps; ++k) {
        // close the chain at the exact target from any layer k-1 point
        double close = kInf;
        int arg = -1;
        for (int i = 0; i <= M; ++i) {
            if (D[i] == kInf || dist - i * h > R + h)
                continue;
            const double c = D[i] + energy(m, env, pos[i], y);
            if (c < close) {
                close = c;
                arg = i;
            }
        }
        if (arg >= 0) {
            std::vector<double> chain{y};
            int cur = arg;
            for (int r = k - 1; r >= 1; --r) {
                chain.push_back(pos[cur]);
                cur = prev[r][cur];
            }
            chain.push_back(x);
            std::reverse(chain.begin(), chain.end());
            double F = close;
            if (chain.size() > 2) {
                try {
                    F = std::min(F, refine_chain(m, env, chain, false, false, opt).chain.energy);
                } catch (const NumericalFailure&) {
                    // keep the grid value
                }
            }
            best = std::min(best, F - k * ebar);
        }
        if (k == max_steps)
            break;
        std::fill(next.begin(), next.end(), kInf);
        for (int i = 1; i <= M; ++i) {
            double b = kInf;
            int a = -1;
            for (int j = std::max(0, i - J); j < i; ++j) {
                if (D[j] == kInf)
                    continue;
                const double c = D[j] + Wt[i - j] + V[j];
                if (c < b) {
                    b = c;
                    a = j;
                }
            }
            next[i] = b;
            prev[k][i] = a;
        }
        D.swap(next);
    }
    return best;
}

std::vector<PairDefect> chain_defects(const LagrangianSpec& m, const EnvPoint& env, const std::vector<double>& x,
                                      int W, double ebar_lower, double ebar_extrapolated, const SolverOptions& opt,
                                      int threads)
{
    std::vector<PairDefect> out;
    const int size = static_cast<int>(x.size());
    for (int a = 0; a < size; ++a)
        for (int b = a + 1; b < size && b - a <= W; ++b) {
            PairDefect pd;
            pd.m = a;
            pd.n = b;
            out.push_back(pd);
        }

    auto work = [&](PairDefect& pd) {
        const std::vector<double> seg(x.begin() + pd.m, x.begin() + pd.n + 1);
        const double E = chain_energy(m, env, seg);
        const int d = pd.n - pd.m;
        const int steps = 2 * d + 2;
        // the segment itself is one of the chains in the infimum
        auto potential = [&](double ebar) {
            return std::min(mane_potential(m, env, x[pd.m], x[pd.n], ebar, opt, steps), E - d * ebar);
        };
        pd.defect = E - d * ebar_lower - potential(ebar_lower);
        pd.defect_extrapolated = ebar_extrapolated == ebar_lower
            ? pd.defect
            : E - d * ebar_extrapolated - potential(ebar_extrapolated);
    };

    const int workers = std::max(1, std::min(threads, static_cast<int>(out.size())));
    if (workers == 1) {
        for (auto& pd : out)
            work(pd);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < out.size(); i += workers)
                    work(out[i]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

CalibrationReport calibrate_window(const LagrangianSpec& m, const EnvPoint& env, int N_outer, int W,
                                   const CalibrationOptions& opt)
{
    m.check_env(env);
    if (W < 1 || N_outer < 4 * W)
        throw DomainError("calibrate_window: need W >= 1 and N_outer >= 4 W");
    const GroundEnergyEstimate ge = ground_energy(m, env, opt.n_list, opt.solver);

    CalibrationReport rep;
    rep.ebar_lower = ge.lower_bound;
    rep.ebar_extrapolated = ge.extrapolated;
    const double R = opt.solver.jump_cap(m);
    const double half = 0.5 * (N_outer * R + 2 * R);
    rep.outer = minimize_free(m, env, N_outer, -half, half, opt.solver).chain;

    const int c = N_outer / 2;
    rep.first = c - W;
    rep.window.assign(rep.outer.x.begin() + (c - W), rep.outer.x.begin() + (c + W + 1));
    rep.defects =
        chain_defects(m, env, rep.window, W, rep.ebar_lower, rep.ebar_extrapolated, opt.solver, opt.threads);
    rep.max_defect = -kInf;
    rep.min_defect = kInf;
    rep.max_defect_extrapolated = -kInf;
    for (const auto& d : rep.defects) {
        rep.max_defect = std::max(rep.max_defect, d.defect);
        rep.min_defect = std::min(rep.min_defect, d.defect);
        rep.max_defect_extrapolated = std::max(rep.max_defect_extrapolated, d.defect_extrapolated);
    }
    const auto& x = rep.outer.x;
    rep.rotation = (x.back() - x.front()) / N_outer;
    rep.min_jump = kInf;
    for (std::size_t k = 1; k < x.size(); ++k) {
        const double j = std::fabs(x[k] - x[k - 1]);
        rep.max_jump = std::max(rep.max_jump, j);
        rep.min_jump = std::min(rep.min_jump, j);
    }
    rep.tolerance = 10 * (opt.solver.h + lipschitz_bound(m, R) / N_outer);
    return rep;
}

RotationReport rotation_number(const LagrangianSpec& m, const EnvPoint& env, const std::vector<int>& n_list,
                               const SolverOptions& opt)
{
    if (n_list.empty())
        throw DomainError("rotation_number: empty n list");
    std::set<int> merged(n_list.begin(), n_list.end());
    for (int p = 1; p <= *merged.rbegin(); p *= 2)
        merged.insert(p);
    const std::vector<int> all(merged.begin(), merged.end());
    const GroundEnergyEstimate ge = ground_energy(m, env, all, opt);

    RotationReport rep;
    rep.ebar = ge.extrapolated;
    double argmin = 0;
    rep.diagonal_inf = diagonal_infimum(m, env, opt.h, &argmin);
    if (rep.diagonal_inf <= rep.ebar + 1e-9) {
        rep.degenerate = true;
        rep.constant = make_chain(m, env, std::vector<double>(n_list.back() + 1, argmin));
        for (int n : n_list) {
            rep.n.push_back(n);
            rep.rotation.push_back(0.0);
        }
        return rep;
    }
    for (int n : n_list) {
        const auto it = std::find(all.begin(), all.end(), n);
        const Chain& c = ge.minimizers[static_cast<std::size_t>(it - all.begin())];
        rep.n.push_back(n);
        rep.rotation.push_back(std::fabs(c.x.back() - c.x.front()) / n);
    }
    rep.positive_lower = kInf;
    for (std::size_t i = rep.n.size() / 2; i < rep.n.size(); ++i)
        rep.positive_lower = std::min(rep.positive_lower, rep.rotation[i]);
    return rep;
}

int EquidistributionResult::spread() const
{
    if (counts.empty())
        return 0;
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    return *hi - *lo;
}

EquidistributionResult equidistribution_counts(const std::vector<double>& chain, const EnvPoint& env,
                                               const CylinderSpec& section, double R)
{
    require_quasicrystal(env, "equidistribution_counts");
    if (chain.size() < 2 || !strictly_monotone(chain))
        throw DomainError("equidistribution_counts: chain must be strictly monotone");
    if (!(R > 0))
        throw DomainError("equidistribution_counts: R must be positive");
    const double lo = std::min(chain.front(), chain.back());
    const double hi = std::max(chain.front(), chain.back());
    EquidistributionResult out;
    out.returns = return_times(env, section, lo, hi);
    if (out.returns.size() < 3)
        throw InsufficientData("equidistribution_counts: fewer than 3 returns inside the chain span");
    std::vector<double> sorted = chain;
    std::sort(sorted.begin(), sorted.end());
    for (double a : out.returns) {
        const auto first = std::upper_bound(sorted.begin(), sorted.end(), a - R);
        const auto last = std::lower_bound(sorted.begin(), sorted.end(), a + R);
        const int count = static_cast<int>(last - first);
        if (a - R >= lo && a + R <= hi)
            out.counts.push_back(count);
        else
            out.boundary_counts.push_back(count);
    }
    return out;
}

} // namespace fklab
