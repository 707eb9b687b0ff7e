// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "fklab/chain_opt.hpp"
#include "fklab/cli.hpp"
#include "fklab/environments.hpp"
#include "fklab/holonomic_lp.hpp"
#include "fklab/mane.hpp"
#include "fklab/towers.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace fklab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

void require(Outcome& o, bool cond, const std::string& what)
{
    if (!cond) {
        o.pass = false;
        o.detail += " FAILED[" + what + "]";
    }
}

// 1. zero potential: E = 0 and free minimizers are equally spaced by lambda
Outcome zero_potential()
{
    Outcome o;
    double worst_e = 0, worst_gap = 0;
    for (double lambda : {0.0, 0.7, 1.0}) {
        const auto m = circle_model(lambda, 0.0);
        const auto env = make_circle(0.0);
        const auto est = ground_energy(m, env, default_n_list());
        worst_e = std::max({worst_e, std::fabs(est.lower_bound), std::fabs(est.extrapolated)});
        for (const auto& c : est.minimizers)
            for (std::size_t k = 1; k < c.x.size(); ++k)
                worst_gap = std::max(worst_gap, std::fabs(c.x[k] - c.x[k - 1] - lambda));
    }
    require(o, worst_e <= 1e-8, "|E| <= 1e-8");
    require(o, worst_gap <= 1e-6, "spacing within 1e-6");
    o.detail = "max|E|=" + fmt("%.3g", worst_e) + " max|spacing-lambda|=" + fmt("%.3g", worst_gap) + o.detail;
    return o;
}

struct NamedModel {
    const char* name;
    LagrangianSpec m;
    EnvPoint env;
};

std::vector<NamedModel> twist_catalog()
{
    return {
        {"circle-quadratic", circle_model(0.5, 1.0), make_circle(0.3)},
        {"circle-quartic", circle_model(0.5, 1.0, SpringKind::Quartic), make_circle(0.3)},
        {"torus-quadratic", torus_model(0.0, 1.0, 1.0), make_torus(0.1, 0.7)},
        {"torus-quartic", torus_model(0.3, 1.0, 0.5, SpringKind::Quartic), make_torus(0.1, 0.7)},
        {"sturm-quadratic", sturm_model(1.0, 0.5, 1.0), make_quasicrystal(AlphaValue::fibonacci(), 0.25)},
    };
}

// 2. Aubry crossing: uncrossing strictly lowers the energy
Outcome aubry_crossing()
{
    Outcome o;
    std::mt19937_64 rng(20261019);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    double worst_quad = 0, min_gain = oracle::kInf;
    for (const auto& nm : twist_catalog()) {
        int done = 0;
        while (done < 10000) {
            const double x0 = U(rng), x1 = U(rng), y0 = U(rng), y1 = U(rng);
            if (!((y0 - x0) * (y1 - x1) < 0))
                continue;
            ++done;
            const double g = crossing_gain(nm.m, nm.env, x0, x1, y0, y1);
            min_gain = std::min(min_gain, g);
            if (!(g > 0))
                require(o, false, std::string(nm.name) + " gain > 0");
            if (nm.m.spring == SpringKind::Quadratic)
                worst_quad = std::max(worst_quad, std::fabs(g - std::fabs((y0 - x0) * (y1 - x1))));
        }
    }
    require(o, worst_quad <= 1e-12, "quadratic gain identity to 1e-12");
    o.detail = "5 models x 1e4 draws, min gain=" + fmt("%.3g", min_gain) +
               " quadratic max|gain-|dy dx||=" + fmt("%.3g", worst_quad) + o.detail;
    return o;
}

// 3. monotone reduction against exhaustive subsequence search
Outcome monotone_reduction()
{
    Outcome o;
    const std::vector<double> grid{0.0, 0.5, 1.0, 1.5, 2.0};
    double worst_vs_oracle = 0, worst_increase = -oracle::kInf;
    long chains = 0;
    for (const auto& nm : twist_catalog()) {
        for (int n = 1; n <= 4; ++n) {
            std::vector<int> digit(n + 1, 0);
            while (true) {
                std::vector<double> x(n + 1);
                for (int i = 0; i <= n; ++i)
                    x[i] = grid[digit[i]];
                const auto rep = aubry_exchange_repair(nm.m, nm.env, x);
                const double input = oracle::sum_energy(nm.m, nm.env, x);
                const double best = oracle::best_monotone_subsequence(nm.m, nm.env, x);
                worst_vs_oracle = std::max(worst_vs_oracle, std::fabs(rep.energy - best));
                worst_increase = std::max(worst_increase, rep.energy - input);
                ++chains;
                int i = 0;
                while (i <= n && ++digit[i] == 5)
                    digit[i++] = 0;
                if (i > n)
                    break;
            }
        }
    }
    require(o, worst_increase <= 1e-12, "repair never raises the energy");
    require(o, worst_vs_oracle <= 1e-12, "repair equals brute force to 1e-12");
    o.detail = std::to_string(chains) + " chains, max|repair-oracle|=" + fmt("%.3g", worst_vs_oracle) +
               " max(repair-input)=" + fmt("%.3g", worst_increase) + o.detail;
    return o;
}

// 4. Mane DP against exhaustive monotone chains
Outcome mane_vs_brute_force()
{
    Outcome o;
    double worst = 0;
    int targets = 0;
    for (double K : {0.0, 1.0})
        for (double lambda : {0.5, 1.0})
            for (double phase : {0.0, 0.37}) {
                const auto m = circle_model(lambda, K);
                const auto env = make_circle(phase);
                const double ebar = K == 0 ? 0.0 : ground_energy(m, env, default_n_list()).lower_bound;
                const auto table = mane_table(m, env, ebar, 2.0, 0.5, 6);
                const auto brute = oracle::mane_brute_force(m, env, ebar, 2.0, 0.5, 6);
                for (std::size_t i = 0; i < table.size(); ++i) {
                    worst = std::max(worst, std::fabs(table.phi(i) - brute[i]));
                    ++targets;
                }
            }
    require(o, worst <= 1e-12, "table equals enumeration to 1e-12");
    o.detail = std::to_string(targets) + " targets, max|DP-enumeration|=" + fmt("%.3g", worst) + o.detail;
    return o;
}

// 5. cocycle inequalities on the circle K = 1
Outcome cocycle_suite()
{
    Outcome o;
    const auto m = circle_model(0.5, 1.0);
    const auto env = make_circle(0.0);
    const double h = 0.05;
    const auto est = ground_energy(m, env, default_n_list());
    const auto table = mane_table(m, env, est.lower_bound, 4.0, h, 64);
    const auto d = cocycle_defects(table, 64, 7);
    const double bound = 10 * h * d.lipschitz;
    require(o, d.subadd_max <= bound, "subadditivity <= 10 h Lip");
    require(o, d.one_step_max <= 1e-9, "one-step <= 1e-9");
    require(o, d.lower_bound_max <= 1e-9, "lower bound within 1e-9");
    require(o, std::isfinite(d.sublinearity_ratio), "sublinearity ratio finite");
    o.detail = "subadd=" + fmt("%.3g", d.subadd_max) + " (bound " + fmt("%.3g", bound) + ") one_step=" +
               fmt("%.3g", d.one_step_max) + " lower=" + fmt("%.3g", d.lower_bound_max) +
               " sublinearity=" + fmt("%.4g", d.sublinearity_ratio) + o.detail;
    return o;
}

// 6. LP duality, min-mean-cycle oracle and agreement with the chain estimate
Outcome lp_duality()
{
    Outcome o;
    const double lambda = 0.5, T_max = 2.0;
    double worst_gap_pd = 0, worst_karp = 0, gap32 = 0;
    bool shrinks = true;
    for (double K : {0.0, 1.0}) {
        const auto m = circle_model(lambda, K);
        const double chain_est = ground_energy(m, make_circle(0.0), default_n_list()).extrapolated;
        double prev_gap = oracle::kInf;
        for (int N : {8, 16, 32, 64}) {
            const auto lp = discretize_circle(m, N, T_max);
            const auto primal = solve_primal(lp);
            if (N <= 16)
                worst_karp = std::max(worst_karp, std::fabs(primal.value - oracle::min_mean_cycle(N, lp.arcs)));
            if (N < 16)
                continue;
            const double gap = std::fabs(primal.value - chain_est);
            if (gap > prev_gap + 1e-12)
                shrinks = false;
            prev_gap = gap;
            if (N == 32) {
                const auto dual = solve_dual(lp, primal);
                const auto bf = solve_dual_bellman_ford(lp);
                worst_gap_pd = std::max({worst_gap_pd, std::fabs(primal.value - dual.value),
                                         std::fabs(primal.value - bf.value)});
                gap32 = std::max(gap32, gap);
            }
        }
    }
    require(o, worst_gap_pd <= 1e-6, "|primal-dual| <= 1e-6 at N=32, tableau and Bellman-Ford duals");
    require(o, worst_karp <= 1e-9, "primal = min mean cycle for N <= 16");
    require(o, gap32 <= 2e-2, "primal within 2e-2 of the chain estimate");
    require(o, shrinks, "gap nonincreasing over N = 16, 32, 64");
    o.detail = "max|primal-dual|=" + fmt("%.3g", worst_gap_pd) + " max|primal-karp|=" + fmt("%.3g", worst_karp) +
               " gap(N=32)=" + fmt("%.3g", gap32) + o.detail;
    return o;
}

// 7. torus lambda = 0: the Mather set is the zero environment at rest
Outcome torus_degenerate()
{
    Outcome o;
    const auto m = torus_model(0.0, 1.0, 1.0);
    const auto env = make_torus(0.0, 0.0);
    const auto est = ground_energy(m, env, default_n_list());
    const int W = 8;
    const std::vector<double> constant(2 * W + 1, 0.0);
    const auto defects =
        chain_defects(m, env, constant, W, est.lower_bound, est.extrapolated, SolverOptions{}, 1);
    double worst = 0;
    for (const auto& d : defects)
        worst = std::max({worst, std::fabs(d.defect), std::fabs(d.defect_extrapolated)});
    const double e = std::max(std::fabs(est.lower_bound), std::fabs(est.extrapolated));
    require(o, e <= 1e-6, "E = 0 within 1e-6");
    require(o, worst <= 1e-6, "constant chain defects <= 1e-6");
    o.detail = "|E|=" + fmt("%.3g", e) + " max defect=" + fmt("%.3g", worst) + " over " +
               std::to_string(defects.size()) + " pairs" + o.detail;
    return o;
}

// 8. FK-Sturm on the Fibonacci quasicrystal
Outcome quasicrystal_structure()
{
    Outcome o;
    const AlphaValue alpha = AlphaValue::fibonacci();
    const auto m = sturm_model(1.0, 0.5, 1.0);
    const auto env = make_quasicrystal(alpha, 0.0);
    const double R = static_cast<double>(alpha.short_gap() + 1);
    const SolverOptions opt;
    const double cap = opt.jump_cap(m);

    const auto rot = rotation_number(m, env, {16, 32, 64}, opt);
    require(o, !rot.degenerate, "not degenerate");
    double lo = oracle::kInf, hi = -oracle::kInf, r16 = 0, r32 = 0, r64 = 0;
    for (std::size_t i = 0; i < rot.n.size(); ++i) {
        const int n = rot.n[i];
        if (n != 16 && n != 32 && n != 64)
            continue;
        (n == 16 ? r16 : n == 32 ? r32 : r64) = rot.rotation[i];
        lo = std::min(lo, rot.rotation[i]);
        hi = std::max(hi, rot.rotation[i]);
    }
    require(o, lo > 0, "rotation estimates positive");
    require(o, hi - lo <= 5e-2, "rotation Cauchy within 5e-2");

    const double half = 0.5 * (64 * cap + 2 * cap);
    const auto free = minimize_free(m, env, 64, -half, half, opt).chain;
    const auto st = structure_report(free, m, env, R);
    require(o, st.strictly_monotone, "length-64 minimizer strictly monotone");
    require(o, st.max_jump <= R, "max jump <= R");

    // section: the radius-R pattern seen from the set point nearest the chain middle
    const double mid = free.x[free.x.size() / 2];
    const auto cell = std::get<QuasicrystalPoint>(env).set.locate(mid);
    const auto section = CylinderSpec::from_pattern(pattern_at(env, cell.left, R));
    const auto eq = equidistribution_counts(free.x, env, section, R);
    require(o, eq.spread() <= 2, "equidistribution max-min <= 2");

    o.detail = "rotation(16,32,64)=" + fmt("%.4f", r16) + "," + fmt("%.4f", r32) + "," + fmt("%.4f", r64) +
               " R=" + fmt("%g", R) + " max_jump=" + fmt("%.4f", st.max_jump) + " returns=" +
               std::to_string(eq.returns.size()) + " spread=" + std::to_string(eq.spread()) + o.detail;
    return o;
}

// 9. tower algebra and the Beatty count law
Outcome tower_algebra()
{
    Outcome o;
    const AlphaValue alpha = AlphaValue::fibonacci();
    const double L = 1e5;
    Tower t = level0_tower(alpha, L);
    std::int64_t worst_h = 0;
    double worst_nu = 0;
    for (int level = 0; level < 2; ++level) {
        auto [up, M] = induce_tower(t, alpha, L);
        worst_h = std::max(worst_h, height_identity_defect(t, up, M));
        worst_nu = std::max(worst_nu, tower_measure_residual(t, up, M));
        t = std::move(up);
    }
    require(o, worst_h == 0, "height identity exact");
    require(o, worst_nu <= 1e-3, "measure residual <= 1e-3");

    const std::int64_t N = 1000000;
    const auto pts = beatty_points(alpha, 1.0, static_cast<double>(N));
    const long double a = (std::sqrt(5.0L) - 1) / 2;
    std::size_t next = 0, mismatches = 0;
    std::int64_t count = 0;
    for (std::int64_t n = 1; n <= N; ++n) {
        const bool member = next < pts.size() && pts[next] == n;
        if (member) {
            ++next;
            ++count;
        }
        if (member != oracle::beatty_member_ld(a, n))
            ++mismatches;
        if (count != static_cast<std::int64_t>(std::floor(n * a)) || count != alpha.floor_mul(n))
            ++mismatches;
    }
    require(o, mismatches == 0, "count in [1, N] equals floor(N alpha) for all N <= 1e6");
    o.detail = "height defect=" + std::to_string(worst_h) + " measure residual=" + fmt("%.3g", worst_nu) +
               " levels=" + std::to_string(t.level) + " floors=" + std::to_string(t.floors.size()) +
               " count law mismatches=" + std::to_string(mismatches) + o.detail;
    return o;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

// 10. every command reproduces its outputs byte for byte
Outcome determinism()
{
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "fklab_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const std::string circle = "[environment]\nvariant = circle\noffset = 0.1\nseed = 5\n"
                               "[lagrangian]\nlambda = 0.5\nK = 1\n"
                               "[grid]\nh = 0.1\nX = 2\nn_max = 20\nN_outer = 32\nW = 4\nn_list = 1,2,4,8,16\n"
                               "samples = 16\n[lp]\nN = 16\nT_max = 2\n";
    const std::string quasi = "[environment]\nvariant = quasicrystal\noffset = 0.25\n"
                              "[lagrangian]\nlambda = 1\na0 = 0.5\na1 = 1\n[tower]\nwindow = 100000\nlevels = 2\n";
    std::ofstream(root / "circle.ini") << circle;
    std::ofstream(root / "quasi.ini") << quasi;
    const std::vector<std::pair<std::string, std::string>> runs{
        {"ground-energy", "circle.ini"}, {"mane", "circle.ini"}, {"calibrate", "circle.ini"},
        {"lp", "circle.ini"},            {"tower", "quasi.ini"}, {"env-report", "quasi.ini"},
    };
    int files = 0;
    for (const auto& [cmd, ini] : runs) {
        for (const char* rep : {"a", "b"}) {
            const fs::path out = root / cmd / rep;
            const int code = cli::run({"fklab", cmd, "--config", (root / ini).string(), "--out", out.string()});
            if (code != 0)
                require(o, false, cmd + " exit code " + std::to_string(code));
        }
        const fs::path a = root / cmd / "a", b = root / cmd / "b";
        if (!fs::exists(a))
            continue;
        for (const auto& entry : fs::directory_iterator(a)) {
            const fs::path other = b / entry.path().filename();
            ++files;
            if (!fs::exists(other) || slurp(entry.path()) != slurp(other))
                require(o, false, cmd + "/" + entry.path().filename().string() + " differs");
        }
    }
    require(o, files >= 12, "all output files produced");
    o.detail = std::to_string(runs.size()) + " commands, " + std::to_string(files) + " files compared" + o.detail;
    fs::remove_all(root);
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double time_limit;  ///< seconds, 0 for none
    std::function<Outcome()> run;
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "zero-potential exactness", 5, zero_potential},
        {2, "Aubry crossing", 0, aubry_crossing},
        {3, "monotone reduction oracle", 0, monotone_reduction},
        {4, "Mane DP vs brute force", 10, mane_vs_brute_force},
        {5, "cocycle suite", 0, cocycle_suite},
        {6, "LP duality", 30, lp_duality},
        {7, "torus degenerate Mather point", 0, torus_degenerate},
        {8, "quasicrystal structure", 120, quasicrystal_structure},
        {9, "tower algebra", 0, tower_algebra},
        {10, "CLI determinism", 0, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0 && secs >= c.time_limit) {
            o.pass = false;
            o.detail += " FAILED[runtime < " + fmt("%g", c.time_limit) + " s]";
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s #%d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
