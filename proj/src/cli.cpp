#include "fklab/cli.hpp"

#include "fklab/chain_opt.hpp"
#include "fklab/config.hpp"
#include "fklab/csv.hpp"
#include "fklab/errors.hpp"
#include "fklab/holonomic_lp.hpp"
#include "fklab/mane.hpp"
#include "fklab/towers.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fklab::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Context {
    RunConfig config;
    std::string hash;
    fs::path out;
    std::uint64_t seed = 1;
    int threads = 1;
    std::vector<std::string> written;
};

std::string num(double v) { return format_double(v); }

CsvTable table(const Context& ctx, std::vector<std::string> header)
{
    CsvTable t;
    t.comments.push_back(" config_hash=" + ctx.hash);
    t.header = std::move(header);
    return t;
}

void emit_csv(Context& ctx, const std::string& name, const CsvTable& t)
{
    if (!ctx.config.output.csv)
        return;
    write_csv((ctx.out / name).string(), t);
    ctx.written.push_back(name);
}

void emit_json(Context& ctx, const std::string& name, const std::string& command, json results,
               const std::vector<std::string>& warnings)
{
    if (!ctx.config.output.json)
        return;
    json doc;
    doc["command"] = command;
    doc["config_hash"] = ctx.hash;
    doc["results"] = std::move(results);
    doc["warnings"] = warnings;
    std::ofstream f(ctx.out / name, std::ios::binary);
    if (!f)
        throw ConfigError("cannot write " + (ctx.out / name).string());
    f << doc.dump(2) << '\n';
    ctx.written.push_back(name);
}

SolverOptions solver_options(const RunConfig& c)
{
    SolverOptions o;
    o.h = c.grid.h;
    o.R_max = c.grid.R_max;
    return o;
}

void cmd_ground_energy(Context& ctx)
{
    const auto& c = ctx.config;
    const auto est = ground_energy(c.model(), c.env(), c.grid.n_list, solver_options(c));
    CsvTable t = table(ctx, {"n", "m_n", "m_n_over_n"});
    for (std::size_t i = 0; i < est.n.size(); ++i)
        t.rows.push_back({std::to_string(est.n[i]), num(est.m_n[i]), num(est.m_n[i] / est.n[i])});
    emit_csv(ctx, "ground_energy.csv", t);

    std::vector<std::string> warnings;
    for (std::size_t i = 1; i < est.n.size(); ++i)
        if (est.m_n[i] / est.n[i] < est.m_n[i - 1] / est.n[i - 1] - 1e-9)
            warnings.push_back("m_n/n decreases between n=" + std::to_string(est.n[i - 1]) + " and n="
                               + std::to_string(est.n[i]));
    json r;
    r["lower_bound"] = est.lower_bound;
    r["extrapolated"] = est.extrapolated;
    r["apriori_lower"] = est.apriori_lower;
    r["apriori_upper"] = est.apriori_upper;
    r["h"] = est.h;
    r["R_max"] = est.R_max;
    emit_json(ctx, "ground_energy.json", "ground-energy", r, warnings);
}

void cmd_mane(Context& ctx)
{
    const auto& c = ctx.config;
    const auto model = c.model();
    const auto env = c.env();
    const auto est = ground_energy(model, env, c.grid.n_list, solver_options(c));
    const ManeTable tab(model, env, est.lower_bound, c.grid.X, c.grid.h, c.grid.n_max);
    const auto defects = cocycle_defects(tab, c.grid.samples, ctx.seed);

    CsvTable t = table(ctx, {"t", "phi", "n_steps"});
    for (std::size_t i = 0; i < tab.size(); ++i)
        t.rows.push_back({num(tab.t(i)), num(tab.phi(i)), std::to_string(tab.steps(i))});
    emit_csv(ctx, "mane_potential.csv", t);

    std::vector<std::string> warnings;
    if (tab.truncated())
        warnings.push_back("n_max reached at an optimum; longer chains may lower some values");
    json r;
    r["ebar"] = est.lower_bound;
    r["ebar_extrapolated"] = est.extrapolated;
    r["X"] = c.grid.X;
    r["h"] = c.grid.h;
    r["n_max"] = c.grid.n_max;
    r["truncated"] = tab.truncated();
    r["subadd_max"] = defects.subadd_max;
    r["one_step_max"] = defects.one_step_max;
    r["lower_bound_max"] = defects.lower_bound_max;
    r["sublinearity_ratio"] = defects.sublinearity_ratio;
    r["lipschitz"] = defects.lipschitz;
    r["samples"] = defects.samples;
    emit_json(ctx, "mane.json", "mane", r, warnings);
}

void cmd_calibrate(Context& ctx)
{
    const auto& c = ctx.config;
    CalibrationOptions opt;
    opt.solver = solver_options(c);
    opt.n_list = c.grid.n_list;
    opt.threads = ctx.threads;
    const auto rep = calibrate_window(c.model(), c.env(), c.grid.N_outer, c.grid.W, opt);

    CsvTable t = table(ctx, {"m", "n", "defect", "defect_extrapolated"});
    for (const auto& d : rep.defects)
        t.rows.push_back({std::to_string(rep.first + d.m), std::to_string(rep.first + d.n), num(d.defect),
                          num(d.defect_extrapolated)});
    emit_csv(ctx, "calibration.csv", t);
    CsvTable w = table(ctx, {"k", "x"});
    for (std::size_t k = 0; k < rep.window.size(); ++k)
        w.rows.push_back({std::to_string(rep.first + static_cast<int>(k)), num(rep.window[k])});
    emit_csv(ctx, "calibration_chain.csv", w);

    std::vector<std::string> warnings;
    if (rep.max_defect > rep.tolerance)
        warnings.push_back("max defect exceeds the tolerance 10 (h + C / N_outer)");
    if (rep.min_defect < -1e-8)
        warnings.push_back("negative defect below -1e-8");
    json r;
    r["max_defect"] = rep.max_defect;
    r["min_defect"] = rep.min_defect;
    r["max_defect_extrapolated"] = rep.max_defect_extrapolated;
    r["ebar_lower"] = rep.ebar_lower;
    r["ebar_extrapolated"] = rep.ebar_extrapolated;
    r["rotation"] = rep.rotation;
    r["max_jump"] = rep.max_jump;
    r["min_jump"] = rep.min_jump;
    r["tolerance"] = rep.tolerance;
    r["N_outer"] = c.grid.N_outer;
    r["W"] = c.grid.W;
    emit_json(ctx, "calibration.json", "calibrate", r, warnings);
}

void cmd_tower(Context& ctx)
{
    const auto& c = ctx.config;
    const AlphaValue alpha = c.alpha_value();
    const double window = c.tower.window;
    std::vector<Tower> towers{level0_tower(alpha, window)};
    std::vector<HomologyMatrix> mats;
    std::vector<std::string> warnings;
    if (towers.front().periodic)
        warnings.push_back("single gap: periodic point set");
    for (int l = 0; l < c.tower.levels; ++l) {
        auto [up, M] = induce_tower(towers.back(), alpha, window);
        if (up.periodic && !towers.back().periodic)
            warnings.push_back("level " + std::to_string(l + 1) + " has a single return word");
        towers.push_back(std::move(up));
        mats.push_back(std::move(M));
    }

    CsvTable t = table(ctx, {"level", "label", "height", "count", "nu"});
    for (const auto& tw : towers)
        for (std::size_t i = 0; i < tw.floors.size(); ++i)
            t.rows.push_back({std::to_string(tw.level), tw.floors[i].label, std::to_string(tw.floors[i].height),
                              std::to_string(tw.floors[i].count), num(tw.empirical_nu[i])});
    emit_csv(ctx, "tower.csv", t);
    CsvTable h = table(ctx, {"level", "row", "col", "count"});
    for (std::size_t l = 0; l < mats.size(); ++l)
        for (std::size_t a = 0; a < mats[l].rows(); ++a)
            for (std::size_t b = 0; b < mats[l].cols(); ++b)
                h.rows.push_back({std::to_string(l), towers[l].floors[a].label, towers[l + 1].floors[b].label,
                                  std::to_string(mats[l].entries[a][b])});
    emit_csv(ctx, "tower_homology.csv", h);

    json r;
    r["alpha"] = alpha.to_string();
    r["window"] = window;
    json levels = json::array();
    for (std::size_t l = 0; l < towers.size(); ++l) {
        json lv;
        lv["level"] = towers[l].level;
        lv["floors"] = towers[l].floors.size();
        lv["total_mass"] = towers[l].total_mass();
        lv["periodic"] = towers[l].periodic;
        if (l > 0) {
            lv["residual"] = tower_measure_residual(towers[l - 1], towers[l], mats[l - 1]);
            lv["height_defect"] = height_identity_defect(towers[l - 1], towers[l], mats[l - 1]);
        }
        levels.push_back(lv);
    }
    r["levels"] = levels;
    double worst = 0;
    for (std::size_t l = 0; l < mats.size(); ++l)
        worst = std::max(worst, tower_measure_residual(towers[l], towers[l + 1], mats[l]));
    r["residual"] = worst;
    emit_json(ctx, "tower.json", "tower", r, warnings);
}

void cmd_lp(Context& ctx)
{
    const auto& c = ctx.config;
    if (c.environment.variant != "circle")
        throw ConfigError("lp: only the circle environment can be discretized");
    const auto model = c.model();
    const LPProblem lp = discretize_circle(model, c.lp.N, c.lp.T_max);
    const PrimalSolution primal = solve_primal(lp);
    const DualPotential dual = solve_dual(lp, primal);
    const DualPotential bf = solve_dual_bellman_ford(lp);
    const auto support = mather_support(lp, primal.mu, c.lp.threshold);

    CsvTable t = table(ctx, {"j", "k", "t", "weight"});
    for (const auto& s : support)
        t.rows.push_back({std::to_string(s.j), std::to_string(s.k), num(static_cast<double>(s.k) / lp.N),
                          num(s.weight)});
    emit_csv(ctx, "lp_support.csv", t);
    CsvTable u = table(ctx, {"j", "omega", "u"});
    for (int j = 0; j < lp.N; ++j)
        u.rows.push_back({std::to_string(j), num(static_cast<double>(j) / lp.N), num(dual.u[j])});
    emit_csv(ctx, "lp_dual.csv", u);

    std::vector<std::string> warnings;
    if (std::fabs(primal.value - dual.value) > 1e-6)
        warnings.push_back("duality gap above 1e-6");
    json r;
    r["N"] = lp.N;
    r["T_max"] = lp.T_max;
    r["arcs"] = lp.arcs.size();
    r["primal"] = primal.value;
    r["dual"] = dual.value;
    r["dual_bellman_ford"] = bf.value;
    r["gap"] = primal.value - dual.value;
    r["holonomy_residual"] = holonomy_residual(lp, primal.mu);
    r["dual_violation"] = dual_violation(lp, dual);
    r["pivots"] = primal.simplex.pivots;
    r["bland_pivots"] = primal.simplex.bland_pivots;
    r["projected_support"] = projected_support(support);
    emit_json(ctx, "lp.json", "lp", r, warnings);
}

void cmd_env_report(Context& ctx)
{
    const auto& c = ctx.config;
    const EnvPoint env = c.env();
    json r;
    r["variant"] = c.environment.variant;
    std::vector<std::string> warnings;
    if (auto* q = std::get_if<QuasicrystalPoint>(&env)) {
        const AlphaValue alpha = q->set.alpha;
        const std::int64_t g = alpha.short_gap();
        const auto pts = q->set.window(-50.0, 50.0);
        CsvTable t = table(ctx, {"x", "gap_after"});
        for (std::size_t i = 0; i < pts.size(); ++i)
            t.rows.push_back({num(pts[i]), i + 1 < pts.size() ? num(pts[i + 1] - pts[i]) : ""});
        emit_csv(ctx, "env_points.csv", t);

        const auto idx = beatty_points(alpha, 1.0, 1e4);
        std::int64_t n_short = 0, n_long = 0;
        for (std::size_t i = 1; i < idx.size(); ++i)
            (idx[i] - idx[i - 1] == g ? n_short : n_long) += 1;
        const double rho = static_cast<double>(g + 1);
        const double anchor = pts.empty() ? 0.0 : pts[pts.size() / 2];
        const auto section = CylinderSpec::from_pattern(pattern_at(env, anchor, rho));
        r["alpha"] = alpha.to_string();
        r["short_gap"] = g;
        r["count_1e4"] = idx.size();
        r["floor_alpha_1e4"] = alpha.floor_mul(10000);
        r["short_gaps"] = n_short;
        r["long_gaps"] = n_long;
        r["section_radius"] = rho;
        r["section_points"] = section.anchor.points.size();
        r["transverse_frequency_1e4"] = transverse_frequency(env, section, 1e4);
        r["hull_distance_shift_1e-3"] = hull_distance(env, translate_env(env, 1e-3), 1024);
    } else if (auto* cp = std::get_if<CirclePoint>(&env)) {
        r["phase"] = cp->phase;
    } else {
        const auto& tp = std::get<TorusPoint>(env);
        r["phase1"] = tp.phase1;
        r["phase2"] = tp.phase2;
    }
    const auto model = c.model();
    const auto probe = coercivity_probe(model, env, {1.0, 2.0, 4.0, 8.0});
    json pr = json::array();
    for (const auto& [R, v] : probe)
        pr.push_back({{"R", R}, {"inf", v}});
    r["coercivity"] = pr;
    r["twist_defect"] = twist_defect(model, env, {-1.0, 1.0, -1.0, 1.0}, 16);
    r["diagonal_inf"] = diagonal_infimum(model, env, c.grid.h);
    emit_json(ctx, "env_report.json", "env-report", r, warnings);
}

int dispatch(const std::string& command, Context& ctx)
{
    if (command == "ground-energy")
        cmd_ground_energy(ctx);
    else if (command == "mane")
        cmd_mane(ctx);
    else if (command == "calibrate")
        cmd_calibrate(ctx);
    else if (command == "tower")
        cmd_tower(ctx);
    else if (command == "lp")
        cmd_lp(ctx);
    else
        cmd_env_report(ctx);
    return kOk;
}

} // namespace

int run(int argc, char** argv)
{
    CLI::App app{"Frenkel-Kontorova chain laboratory"};
    app.require_subcommand(1, 1);
    std::string config_path, out_dir = "./out";
    std::uint64_t seed = 0;
    int threads = 1;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"ground-energy", "ground energy from superadditive free minima"},
        {"mane", "Mane potential table and cocycle checks"},
        {"calibrate", "calibration defects of a long minimizer's middle window"},
        {"tower", "Kakutani-Rohlin towers of the Beatty suspension"},
        {"lp", "holonomic-measure LP on the circle and its dual"},
        {"env-report", "summary of the configured environment and model"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "INI configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (default ./out)");
        sub->add_option("--seed", seed, "overrides environment.seed");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256));
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }
    CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    const bool out_given = sub->get_option("--out")->count() > 0;
    const bool seed_given = sub->get_option("--seed")->count() > 0;

    const auto start = std::chrono::steady_clock::now();
    try {
        Context ctx;
        ctx.config = load_config(config_path);
        if (seed_given)
            ctx.config.environment.seed = seed;
        ctx.seed = ctx.config.environment.seed;
        ctx.threads = threads;
        ctx.hash = ctx.config.hash();
        ctx.out = out_given || ctx.config.output.directory.empty() ? fs::path(out_dir)
                                                                    : fs::path(ctx.config.output.directory);
        fs::create_directories(ctx.out);
        dispatch(command, ctx);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << command << ": config_hash=" << ctx.hash << " wrote";
        for (const auto& w : ctx.written)
            std::cout << ' ' << (ctx.out / w).string();
        std::cout << " wall_time_s=" << secs << '\n';
        return kOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const DomainError& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kConfigError;
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const InsufficientData& e) {
        std::cerr << "insufficient data: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "output error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUnexpected;
    }
}

int run(const std::vector<std::string>& args)
{
    std::vector<std::string> copy = args;
    std::vector<char*> argv;
    for (auto& a : copy)
        argv.push_back(a.data());
    argv.push_back(nullptr);
    return run(static_cast<int>(copy.size()), argv.data());
}

} // namespace fklab::cli
