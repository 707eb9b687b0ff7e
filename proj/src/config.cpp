#include "fklab/config.hpp"

#include "fklab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace fklab {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double to_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size() || !std::isfinite(d))
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a finite number, got '" + v + "'");
    }
}

long long to_int(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const long long i = std::stoll(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
}

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw ConfigError(what);
}

void validate(const RunConfig& c)
{
    const auto& e = c.environment;
    require(e.variant == "circle" || e.variant == "torus" || e.variant == "quasicrystal",
            "environment.variant must be circle, torus or quasicrystal");
    try {
        (void)c.alpha_value();
    } catch (const std::exception& ex) {
        throw ConfigError(std::string("environment.alpha: ") + ex.what());
    }
    const auto& l = c.lagrangian;
    require(l.spring == "quadratic" || l.spring == "quartic", "lagrangian.spring must be quadratic or quartic");
    require(!(l.spring == "quartic" && e.variant == "quasicrystal"),
            "lagrangian.spring: quartic is not available for the quasicrystal family");
    require(std::fabs(l.lambda) <= 100, "lagrangian.lambda must satisfy |lambda| <= 100");
    const auto& g = c.grid;
    require(g.h > 0 && g.h <= 1, "grid.h must lie in (0, 1]");
    require(g.X >= g.h && g.X <= 100, "grid.X must lie in [h, 100]");
    require(g.n_max >= 1 && g.n_max <= 4 * g.X / g.h + 1e-9, "grid.n_max must lie in [1, 4 X / h]");
    require(g.W >= 1 && g.W <= 64, "grid.W must lie in [1, 64]");
    require(g.N_outer >= 4 * g.W && g.N_outer <= 4096, "grid.N_outer must lie in [4 W, 4096]");
    require(g.R_max >= 0, "grid.R_max must be >= 0");
    require(!g.n_list.empty(), "grid.n_list must not be empty");
    for (std::size_t i = 0; i < g.n_list.size(); ++i)
        require(g.n_list[i] >= 1 && g.n_list[i] <= 64 && (i == 0 || g.n_list[i] > g.n_list[i - 1]),
                "grid.n_list must be increasing integers in [1, 64]");
    require(g.samples >= 10 && g.samples <= 100000, "grid.samples must lie in [10, 100000]");
    require(c.lp.N >= 8 && c.lp.N <= 512, "lp.N must lie in [8, 512]");
    require(c.lp.T_max > 0 && c.lp.T_max <= 64, "lp.T_max must lie in (0, 64]");
    require(c.lp.threshold > 0 && c.lp.threshold < 1, "lp.threshold must lie in (0, 1)");
    require(c.tower.window >= 1e3 && c.tower.window <= 1e7, "tower.window must lie in [1e3, 1e7]");
    require(c.tower.levels >= 1 && c.tower.levels <= 8, "tower.levels must lie in [1, 8]");
}

} // namespace

EnvPoint RunConfig::env() const
{
    if (environment.variant == "circle")
        return make_circle(environment.offset);
    if (environment.variant == "torus")
        return make_torus(environment.offset, environment.offset2);
    return make_quasicrystal(alpha_value(), environment.offset);
}

LagrangianSpec RunConfig::model() const
{
    const SpringKind spring = lagrangian.spring == "quartic" ? SpringKind::Quartic : SpringKind::Quadratic;
    if (environment.variant == "circle")
        return circle_model(lagrangian.lambda, lagrangian.K, spring);
    if (environment.variant == "torus")
        return torus_model(lagrangian.lambda, lagrangian.K1, lagrangian.K2, spring);
    return sturm_model(lagrangian.lambda, lagrangian.a0, lagrangian.a1);
}

std::string RunConfig::canonical() const
{
    std::ostringstream os;
    os << "environment.variant=" << environment.variant << '\n'
       << "environment.alpha=" << environment.alpha << '\n'
       << "environment.offset=" << fmt(environment.offset) << '\n'
       << "environment.offset2=" << fmt(environment.offset2) << '\n'
       << "environment.seed=" << environment.seed << '\n'
       << "lagrangian.spring=" << lagrangian.spring << '\n'
       << "lagrangian.lambda=" << fmt(lagrangian.lambda) << '\n'
       << "lagrangian.K=" << fmt(lagrangian.K) << '\n'
       << "lagrangian.K1=" << fmt(lagrangian.K1) << '\n'
       << "lagrangian.K2=" << fmt(lagrangian.K2) << '\n'
       << "lagrangian.a0=" << fmt(lagrangian.a0) << '\n'
       << "lagrangian.a1=" << fmt(lagrangian.a1) << '\n'
       << "grid.h=" << fmt(grid.h) << '\n'
       << "grid.X=" << fmt(grid.X) << '\n'
       << "grid.n_max=" << grid.n_max << '\n'
       << "grid.N_outer=" << grid.N_outer << '\n'
       << "grid.W=" << grid.W << '\n'
       << "grid.R_max=" << fmt(grid.R_max) << '\n'
       << "grid.n_list=";
    for (std::size_t i = 0; i < grid.n_list.size(); ++i)
        os << (i ? "," : "") << grid.n_list[i];
    os << '\n'
       << "grid.samples=" << grid.samples << '\n'
       << "lp.N=" << lp.N << '\n'
       << "lp.T_max=" << fmt(lp.T_max) << '\n'
       << "lp.threshold=" << fmt(lp.threshold) << '\n'
       << "tower.window=" << fmt(tower.window) << '\n'
       << "tower.levels=" << tower.levels << '\n';
    return os.str();
}

std::string RunConfig::hash() const
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig parse_config(const std::string& text)
{
    RunConfig c;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    auto dbl = [](double& f) -> Setter { return [&f](const std::string& k, const std::string& v) { f = to_double(k, v); }; };
    auto integer = [](int& f) -> Setter {
        return [&f](const std::string& k, const std::string& v) {
            const long long i = to_int(k, v);
            if (i < -1000000000LL || i > 1000000000LL)
                throw ConfigError(k + ": integer out of range");
            f = static_cast<int>(i);
        };
    };
    auto str = [](std::string& f) -> Setter { return [&f](const std::string&, const std::string& v) { f = v; }; };

    std::map<std::string, Setter> keys{
        {"environment.variant", str(c.environment.variant)},
        {"environment.alpha", str(c.environment.alpha)},
        {"environment.offset", dbl(c.environment.offset)},
        {"environment.offset2", dbl(c.environment.offset2)},
        {"environment.seed",
         [&](const std::string& k, const std::string& v) {
             const long long s = to_int(k, v);
             if (s < 0)
                 throw ConfigError(k + ": seed must be nonnegative");
             c.environment.seed = static_cast<std::uint64_t>(s);
         }},
        {"lagrangian.spring", str(c.lagrangian.spring)},
        {"lagrangian.lambda", dbl(c.lagrangian.lambda)},
        {"lagrangian.K", dbl(c.lagrangian.K)},
        {"lagrangian.K1", dbl(c.lagrangian.K1)},
        {"lagrangian.K2", dbl(c.lagrangian.K2)},
        {"lagrangian.a0", dbl(c.lagrangian.a0)},
        {"lagrangian.a1", dbl(c.lagrangian.a1)},
        {"grid.h", dbl(c.grid.h)},
        {"grid.X", dbl(c.grid.X)},
        {"grid.n_max", integer(c.grid.n_max)},
        {"grid.N_outer", integer(c.grid.N_outer)},
        {"grid.W", integer(c.grid.W)},
        {"grid.R_max", dbl(c.grid.R_max)},
        {"grid.samples", integer(c.grid.samples)},
        {"grid.n_list",
         [&](const std::string& k, const std::string& v) {
             c.grid.n_list.clear();
             std::stringstream ss(v);
             std::string item;
             while (std::getline(ss, item, ','))
                 c.grid.n_list.push_back(static_cast<int>(to_int(k, trim(item))));
         }},
        {"lp.N", integer(c.lp.N)},
        {"lp.T_max", dbl(c.lp.T_max)},
        {"lp.threshold", dbl(c.lp.threshold)},
        {"tower.window", dbl(c.tower.window)},
        {"tower.levels", integer(c.tower.levels)},
        {"output.directory", str(c.output.directory)},
        {"output.formats",
         [&](const std::string& k, const std::string& v) {
             c.output.csv = c.output.json = false;
             std::stringstream ss(v);
             std::string item;
             while (std::getline(ss, item, ',')) {
                 item = trim(item);
                 if (item == "csv")
                     c.output.csv = true;
                 else if (item == "json")
                     c.output.json = true;
                 else
                     throw ConfigError(k + ": unknown format '" + item + "'");
             }
         }},
    };

    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';')
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = section + "." + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = keys.find(key);
        if (it == keys.end())
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        it->second(key, value);
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

} // namespace fklab
