#include "fklab/cli.hpp"
#include "fklab/config.hpp"
#include "fklab/csv.hpp"
#include "fklab/errors.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fklab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name)
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path write_ini(const TempDir& d, const std::string& name, const std::string& text)
{
    const fs::path p = d.path / name;
    std::ofstream(p) << text;
    return p;
}

int run_cli(const std::string& cmd, const fs::path& ini, const fs::path& out)
{
    return cli::run({"fklab", cmd, "--config", ini.string(), "--out", out.string()});
}

nlohmann::json load_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

} // namespace

TEST_CASE("config parsing")
{
    const auto c = parse_config("# comment\n[environment]\nvariant = torus\n; full-line comment\noffset = 0.25\n"
                                "[lagrangian]\nlambda = 0\nK1 = 2\n[grid]\nn_list = 1, 2, 4\n");
    CHECK(c.environment.variant == "torus");
    CHECK(c.environment.offset == 0.25);
    CHECK(c.lagrangian.K1 == 2);
    CHECK(c.grid.n_list == std::vector<int>{1, 2, 4});
    CHECK(std::holds_alternative<TorusPoint>(c.env()));
    CHECK(std::holds_alternative<TorusDoubleCosine>(c.model().potential));

    CHECK(parse_config("").hash() == RunConfig{}.hash());
    CHECK(parse_config("[lagrangian]\nlambda = 0.7\n").hash() != RunConfig{}.hash());
    CHECK(RunConfig{}.hash().size() == 16);

    CHECK_THROWS_AS(parse_config("[grid]\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\nh = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\nh = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[environment]\nvariant = sphere\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[environment]\nalpha = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[environment]\nvariant = quasicrystal\n[lagrangian]\nspring = quartic\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("[grid\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), ConfigError);

    try {
        parse_config("[grid]\nh = 0.1\nmystery = 3\n");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("csv round trip")
{
    CsvTable t;
    t.comments = {" config_hash=0123456789abcdef"};
    t.header = {"t", "phi"};
    t.rows = {{format_double(0.1), format_double(-1.0 / 3)}, {format_double(2), format_double(1e-300)}};
    const auto back = parse_csv(to_csv(t));
    CHECK(back.comments == t.comments);
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
    CHECK(back.number(0, "phi") == -1.0 / 3);
    CHECK(back.number(1, "phi") == 1e-300);
    CHECK_THROWS_AS(back.column("nope"), DomainError);
    CHECK_THROWS_AS(parse_csv("a,b\n1\n"), DomainError);
}

TEST_CASE("cli ground-energy")
{
    TempDir d("fklab_cli_ground");
    const auto ini = write_ini(d, "k0.ini", "[lagrangian]\nlambda = 1\nK = 0\n[grid]\nn_list = 1,2,4,8,16\n");
    REQUIRE(run_cli("ground-energy", ini, d.path / "out") == cli::kOk);
    const auto t = read_csv((d.path / "out" / "ground_energy.csv").string());
    REQUIRE(!t.rows.empty());
    CHECK(t.comments.front().find("config_hash=") != std::string::npos);
    const auto last = t.rows.size() - 1;
    CHECK(std::fabs(t.number(last, "m_n_over_n")) <= 1e-8);
    const auto j = load_json(d.path / "out" / "ground_energy.json");
    CHECK(j["command"] == "ground-energy");
    CHECK(j.contains("results"));
    CHECK(j["warnings"].is_array());
}

TEST_CASE("cli grid refinement")
{
    TempDir d("fklab_cli_refine");
    const auto coarse = write_ini(d, "a.ini", "[lagrangian]\nlambda = 0.5\nK = 1\n[grid]\nh = 0.05\n");
    const auto fine = write_ini(d, "b.ini", "[lagrangian]\nlambda = 0.5\nK = 1\n[grid]\nh = 0.025\n");
    REQUIRE(run_cli("ground-energy", coarse, d.path / "a") == 0);
    REQUIRE(run_cli("ground-energy", fine, d.path / "b") == 0);
    const double ea = load_json(d.path / "a" / "ground_energy.json")["results"]["extrapolated"];
    const double eb = load_json(d.path / "b" / "ground_energy.json")["results"]["extrapolated"];
    CHECK(std::fabs(ea - eb) <= 2e-3);
}

TEST_CASE("cli mane")
{
    TempDir d("fklab_cli_mane");
    const auto ini = write_ini(d, "k0.ini", "[lagrangian]\nlambda = 1\nK = 0\n[grid]\nh = 0.5\nX = 4\nn_max = 16\n");
    REQUIRE(run_cli("mane", ini, d.path / "out") == 0);
    const auto t = read_csv((d.path / "out" / "mane_potential.csv").string());
    bool found = false;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        if (t.number(r, "t") == 2.0) {
            found = true;
            CHECK(std::fabs(t.number(r, "phi")) <= 1e-9);
            CHECK(t.number(r, "n_steps") == 2);
        }
    CHECK(found);
}

TEST_CASE("cli lp")
{
    TempDir d("fklab_cli_lp");
    const auto ini = write_ini(d, "k0.ini", "[lagrangian]\nlambda = 1\nK = 0\n[lp]\nN = 16\nT_max = 2\n");
    REQUIRE(run_cli("lp", ini, d.path / "out") == 0);
    const auto j = load_json(d.path / "out" / "lp.json")["results"];
    CHECK(std::fabs(j["primal"].get<double>()) <= 1e-9);
    CHECK(std::fabs(j["dual"].get<double>()) <= 1e-9);

    const auto torus = write_ini(d, "torus.ini", "[environment]\nvariant = torus\n");
    CHECK(run_cli("lp", torus, d.path / "bad") == cli::kConfigError);
}

TEST_CASE("cli tower")
{
    TempDir d("fklab_cli_tower");
    const auto ini = write_ini(d, "fib.ini", "[environment]\nvariant = quasicrystal\n[tower]\nwindow = 100000\n");
    REQUIRE(run_cli("tower", ini, d.path / "out") == 0);
    const auto j = load_json(d.path / "out" / "tower.json")["results"];
    REQUIRE(j.contains("residual"));
    CHECK(j["residual"].get<double>() <= 1e-3);
}

TEST_CASE("cli calibrate on the torus at rest")
{
    TempDir d("fklab_cli_calibrate");
    const auto ini = write_ini(d, "torus.ini",
                               "[environment]\nvariant = torus\n[lagrangian]\nlambda = 0\nK1 = 1\nK2 = 1\n"
                               "[grid]\nN_outer = 32\nW = 4\n");
    REQUIRE(run_cli("calibrate", ini, d.path / "out") == 0);
    const auto j = load_json(d.path / "out" / "calibration.json")["results"];
    CHECK(j["max_defect"].get<double>() <= 1e-6);
}

TEST_CASE("cli errors and exit codes")
{
    TempDir d("fklab_cli_errors");
    const auto bad = write_ini(d, "bad.ini", "[grid]\nwhat = 1\n");
    CHECK(run_cli("ground-energy", bad, d.path / "o") == cli::kConfigError);
    CHECK(cli::run({"fklab", "ground-energy"}) == cli::kConfigError);
    CHECK(cli::run({"fklab", "no-such-command", "--config", bad.string()}) == cli::kConfigError);
    CHECK(run_cli("ground-energy", d.path / "missing.ini", d.path / "o") == cli::kConfigError);
    // a tower window too short to see every return word twice
    const auto shortwin = write_ini(d, "short.ini",
                                    "[environment]\nvariant = quasicrystal\nalpha = (-1+sqrt(5))/2\n"
                                    "[tower]\nwindow = 2000\nlevels = 8\n");
    CHECK(run_cli("tower", shortwin, d.path / "o") == cli::kNumericalFailure);

    const auto off = write_ini(d, "off.ini", "[output]\nformats = json\n[lagrangian]\nK = 0\n[grid]\nn_list = 1,2\n");
    REQUIRE(run_cli("ground-energy", off, d.path / "nocsv") == 0);
    CHECK_FALSE(fs::exists(d.path / "nocsv" / "ground_energy.csv"));
    CHECK(fs::exists(d.path / "nocsv" / "ground_energy.json"));
}

TEST_CASE("cli seeds")
{
    TempDir d("fklab_cli_seed");
    const auto ini = write_ini(d, "c.ini", "[grid]\nh = 0.1\nX = 2\nn_max = 20\nsamples = 12\nn_list = 1,2,4,8\n");
    REQUIRE(cli::run({"fklab", "mane", "--config", ini.string(), "--out", (d.path / "a").string()}) == 0);
    REQUIRE(cli::run({"fklab", "mane", "--config", ini.string(), "--out", (d.path / "b").string(), "--seed",
                      "1"}) == 0);
    // the default seed is 1, so an explicit --seed 1 reproduces the run
    CHECK(slurp(d.path / "a" / "mane.json") == slurp(d.path / "b" / "mane.json"));
}
