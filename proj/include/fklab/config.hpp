#pragma once

#include "fklab/alpha.hpp"
#include "fklab/environments.hpp"
#include "fklab/lagrangians.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fklab {

struct EnvironmentConfig {
    std::string variant = "circle";  ///< circle | torus | quasicrystal
    std::string alpha = "(-1+sqrt(5))/2";
    double offset = 0.0;
    double offset2 = 0.0;            ///< second torus phase
    std::uint64_t seed = 1;
};

struct LagrangianConfig {
    std::string spring = "quadratic";  ///< quadratic | quartic
    double lambda = 0.5;
    double K = 1.0;
    double K1 = 1.0;
    double K2 = 1.0;
    double a0 = 0.5;
    double a1 = 1.0;
};

struct GridConfig {
    double h = 0.05;
    double X = 4.0;
    int n_max = 64;
    int N_outer = 128;
    int W = 8;
    double R_max = 0.0;   ///< 0 selects |lambda| + 3
    std::vector<int> n_list = {1, 2, 4, 8, 16, 32, 64};
    int samples = 32;     ///< cocycle sample pairs
};

struct LPConfig {
    int N = 32;
    double T_max = 2.0;
    double threshold = 1e-6;
};

struct TowerConfig {
    double window = 1e5;
    int levels = 2;
};

struct OutputConfig {
    std::string directory;   ///< empty: use the --out flag
    bool csv = true;
    bool json = true;
};

struct RunConfig {
    EnvironmentConfig environment;
    LagrangianConfig lagrangian;
    GridConfig grid;
    LPConfig lp;
    TowerConfig tower;
    OutputConfig output;

    AlphaValue alpha_value() const { return AlphaValue::parse(environment.alpha); }
    EnvPoint env() const;
    LagrangianSpec model() const;

    /// key=value lines in a fixed order; the hash input.
    std::string canonical() const;
    /// FNV-1a 64 of canonical(), as 16 hex digits.
    std::string hash() const;
};

/// Parses INI text ([section] headers, key = value, '#' or ';' comments).
/// Unknown sections or keys and out-of-range values raise ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

} // namespace fklab
