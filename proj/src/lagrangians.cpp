#include "fklab/lagrangians.hpp"

#include "fklab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fklab {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

Jet cosine_well(double K, double phase, double slope)
{
    const double c = std::cos(kTwoPi * phase);
    const double s = std::sin(kTwoPi * phase);
    return {K / (kTwoPi * kTwoPi) * (1 - c), slope * K / kTwoPi * s, slope * slope * K * c};
}

Jet bump(double amplitude, double len, double s)
{
    const double u = s / len;
    const double w = 1 - u;
    return {amplitude * u * u * w * w, amplitude / len * 2 * u * w * (1 - 2 * u),
            amplitude / (len * len) * (2 - 12 * u + 12 * u * u)};
}

} // namespace

void LagrangianSpec::validate() const
{
    if (!std::isfinite(lambda))
        throw DomainError("lambda must be finite");
    if (spring == SpringKind::Quartic && std::holds_alternative<QuasicrystalBumps>(potential))
        throw DomainError("the quartic spring is only available for the circle and torus families");
}

void LagrangianSpec::check_env(const EnvPoint& env) const
{
    const bool ok = (std::holds_alternative<CircleCosine>(potential) && std::holds_alternative<CirclePoint>(env))
        || (std::holds_alternative<TorusDoubleCosine>(potential) && std::holds_alternative<TorusPoint>(env))
        || (std::holds_alternative<QuasicrystalBumps>(potential) && std::holds_alternative<QuasicrystalPoint>(env));
    if (!ok)
        throw DomainError("potential family does not match the environment variant");
}

LagrangianSpec circle_model(double lambda, double K, SpringKind spring)
{
    LagrangianSpec m{spring, lambda, CircleCosine{K}};
    m.validate();
    return m;
}

LagrangianSpec torus_model(double lambda, double K1, double K2, SpringKind spring)
{
    LagrangianSpec m{spring, lambda, TorusDoubleCosine{K1, K2}};
    m.validate();
    return m;
}

LagrangianSpec sturm_model(double lambda, double a0, double a1)
{
    LagrangianSpec m{SpringKind::Quadratic, lambda, QuasicrystalBumps{a0, a1}};
    m.validate();
    return m;
}

Jet spring_jet(const LagrangianSpec& m, double t)
{
    const double d = t - m.lambda;
    if (m.spring == SpringKind::Quadratic)
        return {0.5 * d * d, d, 1.0};
    return {0.25 * d * d * d * d, d * d * d, 3 * d * d};
}

Jet potential_jet(const LagrangianSpec& m, const EnvPoint& env, double x)
{
    if (auto* c = std::get_if<CircleCosine>(&m.potential)) {
        const auto p = std::get<CirclePoint>(translate_env(env, x));
        return cosine_well(c->K, p.phase, 1.0);
    }
    if (auto* t = std::get_if<TorusDoubleCosine>(&m.potential)) {
        const auto p = std::get<TorusPoint>(translate_env(env, x));
        const Jet a = cosine_well(t->K1, p.phase1, 1.0);
        const Jet b = cosine_well(t->K2, p.phase2, std::numbers::sqrt2);
        return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
    }
    const auto& bumps = std::get<QuasicrystalBumps>(m.potential);
    const PointSet& set = require_quasicrystal(env, "potential");
    const auto cell = set.locate(x);
    const std::int64_t g = set.alpha.short_gap();
    const double amp = cell.gap == g ? bumps.a0 : bumps.a1;
    return bump(amp, static_cast<double>(cell.gap), cell.from_left);
}

double equivariant_potential(const LagrangianSpec& m, const EnvPoint& env, double x)
{
    if (!std::holds_alternative<QuasicrystalBumps>(m.potential))
        throw DomainError("equivariant_potential: bump model required");
    return potential_jet(m, env, x).v;
}

double energy(const LagrangianSpec& m, const EnvPoint& env, double x, double y)
{
    m.check_env(env);
    return spring_jet(m, y - x).v + potential_jet(m, env, x).v;
}

double chain_energy(const LagrangianSpec& m, const EnvPoint& env, const std::vector<double>& chain)
{
    if (chain.size() < 2)
        throw DomainError("chain_energy: a chain needs at least two points");
    m.check_env(env);
    double s = 0;
    for (std::size_t k = 0; k + 1 < chain.size(); ++k)
        s += spring_jet(m, chain[k + 1] - chain[k]).v + potential_jet(m, env, chain[k]).v;
    return s;
}

double twist_defect(const LagrangianSpec& m, const EnvPoint& env, const Box& box, int grid)
{
    if (grid < 8)
        throw DomainError("twist_defect: grid must be at least 8");
    m.check_env(env);
    const double wx = box.x_hi - box.x_lo;
    const double wy = box.y_hi - box.y_lo;
    if (!(wx > 0 && wy > 0))
        throw DomainError("twist_defect: empty box");
    const double h = std::min(wx, wy) / (4.0 * grid);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        const double x = box.x_lo + wx * i / grid;
        for (int j = 0; j <= grid; ++j) {
            const double y = box.y_lo + wy * j / grid;
            const double mixed = (energy(m, env, x + h, y + h) - energy(m, env, x + h, y - h)
                                  - energy(m, env, x - h, y + h) + energy(m, env, x - h, y - h))
                / (4 * h * h);
            worst = std::max(worst, mixed);
        }
    }
    return worst;
}

std::vector<std::pair<double, double>> coercivity_probe(const LagrangianSpec& m, const EnvPoint& env,
                                                        const std::vector<double>& radii)
{
    if (radii.size() < 2)
        throw DomainError("coercivity_probe: need at least two radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1]))
            throw DomainError("coercivity_probe: radii must increase");
    m.check_env(env);

    // One fixed sample set; every R filters it, so the infima are nested.
    constexpr int kPerUnit = 64;
    const double span = std::holds_alternative<CirclePoint>(env) ? 1.0 : 16.0;
    const int nx = static_cast<int>(span * kPerUnit);
    const double t_top = radii.back() + std::fabs(m.lambda) + 2.0;
    const int nt = static_cast<int>(std::ceil(t_top * kPerUnit));
    std::vector<double> pot(nx);
    for (int i = 0; i < nx; ++i)
        pot[i] = potential_jet(m, env, static_cast<double>(i) / kPerUnit).v;
    const double pot_min = *std::min_element(pot.begin(), pot.end());

    std::vector<std::pair<double, double>> out;
    for (double R : radii) {
        double best = std::numeric_limits<double>::infinity();
        for (int k = -nt; k <= nt; ++k) {
            const double t = static_cast<double>(k) / kPerUnit;
            if (std::fabs(t) < R)
                continue;
            best = std::min(best, spring_jet(m, t).v + pot_min);
        }
        out.emplace_back(R, best);
    }
    return out;
}

double potential_slope_bound(const LagrangianSpec& m)
{
    if (auto* c = std::get_if<CircleCosine>(&m.potential))
        return std::fabs(c->K) / kTwoPi;
    if (auto* t = std::get_if<TorusDoubleCosine>(&m.potential))
        return (std::fabs(t->K1) + std::numbers::sqrt2 * std::fabs(t->K2)) / kTwoPi;
    // max of 2u(1-u)(1-2u) on [0,1] is sqrt(3)/18; the shortest gap is at least 1
    const auto& b = std::get<QuasicrystalBumps>(m.potential);
    return std::max(std::fabs(b.a0), std::fabs(b.a1)) * std::sqrt(3.0) / 18.0;
}

double lipschitz_bound(const LagrangianSpec& m, double jump)
{
    const double d = std::fabs(jump) + std::fabs(m.lambda);
    const double w1 = m.spring == SpringKind::Quadratic ? d : d * d * d;
    return 2 * w1 + potential_slope_bound(m);
}

} // namespace fklab
