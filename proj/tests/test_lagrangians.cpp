#include "fklab/errors.hpp"
#include "fklab/lagrangians.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace fklab;

namespace {

struct Case {
    LagrangianSpec m;
    EnvPoint env;
};

std::vector<Case> catalog()
{
    const AlphaValue phi = AlphaValue::fibonacci();
    return {
        {circle_model(0.5, 1.0), make_circle(0.2)},
        {circle_model(-1.3, 3.0, SpringKind::Quartic), make_circle(0.9)},
        {torus_model(0.0, 1.0, 1.0), make_torus(0.3, 0.6)},
        {torus_model(0.7, 2.0, 0.5, SpringKind::Quartic), make_torus(0.0, 0.0)},
        {sturm_model(1.0, 0.5, 1.0), make_quasicrystal(phi, 0.0)},
        {sturm_model(0.3, 2.0, 0.25), make_quasicrystal(AlphaValue::parse("(-1+sqrt(2))/1"), 0.4)},
    };
}

} // namespace

TEST_CASE("two-point energy examples")
{
    const auto free = circle_model(1.0, 0.0);
    CHECK(energy(free, make_circle(0.7), 0, 1) == 0.0);

    const double K = 4 * std::numbers::pi * std::numbers::pi;
    for (double lambda : {0.0, 0.4, 1.0}) {
        const auto m = circle_model(lambda, K);
        CHECK(energy(m, make_circle(0.25), 0, 0) == doctest::Approx(lambda * lambda / 2 + 1).epsilon(1e-14));
    }

    CHECK_THROWS_AS(energy(free, make_torus(0, 0), 0, 1), DomainError);
    CHECK_THROWS_AS(LagrangianSpec({SpringKind::Quartic, 0.0, QuasicrystalBumps{1, 1}}).validate(), DomainError);
}

TEST_CASE("topological stationarity")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-20, 20);
    for (const auto& c : catalog())
        for (int i = 0; i < 1000; ++i) {
            const double x = U(rng), y = x + U(rng) / 5, t = U(rng);
            const double lhs = energy(c.m, c.env, x + t, y + t);
            const double rhs = energy(c.m, translate_env(c.env, t), x, y);
            REQUIRE(std::fabs(lhs - rhs) <= 1e-12);
        }
}

TEST_CASE("bump potential")
{
    const AlphaValue phi = AlphaValue::fibonacci();
    const auto m = sturm_model(1.0, 0.5, 1.0);
    const auto env = make_quasicrystal(phi, 0.0);
    const auto& set = std::get<QuasicrystalPoint>(env).set;
    for (double p : set.window(-30, 30))
        CHECK(equivariant_potential(m, env, p) == 0.0);

    int long_gaps = 0;
    const auto pts = set.window(-30, 30);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i] - pts[i - 1] != 2)
            continue;
        ++long_gaps;
        CHECK(equivariant_potential(m, env, pts[i - 1] + 1) == doctest::Approx(1.0 / 16));
    }
    CHECK(long_gaps > 5);

    CHECK_THROWS_AS(equivariant_potential(circle_model(0, 1), make_circle(0), 0.0), DomainError);
}

TEST_CASE("strong equivariance on matched patterns")
{
    const AlphaValue phi = AlphaValue::fibonacci();
    const auto m = sturm_model(1.0, 0.5, 1.0);
    const auto env = make_quasicrystal(phi, 0.0);
    const auto& set = std::get<QuasicrystalPoint>(env).set;
    const double rho = static_cast<double>(phi.short_gap() + 1);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0, 1);
    const auto pts = set.window(0, 5000);
    int matched = 0;
    for (std::size_t i = 0; i + 1 < pts.size() && matched < 100; i += 7) {
        const double s = U(rng);
        const double x = pts[i] + s;
        const auto pat = pattern_at(env, x, rho);
        // look for a later translate of the same pattern
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double y = pts[j] + s;
            if (pattern_at(env, y, rho).matches(pat)) {
                CHECK(std::fabs(equivariant_potential(m, env, x) - equivariant_potential(m, env, y)) <= 1e-12);
                ++matched;
                break;
            }
        }
    }
    CHECK(matched == 100);
}

TEST_CASE("chain energy")
{
    const auto zero = circle_model(0.0, 0.0);
    CHECK(chain_energy(zero, make_circle(0), {2.5, 2.5, 2.5, 2.5}) == 0.0);
    CHECK_THROWS_AS(chain_energy(zero, make_circle(0), {1.0}), DomainError);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-3, 3);
    for (const auto& c : catalog()) {
        std::vector<double> x(9);
        for (auto& v : x)
            v = U(rng);
        const double whole = chain_energy(c.m, c.env, x);
        const std::vector<double> left(x.begin(), x.begin() + 5), right(x.begin() + 4, x.end());
        CHECK(whole == doctest::Approx(chain_energy(c.m, c.env, left) + chain_energy(c.m, c.env, right))
                           .epsilon(1e-12));
        const std::vector<double> three(x.begin(), x.begin() + 3);
        CHECK(chain_energy(c.m, c.env, three) ==
              doctest::Approx(energy(c.m, c.env, x[0], x[1]) + energy(c.m, c.env, x[1], x[2])).epsilon(1e-14));
    }
}

TEST_CASE("twist defect")
{
    for (const auto& c : catalog()) {
        if (c.m.spring != SpringKind::Quadratic)
            continue;
        CHECK(twist_defect(c.m, c.env, {-2, 2, -1, 3}, 16) == doctest::Approx(-1).epsilon(1e-6));
    }
    const auto quartic = circle_model(0.0, 1.0, SpringKind::Quartic);
    // on y = x the central difference of the quartic returns -2 h^2 instead of 0
    const double h = 2.0 / (4 * 16);
    const double degenerate = twist_defect(quartic, make_circle(0), {-1, 1, -1, 1}, 16);
    CHECK(degenerate == doctest::Approx(-2 * h * h).epsilon(1e-6));
    // y - x in [1, 2]: the mixed derivative is -3 (y - x)^2 <= -3
    CHECK(twist_defect(quartic, make_circle(0), {0, 0.5, 1.5, 2}, 16) <= -3 + 1e-3);
    CHECK_THROWS_AS(twist_defect(quartic, make_circle(0), {0, 1, 0, 1}, 4), DomainError);
}

TEST_CASE("coercivity probe")
{
    const auto quad = circle_model(0.0, 1.0);
    const double range = 2.0 / (4 * std::numbers::pi * std::numbers::pi);
    const auto probe = coercivity_probe(quad, make_circle(0), {1, 2, 4, 8});
    for (const auto& [R, v] : probe) {
        CHECK(v >= R * R / 2 - 1e-12);
        CHECK(v <= R * R / 2 + range);
    }
    const auto quart = coercivity_probe(circle_model(0.0, 1.0, SpringKind::Quartic), make_circle(0), {2, 4});
    CHECK(quart[1].second == doctest::Approx(64).epsilon(range / 64));

    for (const auto& c : catalog()) {
        const auto p = coercivity_probe(c.m, c.env, {0.5, 1, 2, 4, 8});
        for (std::size_t i = 1; i < p.size(); ++i)
            CHECK(p[i].second >= p[i - 1].second);
    }
    CHECK_THROWS_AS(coercivity_probe(quad, make_circle(0), {1}), DomainError);
}

TEST_CASE("potential slope bound")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(-40, 40);
    for (const auto& c : catalog()) {
        const double bound = potential_slope_bound(c.m);
        for (int i = 0; i < 2000; ++i)
            CHECK(std::fabs(potential_jet(c.m, c.env, U(rng)).d1) <= bound + 1e-12);
    }
}
