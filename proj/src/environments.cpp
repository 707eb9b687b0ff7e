#include "fklab/environments.hpp"

#include "fklab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fklab {

namespace {

double wrap01(double v)
{
    double r = v - std::floor(v);
    if (r >= 1.0)
        r = 0.0;
    return r;
}

double circle_gap(double a, double b)
{
    double d = std::fabs(a - b);
    return std::min(d, 1.0 - d);
}

void check_window(double lo, double hi)
{
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw DomainError("window bounds must be finite");
    if (hi - lo > kMaxWindowLength)
        throw ResourceError("window longer than " + std::to_string(kMaxWindowLength));
}

} // namespace

HullOffset HullOffset::from_double(double t)
{
    if (!std::isfinite(t) || std::fabs(t) > 0x1p60)
        throw DomainError("hull offset out of range");
    return raw(static_cast<__int128>(std::nearbyint(std::ldexp(t, 64))));
}

double HullOffset::minus_integer(std::int64_t n) const
{
    const __int128 v = ticks_ - (static_cast<__int128>(n) << 64);
    return std::ldexp(static_cast<double>(v), -64);
}

std::vector<double> PointSet::window(double lo, double hi) const
{
    std::vector<double> pts;
    if (hi < lo)
        return pts;
    check_window(lo, hi);
    const std::int64_t base = offset.floor();
    const double frac = offset.minus_integer(base);
    // points are n - offset; n - offset in [lo, hi] iff n - base in [lo + frac, hi + frac]
    const std::int64_t n_lo = base + static_cast<std::int64_t>(std::floor(lo + frac)) - 1;
    const std::int64_t n_hi = base + static_cast<std::int64_t>(std::floor(hi + frac)) + 1;
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
        if (!alpha.in_beatty_set(n))
            continue;
        const double p = -offset.minus_integer(n);
        if (p >= lo && p <= hi)
            pts.push_back(p);
    }
    return pts;
}

PointSet::Cell PointSet::locate(double x) const
{
    // largest n with n - offset <= x, then the next index of the set
    const HullOffset shifted = offset + HullOffset::from_double(x);
    std::int64_t n = shifted.floor();
    while (!alpha.in_beatty_set(n))
        --n;
    std::int64_t m = n + 1;
    while (!alpha.in_beatty_set(m))
        ++m;
    Cell c;
    c.left = -offset.minus_integer(n);
    c.right = -offset.minus_integer(m);
    c.gap = m - n;
    c.from_left = shifted.minus_integer(n);
    return c;
}

EnvPoint make_circle(double phase) { return CirclePoint{wrap01(phase)}; }

EnvPoint make_torus(double phase1, double phase2) { return TorusPoint{wrap01(phase1), wrap01(phase2)}; }

EnvPoint make_quasicrystal(const AlphaValue& alpha, double offset)
{
    return QuasicrystalPoint{PointSet{alpha, HullOffset::from_double(offset)}};
}

bool same_env(const EnvPoint& a, const EnvPoint& b, double tol)
{
    if (a.index() != b.index())
        return false;
    if (auto* c = std::get_if<CirclePoint>(&a))
        return circle_gap(c->phase, std::get<CirclePoint>(b).phase) <= tol;
    if (auto* t = std::get_if<TorusPoint>(&a)) {
        const auto& u = std::get<TorusPoint>(b);
        return circle_gap(t->phase1, u.phase1) <= tol && circle_gap(t->phase2, u.phase2) <= tol;
    }
    const auto& p = std::get<QuasicrystalPoint>(a).set;
    const auto& q = std::get<QuasicrystalPoint>(b).set;
    return p.alpha == q.alpha && p.offset == q.offset;
}

bool Pattern::matches(const Pattern& other, double tol) const
{
    if (points.size() != other.points.size())
        return false;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (std::fabs(points[i] - other.points[i]) > tol)
            return false;
    return true;
}

CylinderSpec CylinderSpec::from_pattern(Pattern p)
{
    CylinderSpec c;
    c.radius = p.radius;
    c.anchor = std::move(p);
    return c;
}

std::vector<std::int64_t> beatty_points(const AlphaValue& alpha, double lo, double hi)
{
    if (!(lo < hi))
        throw DomainError("beatty_points: need lo < hi");
    check_window(lo, hi);
    std::vector<std::int64_t> out;
    const auto n_lo = static_cast<std::int64_t>(std::ceil(lo));
    const auto n_hi = static_cast<std::int64_t>(std::floor(hi));
    for (std::int64_t n = n_lo; n <= n_hi; ++n)
        if (alpha.in_beatty_set(n))
            out.push_back(n);
    return out;
}

EnvPoint translate_env(const EnvPoint& env, double t)
{
    if (auto* c = std::get_if<CirclePoint>(&env))
        return CirclePoint{wrap01(c->phase + wrap01(t))};
    if (auto* tp = std::get_if<TorusPoint>(&env)) {
        // reduce t first so the sqrt(2) multiple stays small
        const double tr = t - std::floor(t);
        const double shift2 = wrap01(tr * std::sqrt(2.0)) + wrap01(std::floor(t) * std::sqrt(2.0));
        return TorusPoint{wrap01(tp->phase1 + tr), wrap01(tp->phase2 + shift2)};
    }
    const auto& q = std::get<QuasicrystalPoint>(env).set;
    return QuasicrystalPoint{PointSet{q.alpha, q.offset + HullOffset::from_double(t)}};
}

const PointSet& require_quasicrystal(const EnvPoint& env, const char* who)
{
    if (auto* q = std::get_if<QuasicrystalPoint>(&env))
        return q->set;
    throw DomainError(std::string(who) + ": quasicrystal environment required");
}

Pattern pattern_at(const EnvPoint& env, double x, double radius)
{
    require_quasicrystal(env, "pattern_at");
    if (!(radius > 0))
        throw DomainError("pattern_at: radius must be positive");
    const EnvPoint shifted = translate_env(env, x);
    const auto& moved = std::get<QuasicrystalPoint>(shifted).set;
    return Pattern{radius, moved.window(-radius, radius)};
}

double hull_distance(const EnvPoint& a, const EnvPoint& b, double r_max)
{
    const PointSet& pa = require_quasicrystal(a, "hull_distance");
    const PointSet& pb = require_quasicrystal(b, "hull_distance");
    if (!(pa.alpha == pb.alpha))
        throw DomainError("hull_distance: environments have different alpha");
    if (!(r_max >= 1))
        throw DomainError("hull_distance: r_max must be >= 1");

    std::vector<double> ladder;
    for (double r = 1; r < r_max; r *= 2)
        ladder.push_back(r);
    ladder.push_back(r_max);

    double best = 1.0;
    for (double r : ladder) {
        // shifts delta = p - q that line a point of a up with a point of b
        const auto xa = pa.window(-r - 2, r + 2);
        const auto xb = pb.window(-r - 2, r + 2);
        std::vector<double> deltas{0.0};
        std::size_t j0 = 0;
        for (double p : xa) {
            while (j0 < xb.size() && xb[j0] <= p - 2.0 / r)
                ++j0;
            for (std::size_t j = j0; j < xb.size() && xb[j] < p + 2.0 / r; ++j)
                deltas.push_back(p - xb[j]);
        }
        std::sort(deltas.begin(), deltas.end());
        deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
        bool ok = false;
        for (double d : deltas) {
            const double t = d / 2;
            if (std::fabs(t) >= 1.0 / r)
                continue;
            if (pattern_at(a, t, r).matches(pattern_at(b, -t, r))) {
                ok = true;
                break;
            }
        }
        if (ok)
            best = std::min(best, 1.0 / (r + 1));
    }
    return best;
}

std::vector<double> return_times(const EnvPoint& env, const CylinderSpec& section, double t_lo, double t_hi)
{
    const PointSet& ps = require_quasicrystal(env, "return_times");
    std::vector<double> out;
    if (!(t_lo < t_hi))
        return out;
    check_window(t_lo, t_hi);
    if (section.anchor.points.empty())
        throw DomainError("return_times: section anchor pattern is empty");
    // a return at t puts a point p of the set at p - t = anchor[0]
    const double a0 = section.anchor.points.front();
    for (double p : ps.window(t_lo + a0 - 1e-9, t_hi + a0 + 1e-9)) {
        const double t = p - a0;
        if (t < t_lo || t > t_hi)
            continue;
        if (pattern_at(env, t, section.radius).matches(section.anchor))
            out.push_back(t);
    }
    return out;
}

double transverse_frequency(const EnvPoint& env, const CylinderSpec& section, double T)
{
    if (!(T > 0))
        throw DomainError("transverse_frequency: T must be positive");
    std::size_t count = 0;
    for (double t : return_times(env, section, -T, T))
        if (std::fabs(t) < T)
            ++count;
    return static_cast<double>(count) / (2 * T);
}

} // namespace fklab
