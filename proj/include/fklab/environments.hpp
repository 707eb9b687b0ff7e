#pragma once

#include "fklab/alpha.hpp"

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

namespace fklab {

/// Absolute tolerance for comparing point positions of patterns.
inline constexpr double kPatternTolerance = 1e-9;
/// Hard cap on the length of any materialized window.
inline constexpr double kMaxWindowLength = 1e7;

/// Exact translation parameter of a Beatty point set, in 64.64 fixed point.
///
/// Translating by a double t adds round(t * 2^64) ticks; for |t| >= 2^-12
/// that conversion is exact, so translations compose associatively.
class HullOffset {
public:
    HullOffset() = default;
    static HullOffset from_double(double t);

    HullOffset operator+(HullOffset o) const { return raw(ticks_ + o.ticks_); }
    HullOffset operator-(HullOffset o) const { return raw(ticks_ - o.ticks_); }
    HullOffset operator-() const { return raw(-ticks_); }

    /// floor of the offset as an integer.
    std::int64_t floor() const { return static_cast<std::int64_t>(ticks_ >> 64); }
    /// offset - n for an integer n, rounded once to double.
    double minus_integer(std::int64_t n) const;
    double to_double() const { return minus_integer(0); }

    friend bool operator==(HullOffset, HullOffset) = default;

private:
    static HullOffset raw(__int128 t)
    {
        HullOffset h;
        h.ticks_ = t;
        return h;
    }
    __int128 ticks_ = 0;
};

/// The Beatty set omega(alpha) = { n : floor(n a) - floor((n-1) a) = 1 }
/// shifted by -offset, i.e. the point set { n - offset }.
struct PointSet {
    AlphaValue alpha;
    HullOffset offset;

    /// Sorted points of the set inside [lo, hi].
    std::vector<double> window(double lo, double hi) const;
    /// Consecutive points p <= x < q around x, together with the gap q - p.
    struct Cell {
        double left;
        double right;
        std::int64_t gap;
        double from_left;   ///< x - left, computed exactly from the offset
    };
    Cell locate(double x) const;
};

struct CirclePoint {
    double phase = 0.0;
};
struct TorusPoint {
    double phase1 = 0.0;
    double phase2 = 0.0;
};
struct QuasicrystalPoint {
    PointSet set;
};

/// A point of one of the three hulls: circle, torus with slope sqrt(2), or the
/// translation orbit of a Beatty quasicrystal.
using EnvPoint = std::variant<CirclePoint, TorusPoint, QuasicrystalPoint>;

EnvPoint make_circle(double phase);
EnvPoint make_torus(double phase1, double phase2);
EnvPoint make_quasicrystal(const AlphaValue& alpha, double offset = 0.0);

/// Equality after normalization: exact for quasicrystal offsets, phases mod 1
/// within `tol` for circle and torus.
bool same_env(const EnvPoint& a, const EnvPoint& b, double tol = 1e-12);

/// A recentered finite patch: points of a set within a closed ball.
struct Pattern {
    double radius = 0.0;
    std::vector<double> points;

    bool matches(const Pattern& other, double tol = kPatternTolerance) const;
};

/// Cylinder set of environments sharing an anchor pattern on the closed ball of
/// radius `radius` around the origin.
struct CylinderSpec {
    Pattern anchor;
    double radius = 0.0;

    static CylinderSpec from_pattern(Pattern p);
};

/// Beatty indices n in [lo, hi], found with exact integer floors.
std::vector<std::int64_t> beatty_points(const AlphaValue& alpha, double lo, double hi);

/// The flow tau_t: circle phase + t, torus (w1 + t, w2 + t sqrt 2), quasicrystal
/// set translated by -t.
EnvPoint translate_env(const EnvPoint& env, double t);

Pattern pattern_at(const EnvPoint& env, double x, double radius);

/// Upper approximation of the hull metric D over the ladder r = 1, 2, 4, ...,
/// r_max with translate candidates taken from point alignments.
double hull_distance(const EnvPoint& a, const EnvPoint& b, double r_max);

/// All t in [t_lo, t_hi] with translate_env(env, t) inside the cylinder.
std::vector<double> return_times(const EnvPoint& env, const CylinderSpec& section, double t_lo, double t_hi);

/// Number of return times in the open ball B_T(0) divided by 2T.
double transverse_frequency(const EnvPoint& env, const CylinderSpec& section, double T);

const PointSet& require_quasicrystal(const EnvPoint& env, const char* who);

} // namespace fklab
