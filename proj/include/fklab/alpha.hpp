#pragma once

#include <cstdint>
#include <string>

namespace fklab {

/// Frequency parameter of a Beatty sequence, held exactly.
///
/// Either a rational p/q with 0 < p < q, or a quadratic irrational
/// (a + b*sqrt(d)) / c with d > 0 not a perfect square. All floors
/// floor(n * alpha) are computed in 128-bit integer arithmetic, so gap and
/// counting laws of the induced point set hold exactly for |n| <= 2^40.
class AlphaValue {
public:
    static AlphaValue rational(std::int64_t p, std::int64_t q);
    static AlphaValue quadratic(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);
    /// The golden-mean frequency (sqrt(5) - 1) / 2.
    static AlphaValue fibonacci() { return quadratic(-1, 1, 2, 5); }
    /// Parses "p/q" or "(a+b*sqrt(d))/c" (also accepts the UTF-8 radical sign).
    static AlphaValue parse(const std::string& text);

    bool is_rational() const { return d_ == 0; }
    double value() const;

    /// floor(n * alpha), exact.
    std::int64_t floor_mul(std::int64_t n) const;
    /// floor(1 / alpha), exact.
    std::int64_t reciprocal_floor() const;
    /// Shortest gap of the Beatty set; the long gap is one more.
    std::int64_t short_gap() const { return reciprocal_floor(); }
    /// True iff floor(n alpha) - floor((n-1) alpha) == 1.
    bool in_beatty_set(std::int64_t n) const { return floor_mul(n) - floor_mul(n - 1) == 1; }

    std::string to_string() const;

    friend bool operator==(const AlphaValue&, const AlphaValue&) = default;

private:
    AlphaValue(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
        : a_(a), b_(b), c_(c), d_(d) {}

    // value = (a + b sqrt(d)) / c; rational values use d = 0, b = 0.
    std::int64_t a_ = 0;
    std::int64_t b_ = 0;
    std::int64_t c_ = 1;
    std::int64_t d_ = 0;
};

} // namespace fklab
