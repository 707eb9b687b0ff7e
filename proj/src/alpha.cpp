#include "fklab/alpha.hpp"

#include "fklab/errors.hpp"

#include <cmath>
#include <limits>
#include <regex>

namespace fklab {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::int64_t kMaxIndex = std::int64_t{1} << 40;

u128 isqrt(u128 v)
{
    u128 x = static_cast<u128>(std::sqrt(static_cast<long double>(v)));
    while (x * x > v)
        --x;
    while ((x + 1) * (x + 1) <= v)
        ++x;
    return x;
}

bool is_perfect_square(std::int64_t d)
{
    if (d < 0)
        return false;
    const u128 r = isqrt(static_cast<u128>(d));
    return r * r == static_cast<u128>(d);
}

i128 floor_div(i128 num, i128 den)
{
    i128 q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0)))
        --q;
    return q;
}

i128 abs128(i128 v) { return v < 0 ? -v : v; }

// floor(b * sqrt(d)) for non-square d.
i128 floor_surd(i128 b, std::int64_t d)
{
    if (b == 0)
        return 0;
    const u128 mag = static_cast<u128>(abs128(b));
    constexpr u128 kLimit = (~u128{0}) >> 2;
    if (mag > kLimit / mag || mag * mag > kLimit / static_cast<u128>(d))
        throw ResourceError("AlphaValue: surd floor exceeds 128-bit range");
    const u128 root = isqrt(mag * mag * static_cast<u128>(d));
    return b > 0 ? static_cast<i128>(root) : -static_cast<i128>(root) - 1;
}

// floor((a + b sqrt(d)) / c) for non-square d, c != 0.
i128 floor_quadratic(i128 a, i128 b, i128 c, std::int64_t d)
{
    if (c < 0) {
        a = -a;
        b = -b;
        c = -c;
    }
    return floor_div(a + floor_surd(b, d), c);
}

} // namespace

AlphaValue AlphaValue::rational(std::int64_t p, std::int64_t q)
{
    if (!(p > 0 && p < q))
        throw DomainError("AlphaValue: rational alpha requires 0 < p < q");
    return AlphaValue(p, 0, q, 0);
}

AlphaValue AlphaValue::quadratic(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
{
    if (d <= 0 || is_perfect_square(d))
        throw DomainError("AlphaValue: d must be a positive non-square");
    if (c == 0 || b == 0)
        throw DomainError("AlphaValue: need b != 0 and c != 0");
    AlphaValue v(a, b, c, d);
    // irrational, so alpha in (0,1) iff floor(alpha) == 0
    if (floor_quadratic(a, b, c, d) != 0)
        throw DomainError("AlphaValue: value must lie in (0,1)");
    return v;
}

AlphaValue AlphaValue::parse(const std::string& text)
{
    static const std::regex rational_re(R"(^\s*(\d+)\s*/\s*(\d+)\s*$)");
    static const std::regex quad_re(
        R"(^\s*\(\s*(-?\d+)?\s*([+-])?\s*(\d+)?\s*\*?\s*(?:sqrt\s*\(\s*(\d+)\s*\)|\xE2\x88\x9A\s*(\d+))\s*\)\s*/\s*(-?\d+)\s*$)");
    std::smatch m;
    try {
        if (std::regex_match(text, m, rational_re))
            return rational(std::stoll(m[1]), std::stoll(m[2]));
        if (std::regex_match(text, m, quad_re)) {
            const std::int64_t a = m[1].matched ? std::stoll(m[1]) : 0;
            std::int64_t b = m[3].matched ? std::stoll(m[3]) : 1;
            if (m[2].matched && m[2] == "-")
                b = -b;
            else if (!m[2].matched && m[1].matched)
                throw DomainError("AlphaValue: missing sign before surd in '" + text + "'");
            const std::int64_t d = std::stoll(m[4].matched ? m[4].str() : m[5].str());
            return quadratic(a, b, std::stoll(m[6]), d);
        }
    } catch (const std::out_of_range&) {
        throw DomainError("AlphaValue: integer out of range in '" + text + "'");
    }
    throw DomainError("AlphaValue: cannot parse '" + text + "' (expected p/q or (a+b*sqrt(d))/c)");
}

double AlphaValue::value() const
{
    if (is_rational())
        return static_cast<double>(a_) / static_cast<double>(c_);
    return (static_cast<double>(a_) + static_cast<double>(b_) * std::sqrt(static_cast<double>(d_)))
        / static_cast<double>(c_);
}

std::int64_t AlphaValue::floor_mul(std::int64_t n) const
{
    if (n > kMaxIndex || n < -kMaxIndex)
        throw ResourceError("AlphaValue: index beyond 2^40");
    if (is_rational())
        return static_cast<std::int64_t>(floor_div(static_cast<i128>(n) * a_, c_));
    return static_cast<std::int64_t>(
        floor_quadratic(static_cast<i128>(n) * a_, static_cast<i128>(n) * b_, c_, d_));
}

std::int64_t AlphaValue::reciprocal_floor() const
{
    if (is_rational())
        return static_cast<std::int64_t>(floor_div(c_, a_));
    // 1/alpha = c (a - b sqrt d) / (a^2 - b^2 d)
    const i128 den = static_cast<i128>(a_) * a_ - static_cast<i128>(b_) * b_ * d_;
    return static_cast<std::int64_t>(
        floor_quadratic(static_cast<i128>(c_) * a_, -static_cast<i128>(c_) * b_, den, d_));
}

std::string AlphaValue::to_string() const
{
    if (is_rational())
        return std::to_string(a_) + "/" + std::to_string(c_);
    return "(" + std::to_string(a_) + (b_ < 0 ? "-" : "+") + std::to_string(b_ < 0 ? -b_ : b_)
        + "*sqrt(" + std::to_string(d_) + "))/" + std::to_string(c_);
}

} // namespace fklab
