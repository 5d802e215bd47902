#pragma once

// Number types shared by every higgsfix module.
//
// Coefficients are arbitrary precision (GMP). Exponents, Toledo invariants and
// fiber weights stay small, so they use a checked 64-bit fraction.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

#include <compare>
#include <gmpxx.h>

namespace higgsfix {

using BigInt = mpz_class;
using BigRational = mpq_class;

// Reduced fraction over 64-bit integers with a positive denominator.
// Arithmetic throws std::overflow_error instead of wrapping.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n) {} // NOLINT: integers are rationals
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d)
    {
        if (d == 0)
            throw std::domain_error("rational with zero denominator");
        normalize();
    }

    constexpr std::int64_t numerator() const { return num_; }
    constexpr std::int64_t denominator() const { return den_; }

    Rational operator-() const { return make(-static_cast<__int128>(num_), den_); }

    friend Rational operator+(const Rational& a, const Rational& b)
    {
        const __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
        return make(n, static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b)
    {
        return make(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b)
    {
        if (b.num_ == 0)
            throw std::domain_error("rational division by zero");
        return make(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    }
    Rational& operator+=(const Rational& b) { return *this = *this + b; }
    Rational& operator-=(const Rational& b) { return *this = *this - b; }
    Rational& operator*=(const Rational& b) { return *this = *this * b; }
    Rational& operator/=(const Rational& b) { return *this = *this / b; }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        const __int128 l = static_cast<__int128>(a.num_) * b.den_;
        const __int128 r = static_cast<__int128>(b.num_) * a.den_;
        return l <=> r;
    }

private:
    static Rational make(__int128 n, __int128 d)
    {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        constexpr __int128 lo = std::numeric_limits<std::int64_t>::min();
        constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
        if (n < lo || n > hi || d > hi)
            throw std::overflow_error("rational arithmetic overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    void normalize() { *this = make(num_, den_); }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline bool is_integer(const Rational& q) { return q.denominator() == 1; }

inline Rational abs(const Rational& q) { return q < 0 ? -q : q; }

// "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& q)
{
    if (q.denominator() == 1)
        return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

inline std::string to_string(const BigInt& z) { return z.get_str(); }

inline std::string to_string(const BigRational& q)
{
    if (q.get_den() == 1)
        return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace detail {

inline std::int64_t parse_int64(std::string_view s)
{
    if (s.empty())
        throw std::invalid_argument("empty integer literal");
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(std::string(s), &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed integer literal '" + std::string(s) + "'");
    }
    if (used != s.size())
        throw std::invalid_argument("malformed integer literal '" + std::string(s) + "'");
    return v;
}

} // namespace detail

// Accepts "p" or "p/q" with q != 0.
inline Rational parse_rational(std::string_view s)
{
    auto slash = s.find('/');
    if (slash == std::string_view::npos)
        return Rational(detail::parse_int64(s));
    auto num = detail::parse_int64(s.substr(0, slash));
    auto den = detail::parse_int64(s.substr(slash + 1));
    if (den == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    return Rational(num, den);
}

inline BigInt parse_bigint(const std::string& s)
{
    BigInt z;
    if (s.empty() || z.set_str(s, 10) != 0)
        throw std::invalid_argument("malformed big integer '" + s + "'");
    return z;
}

inline BigRational to_big(const Rational& q)
{
    BigRational r(BigInt(static_cast<long>(q.numerator())), BigInt(static_cast<long>(q.denominator())));
    r.canonicalize();
    return r;
}

// Binomial coefficient, zero outside 0 <= k <= n.
inline std::int64_t binomial(std::int64_t n, std::int64_t k)
{
    if (n < 0 || k < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

inline std::int64_t pos_mod(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace higgsfix
