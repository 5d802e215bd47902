#pragma once

// Exact arithmetic in t: sparse Laurent polynomials with rational exponents and
// integer coefficients, and factored rational expressions t^q * prod b_i^{k_i}.
//
// Every value is immutable once built. Exponents are stored as integers over
// one common denominator, the least one that makes all of them integral.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "higgsfix/rational.hpp"

namespace higgsfix {

class SparseLaurent {
public:
    struct Term {
        Rational exponent;
        BigInt coeff;
    };
    // Exponent numerator over a caller-chosen denominator.
    using ScaledTerm = std::pair<std::int64_t, BigInt>;

    SparseLaurent() = default;
    explicit SparseLaurent(BigInt c)
    {
        if (c != 0)
            terms_.emplace_back(0, std::move(c));
    }
    explicit SparseLaurent(long c) : SparseLaurent(BigInt(c)) {}

    static SparseLaurent monomial(const Rational& e, BigInt c = 1)
    {
        return from_terms({Term{e, std::move(c)}});
    }

    static SparseLaurent t() { return monomial(Rational(1)); }

    // Duplicate exponents are summed, zero coefficients dropped.
    static SparseLaurent from_terms(std::vector<Term> terms)
    {
        std::int64_t den = 1;
        for (const auto& term : terms)
            den = std::lcm(den, term.exponent.denominator());
        std::vector<ScaledTerm> scaled;
        scaled.reserve(terms.size());
        for (auto& term : terms)
            scaled.emplace_back(term.exponent.numerator() * (den / term.exponent.denominator()),
                                std::move(term.coeff));
        return from_scaled(den, std::move(scaled));
    }

    // Inverse of scaled_terms(): exponents are numerators over `den`.
    static SparseLaurent from_scaled(std::int64_t den, std::vector<ScaledTerm> terms)
    {
        if (den <= 0)
            throw std::invalid_argument("exponent denominator must be positive");
        std::sort(terms.begin(), terms.end(),
                  [](const ScaledTerm& a, const ScaledTerm& b) { return a.first < b.first; });
        SparseLaurent p;
        p.den_ = den;
        for (auto& term : terms) {
            if (!p.terms_.empty() && p.terms_.back().first == term.first)
                p.terms_.back().second += term.second;
            else
                p.terms_.push_back(std::move(term));
            if (p.terms_.back().second == 0)
                p.terms_.pop_back();
        }
        p.reduce_denominator();
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_monomial() const { return terms_.size() == 1; }
    bool is_constant() const { return terms_.size() == 1 && terms_[0].first == 0; }
    std::size_t size() const { return terms_.size(); }

    // Least common denominator of the exponents (1 for the zero polynomial).
    std::int64_t denominator() const { return den_; }

    Rational exponent(std::size_t i) const { return Rational(terms_.at(i).first, den_); }
    const BigInt& coeff(std::size_t i) const { return terms_.at(i).second; }

    std::vector<Term> terms() const
    {
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& [e, c] : terms_)
            out.push_back(Term{Rational(e, den_), c});
        return out;
    }

    // Exponents rescaled to integers over `den`, which must be a multiple of denominator().
    std::vector<ScaledTerm> scaled_terms(std::int64_t den) const
    {
        if (den <= 0 || den % den_ != 0)
            throw std::invalid_argument("rescaling denominator must be a positive multiple of the current one");
        const std::int64_t f = den / den_;
        std::vector<ScaledTerm> out;
        out.reserve(terms_.size());
        for (const auto& [e, c] : terms_)
            out.emplace_back(e * f, c);
        return out;
    }

    Rational low_exponent() const
    {
        if (is_zero())
            throw std::domain_error("zero polynomial has no exponents");
        return Rational(terms_.front().first, den_);
    }
    Rational high_exponent() const
    {
        if (is_zero())
            throw std::domain_error("zero polynomial has no exponents");
        return Rational(terms_.back().first, den_);
    }

    BigInt value_at_one() const
    {
        BigInt s = 0;
        for (const auto& term : terms_)
            s += term.second;
        return s;
    }

    // Multiplication by t^q.
    SparseLaurent shifted(const Rational& q) const
    {
        if (q == 0 || is_zero())
            return *this;
        const std::int64_t den = std::lcm(den_, q.denominator());
        auto scaled = scaled_terms(den);
        const std::int64_t offset = q.numerator() * (den / q.denominator());
        for (auto& term : scaled)
            term.first += offset;
        return from_scaled(den, std::move(scaled));
    }

    // t -> t^k for k >= 1.
    SparseLaurent substitute_power(std::int64_t k) const
    {
        if (k < 1)
            throw std::invalid_argument("substitution power must be positive");
        auto scaled = scaled_terms(den_);
        for (auto& term : scaled)
            term.first *= k;
        return from_scaled(den_, std::move(scaled));
    }

    friend bool operator==(const SparseLaurent& a, const SparseLaurent& b)
    {
        return a.den_ == b.den_ && a.terms_ == b.terms_;
    }

    // Ascending exponents, e.g. "1-t^2+3t^(1/2)".
    std::string to_string() const
    {
        if (is_zero())
            return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            const Rational ex(e, den_);
            BigInt mag = c;
            if (c < 0) {
                os << '-';
                mag = -c;
            } else if (!first) {
                os << '+';
            }
            first = false;
            if (ex == 0) {
                os << mag.get_str();
                continue;
            }
            if (mag != 1)
                os << mag.get_str();
            os << 't';
            if (ex == 1)
                continue;
            if (is_integer(ex))
                os << '^' << ex.numerator();
            else
                os << "^(" << higgsfix::to_string(ex) << ')';
        }
        return os.str();
    }

private:
    void reduce_denominator()
    {
        if (terms_.empty()) {
            den_ = 1;
            return;
        }
        std::int64_t g = den_;
        for (const auto& term : terms_)
            g = std::gcd(g, term.first);
        if (g > 1) {
            den_ /= g;
            for (auto& term : terms_)
                term.first /= g;
        }
    }

    std::int64_t den_ = 1;
    std::vector<ScaledTerm> terms_;
};

inline SparseLaurent operator+(const SparseLaurent& a, const SparseLaurent& b)
{
    const std::int64_t den = std::lcm(a.denominator(), b.denominator());
    auto terms = a.scaled_terms(den);
    auto rhs = b.scaled_terms(den);
    terms.insert(terms.end(), std::make_move_iterator(rhs.begin()), std::make_move_iterator(rhs.end()));
    return SparseLaurent::from_scaled(den, std::move(terms));
}

inline SparseLaurent operator-(const SparseLaurent& a)
{
    auto terms = a.scaled_terms(a.denominator());
    for (auto& term : terms)
        term.second = -term.second;
    return SparseLaurent::from_scaled(a.denominator(), std::move(terms));
}

inline SparseLaurent operator-(const SparseLaurent& a, const SparseLaurent& b) { return a + (-b); }

// [m]_t = 1 + t + ... + t^{m-1}
inline SparseLaurent q_int(std::int64_t m)
{
    if (m < 1)
        throw std::invalid_argument("q_int requires m >= 1");
    std::vector<SparseLaurent::ScaledTerm> terms;
    terms.reserve(static_cast<std::size_t>(m));
    for (std::int64_t j = 0; j < m; ++j)
        terms.emplace_back(j, BigInt(1));
    return SparseLaurent::from_scaled(1, std::move(terms));
}

// 1 - t^m
inline SparseLaurent one_minus_t_pow(std::int64_t m)
{
    if (m < 1)
        throw std::invalid_argument("one_minus_t_pow requires m >= 1");
    return SparseLaurent::from_scaled(1, {{0, BigInt(1)}, {m, BigInt(-1)}});
}

namespace detail {

// Above this many scaled exponent slots, arithmetic switches to ordered maps.
inline constexpr std::int64_t kDenseSpanLimit = std::int64_t{1} << 24;

// A polynomial in s = t^{1/D} with nonzero constant term, kept as its nonzero
// coefficients. `ones_run` marks 1 + s + ... + s^degree.
struct SparseBase {
    std::int64_t degree = 0;
    std::vector<std::pair<std::int64_t, BigInt>> nz;
    bool ones_run = false;
};

inline SparseBase make_base(const SparseLaurent& p, std::int64_t den)
{
    SparseBase b;
    auto scaled = p.scaled_terms(den);
    const std::int64_t low = scaled.front().first;
    bool ones = true;
    std::int64_t expect = 0;
    for (auto& [e, c] : scaled) {
        ones = ones && c == 1 && e - low == expect;
        ++expect;
        b.nz.emplace_back(e - low, std::move(c));
    }
    b.degree = b.nz.back().first;
    b.ones_run = ones && b.degree >= 1;
    return b;
}

// r *= b, coefficients of r indexed from 0.
inline void mul_inplace(std::vector<BigInt>& r, const SparseBase& b)
{
    const auto n = static_cast<std::int64_t>(r.size());
    if (n == 0)
        return;
    if (b.ones_run) {
        // [m] = (1 - s^m) / (1 - s)
        const std::int64_t m = b.degree + 1;
        r.resize(static_cast<std::size_t>(n + m));
        for (std::int64_t i = n + m - 1; i >= m; --i)
            r[i] -= r[i - m];
        for (std::int64_t i = 1; i < n + m; ++i)
            r[i] += r[i - 1];
        r.pop_back();
        return;
    }
    r.resize(static_cast<std::size_t>(n + b.degree));
    BigInt acc;
    for (std::int64_t i = n + b.degree - 1; i >= 0; --i) {
        acc = 0;
        for (const auto& [j, c] : b.nz) {
            const std::int64_t k = i - j;
            if (k >= 0 && k < n)
                acc += c * r[k];
        }
        r[i].swap(acc);
    }
}

// r /= b exactly; false (r unspecified) when b does not divide r over the integers.
inline bool div_inplace(std::vector<BigInt>& r, const SparseBase& b)
{
    const auto n = static_cast<std::int64_t>(r.size());
    if (n == 0)
        return true;
    const std::int64_t dq = n - 1 - b.degree;
    if (dq < 0) {
        if (std::any_of(r.begin(), r.end(), [](const BigInt& z) { return z != 0; }))
            return false;
        r.clear();
        return true;
    }
    if (b.ones_run) {
        // multiply by (1 - s), then divide by (1 - s^m) from the bottom
        const std::int64_t m = b.degree + 1;
        r.resize(static_cast<std::size_t>(n + 1));
        for (std::int64_t i = n; i >= 1; --i)
            r[i] -= r[i - 1];
        for (std::int64_t k = 0; k <= n; ++k) {
            if (k >= m)
                r[k] += r[k - m];
            if (k > dq && r[k] != 0)
                return false;
        }
        r.resize(static_cast<std::size_t>(dq + 1));
        return true;
    }
    const BigInt& b0 = b.nz.front().second;
    BigInt acc;
    for (std::int64_t k = 0; k < n; ++k) {
        acc = r[k];
        for (std::size_t t = 1; t < b.nz.size(); ++t) {
            const std::int64_t i = k - b.nz[t].first;
            if (i < 0)
                break;
            if (i <= dq)
                acc -= b.nz[t].second * r[i];
        }
        if (k <= dq) {
            if (b0 == 1) {
                r[k].swap(acc);
            } else if (b0 == -1) {
                r[k] = -acc;
            } else {
                if (!mpz_divisible_p(acc.get_mpz_t(), b0.get_mpz_t()))
                    return false;
                mpz_divexact(r[k].get_mpz_t(), acc.get_mpz_t(), b0.get_mpz_t());
            }
        } else if (acc != 0) {
            return false;
        }
    }
    r.resize(static_cast<std::size_t>(dq + 1));
    return true;
}

inline std::vector<BigInt> to_dense(const std::vector<SparseLaurent::ScaledTerm>& scaled, std::int64_t low,
                                    std::int64_t span)
{
    std::vector<BigInt> c(static_cast<std::size_t>(span + 1));
    for (const auto& [e, v] : scaled)
        c[static_cast<std::size_t>(e - low)] = v;
    return c;
}

inline SparseLaurent from_dense(std::vector<BigInt>& c, std::int64_t low, std::int64_t den)
{
    std::vector<SparseLaurent::ScaledTerm> terms;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0)
            terms.emplace_back(low + static_cast<std::int64_t>(i), std::move(c[i]));
    return SparseLaurent::from_scaled(den, std::move(terms));
}

inline SparseLaurent mul_sparse(const std::vector<SparseLaurent::ScaledTerm>& a,
                                const std::vector<SparseLaurent::ScaledTerm>& b, std::int64_t den)
{
    std::map<std::int64_t, BigInt> acc;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b)
            acc[ea + eb] += ca * cb;
    std::vector<SparseLaurent::ScaledTerm> terms(acc.begin(), acc.end());
    return SparseLaurent::from_scaled(den, std::move(terms));
}

// Top-down long division on ordered maps; both operands start at exponent 0.
inline std::optional<SparseLaurent> div_sparse(const std::vector<SparseLaurent::ScaledTerm>& a,
                                               const std::vector<SparseLaurent::ScaledTerm>& b, std::int64_t den)
{
    std::map<std::int64_t, BigInt> rem(a.begin(), a.end());
    const auto& [db, lb] = b.back();
    std::vector<SparseLaurent::ScaledTerm> q;
    while (!rem.empty()) {
        auto top = std::prev(rem.end());
        if (top->first < db || !mpz_divisible_p(top->second.get_mpz_t(), lb.get_mpz_t()))
            return std::nullopt;
        BigInt c;
        mpz_divexact(c.get_mpz_t(), top->second.get_mpz_t(), lb.get_mpz_t());
        const std::int64_t shift = top->first - db;
        for (const auto& [e, v] : b) {
            auto& slot = rem[e + shift];
            slot -= c * v;
            if (slot == 0)
                rem.erase(e + shift);
        }
        q.emplace_back(shift, std::move(c));
    }
    return SparseLaurent::from_scaled(den, std::move(q));
}

} // namespace detail

inline SparseLaurent mul(const SparseLaurent& a, const SparseLaurent& b)
{
    if (a.is_zero() || b.is_zero())
        return SparseLaurent();
    const std::int64_t den = std::lcm(a.denominator(), b.denominator());
    auto sa = a.scaled_terms(den);
    auto sb = b.scaled_terms(den);
    if (sa.size() < sb.size())
        std::swap(sa, sb);
    const std::int64_t span_a = sa.back().first - sa.front().first;
    const std::int64_t span_b = sb.back().first - sb.front().first;
    const auto work = static_cast<std::int64_t>(sa.size() * sb.size());
    if (span_a + span_b > detail::kDenseSpanLimit || span_a + span_b > 8 * work + 64)
        return detail::mul_sparse(sa, sb, den);
    const std::int64_t low = sa.front().first + sb.front().first;
    auto dense = detail::to_dense(sa, sa.front().first, span_a);
    SparseLaurent b_shifted = SparseLaurent::from_scaled(den, sb);
    detail::mul_inplace(dense, detail::make_base(b_shifted, den));
    return detail::from_dense(dense, low, den);
}

inline SparseLaurent operator*(const SparseLaurent& a, const SparseLaurent& b) { return mul(a, b); }

// q with a = q*b and q integral, or nullopt. Throws on b = 0.
inline std::optional<SparseLaurent> exact_div(const SparseLaurent& a, const SparseLaurent& b)
{
    if (b.is_zero())
        throw std::domain_error("division by the zero polynomial");
    if (a.is_zero())
        return SparseLaurent();
    const std::int64_t den = std::lcm(a.denominator(), b.denominator());
    auto sa = a.scaled_terms(den);
    auto sb = b.scaled_terms(den);
    const std::int64_t low_a = sa.front().first;
    const std::int64_t low_b = sb.front().first;
    for (auto& term : sa)
        term.first -= low_a;
    for (auto& term : sb)
        term.first -= low_b;
    const std::int64_t span_a = sa.back().first;
    if (span_a < sb.back().first)
        return std::nullopt;
    std::optional<SparseLaurent> q;
    if (span_a > detail::kDenseSpanLimit) {
        q = detail::div_sparse(sa, sb, den);
    } else {
        auto dense = detail::to_dense(sa, 0, span_a);
        if (!detail::div_inplace(dense, detail::make_base(SparseLaurent::from_scaled(den, sb), den)))
            return std::nullopt;
        q = detail::from_dense(dense, 0, den);
    }
    if (!q)
        return std::nullopt;
    return q->shifted(Rational(low_a - low_b, den));
}

// t^prefix * prod base_i^{power_i}. Bases are stored with lowest exponent 0
// (bare powers of t go into the prefix), identical bases are merged, and
// trivial factors are dropped. Constants other than 1 stay as constant bases.
class FactoredExpression {
public:
    struct Factor {
        SparseLaurent base;
        std::int64_t power = 0;
    };

    FactoredExpression() = default;
    FactoredExpression(Rational prefix, std::vector<Factor> factors) : prefix_(prefix)
    {
        for (auto& f : factors)
            absorb(std::move(f.base), f.power);
    }

    static FactoredExpression monomial(const Rational& q) { return FactoredExpression(q, {}); }
    static FactoredExpression power_of(SparseLaurent base, std::int64_t power)
    {
        return FactoredExpression(Rational(0), {Factor{std::move(base), power}});
    }

    const Rational& prefix_exponent() const { return prefix_; }
    const std::vector<Factor>& factors() const { return factors_; }
    bool is_one() const { return prefix_ == 0 && factors_.empty(); }

    FactoredExpression inverse() const
    {
        FactoredExpression r;
        r.prefix_ = -prefix_;
        r.factors_ = factors_;
        for (auto& f : r.factors_)
            f.power = -f.power;
        return r;
    }

    FactoredExpression pow(std::int64_t k) const
    {
        FactoredExpression r;
        if (k == 0)
            return r;
        r.prefix_ = prefix_ * k;
        r.factors_ = factors_;
        for (auto& f : r.factors_)
            f.power *= k;
        return r;
    }

    friend FactoredExpression operator*(const FactoredExpression& a, const FactoredExpression& b)
    {
        FactoredExpression r = a;
        r.prefix_ += b.prefix_;
        for (const auto& f : b.factors_)
            r.absorb(f.base, f.power);
        return r;
    }

    friend FactoredExpression operator/(const FactoredExpression& a, const FactoredExpression& b)
    {
        return a * b.inverse();
    }

    // Structural equality of the normalized form; see equivalent() for value equality.
    friend bool operator==(const FactoredExpression& a, const FactoredExpression& b)
    {
        if (a.prefix_ != b.prefix_ || a.factors_.size() != b.factors_.size())
            return false;
        for (std::size_t i = 0; i < a.factors_.size(); ++i)
            if (!(a.factors_[i].base == b.factors_[i].base) || a.factors_[i].power != b.factors_[i].power)
                return false;
        return true;
    }

    // "t^(7/2)·[3]^5·(1+t)^-1"; [m] stands for 1+t+...+t^{m-1}, m >= 3.
    std::string to_string() const
    {
        std::vector<std::string> parts;
        if (prefix_ != 0) {
            if (prefix_ == 1)
                parts.emplace_back("t");
            else if (is_integer(prefix_))
                parts.push_back("t^" + higgsfix::to_string(prefix_));
            else
                parts.push_back("t^(" + higgsfix::to_string(prefix_) + ")");
        }
        for (const auto& f : factors_) {
            std::string s = render_base(f.base);
            if (f.power != 1)
                s += "^" + std::to_string(f.power);
            parts.push_back(std::move(s));
        }
        if (parts.empty())
            return "1";
        std::string out = parts.front();
        for (std::size_t i = 1; i < parts.size(); ++i)
            out += "·" + parts[i];
        return out;
    }

    // m when `base` is [m]_t with m >= 2, otherwise 0.
    static std::int64_t q_int_index(const SparseLaurent& base)
    {
        if (base.denominator() != 1 || base.size() < 2)
            return 0;
        for (std::size_t i = 0; i < base.size(); ++i)
            if (base.coeff(i) != 1 || base.exponent(i) != Rational(static_cast<std::int64_t>(i)))
                return 0;
        return static_cast<std::int64_t>(base.size());
    }

private:
    static std::string render_base(const SparseLaurent& base)
    {
        const std::int64_t m = q_int_index(base);
        if (m >= 3)
            return "[" + std::to_string(m) + "]";
        return "(" + base.to_string() + ")";
    }

    void absorb(SparseLaurent base, std::int64_t power)
    {
        if (base.is_zero())
            throw std::invalid_argument("factored expression base must be nonzero");
        if (power == 0)
            return;
        const Rational low = base.low_exponent();
        if (low != 0) {
            prefix_ += low * power;
            base = base.shifted(-low);
        }
        if (base.is_constant()) {
            if (base.coeff(0) == 1)
                return;
            if (base.coeff(0) == -1) {
                if (power % 2 == 0)
                    return;
                power = 1;
            }
        }
        for (auto it = factors_.begin(); it != factors_.end(); ++it) {
            if (it->base == base) {
                it->power += power;
                if (base.is_constant() && base.coeff(0) == -1)
                    it->power %= 2;
                if (it->power == 0)
                    factors_.erase(it);
                return;
            }
        }
        auto pos = std::find_if(factors_.begin(), factors_.end(),
                                [&base](const Factor& f) { return base_less(base, f.base); });
        factors_.insert(pos, Factor{std::move(base), power});
    }

    // Canonical factor order: by degree, then term by term.
    static bool base_less(const SparseLaurent& a, const SparseLaurent& b)
    {
        if (a.high_exponent() != b.high_exponent())
            return a.high_exponent() < b.high_exponent();
        if (a.size() != b.size())
            return a.size() < b.size();
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a.exponent(i) != b.exponent(i))
                return a.exponent(i) < b.exponent(i);
            if (a.coeff(i) != b.coeff(i))
                return a.coeff(i) < b.coeff(i);
        }
        return false;
    }

    Rational prefix_{0};
    std::vector<Factor> factors_;
};

struct Expanded {
    Rational prefix;
    SparseLaurent body;
};

struct NotPolynomialBody {
    SparseLaurent failing_base;
    std::int64_t power = 0;
};

using ExpandResult = std::variant<Expanded, NotPolynomialBody>;

// Rewrites B^a C^-b with C | B as (B/C)^k B^(a-k) C^-(b-k), k = min(a, b),
// and symmetrically when B | C. Value-preserving, and each step lowers the
// total degree, so it terminates. Keeps the dense products in expand() small,
// e.g. (1 - t^8) / (1 - t) becomes [8] before anything is multiplied.
inline FactoredExpression cancel_divisible(const FactoredExpression& f)
{
    auto factors = f.factors();
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < factors.size() && !changed; ++i) {
            if (factors[i].power >= 0)
                continue;
            for (std::size_t j = 0; j < factors.size() && !changed; ++j) {
                if (factors[j].power <= 0)
                    continue;
                const auto& neg = factors[i].base;
                const auto& pos = factors[j].base;
                const bool pos_larger = pos.high_exponent() >= neg.high_exponent();
                auto q = pos_larger ? exact_div(pos, neg) : exact_div(neg, pos);
                if (!q)
                    continue;
                const std::int64_t k = std::min(factors[j].power, -factors[i].power);
                factors[j].power -= k;
                factors[i].power += k;
                factors.push_back({std::move(*q), pos_larger ? k : -k});
                factors = FactoredExpression(Rational(0), std::move(factors)).factors();
                changed = true;
            }
        }
    }
    return FactoredExpression(f.prefix_exponent(), std::move(factors));
}

// Cancels divisible pairs, multiplies out the positive powers, then divides by
// each remaining negative-power base in turn. Bases carry no monomial part, so
// the body starts at exponent 0 and the prefix is the expression's prefix.
inline ExpandResult expand(const FactoredExpression& input)
{
    const FactoredExpression f = cancel_divisible(input);
    std::int64_t den = 1;
    std::int64_t degree = 0;
    for (const auto& factor : f.factors()) {
        den = std::lcm(den, factor.base.denominator());
    }
    for (const auto& factor : f.factors())
        if (factor.power > 0)
            degree += factor.power * (factor.base.high_exponent() * den).numerator();
    if (degree > detail::kDenseSpanLimit)
        throw std::length_error("expanded degree exceeds the dense arithmetic limit");

    std::vector<BigInt> body;
    body.reserve(static_cast<std::size_t>(degree + 2));
    body.emplace_back(1);
    for (const auto& factor : f.factors()) {
        if (factor.power <= 0)
            continue;
        const auto base = detail::make_base(factor.base, den);
        for (std::int64_t k = 0; k < factor.power; ++k)
            detail::mul_inplace(body, base);
    }
    for (const auto& factor : f.factors()) {
        if (factor.power >= 0)
            continue;
        const auto base = detail::make_base(factor.base, den);
        for (std::int64_t k = 0; k < -factor.power; ++k)
            if (!detail::div_inplace(body, base))
                return NotPolynomialBody{factor.base, factor.power};
    }
    return Expanded{f.prefix_exponent(), detail::from_dense(body, 0, den)};
}

inline bool is_polynomial(const FactoredExpression& f)
{
    const auto r = expand(f);
    const auto* e = std::get_if<Expanded>(&r);
    if (e == nullptr)
        return false;
    if (!is_integer(e->prefix) || e->prefix < 0)
        return false;
    return e->body.denominator() == 1;
}

// Value at t = 1; nullopt when a pole at 1 survives cancellation between factors.
inline std::optional<BigRational> eval_at_one(const FactoredExpression& f)
{
    std::int64_t order = 0;
    BigRational value = 1;
    for (const auto& factor : f.factors()) {
        // base(s) = (1 - s)^k * rest(s) with t = s^D, so base / (1-t)^k -> rest(1) / D^k
        const std::int64_t den = factor.base.denominator();
        SparseLaurent rest = factor.base;
        const SparseLaurent linear = SparseLaurent::from_scaled(den, {{0, BigInt(1)}, {1, BigInt(-1)}});
        std::int64_t k = 0;
        while (rest.value_at_one() == 0) {
            auto q = exact_div(rest, linear);
            if (!q)
                throw std::logic_error("root at 1 without a (1 - s) factor");
            rest = std::move(*q);
            ++k;
        }
        BigInt dk = 1;
        mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(den), static_cast<unsigned long>(k));
        BigRational v(rest.value_at_one(), dk);
        v.canonicalize();
        order += k * factor.power;
        BigRational vp = 1;
        for (std::int64_t i = 0; i < (factor.power < 0 ? -factor.power : factor.power); ++i)
            vp *= v;
        value *= factor.power < 0 ? BigRational(1) / vp : vp;
    }
    if (order > 0)
        return BigRational(0);
    if (order < 0)
        return std::nullopt;
    value.canonicalize();
    return value;
}

// Value equality of two factored expressions: f / g expands to exactly 1.
inline bool equivalent(const FactoredExpression& f, const FactoredExpression& g)
{
    const auto r = expand(f / g);
    const auto* e = std::get_if<Expanded>(&r);
    return e != nullptr && e->prefix == 0 && e->body == SparseLaurent(1L);
}

} // namespace higgsfix
