#pragma once

// Virtual equivariant multiplicity m_E(t) of a length-two fixed point:
//
//   m_E(t) = chi(Sym T+^*) / chi(Sym B^*) = prod_base (1 - t^i)^dim / prod_T+ (1 - t^k)^dim,
//
// both as the closed form (1 + t)^e p(t) and straight from the weight table.

#include <cstdint>
#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "higgsfix/components.hpp"
#include "higgsfix/exactpoly.hpp"

namespace higgsfix {

namespace detail {

// 2 floor(n/2)^2 + floor(n/2)
inline std::int64_t half_rank_term(std::int64_t n)
{
    const std::int64_t h = n / 2;
    return 2 * h * h + h;
}

} // namespace detail

// Exponent of (1 + t) in m_E(t).
inline std::int64_t e_exponent(const ComponentDescriptor& c)
{
    const auto s = detail::require_valid(c).starred();
    return (s.g - 1) * (-3 * s.n0 * s.n1 + detail::half_rank_term(s.n)) + s.delta;
}

// prod over odd m <= n of [m]^{(2m-1)(g-1)} times prod over even m <= n of
// ([m] / (1+t))^{(2m-1)(g-1)}. The m = 1 and m = 2 factors are trivial.
inline FactoredExpression p_poly(std::int64_t n, std::int64_t g)
{
    if (n < 2)
        throw std::invalid_argument("p_poly requires n >= 2");
    if (g < 2)
        throw std::invalid_argument("p_poly requires g >= 2");
    std::vector<FactoredExpression::Factor> factors;
    for (std::int64_t m = 2; m <= n; ++m) {
        const std::int64_t k = (2 * m - 1) * (g - 1);
        factors.push_back({q_int(m), k});
        if (m % 2 == 0)
            factors.push_back({q_int(2), -k});
    }
    return FactoredExpression(Rational(0), std::move(factors));
}

// Closed form from the numeric data alone (n0 >= n1), without the validity
// check; for scans that relax the congruence.
inline FactoredExpression m_E_formal(std::int64_t n0, std::int64_t n1, std::int64_t g, std::int64_t delta)
{
    if (n0 < n1)
        std::swap(n0, n1);
    const std::int64_t n = n0 + n1;
    const std::int64_t e = (g - 1) * (-3 * n0 * n1 + detail::half_rank_term(n)) + delta;
    return FactoredExpression::power_of(q_int(2), e) * p_poly(n, g);
}

inline FactoredExpression m_E_closed(const ComponentDescriptor& c)
{
    const auto s = detail::require_valid(c).starred();
    return m_E_formal(s.n0, s.n1, s.g, s.delta);
}

// Definition-based form, independent of the closed formula.
inline FactoredExpression m_from_weights(const WeightTable& w)
{
    std::vector<FactoredExpression::Factor> factors;
    for (const auto& [weight, dim] : w.base) {
        if (weight < 1 || dim < 0)
            throw std::invalid_argument("malformed Hitchin base weight entry");
        factors.push_back({one_minus_t_pow(weight), dim});
    }
    for (const auto& [weight, dim] : w.t_plus) {
        if (weight < 1 || dim < 0)
            throw std::invalid_argument("malformed T+ weight entry");
        factors.push_back({one_minus_t_pow(weight), -dim});
    }
    return FactoredExpression(Rational(0), std::move(factors));
}

// m_E(t) fails to be a polynomial exactly when
// delta < (3 n0 n1 - 2 floor(n/2)^2 - floor(n/2)) (g - 1).
inline bool is_mult_polynomial_analytic(const ComponentDescriptor& c)
{
    const auto s = detail::require_valid(c).starred();
    return !(s.delta < (3 * s.n0 * s.n1 - detail::half_rank_term(s.n)) * (s.g - 1));
}

// Values of n1 <= n/2 for which some admissible delta gives a non-polynomial
// m_E, i.e. n1 > n - sqrt(n^2 - 2 floor(n/2)^2 - floor(n/2)), compared on squares.
inline std::vector<std::int64_t> detection_partitions(std::int64_t n)
{
    if (n < 2)
        throw std::invalid_argument("detection_partitions requires n >= 2");
    std::vector<std::int64_t> out;
    const std::int64_t radicand = n * n - detail::half_rank_term(n);
    for (std::int64_t n1 = 1; n1 <= n / 2; ++n1)
        if ((n - n1) * (n - n1) < radicand)
            out.push_back(n1);
    return out;
}

struct MultiplicityRow {
    ComponentDescriptor component;
    std::int64_t e_exponent = 0;
    FactoredExpression m_E;
    bool polynomial = false;
    std::optional<BigRational> m_E_at_1;
};

inline MultiplicityRow multiplicity_row(const ComponentDescriptor& c)
{
    MultiplicityRow row;
    row.component = c;
    row.e_exponent = e_exponent(c);
    row.m_E = m_E_closed(c);
    row.polynomial = is_polynomial(row.m_E);
    row.m_E_at_1 = eval_at_one(row.m_E);
    return row;
}

} // namespace higgsfix
