#pragma once

// Restriction of the hyperholomorphic bundle Lambda_F of a type (1,...,1)
// fixed point F to a length-two fixed point E, and the combined pairing
// m_{E,F} = m_E m_{F,E} / m_F.
//
// F enters only through its divisor degrees m_0..m_{n-1}. The point c_ij of
// D_i contributes wedge^{n-i} of the fiber of the universal bundle, whose
// determinant is normalized to weight w(i).

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "higgsfix/components.hpp"
#include "higgsfix/exactpoly.hpp"
#include "higgsfix/multiplicity.hpp"

namespace higgsfix {

// How the i = 0 fiber weight is fixed: by the defining relation with w(0)
// (gives n0/n), or set to zero.
enum class W0Mode { Equation, Zero };

inline std::string to_string(W0Mode m) { return m == W0Mode::Equation ? "equation" : "zero"; }

inline W0Mode parse_w0_mode(const std::string& s)
{
    if (s == "equation")
        return W0Mode::Equation;
    if (s == "zero")
        return W0Mode::Zero;
    throw std::invalid_argument("w0 mode must be 'equation' or 'zero', got '" + s + "'");
}

struct ChainPoint {
    std::int64_t n = 2;
    std::int64_t g = 2;
    std::vector<std::int64_t> m;

    friend bool operator==(const ChainPoint&, const ChainPoint&) = default;
};

// m_0 counts points of D_0 and is taken nonnegative like the others.
inline ChainPoint make_chain_point(std::int64_t n, std::int64_t g, std::vector<std::int64_t> m)
{
    if (n < 2)
        throw std::invalid_argument("chain point rank must be at least 2");
    if (g < 2)
        throw std::invalid_argument("chain point genus must be at least 2");
    if (static_cast<std::int64_t>(m.size()) != n)
        throw std::invalid_argument("chain point needs exactly n divisor degrees");
    for (auto mi : m)
        if (mi < 0)
            throw std::invalid_argument("divisor degrees must be nonnegative");
    return ChainPoint{n, g, std::move(m)};
}

// w(i) = C(n-i, 2) - C(n, 2) C(n-1, n-i-1)
inline std::int64_t weight_normalized(std::int64_t i, std::int64_t n)
{
    if (i < 0 || i > n - 1)
        throw std::out_of_range("weight index must satisfy 0 <= i <= n-1");
    return binomial(n - i, 2) - binomial(n, 2) * binomial(n - 1, n - i - 1);
}

// Weight w_i on (F1)_c, from w(i) = -n0 C(n-1, n-1-i) + (n-i) C(n, n-i) w_i.
inline Rational fiber_weight(std::int64_t i, std::int64_t n, std::int64_t n0, W0Mode mode = W0Mode::Equation)
{
    if (i < 0 || i > n - 1)
        throw std::out_of_range("weight index must satisfy 0 <= i <= n-1");
    if (n0 < 1 || n0 > n - 1)
        throw std::out_of_range("n0 must satisfy 1 <= n0 <= n-1");
    if (i == 0 && mode == W0Mode::Zero)
        return Rational(0);
    return Rational(weight_normalized(i, n) + n0 * binomial(n - 1, n - 1 - i), (n - i) * binomial(n, n - i));
}

namespace detail {

inline const ComponentDescriptor& require_pairing(const ComponentDescriptor& e, const ChainPoint& f)
{
    require_valid(e);
    if (e.orientation != Orientation::Standard)
        throw std::invalid_argument("Euler pairings take the Standard-orientation descriptor (n0 >= n1)");
    if (e.n != f.n)
        throw std::invalid_argument("rank mismatch between component and chain point");
    if (e.g != f.g)
        throw std::invalid_argument("genus mismatch between component and chain point");
    if (static_cast<std::int64_t>(f.m.size()) != f.n)
        throw std::invalid_argument("chain point needs exactly n divisor degrees");
    return e;
}

} // namespace detail

// sum_{i < n0} m_i (n0 - i) - sum_i m_i (n - i) w_i
inline Rational epsilon(const ComponentDescriptor& e, const ChainPoint& f, W0Mode mode = W0Mode::Equation)
{
    detail::require_pairing(e, f);
    Rational eps(0);
    for (std::int64_t i = 0; i < e.n; ++i) {
        const std::int64_t mi = f.m[static_cast<std::size_t>(i)];
        if (mi == 0)
            continue;
        if (i < e.n0)
            eps += Rational(mi * (e.n0 - i));
        eps -= Rational(mi * (e.n - i)) * fiber_weight(i, e.n, e.n0, mode);
    }
    return eps;
}

// Character of wedge^{n-i} at a point of D_i, with the t^eps shift removed:
//   i < n1:        sum_{l=0}^{i}   C(n0, l+n0-i) C(n1, n1-l) t^l
//   n1 <= i < n0:  sum_{l=0}^{n1}  C(n0, l+n0-i) C(n1, n1-l) t^l
//   n0 <= i < n:   sum_{l=0}^{n-i} C(n0, l) C(n1, n-i-l) t^l
inline SparseLaurent branch_polynomial(std::int64_t i, std::int64_t n0, std::int64_t n1)
{
    const std::int64_t n = n0 + n1;
    if (i < 0 || i > n - 1)
        throw std::out_of_range("branch index must satisfy 0 <= i <= n-1");
    std::vector<SparseLaurent::ScaledTerm> terms;
    if (i < n0) {
        const std::int64_t top = i < n1 ? i : n1;
        for (std::int64_t l = 0; l <= top; ++l)
            terms.emplace_back(l, BigInt(static_cast<long>(binomial(n0, l + n0 - i) * binomial(n1, n1 - l))));
    } else {
        for (std::int64_t l = 0; l <= n - i; ++l)
            terms.emplace_back(l, BigInt(static_cast<long>(binomial(n0, l) * binomial(n1, n - i - l))));
    }
    return SparseLaurent::from_scaled(1, std::move(terms));
}

inline FactoredExpression m_FE(const ComponentDescriptor& e, const ChainPoint& f, W0Mode mode = W0Mode::Equation)
{
    const Rational eps = epsilon(e, f, mode);
    std::vector<FactoredExpression::Factor> factors;
    for (std::int64_t i = 0; i < e.n; ++i) {
        const std::int64_t mi = f.m[static_cast<std::size_t>(i)];
        if (mi > 0)
            factors.push_back({branch_polynomial(i, e.n0, e.n1), mi});
    }
    return FactoredExpression(eps, std::move(factors));
}

// m_E m_{F,E} / m_F. Polynomiality is left to expand().
inline FactoredExpression m_EF(const ComponentDescriptor& e, const ChainPoint& f, const FactoredExpression& m_F,
                               W0Mode mode = W0Mode::Equation)
{
    return m_E_closed(e) * m_FE(e, f, mode) * m_F.inverse();
}

// True iff w_i <= 0 for 1 <= i <= n-1.
inline bool nonpositivity_check(std::int64_t n, std::int64_t n0)
{
    if (n < 2 || n0 < 1 || n0 > n - 1 || n0 < n - n0)
        throw std::invalid_argument("nonpositivity_check requires 2 <= n and n/2 <= n0 <= n-1");
    for (std::int64_t i = 1; i <= n - 1; ++i)
        if (fiber_weight(i, n, n0) > Rational(0))
            return false;
    return true;
}

// ---- rank four -------------------------------------------------------------

enum class Rank4Type { TwoTwo, ThreeOne };

inline std::string to_string(Rank4Type p) { return p == Rank4Type::TwoTwo ? "2,2" : "3,1"; }

inline std::int64_t rank4_n0(Rank4Type p) { return p == Rank4Type::TwoTwo ? 2 : 3; }

// Exponent of [base_m] in a printed m_{E,F}:
//   delta_coeff * delta + genus_coeff * (g - 1) + sum_i m_coeff[i] * m_i
struct PrintedTerm {
    std::int64_t base_m = 2;
    std::int64_t delta_coeff = 0;
    std::int64_t genus_coeff = 0;
    std::array<std::int64_t, 4> m_coeff{};

    friend bool operator==(const PrintedTerm&, const PrintedTerm&) = default;
};

// The published rank-four closed forms of m_{E,F}:
//   (2,2): [2]^{delta - 2(g-1) + m1 + m2 + m3} [3]^{5g-5-m2} [4]^{7g-7-m1+m2+m3}
//   (3,1): [2]^{delta - (g-1) + m2 + m3}       [3]^{5g-5-m2} [4]^{7g-7-m1+m2+m3}
inline std::vector<PrintedTerm> printed_rank4_terms(Rank4Type p)
{
    if (p == Rank4Type::TwoTwo)
        return {{2, 1, -2, {0, 1, 1, 1}}, {3, 0, 5, {0, 0, -1, 0}}, {4, 0, 7, {0, -1, 1, 1}}};
    return {{2, 1, -1, {0, 0, 1, 1}}, {3, 0, 5, {0, 0, -1, 0}}, {4, 0, 7, {0, -1, 1, 1}}};
}

// Number of nonzero m-coefficients, i.e. the slots a sign variant may flip.
inline std::size_t sign_slot_count(const std::vector<PrintedTerm>& terms)
{
    std::size_t k = 0;
    for (const auto& t : terms)
        for (auto c : t.m_coeff)
            k += c != 0;
    return k;
}

// Flips the sign of the k-th nonzero m-coefficient for each bit k of `mask`.
inline std::vector<PrintedTerm> apply_sign_variant(std::vector<PrintedTerm> terms, std::uint32_t mask)
{
    std::size_t k = 0;
    for (auto& t : terms)
        for (auto& c : t.m_coeff)
            if (c != 0) {
                if (mask & (std::uint32_t{1} << k))
                    c = -c;
                ++k;
            }
    return terms;
}

inline std::string render_printed_terms(const std::vector<PrintedTerm>& terms)
{
    std::string out;
    for (const auto& t : terms) {
        std::string ex;
        auto add = [&ex](std::int64_t c, const std::string& sym) {
            if (c == 0)
                return;
            if (!ex.empty())
                ex += c > 0 ? "+" : "-";
            else if (c < 0)
                ex += "-";
            const std::int64_t a = c < 0 ? -c : c;
            if (a != 1 || sym.empty())
                ex += std::to_string(a);
            ex += sym;
        };
        add(t.delta_coeff, "δ");
        add(t.genus_coeff, "(g-1)");
        for (std::size_t i = 0; i < t.m_coeff.size(); ++i)
            add(t.m_coeff[i], "m" + std::to_string(i));
        out += "[" + std::to_string(t.base_m) + "]^{" + (ex.empty() ? "0" : ex) + "}";
    }
    return out;
}

inline FactoredExpression printed_m_EF_rank4(const std::vector<PrintedTerm>& terms, std::int64_t delta,
                                             std::int64_t g, const std::array<std::int64_t, 4>& m)
{
    std::vector<FactoredExpression::Factor> factors;
    for (const auto& t : terms) {
        std::int64_t k = t.delta_coeff * delta + t.genus_coeff * (g - 1);
        for (std::size_t i = 0; i < 4; ++i)
            k += t.m_coeff[i] * m[i];
        factors.push_back({q_int(t.base_m), k});
    }
    return FactoredExpression(Rational(0), std::move(factors));
}

// Descriptor of the given rank-four type with this delta, in the smallest
// degree d >= 0 that realizes it; nullopt when delta is not admissible.
inline std::optional<ComponentDescriptor> rank4_component(Rank4Type p, std::int64_t delta, std::int64_t g)
{
    const std::int64_t n0 = rank4_n0(p);
    const std::int64_t n1 = 4 - n0;
    if (!admissible_delta_range(n0, n1, g).contains(delta))
        return std::nullopt;
    const auto d = realizing_degree(n0, n1, g, delta);
    if (!d)
        return std::nullopt;
    return component_from_delta(n0, n1, *d, g, delta);
}

inline std::vector<std::int64_t> rank4_valid_deltas(Rank4Type p, std::int64_t g)
{
    std::vector<std::int64_t> out;
    const auto range = admissible_delta_range(rank4_n0(p), 4 - rank4_n0(p), g);
    for (std::int64_t delta = range.first(); delta < range.hi; ++delta)
        if (rank4_component(p, delta, g))
            out.push_back(delta);
    return out;
}

// m_F solved from m_{E,F} = m_E m_{F,E} / m_F with the printed m_{E,F}.
inline FactoredExpression infer_mF_rank4(Rank4Type p, std::int64_t delta, std::int64_t g,
                                         const std::array<std::int64_t, 4>& m,
                                         const std::vector<PrintedTerm>& terms, W0Mode mode = W0Mode::Equation)
{
    const auto e = rank4_component(p, delta, g);
    if (!e)
        throw std::invalid_argument("delta " + std::to_string(delta) + " is not admissible for type (" +
                                    to_string(p) + ") at g = " + std::to_string(g));
    const ChainPoint f = make_chain_point(4, g, {m[0], m[1], m[2], m[3]});
    return m_E_closed(*e) * m_FE(*e, f, mode) / printed_m_EF_rank4(terms, delta, g, m);
}

inline FactoredExpression infer_mF_rank4(Rank4Type p, std::int64_t delta, std::int64_t g,
                                         const std::array<std::int64_t, 4>& m, W0Mode mode = W0Mode::Equation)
{
    return infer_mF_rank4(p, delta, g, m, printed_rank4_terms(p), mode);
}

struct Rank4Witness {
    std::int64_t g = 2;
    std::array<std::int64_t, 4> m{};
    std::int64_t delta_two_two = 0;
    std::int64_t delta_three_one = 0;
    FactoredExpression inferred_two_two;
    FactoredExpression inferred_three_one;
};

struct DeltaDependence {
    Rank4Type type = Rank4Type::TwoTwo;
    std::int64_t g = 2;
    std::array<std::int64_t, 4> m{};
    std::int64_t delta_a = 0;
    std::int64_t delta_b = 0;
};

struct Rank4ConsistencyReport {
    bool delta_independent_two_two = true;
    bool delta_independent_three_one = true;
    std::optional<DeltaDependence> delta_failure;
    std::size_t delta_checks = 0;

    bool consistent = false;
    std::optional<Rank4Witness> witness;
    std::size_t variants_tried = 0;
    std::optional<std::uint32_t> variant_found;
    std::string variant_formula;

    // Extended search, run when no m-sign variant works: the (g-1) term of
    // the [2] exponent in (3,1) is also negated.
    bool genus_flip_consistent_at_zero_chain = false;
    std::optional<std::uint32_t> genus_flip_variant_found;
    std::string genus_flip_formula;
};

namespace detail {

inline std::vector<std::array<std::int64_t, 4>> chain_grid_m123(std::int64_t max_entry)
{
    std::vector<std::array<std::int64_t, 4>> grid;
    for (std::int64_t a = 0; a <= max_entry; ++a)
        for (std::int64_t b = 0; b <= max_entry; ++b)
            for (std::int64_t c = 0; c <= max_entry; ++c)
                grid.push_back({0, a, b, c});
    return grid;
}

// First (g, m) where the two types infer different m_F, or nullopt.
inline std::optional<Rank4Witness> cross_partition_mismatch(const std::vector<std::int64_t>& genera,
                                                            const std::vector<std::array<std::int64_t, 4>>& grid,
                                                            const std::vector<PrintedTerm>& terms_22,
                                                            const std::vector<PrintedTerm>& terms_31, W0Mode mode)
{
    for (auto g : genera) {
        const auto d22 = rank4_valid_deltas(Rank4Type::TwoTwo, g);
        const auto d31 = rank4_valid_deltas(Rank4Type::ThreeOne, g);
        for (const auto& m : grid) {
            auto a = infer_mF_rank4(Rank4Type::TwoTwo, d22.front(), g, m, terms_22, mode);
            auto b = infer_mF_rank4(Rank4Type::ThreeOne, d31.front(), g, m, terms_31, mode);
            if (!equivalent(a, b))
                return Rank4Witness{g, m, d22.front(), d31.front(), std::move(a), std::move(b)};
        }
    }
    return std::nullopt;
}

} // namespace detail

// Checks that the printed rank-four formulas give a delta-independent m_F for
// each type, then compares the two types. On a mismatch every sign pattern of
// the m-terms in the (3,1) formula is tried against the (2,2) formula.
inline Rank4ConsistencyReport rank4_consistency(const std::vector<std::int64_t>& genera, std::int64_t max_entry = 2,
                                                W0Mode mode = W0Mode::Equation)
{
    Rank4ConsistencyReport report;
    const auto grid = detail::chain_grid_m123(max_entry);
    for (auto type : {Rank4Type::TwoTwo, Rank4Type::ThreeOne}) {
        bool ok = true;
        for (auto g : genera) {
            const auto deltas = rank4_valid_deltas(type, g);
            for (const auto& m : grid) {
                const auto reference = infer_mF_rank4(type, deltas.front(), g, m, mode);
                for (std::size_t k = 1; k < deltas.size(); ++k) {
                    ++report.delta_checks;
                    if (!equivalent(reference, infer_mF_rank4(type, deltas[k], g, m, mode))) {
                        if (ok && !report.delta_failure)
                            report.delta_failure = DeltaDependence{type, g, m, deltas.front(), deltas[k]};
                        ok = false;
                    }
                }
            }
        }
        (type == Rank4Type::TwoTwo ? report.delta_independent_two_two : report.delta_independent_three_one) = ok;
    }

    const auto terms_22 = printed_rank4_terms(Rank4Type::TwoTwo);
    const auto terms_31 = printed_rank4_terms(Rank4Type::ThreeOne);
    report.witness = detail::cross_partition_mismatch(genera, grid, terms_22, terms_31, mode);
    report.consistent = !report.witness.has_value();
    report.variants_tried = 1;
    if (report.consistent)
        return report;

    const std::uint32_t variants = std::uint32_t{1} << sign_slot_count(terms_31);
    for (std::uint32_t mask = 1; mask < variants; ++mask) {
        ++report.variants_tried;
        const auto flipped = apply_sign_variant(terms_31, mask);
        if (!detail::cross_partition_mismatch(genera, grid, terms_22, flipped, mode)) {
            report.variant_found = mask;
            report.variant_formula = render_printed_terms(flipped);
            return report;
        }
    }

    auto genus_flipped = terms_31;
    for (auto& t : genus_flipped)
        if (t.base_m == 2)
            t.genus_coeff = -t.genus_coeff;
    report.genus_flip_consistent_at_zero_chain =
        !detail::cross_partition_mismatch(genera, {{0, 0, 0, 0}}, terms_22, genus_flipped, mode);
    for (std::uint32_t mask = 0; mask < variants; ++mask) {
        const auto flipped = apply_sign_variant(genus_flipped, mask);
        if (!detail::cross_partition_mismatch(genera, grid, terms_22, flipped, mode)) {
            report.genus_flip_variant_found = mask;
            report.genus_flip_formula = render_printed_terms(flipped);
            break;
        }
    }
    return report;
}

} // namespace higgsfix
