#pragma once

// Length-two fixed-point components (F0 + F1, phi : F1 -> F0 K) of the
// C*-action on the Higgs moduli space: discrete invariants, non-emptiness,
// enumeration by delta, dimensions and the T+ / Hitchin-base weight tables.
//
// Every formula is stated for n0 >= n1. A component with n0 < n1 is handled
// through its starred descriptor (ranks swapped, degrees (-d1, -d0)), which
// carries the same delta and tau.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "higgsfix/rational.hpp"

namespace higgsfix {

enum class Orientation { Standard, Dual };

inline std::string to_string(Orientation o) { return o == Orientation::Standard ? "standard" : "dual"; }

struct ComponentDescriptor {
    std::int64_t n0 = 1;
    std::int64_t n1 = 1;
    std::int64_t d0 = 0;
    std::int64_t d1 = 0;
    std::int64_t g = 2;

    std::int64_t n = 2;
    std::int64_t d = 0;
    std::int64_t delta = 0;
    Rational tau;
    Orientation orientation = Orientation::Standard;

    // Standard-orientation representative; *this when already Standard.
    ComponentDescriptor starred() const;

    friend bool operator==(const ComponentDescriptor&, const ComponentDescriptor&) = default;
};

namespace detail {

inline std::int64_t delta_of(std::int64_t n0, std::int64_t n1, std::int64_t d0, std::int64_t d1, std::int64_t g)
{
    return d0 * n1 - d1 * n0 + 2 * n0 * n1 * (g - 1);
}

} // namespace detail

inline ComponentDescriptor make_component(std::int64_t n0, std::int64_t n1, std::int64_t d0, std::int64_t d1,
                                          std::int64_t g)
{
    if (n0 < 1 || n1 < 1)
        throw std::invalid_argument("ranks n0, n1 must be positive");
    if (g < 2)
        throw std::invalid_argument("genus must be at least 2");
    ComponentDescriptor c;
    c.n0 = n0;
    c.n1 = n1;
    c.d0 = d0;
    c.d1 = d1;
    c.g = g;
    c.n = n0 + n1;
    c.d = d0 + d1;
    c.delta = detail::delta_of(n0, n1, d0, d1, g);
    c.tau = Rational(2 * (n1 * d0 - n0 * d1), n0 + n1);
    c.orientation = n0 >= n1 ? Orientation::Standard : Orientation::Dual;
    return c;
}

inline ComponentDescriptor ComponentDescriptor::starred() const
{
    if (orientation == Orientation::Standard)
        return *this;
    return make_component(n1, n0, -d1, -d0, g);
}

// |tau| <= 2 min(n0, n1) (g - 1)
inline bool toledo_bound_check(const ComponentDescriptor& c)
{
    return abs(c.tau) <= Rational(2 * std::min(c.n0, c.n1) * (c.g - 1));
}

// Admissible delta window for a Standard pair (a, b), a >= b: [lo, hi) or (lo, hi).
struct DeltaRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    bool lo_inclusive = true;

    bool contains(std::int64_t delta) const { return (lo_inclusive ? delta >= lo : delta > lo) && delta < hi; }
    std::int64_t first() const { return lo_inclusive ? lo : lo + 1; }
};

inline DeltaRange admissible_delta_range(std::int64_t a, std::int64_t b, std::int64_t g)
{
    if (a < b)
        std::swap(a, b);
    return DeltaRange{b * (a - b) * (g - 1), 2 * a * b * (g - 1), a == b};
}

// delta = -n0 d + 2 n0 n1 (g - 1) (mod n), evaluated on Standard data.
inline bool delta_congruence_holds(std::int64_t n0, std::int64_t n1, std::int64_t d, std::int64_t g,
                                   std::int64_t delta)
{
    const std::int64_t n = n0 + n1;
    return pos_mod(delta + n0 * d - 2 * n0 * n1 * (g - 1), n) == 0;
}

inline bool is_valid(const ComponentDescriptor& c)
{
    const ComponentDescriptor s = c.starred();
    return admissible_delta_range(s.n0, s.n1, s.g).contains(s.delta) &&
           delta_congruence_holds(s.n0, s.n1, s.d, s.g, s.delta);
}

// Descriptor of type (n0, n1) in degree d with the given delta, or throws when
// the congruence makes the degrees non-integral.
inline ComponentDescriptor component_from_delta(std::int64_t n0, std::int64_t n1, std::int64_t d, std::int64_t g,
                                                std::int64_t delta)
{
    if (n0 < 1 || n1 < 1)
        throw std::invalid_argument("ranks n0, n1 must be positive");
    const std::int64_t n = n0 + n1;
    // Standard data (a, b, e) = (n0, n1, d) or the starred (n1, n0, -d).
    const bool dual = n0 < n1;
    const std::int64_t a = dual ? n1 : n0;
    const std::int64_t b = dual ? n0 : n1;
    const std::int64_t e = dual ? -d : d;
    const std::int64_t num = delta + a * e - 2 * a * b * (g - 1);
    if (pos_mod(num, n) != 0)
        throw std::invalid_argument("delta " + std::to_string(delta) + " violates the congruence for type (" +
                                    std::to_string(n0) + "," + std::to_string(n1) + ") and d = " +
                                    std::to_string(d));
    const std::int64_t a_deg = num / n;
    if (!dual)
        return make_component(n0, n1, a_deg, d - a_deg, g);
    // a_deg = d0* = -d1
    return make_component(n0, n1, d + a_deg, -a_deg, g);
}

// All non-empty length-two components in M(n, d) for genus g, sorted by (n0, delta).
inline std::vector<ComponentDescriptor> enumerate_components(std::int64_t n, std::int64_t d, std::int64_t g)
{
    if (n < 2)
        throw std::invalid_argument("rank must be at least 2");
    if (g < 2)
        throw std::invalid_argument("genus must be at least 2");
    std::vector<ComponentDescriptor> out;
    for (std::int64_t n0 = 1; n0 < n; ++n0) {
        const std::int64_t n1 = n - n0;
        const auto range = admissible_delta_range(n0, n1, g);
        const std::int64_t a = std::max(n0, n1);
        const std::int64_t b = std::min(n0, n1);
        const std::int64_t e = n0 >= n1 ? d : -d;
        for (std::int64_t delta = range.first(); delta < range.hi; ++delta) {
            if (!delta_congruence_holds(a, b, e, g, delta))
                continue;
            auto c = component_from_delta(n0, n1, d, g, delta);
            if (c.delta != delta || !is_valid(c))
                throw std::logic_error("degree recovery from delta is inconsistent");
            out.push_back(c);
        }
    }
    return out;
}

// Smallest degree d in [0, n) for which delta satisfies the congruence, if any.
inline std::optional<std::int64_t> realizing_degree(std::int64_t n0, std::int64_t n1, std::int64_t g,
                                                    std::int64_t delta)
{
    const std::int64_t n = n0 + n1;
    for (std::int64_t d = 0; d < n; ++d) {
        const std::int64_t e = n0 >= n1 ? d : -d;
        if (delta_congruence_holds(std::max(n0, n1), std::min(n0, n1), e, g, delta))
            return d;
    }
    return std::nullopt;
}

namespace detail {

inline const ComponentDescriptor& require_valid(const ComponentDescriptor& c)
{
    if (!is_valid(c))
        throw std::invalid_argument("component is not valid (delta outside the admissible range or congruence)");
    return c;
}

} // namespace detail

// (n0^2 + n1^2 - n0 n1)(g - 1) + delta + 1
inline std::int64_t dim_fixed(const ComponentDescriptor& c)
{
    const auto s = detail::require_valid(c).starred();
    return (s.n0 * s.n0 + s.n1 * s.n1 - s.n0 * s.n1) * (s.g - 1) + s.delta + 1;
}

// Dimension of the scheme of pairs (F0, F1) underlying the component.
inline std::int64_t dim_z(const ComponentDescriptor& c)
{
    const auto s = detail::require_valid(c).starred();
    if (s.delta > s.n0 * s.n1 * (s.g - 1))
        return (s.n0 * s.n0 + s.n1 * s.n1) * (s.g - 1) + 2;
    return (s.n0 * s.n0 + s.n1 * s.n1 - s.n0 * s.n1) * (s.g - 1) + s.delta + 1;
}

// h^0(F1^* F0 K) at a general point.
inline std::int64_t generic_h0(const ComponentDescriptor& c)
{
    const auto s = detail::require_valid(c).starred();
    const std::int64_t edge = s.n0 * s.n1 * (s.g - 1);
    return s.delta > edge ? s.delta - edge : 1;
}

// Necessary condition for flowing down to a wobbly divisor; sufficiency is open.
inline bool wobbly_divisor_range(const ComponentDescriptor& c)
{
    const auto s = detail::require_valid(c).starred();
    const std::int64_t lo = s.n1 * (s.n0 - s.n1) * (s.g - 1);
    const bool above = s.n0 > s.n1 ? s.delta > lo : s.delta >= lo;
    return above && s.delta <= s.n0 * s.n1 * (s.g - 1) + 1 && delta_congruence_holds(s.n0, s.n1, s.d, s.g, s.delta);
}

struct WeightDim {
    std::int64_t weight = 0;
    std::int64_t dim = 0;
    friend bool operator==(const WeightDim&, const WeightDim&) = default;
};

struct WeightTable {
    std::vector<WeightDim> t_plus;
    std::vector<WeightDim> base;
    friend bool operator==(const WeightTable&, const WeightTable&) = default;
};

inline std::int64_t total_dim(const std::vector<WeightDim>& entries)
{
    std::int64_t s = 0;
    for (const auto& e : entries)
        s += e.dim;
    return s;
}

// Hitchin base weights: H^0(K) has weight 1 and dimension g, H^0(K^i) weight i
// and dimension (2i - 1)(g - 1).
inline std::vector<WeightDim> hitchin_base_weights(std::int64_t n, std::int64_t g)
{
    std::vector<WeightDim> base{{1, g}};
    for (std::int64_t i = 2; i <= n; ++i)
        base.push_back({i, (2 * i - 1) * (g - 1)});
    return base;
}

inline WeightTable weight_table(const ComponentDescriptor& c)
{
    const auto s = detail::require_valid(c).starred();
    WeightTable w;
    w.t_plus = {{1, (s.n0 * s.n0 + s.n1 * s.n1 - s.n0 * s.n1) * (s.g - 1) + 1 + s.delta},
                {2, -s.delta + 3 * s.n0 * s.n1 * (s.g - 1)}};
    w.base = hitchin_base_weights(s.n, s.g);
    return w;
}

} // namespace higgsfix
