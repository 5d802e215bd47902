#pragma once

// Wobbliness classification of length-two fixed-point components.
//
//   n >= 4, (n0, n1) != (2, 2): wobbly; case I when delta < 3 n1 (n0 - n1)(g - 1)
//   (2, 2):                     wobbly (case II) for g > 2, not decided for g = 2
//   n = 3:                      wobbly iff m_E(t) is not a polynomial
//   n = 2:                      not decided here

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "higgsfix/components.hpp"
#include "higgsfix/multiplicity.hpp"

namespace higgsfix {

enum class WobblyCase { CaseI, CaseII };

inline std::string to_string(WobblyCase c) { return c == WobblyCase::CaseI ? "I" : "II"; }

struct Wobbly {
    WobblyCase which = WobblyCase::CaseI;
};

// `resolved` is the wobbliness verdict, i.e. m_E(t) is not a polynomial.
struct WobblyIffNonPolynomial {
    bool resolved = false;
};

struct OutOfScope {
    std::string reason;
};

using WobblyStatus = std::variant<Wobbly, WobblyIffNonPolynomial, OutOfScope>;

struct ClassificationRecord {
    ComponentDescriptor descriptor;
    std::int64_t dim_fixed = 0;
    std::int64_t dim_z = 0;
    std::int64_t generic_h0 = 0;
    bool in_wobbly_divisor_range = false;
    WobblyStatus wobbly_status;
    std::optional<std::vector<std::int64_t>> wobbly_type_hint;
    std::string provenance;
};

namespace provenance {
inline constexpr const char* kLengthTwoCaseI =
    "length-two wobbliness theorem, case I (delta < 3 n1 (n0 - n1)(g - 1)): order-three Higgs field in the "
    "downward flow";
inline constexpr const char* kLengthTwoCaseII =
    "length-two wobbliness theorem, case II (delta >= 3 n1 (n0 - n1)(g - 1)): order-four Higgs field in the "
    "downward flow; wobbly type hint from the limit-at-infinity remark";
inline constexpr const char* kTwoTwoHighGenus = "length-two wobbliness theorem, (2,2) clause for g > 2, case II";
inline constexpr const char* kTwoTwoGenusTwo = "g=2 not covered by the length-two wobbliness theorem for type (2,2)";
inline constexpr const char* kRankThree =
    "rank-3 remark: for types (2,1)/(1,2) wobbliness is equivalent to non-polynomiality of m_E(t) "
    "(companion rank-3 result, cited not proven here)";
inline constexpr const char* kRankTwo = "rank-two (1,1) classification not in this framework";
} // namespace provenance

inline ClassificationRecord classify(const ComponentDescriptor& c)
{
    ClassificationRecord r;
    r.descriptor = c;
    r.dim_fixed = dim_fixed(c);
    r.dim_z = dim_z(c);
    r.generic_h0 = generic_h0(c);
    r.in_wobbly_divisor_range = wobbly_divisor_range(c);

    const auto s = c.starred();
    if (s.n == 2) {
        r.wobbly_status = OutOfScope{provenance::kRankTwo};
        r.provenance = provenance::kRankTwo;
    } else if (s.n == 3) {
        r.wobbly_status = WobblyIffNonPolynomial{!is_polynomial(m_E_closed(s))};
        r.provenance = provenance::kRankThree;
    } else if (s.n0 == 2 && s.n1 == 2) {
        if (s.g == 2) {
            r.wobbly_status = OutOfScope{provenance::kTwoTwoGenusTwo};
            r.provenance = provenance::kTwoTwoGenusTwo;
        } else {
            r.wobbly_status = Wobbly{WobblyCase::CaseII};
            r.wobbly_type_hint = std::vector<std::int64_t>{1, 1, 1, 1};
            r.provenance = provenance::kTwoTwoHighGenus;
        }
    } else if (s.delta < 3 * s.n1 * (s.n0 - s.n1) * (s.g - 1)) {
        r.wobbly_status = Wobbly{WobblyCase::CaseI};
        r.provenance = provenance::kLengthTwoCaseI;
    } else {
        r.wobbly_status = Wobbly{WobblyCase::CaseII};
        std::vector<std::int64_t> hint;
        for (std::int64_t part : {s.n0 - 1, s.n1 - 1, std::int64_t{1}, std::int64_t{1}})
            if (part > 0)
                hint.push_back(part);
        r.wobbly_type_hint = std::move(hint);
        r.provenance = provenance::kLengthTwoCaseII;
    }
    return r;
}

} // namespace higgsfix
