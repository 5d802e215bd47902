#pragma once

// JSON forms of the library types. Big integers and rationals are strings.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "higgsfix/classify.hpp"
#include "higgsfix/euler.hpp"
#include "higgsfix/exactpoly.hpp"
#include "higgsfix/multiplicity.hpp"

namespace higgsfix {

using json = nlohmann::ordered_json;

namespace detail {

inline std::int64_t json_int(const json& j, const char* what)
{
    if (j.is_number_integer())
        return j.get<std::int64_t>();
    if (j.is_string())
        return parse_int64(j.get<std::string>());
    throw std::invalid_argument(std::string("expected an integer for ") + what);
}

} // namespace detail

inline json to_json(const SparseLaurent& p)
{
    json out = json::array();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Rational e = p.exponent(i);
        out.push_back({{"num", std::to_string(e.numerator())},
                       {"den", std::to_string(e.denominator())},
                       {"coeff", to_string(p.coeff(i))}});
    }
    return out;
}

inline SparseLaurent sparse_from_json(const json& j)
{
    if (!j.is_array())
        throw std::invalid_argument("polynomial must be a JSON array of terms");
    std::vector<SparseLaurent::Term> terms;
    for (const auto& t : j) {
        if (!t.is_object() || !t.contains("num") || !t.contains("coeff"))
            throw std::invalid_argument("polynomial term needs 'num' and 'coeff'");
        const std::int64_t num = detail::json_int(t.at("num"), "num");
        const std::int64_t den = t.contains("den") ? detail::json_int(t.at("den"), "den") : 1;
        const auto& c = t.at("coeff");
        BigInt coeff = c.is_string() ? parse_bigint(c.get<std::string>()) : BigInt(static_cast<long>(detail::json_int(c, "coeff")));
        terms.push_back({Rational(num, den), std::move(coeff)});
    }
    return SparseLaurent::from_terms(std::move(terms));
}

inline json to_json(const FactoredExpression& f)
{
    json factors = json::array();
    for (const auto& factor : f.factors())
        factors.push_back(json::array({to_json(factor.base), factor.power}));
    return {{"prefix", to_string(f.prefix_exponent())}, {"factors", std::move(factors)}};
}

inline FactoredExpression factored_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("factors"))
        throw std::invalid_argument("factored expression needs a 'factors' array");
    Rational prefix(0);
    if (j.contains("prefix")) {
        const auto& p = j.at("prefix");
        prefix = p.is_string() ? parse_rational(p.get<std::string>()) : Rational(detail::json_int(p, "prefix"));
    }
    std::vector<FactoredExpression::Factor> factors;
    for (const auto& f : j.at("factors")) {
        if (!f.is_array() || f.size() != 2)
            throw std::invalid_argument("each factor must be [polynomial, power]");
        factors.push_back({sparse_from_json(f[0]), detail::json_int(f[1], "power")});
    }
    return FactoredExpression(prefix, std::move(factors));
}

inline json to_json(const ComponentDescriptor& c)
{
    return {{"n0", c.n0},       {"n1", c.n1},       {"d0", c.d0},
            {"d1", c.d1},       {"g", c.g},         {"n", c.n},
            {"d", c.d},         {"delta", c.delta}, {"tau", to_string(c.tau)},
            {"orientation", to_string(c.orientation)}};
}

inline ComponentDescriptor component_from_json(const json& j)
{
    for (const char* key : {"n0", "n1", "d0", "d1", "g"})
        if (!j.contains(key))
            throw std::invalid_argument(std::string("component is missing '") + key + "'");
    return make_component(detail::json_int(j.at("n0"), "n0"), detail::json_int(j.at("n1"), "n1"),
                          detail::json_int(j.at("d0"), "d0"), detail::json_int(j.at("d1"), "d1"),
                          detail::json_int(j.at("g"), "g"));
}

inline json to_json(const WobblyStatus& s)
{
    if (const auto* w = std::get_if<Wobbly>(&s))
        return {{"kind", "wobbly"}, {"case", to_string(w->which)}};
    if (const auto* r = std::get_if<WobblyIffNonPolynomial>(&s))
        return {{"kind", "wobbly_iff_non_polynomial"}, {"resolved", r->resolved}};
    return {{"kind", "out_of_scope"}, {"reason", std::get<OutOfScope>(s).reason}};
}

inline json to_json(const ClassificationRecord& r)
{
    json j = to_json(r.descriptor);
    j["dim_fixed"] = r.dim_fixed;
    j["dim_z"] = r.dim_z;
    j["generic_h0"] = r.generic_h0;
    j["in_wobbly_divisor_range"] = r.in_wobbly_divisor_range;
    j["wobbly_status"] = to_json(r.wobbly_status);
    j["wobbly_type_hint"] = r.wobbly_type_hint ? json(*r.wobbly_type_hint) : json(nullptr);
    j["provenance"] = r.provenance;
    return j;
}

inline json to_json(const ChainPoint& f) { return {{"n", f.n}, {"g", f.g}, {"m", f.m}}; }

inline ChainPoint chain_point_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("n") || !j.contains("g") || !j.contains("m") || !j.at("m").is_array())
        throw std::invalid_argument("chain point needs 'n', 'g' and an 'm' array");
    std::vector<std::int64_t> m;
    for (const auto& x : j.at("m"))
        m.push_back(detail::json_int(x, "m"));
    return make_chain_point(detail::json_int(j.at("n"), "n"), detail::json_int(j.at("g"), "g"), std::move(m));
}

// Expanded body as a string, or nullopt when it would exceed `max_terms`
// (judged from the degree bound before any arithmetic) or is not a polynomial.
inline std::optional<std::string> expanded_string(const FactoredExpression& f, std::size_t max_terms)
{
    std::int64_t den = 1;
    for (const auto& factor : f.factors())
        den = std::lcm(den, factor.base.denominator());
    std::int64_t degree = 0;
    for (const auto& factor : f.factors())
        if (factor.power > 0)
            degree += factor.power * (factor.base.high_exponent() * Rational(den)).numerator();
    if (degree + 1 > static_cast<std::int64_t>(max_terms))
        return std::nullopt;
    const auto r = expand(f);
    const auto* e = std::get_if<Expanded>(&r);
    if (e == nullptr || e->body.size() > max_terms)
        return std::nullopt;
    if (e->prefix == 0)
        return e->body.to_string();
    return "t^(" + to_string(e->prefix) + ")*(" + e->body.to_string() + ")";
}

inline constexpr std::size_t kDefaultExpansionCap = 10000;

inline json to_json(const MultiplicityRow& row, std::size_t max_terms = kDefaultExpansionCap)
{
    const auto expanded = expanded_string(row.m_E, max_terms);
    return {{"component", to_json(row.component)},
            {"e_exponent", row.e_exponent},
            {"m_E", row.m_E.to_string()},
            {"m_E_expanded", expanded ? json(*expanded) : json(nullptr)},
            {"polynomial", row.polynomial},
            {"m_E_at_1", row.m_E_at_1 ? json(to_string(*row.m_E_at_1)) : json(nullptr)}};
}

inline json to_json(const Rank4ConsistencyReport& r)
{
    json j;
    j["status"] = r.consistent ? "consistent" : "discrepancy";
    j["delta_independent"] = {{"2,2", r.delta_independent_two_two}, {"3,1", r.delta_independent_three_one}};
    j["delta_checks"] = r.delta_checks;
    if (r.delta_failure)
        j["delta_failure"] = {{"partition", to_string(r.delta_failure->type)},
                              {"g", r.delta_failure->g},
                              {"m", r.delta_failure->m},
                              {"delta_a", r.delta_failure->delta_a},
                              {"delta_b", r.delta_failure->delta_b}};
    if (r.witness) {
        const auto& w = *r.witness;
        j["witness"] = {{"g", w.g},
                        {"m", w.m},
                        {"delta_2_2", w.delta_two_two},
                        {"delta_3_1", w.delta_three_one},
                        {"m_F_from_2_2", w.inferred_two_two.to_string()},
                        {"m_F_from_3_1", w.inferred_three_one.to_string()},
                        {"ratio", (w.inferred_two_two / w.inferred_three_one).to_string()}};
    } else {
        j["witness"] = nullptr;
    }
    j["variants_tried"] = r.variants_tried;
    if (r.variant_found)
        j["variant_found"] = {{"mask", *r.variant_found}, {"formula_3_1", r.variant_formula}};
    else
        j["variant_found"] = nullptr;
    if (!r.consistent && !r.variant_found) {
        json ext;
        ext["negated_genus_term_consistent_at_zero_chain"] = r.genus_flip_consistent_at_zero_chain;
        if (r.genus_flip_variant_found)
            ext["variant_found"] = {{"mask", *r.genus_flip_variant_found}, {"formula_3_1", r.genus_flip_formula}};
        else
            ext["variant_found"] = nullptr;
        j["extended_search"] = std::move(ext);
    }
    return j;
}

} // namespace higgsfix
