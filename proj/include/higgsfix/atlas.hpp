#pragma once

// Batch sweeps over (n, d, g) and the flat record formats behind the CLI.
//
// Every record is a flat JSON object, so json-lines, CSV and Markdown carry
// the same fields. Records are numbered in the deterministic order
// (n, d, g, n0, delta, output, chain) and a sweep can resume from an index.

#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "higgsfix/classify.hpp"
#include "higgsfix/euler.hpp"
#include "higgsfix/json.hpp"
#include "higgsfix/multiplicity.hpp"
#include "higgsfix/workers.hpp"

namespace higgsfix {

enum class Output { Classification, Multiplicity, Euler };
enum class Format { JsonLines, Csv, Markdown };

inline std::string to_string(Output o)
{
    switch (o) {
    case Output::Classification:
        return "classification";
    case Output::Multiplicity:
        return "multiplicity";
    default:
        return "euler";
    }
}

inline Output parse_output(const std::string& s)
{
    if (s == "classification")
        return Output::Classification;
    if (s == "multiplicity")
        return Output::Multiplicity;
    if (s == "euler")
        return Output::Euler;
    throw std::invalid_argument("unknown output '" + s + "' (classification, multiplicity, euler)");
}

inline Format parse_format(const std::string& s)
{
    if (s == "json" || s == "jsonl" || s == "json-lines")
        return Format::JsonLines;
    if (s == "csv")
        return Format::Csv;
    if (s == "md" || s == "markdown")
        return Format::Markdown;
    throw std::invalid_argument("unknown format '" + s + "' (json, csv, md)");
}

struct IntRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0; // inclusive
};

// "5" or "2..8"
inline IntRange parse_range(const std::string& s)
{
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
        const auto v = detail::parse_int64(s);
        return {v, v};
    }
    return {detail::parse_int64(s.substr(0, dots)), detail::parse_int64(s.substr(dots + 2))};
}

struct SweepConfig {
    IntRange n{2, 2};
    IntRange d{0, 0};
    IntRange g{2, 2};
    std::vector<Output> outputs{Output::Classification};
    // m-vectors for euler records; applied to components of matching rank.
    std::vector<std::vector<std::int64_t>> chain_grid;
    Format format = Format::JsonLines;
    W0Mode w0_mode = W0Mode::Equation;
    std::size_t max_terms = kDefaultExpansionCap;
    std::size_t resume_from = 0;
    unsigned workers = 0;
};

inline void validate(const SweepConfig& cfg)
{
    if (cfg.g.lo < 2)
        throw std::invalid_argument("genus range must lie in [2, inf)");
    if (cfg.n.lo < 2)
        throw std::invalid_argument("rank range must lie in [2, inf)");
    if (cfg.n.lo > cfg.n.hi || cfg.d.lo > cfg.d.hi || cfg.g.lo > cfg.g.hi)
        throw std::invalid_argument("ranges must be nonempty (lo <= hi)");
    if (cfg.outputs.empty())
        throw std::invalid_argument("at least one output is required");
    for (const auto& m : cfg.chain_grid)
        for (auto x : m)
            if (x < 0)
                throw std::invalid_argument("divisor degrees must be nonnegative");
}

// ---- flat records ----------------------------------------------------------

inline json component_fields(const ComponentDescriptor& c) { return to_json(c); }

inline json classification_fields(const ComponentDescriptor& c)
{
    const auto r = classify(c);
    json j = component_fields(c);
    j["dim_fixed"] = r.dim_fixed;
    j["dim_z"] = r.dim_z;
    j["generic_h0"] = r.generic_h0;
    j["in_wobbly_divisor_range"] = r.in_wobbly_divisor_range;
    j["toledo_bound"] = toledo_bound_check(c);
    const auto status = to_json(r.wobbly_status);
    j["wobbly_status"] = status.at("kind");
    j["wobbly_case"] = status.contains("case") ? status.at("case") : json(nullptr);
    j["wobbly_resolved"] = status.contains("resolved") ? status.at("resolved") : json(nullptr);
    j["out_of_scope_reason"] = status.contains("reason") ? status.at("reason") : json(nullptr);
    if (r.wobbly_type_hint) {
        std::string hint;
        for (auto p : *r.wobbly_type_hint)
            hint += (hint.empty() ? "" : ",") + std::to_string(p);
        j["wobbly_type_hint"] = "(" + hint + ")";
    } else {
        j["wobbly_type_hint"] = nullptr;
    }
    j["provenance"] = r.provenance;
    return j;
}

inline json multiplicity_fields(const ComponentDescriptor& c, std::size_t max_terms)
{
    const auto row = multiplicity_row(c);
    json j = component_fields(c);
    const json m = to_json(row, max_terms);
    for (const char* key : {"e_exponent", "m_E", "m_E_expanded", "polynomial", "m_E_at_1"})
        j[key] = m.at(key);
    j["polynomial_analytic"] = is_mult_polynomial_analytic(c);
    return j;
}

// Pairings take the Standard-orientation representative.
inline json euler_fields(const ComponentDescriptor& c, const ChainPoint& f, W0Mode mode, std::size_t max_terms,
                         const std::optional<FactoredExpression>& m_F = std::nullopt)
{
    const auto s = c.starred();
    json j = component_fields(c);
    std::string chain;
    for (auto x : f.m)
        chain += (chain.empty() ? "" : ",") + std::to_string(x);
    j["chain_m"] = chain;
    j["w0_mode"] = to_string(mode);
    const auto pairing = m_FE(s, f, mode);
    j["epsilon"] = to_string(pairing.prefix_exponent());
    j["m_FE"] = pairing.to_string();
    const auto expanded = expanded_string(pairing, max_terms);
    j["m_FE_expanded"] = expanded ? json(*expanded) : json(nullptr);
    const auto at_one = eval_at_one(pairing);
    j["m_FE_at_1"] = at_one ? json(to_string(*at_one)) : json(nullptr);
    if (m_F) {
        const auto combined = m_EF(s, f, *m_F, mode);
        j["m_F"] = m_F->to_string();
        j["m_EF"] = combined.to_string();
        const auto e = expanded_string(combined, max_terms);
        j["m_EF_expanded"] = e ? json(*e) : json(nullptr);
        j["m_EF_polynomial"] = is_polynomial(combined);
    }
    return j;
}

// ---- writers ---------------------------------------------------------------

inline std::string cell_text(const json& v)
{
    if (v.is_null())
        return "";
    if (v.is_string())
        return v.get<std::string>();
    return v.dump();
}

inline std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string md_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '|')
            out += '\\';
        out += c == '\n' ? ' ' : c;
    }
    return out;
}

// Column union in first-seen order.
inline std::vector<std::string> union_columns(const std::vector<json>& records)
{
    std::vector<std::string> cols;
    std::set<std::string> seen;
    for (const auto& r : records)
        for (const auto& [key, _] : r.items())
            if (seen.insert(key).second)
                cols.push_back(key);
    return cols;
}

inline void write_records(std::ostream& out, const std::vector<json>& records, Format format)
{
    if (format == Format::JsonLines) {
        for (const auto& r : records)
            out << r.dump() << '\n';
        return;
    }
    const auto cols = union_columns(records);
    if (cols.empty())
        return;
    if (format == Format::Csv) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            out << (i ? "," : "") << csv_escape(cols[i]);
        out << '\n';
        for (const auto& r : records) {
            for (std::size_t i = 0; i < cols.size(); ++i)
                out << (i ? "," : "") << (r.contains(cols[i]) ? csv_escape(cell_text(r.at(cols[i]))) : "");
            out << '\n';
        }
        return;
    }
    out << '|';
    for (const auto& c : cols)
        out << ' ' << md_escape(c) << " |";
    out << "\n|";
    for (std::size_t i = 0; i < cols.size(); ++i)
        out << "---|";
    out << '\n';
    for (const auto& r : records) {
        out << '|';
        for (const auto& c : cols)
            out << ' ' << (r.contains(c) ? md_escape(cell_text(r.at(c))) : "") << " |";
        out << '\n';
    }
}

// ---- sweep -----------------------------------------------------------------

struct SweepIoError : std::runtime_error {
    // Index of the last record fully written, if any.
    std::optional<std::size_t> last_completed;
    SweepIoError(const std::string& what, std::optional<std::size_t> last)
        : std::runtime_error(what), last_completed(last)
    {
    }
};

struct SweepCell {
    ComponentDescriptor component;
    Output output = Output::Classification;
    std::optional<ChainPoint> chain;
};

// All record cells in emission order; cell i becomes record i.
inline std::vector<SweepCell> sweep_cells(const SweepConfig& cfg)
{
    validate(cfg);
    std::vector<SweepCell> cells;
    for (std::int64_t n = cfg.n.lo; n <= cfg.n.hi; ++n)
        for (std::int64_t d = cfg.d.lo; d <= cfg.d.hi; ++d)
            for (std::int64_t g = cfg.g.lo; g <= cfg.g.hi; ++g)
                for (const auto& c : enumerate_components(n, d, g))
                    for (auto output : cfg.outputs) {
                        if (output != Output::Euler) {
                            cells.push_back({c, output, std::nullopt});
                            continue;
                        }
                        for (const auto& m : cfg.chain_grid)
                            if (static_cast<std::int64_t>(m.size()) == n)
                                cells.push_back({c, output, make_chain_point(n, g, m)});
                    }
    return cells;
}

inline json sweep_record(const SweepCell& cell, std::size_t index, const SweepConfig& cfg)
{
    json j;
    j["index"] = index;
    j["output"] = to_string(cell.output);
    json body;
    switch (cell.output) {
    case Output::Classification:
        body = classification_fields(cell.component);
        break;
    case Output::Multiplicity:
        body = multiplicity_fields(cell.component, cfg.max_terms);
        break;
    case Output::Euler:
        body = euler_fields(cell.component, *cell.chain, cfg.w0_mode, cfg.max_terms);
        break;
    }
    for (auto& [key, value] : body.items())
        j[key] = value;
    return j;
}

struct SweepSummary {
    std::size_t records = 0;
    std::optional<std::size_t> last_index;
};

// Streams records in order. Json-lines is written batch by batch; CSV and
// Markdown need the column union and are written once at the end.
inline SweepSummary sweep(const SweepConfig& cfg, std::ostream& out)
{
    const auto cells = sweep_cells(cfg);
    SweepSummary summary;
    std::vector<json> held;
    const std::size_t batch = 256;
    for (std::size_t start = cfg.resume_from; start < cells.size(); start += batch) {
        const std::size_t count = std::min(batch, cells.size() - start);
        auto records = parallel_map<json>(
            count, [&](std::size_t k) { return sweep_record(cells[start + k], start + k, cfg); }, cfg.workers);
        if (cfg.format != Format::JsonLines) {
            for (auto& r : records)
                held.push_back(std::move(r));
            continue;
        }
        for (std::size_t k = 0; k < records.size(); ++k) {
            out << records[k].dump() << '\n';
            if (!out)
                throw SweepIoError("write failed at record " + std::to_string(start + k), summary.last_index);
            summary.last_index = start + k;
            ++summary.records;
        }
        out.flush();
    }
    if (cfg.format != Format::JsonLines) {
        write_records(out, held, cfg.format);
        out.flush();
        if (!out)
            throw SweepIoError("write failed", summary.last_index);
        summary.records = held.size();
        if (!held.empty())
            summary.last_index = cfg.resume_from + held.size() - 1;
    }
    return summary;
}

} // namespace higgsfix
