#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "higgsfix/atlas.hpp"

using namespace higgsfix;

namespace {

std::string run_sweep(SweepConfig cfg)
{
    std::ostringstream out;
    sweep(cfg, out);
    return out.str();
}

std::vector<json> parse_lines(const std::string& s)
{
    std::vector<json> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty())
            out.push_back(json::parse(line));
    return out;
}

// Minimal RFC 4180 reader.
std::vector<std::vector<std::string>> parse_csv(const std::string& s)
{
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (quoted) {
            if (c == '"' && i + 1 < s.size() && s[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(cell);
            cell.clear();
        } else if (c == '\n') {
            row.push_back(cell);
            rows.push_back(row);
            row.clear();
            cell.clear();
        } else {
            cell += c;
        }
    }
    return rows;
}

std::multiset<std::pair<std::string, std::string>> fields(const json& record)
{
    std::multiset<std::pair<std::string, std::string>> out;
    for (const auto& [k, v] : record.items())
        if (!v.is_null())
            out.insert({k, cell_text(v)});
    return out;
}

int cli(const std::string& args)
{
    const std::string cmd = std::string(HIGGSFIX_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string cli_output(const std::string& args)
{
    const std::string path = ::testing::TempDir() + "higgsfix_cli_out.txt";
    const int status = std::system((std::string(HIGGSFIX_CLI) + " " + args + " --out " + path + " 2>/dev/null").c_str());
    EXPECT_EQ(status, 0) << args;
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SweepConfig mixed_config()
{
    SweepConfig cfg;
    cfg.n = {2, 4};
    cfg.d = {0, 2};
    cfg.g = {2, 3};
    cfg.outputs = {Output::Classification, Output::Multiplicity, Output::Euler};
    cfg.chain_grid = {{0, 1}, {0, 1, 1}, {0, 2, 0, 1}};
    return cfg;
}

} // namespace

TEST(Sweep, Examples)
{
    SweepConfig a;
    a.n = {3, 3};
    a.d = {1, 1};
    EXPECT_EQ(parse_lines(run_sweep(a)).size(), 2u);

    SweepConfig b;
    b.n = {2, 2};
    b.d = {1, 1};
    b.outputs = {Output::Multiplicity};
    auto rows = parse_lines(run_sweep(b));
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0]["m_E"], "(1+t)");
    EXPECT_EQ(rows[0]["m_E_expanded"], "1+t");
    EXPECT_EQ(rows[0]["m_E_at_1"], "2");

    SweepConfig c;
    c.outputs = {Output::Euler};
    EXPECT_TRUE(run_sweep(c).empty());
}

TEST(Sweep, OrderAndIndex)
{
    auto rows = parse_lines(run_sweep(mixed_config()));
    ASSERT_FALSE(rows.empty());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i]["index"], i);
        if (i == 0)
            continue;
        auto key = [](const json& r) {
            return std::make_tuple(r["n"].get<std::int64_t>(), r["d"].get<std::int64_t>(),
                                   r["g"].get<std::int64_t>(), r["n0"].get<std::int64_t>(),
                                   r["delta"].get<std::int64_t>());
        };
        EXPECT_LE(key(rows[i - 1]), key(rows[i]));
    }
}

TEST(Sweep, DeterministicAcrossWorkerCounts)
{
    auto cfg = mixed_config();
    cfg.workers = 1;
    const auto serial = run_sweep(cfg);
    cfg.workers = 4;
    EXPECT_EQ(serial, run_sweep(cfg));
    EXPECT_EQ(serial, run_sweep(cfg));
    cfg.format = Format::Csv;
    EXPECT_EQ(run_sweep(cfg), run_sweep(cfg));
}

TEST(Sweep, CsvAndJsonLinesCarryTheSameFields)
{
    auto cfg = mixed_config();
    const auto lines = parse_lines(run_sweep(cfg));
    cfg.format = Format::Csv;
    const auto table = parse_csv(run_sweep(cfg));
    ASSERT_EQ(table.size(), lines.size() + 1);
    const auto& header = table[0];
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::multiset<std::pair<std::string, std::string>> csv_fields;
        for (std::size_t k = 0; k < header.size(); ++k)
            if (!table[i + 1][k].empty())
                csv_fields.insert({header[k], table[i + 1][k]});
        EXPECT_EQ(csv_fields, fields(lines[i])) << "record " << i;
    }
}

TEST(Sweep, MarkdownHasOneRowPerRecord)
{
    auto cfg = mixed_config();
    const auto n = parse_lines(run_sweep(cfg)).size();
    cfg.format = Format::Markdown;
    const auto md = run_sweep(cfg);
    EXPECT_EQ(static_cast<std::size_t>(std::count(md.begin(), md.end(), '\n')), n + 2);
}

TEST(Sweep, Resume)
{
    auto cfg = mixed_config();
    const auto full = parse_lines(run_sweep(cfg));
    cfg.resume_from = 7;
    const auto tail = parse_lines(run_sweep(cfg));
    ASSERT_EQ(tail.size(), full.size() - 7);
    for (std::size_t i = 0; i < tail.size(); ++i)
        EXPECT_EQ(tail[i], full[i + 7]);
}

TEST(Sweep, IoErrorReportsLastIndex)
{
    std::ostringstream out;
    out.setstate(std::ios::badbit);
    try {
        sweep(mixed_config(), out);
        FAIL() << "expected SweepIoError";
    } catch (const SweepIoError& e) {
        EXPECT_FALSE(e.last_completed.has_value());
    }
}

TEST(Sweep, RejectsBadConfig)
{
    SweepConfig cfg;
    cfg.g = {1, 3};
    EXPECT_THROW(sweep_cells(cfg), std::invalid_argument);
    cfg.g = {3, 2};
    EXPECT_THROW(sweep_cells(cfg), std::invalid_argument);
}

TEST(Records, ExpansionCap)
{
    auto c = enumerate_components(4, 0, 3).back();
    auto capped = multiplicity_fields(c, 5);
    EXPECT_TRUE(capped["m_E_expanded"].is_null());
    auto full = multiplicity_fields(c, kDefaultExpansionCap);
    EXPECT_TRUE(full["m_E_expanded"].is_string());
}

TEST(Records, BigIntegersAreStrings)
{
    auto c = enumerate_components(6, 0, 4).back();
    auto row = multiplicity_fields(c, kDefaultExpansionCap);
    ASSERT_TRUE(row["m_E_at_1"].is_string());
    EXPECT_GT(row["m_E_at_1"].get<std::string>().size(), 19u);
}

TEST(Json, RoundTrips)
{
    FactoredExpression f(Rational(7, 3), {{q_int(3), 5},
                                         {q_int(2), -2},
                                         {SparseLaurent::from_terms({{Rational(0), BigInt(2)},
                                                                     {Rational(1, 2), BigInt("123456789012345678901234567890")}}),
                                          1}});
    const auto j = to_json(f);
    EXPECT_EQ(j["prefix"], "7/3");
    EXPECT_EQ(factored_from_json(json::parse(j.dump())), f);

    auto c = make_component(1, 2, 3, -2, 3);
    const auto cj = to_json(c);
    EXPECT_EQ(cj["tau"], to_string(c.tau));
    EXPECT_EQ(component_from_json(cj), c);

    auto p = make_chain_point(4, 2, {0, 1, 2, 0});
    EXPECT_EQ(to_json(p).dump(), R"({"n":4,"g":2,"m":[0,1,2,0]})");
    EXPECT_EQ(chain_point_from_json(to_json(p)), p);

    EXPECT_THROW(factored_from_json(json::parse(R"({"factors":[[[],1]]})")), std::invalid_argument);
    EXPECT_THROW(factored_from_json(json::parse(R"({"prefix":"1"})")), std::invalid_argument);
}

TEST(Json, ClassificationRecord)
{
    auto r = classify(enumerate_components(3, 1, 2).back());
    auto j = to_json(r);
    EXPECT_EQ(j["wobbly_status"]["kind"], "wobbly_iff_non_polynomial");
    EXPECT_TRUE(j["wobbly_status"]["resolved"].get<bool>());
    EXPECT_FALSE(j["provenance"].get<std::string>().empty());
}

TEST(Json, ConsistencyReport)
{
    auto j = to_json(rank4_consistency({2}, 1));
    ASSERT_TRUE(j["status"] == "consistent" || j["status"] == "discrepancy");
    EXPECT_TRUE(j.contains("witness"));
    EXPECT_TRUE(j.contains("variant_found"));
    if (j["status"] == "discrepancy" && j["variant_found"].is_null()) {
        ASSERT_TRUE(j.contains("extended_search"));
        EXPECT_TRUE(j["extended_search"]["negated_genus_term_consistent_at_zero_chain"].is_boolean());
    }
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(cli("component --n0 2 --n1 1 --g 2 --delta 2"), 0);
    EXPECT_EQ(cli("component --n0 2 --n1 1 --g 2 --delta 9"), 1);
    EXPECT_EQ(cli("component --n0 2 --n1 1 --g 1 --delta 2"), 1);
    EXPECT_EQ(cli("enumerate --n 3 --d 1 --g 2 --format csv"), 0);
    EXPECT_EQ(cli("enumerate --n 3 --d 1"), 1);
    EXPECT_EQ(cli("multiplicity --n 4 --d 0 --g 2 --format md"), 0);
    EXPECT_EQ(cli("euler-pairing --n0 3 --n1 1 --g 2 --delta 3 --chain 0,1,0,0"), 0);
    EXPECT_EQ(cli("euler-pairing --n0 3 --n1 1 --g 2 --delta 3 --chain 0,1,0"), 1);
    EXPECT_EQ(cli("euler-pairing --n0 3 --n1 1 --g 2 --delta 3 --chain 0,1,0,0 --w0-mode other"), 1);
    EXPECT_EQ(cli("sweep --n 2..3 --d 0..1 --g 2 --outputs classification,multiplicity"), 0);
    EXPECT_EQ(cli("sweep --n 2 --g 1"), 1);
    EXPECT_EQ(cli("nonsense"), 1);
    EXPECT_EQ(cli("--help"), 0);
}

TEST(Cli, EulerPairingOutput)
{
    const auto out = cli_output("euler-pairing --n0 3 --n1 1 --g 2 --delta 3 --chain 0,1,0,0");
    const auto j = json::parse(out);
    EXPECT_EQ(j["epsilon"], "7/2");
    EXPECT_EQ(j["m_FE_at_1"], "4");
}

TEST(Cli, UserSuppliedMF)
{
    const std::string path = ::testing::TempDir() + "higgsfix_mf.json";
    {
        std::ofstream f(path);
        f << to_json(FactoredExpression::power_of(q_int(2), -5)).dump();
    }
    const auto out = cli_output("euler-pairing --n0 3 --n1 1 --g 2 --delta 3 --chain 0,0,0,0 --mf " + path);
    const auto j = json::parse(out);
    EXPECT_EQ(j["m_F"], "(1+t)^-5");
    EXPECT_TRUE(j.contains("m_EF"));
}

TEST(Cli, Rank4Consistency)
{
    const auto out = cli_output("euler-pairing --rank4-consistency --g 2 --rank4-max-entry 1");
    const auto j = json::parse(out);
    EXPECT_TRUE(j["delta_independent"]["2,2"].get<bool>());
    EXPECT_TRUE(j["delta_independent"]["3,1"].get<bool>());
}
