// higgsfix: command-line front end for the length-two fixed-point atlas.
//
// Exit codes: 0 success, 1 invalid input (or output failure), 2 selftest failure.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "higgsfix/acceptance.hpp"
#include "higgsfix/atlas.hpp"

using namespace higgsfix;

namespace {

struct Options {
    std::optional<std::int64_t> n, d, g, n0, n1, delta;
    std::string chain;
    std::string w0_mode = "equation";
    std::string format = "json";
    std::string out;
};

// Writer that is either stdout or the --out file.
class Sink {
public:
    explicit Sink(const std::string& path)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw std::invalid_argument("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<std::int64_t> parse_chain(const std::string& s)
{
    std::vector<std::int64_t> m;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        m.push_back(detail::parse_int64(item));
    if (m.empty())
        throw std::invalid_argument("--chain needs a comma-separated list m0,m1,...");
    return m;
}

std::int64_t need(const std::optional<std::int64_t>& v, const char* flag)
{
    if (!v)
        throw std::invalid_argument(std::string("missing required flag ") + flag);
    return *v;
}

// Resolves (n0, n1) from --n0/--n1 or --n/--n0.
std::pair<std::int64_t, std::int64_t> ranks(const Options& o)
{
    const std::int64_t n0 = need(o.n0, "--n0");
    if (o.n1) {
        if (o.n && *o.n != n0 + *o.n1)
            throw std::invalid_argument("--n must equal --n0 + --n1");
        return {n0, *o.n1};
    }
    return {n0, need(o.n, "--n or --n1") - n0};
}

// Component from ranks, genus and delta; degree from --d or the smallest realizing one.
ComponentDescriptor component_from_options(const Options& o)
{
    const auto [n0, n1] = ranks(o);
    if (n0 < 1 || n1 < 1)
        throw std::invalid_argument("ranks n0, n1 must be positive");
    const std::int64_t g = need(o.g, "--g");
    const std::int64_t delta = need(o.delta, "--delta");
    if (g < 2)
        throw std::invalid_argument("genus must be at least 2");
    std::int64_t d = 0;
    if (o.d) {
        d = *o.d;
    } else {
        const auto r = realizing_degree(n0, n1, g, delta);
        if (!r)
            throw std::invalid_argument("no degree realizes delta " + std::to_string(delta) + " for this type");
        d = *r;
    }
    auto c = component_from_delta(n0, n1, d, g, delta);
    if (!is_valid(c))
        throw std::invalid_argument("delta " + std::to_string(delta) + " is outside the admissible range for type (" +
                                    std::to_string(n0) + "," + std::to_string(n1) + ")");
    return c;
}

std::string weights_text(const std::vector<WeightDim>& w)
{
    std::string s;
    for (const auto& e : w)
        s += (s.empty() ? "" : ",") + std::to_string(e.weight) + ":" + std::to_string(e.dim);
    return s;
}

void add_options(CLI::App* app, Options& o, bool with_delta)
{
    app->add_option("--n", o.n, "rank n = n0 + n1");
    app->add_option("--d", o.d, "degree d");
    app->add_option("--g", o.g, "genus (>= 2)");
    app->add_option("--n0", o.n0, "rank of F0");
    app->add_option("--n1", o.n1, "rank of F1");
    if (with_delta)
        app->add_option("--delta", o.delta, "delta invariant");
    app->add_option("--format", o.format, "json | csv | md")->capture_default_str();
    app->add_option("--out", o.out, "write to PATH instead of stdout");
}

int run(int argc, char** argv)
{
    CLI::App app{"Length-two fixed points of the C*-action on Higgs moduli: invariants, multiplicities, "
                 "Euler pairings"};
    app.require_subcommand(1);

    Options o;
    auto* component = app.add_subcommand("component", "one component: all invariants");
    add_options(component, o, true);

    auto* enumerate = app.add_subcommand("enumerate", "all length-two components of M(n, d) in genus g");
    add_options(enumerate, o, false);

    auto* multiplicity = app.add_subcommand("multiplicity", "m_E(t) for one component or all of M(n, d)");
    add_options(multiplicity, o, true);
    std::size_t max_terms = kDefaultExpansionCap;
    multiplicity->add_option("--max-terms", max_terms, "suppress expansions above this many terms");

    auto* euler = app.add_subcommand("euler-pairing", "m_{F,E}(t) and, with --mf, m_{E,F}(t)");
    add_options(euler, o, true);
    euler->add_option("--chain", o.chain, "divisor degrees m0,m1,...,m_{n-1} of F");
    euler->add_option("--w0-mode", o.w0_mode, "equation | zero")->capture_default_str();
    std::string mf_path;
    euler->add_option("--mf", mf_path, "JSON file with m_F as a factored expression");
    euler->add_option("--max-terms", max_terms, "suppress expansions above this many terms");
    bool rank4 = false;
    euler->add_flag("--rank4-consistency", rank4, "run the rank-4 printed-formula consistency check");
    std::int64_t rank4_max_entry = 2;
    euler->add_option("--rank4-max-entry", rank4_max_entry, "m1, m2, m3 range for the consistency check");

    auto* sweep_cmd = app.add_subcommand("sweep", "batch records over ranges of (n, d, g)");
    std::string n_range = "2", d_range = "0", g_range = "2", outputs = "classification";
    std::vector<std::string> chains;
    std::optional<std::int64_t> chain_max;
    std::size_t resume_from = 0;
    sweep_cmd->add_option("--n", n_range, "rank or range lo..hi")->capture_default_str();
    sweep_cmd->add_option("--d", d_range, "degree or range lo..hi")->capture_default_str();
    sweep_cmd->add_option("--g", g_range, "genus or range lo..hi")->capture_default_str();
    sweep_cmd->add_option("--outputs", outputs, "comma list of classification, multiplicity, euler")
        ->capture_default_str();
    sweep_cmd->add_option("--chain", chains, "m-vector for euler records (repeatable)");
    sweep_cmd->add_option("--chain-max", chain_max, "add every m-vector with entries in [0, K]");
    sweep_cmd->add_option("--w0-mode", o.w0_mode, "equation | zero")->capture_default_str();
    sweep_cmd->add_option("--format", o.format, "json | csv | md")->capture_default_str();
    sweep_cmd->add_option("--out", o.out, "write to PATH instead of stdout");
    sweep_cmd->add_option("--resume-from", resume_from, "first record index to emit");
    sweep_cmd->add_option("--max-terms", max_terms, "suppress expansions above this many terms");

    auto* selftest = app.add_subcommand("selftest", "run the reproduction suite");
    selftest->add_option("--format", o.format, "json | csv | md")->capture_default_str();
    selftest->add_option("--out", o.out, "write the machine-readable report to PATH");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const Format format = parse_format(o.format);

    if (*component) {
        const auto c = component_from_options(o);
        json j = classification_fields(c);
        const auto m = multiplicity_fields(c, kDefaultExpansionCap);
        for (auto& [key, value] : m.items())
            j[key] = value;
        const auto w = weight_table(c);
        j["t_plus_weights"] = weights_text(w.t_plus);
        j["base_weights"] = weights_text(w.base);
        Sink sink(o.out);
        write_records(sink.stream(), {j}, format);
        return 0;
    }

    if (*enumerate) {
        std::vector<json> records;
        for (const auto& c : enumerate_components(need(o.n, "--n"), need(o.d, "--d"), need(o.g, "--g")))
            records.push_back(classification_fields(c));
        Sink sink(o.out);
        write_records(sink.stream(), records, format);
        return 0;
    }

    if (*multiplicity) {
        std::vector<json> records;
        if (o.delta) {
            records.push_back(multiplicity_fields(component_from_options(o), max_terms));
        } else {
            for (const auto& c : enumerate_components(need(o.n, "--n"), need(o.d, "--d"), need(o.g, "--g")))
                records.push_back(multiplicity_fields(c, max_terms));
        }
        Sink sink(o.out);
        write_records(sink.stream(), records, format);
        return 0;
    }

    if (*euler) {
        const W0Mode mode = parse_w0_mode(o.w0_mode);
        Sink sink(o.out);
        if (rank4) {
            std::vector<std::int64_t> genera = o.g ? std::vector<std::int64_t>{*o.g} : std::vector<std::int64_t>{2, 3};
            for (auto g : genera)
                if (g < 2)
                    throw std::invalid_argument("genus must be at least 2");
            if (rank4_max_entry < 0)
                throw std::invalid_argument("--rank4-max-entry must be nonnegative");
            sink.stream() << to_json(rank4_consistency(genera, rank4_max_entry, mode)).dump(2) << '\n';
            return 0;
        }
        const auto c = component_from_options(o);
        if (o.chain.empty())
            throw std::invalid_argument("missing required flag --chain");
        const auto f = make_chain_point(c.n, c.g, parse_chain(o.chain));
        std::optional<FactoredExpression> m_F;
        if (!mf_path.empty()) {
            std::ifstream in(mf_path);
            if (!in)
                throw std::invalid_argument("cannot read m_F file '" + mf_path + "'");
            try {
                m_F = factored_from_json(json::parse(in));
            } catch (const json::exception& e) {
                throw std::invalid_argument(std::string("malformed m_F file: ") + e.what());
            }
        }
        write_records(sink.stream(), {euler_fields(c, f, mode, max_terms, m_F)}, format);
        return 0;
    }

    if (*sweep_cmd) {
        SweepConfig cfg;
        cfg.n = parse_range(n_range);
        cfg.d = parse_range(d_range);
        cfg.g = parse_range(g_range);
        cfg.outputs.clear();
        std::stringstream ss(outputs);
        std::string item;
        while (std::getline(ss, item, ','))
            cfg.outputs.push_back(parse_output(item));
        for (const auto& ch : chains)
            cfg.chain_grid.push_back(parse_chain(ch));
        if (chain_max) {
            if (*chain_max < 0)
                throw std::invalid_argument("--chain-max must be nonnegative");
            for (std::int64_t n = cfg.n.lo; n <= cfg.n.hi; ++n) {
                std::vector<std::int64_t> m(static_cast<std::size_t>(n), 0);
                while (true) {
                    cfg.chain_grid.push_back(m);
                    std::size_t i = 0;
                    while (i < m.size() && m[i] == *chain_max)
                        m[i++] = 0;
                    if (i == m.size())
                        break;
                    ++m[i];
                }
            }
        }
        cfg.format = format;
        cfg.w0_mode = parse_w0_mode(o.w0_mode);
        cfg.max_terms = max_terms;
        cfg.resume_from = resume_from;
        Sink sink(o.out);
        sweep(cfg, sink.stream());
        return 0;
    }

    // selftest
    const auto results = run_acceptance();
    bool all = true;
    std::vector<json> rows;
    for (const auto& r : results) {
        all = all && r.pass;
        std::cerr << summary_line(r) << '\n';
        rows.push_back(to_json(r));
    }
    Sink sink(o.out);
    if (format == Format::JsonLines) {
        sink.stream() << json{{"pass", all}, {"criteria", rows}}.dump(2) << '\n';
    } else {
        std::vector<json> flat;
        for (const auto& r : results)
            flat.push_back({{"criterion", r.id},
                            {"name", r.name},
                            {"pass", r.pass},
                            {"seconds", r.seconds},
                            {"evidence", r.evidence.dump()}});
        write_records(sink.stream(), flat, format);
    }
    return all ? 0 : 2;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const SweepIoError& e) {
        std::cerr << "error: " << e.what() << " (last completed record: "
                  << (e.last_completed ? std::to_string(*e.last_completed) : std::string("none")) << ")\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
