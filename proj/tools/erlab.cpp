#include "erlab/replay.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#ifndef ERLAB_VERSION
#define ERLAB_VERSION "0.0.0"
#endif

using namespace erlab;

namespace {

constexpr int kExitOk = 0, kExitUsage = 1, kExitMismatch = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Flag beats ERLAB_BUDGET beats the default.
long resolve_budget(long flag, long fallback)
{
    if (flag > 0) return flag;
    if (const char* env = std::getenv("ERLAB_BUDGET")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (!end || *end || v <= 0) throw UsageError("ERLAB_BUDGET must be a positive integer");
        return v;
    }
    return fallback;
}

std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("bad integer list '" + text + "'");
        }
    }
    return out;
}

Rational parse_rat_arg(const std::string& text, const char* flag)
{
    try {
        return parse_rational(text);
    } catch (const std::exception&) {
        throw UsageError(std::string(flag) + ": bad rational '" + text + "'");
    }
}

void flatten(const json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& out)
{
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
        for (size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
    } else {
        out.emplace_back(path, j.is_string() ? j.get<std::string>() : j.dump());
    }
}

std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

// The table layout: one row per k, one column per j.
std::string table_csv(const json& results)
{
    std::ostringstream os;
    int jmax = 0;
    for (const auto& row : results.at("rows")) jmax = std::max(jmax, row.at("k").get<int>() - 2);
    os << "k";
    for (int j = 0; j <= jmax; ++j) os << ",j=" << j;
    os << '\n';
    for (const auto& row : results.at("rows")) {
        os << row.at("k").get<int>();
        int n = 0;
        for (const auto& c : row.at("cells")) {
            os << ',' << (c.contains("ell") ? std::to_string(c.at("ell").get<int>()) : std::string("tie"));
            ++n;
        }
        for (; n <= jmax; ++n) os << ',';
        os << '\n';
    }
    return os.str();
}

std::string render(const json& report, const std::string& format)
{
    if (format == "json") return report.dump(2) + "\n";
    if (format == "csv" && report.at("subcommand") == "table") return table_csv(report.at("results"));
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(report, "", rows);
    std::ostringstream os;
    if (format == "csv") {
        os << "key,value\n";
        for (const auto& [k, v] : rows) os << csv_quote(k) << ',' << csv_quote(v) << '\n';
    } else {
        for (const auto& [k, v] : rows) {
            if (v.find('\n') != std::string::npos) os << k << ":\n" << v << (v.back() == '\n' ? "" : "\n");
            else os << k << ": " << v << '\n';
        }
    }
    return os.str();
}

struct Globals {
    std::string format = "json";
    std::string output;
    int threads = 0;
    bool no_timing = false;
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact computations for multicolour clique-free edge colourings"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand
    Globals g;
    app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--output,-o", g.output, "Write the report to FILE instead of stdout");
    app.add_option("--threads", g.threads, "Worker threads (0: hardware)")->check(CLI::NonNegativeNumber);
    app.add_flag("--no-timing", g.no_timing, "Omit timing so reports are byte-identical");

    json inputs = json::object();
    std::optional<std::uint64_t> seed_used;
    std::function<CheckOutcome()> action;

    // count
    auto* count = app.add_subcommand("count", "Count k-valid colourings of a graph");
    std::string graph_file, kspec;
    long budget = 0;
    bool naive = false;
    count->add_option("--graph", graph_file, "Graph file")->required();
    count->add_option("--k", kspec, "k vector, e.g. 3,3 or 3;7")->required();
    count->add_option("--budget", budget, "Search node budget");
    count->add_flag("--naive", naive, "Use the brute-force counter");
    count->callback([&] {
        inputs = {{"graph", graph_file}, {"k", kspec}, {"naive", naive}};
        action = [&] {
            CheckOutcome out;
            Graph graph = parse_graph(read_file(graph_file));
            KVector k = parse_kvector(kspec);
            if (naive) {
                out.results = {{"count", to_string(count_valid_naive(graph, k))}, {"method", "naive"}};
                return out;
            }
            CountOptions opt;
            opt.budget = static_cast<std::uint64_t>(resolve_budget(budget, 1'000'000'000));
            opt.threads = g.threads;
            auto r = count_valid(graph, k, opt);
            out.results = {{"complete", r.complete}, {"nodes", r.nodes}, {"method", "backtracking"}};
            if (r.complete) out.results["count"] = to_string(r.count);
            else throw BudgetExceeded("node budget exceeded after " + std::to_string(r.nodes) + " nodes", r.nodes);
            return out;
        };
    });

    // qstar
    auto* qs = app.add_subcommand("qstar", "Exhaustive search for the optimal colour pattern");
    int rmax = 3;
    qs->add_option("--k", kspec, "k vector")->required();
    qs->add_option("--rmax", rmax, "Largest pattern order")->check(CLI::Range(1, 8));
    qs->add_option("--budget", budget, "Pattern budget");
    qs->callback([&] {
        inputs = {{"k", kspec}, {"rmax", rmax}};
        action = [&] { return replay::qstar(parse_kvector(kspec), rmax, resolve_budget(budget, 2'000'000)); };
    });

    // extend
    auto* ext = app.add_subcommand("extend", "Extension-property enumeration");
    std::string which;
    ext->add_option("--case", which, "3x7, 3x6, or a pattern file")->required();
    ext->add_option("--budget", budget, "Combination budget");
    ext->callback([&] {
        inputs = {{"case", which}};
        action = [&] {
            long bud = resolve_budget(budget, 10'000'000);
            if (which == "3x7" || which == "3x6") return replay::extend_case(which, bud);
            auto pf = parse_pattern(read_file(which));
            auto w = optimize_weights(pf.pattern);
            RationalWeights alpha;
            if (w.alpha_exact) alpha = *w.alpha_exact;
            else throw UsageError("pattern has no exact optimal weighting; extend needs exact weights");
            auto out = replay::extension_general(pf.pattern, alpha, pf.k, bud);
            out.results["alpha"] = replay::weights_json(w.alpha, w.alpha_exact);
            return out;
        };
    });

    // certify
    auto* cert = app.add_subcommand("certify", "Replay an LP certificate pipeline");
    std::string pipeline_file;
    auto* case_opt = cert->add_option("--case", which, "3x7 or 3x6")->check(CLI::IsMember({"3x7", "3x6"}));
    auto* pipe_opt = cert->add_option("--pipeline", pipeline_file, "Pipeline JSON file");
    case_opt->excludes(pipe_opt);
    cert->callback([&] {
        if (which.empty() && pipeline_file.empty()) throw CLI::RequiredError("--case or --pipeline");
        inputs = which.empty() ? json{{"pipeline", pipeline_file}} : json{{"case", which}};
        action = [&] { return which.empty() ? replay::certify(read_file(pipeline_file)) : replay::certify_case(which); };
    });

    // hadamard
    auto* had = app.add_subcommand("hadamard", "Sylvester matrices and biclique decompositions");
    int order = 8;
    bool roundtrip = false;
    std::string cols;
    had->add_option("--order", order, "Matrix order (power of two)")->required();
    had->add_flag("--roundtrip", roundtrip, "Check the biclique roundtrip");
    had->add_option("--emit-pattern", cols, "Column multiplicities, e.g. 1,1,1,1,1,1,1");
    had->callback([&] {
        inputs = {{"order", order}, {"roundtrip", roundtrip}};
        if (!cols.empty()) inputs["emit_pattern"] = cols;
        action = [&] {
            std::optional<std::vector<int>> c;
            if (!cols.empty()) c = parse_int_list(cols);
            return replay::hadamard(order, roundtrip, c);
        };
    });

    // table
    auto* tab = app.add_subcommand("table", "Reproduce the small-part ell table");
    int kmin = 3, kmax = 10, spread = 0;
    tab->add_option("--kmin", kmin)->check(CLI::Range(3, 12));
    tab->add_option("--kmax", kmax)->check(CLI::Range(3, 12));
    tab->add_option("--spread", spread, "Spread bound (default 2(k-1))")->check(CLI::PositiveNumber);
    tab->callback([&] {
        inputs = {{"kmin", kmin}, {"kmax", kmax}};
        if (spread) inputs["spread"] = spread;
        action = [&] {
            if (kmax < kmin) throw UsageError("--kmax must be at least --kmin");
            return replay::table(kmin, kmax, spread ? std::optional<int>(spread) : std::nullopt);
        };
    });

    auto* dc = app.add_subcommand("dcheck", "Exact balancing ratios for the unbalanced offset rows");
    dc->callback([&] { action = [] { return replay::dcheck(); }; });

    auto* fb = app.add_subcommand("fbound", "Check f(k,j) >= max{(k+1)^2/8, 2}");
    int fkmax = 20;
    fb->add_option("--kmax", fkmax)->check(CLI::Range(3, 200));
    fb->callback([&] {
        inputs = {{"kmax", fkmax}};
        action = [&] { return replay::fbound(fkmax); };
    });

    // rb-search
    auto* rbs = app.add_subcommand("rb-search", "Local search for dense triangle-free pairs");
    int n = 20, restarts = 8;
    std::string bstr = "19/20", astr;
    long iters = 100000;
    std::uint64_t seed = 1;
    rbs->add_option("--n", n)->check(CLI::Range(2, 128));
    rbs->add_option("--b", bstr, "Target |R|+|B| as a fraction of n^2/2");
    rbs->add_option("--iters", iters)->check(CLI::PositiveNumber);
    rbs->add_option("--seed", seed);
    rbs->add_option("--restarts", restarts)->check(CLI::Range(1, 1024));
    rbs->callback([&] {
        inputs = {{"n", n}, {"b", bstr}, {"iters", iters}, {"restarts", restarts}};
        seed_used = seed;
        action = [&] {
            int threads = g.threads ? g.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
            return replay::rb_search(n, parse_rat_arg(bstr, "--b"), iters, seed, restarts, threads);
        };
    });

    // rb-region
    auto* rbr = app.add_subcommand("rb-region", "Certify disjointness of the two polynomial regions");
    std::string stepstr = "1/1000";
    rbr->add_option("--a", astr)->required();
    rbr->add_option("--b", bstr)->required();
    rbr->add_option("--step", stepstr, "Grid step 1/N");
    rbr->callback([&] {
        inputs = {{"a", astr}, {"b", bstr}, {"step", stepstr}};
        action = [&] {
            return replay::rb_region(parse_rat_arg(astr, "--a"), parse_rat_arg(bstr, "--b"), parse_rat_arg(stepstr, "--step"));
        };
    });

    auto* v36c = app.add_subcommand("verify-36-configs", "Classify six-colour K_{4,4} systems on 8 points");
    v36c->callback([&] { action = [] { return replay::verify_36_configs(); }; });
    auto* v36n = app.add_subcommand("verify-36-neighbours", "Eliminate six-colour neighbour configurations");
    v36n->callback([&] { action = [] { return replay::verify_36_neighbours(); }; });

    // replay-all
    auto* all = app.add_subcommand("replay-all", "Run every fixed check");
    all->callback([&] {
        seed_used = 1;
        action = [&] {
            int threads = g.threads ? g.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
            std::vector<std::pair<std::string, std::function<CheckOutcome()>>> checks = {
                {"certify-3x7", [] { return replay::certify_case("3x7"); }},
                {"certify-3x6", [] { return replay::certify_case("3x6"); }},
                {"extend-3x7", [] { return replay::extend_case("3x7", 10'000'000); }},
                {"extend-3x6", [] { return replay::extend_case("3x6", 10'000'000); }},
                {"hadamard-4", [] { return replay::hadamard(4, true, std::nullopt); }},
                {"hadamard-8", [] { return replay::hadamard(8, true, std::vector<int>{1, 1, 1, 1, 1, 1, 1}); }},
                {"verify-36-neighbours", [] { return replay::verify_36_neighbours(); }},
                {"verify-36-configs", [] { return replay::verify_36_configs(); }},
                {"table", [] { return replay::table(3, 10, std::nullopt); }},
                {"dcheck", [] { return replay::dcheck(); }},
                {"fbound", [] { return replay::fbound(20); }},
                {"rb-region-19/25,89/100", [] { return replay::rb_region(Rational(19, 25), Rational(89, 100), Rational(1, 1000)); }},
                {"rb-region-3/4,19/20", [] { return replay::rb_region(Rational(3, 4), Rational(19, 20), Rational(1, 1000)); }},
                {"rb-region-4/5,4/5", [] { return replay::rb_region(Rational(4, 5), Rational(4, 5), Rational(1, 100)); }},
            };
            for (int nn : {20, 30, 40})
                checks.push_back({"rb-search-n" + std::to_string(nn),
                                  [nn, threads] { return replay::rb_search(nn, Rational(19, 20), 100000, 1, 8, threads); }});
            CheckOutcome out;
            json summary = json::array();
            for (auto& [name, fn] : checks) {
                auto r = fn();
                summary.push_back({{"check", name}, {"claim_holds", r.claim_holds}, {"mismatches", r.mismatches}});
                out.results[name] = r.results;
                for (const auto& m : r.mismatches) out.expect(false, name + ": " + m);
            }
            out.results["summary"] = summary;
            if (out.results.contains("rb-region-4/5,4/5"))
                out.expect(!out.results["rb-region-4/5,4/5"]["disjoint"].get<bool>(), "control parameters were certified");
            return out;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    std::string sub = app.get_subcommands().front()->get_name();
    json report = {{"subcommand", sub}, {"inputs", inputs}, {"version", ERLAB_VERSION}};
    report["seed"] = seed_used ? json(*seed_used) : json(nullptr);
    int rc = kExitOk;
    auto t0 = std::chrono::steady_clock::now();
    try {
        CheckOutcome out = action();
        report["results"] = out.results;
        report["claim_holds"] = out.claim_holds;
        report["mismatches"] = out.mismatches;
        if (!out.claim_holds) rc = kExitMismatch;
    } catch (const std::exception& e) {
        // usage errors, malformed files and budget overruns
        std::cerr << "erlab " << sub << ": " << e.what() << '\n';
        return kExitUsage;
    }
    if (!g.no_timing)
        report["timing"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};

    std::string text = render(report, g.format);
    if (g.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(g.output);
        if (!f) {
            std::cerr << "erlab: cannot write " << g.output << '\n';
            return kExitUsage;
        }
        f << text;
    }
    return rc;
}
