// One PASS/FAIL line per acceptance criterion; exit status 1 when any fails.

#include "erlab/replay.hpp"
#include "test_support.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <sys/wait.h>

using namespace erlab;

namespace {

struct Line {
    bool pass = true;
    std::ostringstream note;
    void check(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            note << " [" << what << "]";
        }
    }
};

using Clock = std::chrono::steady_clock;

int failures = 0;

// limit_s <= 0: untimed
void criterion(int id, const std::string& title, double limit_s, const std::function<void(Line&)>& body)
{
    Line l;
    auto t0 = Clock::now();
    try {
        body(l);
    } catch (const std::exception& e) {
        l.check(false, std::string("exception: ") + e.what());
    }
    double sec = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0) l.check(sec < limit_s, "took " + std::to_string(sec) + " s, limit " + std::to_string(limit_s) + " s");
    if (!l.pass) ++failures;
    std::printf("%s %2d %s (%.3f s)%s\n", l.pass ? "PASS" : "FAIL", id, title.c_str(), sec, l.note.str().c_str());
    std::fflush(stdout);
}

std::pair<int, std::string> run_cli(const std::string& args)
{
    std::string cmd = std::string(ERLAB_CLI_PATH) + " " + args;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) throw std::runtime_error("cannot start the CLI");
    std::string out;
    std::array<char, 4096> buf{};
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), got);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

const json* find_step(const json& results, const std::string& name)
{
    for (const auto& s : results.at("steps"))
        if (s.at("name") == name) return &s;
    return nullptr;
}

bool bound_is(const json* step, const std::string& want)
{
    return step && parse_loglinear(step->at("detail").at("bound").at("exact").get<std::string>()) == parse_loglinear(want);
}

bool d_is(const json* step, const std::vector<Rational>& want, double tol)
{
    if (!step) return false;
    const auto& d = step->at("detail").at("d");
    if (d.size() != want.size()) return false;
    for (size_t i = 0; i < want.size(); ++i) {
        double got = d[i].is_string() ? parse_rational(d[i].get<std::string>()).get_d() : d[i].get<double>();
        if (std::abs(got - want[i].get_d()) > tol) return false;
    }
    return true;
}

bool d_exact(const json* step, const std::vector<Rational>& want)
{
    if (!step) return false;
    const auto& d = step->at("detail").at("d");
    if (d.size() != want.size()) return false;
    for (size_t i = 0; i < want.size(); ++i)
        if (parse_rational(d[i].get<std::string>()) != want[i]) return false;
    return true;
}

std::vector<int> zero_slack(const json* step)
{
    return step ? step->at("detail").at("zero_slack").get<std::vector<int>>() : std::vector<int>{};
}

} // namespace

int main()
{
    const double lp_tol = 1e-9;

    criterion(1, "certificate chain (3;7)", 1.0, [&](Line& l) {
        auto [code, out] = run_cli("certify --case 3x7 --no-timing");
        l.check(code == 0, "exit code " + std::to_string(code));
        auto j = json::parse(out);
        const auto& r = j.at("results");
        l.check(bound_is(find_step(r, "I1"), "39/50+61/100*log2(3)"), "I1 bound");
        l.check(bound_is(find_step(r, "I2"), "129/100+29/100*log2(3)"), "I2 bound");
        l.check(bound_is(find_step(r, "I3"), "7/4"), "I3 bound");
        l.check(zero_slack(find_step(r, "I3")) == std::vector<int>{4}, "I3 zero slack set");
        l.check(d_is(find_step(r, "lp"), {0, 0, Rational(7, 8), 0, 0, 0}, lp_tol), "LP optimum");
        l.check(d_exact(find_step(r, "realization"), {0, 0, Rational(7, 8), 0, 0, 0}), "realization");
    });

    criterion(2, "certificate chain (3;6)", 1.0, [&](Line& l) {
        auto out = replay::certify_case("3x6");
        l.check(out.claim_holds, "pipeline step failed");
        const auto& r = out.results;
        l.check(bound_is(find_step(r, "final"), "1/2*log2(3)+3/4"), "final bound");
        l.check(zero_slack(find_step(r, "final")) == std::vector<int>{3, 4}, "zero slack set");
        l.check(d_is(find_step(r, "lp"), {0, Rational(1, 2), Rational(3, 8), 0, 0}, lp_tol), "LP optimum");
    });

    criterion(3, "Hadamard-8 pattern q = 7/4 and density vector", 0, [&](Line& l) {
        auto p = replay::hadamard_case_pattern("3x7");
        auto a = uniform_weights(8);
        l.check(q_value(p, a) == LogLinear(Rational(7, 4)), "q");
        l.check(density_vector(p, a) == std::vector<Rational>{0, 0, Rational(7, 8), 0, 0, 0}, "density vector");
        l.check(validate_pattern(p, parse_kvector("3;7"), 2), "pattern validity");
    });

    criterion(4, "extension checks (3;7) and (3;6)", 2.0, [&](Line& l) {
        auto t0 = Clock::now();
        auto r7 = check_extension_bipartite(replay::hadamard_case_pattern("3x7"), uniform_weights(8),
                                            ipow(BigCount(2), 14));
        double s7 = std::chrono::duration<double>(Clock::now() - t0).count();
        l.check(r7.assignments == 128, "(3;7) assignments");
        l.check(r7.reaching.size() == 8, "(3;7) reaching " + std::to_string(r7.reaching.size()));
        l.check(r7.max_product == ipow(BigCount(2), 14), "(3;7) max product");
        l.check(r7.all_reaching_strong, "(3;7) strong clones");
        l.check(s7 < 1, "(3;7) time");
        t0 = Clock::now();
        auto r6 = check_extension_bipartite(replay::hadamard_case_pattern("3x6"), uniform_weights(8), BigCount(64 * 81));
        double s6 = std::chrono::duration<double>(Clock::now() - t0).count();
        l.check(r6.reaching.size() == 8, "(3;6) reaching " + std::to_string(r6.reaching.size()));
        l.check(r6.max_product == 64 * 81, "(3;6) max product");
        l.check(r6.all_reaching_strong, "(3;6) strong clones");
        l.check(s6 < 1, "(3;6) time");
        l.note << " (3;7) " << s7 << " s, (3;6) " << s6 << " s";
    });

    criterion(5, "six-colour neighbour and K44-system checks", 300.0, [&](Line& l) {
        auto n = eliminate_6colour_neighbour_configs();
        l.check(n.configurations == 1365, "configurations " + std::to_string(n.configurations));
        l.note << " configs=" << n.configurations << " upfront=" << n.rejected_upfront
               << " rules=" << n.eliminated_by_rules << " split=" << n.eliminated_by_split
               << " survivors=" << n.survivors.size();
        l.check(n.survivors.empty(), std::to_string(n.survivors.size()) + " configurations survive with valid completions");
        auto c = classify_6colour_K44_systems();
        l.note << " admissible=" << c.admissible.size() << " nonconforming=" << c.nonconforming;
        l.check(c.nonconforming == 0, "nonconforming K44 systems");
        if (!n.survivors.empty()) {
            l.note << "\n     survivors (phi(12),phi(13),phi(14),phi(15)):";
            for (size_t i = 0; i < n.survivors.size(); ++i) {
                if (i % 6 == 0) l.note << "\n    ";
                l.note << " ";
                for (int q = 0; q < 4; ++q) l.note << (q ? "," : "") << replay::set_str(n.survivors[i][q]);
            }
        }
    });

    criterion(6, "small-part ell table 3 <= k <= 10", 600.0, [&](Line& l) {
        auto table = small_part_table();
        Rational worst = -1;
        for (int k = 3; k <= 10; ++k)
            for (int j = 0; j <= k - 2; ++j) {
                auto r = best_small_part(k, j, 2 * (k - 1), 2 * (k - 1));
                std::string cell = "(" + std::to_string(k) + "," + std::to_string(j) + ")";
                l.check(r.ell == table[k - 3][j], cell + " ell " + std::to_string(r.ell));
                l.check(r.unique && r.margin > 1, cell + " not unique");
                if (worst < 0 || r.margin < worst) worst = r.margin;
            }
        l.note << " smallest margin " << worst.get_d();
    });

    criterion(7, "balancing ratios >= 9 on every offset row", 0, [&](Line& l) {
        Rational worst = -1;
        for (const auto& b : dcheck_rows()) {
            Rational r = dcheck_ratio(b, balanced_offsets(b));
            l.check(r >= 9, "ratio " + r.get_str());
            if (worst < 0 || r < worst) worst = r;
        }
        l.note << " rows=" << dcheck_rows().size() << " smallest ratio " << worst.get_d();
    });

    criterion(8, "closed-form anchors and f(k,j) lower bound", 0, [&](Line& l) {
        l.check(f_closed(3, 0, 2) == 2, "f(3,0,2)");
        l.check(f_closed(3, 1, 2) == Rational(9, 4), "f(3,1,2)");
        auto rep = f_lower_bound_check(20);
        l.check(rep.all_ok, "lower bound");
        l.check(rep.intermediates_ok, "intermediate identities");
    });

    criterion(9, "Hadamard roundtrips for orders 4 and 8", 0, [&](Line& l) {
        long patterns = 0;
        for (int m : {2, 3}) {
            int n = 1 << m;
            auto h = normalize(sylvester(m));
            auto d = to_biclique_decomposition(h);
            l.check(from_biclique_decomposition(d, n / 4) == h, "inverse at order " + std::to_string(n));
            l.check(to_biclique_decomposition(from_biclique_decomposition(d, n / 4)) == d, "decomposition roundtrip");
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) l.check(pair_multiplicity(d, i, j) == n / 2, "multiplicity");
            // order 4: multiplicities in {0,1,2}; order 8: 0/1 vectors and each column doubled
            int base = n == 4 ? 3 : 2;
            long count = 1;
            for (int c = 0; c < n - 1; ++c) count *= base;
            std::vector<std::vector<int>> vecs;
            for (long code = 0; code < count; ++code) {
                std::vector<int> cols;
                for (long x = code, c = 0; c < n - 1; ++c, x /= base) cols.push_back(static_cast<int>(x % base));
                vecs.push_back(cols);
            }
            if (n == 8)
                for (int c = 0; c < 7; ++c) {
                    std::vector<int> cols(7, 1);
                    cols[c] = 2;
                    vecs.push_back(cols);
                }
            for (const auto& cols : vecs) {
                int s = std::accumulate(cols.begin(), cols.end(), 0);
                if (s < 2) continue;
                auto p = pattern_from_columns(h, cols);
                ++patterns;
                l.check(validate_pattern(p, make_k(std::vector<int>(static_cast<size_t>(s), 3)), p.min_pair_size()),
                        "pattern (3;" + std::to_string(s) + ") order " + std::to_string(n));
            }
        }
        l.note << " patterns validated=" << patterns;
    });

    criterion(10, "counting oracle on small graphs and anchors", 0, [&](Line& l) {
        long graphs = 0;
        for (int n = 1; n <= 5; ++n)
            for (const auto& g : testing::nonisomorphic_graphs(n)) {
                ++graphs;
                for (auto k : {make_k({3, 3}), make_k({4, 3}), make_k({3, 3, 3})}) {
                    auto r = count_valid(g, k);
                    l.check(r.complete && r.count == count_valid_naive(g, k), "mismatch on " + write_graph(g));
                }
            }
        l.check(graphs == 52, "non-isomorphic graph count " + std::to_string(graphs));
        auto k33 = make_k({3, 3});
        std::vector<std::pair<Graph, long>> anchors{
            {complete_multipartite({1, 1, 1}), 6}, {complete_multipartite({1, 1, 1, 1}), 18}, {turan_graph(2, 4), 16}};
        for (const auto& [g, v] : anchors) {
            l.check(testing::count_by_inclusion_exclusion(g, k33) == v, "inclusion-exclusion anchor");
            l.check(count_valid(g, k33).count == v, "anchor");
        }
        l.note << " graphs=" << graphs;
    });

    criterion(11, "symmetrization pair-sum inequality", 0, [&](Line& l) {
        std::mt19937_64 rng(2024);
        auto k = make_k({3, 3});
        int tested = 0;
        while (tested < 100) {
            int n = 3 + static_cast<int>(rng() % 5);
            auto g = testing::random_graph(n, 0.5, rng);
            std::vector<std::pair<int, int>> non;
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v)
                    if (!g.has(u, v)) non.emplace_back(u, v);
            if (non.empty()) continue;
            auto [u, v] = non[rng() % non.size()];
            BigCount f = count_valid(g, k).count, fu = count_valid(symmetrize(g, u, v), k).count,
                     fv = count_valid(symmetrize(g, v, u), k).count;
            l.check(fu + fv >= 2 * f, "inequality fails");
            ++tested;
        }
    });

    criterion(12, "h*/h sandwich of the procedure count", 0, [&](Line& l) {
        long cases = 0;
        for (int k : {3, 4}) {
            std::function<void(PartSizes&)> rec = [&](PartSizes& m) {
                if (static_cast<int>(m.size()) == k - 1) {
                    for (int ell = 0; ell <= 2; ++ell) {
                        Rational c(count_procedure_colourings(m, ell, k));
                        l.check(h_star(m, ell) <= c && c <= h_count(m, ell), "sandwich");
                        ++cases;
                    }
                    return;
                }
                for (int x = m.empty() ? 3 : m.back(); x >= 1; --x) {
                    m.push_back(x);
                    rec(m);
                    m.pop_back();
                }
            };
            PartSizes m;
            rec(m);
        }
        l.check(h_star({2, 2}, 1) == 112 && count_procedure_colourings({2, 2}, 1, 3) == 112 && h_count({2, 2}, 1) == 128,
                "(112,112,128)");
        l.note << " cases=" << cases;
    });

    criterion(13, "KKT spread on interior optima", 0, [&](Line& l) {
        std::vector<ColourPattern> ps{replay::hadamard_case_pattern("3x7"), replay::hadamard_case_pattern("3x6"),
                                      pattern_from_columns(normalize(sylvester(2)), {1, 1, 1}),
                                      uniform_pattern(2, 2, colour_mask({1, 2}))};
        double worst = 0;
        for (const auto& p : ps) {
            auto w = optimize_weights(p);
            double lo = 1e300, hi = -1e300;
            for (int i = 0; i < p.r(); ++i)
                if ((w.support >> i) & 1u) {
                    double q = q_vertex(p, w.alpha, i);
                    lo = std::min(lo, q);
                    hi = std::max(hi, q);
                }
            worst = std::max(worst, hi - lo);
        }
        l.check(worst <= 1e-9, "spread " + std::to_string(worst));
        l.note << " largest spread " << worst;
    });

    criterion(14, "polynomial region disjointness", 0, [&](Line& l) {
        for (auto [a, b] : {std::pair{Rational(19, 25), Rational(89, 100)}, std::pair{Rational(3, 4), Rational(19, 20)}}) {
            auto r = region_disjointness_check({a, b}, Rational(1, 1000));
            l.check(r.disjoint && r.analytic_certified, "(" + a.get_str() + "," + b.get_str() + ") not certified");
        }
        auto c = region_disjointness_check({Rational(4, 5), Rational(4, 5)}, Rational(1, 1000));
        l.check(!c.disjoint && c.witness.has_value(), "control has no overlap witness");
        if (c.witness) l.note << " control witness x=" << c.witness->x << " y=" << c.witness->y;
    });

    criterion(15, "triangle-free pair search density cap", 300.0, [&](Line& l) {
        for (int n : {20, 30, 40}) {
            auto r = search_triangle_free_pair(n, Rational(19, 20), 100000, 1, {8, 1, false});
            double cap = 0.75 + 2.0 / n;
            l.check(r.best_union_density <= cap, "n=" + std::to_string(n) + " density " + std::to_string(r.best_union_density));
            l.note << " n=" << n << ":" << r.best_union_density;
        }
    });

    std::printf("%d of 15 criteria failed\n", failures);
    return failures ? 1 : 0;
}
