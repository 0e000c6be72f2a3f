#pragma once

#include "erlab/colouring_count.hpp"
#include "erlab/hadamard.hpp"
#include "erlab/loglinear.hpp"
#include "erlab/pattern.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace erlab {

struct WeightResult {
    FloatWeights alpha;
    std::optional<RationalWeights> alpha_exact; // set when the optimum came from an exact solve
    double value = 0;
    std::optional<LogLinear> value_exact;
    std::uint32_t support = 0;
    bool exact_mode = false;
    int singular_systems = 0;
    bool used_fallback = false;
};

namespace detail {

inline bool all_sizes_powers_of_two(const ColourPattern& p)
{
    for (int i = 0; i < p.r(); ++i)
        for (int j = i + 1; j < p.r(); ++j) {
            int t = p.size(i, j);
            if (t > 1 && (t & (t - 1))) return false;
        }
    return true;
}

// Solves [W_S -1; 1^T 0][alpha; lambda] = [0; 1] exactly. Empty result when singular.
inline std::optional<std::vector<Rational>> solve_support_exact(const std::vector<std::vector<Rational>>& w,
                                                                const std::vector<int>& sup)
{
    size_t m = sup.size();
    size_t n = m + 1;
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1, Rational(0)));
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < m; ++j) a[i][j] = w[sup[i]][sup[j]];
        a[i][m] = -1;
    }
    for (size_t j = 0; j < m; ++j) a[m][j] = 1;
    a[m][n] = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[col]);
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rational f = a[r][col] / a[col][col];
            for (size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<Rational> x(m);
    for (size_t i = 0; i < m; ++i) x[i] = a[i][n] / a[i][i];
    return x;
}

struct FloatSolve {
    std::vector<double> alpha;
    bool singular;
    double residual;
};

// Minimum-norm solution of the same system; handles rank deficiency.
inline FloatSolve solve_support_float(const std::vector<std::vector<double>>& w, const std::vector<int>& sup)
{
    int m = static_cast<int>(sup.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) a(i, j) = w[sup[i]][sup[j]];
        a(i, m) = -1;
        a(m, i) = 1;
    }
    rhs(m) = 1;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    cod.setThreshold(1e-12);
    Eigen::VectorXd x = cod.solve(rhs);
    FloatSolve out;
    out.singular = cod.rank() < m + 1;
    out.residual = (a * x - rhs).cwiseAbs().maxCoeff();
    for (int i = 0; i < m; ++i) out.alpha.push_back(x(i));
    return out;
}

inline void project_simplex(std::vector<double>& v)
{
    std::vector<double> u = v;
    std::sort(u.rbegin(), u.rend());
    double css = 0, theta = 0;
    for (size_t i = 0; i < u.size(); ++i) {
        css += u[i];
        double t = (css - 1) / static_cast<double>(i + 1);
        if (u[i] - t > 0) theta = t;
    }
    for (auto& x : v) x = std::max(0.0, x - theta);
}

} // namespace detail

inline WeightResult optimize_weights(const ColourPattern& p)
{
    int r = p.r();
    if (r < 1 || r > 16) throw std::invalid_argument("optimize_weights supports 1 <= r <= 16");
    WeightResult best;
    best.exact_mode = detail::all_sizes_powers_of_two(p);
    std::vector<std::vector<double>> wf(static_cast<size_t>(r), std::vector<double>(static_cast<size_t>(r), 0.0));
    std::vector<std::vector<Rational>> wq(static_cast<size_t>(r), std::vector<Rational>(static_cast<size_t>(r), Rational(0)));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            if (i != j) {
                int t = p.size(i, j);
                wf[i][j] = log2_size_d(t);
                if (best.exact_mode && t > 1) wq[i][j] = std::countr_zero(static_cast<unsigned>(t));
            }
    bool have = false, interior_found = false;
    auto offer = [&](std::uint32_t sup, FloatWeights alpha, std::optional<RationalWeights> exact) {
        double v = q_value(p, alpha);
        int sz = std::popcount(sup);
        bool better = !have || v > best.value + 1e-12 ||
                      (std::abs(v - best.value) <= 1e-12 && sz > std::popcount(best.support));
        if (!better) return;
        have = true;
        best.value = v;
        best.alpha = std::move(alpha);
        best.alpha_exact = std::move(exact);
        best.support = sup;
    };
    for (int i = 0; i < r; ++i) {
        FloatWeights e(static_cast<size_t>(r), 0.0);
        e[i] = 1;
        RationalWeights eq(static_cast<size_t>(r), Rational(0));
        eq[i] = 1;
        offer(std::uint32_t{1} << i, e, eq);
    }
    for (std::uint32_t sup = 1; sup < (std::uint32_t{1} << r); ++sup) {
        if (std::popcount(sup) < 2) continue;
        std::vector<int> idx;
        for (int i = 0; i < r; ++i)
            if ((sup >> i) & 1u) idx.push_back(i);
        if (best.exact_mode) {
            auto x = detail::solve_support_exact(wq, idx);
            if (x) {
                bool pos = std::all_of(x->begin(), x->end(), [](const Rational& v) { return v > 0; });
                if (!pos) continue;
                RationalWeights aq(static_cast<size_t>(r), Rational(0));
                FloatWeights af(static_cast<size_t>(r), 0.0);
                for (size_t k = 0; k < idx.size(); ++k) {
                    aq[idx[k]] = (*x)[k];
                    af[idx[k]] = (*x)[k].get_d();
                }
                interior_found = true;
                offer(sup, af, aq);
                continue;
            }
        }
        auto fs = detail::solve_support_float(wf, idx);
        if (fs.singular) ++best.singular_systems;
        if (fs.residual > 1e-10) continue;
        if (!std::all_of(fs.alpha.begin(), fs.alpha.end(), [](double v) { return v > 1e-12; })) continue;
        FloatWeights af(static_cast<size_t>(r), 0.0);
        double sum = 0;
        for (size_t k = 0; k < idx.size(); ++k) sum += fs.alpha[k];
        for (size_t k = 0; k < idx.size(); ++k) af[idx[k]] = fs.alpha[k] / sum;
        interior_found = true;
        offer(sup, af, std::nullopt);
    }
    if (!interior_found && r >= 2) {
        best.used_fallback = true;
        std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
        std::exponential_distribution<double> ex(1.0);
        for (int rs = 0; rs < 64; ++rs) {
            FloatWeights a(static_cast<size_t>(r));
            double sum = 0;
            for (auto& x : a) sum += (x = ex(rng));
            for (auto& x : a) x /= sum;
            for (int it = 0; it < 4000; ++it) {
                FloatWeights g(static_cast<size_t>(r), 0.0);
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < r; ++j) g[i] += 2 * wf[i][j] * a[j];
                for (int i = 0; i < r; ++i) a[i] += 0.05 * g[i];
                detail::project_simplex(a);
            }
            double s2 = 0;
            for (auto x : a) s2 += x;
            for (auto& x : a) x /= s2;
            std::uint32_t sup = 0;
            for (int i = 0; i < r; ++i)
                if (a[i] > 1e-12) sup |= std::uint32_t{1} << i;
            offer(sup, a, std::nullopt);
        }
    }
    if (best.alpha_exact) best.value_exact = q_value(p, *best.alpha_exact);
    return best;
}

struct QStarOptimum {
    ColourPattern pattern; // reduced to the support
    FloatWeights alpha;
    std::optional<RationalWeights> alpha_exact;
    double value;
};

struct QStarResult {
    double value = 0;
    std::optional<LogLinear> value_exact;
    std::vector<QStarOptimum> optima;
    long patterns_examined = 0;
    long canonical_classes = 0;
};

// Exhaustive search over level-2 patterns with r <= r_max vertices.
inline QStarResult solve_qstar_exhaustive(const KVector& k, int r_max, long budget = 2'000'000)
{
    k.validate();
    if (r_max < 1 || r_max > 8) throw std::invalid_argument("r_max must be 1..8");
    int s = k.s();
    std::vector<ColourSet> opts;
    for (ColourSet m = 0; m <= full_mask(s); ++m)
        if (std::popcount(m) >= 2) opts.push_back(m);
    QStarResult res;
    std::vector<std::pair<CanonicalPattern, QStarOptimum>> cands;
    const double tol = 1e-9;
    std::set<CanonicalPattern> seen;
    for (int r = 1; r <= r_max; ++r) {
        int pairs = r * (r - 1) / 2;
        double vol = std::pow(static_cast<double>(opts.size()), pairs);
        if (vol + static_cast<double>(res.patterns_examined) > static_cast<double>(budget))
            throw BudgetExceeded("qstar enumeration over budget", static_cast<std::uint64_t>(res.patterns_examined));
        std::vector<size_t> choice(static_cast<size_t>(pairs), 0);
        for (;;) {
            ColourPattern p(r, s);
            size_t c = 0;
            for (int i = 0; i < r; ++i)
                for (int j = i + 1; j < r; ++j) p.set(i, j, opts[choice[c++]]);
            ++res.patterns_examined;
            if (validate_pattern(p, k, 2)) {
                auto cf = canonical_form(p, k);
                if (seen.insert(cf).second) {
                    auto w = optimize_weights(p);
                    std::vector<int> keep;
                    for (int i = 0; i < r; ++i)
                        if ((w.support >> i) & 1u) keep.push_back(i);
                    QStarOptimum o{p.induced(keep), {}, std::nullopt, w.value};
                    for (int i : keep) o.alpha.push_back(w.alpha[i]);
                    if (w.alpha_exact) {
                        RationalWeights ae;
                        for (int i : keep) ae.push_back((*w.alpha_exact)[i]);
                        o.alpha_exact = ae;
                    }
                    cands.emplace_back(canonical_form(o.pattern, k), o);
                }
            }
            size_t i = 0;
            while (i < choice.size() && ++choice[i] == opts.size()) choice[i++] = 0;
            if (i == choice.size()) break;
        }
    }
    res.canonical_classes = static_cast<long>(seen.size());
    for (const auto& [cf, o] : cands) res.value = std::max(res.value, o.value);
    std::set<CanonicalPattern> reported;
    for (const auto& [cf, o] : cands)
        if (o.value >= res.value - tol && reported.insert(cf).second) {
            res.optima.push_back(o);
            if (o.alpha_exact && !res.value_exact) res.value_exact = q_value(o.pattern, *o.alpha_exact);
        }
    return res;
}

struct ExtensionAssignment {
    std::uint32_t sides = 0;         // bit c: new vertex joins the first class of colour c
    std::vector<int> t;              // t_i = max(covered colours, 1)
    BigCount product = 1;
    std::vector<Clone> clone_of;     // clones (new, j)
};

struct BipartiteExtensionReport {
    long assignments = 0;
    BigCount max_product = 0;
    std::vector<ExtensionAssignment> reaching; // product >= target
    bool all_reaching_strong = true;
};

namespace detail {

// Classes (A, B) of a spanning complete bipartite graph, A containing vertex 0.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> bipartite_classes(const Graph& g)
{
    int n = g.n();
    if (n < 2) return std::nullopt;
    std::uint64_t a = 0, b = 0;
    for (int v = 0; v < n; ++v) {
        if (v == 0 || !g.has(0, v)) a |= std::uint64_t{1} << v;
        else b |= std::uint64_t{1} << v;
    }
    if (!b) return std::nullopt;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            bool same = (((a >> u) & 1u) == ((a >> v) & 1u));
            if (g.has(u, v) == same) return std::nullopt;
        }
    return std::make_pair(a, b);
}

inline ColourPattern extend_pattern(const ColourPattern& p, const std::vector<ColourSet>& new_sets)
{
    ColourPattern e(p.r() + 1, p.s());
    for (int i = 0; i < p.r(); ++i) {
        for (int j = i + 1; j < p.r(); ++j) e.set(i, j, p.get(i, j));
        e.set(i, p.r(), new_sets[i]);
    }
    return e;
}

inline std::vector<Clone> clones_of_new_vertex(const ColourPattern& ext)
{
    std::vector<Clone> out;
    int nv = ext.r() - 1;
    for (int j = 0; j < nv; ++j)
        if (is_clone(ext, nv, j)) out.push_back({nv, j, ext.get(nv, j) == 0});
    return out;
}

} // namespace detail

inline BipartiteExtensionReport check_extension_bipartite(const ColourPattern& p, const RationalWeights& alpha,
                                                          const BigCount& target)
{
    check_weights(p, alpha);
    for (const auto& a : alpha)
        if (a != alpha[0]) throw std::invalid_argument("check_extension_bipartite needs uniform weights");
    if (p.s() > 20 || p.r() > 64) throw std::invalid_argument("pattern too large");
    std::vector<std::pair<std::uint64_t, std::uint64_t>> cls;
    for (int c = 0; c < p.s(); ++c) {
        auto ab = detail::bipartite_classes(p.colour_graph(c));
        if (!ab) throw std::invalid_argument("colour graph " + std::to_string(c + 1) + " is not complete bipartite");
        cls.push_back(*ab);
    }
    BipartiteExtensionReport rep;
    for (std::uint32_t sides = 0; sides < (std::uint32_t{1} << p.s()); ++sides) {
        ++rep.assignments;
        std::vector<ColourSet> ns(static_cast<size_t>(p.r()), 0);
        for (int c = 0; c < p.s(); ++c) {
            // joining class A makes the new vertex adjacent to B in colour c
            std::uint64_t opp = ((sides >> c) & 1u) ? cls[c].second : cls[c].first;
            for (int i = 0; i < p.r(); ++i)
                if ((opp >> i) & 1u) ns[i] |= static_cast<ColourSet>(1u << c);
        }
        ExtensionAssignment as;
        as.sides = sides;
        for (int i = 0; i < p.r(); ++i) {
            int t = std::max(std::popcount(ns[i]), 1);
            as.t.push_back(t);
            as.product *= t;
        }
        if (as.product > rep.max_product) rep.max_product = as.product;
        if (as.product >= target) {
            as.clone_of = detail::clones_of_new_vertex(detail::extend_pattern(p, ns));
            bool strong = std::any_of(as.clone_of.begin(), as.clone_of.end(), [](const Clone& c) { return c.strong; });
            if (!strong) rep.all_reaching_strong = false;
            rep.reaching.push_back(std::move(as));
        }
    }
    return rep;
}

struct GeneralExtensionReport {
    long combinations = 0;
    LogLinear max_ext;
    std::vector<ColourPattern> maximizers;
    std::vector<std::vector<Clone>> maximizer_clones;
    bool all_clones = true;
    bool all_strong = true;
};

inline GeneralExtensionReport check_extension_general(const ColourPattern& p, const RationalWeights& alpha,
                                                      const KVector& k, long budget = 10'000'000)
{
    check_weights(p, alpha);
    if (p.s() != k.s()) throw std::invalid_argument("pattern colour count differs from k");
    int r = p.r();
    if (r > 10) throw std::invalid_argument("check_extension_general supports r <= 10");
    // Per colour: maximal neighbourhoods N with no K_{k_c - 1} of the colour graph inside N.
    std::vector<std::vector<std::uint32_t>> options(static_cast<size_t>(p.s()));
    double vol = 1;
    for (int c = 0; c < p.s(); ++c) {
        Graph g = p.colour_graph(c);
        std::vector<bool> ok(std::size_t{1} << r, false);
        for (std::uint32_t m = 0; m < (std::uint32_t{1} << r); ++m) {
            Bitset b;
            for (int i = 0; i < r; ++i)
                if ((m >> i) & 1u) b.set(i);
            ok[m] = !contains_clique_in(g, b, k[c] - 1);
        }
        for (std::uint32_t m = 0; m < (std::uint32_t{1} << r); ++m) {
            if (!ok[m]) continue;
            bool maximal = true;
            for (int i = 0; i < r && maximal; ++i)
                if (!((m >> i) & 1u) && ok[m | (std::uint32_t{1} << i)]) maximal = false;
            if (maximal) options[c].push_back(m);
        }
        vol *= static_cast<double>(options[c].size());
    }
    if (vol > static_cast<double>(budget)) throw BudgetExceeded("extension enumeration over budget", 0);
    GeneralExtensionReport rep;
    bool have = false;
    std::vector<size_t> choice(static_cast<size_t>(p.s()), 0);
    for (;;) {
        ++rep.combinations;
        std::vector<ColourSet> ns(static_cast<size_t>(r), 0);
        for (int c = 0; c < p.s(); ++c) {
            std::uint32_t m = options[c][choice[c]];
            for (int i = 0; i < r; ++i)
                if ((m >> i) & 1u) ns[i] |= static_cast<ColourSet>(1u << c);
        }
        ColourPattern ext = detail::extend_pattern(p, ns);
        LogLinear v = ext_value(ext, alpha);
        int cmp = have ? loglin_compare(v, rep.max_ext) : 1;
        if (cmp > 0) {
            rep.max_ext = v;
            rep.maximizers.clear();
            have = true;
        }
        if (cmp >= 0) rep.maximizers.push_back(ext);
        size_t i = 0;
        while (i < choice.size() && ++choice[i] == options[i].size()) choice[i++] = 0;
        if (i == choice.size()) break;
    }
    for (const auto& ext : rep.maximizers) {
        auto cl = detail::clones_of_new_vertex(ext);
        if (cl.empty()) rep.all_clones = false;
        if (std::none_of(cl.begin(), cl.end(), [](const Clone& c) { return c.strong; })) rep.all_strong = false;
        rep.maximizer_clones.push_back(std::move(cl));
    }
    return rep;
}

// ---- six-colour neighbour configurations ----

namespace sixcheck {

// Pairs among the four neighbours 2..5, and the four triangles they form.
inline constexpr int kPairs[6][2] = {{2, 3}, {2, 4}, {2, 5}, {3, 4}, {3, 5}, {4, 5}};
inline constexpr int kTriangles[4][3] = {{0, 1, 3}, {0, 2, 4}, {1, 2, 5}, {3, 4, 5}};

using Sets = std::array<std::uint8_t, 6>; // subsets of [6] as 6-bit masks

enum class Status { contradiction, stable };

// Forced deletions to a fixed point: a colour shared by a triangle of sets must leave one of
// them; sets of size 3 cannot shrink. No size-4 candidate: contradiction. One: delete there.
inline Status propagate(Sets& s, const int (*tri)[3] = kTriangles, int ntri = 4)
{
    bool changed = true;
    while (changed) {
        changed = false;
        for (int t = 0; t < ntri; ++t) {
            const int* T = tri[t];
            std::uint8_t common = s[T[0]] & s[T[1]] & s[T[2]];
            for (int j = 0; j < 6; ++j) {
                if (!((common >> j) & 1u)) continue;
                int cand = -1, ncand = 0;
                for (int q = 0; q < 3; ++q)
                    if (std::popcount(static_cast<unsigned>(s[T[q]])) >= 4) {
                        cand = T[q];
                        ++ncand;
                    }
                if (ncand == 0) return Status::contradiction;
                if (ncand == 1) {
                    s[cand] &= static_cast<std::uint8_t>(~(1u << j));
                    changed = true;
                    common = s[T[0]] & s[T[1]] & s[T[2]];
                }
            }
        }
    }
    return Status::stable;
}

inline bool resolved(const Sets& s, const int (*tri)[3] = kTriangles, int ntri = 4)
{
    for (int t = 0; t < ntri; ++t)
        if (s[tri[t][0]] & s[tri[t][1]] & s[tri[t][2]]) return false;
    return true;
}

// Complete case split on the remaining shared colours; true when some branch survives,
// with the surviving sets (a valid completion) left in witness.
inline bool survives(Sets s, long& branches, Sets* witness = nullptr, const int (*tri)[3] = kTriangles, int ntri = 4)
{
    if (propagate(s, tri, ntri) == Status::contradiction) return false;
    if (resolved(s, tri, ntri)) {
        if (witness) *witness = s;
        return true;
    }
    for (int t = 0; t < ntri; ++t) {
        const int* T = tri[t];
        std::uint8_t common = s[T[0]] & s[T[1]] & s[T[2]];
        if (!common) continue;
        int j = std::countr_zero(static_cast<unsigned>(common));
        for (int q = 0; q < 3; ++q) {
            if (std::popcount(static_cast<unsigned>(s[T[q]])) < 4) continue;
            Sets b = s;
            b[T[q]] &= static_cast<std::uint8_t>(~(1u << j));
            ++branches;
            if (survives(b, branches, witness, tri, ntri)) return true;
        }
        return false;
    }
    return true;
}

inline Sets psi_sets(const std::array<std::uint8_t, 4>& f)
{
    Sets s{};
    for (int p = 0; p < 6; ++p) {
        int a = kPairs[p][0] - 2, b = kPairs[p][1] - 2;
        s[p] = static_cast<std::uint8_t>(0x3f & ~(f[a] & f[b]));
    }
    return s;
}

} // namespace sixcheck

struct NeighbourConfigReport {
    long configurations = 0;
    long rejected_upfront = 0;       // equal neighbour sets
    long eliminated_by_rules = 0;    // forced-deletion fixed point alone
    long eliminated_by_split = 0;    // needs the case split
    long branches = 0;
    std::vector<std::array<std::uint8_t, 4>> survivors;
    std::vector<sixcheck::Sets> witnesses; // a valid completion per survivor
};

enum class ConfigVerdict { rejected_upfront, eliminated_by_rules, eliminated_by_split, survives };

// Verdict on six candidate sets psi(23),psi(24),psi(25),psi(34),psi(35),psi(45).
inline ConfigVerdict classify_psi_sets(const sixcheck::Sets& s, long* branches = nullptr,
                                       sixcheck::Sets* witness = nullptr)
{
    auto s1 = s;
    if (sixcheck::propagate(s1) == sixcheck::Status::contradiction) return ConfigVerdict::eliminated_by_rules;
    long br = 0;
    bool alive = sixcheck::survives(s, br, witness);
    if (branches) *branches += br;
    return alive ? ConfigVerdict::survives : ConfigVerdict::eliminated_by_split;
}

// One configuration: the four sets phi(12),...,phi(15) as 6-bit masks.
inline ConfigVerdict classify_neighbour_config(const std::array<std::uint8_t, 4>& f, long* branches = nullptr,
                                               sixcheck::Sets* witness = nullptr)
{
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            if (f[a] == f[b]) return ConfigVerdict::rejected_upfront;
    return classify_psi_sets(sixcheck::psi_sets(f), branches, witness);
}

inline NeighbourConfigReport eliminate_6colour_neighbour_configs()
{
    std::vector<std::uint8_t> quads;
    for (unsigned m = 0; m < 64; ++m)
        if (std::popcount(m) == 4) quads.push_back(static_cast<std::uint8_t>(m));
    NeighbourConfigReport rep;
    for (size_t a = 0; a < quads.size(); ++a)
        for (size_t b = a + 1; b < quads.size(); ++b)
            for (size_t c = b + 1; c < quads.size(); ++c)
                for (size_t d = c + 1; d < quads.size(); ++d) {
                    std::array<std::uint8_t, 4> f{quads[a], quads[b], quads[c], quads[d]};
                    ++rep.configurations;
                    sixcheck::Sets w{};
                    switch (classify_neighbour_config(f, &rep.branches, &w)) {
                    case ConfigVerdict::rejected_upfront: ++rep.rejected_upfront; break;
                    case ConfigVerdict::eliminated_by_rules: ++rep.eliminated_by_rules; break;
                    case ConfigVerdict::eliminated_by_split: ++rep.eliminated_by_split; break;
                    case ConfigVerdict::survives:
                        rep.survivors.push_back(f);
                        rep.witnesses.push_back(w);
                        break;
                    }
                }
    return rep;
}

// ---- six-colour K_{4,4} systems on [8] ----

struct K44SystemReport {
    long multisets = 0;
    long admissible_distinct = 0;
    long admissible_doubled = 0;     // exactly one colour graph repeated once
    long admissible_other = 0;       // any other repetition
    long conforming = 0;
    long nonconforming = 0;
    std::vector<std::vector<int>> admissible; // indices into balanced_bipartitions(8)
};

namespace detail {

inline bool is_balanced_k44(const Graph& g)
{
    auto ab = bipartite_classes(g);
    return ab && std::popcount(ab->first) == 4 && std::popcount(ab->second) == 4;
}

inline bool is_two_k4(const Graph& g)
{
    if (g.n() != 8) return false;
    for (int v = 0; v < 8; ++v)
        if (g.degree(v) != 3) return false;
    for (int v = 0; v < 8; ++v) {
        // closed neighbourhood must be a clique
        Bitset cl = g.nbr(v);
        cl.set(v);
        bool ok = true;
        cl.for_each([&](int u) {
            cl.for_each([&](int w) {
                if (u != w && !g.has(u, w)) ok = false;
            });
        });
        if (!ok) return false;
    }
    return true;
}

} // namespace detail

inline K44SystemReport classify_6colour_K44_systems()
{
    auto bp = balanced_bipartitions(8);
    int nb = static_cast<int>(bp.size());
    std::vector<std::array<std::uint8_t, 28>> split(static_cast<size_t>(nb));
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) pairs.emplace_back(i, j);
    for (int b = 0; b < nb; ++b)
        for (int p = 0; p < 28; ++p) split[b][p] = bp[b].splits(pairs[p].first, pairs[p].second) ? 1 : 0;
    K44SystemReport rep;
    std::array<int, 28> mult{};
    std::vector<int> pick;
    std::function<void(int, int)> rec = [&](int start, int left) {
        if (left == 0) {
            ++rep.multisets;
            for (int p = 0; p < 28; ++p)
                if (mult[p] < 3 || mult[p] > 4) return;
            std::map<int, int> cnt;
            for (int x : pick) ++cnt[x];
            int repeated = 0, max_rep = 1;
            for (auto [x, c] : cnt) {
                if (c > 1) ++repeated;
                max_rep = std::max(max_rep, c);
            }
            if (repeated == 0) ++rep.admissible_distinct;
            else if (repeated == 1 && max_rep == 2) ++rep.admissible_doubled;
            else ++rep.admissible_other;
            Graph g3(8), g4(8);
            for (int p = 0; p < 28; ++p) (mult[p] == 3 ? g3 : g4).add_edge(pairs[p].first, pairs[p].second);
            if (detail::is_balanced_k44(g3) && detail::is_two_k4(g4)) ++rep.conforming;
            else ++rep.nonconforming;
            rep.admissible.push_back(pick);
            return;
        }
        for (int b = start; b < nb; ++b) {
            bool ok = true;
            for (int p = 0; p < 28; ++p) {
                int m = mult[p] + split[b][p];
                // after this pick, left-1 more picks remain
                if (m > 4 || m + (left - 1) < 3) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            for (int p = 0; p < 28; ++p) mult[p] += split[b][p];
            pick.push_back(b);
            rec(b, left - 1);
            pick.pop_back();
            for (int p = 0; p < 28; ++p) mult[p] -= split[b][p];
        }
    };
    rec(0, 6);
    return rep;
}

struct PatternConstants {
    BigCount c_matrices;          // order-8 matrices with first column and last row all +1
    BigCount c_decompositions;    // labelled 7-colour decompositions of 4K_8 into K_{4,4}
    std::vector<BigCount> c_prime; // six-colour constants for j = 0..7 extra vertices
};

// Enumeration-derived constants for the seven- and six-colour triangle problems.
inline PatternConstants pattern_constants()
{
    PatternConstants out;
    out.c_matrices = count_normalized_matrices(8);
    auto bp = balanced_bipartitions(8);
    int nb = static_cast<int>(bp.size());
    long sets7 = 0;
    std::array<int, 28> mult{};
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) pairs.emplace_back(i, j);
    std::function<void(int, int)> rec = [&](int start, int left) {
        if (left == 0) {
            ++sets7;
            return;
        }
        for (int b = start; b < nb; ++b) {
            bool ok = true;
            for (int p = 0; p < 28 && ok; ++p) {
                int m = mult[p] + (bp[b].splits(pairs[p].first, pairs[p].second) ? 1 : 0);
                if (m > 4 || m + (left - 1) < 4) ok = false;
            }
            if (!ok) continue;
            for (int p = 0; p < 28; ++p) mult[p] += bp[b].splits(pairs[p].first, pairs[p].second) ? 1 : 0;
            rec(b + 1, left - 1);
            for (int p = 0; p < 28; ++p) mult[p] -= bp[b].splits(pairs[p].first, pairs[p].second) ? 1 : 0;
        }
    };
    rec(0, 7);
    out.c_decompositions = BigCount(sets7) * 5040;
    auto sys = classify_6colour_K44_systems();
    out.c_prime.assign(8, BigCount(0));
    for (const auto& pick : sys.admissible) {
        std::map<int, int> cnt;
        for (int x : pick) ++cnt[x];
        BigCount orders = 720;
        for (auto [x, c] : cnt)
            for (int f = 2; f <= c; ++f) orders /= f;
        for (int j = 0; j <= 7; ++j) {
            BigCount w = 1;
            for (int a = 0; a < j; ++a)
                for (int b = a + 1; b < j; ++b) {
                    int m = 0;
                    for (int x : pick) m += bp[x].splits(a, b) ? 1 : 0;
                    w *= m;
                }
            out.c_prime[j] += orders * w;
        }
    }
    return out;
}

} // namespace erlab
