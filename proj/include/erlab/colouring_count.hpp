#pragma once

#include "erlab/graph.hpp"
#include "erlab/rational.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace erlab {

struct KVector {
    std::vector<int> k;
    int ramsey_bound = 0; // caller-supplied; 0 means unknown

    int s() const { return static_cast<int>(k.size()); }
    int operator[](int c) const { return k[static_cast<size_t>(c)]; }

    void validate() const
    {
        if (k.size() < 2) throw std::invalid_argument("k needs at least two colours");
        for (size_t i = 0; i < k.size(); ++i) {
            if (k[i] < 3) throw std::invalid_argument("k entries must be >= 3");
            if (i && k[i] > k[i - 1]) throw std::invalid_argument("k must be nonincreasing");
        }
    }
};

inline KVector make_k(std::vector<int> k)
{
    KVector kv{std::move(k)};
    kv.validate();
    return kv;
}

// "3,3,3" or "3;7" (three repeated seven times).
inline KVector parse_kvector(const std::string& text)
{
    std::vector<int> k;
    auto semi = text.find(';');
    if (semi != std::string::npos) {
        int val = std::stoi(text.substr(0, semi));
        int reps = std::stoi(text.substr(semi + 1));
        k.assign(static_cast<size_t>(reps), val);
    } else {
        size_t pos = 0;
        while (pos <= text.size()) {
            auto comma = text.find(',', pos);
            std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (tok.empty()) throw std::invalid_argument("bad k list: " + text);
            k.push_back(std::stoi(tok));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    return make_k(k);
}

struct CountOptions {
    std::uint64_t budget = 1'000'000'000; // visited search nodes
    int threads = 0;                      // 0: hardware concurrency
};

struct CountResult {
    bool complete = false;
    BigCount count = 0; // meaningful only when complete
    std::uint64_t nodes = 0;
    double seconds = 0;
};

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, std::uint64_t nodes) : std::runtime_error(what), nodes(nodes) {}
    std::uint64_t nodes;
};

namespace detail {

constexpr int kMaxColours = 16;

struct ColourState {
    std::uint64_t adj[kMaxColours][64];
};

// Is there a t-clique of colour graph `adj` inside `mask`?
inline bool mask_clique(const std::uint64_t* adj, std::uint64_t mask, int t)
{
    if (t <= 0) return true;
    if (std::popcount(mask) < t) return false;
    if (t == 1) return mask != 0;
    while (mask) {
        int w = std::countr_zero(mask);
        mask &= mask - 1;
        if (mask_clique(adj, mask & adj[w], t - 1)) return true;
    }
    return false;
}

class ValidCounter {
public:
    ValidCounter(const Graph& g, const KVector& k, std::uint64_t budget)
        : k_(k.k), s_(k.s()), budget_(budget)
    {
        for (int v = 0; v < g.n(); ++v)
            for (int u = 0; u < v; ++u)
                if (g.has(u, v)) edges_.emplace_back(u, v);
    }

    size_t edge_count() const { return edges_.size(); }

    bool aborted() const { return abort_.load(std::memory_order_relaxed); }
    std::uint64_t total_nodes() const { return nodes_.load(); }

    bool allowed(const ColourState& st, size_t e, int c) const
    {
        auto [u, v] = edges_[e];
        return !mask_clique(st.adj[c], st.adj[c][u] & st.adj[c][v], k_[static_cast<size_t>(c)] - 2);
    }

    static void apply(ColourState& st, int u, int v, int c)
    {
        st.adj[c][u] |= std::uint64_t{1} << v;
        st.adj[c][v] |= std::uint64_t{1} << u;
    }
    static void undo(ColourState& st, int u, int v, int c)
    {
        st.adj[c][u] &= ~(std::uint64_t{1} << v);
        st.adj[c][v] &= ~(std::uint64_t{1} << u);
    }

    // Valid prefixes of the first `depth` edges.
    void prefixes(ColourState& st, size_t e, size_t depth, std::vector<ColourState>& out)
    {
        if (e == depth) {
            out.push_back(st);
            return;
        }
        auto [u, v] = edges_[e];
        for (int c = 0; c < s_; ++c) {
            if (!allowed(st, e, c)) continue;
            nodes_.fetch_add(1, std::memory_order_relaxed);
            apply(st, u, v, c);
            prefixes(st, e + 1, depth, out);
            undo(st, u, v, c);
        }
    }

    std::uint64_t run(ColourState& st, size_t e)
    {
        std::uint64_t local_nodes = 0;
        std::uint64_t r = dfs(st, e, local_nodes);
        flush(local_nodes);
        return r;
    }

private:
    void flush(std::uint64_t& local)
    {
        auto tot = nodes_.fetch_add(local, std::memory_order_relaxed) + local;
        local = 0;
        if (tot > budget_) abort_.store(true, std::memory_order_relaxed);
    }

    std::uint64_t dfs(ColourState& st, size_t e, std::uint64_t& local)
    {
        if (e == edges_.size()) return 1;
        auto [u, v] = edges_[e];
        std::uint64_t total = 0;
        bool last = e + 1 == edges_.size();
        for (int c = 0; c < s_; ++c) {
            if (!allowed(st, e, c)) continue;
            ++local;
            if (last) {
                ++total;
                continue;
            }
            apply(st, u, v, c);
            total += dfs(st, e + 1, local);
            undo(st, u, v, c);
            if ((local & 0x3fff) == 0) {
                flush(local);
                if (aborted()) return total;
            }
        }
        return total;
    }

    std::vector<int> k_;
    int s_;
    std::uint64_t budget_;
    std::vector<std::pair<int, int>> edges_;
    std::atomic<std::uint64_t> nodes_{0};
    std::atomic<bool> abort_{false};
};

inline int resolve_threads(int threads)
{
    if (threads > 0) return threads;
    unsigned h = std::thread::hardware_concurrency();
    return h ? static_cast<int>(h) : 1;
}

} // namespace detail

inline CountResult count_valid(const Graph& g, const KVector& k, const CountOptions& opt = {})
{
    k.validate();
    if (g.n() > 64) throw std::length_error("count_valid supports n <= 64");
    if (k.s() > detail::kMaxColours) throw std::length_error("count_valid supports s <= 16");
    if (opt.budget > 1'000'000'000'000'000ULL) throw std::invalid_argument("budget too large");
    auto t0 = std::chrono::steady_clock::now();
    detail::ValidCounter counter(g, k, opt.budget);
    CountResult res;
    int workers = detail::resolve_threads(opt.threads);
    size_t split = 0;
    {
        double vol = 1;
        while (split < counter.edge_count() && vol < 8.0 * workers) {
            vol *= k.s();
            ++split;
        }
    }
    auto st = std::make_unique<detail::ColourState>();
    std::vector<detail::ColourState> tasks;
    counter.prefixes(*st, 0, split, tasks);
    std::vector<std::uint64_t> partial(tasks.size(), 0);
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= tasks.size() || counter.aborted()) return;
            partial[i] = counter.run(tasks[i], split);
        }
    };
    int nthreads = std::min<int>(workers, static_cast<int>(std::max<size_t>(tasks.size(), 1)));
    if (nthreads <= 1) worker();
    else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    res.nodes = counter.total_nodes();
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (counter.aborted()) return res;
    res.complete = true;
    for (auto p : partial) res.count += BigCount(std::to_string(p));
    return res;
}

// Full enumeration of all s^e colourings; independent of the pruned search.
inline BigCount count_valid_naive(const Graph& g, const KVector& k)
{
    k.validate();
    auto edges = g.edge_list();
    double vol = 1;
    for (size_t i = 0; i < edges.size(); ++i) vol *= k.s();
    if (vol > 1e7) throw std::length_error("naive enumeration limited to s^e <= 1e7");
    std::vector<int> col(edges.size(), 0);
    BigCount total = 0;
    for (;;) {
        bool ok = true;
        for (int c = 0; c < k.s() && ok; ++c) {
            Graph h(g.n());
            for (size_t e = 0; e < edges.size(); ++e)
                if (col[e] == c) h.add_edge(edges[e].first, edges[e].second);
            if (contains_clique(h, k[c])) ok = false;
        }
        if (ok) total += 1;
        size_t i = 0;
        while (i < col.size() && ++col[i] == k.s()) col[i++] = 0;
        if (i == col.size()) break;
    }
    return total;
}

// Distinct two-colourings of K(m_1,...,m_{k-1}, ell) produced by the small-part procedure:
// each vertex x of the ell-part picks a part i and all x-to-part-i edges get colour 1.
inline BigCount count_procedure_colourings(const PartSizes& m, int ell, int k,
                                           std::uint64_t budget = 1'000'000'000)
{
    check_part_sizes(m);
    if (static_cast<int>(m.size()) != k - 1) throw std::invalid_argument("need k-1 parts");
    if (ell < 0) throw std::invalid_argument("ell must be >= 0");
    int total = 0;
    for (int x : m) total += x;
    if (total > 40 || (std::uint64_t{1} << total) > budget) throw BudgetExceeded("procedure enumeration over budget", 0);
    long cross = 0;
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = i + 1; j < m.size(); ++j) cross += static_cast<long>(m[i]) * m[j];
    std::vector<std::uint64_t> blocks;
    int off = 0;
    for (int x : m) {
        blocks.push_back(((std::uint64_t{1} << x) - 1) << off);
        off += x;
    }
    // Star colourings of one ell-vertex (bit set = colour 1) that some choice of i produces.
    std::uint64_t stars = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << total); ++mask) {
        for (auto b : blocks)
            if ((mask & b) == b) {
                ++stars;
                break;
            }
    }
    return ipow(BigCount(2), static_cast<unsigned long>(cross)) *
           ipow(BigCount(std::to_string(stars)), static_cast<unsigned long>(ell));
}

// u becomes a non-adjacent twin of v.
inline Graph symmetrize(const Graph& g, int u, int v)
{
    if (u == v) throw std::invalid_argument("symmetrize needs u != v");
    if (u < 0 || v < 0 || u >= g.n() || v >= g.n()) throw std::out_of_range("vertex out of range");
    if (g.has(u, v)) throw std::invalid_argument("symmetrize needs u, v non-adjacent");
    Graph h(g.n());
    for (auto [a, b] : g.edge_list())
        if (a != u && b != u) h.add_edge(a, b);
    g.nbr(v).for_each([&](int w) { h.add_edge(u, w); });
    return h;
}

struct SymmetrizeStep {
    int u, v;
    BigCount f_before, f_u, f_v;
    bool took_u;
};

struct SymmetrizeResult {
    Graph graph;
    int steps = 0;
    bool reached = false;
    BigCount initial_count, final_count;
    std::vector<SymmetrizeStep> log;
};

class SymmetrizationViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string adjacency_key(const Graph& g)
{
    std::string key;
    for (auto [u, v] : g.edge_list()) {
        key += std::to_string(u);
        key += ',';
        key += std::to_string(v);
        key += ';';
    }
    return key;
}

// Zykov-style symmetrization. G_u replaces v by a twin of u; G_v replaces u by a twin of v.
inline SymmetrizeResult symmetrize_toward_multipartite(const Graph& g0, const KVector& k, int max_steps,
                                                      const CountOptions& opt = {})
{
    auto count = [&](const Graph& h) {
        auto r = count_valid(h, k, opt);
        if (!r.complete) throw BudgetExceeded("count budget exceeded during symmetrization", r.nodes);
        return r.count;
    };
    SymmetrizeResult res;
    res.graph = g0;
    BigCount f = count(g0);
    res.initial_count = f;
    std::set<std::string> seen{adjacency_key(g0)};
    while (!is_complete_multipartite(res.graph)) {
        if (res.steps >= max_steps) {
            res.final_count = f;
            return res;
        }
        const Graph& g = res.graph;
        bool moved = false;
        for (int u = 0; u < g.n() && !moved; ++u)
            for (int v = u + 1; v < g.n() && !moved; ++v) {
                if (g.has(u, v) || g.nbr(u) == g.nbr(v)) continue;
                Graph gu = symmetrize(g, v, u);
                Graph gv = symmetrize(g, u, v);
                BigCount fu = count(gu), fv = count(gv);
                if (fu + fv < 2 * f)
                    throw SymmetrizationViolation("F(G_u)+F(G_v) < 2F(G) at pair " + std::to_string(u) + "," +
                                                  std::to_string(v));
                bool take_u = fu >= fv;
                std::string ku = adjacency_key(gu), kv = adjacency_key(gv);
                // Revisit: alternate to the other candidate, then fall through to the next pair.
                if (take_u && seen.count(ku)) take_u = false;
                else if (!take_u && seen.count(kv)) take_u = true;
                const std::string& kk = take_u ? ku : kv;
                if (seen.count(kk)) continue;
                BigCount fn = take_u ? fu : fv;
                if (fn < f) continue; // never step downward
                res.log.push_back({u, v, f, fu, fv, take_u});
                seen.insert(kk);
                res.graph = take_u ? gu : gv;
                f = fn;
                ++res.steps;
                moved = true;
            }
        if (!moved) break;
    }
    res.reached = is_complete_multipartite(res.graph);
    res.final_count = f;
    return res;
}

} // namespace erlab
