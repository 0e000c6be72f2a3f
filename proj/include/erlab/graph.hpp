#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace erlab {

constexpr int kMaxVertices = 512;

// Fixed-capacity vertex set; the first word covers the common n <= 64 case.
class Bitset {
public:
    static constexpr int kWords = kMaxVertices / 64;

    void set(int i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(int i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }

    int count() const
    {
        int c = 0;
        for (auto w : w_) c += std::popcount(w);
        return c;
    }
    bool any() const
    {
        for (auto w : w_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    // Lowest set index, or -1.
    int first() const
    {
        for (int i = 0; i < kWords; ++i)
            if (w_[i]) return i * 64 + std::countr_zero(w_[i]);
        return -1;
    }

    template <class F>
    void for_each(F&& f) const
    {
        for (int i = 0; i < kWords; ++i) {
            std::uint64_t w = w_[i];
            while (w) {
                f(i * 64 + std::countr_zero(w));
                w &= w - 1;
            }
        }
    }

    std::vector<int> to_vector() const
    {
        std::vector<int> out;
        for_each([&](int v) { out.push_back(v); });
        return out;
    }

    Bitset& operator&=(const Bitset& o)
    {
        for (int i = 0; i < kWords; ++i) w_[i] &= o.w_[i];
        return *this;
    }
    Bitset& operator|=(const Bitset& o)
    {
        for (int i = 0; i < kWords; ++i) w_[i] |= o.w_[i];
        return *this;
    }
    Bitset& minus(const Bitset& o)
    {
        for (int i = 0; i < kWords; ++i) w_[i] &= ~o.w_[i];
        return *this;
    }
    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    friend bool operator==(const Bitset&, const Bitset&) = default;
    friend auto operator<=>(const Bitset&, const Bitset&) = default;

    std::uint64_t word(int i) const { return w_[i]; }

    static Bitset range(int n)
    {
        Bitset b;
        for (int i = 0; i < n; ++i) b.set(i);
        return b;
    }

private:
    std::array<std::uint64_t, kWords> w_{};
};

class Graph {
public:
    Graph() = default;
    explicit Graph(int n) : n_(n), adj_(static_cast<size_t>(n))
    {
        if (n < 0 || n > kMaxVertices) throw std::length_error("graph order out of range");
    }

    int n() const { return n_; }

    bool has(int u, int v) const { return adj_[u].test(v); }
    void add_edge(int u, int v)
    {
        check(u);
        check(v);
        if (u == v) throw std::invalid_argument("self-loop");
        adj_[u].set(v);
        adj_[v].set(u);
    }
    void remove_edge(int u, int v)
    {
        adj_[u].reset(v);
        adj_[v].reset(u);
    }
    const Bitset& nbr(int v) const { return adj_[v]; }
    int degree(int v) const { return adj_[v].count(); }

    long edges() const
    {
        long e = 0;
        for (const auto& row : adj_) e += row.count();
        return e / 2;
    }

    // Edges (u,v) with u < v in lexicographic order.
    std::vector<std::pair<int, int>> edge_list() const
    {
        std::vector<std::pair<int, int>> out;
        for (int u = 0; u < n_; ++u)
            adj_[u].for_each([&](int v) {
                if (v > u) out.emplace_back(u, v);
            });
        return out;
    }

    Graph complement() const
    {
        Graph g(n_);
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v)
                if (!has(u, v)) g.add_edge(u, v);
        return g;
    }

    Graph permuted(const std::vector<int>& perm) const
    {
        Graph g(n_);
        for (auto [u, v] : edge_list()) g.add_edge(perm[u], perm[v]);
        return g;
    }

    friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.adj_ == b.adj_; }

private:
    void check(int v) const
    {
        if (v < 0 || v >= n_) throw std::out_of_range("vertex out of range");
    }
    int n_ = 0;
    std::vector<Bitset> adj_;
};

using PartSizes = std::vector<int>;

inline void check_part_sizes(const PartSizes& m)
{
    for (size_t i = 0; i < m.size(); ++i) {
        if (m[i] < 1) throw std::invalid_argument("part sizes must be positive");
        if (i && m[i] > m[i - 1]) throw std::invalid_argument("part sizes must be nonincreasing");
    }
}

inline Graph complete_multipartite(const std::vector<int>& parts)
{
    long total = 0;
    for (int p : parts) {
        if (p < 0) throw std::invalid_argument("negative part size");
        total += p;
    }
    if (total > kMaxVertices) throw std::length_error("multipartite graph too large");
    Graph g(static_cast<int>(total));
    std::vector<int> part_of;
    for (size_t i = 0; i < parts.size(); ++i)
        for (int j = 0; j < parts[i]; ++j) part_of.push_back(static_cast<int>(i));
    for (int u = 0; u < g.n(); ++u)
        for (int v = u + 1; v < g.n(); ++v)
            if (part_of[u] != part_of[v]) g.add_edge(u, v);
    return g;
}

inline std::vector<int> turan_parts(int r, int n)
{
    std::vector<int> parts(static_cast<size_t>(r), n / r);
    for (int i = 0; i < n % r; ++i) ++parts[i];
    return parts;
}

inline Graph turan_graph(int r, int n)
{
    if (r < 1 || r > n) throw std::invalid_argument("turan_graph needs 1 <= r <= n");
    return complete_multipartite(turan_parts(r, n));
}

inline long turan_number(int r, int n)
{
    if (r < 1 || n < 0) throw std::invalid_argument("turan_number needs r >= 1, n >= 0");
    long q = n / r, rem = n % r;
    long sq = (r - rem) * q * q + rem * (q + 1) * (q + 1);
    return (static_cast<long>(n) * n - sq) / 2;
}

namespace detail {

// Greedy colouring of cand; returns vertices in colour order with their colour numbers.
inline void greedy_colour_order(const Graph& g, Bitset cand, std::vector<int>& order,
                                std::vector<int>& colour)
{
    order.clear();
    colour.clear();
    int c = 0;
    while (cand.any()) {
        ++c;
        Bitset q = cand;
        while (q.any()) {
            int v = q.first();
            q.reset(v);
            q.minus(g.nbr(v));
            cand.reset(v);
            order.push_back(v);
            colour.push_back(c);
        }
    }
}

inline bool clique_search(const Graph& g, Bitset cand, int size, int k)
{
    if (size >= k) return true;
    if (size + cand.count() < k) return false;
    std::vector<int> order, colour;
    greedy_colour_order(g, cand, order, colour);
    for (size_t idx = order.size(); idx-- > 0;) {
        if (size + colour[idx] < k) return false;
        int v = order[idx];
        if (clique_search(g, cand & g.nbr(v), size + 1, k)) return true;
        cand.reset(v);
    }
    return false;
}

} // namespace detail

// True iff g[within] contains K_k.
inline bool contains_clique_in(const Graph& g, const Bitset& within, int k)
{
    if (k <= 0) return true;
    return detail::clique_search(g, within, 0, k);
}

inline bool contains_clique(const Graph& g, int k)
{
    if (k < 1) throw std::invalid_argument("clique size must be >= 1");
    return contains_clique_in(g, Bitset::range(g.n()), k);
}

inline bool is_maximally_kfree(const Graph& g, int k)
{
    if (contains_clique(g, k)) throw std::invalid_argument("graph contains the forbidden clique");
    for (int u = 0; u < g.n(); ++u)
        for (int v = u + 1; v < g.n(); ++v) {
            if (g.has(u, v)) continue;
            if (!contains_clique_in(g, g.nbr(u) & g.nbr(v), k - 2)) return false;
        }
    return true;
}

// Non-adjacency is an equivalence relation.
inline bool is_complete_multipartite(const Graph& g)
{
    for (int u = 0; u < g.n(); ++u)
        for (int v = u + 1; v < g.n(); ++v)
            if (!g.has(u, v) && !(g.nbr(u) == g.nbr(v))) return false;
    return true;
}

inline std::string write_graph(const Graph& g)
{
    std::ostringstream os;
    os << g.n() << '\n';
    for (auto [u, v] : g.edge_list()) os << u << ' ' << v << '\n';
    return os.str();
}

inline Graph read_graph(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("graph file: missing vertex count");
    int n = 0;
    {
        std::istringstream ls(line);
        if (!(ls >> n) || n < 0) throw std::runtime_error("graph file: bad vertex count");
    }
    Graph g(n);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        int u, v;
        std::string extra;
        if (!(ls >> u >> v) || (ls >> extra))
            throw std::runtime_error("graph file: bad edge on line " + std::to_string(lineno));
        if (u < 0 || v < 0 || u >= n || v >= n || u == v)
            throw std::runtime_error("graph file: invalid edge on line " + std::to_string(lineno));
        if (g.has(u, v)) throw std::runtime_error("graph file: duplicate edge on line " + std::to_string(lineno));
        g.add_edge(u, v);
    }
    return g;
}

inline Graph parse_graph(const std::string& text)
{
    std::istringstream in(text);
    return read_graph(in);
}

} // namespace erlab
