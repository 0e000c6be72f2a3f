#pragma once

#include "erlab/colouring_count.hpp"
#include "erlab/graph.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace erlab::testing {

inline Graph graph_from_mask(int n, std::uint64_t mask)
{
    Graph g(n);
    int bit = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++bit)
            if ((mask >> bit) & 1u) g.add_edge(u, v);
    return g;
}

inline std::uint64_t graph_mask(const Graph& g)
{
    std::uint64_t m = 0;
    int bit = 0;
    for (int u = 0; u < g.n(); ++u)
        for (int v = u + 1; v < g.n(); ++v, ++bit)
            if (g.has(u, v)) m |= std::uint64_t{1} << bit;
    return m;
}

// One representative per isomorphism class, smallest edge mask under relabelling.
inline std::vector<Graph> nonisomorphic_graphs(int n)
{
    int pairs = n * (n - 1) / 2;
    std::vector<int> perm(static_cast<size_t>(n));
    std::set<std::uint64_t> seen;
    std::vector<Graph> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << pairs); ++m) {
        Graph g = graph_from_mask(n, m);
        std::iota(perm.begin(), perm.end(), 0);
        std::uint64_t best = m;
        do best = std::min(best, graph_mask(g.permuted(perm)));
        while (std::next_permutation(perm.begin(), perm.end()));
        if (seen.insert(best).second) out.push_back(graph_from_mask(n, best));
    }
    return out;
}

inline Graph random_graph(int n, double p, std::mt19937_64& rng)
{
    std::bernoulli_distribution coin(p);
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng)) g.add_edge(u, v);
    return g;
}

inline bool clique_brute(const Graph& g, int k)
{
    int n = g.n();
    if (k <= 0) return true;
    if (k > n) return false;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
        if (std::popcount(s) != k) continue;
        bool ok = true;
        for (int u = 0; u < n && ok; ++u)
            if ((s >> u) & 1u)
                for (int v = u + 1; v < n && ok; ++v)
                    if (((s >> v) & 1u) && !g.has(u, v)) ok = false;
        if (ok) return true;
    }
    return false;
}

// Inclusion-exclusion over the events "clique Q is monochromatic in colour c".
inline BigCount count_by_inclusion_exclusion(const Graph& g, const KVector& k)
{
    auto edges = g.edge_list();
    std::map<std::pair<int, int>, int> index;
    for (size_t e = 0; e < edges.size(); ++e) index[edges[e]] = static_cast<int>(e);
    struct Event {
        int colour;
        std::vector<int> edges;
    };
    std::vector<Event> events;
    int n = g.n();
    for (int c = 0; c < k.s(); ++c)
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
            if (std::popcount(s) != k[c]) continue;
            std::vector<int> es;
            bool clique = true;
            for (int u = 0; u < n && clique; ++u)
                for (int v = u + 1; v < n && clique; ++v)
                    if (((s >> u) & 1u) && ((s >> v) & 1u)) {
                        if (!g.has(u, v)) clique = false;
                        else es.push_back(index[{u, v}]);
                    }
            if (clique) events.push_back({c, es});
        }
    if (events.size() > 24) throw std::length_error("too many events for the oracle");
    BigCount total = 0;
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << events.size()); ++sub) {
        std::vector<int> forced(edges.size(), -1);
        bool empty = false;
        for (size_t i = 0; i < events.size() && !empty; ++i) {
            if (!((sub >> i) & 1u)) continue;
            for (int e : events[i].edges) {
                if (forced[e] >= 0 && forced[e] != events[i].colour) empty = true;
                forced[e] = events[i].colour;
            }
        }
        if (empty) continue;
        long free = 0;
        for (int f : forced) free += f < 0;
        BigCount term = ipow(BigCount(k.s()), static_cast<unsigned long>(free));
        if (std::popcount(sub) % 2) total -= term;
        else total += term;
    }
    return total;
}

} // namespace erlab::testing
