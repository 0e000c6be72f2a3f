#pragma once

#include "erlab/colouring_count.hpp"
#include "erlab/graph.hpp"
#include "erlab/loglinear.hpp"
#include "erlab/rational.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace erlab {

using ColourSet = std::uint16_t;

class ColourPattern {
public:
    ColourPattern() = default;
    ColourPattern(int r, int s) : r_(r), s_(s), sets_(static_cast<size_t>(r) * r, 0)
    {
        if (r < 0) throw std::invalid_argument("negative pattern order");
        if (s < 1 || s > 16) throw std::invalid_argument("pattern colour count must be 1..16");
    }

    int r() const { return r_; }
    int s() const { return s_; }

    ColourSet get(int i, int j) const { return sets_[idx(i, j)]; }
    void set(int i, int j, ColourSet m)
    {
        if (i == j) throw std::invalid_argument("pattern pairs need i != j");
        if (m >> s_) throw std::invalid_argument("colour outside [s]");
        sets_[idx(i, j)] = m;
        sets_[idx(j, i)] = m;
    }
    int size(int i, int j) const { return std::popcount(get(i, j)); }

    Graph colour_graph(int c) const
    {
        Graph g(r_);
        for (int i = 0; i < r_; ++i)
            for (int j = i + 1; j < r_; ++j)
                if ((get(i, j) >> c) & 1u) g.add_edge(i, j);
        return g;
    }

    int min_pair_size() const
    {
        int m = s_;
        for (int i = 0; i < r_; ++i)
            for (int j = i + 1; j < r_; ++j) m = std::min(m, size(i, j));
        return m;
    }

    // Restriction to the listed vertices, in that order.
    ColourPattern induced(const std::vector<int>& keep) const
    {
        ColourPattern p(static_cast<int>(keep.size()), s_);
        for (size_t a = 0; a < keep.size(); ++a)
            for (size_t b = a + 1; b < keep.size(); ++b) p.set(static_cast<int>(a), static_cast<int>(b), get(keep[a], keep[b]));
        return p;
    }

    friend bool operator==(const ColourPattern&, const ColourPattern&) = default;

private:
    size_t idx(int i, int j) const
    {
        if (i < 0 || j < 0 || i >= r_ || j >= r_) throw std::out_of_range("pattern vertex out of range");
        return static_cast<size_t>(i) * r_ + j;
    }
    int r_ = 0, s_ = 1;
    std::vector<ColourSet> sets_;
};

inline ColourSet colour_mask(std::initializer_list<int> colours_one_based)
{
    ColourSet m = 0;
    for (int c : colours_one_based) m |= static_cast<ColourSet>(1u << (c - 1));
    return m;
}

inline ColourSet full_mask(int s)
{
    return static_cast<ColourSet>((1u << s) - 1);
}

inline ColourPattern uniform_pattern(int r, int s, ColourSet m)
{
    ColourPattern p(r, s);
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) p.set(i, j, m);
    return p;
}

inline bool validate_pattern(const ColourPattern& p, const KVector& k, int t)
{
    if (p.s() != k.s()) throw std::invalid_argument("pattern colour count differs from k");
    if (p.r() >= 2 && p.min_pair_size() < t) return false;
    for (int c = 0; c < p.s(); ++c)
        if (contains_clique(p.colour_graph(c), k[c])) return false;
    return true;
}

inline LogLinear log2_size(int t)
{
    return t <= 1 ? LogLinear(0) : LogLinear::log2_of(t);
}

inline double log2_size_d(int t)
{
    return t <= 1 ? 0.0 : std::log2(static_cast<double>(t));
}

using RationalWeights = std::vector<Rational>;
using FloatWeights = std::vector<double>;

inline void check_weights(const ColourPattern& p, const RationalWeights& a)
{
    if (static_cast<int>(a.size()) != p.r()) throw std::invalid_argument("weight length differs from r");
    Rational sum = 0;
    for (const auto& x : a) {
        if (x < 0) throw std::invalid_argument("negative weight");
        sum += x;
    }
    if (sum != 1) throw std::invalid_argument("weights must sum to 1");
}

inline void check_weights(const ColourPattern& p, const FloatWeights& a)
{
    if (static_cast<int>(a.size()) != p.r()) throw std::invalid_argument("weight length differs from r");
    double sum = 0;
    for (double x : a) {
        if (x < 0) throw std::invalid_argument("negative weight");
        sum += x;
    }
    if (std::abs(sum - 1) > 1e-12) throw std::invalid_argument("weights must sum to 1");
}

inline RationalWeights uniform_weights(int r)
{
    return RationalWeights(static_cast<size_t>(r), frac(1, r));
}

inline FloatWeights to_float(const RationalWeights& a)
{
    FloatWeights out;
    for (const auto& x : a) out.push_back(x.get_d());
    return out;
}

inline LogLinear q_vertex(const ColourPattern& p, const RationalWeights& a, int i)
{
    check_weights(p, a);
    if (i < 0 || i >= p.r()) throw std::out_of_range("vertex out of range");
    LogLinear v;
    for (int j = 0; j < p.r(); ++j)
        if (j != i) v += log2_size(p.size(i, j)) * a[j];
    return v;
}

inline double q_vertex(const ColourPattern& p, const FloatWeights& a, int i)
{
    check_weights(p, a);
    if (i < 0 || i >= p.r()) throw std::out_of_range("vertex out of range");
    double v = 0;
    for (int j = 0; j < p.r(); ++j)
        if (j != i) v += a[j] * log2_size_d(p.size(i, j));
    return v;
}

inline LogLinear q_value(const ColourPattern& p, const RationalWeights& a)
{
    check_weights(p, a);
    LogLinear v;
    for (int i = 0; i < p.r(); ++i)
        for (int j = i + 1; j < p.r(); ++j) v += log2_size(p.size(i, j)) * (2 * a[i] * a[j]);
    return v;
}

inline double q_value(const ColourPattern& p, const FloatWeights& a)
{
    check_weights(p, a);
    double v = 0;
    for (int i = 0; i < p.r(); ++i)
        for (int j = i + 1; j < p.r(); ++j) v += 2 * a[i] * a[j] * log2_size_d(p.size(i, j));
    return v;
}

// Pattern on r+1 vertices; the last vertex is the new one.
inline LogLinear ext_value(const ColourPattern& ext, const RationalWeights& a)
{
    if (static_cast<int>(a.size()) + 1 != ext.r()) throw std::invalid_argument("extension must have r+1 vertices");
    LogLinear v;
    int nv = ext.r() - 1;
    for (int i = 0; i < nv; ++i) v += log2_size(ext.size(i, nv)) * a[i];
    return v;
}

inline double ext_value(const ColourPattern& ext, const FloatWeights& a)
{
    if (static_cast<int>(a.size()) + 1 != ext.r()) throw std::invalid_argument("extension must have r+1 vertices");
    double v = 0;
    int nv = ext.r() - 1;
    for (int i = 0; i < nv; ++i) v += a[i] * log2_size_d(ext.size(i, nv));
    return v;
}

// (d_2, ..., d_s).
inline std::vector<Rational> density_vector(const ColourPattern& p, const RationalWeights& a)
{
    check_weights(p, a);
    std::vector<Rational> d(static_cast<size_t>(std::max(p.s() - 1, 0)), Rational(0));
    for (int i = 0; i < p.r(); ++i)
        for (int j = i + 1; j < p.r(); ++j) {
            int t = p.size(i, j);
            if (t >= 2) d[static_cast<size_t>(t - 2)] += 2 * a[i] * a[j];
        }
    return d;
}

inline LogLinear density_objective(const std::vector<Rational>& d)
{
    LogLinear v;
    for (size_t i = 0; i < d.size(); ++i) v += log2_size(static_cast<int>(i) + 2) * d[i];
    return v;
}

struct Clone {
    int i, j;
    bool strong;
    friend bool operator==(const Clone&, const Clone&) = default;
};

// i is a clone of j when rows agree off {i,j} and |phi(ij)| <= 1.
inline bool is_clone(const ColourPattern& p, int i, int j)
{
    if (i == j || p.size(i, j) > 1) return false;
    for (int k = 0; k < p.r(); ++k)
        if (k != i && k != j && p.get(i, k) != p.get(j, k)) return false;
    return true;
}

inline std::vector<Clone> find_clones(const ColourPattern& p)
{
    std::vector<Clone> out;
    for (int i = 0; i < p.r(); ++i)
        for (int j = 0; j < p.r(); ++j)
            if (is_clone(p, i, j)) out.push_back({i, j, p.get(i, j) == 0});
    return out;
}

struct CanonicalPattern {
    int r = 0, s = 0;
    std::vector<std::uint64_t> code;
    friend bool operator==(const CanonicalPattern&, const CanonicalPattern&) = default;
    friend auto operator<=>(const CanonicalPattern&, const CanonicalPattern&) = default;
};

namespace detail {

inline int pair_bit(int a, int b, int r)
{
    if (a > b) std::swap(a, b);
    return a * r - a * (a + 1) / 2 + (b - a - 1);
}

struct PatternEncoder {
    const ColourPattern& p;
    std::vector<std::vector<int>> blocks; // colours grouped by equal k
    std::vector<std::vector<std::pair<int, int>>> colour_edges;

    PatternEncoder(const ColourPattern& pat, const KVector& k) : p(pat)
    {
        for (int c = 0; c < p.s(); ++c) {
            if (c == 0 || k[c] != k[c - 1]) blocks.emplace_back();
            blocks.back().push_back(c);
        }
        colour_edges.resize(static_cast<size_t>(p.s()));
        for (int i = 0; i < p.r(); ++i)
            for (int j = i + 1; j < p.r(); ++j)
                for (int c = 0; c < p.s(); ++c)
                    if ((p.get(i, j) >> c) & 1u) colour_edges[c].emplace_back(i, j);
    }

    // perm[v] = new label of v. Colour graphs sorted within each block.
    void encode(const std::vector<int>& perm, std::vector<std::uint64_t>& out) const
    {
        out.clear();
        for (const auto& blk : blocks) {
            size_t start = out.size();
            for (int c : blk) {
                std::uint64_t code = 0;
                for (auto [i, j] : colour_edges[c]) code |= std::uint64_t{1} << pair_bit(perm[i], perm[j], p.r());
                out.push_back(code);
            }
            std::sort(out.begin() + static_cast<long>(start), out.end());
        }
    }
};

} // namespace detail

inline CanonicalPattern canonical_form(const ColourPattern& p, const KVector& k)
{
    if (p.s() != k.s()) throw std::invalid_argument("pattern colour count differs from k");
    if (p.r() > 10) throw std::length_error("canonical_form supports r <= 10");
    int r = p.r();
    detail::PatternEncoder enc(p, k);
    CanonicalPattern best{r, p.s(), {}};
    std::vector<std::uint64_t> cur;
    bool have = false;
    auto consider = [&](const std::vector<int>& perm) {
        enc.encode(perm, cur);
        if (!have || cur < best.code) {
            best.code = cur;
            have = true;
        }
    };
    if (r <= 8) {
        std::vector<int> perm(static_cast<size_t>(r));
        std::iota(perm.begin(), perm.end(), 0);
        do consider(perm);
        while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }
    // Refined search: vertices must keep the order of an isomorphism-invariant signature.
    std::vector<std::vector<int>> sig(static_cast<size_t>(r));
    for (int v = 0; v < r; ++v) {
        auto& sv = sig[v];
        for (const auto& blk : enc.blocks) {
            std::vector<int> degs;
            for (int c : blk) {
                int d = 0;
                for (int u = 0; u < r; ++u)
                    if (u != v && ((p.get(u, v) >> c) & 1u)) ++d;
                degs.push_back(d);
            }
            std::sort(degs.begin(), degs.end());
            sv.insert(sv.end(), degs.begin(), degs.end());
        }
        std::vector<int> sizes;
        for (int u = 0; u < r; ++u)
            if (u != v) sizes.push_back(p.size(u, v));
        std::sort(sizes.begin(), sizes.end());
        sv.insert(sv.end(), sizes.begin(), sizes.end());
    }
    std::vector<int> order(static_cast<size_t>(r));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sig[a] < sig[b]; });
    std::vector<std::pair<int, int>> cls; // [start, end) ranges in order
    for (int i = 0; i < r;) {
        int j = i;
        while (j < r && sig[order[j]] == sig[order[i]]) ++j;
        cls.emplace_back(i, j);
        i = j;
    }
    std::vector<int> perm(static_cast<size_t>(r));
    // order[pos] is placed at label pos; enumerate permutations inside each class.
    std::function<void(size_t)> rec = [&](size_t ci) {
        if (ci == cls.size()) {
            for (int pos = 0; pos < r; ++pos) perm[order[pos]] = pos;
            consider(perm);
            return;
        }
        auto [a, b] = cls[ci];
        std::sort(order.begin() + a, order.begin() + b);
        do rec(ci + 1);
        while (std::next_permutation(order.begin() + a, order.begin() + b));
    };
    rec(0);
    return best;
}

inline std::string write_pattern(const ColourPattern& p, const KVector& k)
{
    if (p.s() != k.s()) throw std::invalid_argument("pattern colour count differs from k");
    std::ostringstream os;
    os << p.r() << ' ' << p.s() << '\n';
    os << "k: ";
    for (int c = 0; c < k.s(); ++c) os << (c ? "," : "") << k[c];
    os << '\n';
    for (int i = 0; i < p.r(); ++i)
        for (int j = i + 1; j < p.r(); ++j) {
            os << i + 1 << ' ' << j + 1 << ':';
            bool first = true;
            for (int c = 0; c < p.s(); ++c)
                if ((p.get(i, j) >> c) & 1u) {
                    os << (first ? " " : ",") << c + 1;
                    first = false;
                }
            os << '\n';
        }
    return os.str();
}

struct PatternFile {
    ColourPattern pattern;
    KVector k;
};

inline PatternFile read_pattern(std::istream& in)
{
    auto bad = [](const std::string& why) { return std::runtime_error("pattern file: " + why); };
    std::string line;
    if (!std::getline(in, line)) throw bad("missing header");
    int r = 0, s = 0;
    {
        std::istringstream ls(line);
        if (!(ls >> r >> s)) throw bad("header must be 'r s'");
    }
    if (!std::getline(in, line) || line.rfind("k:", 0) != 0) throw bad("second line must start with 'k:'");
    KVector k;
    {
        std::string rest = line.substr(2);
        std::stringstream ls(rest);
        std::string tok;
        while (std::getline(ls, tok, ',')) k.k.push_back(std::stoi(tok));
    }
    if (k.s() != s) throw bad("k list length differs from s");
    ColourPattern p(r, s);
    std::vector<bool> seen(static_cast<size_t>(r) * r, false);
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos) throw bad("pair line without ':'");
        std::istringstream ls(line.substr(0, colon));
        int i, j;
        if (!(ls >> i >> j) || i < 1 || j < 1 || i > r || j > r || i >= j) throw bad("bad pair '" + line + "'");
        if (seen[static_cast<size_t>(i - 1) * r + (j - 1)]) throw bad("duplicate pair");
        seen[static_cast<size_t>(i - 1) * r + (j - 1)] = true;
        ColourSet m = 0;
        std::stringstream cs(line.substr(colon + 1));
        std::string tok;
        while (std::getline(cs, tok, ',')) {
            if (tok.find_first_not_of(" \t\r") == std::string::npos) continue;
            int c = std::stoi(tok);
            if (c < 1 || c > s) throw bad("colour out of range");
            m |= static_cast<ColourSet>(1u << (c - 1));
        }
        p.set(i - 1, j - 1, m);
    }
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j)
            if (!seen[static_cast<size_t>(i) * r + j]) throw bad("missing pair line");
    return {p, k};
}

inline PatternFile parse_pattern(const std::string& text)
{
    std::istringstream in(text);
    return read_pattern(in);
}

} // namespace erlab
