#pragma once

#include "erlab/pattern.hpp"
#include "erlab/rational.hpp"

#include <bit>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace erlab {

class HadamardMatrix {
public:
    HadamardMatrix() = default;
    explicit HadamardMatrix(int n) : n_(n), e_(static_cast<size_t>(n) * n, 1)
    {
        if (n < 1 || n > 64) throw std::invalid_argument("matrix order must be 1..64");
    }
    int n() const { return n_; }
    int at(int i, int j) const { return e_[static_cast<size_t>(i) * n_ + j]; }
    void put(int i, int j, int v)
    {
        if (v != 1 && v != -1) throw std::invalid_argument("entries must be +1 or -1");
        e_[static_cast<size_t>(i) * n_ + j] = static_cast<std::int8_t>(v);
    }
    void negate_row(int i)
    {
        for (int j = 0; j < n_; ++j) put(i, j, -at(i, j));
    }
    friend bool operator==(const HadamardMatrix&, const HadamardMatrix&) = default;

private:
    int n_ = 0;
    std::vector<std::int8_t> e_;
};

inline bool is_hadamard(const HadamardMatrix& h)
{
    int n = h.n();
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            long dot = 0;
            for (int c = 0; c < n; ++c) dot += h.at(i, c) * h.at(j, c);
            if (dot != (i == j ? n : 0)) return false;
        }
    return true;
}

inline HadamardMatrix sylvester(int m)
{
    if (m < 0 || m > 6) throw std::invalid_argument("sylvester order capped at 2^6");
    int n = 1 << m;
    HadamardMatrix h(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h.put(i, j, (std::popcount(static_cast<unsigned>(i & j)) & 1) ? -1 : 1);
    return h;
}

inline HadamardMatrix normalize(HadamardMatrix h)
{
    if (!is_hadamard(h)) throw std::invalid_argument("normalize needs a Hadamard matrix");
    for (int i = 0; i < h.n(); ++i)
        if (h.at(i, 0) < 0) h.negate_row(i);
    return h;
}

struct Bipartition {
    std::uint64_t a = 0, b = 0; // vertex masks
    friend bool operator==(const Bipartition&, const Bipartition&) = default;
    bool splits(int i, int j) const
    {
        bool ia = (a >> i) & 1u, ja = (a >> j) & 1u;
        return ia != ja;
    }
};

struct BicliqueDecomposition {
    int r = 0;
    std::vector<Bipartition> blocks;
    friend bool operator==(const BicliqueDecomposition&, const BicliqueDecomposition&) = default;
};

inline int pair_multiplicity(const BicliqueDecomposition& d, int i, int j)
{
    int m = 0;
    for (const auto& b : d.blocks)
        if (b.splits(i, j)) ++m;
    return m;
}

inline BicliqueDecomposition to_biclique_decomposition(const HadamardMatrix& h)
{
    if (!is_hadamard(h)) throw std::invalid_argument("not a Hadamard matrix");
    int n = h.n();
    if (n % 4 != 0) throw std::invalid_argument("order must be a multiple of 4");
    for (int i = 0; i < n; ++i)
        if (h.at(i, 0) != 1) throw std::invalid_argument("matrix not normalized (column 0 must be all +1)");
    BicliqueDecomposition d{n, {}};
    for (int j = 1; j < n; ++j) {
        Bipartition b;
        for (int i = 0; i < n; ++i) (h.at(i, j) > 0 ? b.a : b.b) |= std::uint64_t{1} << i;
        d.blocks.push_back(b);
    }
    return d;
}

class MultiplicityError : public std::invalid_argument {
public:
    MultiplicityError(const std::string& what, int i, int j, int mult)
        : std::invalid_argument(what), i(i), j(j), multiplicity(mult)
    {
    }
    int i, j, multiplicity;
};

// Column 0 all +1; column c is +1 on A_c and -1 on B_c.
inline HadamardMatrix from_biclique_decomposition(const BicliqueDecomposition& d, int t)
{
    int n = 4 * t;
    if (t < 1 || d.r != n) throw std::invalid_argument("decomposition must be on 4t vertices");
    if (static_cast<int>(d.blocks.size()) != n - 1) throw std::invalid_argument("decomposition needs 4t-1 blocks");
    std::uint64_t all = n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    for (const auto& b : d.blocks) {
        if ((b.a & b.b) || (b.a | b.b) != all) throw std::invalid_argument("block is not a bipartition of the vertex set");
        if (std::popcount(b.a) != 2 * t) throw std::invalid_argument("block classes must have size 2t");
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            int m = pair_multiplicity(d, i, j);
            if (m != 2 * t)
                throw MultiplicityError("pair " + std::to_string(i + 1) + "," + std::to_string(j + 1) + " covered " +
                                            std::to_string(m) + " times, expected " + std::to_string(2 * t),
                                        i, j, m);
        }
    HadamardMatrix h(n);
    for (int c = 0; c < n - 1; ++c)
        for (int i = 0; i < n; ++i) h.put(i, c + 1, ((d.blocks[c].a >> i) & 1u) ? 1 : -1);
    if (!is_hadamard(h)) throw std::logic_error("decomposition produced a non-Hadamard matrix");
    return h;
}

// multiplicities[j-1] copies of column j; colours numbered in column order.
inline ColourPattern pattern_from_columns(const HadamardMatrix& h, const std::vector<int>& multiplicities)
{
    int n = h.n();
    if (static_cast<int>(multiplicities.size()) == n) {
        if (multiplicities[0] != 0) throw std::invalid_argument("column 0 cannot be used as a colour");
    } else if (static_cast<int>(multiplicities.size()) != n - 1)
        throw std::invalid_argument("need one multiplicity per column 1..n-1");
    for (int i = 0; i < n; ++i)
        if (h.at(i, 0) != 1) throw std::invalid_argument("matrix not normalized");
    size_t off = multiplicities.size() == static_cast<size_t>(n) ? 1 : 0;
    std::vector<int> col_of_colour;
    for (size_t j = off; j < multiplicities.size(); ++j) {
        if (multiplicities[j] < 0) throw std::invalid_argument("negative multiplicity");
        for (int c = 0; c < multiplicities[j]; ++c) col_of_colour.push_back(static_cast<int>(j - off) + 1);
    }
    int s = static_cast<int>(col_of_colour.size());
    ColourPattern p(n, s);
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k) {
            ColourSet m = 0;
            for (int c = 0; c < s; ++c)
                if (h.at(i, col_of_colour[c]) != h.at(k, col_of_colour[c])) m |= static_cast<ColourSet>(1u << c);
            p.set(i, k, m);
        }
    return p;
}

inline std::string write_matrix(const HadamardMatrix& h)
{
    std::string out;
    for (int i = 0; i < h.n(); ++i) {
        for (int j = 0; j < h.n(); ++j) out += h.at(i, j) > 0 ? '+' : '-';
        out += '\n';
    }
    return out;
}

inline HadamardMatrix parse_matrix(const std::string& text)
{
    std::istringstream in(text);
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(line);
    }
    int n = static_cast<int>(rows.size());
    HadamardMatrix h(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n) throw std::runtime_error("matrix file: row length differs from order");
        for (int j = 0; j < n; ++j) {
            char c = rows[i][j];
            if (c != '+' && c != '-') throw std::runtime_error("matrix file: entries must be '+' or '-'");
            h.put(i, j, c == '+' ? 1 : -1);
        }
    }
    return h;
}

// All 4|4 splits of [8], each listed once (vertex 0 always in the first class).
inline std::vector<Bipartition> balanced_bipartitions(int n)
{
    std::vector<Bipartition> out;
    std::uint64_t all = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t a = 0; a <= all; ++a)
        if ((a & 1u) && std::popcount(a) == n / 2) out.push_back({a, all & ~a});
    return out;
}

// Order-n normalized Hadamard matrices with first column and last row all +1,
// counted by extending rows one at a time.
inline BigCount count_normalized_matrices(int n)
{
    if (n % 4 != 0 || n > 12) throw std::invalid_argument("count_normalized_matrices supports n in {4,8,12}");
    int w = n - 1; // free entries per row
    std::vector<std::uint32_t> cands;
    for (std::uint32_t m = 0; m < (1u << w); ++m)
        if (std::popcount(m) == n / 2) cands.push_back(m); // bit = -1 entry; orthogonal to the all-ones row
    std::vector<std::uint32_t> rows;
    BigCount total = 0;
    auto orth = [&](std::uint32_t x, std::uint32_t y) {
        int neg = std::popcount(x ^ y);
        return (n - 2 * neg) == 0;
    };
    std::function<void()> rec = [&] {
        if (static_cast<int>(rows.size()) == n - 1) {
            total += 1;
            return;
        }
        for (auto c : cands) {
            bool ok = true;
            for (auto r : rows)
                if (!orth(r, c)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            rows.push_back(c);
            rec();
            rows.pop_back();
        }
    };
    rec();
    return total;
}

} // namespace erlab
