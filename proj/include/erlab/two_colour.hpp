#pragma once

#include "erlab/graph.hpp"
#include "erlab/pattern.hpp"
#include "erlab/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace erlab {

using OffsetVector = std::vector<int>;

// sum over patterns of prod_{i<j} |phi(ij)|^{m_i m_j}
inline BigCount perf_value(const std::vector<ColourPattern>& patterns, const PartSizes& m)
{
    BigCount total = 0;
    for (const auto& p : patterns) {
        if (p.r() != static_cast<int>(m.size())) throw std::invalid_argument("pattern order differs from |m|");
        BigCount prod = 1;
        for (int i = 0; i < p.r(); ++i)
            for (int j = i + 1; j < p.r(); ++j) {
                int t = std::popcount(static_cast<unsigned>(p.get(i, j)));
                prod *= ipow(BigCount(t), static_cast<unsigned long>(m[i]) * static_cast<unsigned long>(m[j]));
            }
        total += prod;
    }
    return total;
}

namespace detail {

inline void check_nonincreasing(const std::vector<int>& v, const char* what)
{
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1]) throw std::invalid_argument(std::string(what) + " must be nonincreasing");
}

inline long pair_product_sum(const std::vector<int>& v)
{
    long s = 0;
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = i + 1; j < v.size(); ++j) s += static_cast<long>(v[i]) * v[j];
    return s;
}

} // namespace detail

inline Rational h_count(const PartSizes& m, int ell)
{
    detail::check_nonincreasing(m, "m");
    if (ell < 0) throw std::invalid_argument("ell must be nonnegative");
    long total = std::accumulate(m.begin(), m.end(), 0L);
    Rational inner = 0;
    for (int x : m) inner += pow2(-x);
    return pow2(detail::pair_product_sum(m) + ell * total) * qpow(inner, ell);
}

// Bonferroni lower form: (sum 2^{-m_i} - sum_{i<i'} 2^{-m_i-m_i'})^ell
inline Rational h_star(const PartSizes& m, int ell)
{
    detail::check_nonincreasing(m, "m");
    if (ell < 0) throw std::invalid_argument("ell must be nonnegative");
    long total = std::accumulate(m.begin(), m.end(), 0L);
    Rational inner = 0;
    for (size_t i = 0; i < m.size(); ++i) {
        inner += pow2(-m[i]);
        for (size_t j = i + 1; j < m.size(); ++j) inner -= pow2(-m[i] - m[j]);
    }
    return pow2(detail::pair_product_sum(m) + ell * total) * qpow(inner, ell);
}

inline Rational h_tilde(const OffsetVector& b, int ell)
{
    if (ell < 0) throw std::invalid_argument("ell must be nonnegative");
    long sum = std::accumulate(b.begin(), b.end(), 0L);
    Rational inner = 0;
    for (int x : b) inner += pow2(-x);
    return pow2(ell * sum + detail::pair_product_sum(b)) * qpow(inner, ell);
}

inline double h_tilde_log2(const OffsetVector& b, int ell)
{
    long sum = std::accumulate(b.begin(), b.end(), 0L);
    double inner = 0;
    for (int x : b) inner += std::exp2(-x);
    return static_cast<double>(ell * sum + detail::pair_product_sum(b)) + ell * std::log2(inner);
}

inline Rational f_closed(int k, int j, int ell)
{
    if (k < 3 || j < 0 || j > k - 2 || ell < 0 || ell > k - 1) throw std::invalid_argument("f_closed: (k,j,ell) out of range");
    if (ell <= j) return pow2(-binom_small(ell, 2)) * qpow(frac(2 * (k - 1) - (j - ell), 2), ell);
    return pow2(j - binom_small(ell + 1, 2)) * qpow(Rational(k - 1 + ell - j), ell);
}

// Offsets (1^{j-ell}, 0, ...) or (0, ..., (-1)^{ell-j}) of length k-1.
inline OffsetVector bridge_offsets(int k, int j, int ell)
{
    OffsetVector b(static_cast<size_t>(k - 1), 0);
    if (ell <= j)
        for (int i = 0; i < j - ell; ++i) b[i] = 1;
    else
        for (int i = 0; i < ell - j; ++i) b[k - 2 - i] = -1;
    return b;
}

struct SmallPartResult {
    int ell = -1;
    OffsetVector b;
    Rational value;
    Rational margin;      // best over second best, over all (b, ell)
    Rational ell_margin;  // best over the best with a different ell
    int runner_up_ell = -1;
    OffsetVector runner_up_b;
    bool unique = true;
    long evaluated = 0;
    bool shift_consistent = true; // the j + (k-1) family has the same argmax and a constant ratio
    bool balanced = false;        // b_1 - b_{k-1} <= 1
};

namespace detail {

struct Candidate {
    double lg;
    int ell;
    OffsetVector b;
};

class SmallPartSearch {
public:
    SmallPartSearch(int k, int spread, int keep) : k_(k), spread_(spread), keep_(keep) {}

    void run(int target_sum, int ell_bound)
    {
        for (int ell = 0; ell <= ell_bound; ++ell) {
            ell_ = ell;
            int sum = target_sum - ell;
            int d = k_ - 1;
            // b_{k-1} = v: need d*v <= sum <= d*(v+spread)
            int vmax = floordiv(sum, d);
            int vmin = vmax - spread_;
            for (int v = vmin; v <= vmax; ++v) {
                cur_.assign(static_cast<size_t>(d), 0);
                cur_[d - 1] = v;
                min_ = v;
                rec(0, v + spread_, sum - v, d - 1);
            }
        }
    }

    std::vector<Candidate>& top() { return top_; }
    long evaluated() const { return evaluated_; }

private:
    static int floordiv(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

    // Positions idx..slots-1 take values in [min_, hi], nonincreasing, summing to rest;
    // the last slot (value min_) is filled already.
    void rec(int idx, int hi, int rest, int slots)
    {
        if (idx == slots) {
            if (rest != 0) return;
            ++evaluated_;
            double lg = h_tilde_log2(cur_, ell_);
            offer(lg);
            return;
        }
        int left = slots - idx;
        for (int x = hi; x >= min_; --x) {
            if (static_cast<long>(x) * left < rest) break;
            if (static_cast<long>(min_) * (left - 1) + x > rest) continue;
            cur_[idx] = x;
            rec(idx + 1, x, rest - x, slots);
        }
    }

    void offer(double lg)
    {
        if (static_cast<int>(top_.size()) == keep_ && lg <= top_.back().lg) return;
        Candidate c{lg, ell_, cur_};
        auto it = std::upper_bound(top_.begin(), top_.end(), c,
                                   [](const Candidate& a, const Candidate& b) { return a.lg > b.lg; });
        top_.insert(it, std::move(c));
        if (static_cast<int>(top_.size()) > keep_) top_.pop_back();
    }

    int k_, spread_, keep_;
    int ell_ = 0, min_ = 0;
    OffsetVector cur_;
    std::vector<Candidate> top_;
    long evaluated_ = 0;
};

struct ExactRanked {
    Rational value;
    int ell;
    OffsetVector b;
};

inline std::vector<ExactRanked> rank_exact(const std::vector<Candidate>& top)
{
    std::vector<ExactRanked> out;
    for (const auto& c : top) out.push_back({h_tilde(c.b, c.ell), c.ell, c.b});
    std::stable_sort(out.begin(), out.end(), [](const ExactRanked& a, const ExactRanked& b) { return a.value > b.value; });
    return out;
}

} // namespace detail

class TieDetected : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Maximizes h_tilde(b; ell) over nonincreasing b of length k-1 with spread <= spread_bound,
// 0 <= ell <= ell_bound and sum(b) + ell = j.
inline SmallPartResult best_small_part(int k, int j, int spread_bound, int ell_bound)
{
    if (k < 3) throw std::invalid_argument("k must be at least 3");
    if (spread_bound < 0 || ell_bound < 0) throw std::invalid_argument("bounds must be nonnegative");
    const int keep = 64;
    detail::SmallPartSearch base(k, spread_bound, keep);
    base.run(j, ell_bound);
    auto ranked = detail::rank_exact(base.top());
    if (ranked.size() < 2) throw std::invalid_argument("search space has fewer than two candidates");
    // every candidate the float screen dropped lies below the kept floor
    double floor_lg = base.top().back().lg;
    if (static_cast<int>(base.top().size()) == keep && floor_lg > base.top().front().lg - 1e-6)
        throw std::runtime_error("float screen too coarse: widen the kept candidate list");
    SmallPartResult res;
    res.evaluated = base.evaluated();
    res.ell = ranked[0].ell;
    res.b = ranked[0].b;
    res.value = ranked[0].value;
    res.balanced = res.b.front() - res.b.back() <= 1;
    res.margin = ranked[0].value / ranked[1].value;
    res.unique = ranked[0].value != ranked[1].value;
    for (size_t i = 1; i < ranked.size(); ++i)
        if (ranked[i].ell != res.ell) {
            res.ell_margin = ranked[0].value / ranked[i].value;
            res.runner_up_ell = ranked[i].ell;
            res.runner_up_b = ranked[i].b;
            break;
        }
    if (res.runner_up_ell < 0) res.ell_margin = 0;
    if (!res.unique) {
        std::string msg = "tie between maximizers ell=" + std::to_string(ranked[0].ell) +
                          " and ell=" + std::to_string(ranked[1].ell) + " for k=" + std::to_string(k) +
                          ", j=" + std::to_string(j);
        throw TieDetected(msg);
    }
    // Shifting every offset by one maps sum j to j + (k-1) and scales h_tilde by a constant.
    detail::SmallPartSearch shifted(k, spread_bound, keep);
    shifted.run(j + k - 1, ell_bound);
    auto rs = detail::rank_exact(shifted.top());
    OffsetVector expect = res.b;
    for (auto& x : expect) ++x;
    Rational factor = pow2(static_cast<long>(k - 2) * j + binom_small(k - 1, 2));
    res.shift_consistent = rs[0].ell == res.ell && rs[0].b == expect && rs[0].value == res.value * factor;
    return res;
}

// ---- ratios used to balance part sizes ----

// Ordered partitions (I_1..I_q) of m's indices, some parts empty, counted once up to reordering
// parts with equal ell; sums prod_j (sum_{i in I_j} 2^{-m_i})^{ell_j}. Exploratory, q <= 3.
inline Rational g_partition_sum(const PartSizes& m, const std::vector<int>& ells)
{
    int q = static_cast<int>(ells.size()), n = static_cast<int>(m.size());
    if (q < 1 || q > 3) throw std::invalid_argument("g_partition_sum supports 1 <= q <= 3");
    if (n < 1 || n > 12) throw std::invalid_argument("need 1..12 parts");
    detail::check_nonincreasing(ells, "ell");
    for (int l : ells)
        if (l < 0) throw std::invalid_argument("ell must be nonnegative");
    std::set<std::vector<std::uint32_t>> seen;
    Rational total = 0;
    long codes = 1;
    for (int i = 0; i < n; ++i) codes *= q;
    for (long code = 0; code < codes; ++code) {
        std::vector<std::uint32_t> parts(static_cast<size_t>(q), 0);
        for (long x = code, i = 0; i < n; ++i, x /= q) parts[x % q] |= 1u << i;
        for (int a = 0; a < q;) {
            int b = a;
            while (b < q && ells[b] == ells[a]) ++b;
            std::sort(parts.begin() + a, parts.begin() + b);
            a = b;
        }
        if (!seen.insert(parts).second) continue;
        Rational prod = 1;
        for (int j = 0; j < q; ++j) {
            Rational inner = 0;
            for (int i = 0; i < n; ++i)
                if ((parts[j] >> i) & 1u) inner += pow2(-m[i]);
            prod *= qpow(inner, ells[j]);
        }
        total += prod;
    }
    return total;
}

// Upper bound on the procedure count with small parts of sizes ells.
inline Rational f_procedure_bound(const PartSizes& m, const std::vector<int>& ells)
{
    long total_m = std::accumulate(m.begin(), m.end(), 0L), total_l = std::accumulate(ells.begin(), ells.end(), 0L);
    return pow2(detail::pair_product_sum(m) + total_m * total_l) * g_partition_sum(m, ells);
}

// g_out / g_in with dJ = m_{J(1)} - m_{J(r)} and spread = m_1 - m_r.
inline Rational g_ratios(const PartSizes& m, std::pair<int, int> j_neighbour_sums, int t1, int t2, bool edge_in_J)
{
    if (m.size() < 2) throw std::invalid_argument("m needs at least two parts");
    if (!(t1 >= t2 && t2 >= 1)) throw std::invalid_argument("need t1 >= t2 >= 1");
    int dJ = j_neighbour_sums.first - j_neighbour_sums.second;
    int spread = m.front() - m.back();
    Rational ratio = frac(t2, t1);
    if (edge_in_J) return qpow(ratio, dJ) * qpow(Rational(t2), spread) / t1;
    return qpow(ratio, dJ) * qpow(Rational(t2), spread - 1);
}

// Balanced offsets with the same sum, nonincreasing.
inline OffsetVector balanced_offsets(const OffsetVector& b)
{
    long sum = std::accumulate(b.begin(), b.end(), 0L);
    long n = static_cast<long>(b.size());
    long lo = sum >= 0 ? sum / n : -((-sum + n - 1) / n);
    long extra = sum - lo * n;
    OffsetVector out(b.size(), static_cast<int>(lo));
    for (long i = 0; i < extra; ++i) out[static_cast<size_t>(i)] += 1;
    return out;
}

// Sum over the 35 splits of [8] into two 4-sets: weight 4^{b_i b_j} inside a class, 3^{b_i b_j} across.
inline Rational dcheck_sum(const OffsetVector& b)
{
    if (b.size() != 8) throw std::invalid_argument("offset vectors must have length 8");
    Rational total = 0;
    for (unsigned a = 0; a < 256; ++a) {
        if (!(a & 1u) || std::popcount(a) != 4) continue;
        long e4 = 0, e3 = 0;
        for (int i = 0; i < 8; ++i)
            for (int j = i + 1; j < 8; ++j) {
                long w = static_cast<long>(b[i]) * b[j];
                if (((a >> i) & 1u) == ((a >> j) & 1u)) e4 += w;
                else e3 += w;
            }
        total += qpow(Rational(4), e4) * qpow(Rational(3), e3);
    }
    return total;
}

inline Rational dcheck_ratio(const OffsetVector& b, const OffsetVector& b_prime)
{
    if (b.size() != 8 || b_prime.size() != 8) throw std::invalid_argument("offset vectors must have length 8");
    if (std::accumulate(b.begin(), b.end(), 0) != std::accumulate(b_prime.begin(), b_prime.end(), 0))
        throw std::invalid_argument("offset vectors must have equal sums");
    return dcheck_sum(b_prime) / dcheck_sum(b);
}

// The ten unbalanced offset rows left over in the six-colour balancing argument.
inline std::vector<OffsetVector> dcheck_rows()
{
    return {
        {0, 0, 0, 0, -4, -4, -4, -4}, {0, 0, 0, 0, -3, -3, -3, -3}, {0, 0, 0, 0, -2, -3, -3, -3},
        {0, 0, 0, -1, -3, -3, -3, -3}, {0, 0, 0, 0, -2, -2, -2, -2}, {0, 0, 0, 0, -1, -2, -2, -2},
        {0, 0, 0, -1, -2, -2, -2, -2}, {0, 0, 0, 0, -1, -1, -2, -2}, {0, 0, 0, -1, -1, -2, -2, -2},
        {0, 0, -1, -1, -2, -2, -2, -2},
    };
}

struct FBoundCell {
    int k, j;
    int best_ell;
    Rational best_f;
    Rational bound;
    bool ok;
};

struct FBoundReport {
    std::vector<FBoundCell> cells;
    bool all_ok = true;
    bool intermediates_ok = true;
    std::vector<std::string> failures;
};

inline FBoundReport f_lower_bound_check(int k_max)
{
    if (k_max < 3) throw std::invalid_argument("k_max must be at least 3");
    FBoundReport rep;
    for (int k = 3; k <= k_max; ++k) {
        Rational bound = std::max(frac((k + 1) * (k + 1), 8), Rational(2));
        for (int j = 0; j <= k - 2; ++j) {
            FBoundCell c{k, j, 0, f_closed(k, j, 0), bound, false};
            for (int ell = 1; ell <= k - 1; ++ell) {
                Rational f = f_closed(k, j, ell);
                if (f > c.best_f) {
                    c.best_f = f;
                    c.best_ell = ell;
                }
            }
            c.ok = c.best_f >= bound;
            if (!c.ok) {
                rep.all_ok = false;
                rep.failures.push_back("f(" + std::to_string(k) + "," + std::to_string(j) + ") below bound");
            }
            Rational kj = Rational(k) - frac(j, 2);
            if (j >= 2 && f_closed(k, j, 2) != kj * kj / 2) {
                rep.intermediates_ok = false;
                rep.failures.push_back("f(k,j,2) identity fails at k=" + std::to_string(k));
            }
            rep.cells.push_back(c);
        }
        if (f_closed(k, 0, 2) != frac((k + 1) * (k + 1), 8) || f_closed(k, 1, 2) != frac(k * k, 4)) {
            rep.intermediates_ok = false;
            rep.failures.push_back("f(k,0,2) or f(k,1,2) identity fails at k=" + std::to_string(k));
        }
    }
    return rep;
}

// Expected argmax ell for 3 <= k <= 10, 0 <= j <= k-2.
inline std::vector<std::vector<int>> small_part_table()
{
    return {
        {2, 2},
        {3, 2, 2},
        {3, 3, 2, 3},
        {3, 3, 3, 3, 3},
        {3, 3, 3, 3, 3, 3},
        {3, 3, 3, 3, 4, 4, 3},
        {3, 3, 3, 3, 4, 4, 4, 4},
        {4, 3, 3, 3, 4, 4, 4, 4, 4},
    };
}

} // namespace erlab
