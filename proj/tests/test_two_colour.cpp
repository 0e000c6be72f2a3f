#include "erlab/colouring_count.hpp"
#include "erlab/hadamard.hpp"
#include "erlab/two_colour.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <numeric>
#include <random>

using namespace erlab;

TEST(Perf, Examples)
{
    auto two = uniform_pattern(2, 2, colour_mask({1, 2}));
    EXPECT_EQ(perf_value({two}, {2, 2}), 16);
    EXPECT_EQ(perf_value({two, two}, {2, 2}), 32);
    auto h = pattern_from_columns(normalize(sylvester(3)), {1, 1, 1, 1, 1, 1, 1});
    EXPECT_EQ(perf_value({h}, PartSizes(8, 1)), ipow(BigCount(4), 28));
    EXPECT_THROW(perf_value({two}, {1, 1, 1}), std::invalid_argument);
}

TEST(HCounts, Examples)
{
    EXPECT_EQ(h_count({2, 2}, 1), 128);
    EXPECT_EQ(h_star({2, 2}, 1), 112);
    EXPECT_EQ(h_count({2, 2}, 0), 16);
    EXPECT_EQ(h_star({2, 2}, 0), 16);
    EXPECT_THROW(h_count({1, 2}, 1), std::invalid_argument);
    EXPECT_THROW(h_star({2, 2}, -1), std::invalid_argument);
}

TEST(HTilde, Examples)
{
    EXPECT_EQ(h_tilde({0, 0}, 2), 4);
    EXPECT_EQ(h_tilde({-1, -1}, 2), 2);
    EXPECT_EQ(h_tilde({1, 0}, 0), 1);
    std::mt19937_64 rng(2);
    for (int it = 0; it < 50; ++it) {
        OffsetVector b(2 + rng() % 4);
        for (auto& x : b) x = static_cast<int>(rng() % 7) - 3;
        int ell = static_cast<int>(rng() % 5);
        EXPECT_NEAR(h_tilde_log2(b, ell), std::log2(h_tilde(b, ell).get_d()), 1e-9);
    }
}

TEST(FClosed, Anchors)
{
    EXPECT_EQ(f_closed(3, 0, 2), 2);
    EXPECT_EQ(f_closed(3, 1, 2), Rational(9, 4));
    EXPECT_EQ(f_closed(4, 0, 3), Rational(27, 8));
    EXPECT_EQ(f_closed(4, 0, 2), Rational(25, 8));
    EXPECT_EQ(f_closed(5, 1, 2), Rational(25, 4));
    EXPECT_THROW(f_closed(3, 2, 0), std::invalid_argument);
    EXPECT_THROW(f_closed(3, 0, 3), std::invalid_argument);
}

TEST(FClosed, BridgeIdentity)
{
    for (int k = 3; k <= 12; ++k)
        for (int j = 0; j <= k - 2; ++j)
            for (int ell = 0; ell <= k - 1; ++ell)
                EXPECT_EQ(f_closed(k, j, ell) * pow2(binom_small(j, 2)), h_tilde(bridge_offsets(k, j, ell), ell))
                    << k << " " << j << " " << ell;
}

// m_i = base + b_i: h(m;ell) = 2^{C(r,2)base^2 + (r-1)base(sum b + ell)} h_tilde(b;ell).
TEST(HTilde, QuadraticSplitOfH)
{
    std::mt19937_64 rng(9);
    for (int it = 0; it < 100; ++it) {
        int parts = 2 + static_cast<int>(rng() % 3), base = 3 + static_cast<int>(rng() % 4);
        OffsetVector b(static_cast<size_t>(parts));
        for (auto& x : b) x = static_cast<int>(rng() % 5) - 2;
        std::sort(b.rbegin(), b.rend());
        PartSizes m;
        for (int x : b) m.push_back(base + x);
        int ell = static_cast<int>(rng() % 4);
        long sb = std::accumulate(b.begin(), b.end(), 0L);
        long r = parts;
        long pre = r * (r - 1) / 2 * base * base + (r - 1) * base * sb + ell * (r - 1) * base;
        EXPECT_EQ(h_count(m, ell), pow2(pre) * h_tilde(b, ell)) << it;
    }
}

TEST(Sandwich, ProcedureCountBetweenBounds)
{
    for (int k : {3, 4}) {
        int parts = k - 1;
        std::function<void(PartSizes&)> rec = [&](PartSizes& m) {
            if (static_cast<int>(m.size()) == parts) {
                for (int ell = 0; ell <= 2; ++ell) {
                    Rational c(count_procedure_colourings(m, ell, k));
                    EXPECT_LE(h_star(m, ell), c);
                    EXPECT_LE(c, h_count(m, ell));
                }
                return;
            }
            int top = m.empty() ? 3 : m.back();
            for (int x = top; x >= 1; --x) {
                m.push_back(x);
                rec(m);
                m.pop_back();
            }
        };
        PartSizes m;
        rec(m);
    }
    EXPECT_EQ(count_procedure_colourings({2, 2}, 1, 3), 112);
}

TEST(BestSmallPart, Examples)
{
    auto a = best_small_part(4, 0, 6, 6);
    EXPECT_EQ(a.ell, 3);
    EXPECT_TRUE(a.unique);
    EXPECT_GT(a.margin, 1);
    auto b = best_small_part(3, 1, 4, 4);
    EXPECT_EQ(b.ell, 2);
    EXPECT_EQ(b.b, (OffsetVector{0, -1})); // sum b + ell = j forces the -1
    EXPECT_EQ(b.value, Rational(9, 4));
    EXPECT_EQ(best_small_part(10, 0, 18, 18).ell, 4);
}

TEST(GRatios, Examples)
{
    EXPECT_EQ(g_ratios({3, 1}, {2, 2}, 2, 2, false), 2);
    EXPECT_EQ(g_ratios({3, 1}, {1, 3}, 4, 3, true), 4);
    EXPECT_EQ(g_ratios({3, 1}, {2, 2}, 3, 2, false), 2);
    EXPECT_THROW(g_ratios({3, 1}, {2, 2}, 2, 3, false), std::invalid_argument);
}

TEST(DCheck, Ratios)
{
    OffsetVector b{0, 0, 0, 0, -4, -4, -4, -4};
    EXPECT_EQ(dcheck_ratio(b, b), 1);
    EXPECT_EQ(balanced_offsets(b), OffsetVector(8, -2));
    auto rows = dcheck_rows();
    EXPECT_EQ(rows.size(), 10u);
    for (const auto& r : rows) EXPECT_GE(dcheck_ratio(r, balanced_offsets(r)), 9);
    EXPECT_THROW(dcheck_ratio(b, OffsetVector(8, 0)), std::invalid_argument);
    EXPECT_THROW(dcheck_sum({0, 0}), std::invalid_argument);
}

TEST(DCheck, SumByBruteForce)
{
    // all-zero offsets: 35 splits, each weight 1
    EXPECT_EQ(dcheck_sum(OffsetVector(8, 0)), 35);
    OffsetVector b{1, 0, 0, 0, 0, 0, 0, 1};
    // 0 and 7 together in 15 splits (weight 4), apart in 20 (weight 3)
    EXPECT_EQ(dcheck_sum(b), 15 * 4 + 20 * 3);
}

TEST(FBound, Report)
{
    auto rep = f_lower_bound_check(20);
    EXPECT_TRUE(rep.all_ok);
    EXPECT_TRUE(rep.intermediates_ok);
    EXPECT_EQ(rep.cells.front().bound, 2);
    EXPECT_EQ(rep.cells.front().best_f, 2);
    for (const auto& c : rep.cells)
        if (c.k == 11) { EXPECT_EQ(c.bound, 18); }
}

TEST(GPartition, SinglePartMatchesH)
{
    for (PartSizes m : {PartSizes{2, 2}, PartSizes{3, 2, 1}, PartSizes{4, 4, 3, 1}})
        for (int ell = 0; ell <= 3; ++ell) EXPECT_EQ(f_procedure_bound(m, {ell}), h_count(m, ell));
}

TEST(GPartition, Examples)
{
    // tied ells: only {0}{1} has both parts nonempty
    EXPECT_EQ(g_partition_sum({2, 1}, {1, 1}), Rational(1, 8));
    // distinct ells: both orders count
    EXPECT_EQ(g_partition_sum({2, 1}, {2, 1}), Rational(3, 32));
    EXPECT_THROW(g_partition_sum({2, 1}, {1, 2}), std::invalid_argument);
    EXPECT_THROW(g_partition_sum({2, 1}, {1, 1, 1, 1}), std::invalid_argument);
}

// With distinct ells every assignment of parts is its own ordered partition.
TEST(GPartition, DistinctEllsSumOverAllAssignments)
{
    PartSizes m{3, 2, 2, 1};
    std::vector<int> ells{3, 2, 1};
    Rational want = 0;
    for (int code = 0; code < 81; ++code) {
        Rational inner[3] = {0, 0, 0};
        for (int x = code, i = 0; i < 4; ++i, x /= 3) inner[x % 3] += pow2(-m[i]);
        want += qpow(inner[0], 3) * qpow(inner[1], 2) * inner[2];
    }
    EXPECT_EQ(g_partition_sum(m, ells), want);
}
