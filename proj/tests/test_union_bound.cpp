#include "erlab/union_bound.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace erlab;

TEST(Polynomials, FormsAgreeOnGrid)
{
    Rational a(19, 25), b(89, 100);
    for (int i = 0; i <= 100; ++i)
        for (int j = 0; j <= 100; ++j) {
            Rational x = frac(i, 100), y = frac(j, 100);
            ASSERT_EQ(p_poly(x, y, a), p_poly_expanded(x, y, a));
            ASSERT_EQ(p_poly(x, y, a), p_poly_factored(x, y, a));
            ASSERT_EQ(q_poly(x, y, b), q_poly_expanded(x, y, b));
            ASSERT_NEAR(p_poly_d(x.get_d(), y.get_d(), a.get_d()), p_poly(x, y, a).get_d(), 1e-12);
            ASSERT_NEAR(q_poly_d(x.get_d(), y.get_d(), b.get_d()), q_poly(x, y, b).get_d(), 1e-12);
        }
}

TEST(Polynomials, Anchors)
{
    for (int i = 0; i <= 10; ++i) EXPECT_EQ(p_poly(frac(i, 10), 0, Rational(19, 25)), (3 - 4 * Rational(19, 25)) / 8);
    EXPECT_EQ(40 * q_poly(1, 0, Rational(89, 100)), Rational(11, 5));
    EXPECT_EQ(q_poly(1, 0, Rational(89, 100)), Rational(11, 200));
}

TEST(Polynomials, Discriminants)
{
    // disc in y of 40p: B^2 - 4AC with A = -1, B = -2(2x-1), C = -5(4a-3)
    for (int i = 0; i <= 20; ++i) {
        Rational x = frac(i, 20), a(3, 4), b(19, 20);
        Rational B = -2 * (2 * x - 1), C = -5 * (4 * a - 3);
        EXPECT_EQ(disc_p(x, a), B * B + 4 * C);
        Rational Bq = -2 * (5 * x - 1), Cq = 5 * (-x * x + 2 * x + 3 - 4 * b);
        EXPECT_EQ(disc_q(x, b), Bq * Bq + 4 * Cq);
    }
}

TEST(Region, ClaimedParametersDisjoint)
{
    for (auto [a, b] : {std::pair{Rational(19, 25), Rational(89, 100)}, std::pair{Rational(3, 4), Rational(19, 20)}}) {
        auto rep = region_disjointness_check({a, b}, Rational(1, 1000));
        EXPECT_TRUE(rep.analytic_certified) << a << " " << b;
        EXPECT_FALSE(rep.witness);
        EXPECT_TRUE(rep.disjoint);
        EXPECT_EQ(rep.grid_points, 1001L * 1000);
    }
}

TEST(Region, ControlOverlaps)
{
    auto rep = region_disjointness_check({Rational(4, 5), Rational(4, 5)}, Rational(1, 100));
    EXPECT_FALSE(rep.disjoint);
    ASSERT_TRUE(rep.witness);
    EXPECT_GE(rep.witness->p, 0);
    EXPECT_GE(rep.witness->q, 0);
    EXPECT_EQ(rep.witness->p, p_poly(rep.witness->x, rep.witness->y, Rational(4, 5)));
}

TEST(Region, BadInput)
{
    EXPECT_THROW(region_disjointness_check({Rational(3, 2), Rational(1, 2)}, Rational(1, 100)), std::invalid_argument);
    EXPECT_THROW(region_disjointness_check({Rational(1, 2), Rational(1, 2)}, Rational(1, 3)), std::invalid_argument);
    EXPECT_THROW(region_disjointness_check({Rational(1, 2), Rational(1, 2)}, Rational(2, 301)), std::invalid_argument);
}

TEST(Search, ResultsAreTriangleFreeAndDeterministic)
{
    auto r1 = search_triangle_free_pair(20, Rational(19, 20), 20000, 7, {4, 1, false});
    auto r2 = search_triangle_free_pair(20, Rational(19, 20), 20000, 7, {4, 2, false});
    EXPECT_EQ(r1.best_union_edges, r2.best_union_edges);
    EXPECT_EQ(r1.restart_densities, r2.restart_densities);
    EXPECT_TRUE(r1.best_r.triangle_free());
    EXPECT_TRUE(r1.best_b.triangle_free());
    EXPECT_GE(r1.best_r.edges() + r1.best_b.edges(), 190);
    EXPECT_LE(r1.best_union_density, 0.75 + 2.0 / 20);
}

TEST(Search, CheckedMovesMatch)
{
    auto fast = search_triangle_free_pair(12, Rational(9, 10), 3000, 3, {2, 1, false});
    auto slow = search_triangle_free_pair(12, Rational(9, 10), 3000, 3, {2, 1, true});
    EXPECT_EQ(fast.best_union_edges, slow.best_union_edges);
}

TEST(Search, PentagonBlowUpReachesFourFifths)
{
    // Two 5-cycle blow-ups on ten vertices cover 4/5 of pairs with b = 4/5.
    auto r = search_triangle_free_pair(10, Rational(4, 5), 20000, 1, {4, 1, false});
    EXPECT_GE(r.best_union_density + 1e-12, 0.8);
}

TEST(Search, Infeasible)
{
    EXPECT_THROW(search_triangle_free_pair(10, Rational(11, 10), 100, 1), InfeasibleTarget);
    EXPECT_THROW(search_triangle_free_pair(1, Rational(1, 2), 100, 1), std::invalid_argument);
}
