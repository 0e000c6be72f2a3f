#include "erlab/hadamard.hpp"
#include "erlab/lp.hpp"
#include "erlab/pattern.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace erlab;

namespace {

LogLinear L(const char* s) { return parse_loglinear(s); }

Certificate i3_certificate()
{
    Certificate c;
    c.constraints = {basic_constraint(parse_kvector("3;7")), pair_union_constraint(7, Rational(3, 4))};
    c.multipliers = {Rational(7, 32), Rational(1, 16)};
    return c;
}

} // namespace

TEST(LogLinear, ParseAndPrint)
{
    auto x = L("1/2*log2(3) + 3/4");
    EXPECT_EQ(x.constant(), Rational(3, 4));
    EXPECT_EQ(x.coeff(3), Rational(1, 2));
    EXPECT_EQ(L("log2(9/8)"), L("2*log2(3) - 3"));
    EXPECT_EQ(L("log2(32/27)"), L("5 - 3*log2(3)"));
    EXPECT_NEAR(L("4-7/3*log2(3)").to_double(), 4 - 7.0 / 3 * std::log2(3.0), 1e-15);
    EXPECT_EQ(parse_loglinear(x.str()), x);
    EXPECT_THROW(parse_loglinear("log2(-1)"), std::exception);
    EXPECT_THROW(parse_loglinear("3 +"), std::exception);
}

TEST(LogLinear, CertifiedComparison)
{
    EXPECT_EQ(loglin_compare(L("log2(3)"), Rational(3, 2)), 1);
    EXPECT_EQ(loglin_compare(L("log2(3)"), Rational(8, 5)), -1);
    EXPECT_EQ(loglin_compare(L("log2(9)"), L("2*log2(3)")), 0);
    // 3^12 = 531441 vs 2^19 = 524288: log2(3) - 19/12 is small and positive.
    EXPECT_EQ(loglin_sign(L("log2(3) - 19/12")), 1);
    EXPECT_EQ(loglin_sign(L("12*log2(3) - 19")), 1);
}

TEST(LogLinear, TotalOrderOnRandomValues)
{
    std::mt19937_64 rng(5);
    std::vector<LogLinear> xs;
    for (int i = 0; i < 30; ++i) {
        LogLinear x = frac(static_cast<long>(rng() % 41) - 20, 1 + static_cast<long>(rng() % 7));
        x += LogLinear::log2_of(3) * frac(static_cast<long>(rng() % 21) - 10, 1 + static_cast<long>(rng() % 5));
        xs.push_back(x);
    }
    for (const auto& a : xs)
        for (const auto& b : xs) {
            int ab = loglin_compare(a, b), ba = loglin_compare(b, a);
            EXPECT_EQ(ab, -ba);
            if (std::abs(a.to_double() - b.to_double()) > 1e-9) { EXPECT_EQ(ab, a.to_double() < b.to_double() ? -1 : 1); }
            for (const auto& c : xs)
                if (ab <= 0 && loglin_compare(b, c) <= 0) { EXPECT_LE(loglin_compare(a, c), 0); }
        }
}

TEST(Constraints, Basic)
{
    EXPECT_EQ(basic_constraint(parse_kvector("3;7")).b, Rational(7, 2));
    EXPECT_EQ(basic_constraint(parse_kvector("3;6")).b, 3);
    EXPECT_EQ(basic_constraint(make_k({4, 3})).b, Rational(7, 6));
    auto c = basic_constraint(parse_kvector("3;7"));
    for (int t = 2; t <= 7; ++t) EXPECT_EQ(c.coeff(t), t);
    EXPECT_EQ(c.tag, ConstraintTag::basic);
}

TEST(Constraints, PairUnion)
{
    auto c = pair_union_constraint(7, Rational(3, 4));
    std::vector<Rational> want{11, 15, 18, 20, 21, 21};
    EXPECT_EQ(c.a, want);
    EXPECT_EQ(c.b, Rational(63, 4));
    EXPECT_THROW(pair_union_constraint(1, 1), std::invalid_argument);
}

TEST(Constraints, ConjecturedReducesToPairUnionForTriangles)
{
    for (int s = 2; s <= 12; ++s) {
        auto c = conjectured_ks_constraint(s, 3), p = pair_union_constraint(s, Rational(3, 4));
        EXPECT_EQ(c.a, p.a);
        EXPECT_EQ(c.b, p.b);
        EXPECT_EQ(c.tag, ConstraintTag::conjectured);
    }
}

TEST(Certificates, SevenColourFinalStep)
{
    auto cert = i3_certificate();
    cert.claimed_bound = Rational(7, 4);
    auto chk = verify_certificate(cert, 7);
    EXPECT_TRUE(chk.valid);
    EXPECT_TRUE(chk.claimed_matches);
    EXPECT_EQ(chk.bound, LogLinear(Rational(7, 4)));
    EXPECT_EQ(chk.zero_slack, std::vector<int>{4});
    EXPECT_TRUE(chk.negative.empty());
}

TEST(Certificates, Rejections)
{
    auto cert = i3_certificate();
    cert.multipliers = {Rational(0), Rational(0)};
    auto chk = verify_certificate(cert, 7);
    EXPECT_FALSE(chk.valid);
    EXPECT_EQ(chk.negative.size(), 6u);

    cert.multipliers = {Rational(-1), Rational(1)};
    EXPECT_THROW(verify_certificate(cert, 7), std::invalid_argument);
    cert.multipliers = {Rational(1)};
    EXPECT_THROW(verify_certificate(cert, 7), std::invalid_argument);

    cert = i3_certificate();
    cert.claimed_bound = Rational(2);
    EXPECT_FALSE(verify_certificate(cert, 7).claimed_matches);
}

TEST(Certificates, TightMultipliers)
{
    auto m = tight_multipliers(basic_constraint(parse_kvector("3;7")), pair_union_constraint(7, Rational(3, 4)), 4, 5);
    ASSERT_TRUE(m);
    // Both slacks vanish at f = 4 and f = 5.
    Certificate c{{basic_constraint(parse_kvector("3;7")), pair_union_constraint(7, Rational(3, 4))}, {m->first, m->second}, {}};
    auto chk = verify_certificate(c, 7);
    EXPECT_EQ(loglin_sign(chk.slack[2]), 0);
    EXPECT_EQ(loglin_sign(chk.slack[3]), 0);
    EXPECT_FALSE(tight_multipliers(probe_constraint(7, 1), probe_constraint(7, 2), 2, 3));
}

TEST(Existential, DerivesReverse)
{
    std::vector<LinearConstraint> system{basic_constraint(parse_kvector("3;7")), total_density_constraint(7)};
    auto probe = probe_constraint(7, 3);
    Certificate cert{{probe}, {L("1/3*log2(3)")}, {}};
    auto e = derive_existential_constraint(system, Rational(7, 4), probe, cert);
    EXPECT_EQ(e.tag, ConstraintTag::existential);
    EXPECT_EQ(e.b, -3);
    for (int t = 2; t <= 7; ++t) EXPECT_EQ(e.coeff(t), -t);
    // The realization reaching the candidate is not cut off.
    auto d = density_vector(pattern_from_columns(normalize(sylvester(3)), {1, 1, 1, 1, 1, 1, 1}), uniform_weights(8));
    EXPECT_TRUE(e.satisfied_by(d));
    EXPECT_FALSE(probe.satisfied_by(d));
}

TEST(Existential, Errors)
{
    std::vector<LinearConstraint> system{basic_constraint(parse_kvector("3;7"))};
    auto probe = probe_constraint(7, 3);
    Certificate cert{{probe}, {L("1/3*log2(3)")}, {}};
    // bound log2(3) is not below 3/2
    EXPECT_THROW(derive_existential_constraint(system, Rational(3, 2), probe, cert), ExistentialError);
    Certificate weak{{probe}, {Rational(1, 10)}, {}};
    EXPECT_THROW(derive_existential_constraint(system, Rational(7, 4), probe, weak), ExistentialError);
    Certificate outside{{probe, pair_union_constraint(7, Rational(1, 2))}, {L("1/3*log2(3)"), Rational(0)}, {}};
    EXPECT_THROW(derive_existential_constraint(system, Rational(7, 4), probe, outside), ExistentialError);
}

TEST(LpFloat, TwoColourTriangles)
{
    auto r = solve_lp_float({basic_constraint(make_k({3, 3})), total_density_constraint(2)}, 2);
    ASSERT_EQ(r.status, LpStatus::optimal);
    EXPECT_NEAR(r.value, 0.5, 1e-12);
    EXPECT_NEAR(r.d[0], 0.5, 1e-12);
}

TEST(LpFloat, SevenColourSystem)
{
    auto r = solve_lp_float({basic_constraint(parse_kvector("3;7")), total_density_constraint(7),
                             pair_union_constraint(7, Rational(3, 4))},
                            7);
    ASSERT_EQ(r.status, LpStatus::optimal);
    EXPECT_NEAR(r.value, 1.75, 1e-9);
    std::vector<double> want{0, 0, 7.0 / 8, 0, 0, 0};
    for (size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(r.d[i], want[i], 1e-9);
}

TEST(LpFloat, InfeasibleGivesFarkasRay)
{
    std::vector<LinearConstraint> sys{total_density_constraint(3)};
    LinearConstraint neg;
    neg.a = {Rational(-1), Rational(-1)};
    neg.b = Rational(-3); // d2 + d3 >= 3
    sys.push_back(neg);
    auto r = solve_lp_float(sys, 3);
    ASSERT_EQ(r.status, LpStatus::infeasible);
    ASSERT_GE(r.farkas.size(), 2u);
    double yb = r.farkas[0] * 1 + r.farkas[1] * -3;
    for (size_t i = 2; i < r.farkas.size(); ++i) yb += r.farkas[i];
    EXPECT_LT(yb, 0);
}

// Any valid certificate bounds the LP optimum.
TEST(LpFloat, WeakDualityOnRandomSystems)
{
    std::mt19937_64 rng(11);
    for (int it = 0; it < 60; ++it) {
        int s = 2 + static_cast<int>(rng() % 7);
        std::vector<LinearConstraint> sys;
        int m = 1 + static_cast<int>(rng() % 3);
        for (int c = 0; c < m; ++c) {
            LinearConstraint lc;
            for (int t = 2; t <= s; ++t) lc.a.push_back(frac(1 + static_cast<long>(rng() % 9), 1 + static_cast<long>(rng() % 3)));
            lc.b = frac(1 + static_cast<long>(rng() % 10), 1 + static_cast<long>(rng() % 4));
            lc.name = "r" + std::to_string(c);
            sys.push_back(lc);
        }
        auto r = solve_lp_float(sys, s);
        ASSERT_EQ(r.status, LpStatus::optimal);
        for (const auto& c : sys) {
            // multiplier max_f log2(f)/a_f makes the single constraint a certificate
            double y = 0;
            for (int f = 2; f <= s; ++f) y = std::max(y, std::log2(f) / c.coeff(f).get_d());
            EXPECT_LE(r.value, y * c.b.get_d() + 1e-8);
        }
    }
}

TEST(Bridge, Examples)
{
    EXPECT_TRUE(rb_bridge_check(3, Rational(1, 2), 4, 1));
    EXPECT_TRUE(rb_bridge_check(3, Rational(1, 2), 4, 2));
    EXPECT_FALSE(rb_bridge_check(3, 1, 4, Rational(3, 2)));
}
