#include <gtest/gtest.h>

#include <random>

#include "netlimits/rational_tf.hpp"
#include "oracles.hpp"

using namespace netlimits;

namespace
{

bool has_root(const RootSet& rs, cplx z, int mult, double tol = 1e-8)
{
    for (const Root& r : rs)
        if (std::abs(r.location - z) < tol && r.multiplicity == mult)
            return true;
    return false;
}

} // namespace

TEST(RationalTF, ZeroDenominatorRejected) { EXPECT_THROW(RationalTF(Poly({1}), Poly()), ZeroPolynomialError); }

TEST(RationalTF, CancelsCommonRoots)
{
    const RationalTF a(Poly({0, 1}), Poly({0, 0, 1}));
    EXPECT_EQ(a.num().degree(), 0);
    EXPECT_EQ(a.den().degree(), 1);
    EXPECT_NEAR(std::abs(a(cplx(2, 0)) - 0.5), 0.0, 1e-15);

    const RationalTF b(Poly({1}), Poly({0, 0, 1}));
    EXPECT_EQ(b.den().degree(), 2);

    const RationalTF c(Poly({1, 1}), Poly({1, 2, 1}));
    EXPECT_EQ(c.num().degree(), 0);
    ASSERT_EQ(c.poles().size(), 1u);
    EXPECT_TRUE(has_root(c.poles(), -1.0, 1));
}

TEST(RationalTF, Example1PolesAndZeros)
{
    const RationalTF g = oracle::example1();
    EXPECT_TRUE(has_root(g.poles(), 0.0, 2));
    EXPECT_TRUE(has_root(g.poles(), -10.0, 1));
    EXPECT_TRUE(has_root(g.poles(), -20.0, 1));
    EXPECT_EQ(g.poles().total_multiplicity(), 4);
    ASSERT_EQ(g.zeros().size(), 1u);
    EXPECT_TRUE(has_root(g.zeros(), -0.5, 1));
}

TEST(RationalTF, Example2PolesAndZeros)
{
    const RationalTF g = oracle::example2();
    ASSERT_EQ(g.poles().size(), 2u);
    EXPECT_TRUE(has_root(g.poles(), cplx(0, 1), 2));
    EXPECT_TRUE(has_root(g.poles(), cplx(0, -1), 2));
    ASSERT_EQ(g.zeros().size(), 1u);
    EXPECT_TRUE(has_root(g.zeros(), -1.0, 4));
}

TEST(RationalTF, SimpleStructures)
{
    const RationalTF a(Poly({1}), Poly({0, 0, 1}));
    EXPECT_TRUE(has_root(a.poles(), 0.0, 2));
    EXPECT_TRUE(a.zeros().empty());
    const RationalTF b(Poly({-1, 1}), Poly({1, 1}));
    EXPECT_TRUE(has_root(b.poles(), -1.0, 1));
    EXPECT_TRUE(has_root(b.zeros(), 1.0, 1));
}

TEST(RationalTF, Multiplication)
{
    const RationalTF a(Poly({1}), Poly({2, 1}));
    const RationalTF inv(Poly({2, 1}), Poly({1}));
    const RationalTF one = a * inv;
    EXPECT_EQ(one.num().degree(), 0);
    EXPECT_EQ(one.den().degree(), 0);
    EXPECT_NEAR(std::abs(one(cplx(0.3, 0.7)) - 1.0), 0.0, 1e-14);

    const RationalTF s1(Poly({1}), Poly({0, 1}));
    const RationalTF s2 = s1 * s1;
    EXPECT_TRUE(has_root(s2.poles(), 0.0, 2));
}

TEST(RationalTF, Evaluation)
{
    const RationalTF a(Poly({1}), Poly({0, 0, 1}));
    EXPECT_NEAR(std::abs(a(2.0) - 0.25), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(oracle::example2()(1.0) - 4.0), 0.0, 1e-13);
    EXPECT_THROW(a(0.0), NearSingularityError);
    try {
        a(cplx(1e-12, 0));
        FAIL() << "expected a near-singularity error";
    } catch (const NearSingularityError& e) {
        EXPECT_EQ(e.pole(), cplx(0, 0));
    }
}

TEST(RationalTF, SampleIsScaledAndConsistent)
{
    const RationalTF g = oracle::example1();
    for (cplx s : {cplx(0, 0.1), cplx(0, 3.0), cplx(0, 1e6), cplx(0, 1e150), cplx(0, 0)}) {
        const RatioSample x = g.sample(s);
        EXPECT_NEAR(std::max(std::abs(x.num), std::abs(x.den)), 1.0, 1e-15);
        if (x.den != 0.0 && std::abs(s) < 1e10) {
            EXPECT_NEAR(std::abs(x.num / x.den - g.num()(s) / g.den()(s)), 0.0,
                        1e-12 * std::abs(g.num()(s) / g.den()(s)));
        }
    }
    // At the double pole the sample is finite with den = 0.
    const RatioSample at_pole = g.sample(0.0);
    EXPECT_EQ(at_pole.den, cplx(0, 0));
    EXPECT_FALSE(at_pole.small());
}

TEST(RationalTF, RelativeDegree)
{
    EXPECT_EQ(relative_degree(oracle::example1()), 3);
    EXPECT_EQ(relative_degree(oracle::example2()), 0);
    EXPECT_EQ(relative_degree(RationalTF(Poly({1}), Poly({1}))), 0);
    EXPECT_EQ(relative_degree(RationalTF(Poly({0, 0, 1}), Poly({1, 1}))), -1);
}

TEST(RationalTF, RelativeDegreeAdditive)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> an(static_cast<std::size_t>(1 + trial % 3)), ad(static_cast<std::size_t>(3 + trial % 4));
        std::vector<double> bn(static_cast<std::size_t>(1 + trial % 2)), bd(static_cast<std::size_t>(2 + trial % 3));
        for (auto* v : {&an, &ad, &bn, &bd})
            for (double& x : *v)
                x = u(rng);
        const RationalTF a{Poly(an), Poly(ad)}, b{Poly(bn), Poly(bd)};
        EXPECT_EQ(relative_degree(a * b), relative_degree(a) + relative_degree(b));
    }
}

TEST(Laurent, Example2AtJ)
{
    const LaurentExpansion le = laurent_at(oracle::example2(), cplx(0, 1), 2, 4);
    EXPECT_TRUE(le.converged);
    EXPECT_NEAR(std::abs(le.coeff(-2) - cplx(1, 0)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(le.coeff(-1) - cplx(2, -1)), 0.0, 1e-9);
    EXPECT_EQ(le.coeff(-3), cplx(0, 0));
    EXPECT_THROW(le.coeff(le.max_order() + 1), std::out_of_range);
}

TEST(Laurent, Example1AtOrigin)
{
    const LaurentExpansion le = laurent_at(oracle::example1(), 0.0, 2, 4);
    EXPECT_NEAR(std::abs(le.coeff(-2) - 1.0), 0.0, 1e-9);
    // 2 - (0.1 + 0.05) from the expansion of (2s+1)/((0.1s+1)(0.05s+1)).
    EXPECT_NEAR(std::abs(le.coeff(-1) - 1.85), 0.0, 1e-9);
    EXPECT_GT(std::abs(le.coeff(-1) - 1.75), 0.09);
    // Real centre and real coefficients give real Laurent data.
    for (int k = -2; k <= le.max_order(); ++k)
        EXPECT_EQ(le.coeff(k).imag(), 0.0) << k;
}

TEST(Laurent, PureDoubleIntegrator)
{
    const LaurentExpansion le = laurent_at(RationalTF(Poly({1}), Poly({0, 0, 1})), 0.0, 2, 4);
    EXPECT_EQ(le.coeff(-2), cplx(1, 0));
    EXPECT_EQ(le.coeff(-1), cplx(0, 0));
    EXPECT_EQ(le.coeff(0), cplx(0, 0));
    EXPECT_EQ(le.coeff(1), cplx(0, 0));
}

TEST(Laurent, WrongMultiplicityOrPoint)
{
    const RationalTF g = oracle::example2();
    EXPECT_THROW(laurent_at(g, cplx(0, 1), 1, 3), DataError);
    EXPECT_THROW(laurent_at(g, cplx(0, 1), 3, 5), DataError);
    EXPECT_THROW(laurent_at(g, cplx(2, 0), 2, 4), DataError);
    EXPECT_THROW(laurent_at(g, cplx(0, 1), 2, 2), std::invalid_argument);
}

TEST(Laurent, AgreesWithSeriesDivisionOracle)
{
    struct Case
    {
        RationalTF g;
        cplx p;
        int m;
    };
    const std::vector<Case> cases = {
        {oracle::example1(), 0.0, 2},
        {oracle::example2(), cplx(0, 1), 2},
        {oracle::example2(), cplx(0, -1), 2},
        {RationalTF(Poly({1}), Poly({0, 0, 1})), 0.0, 2},
        {RationalTF(Poly({3, 1}), Poly({0, 1}) * Poly({1, 0, 1}) * Poly({2, 1})), cplx(0, 1), 1},
        {RationalTF(Poly({1, 2, 3}), Poly({-1, 1}) * Poly({-1, 1}) * Poly({5, 1})), 1.0, 2},
        {RationalTF(Poly({1, -1}), Poly({4, 0, 1}) * Poly({4, 0, 1}) * Poly({4, 0, 1})), cplx(0, 2), 3},
    };
    for (const Case& c : cases) {
        const int terms = c.m + 4;
        const LaurentExpansion le = laurent_at(c.g, c.p, c.m, terms);
        const auto ref = oracle::laurent_series_division(c.g.num(), c.g.den(), c.p, c.m, terms);
        double scale = 0.0;
        for (const cplx& a : ref)
            scale = std::max(scale, std::abs(a));
        for (int k = 0; k < terms; ++k)
            EXPECT_NEAR(std::abs(le.coeff(-c.m + k) - ref[static_cast<std::size_t>(k)]), 0.0,
                        1e-8 * std::max(std::abs(ref[static_cast<std::size_t>(k)]), 1e-3 * scale))
                << "pole " << c.p << " order " << -c.m + k;
    }
}

TEST(Laurent, ReconstructsFunctionNearPole)
{
    for (const auto& [g, p] : std::vector<std::pair<RationalTF, cplx>>{{oracle::example1(), 0.0},
                                                                       {oracle::example2(), cplx(0, 1)}}) {
        const int m = 2;
        const LaurentExpansion le = laurent_at(g, p, m, 2 * m + 5); // up to a_{m+4}
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> theta(0.0, 2.0 * std::numbers::pi);
        for (int i = 0; i < 20; ++i) {
            const cplx s = le.center + 0.1 * le.radius * std::polar(1.0, theta(rng));
            const cplx exact = g.num()(s) / g.den()(s);
            EXPECT_LE(std::abs(le(s) - exact), 1e-6 * std::abs(exact));
        }
    }
}

TEST(Laurent, ConjugatePoleSymmetry)
{
    const RationalTF g = oracle::example2();
    const LaurentExpansion up = laurent_at(g, cplx(0, 1), 2, 5);
    const LaurentExpansion down = laurent_at(g, cplx(0, -1), 2, 5);
    for (int k = -2; k <= up.max_order(); ++k)
        EXPECT_NEAR(std::abs(up.coeff(k) - std::conj(down.coeff(k))), 0.0, 1e-10) << k;
}
