#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "netlimits/polynomial.hpp"

using namespace netlimits;

namespace
{

void expect_coeffs(const Poly& p, std::vector<double> expected, double tol = 1e-12)
{
    ASSERT_EQ(p.size(), expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k)
        EXPECT_NEAR(p[k], expected[k], tol) << "coefficient " << k;
}

const Root* find_root(const RootSet& rs, cplx z, double tol = 1e-8)
{
    for (const Root& r : rs)
        if (std::abs(r.location - z) < tol)
            return &r;
    return nullptr;
}

} // namespace

TEST(Poly, ZeroPolynomialRepresentation)
{
    Poly z({0.0, 0.0, 0.0});
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z.degree(), -1);
    EXPECT_EQ(z.size(), 1u);
    EXPECT_TRUE(Poly().is_zero());
}

TEST(Poly, TrailingZerosAreDropped)
{
    Poly p({1.0, 2.0, 0.0, 0.0});
    EXPECT_EQ(p.degree(), 1);
    EXPECT_EQ(p.leading(), 2.0);
}

TEST(Poly, EvalExamples)
{
    EXPECT_EQ(eval(Poly({1}), cplx(3, 4)), cplx(1, 0));
    EXPECT_LT(std::abs(eval(Poly({1, 0, 1}), cplx(0, 1))), 1e-15);
    EXPECT_EQ(eval(Poly({1, 2, 1}), cplx(1, 0)), cplx(4, 0));
}

TEST(Poly, EvalReversedMatchesScaledEval)
{
    const Poly p({3, -1, 2, 5});
    const cplx s(2.0, -1.5);
    EXPECT_LT(std::abs(p.eval_reversed(1.0 / s) * std::pow(s, 3) - p(s)), 1e-12 * std::abs(p(s)));
}

TEST(Poly, RingOperations)
{
    expect_coeffs(mul(Poly({0, 1}), Poly({0, 1})), {0, 0, 1});
    const Poly sum = add(Poly({1}), Poly({-1}));
    EXPECT_TRUE(sum.is_zero());
    expect_coeffs(derivative(Poly({1, 2, 1})), {2, 2});
    expect_coeffs(scale(Poly({1, 2}), 3.0), {3, 6});
    EXPECT_TRUE(scale(Poly({1, 2}), 0.0).is_zero());
    expect_coeffs(Poly({1, 1}) - Poly({0, 1}), {1});
    expect_coeffs(derivative(Poly({1, 1, 1, 1}), 2), {2, 6});
    EXPECT_TRUE(derivative(Poly({5})).is_zero());
}

TEST(Poly, DivmodReconstructs)
{
    const Poly num({1, -3, 0, 2, 1});
    const Poly den({2, 1, 1});
    const DivResult qr = divmod(num, den);
    EXPECT_LT(qr.remainder.degree(), den.degree());
    const Poly back = qr.quotient * den + qr.remainder;
    expect_coeffs(back, num.coeffs(), 1e-12);
}

TEST(Poly, DivmodByZeroThrows) { EXPECT_THROW(divmod(Poly({1, 1}), Poly()), ZeroPolynomialError); }

TEST(Poly, Trimmed)
{
    const Poly p({1.0, 2.0, 1e-15});
    EXPECT_EQ(p.degree(), 2);
    EXPECT_EQ(p.trimmed(1e-12).degree(), 1);
}

TEST(Roots, DoubleRootAtOrigin)
{
    const RootSet rs = roots(Poly({0, 0, 1}));
    ASSERT_EQ(rs.size(), 1u);
    EXPECT_EQ(rs[0].location, cplx(0, 0));
    EXPECT_EQ(rs[0].multiplicity, 2);
}

TEST(Roots, RepeatedImaginaryPair)
{
    const RootSet rs = roots(Poly({1, 0, 2, 0, 1}));
    ASSERT_EQ(rs.size(), 2u);
    const Root* up = find_root(rs, cplx(0, 1));
    const Root* down = find_root(rs, cplx(0, -1));
    ASSERT_NE(up, nullptr);
    ASSERT_NE(down, nullptr);
    EXPECT_EQ(up->multiplicity, 2);
    EXPECT_EQ(down->multiplicity, 2);
    EXPECT_EQ(up->location, std::conj(down->location));
}

TEST(Roots, ThreeSimpleRealRoots)
{
    const RootSet rs = roots(Poly({-6, 11, -6, 1}));
    ASSERT_EQ(rs.size(), 3u);
    for (double x : {1.0, 2.0, 3.0}) {
        const Root* r = find_root(rs, cplx(x, 0));
        ASSERT_NE(r, nullptr) << x;
        EXPECT_EQ(r->multiplicity, 1);
        EXPECT_EQ(r->location.imag(), 0.0);
    }
}

TEST(Roots, FourFoldRoot)
{
    const RootSet rs = roots(Poly({1, 4, 6, 4, 1}));
    ASSERT_EQ(rs.size(), 1u);
    EXPECT_NEAR(std::abs(rs[0].location - cplx(-1, 0)), 0.0, 1e-8);
    EXPECT_EQ(rs[0].multiplicity, 4);
}

TEST(Roots, ConstantPolynomialThrows)
{
    EXPECT_THROW(roots(Poly({3})), NoRootsError);
    EXPECT_THROW(roots(Poly()), NoRootsError);
}

TEST(Roots, SortedByRealThenImaginary)
{
    const RootSet rs = roots(Poly({-6, 11, -6, 1}) * Poly({1, 0, 1}));
    for (std::size_t i = 1; i < rs.size(); ++i) {
        const cplx a = rs[i - 1].location, b = rs[i].location;
        EXPECT_TRUE(a.real() < b.real() || (a.real() == b.real() && a.imag() <= b.imag()));
    }
}

TEST(Roots, HalfPlaneFilters)
{
    const RootSet rs = roots(Poly({1, 0, 1}) * Poly({-1, 1}) * Poly({2, 1}));
    EXPECT_EQ(rs.closed_rhp(1e-7).total_multiplicity(), 3);
    EXPECT_EQ(rs.open_rhp(1e-7).total_multiplicity(), 1);
    EXPECT_EQ(rs.on_axis(1e-7).total_multiplicity(), 2);
}

TEST(FromRoots, Examples)
{
    expect_coeffs(from_roots(RootSet({{cplx(0, 0), 2}})), {0, 0, 1});
    expect_coeffs(from_roots(RootSet({{cplx(0, 1), 1}, {cplx(0, -1), 1}})), {1, 0, 1});
    expect_coeffs(from_roots(RootSet({{cplx(-1, 0), 4}})), {1, 4, 6, 4, 1});
    expect_coeffs(from_roots(RootSet({{cplx(2, 0), 1}}), 3.0), {-6, 3});
}

TEST(FromRoots, RejectsUnpairedComplexRoot)
{
    EXPECT_THROW(from_roots(RootSet({{cplx(1, 1), 1}})), DataError);
    EXPECT_THROW(from_roots(RootSet({{cplx(1, 1), 2}, {cplx(1, -1), 1}})), DataError);
}

TEST(PolyProperty, RootFromRootsRoundTrip)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int trial = 0; trial < 200; ++trial) {
        // Well-separated roots: a jittered lattice.
        std::vector<Root> rs;
        const int deg = 1 + trial % 10;
        int placed = 0;
        int slot = 0;
        while (placed < deg) {
            const double x = -4.0 + 1.0 * slot + 0.3 * (u(rng) / 4.0);
            ++slot;
            if (deg - placed >= 2 && trial % 3 != 0) {
                const double y = 0.8 + 0.3 * std::abs(u(rng)) / 4.0;
                rs.push_back({cplx(x, y), 1});
                rs.push_back({cplx(x, -y), 1});
                placed += 2;
            } else {
                rs.push_back({cplx(x, 0.0), 1});
                placed += 1;
            }
        }
        const Poly p = from_roots(RootSet(rs), 1.0 + std::abs(u(rng)));
        const Poly back = from_roots(roots(p), p.leading());
        ASSERT_EQ(back.size(), p.size());
        const double scale = p.max_abs_coeff();
        for (std::size_t k = 0; k < p.size(); ++k)
            EXPECT_NEAR(back[k], p[k], 1e-8 * scale) << "trial " << trial << " k " << k;
    }
}

TEST(PolyProperty, ResidualAtReportedRoots)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> c(static_cast<std::size_t>(2 + trial % 10));
        for (double& x : c)
            x = u(rng);
        c.back() = c.back() >= 0 ? c.back() + 0.1 : c.back() - 0.1;
        const Poly p(c);
        for (const Root& r : roots(p)) {
            // Scale: the coefficient magnitude weighted by |root|^k.
            double scale = 0.0;
            for (std::size_t k = 0; k < c.size(); ++k)
                scale += std::abs(c[k]) * std::pow(std::abs(r.location), static_cast<double>(k));
            EXPECT_LE(std::abs(p(r.location)), 1e-7 * scale) << "trial " << trial;
        }
    }
}

TEST(PolyProperty, MultiplicitySumEqualsDegreeAndConjugateClosure)
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> c(static_cast<std::size_t>(2 + trial % 10));
        for (double& x : c)
            x = u(rng);
        c.back() += c.back() >= 0 ? 0.1 : -0.1;
        const Poly p(c);
        const RootSet rs = roots(p);
        EXPECT_EQ(rs.total_multiplicity(), p.degree());
        for (const Root& r : rs) {
            if (r.location.imag() == 0.0)
                continue;
            const Root* partner = nullptr;
            for (const Root& q : rs)
                if (q.location == std::conj(r.location))
                    partner = &q;
            ASSERT_NE(partner, nullptr) << "no exact conjugate for " << r.location;
            EXPECT_EQ(partner->multiplicity, r.multiplicity);
        }
    }
}

TEST(PolyProperty, MulCommutativeAndAssociative)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    auto rand_poly = [&](int n) {
        std::vector<double> c(static_cast<std::size_t>(n + 1));
        for (double& x : c)
            x = u(rng);
        return Poly(c);
    };
    for (int trial = 0; trial < 200; ++trial) {
        const Poly a = rand_poly(trial % 6), b = rand_poly((trial / 2) % 7), c = rand_poly((trial / 3) % 5);
        const Poly ab = a * b, ba = b * a;
        const Poly l = (a * b) * c, r = a * (b * c);
        ASSERT_EQ(ab.size(), ba.size());
        ASSERT_EQ(l.size(), r.size());
        for (std::size_t k = 0; k < ab.size(); ++k)
            EXPECT_NEAR(ab[k], ba[k], 1e-12 * std::max(1.0, std::abs(ab[k])));
        for (std::size_t k = 0; k < l.size(); ++k)
            EXPECT_NEAR(l[k], r[k], 1e-12 * std::max(1.0, l.max_abs_coeff()));
    }
}
