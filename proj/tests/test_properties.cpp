// Randomised and cross-cutting properties.

#include <gtest/gtest.h>

#include <random>

#include "netlimits/fundamental_limits.hpp"
#include "oracles.hpp"

using namespace netlimits;

TEST(Property, ThreeMethodAgreement)
{
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> logw(-2.0, 2.0);
    for (const RationalTF& g : {oracle::example1(), oracle::example2()}) {
        for (int n : {1, 2, 3, 5, 10, 20, 50}) {
            const NetworkSensitivity sn(g, n);
            int compared = 0;
            for (int i = 0; i < 50; ++i) {
                const cplx s(0.0, std::pow(10.0, logw(rng)));
                const cplx ref = sn.linsolve(s);
                const cplx ep = sn.eigenproduct(s);
                const double scale = std::max(std::abs(ref), 1e-300);
                EXPECT_LE(std::abs(ep - ref) / scale, 1e-7) << "N=" << n << " w=" << s.imag();
                try {
                    const cplx mb = sn.mobius(s);
                    EXPECT_LE(std::abs(mb - ref) / scale, 1e-7) << "N=" << n << " w=" << s.imag();
                    ++compared;
                } catch (const ConditioningError&) {
                }
            }
            EXPECT_GT(compared, 25) << "mobius refused too often at N=" << n;
        }
    }
}

TEST(Property, EigenproductMatchesDenseSolveOffAxis)
{
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const RationalTF g = oracle::example2();
    for (int n : {4, 9, 30}) {
        const NetworkSensitivity sn(g, n);
        for (int i = 0; i < 30; ++i) {
            const cplx s(std::abs(u(rng)) + 0.05, u(rng));
            const cplx ref = oracle::dense_sn(n, g.num()(s) / g.den()(s));
            EXPECT_LE(std::abs(sn.eigenproduct(s) - ref), 1e-9 * std::abs(ref));
        }
    }
}

TEST(Property, RouthAgreesWithRoots)
{
    std::mt19937_64 rng(107);
    std::uniform_int_distribution<int> degree(1, 8);
    std::uniform_real_distribution<double> lead(0.2, 5.0), sign(0.0, 1.0);
    int stable = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> c = oracle::random_poly_with_roots(rng, degree(rng), 1e-3);
        const double scale = lead(rng) * (sign(rng) < 0.5 ? -1.0 : 1.0);
        for (double& x : c)
            x *= scale;
        const bool expected = oracle::hurwitz_by_roots(c);
        stable += expected ? 1 : 0;
        EXPECT_EQ(routh_hurwitz_stable(Poly(c)), expected) << "trial " << trial;
    }
    EXPECT_GT(stable, 10);
}

TEST(Property, IntegralInvarianceAcrossN)
{
    const RationalTF g = oracle::example1();
    for (int n : {1, 2, 5, 10, 20}) {
        const IntegralReport r = bode_integral(g, n);
        EXPECT_LE(std::abs(r.value), std::max(1e-3, 10.0 * r.error_estimate)) << n;
    }
}

TEST(Property, PeakApproachesBound)
{
    const RationalTF g = oracle::example1();
    const double bound = hinf_lower_bound(g).bound_value;
    const SweepResult r = sweep(g, 200, FrequencyGrid{1e-4, 1e-1, 30001, GridScale::log});
    double peak = 0.0;
    for (const cplx& v : r.values)
        peak = std::max(peak, std::abs(v));
    EXPECT_GE(peak, bound * (1.0 - 0.15));
}

TEST(Property, SupOverNNeverBelowBound)
{
    // The largest peak seen over N stays above the bound.
    for (const auto& [g, pole] : std::vector<std::pair<RationalTF, cplx>>{{oracle::example1(), 0.0},
                                                                          {oracle::example2(), cplx(0, 1)}}) {
        const double bound = hinf_lower_bound(g).bound_value;
        double sup = 0.0;
        for (int n : {10, 50, 200})
            sup = std::max(sup, probe_peak(g, pole, n).peak_mag);
        EXPECT_GE(sup, bound);
    }
}

TEST(Property, WaterbedExample1)
{
    const SweepResult r = sweep(oracle::example1(), 10, FrequencyGrid{1e-2, 1e2, 2001, GridScale::log});
    EXPECT_TRUE(std::any_of(r.log_mags.begin(), r.log_mags.end(), [](double v) { return v > 0.0; }));
    EXPECT_TRUE(std::any_of(r.log_mags.begin(), r.log_mags.end(), [](double v) { return v < 0.0; }));
}

TEST(Property, ClosedLoopPolesOfSmallNetworksAreStable)
{
    // For Example 1 the closed-loop poles of S_N (roots of d + lambda_k n) lie in the open LHP.
    const RationalTF g = oracle::example1();
    for (int n : {1, 2, 3, 5, 8}) {
        for (double lambda : eig_pinned(n))
            for (const Root& r : roots(g.den() + lambda * g.num()))
                EXPECT_LT(r.location.real(), 0.0) << "N=" << n;
    }
}

TEST(Property, BoundReportInvariants)
{
    std::mt19937_64 rng(109);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
        // random stable part times one of: 1, s, s^2, s^3, (s^2+w^2)^2, (s - a)
        Poly den = Poly({u(rng), 1.0}) * Poly({u(rng), u(rng), 1.0});
        const Poly num({u(rng), u(rng)});
        switch (trial % 6) {
        case 1: den = den * Poly({0, 1}); break;
        case 2: den = den * Poly({0, 0, 1}); break;
        case 3: den = den * Poly({0, 0, 0, 1}); break;
        case 4: {
            const double w2 = u(rng);
            den = den * Poly({w2, 0, 1}) * Poly({w2, 0, 1});
            break;
        }
        case 5: den = den * Poly({-u(rng), 1}); break;
        default: break;
        }
        const BoundReport b = hinf_lower_bound(RationalTF(num, den));
        const bool unbounded_reason =
            b.reason == BoundReason::orhp_pole || b.reason == BoundReason::axis_multiplicity_ge_3;
        if (b.reason != BoundReason::axis_m2) {
            EXPECT_EQ(b.verdict == Verdict::unbounded, unbounded_reason) << trial;
        }
        if (b.reason == BoundReason::axis_m2 && b.verdict == Verdict::finite) {
            EXPECT_GT(b.bound_value, 0.0);
            EXPECT_NEAR(b.bound_value, axis_pole_bound(2, b.laurent_used->first, b.laurent_used->second), 1e-15);
        }
        if (b.reason == BoundReason::axis_m1 || b.reason == BoundReason::no_crhp_poles) {
            EXPECT_EQ(b.bound_value, 0.0);
        }
    }
}
