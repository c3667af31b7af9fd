#pragma once

// Rational transfer functions: pole/zero structure, relative degree and
// Laurent expansions about a pole.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "netlimits/errors.hpp"
#include "netlimits/polynomial.hpp"

namespace netlimits
{

/// |Re p| <= axis_tol * max(1, |p|) classifies p as an imaginary-axis point.
inline constexpr double kDefaultAxisTol = 1e-7;

/// Relative distance to a pole below which eval() refuses.
inline constexpr double kPoleGuard = 1e-10;

/// num(s)/den(s) scaled so that max(|num|, |den|) == 1 (or both zero).
/// Stays finite at poles and at very large |s|.
struct RatioSample
{
    cplx num;
    cplx den;

    /// Whether |num/den| <= 1, i.e. the ratio itself is the safe form.
    bool small() const noexcept { return std::abs(num) <= std::abs(den); }
};

/// Ratio of two real polynomials, possibly improper. Common roots of the
/// numerator and denominator are cancelled on construction.
class RationalTF
{
public:
    RationalTF() : RationalTF(Poly({1.0}), Poly({1.0})) {}

    RationalTF(Poly num, Poly den, double cluster_tol = kDefaultClusterTol)
        : num_(std::move(num)), den_(std::move(den)), cluster_tol_(cluster_tol)
    {
        if (den_.is_zero())
            throw ZeroPolynomialError("transfer function denominator is the zero polynomial");
        compute_roots();
        cancel_common_roots();
    }

    static RationalTF make(Poly num, Poly den, double cluster_tol = kDefaultClusterTol)
    {
        return RationalTF(std::move(num), std::move(den), cluster_tol);
    }

    const Poly& num() const noexcept { return num_; }
    const Poly& den() const noexcept { return den_; }
    double cluster_tol() const noexcept { return cluster_tol_; }
    const RootSet& poles() const noexcept { return poles_; }
    const RootSet& zeros() const noexcept { return zeros_; }

    /// deg(den) - deg(num); negative when improper. The zero function has
    /// no zeros at all, reported as the largest int.
    int relative_degree() const noexcept
    {
        if (num_.is_zero())
            return std::numeric_limits<int>::max();
        return den_.degree() - num_.degree();
    }

    /// num(s)/den(s); throws NearSingularityError within kPoleGuard of a pole.
    cplx operator()(cplx s) const
    {
        for (const Root& p : poles_) {
            if (std::abs(s - p.location) <= kPoleGuard * std::max(1.0, std::abs(p.location))) {
                std::ostringstream msg;
                msg << "evaluation at s=" << s << " within guard distance of pole " << p.location;
                throw NearSingularityError(msg.str(), p.location);
            }
        }
        return num_(s) / den_(s);
    }

    cplx eval(cplx s) const { return (*this)(s); }

    /// Numerator and denominator at s, jointly scaled to avoid overflow.
    RatioSample sample(cplx s) const
    {
        cplx n, d;
        if (std::abs(s) <= 1.0) {
            n = num_(s);
            d = den_(s);
        } else {
            // Both divided by s^max(deg): reversed Horner in z = 1/s.
            const cplx z = 1.0 / s;
            const int top = std::max(num_.degree(), den_.degree());
            n = num_.is_zero() ? cplx(0.0) : num_.eval_reversed(z) * std::pow(z, top - num_.degree());
            d = den_.eval_reversed(z) * std::pow(z, top - den_.degree());
        }
        const double m = std::max(std::abs(n), std::abs(d));
        if (m > 0.0 && std::isfinite(m)) {
            n /= m;
            d /= m;
        }
        return {n, d};
    }

private:
    void compute_roots()
    {
        poles_ = den_.degree() >= 1 ? roots(den_, cluster_tol_) : RootSet();
        zeros_ = num_.degree() >= 1 ? roots(num_, cluster_tol_) : RootSet();
    }

    void cancel_common_roots()
    {
        std::vector<Root> common;
        for (const Root& z : zeros_) {
            const Root* p = poles_.nearest(z.location);
            if (p && std::abs(p->location - z.location) <= cluster_tol_ * std::max(1.0, std::abs(z.location)))
                common.push_back({p->location, std::min(p->multiplicity, z.multiplicity)});
        }
        if (common.empty())
            return;
        const Poly factor = from_roots(RootSet(std::move(common)));
        num_ = divmod(num_, factor).quotient;
        den_ = divmod(den_, factor).quotient;
        compute_roots();
    }

    Poly num_;
    Poly den_;
    double cluster_tol_;
    RootSet poles_;
    RootSet zeros_;
};

inline RationalTF mul(const RationalTF& a, const RationalTF& b)
{
    return RationalTF(mul(a.num(), b.num()), mul(a.den(), b.den()), std::min(a.cluster_tol(), b.cluster_tol()));
}

inline RationalTF operator*(const RationalTF& a, const RationalTF& b) { return mul(a, b); }

inline cplx eval(const RationalTF& g, cplx s) { return g(s); }
inline RootSet poles(const RationalTF& g) { return g.poles(); }
inline RootSet zeros(const RationalTF& g) { return g.zeros(); }
inline int relative_degree(const RationalTF& g) { return g.relative_degree(); }

/// Coefficients a_k of g(s) = sum a_k (s - center)^k for k >= min_order.
struct LaurentExpansion
{
    cplx center;
    int min_order = 0; ///< -m
    std::vector<cplx> coeffs; ///< a_{min_order}, a_{min_order+1}, ...
    double radius = 0.0; ///< contour radius used
    int nodes = 0; ///< trapezoid nodes at convergence
    bool converged = false;

    int max_order() const noexcept { return min_order + static_cast<int>(coeffs.size()) - 1; }

    /// a_k; zero below min_order, throws above the computed range.
    cplx coeff(int k) const
    {
        if (k < min_order)
            return 0.0;
        if (k > max_order())
            throw std::out_of_range("Laurent coefficient beyond the computed range");
        return coeffs[static_cast<std::size_t>(k - min_order)];
    }

    /// Truncated series at s.
    cplx operator()(cplx s) const
    {
        const cplx ds = s - center;
        cplx acc = 0.0;
        for (int k = max_order(); k >= min_order; --k)
            acc = acc * ds + coeffs[static_cast<std::size_t>(k - min_order)];
        return acc * std::pow(ds, min_order);
    }
};

struct LaurentOptions
{
    int initial_nodes = 64;
    int max_nodes = 4096;
    double rel_tol = 1e-10;
    double snap_tol = 1e-12; ///< components below snap_tol * |a_{-m}| become 0
    double multiplicity_tol = 1e-8;
};

/// Laurent coefficients of g about its pole p of multiplicity m, by the
/// trapezoid rule on a circle around p:
///   a_k = (1/Q) sum_j g(p + r w_j) (r w_j)^(-k),  w_j = exp(2 pi i j / Q).
/// r is half the distance to the nearest other pole or zero, capped at 1.
/// Q doubles until consecutive estimates agree.
inline LaurentExpansion laurent_at(const RationalTF& g, cplx p, int m, int num_terms, const LaurentOptions& opt = {})
{
    if (m < 1 || num_terms < m + 1)
        throw std::invalid_argument("laurent_at needs m >= 1 and num_terms >= m + 1");

    const Root* pole = g.poles().nearest(p);
    if (!pole || std::abs(pole->location - p) > g.cluster_tol() * std::max(1.0, std::abs(p))) {
        std::ostringstream msg;
        msg << "point " << p << " is not a pole of the transfer function";
        throw DataError(msg.str());
    }
    const cplx center = pole->location;

    double nearest = std::numeric_limits<double>::infinity();
    for (const Root& q : g.poles())
        if (&q != pole)
            nearest = std::min(nearest, std::abs(q.location - center));
    for (const Root& z : g.zeros())
        nearest = std::min(nearest, std::abs(z.location - center));
    const double r = std::min(1.0, nearest / 2.0);

    const int kmin = -m - 1;
    const int kmax = -m + num_terms - 1;
    const auto count = static_cast<std::size_t>(kmax - kmin + 1);

    double sample_max = 0.0;
    auto estimate = [&](int nodes) {
        std::vector<cplx> a(count, 0.0);
        sample_max = 0.0;
        for (int j = 0; j < nodes; ++j) {
            const double theta = 2.0 * std::numbers::pi * j / nodes;
            const cplx w = std::polar(1.0, theta);
            const cplx value = g.num()(center + r * w) / g.den()(center + r * w);
            sample_max = std::max(sample_max, std::abs(value));
            for (int k = kmin; k <= kmax; ++k)
                a[static_cast<std::size_t>(k - kmin)] += value * std::polar(1.0, -k * theta);
        }
        for (int k = kmin; k <= kmax; ++k)
            a[static_cast<std::size_t>(k - kmin)] *= std::pow(r, -k) / static_cast<double>(nodes);
        return a;
    };
    // Magnitude of a_k r^k, the natural scale of each coefficient on the contour.
    auto scaled = [&](const std::vector<cplx>& a, std::size_t i) {
        return std::abs(a[i]) * std::pow(r, kmin + static_cast<int>(i));
    };

    int nodes = opt.initial_nodes;
    std::vector<cplx> current = estimate(nodes);
    bool converged = false;
    while (nodes < opt.max_nodes) {
        nodes *= 2;
        std::vector<cplx> next = estimate(nodes);
        double diff = 0.0, size = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            diff = std::max(diff, std::abs(next[i] - current[i]) * std::pow(r, kmin + static_cast<int>(i)));
            size = std::max(size, scaled(next, i));
        }
        current = std::move(next);
        if (diff <= opt.rel_tol * size) {
            converged = true;
            break;
        }
    }

    const double lead_scaled = scaled(current, 1);
    const double test_scaled = scaled(current, 0);
    if (lead_scaled <= opt.multiplicity_tol * sample_max) {
        std::ostringstream msg;
        msg << "pole " << center << " has multiplicity below " << m << " (a_{-m} vanishes)";
        throw DataError(msg.str());
    }
    if (test_scaled > opt.multiplicity_tol * sample_max) {
        std::ostringstream msg;
        msg << "pole " << center << " has multiplicity above " << m << " (a_{-m-1} nonzero)";
        throw DataError(msg.str());
    }

    LaurentExpansion out;
    out.center = center;
    out.min_order = -m;
    out.coeffs.assign(current.begin() + 1, current.end());
    out.radius = r;
    out.nodes = nodes;
    out.converged = converged;

    const double snap = opt.snap_tol * std::abs(out.coeffs.front());
    for (cplx& a : out.coeffs)
        a = cplx(std::abs(a.real()) < snap ? 0.0 : a.real(), std::abs(a.imag()) < snap ? 0.0 : a.imag());
    return out;
}

} // namespace netlimits
