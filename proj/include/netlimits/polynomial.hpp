#pragma once

// Real-coefficient polynomials in the Laplace variable, with complex
// evaluation and multiplicity-aware complex root finding.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "netlimits/errors.hpp"

namespace netlimits
{

using cplx = std::complex<double>;

/// Two computed roots closer than this (relative to max(1, |root|)) are one root.
inline constexpr double kDefaultClusterTol = 1e-6;

/// Polynomial with real coefficients stored in ascending powers:
/// coeffs()[k] multiplies s^k. The coefficient list is never empty and
/// its last entry is nonzero unless the polynomial is the zero polynomial,
/// which is stored as the single coefficient 0.
class Poly
{
public:
    Poly() : coeffs_{0.0} {}
    Poly(std::initializer_list<double> ascending) : coeffs_(ascending) { normalize(); }
    explicit Poly(std::vector<double> ascending) : coeffs_(std::move(ascending)) { normalize(); }

    static Poly monomial(int power, double c = 1.0)
    {
        std::vector<double> v(static_cast<std::size_t>(power) + 1, 0.0);
        v.back() = c;
        return Poly(std::move(v));
    }

    const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    /// Coefficient of s^k; zero beyond the degree.
    double operator[](std::size_t k) const noexcept { return k < coeffs_.size() ? coeffs_[k] : 0.0; }

    bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }

    /// Degree; -1 for the zero polynomial.
    int degree() const noexcept { return is_zero() ? -1 : static_cast<int>(coeffs_.size()) - 1; }

    double leading() const noexcept { return coeffs_.back(); }

    double max_abs_coeff() const noexcept
    {
        double m = 0.0;
        for (double c : coeffs_)
            m = std::max(m, std::abs(c));
        return m;
    }

    /// Horner evaluation.
    template <class T>
    T operator()(T s) const
    {
        T acc = T(coeffs_.back());
        for (std::size_t k = coeffs_.size() - 1; k-- > 0;)
            acc = acc * s + T(coeffs_[k]);
        return acc;
    }

    /// Evaluates the reversed polynomial sum c_k z^(deg-k), i.e. s^-deg p(s) at z = 1/s.
    cplx eval_reversed(cplx z) const
    {
        cplx acc = coeffs_[0];
        for (std::size_t k = 1; k < coeffs_.size(); ++k)
            acc = acc * z + coeffs_[k];
        return acc;
    }

    /// Drops leading coefficients with |c| <= rel_tol * max|c|.
    Poly trimmed(double rel_tol) const
    {
        const double cut = rel_tol * max_abs_coeff();
        std::vector<double> v = coeffs_;
        while (v.size() > 1 && std::abs(v.back()) <= cut)
            v.pop_back();
        return Poly(std::move(v));
    }

    friend bool operator==(const Poly&, const Poly&) = default;

private:
    void normalize()
    {
        if (coeffs_.empty())
            coeffs_.push_back(0.0);
        while (coeffs_.size() > 1 && coeffs_.back() == 0.0)
            coeffs_.pop_back();
    }

    std::vector<double> coeffs_;
};

inline cplx eval(const Poly& p, cplx s) { return p(s); }

inline Poly add(const Poly& a, const Poly& b)
{
    std::vector<double> v(std::max(a.size(), b.size()));
    for (std::size_t k = 0; k < v.size(); ++k)
        v[k] = a[k] + b[k];
    return Poly(std::move(v));
}

inline Poly scale(const Poly& a, double c)
{
    std::vector<double> v = a.coeffs();
    for (double& x : v)
        x *= c;
    return Poly(std::move(v));
}

inline Poly sub(const Poly& a, const Poly& b) { return add(a, scale(b, -1.0)); }

inline Poly mul(const Poly& a, const Poly& b)
{
    if (a.is_zero() || b.is_zero())
        return Poly();
    std::vector<double> v(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            v[i + j] += a.coeffs()[i] * b.coeffs()[j];
    return Poly(std::move(v));
}

inline Poly derivative(const Poly& a)
{
    if (a.size() == 1)
        return Poly();
    std::vector<double> v(a.size() - 1);
    for (std::size_t k = 1; k < a.size(); ++k)
        v[k - 1] = static_cast<double>(k) * a.coeffs()[k];
    return Poly(std::move(v));
}

inline Poly derivative(const Poly& a, int order)
{
    Poly d = a;
    for (int i = 0; i < order; ++i)
        d = derivative(d);
    return d;
}

struct DivResult
{
    Poly quotient;
    Poly remainder;
};

/// Polynomial long division num = quotient * den + remainder.
inline DivResult divmod(const Poly& num, const Poly& den)
{
    if (den.is_zero())
        throw ZeroPolynomialError("polynomial division by the zero polynomial");
    if (num.degree() < den.degree())
        return {Poly(), num};
    std::vector<double> r = num.coeffs();
    const std::size_t dn = den.size() - 1;
    std::vector<double> q(r.size() - dn, 0.0);
    for (std::size_t k = q.size(); k-- > 0;) {
        const double c = r[k + dn] / den.leading();
        q[k] = c;
        for (std::size_t j = 0; j <= dn; ++j)
            r[k + j] -= c * den.coeffs()[j];
    }
    r.resize(std::max<std::size_t>(dn, 1));
    return {Poly(std::move(q)), Poly(std::move(r))};
}

inline Poly operator+(const Poly& a, const Poly& b) { return add(a, b); }
inline Poly operator-(const Poly& a, const Poly& b) { return sub(a, b); }
inline Poly operator*(const Poly& a, const Poly& b) { return mul(a, b); }
inline Poly operator*(double c, const Poly& a) { return scale(a, c); }
inline Poly operator*(const Poly& a, double c) { return scale(a, c); }

struct Root
{
    cplx location;
    int multiplicity = 1;
};

/// True when r lies on the imaginary axis within axis_tol * max(1, |r|).
inline bool on_imaginary_axis(cplx r, double axis_tol)
{
    return std::abs(r.real()) <= axis_tol * std::max(1.0, std::abs(r));
}

/// Distinct roots with multiplicities, sorted by real then imaginary part.
class RootSet
{
public:
    RootSet() = default;
    explicit RootSet(std::vector<Root> roots) : roots_(std::move(roots))
    {
        std::sort(roots_.begin(), roots_.end(), [](const Root& a, const Root& b) {
            if (a.location.real() != b.location.real())
                return a.location.real() < b.location.real();
            return a.location.imag() < b.location.imag();
        });
    }

    const std::vector<Root>& roots() const noexcept { return roots_; }
    auto begin() const noexcept { return roots_.begin(); }
    auto end() const noexcept { return roots_.end(); }
    std::size_t size() const noexcept { return roots_.size(); }
    bool empty() const noexcept { return roots_.empty(); }
    const Root& operator[](std::size_t i) const { return roots_[i]; }

    int total_multiplicity() const noexcept
    {
        int n = 0;
        for (const Root& r : roots_)
            n += r.multiplicity;
        return n;
    }

    template <class Pred>
    RootSet filter(Pred pred) const
    {
        std::vector<Root> out;
        for (const Root& r : roots_)
            if (pred(r))
                out.push_back(r);
        return RootSet(std::move(out));
    }

    /// Roots with Re >= 0 up to the axis tolerance.
    RootSet closed_rhp(double axis_tol) const
    {
        return filter([=](const Root& r) { return r.location.real() >= 0.0 || on_imaginary_axis(r.location, axis_tol); });
    }

    RootSet open_rhp(double axis_tol) const
    {
        return filter([=](const Root& r) { return r.location.real() > 0.0 && !on_imaginary_axis(r.location, axis_tol); });
    }

    RootSet on_axis(double axis_tol) const
    {
        return filter([=](const Root& r) { return on_imaginary_axis(r.location, axis_tol); });
    }

    /// Root closest to z, or nullptr when empty.
    const Root* nearest(cplx z) const
    {
        const Root* best = nullptr;
        for (const Root& r : roots_)
            if (!best || std::abs(r.location - z) < std::abs(best->location - z))
                best = &r;
        return best;
    }

private:
    std::vector<Root> roots_;
};

namespace detail
{

inline double horner_scale(const Poly& p, double r)
{
    double acc = 0.0;
    for (std::size_t k = p.size(); k-- > 0;)
        acc = acc * r + std::abs(p.coeffs()[k]);
    return acc;
}

inline std::vector<cplx> companion_eigenvalues(const Poly& q)
{
    const int n = q.degree();
    if (n == 1)
        return {cplx(-q[0] / q[1], 0.0)};

    // Substitute s = sigma t so that the monic coefficients are balanced.
    const double sigma = std::pow(std::abs(q[0] / q.leading()), 1.0 / n);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    double power = 1.0;
    for (int k = 0; k < n; ++k) {
        companion(k, n - 1) = -q[k] * power / (q.leading() * std::pow(sigma, n));
        power *= sigma;
        if (k > 0)
            companion(k, k - 1) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success)
        throw Error("companion eigenvalue iteration did not converge");
    std::vector<cplx> out(n);
    for (int k = 0; k < n; ++k)
        out[k] = solver.eigenvalues()(k) * sigma;
    return out;
}

inline cplx newton_refine(const Poly& p, cplx z, int max_iter = 30)
{
    const Poly dp = derivative(p);
    cplx fz = p(z);
    for (int it = 0; it < max_iter && fz != 0.0; ++it) {
        const cplx dz = dp(z);
        if (dz == 0.0)
            break;
        const cplx next = z - fz / dz;
        const cplx fnext = p(next);
        if (!(std::abs(fnext) < std::abs(fz)))
            break;
        z = next;
        fz = fnext;
    }
    return z;
}

inline double diameter(const std::vector<cplx>& pts, const std::vector<std::size_t>& idx, std::size_t count)
{
    double d = 0.0;
    for (std::size_t a = 0; a < count; ++a)
        for (std::size_t b = a + 1; b < count; ++b)
            d = std::max(d, std::abs(pts[idx[a]] - pts[idx[b]]));
    return d;
}

} // namespace detail

/// All complex roots of p with multiplicities.
///
/// Roots at the origin are split off exactly; the rest come from the
/// eigenvalues of the balanced companion matrix, polished by Newton steps.
/// Computed roots whose pairwise distance is below cluster_tol (relative
/// to max(1, |root|)) are merged. A larger group of m roots is also merged
/// when its spread is consistent with the eps^(1/m) splitting of an m-fold
/// root and the centroid, refined by Newton on the (m-1)-th derivative,
/// is a root to working accuracy. The result is closed under conjugation.
inline RootSet roots(const Poly& p, double cluster_tol = kDefaultClusterTol)
{
    if (p.degree() < 1)
        throw NoRootsError("polynomial of degree < 1 has no roots");

    std::size_t zero_mult = 0;
    while (p.coeffs()[zero_mult] == 0.0)
        ++zero_mult;
    const Poly q(std::vector<double>(p.coeffs().begin() + static_cast<std::ptrdiff_t>(zero_mult), p.coeffs().end()));

    std::vector<Root> found;
    if (zero_mult > 0)
        found.push_back({cplx(0.0, 0.0), static_cast<int>(zero_mult)});

    if (q.degree() >= 1) {
        std::vector<cplx> approx = detail::companion_eigenvalues(q);
        for (cplx& z : approx)
            z = detail::newton_refine(q, z);

        const double eps = std::numeric_limits<double>::epsilon();
        const std::size_t n = approx.size();
        std::vector<bool> used(n, false);
        std::vector<Root> clusters;

        for (std::size_t i = 0; i < n; ++i) {
            if (used[i])
                continue;
            std::vector<std::size_t> idx;
            for (std::size_t j = 0; j < n; ++j)
                if (!used[j])
                    idx.push_back(j);
            std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
                return std::abs(approx[a] - approx[i]) < std::abs(approx[b] - approx[i]);
            });

            std::size_t members = 1;
            cplx center = approx[i];
            for (std::size_t m = idx.size(); m >= 2; --m) {
                cplx c = 0.0;
                for (std::size_t a = 0; a < m; ++a)
                    c += approx[idx[a]];
                c /= static_cast<double>(m);
                const double scale = std::max(1.0, std::abs(c));
                const double diam = detail::diameter(approx, idx, m);
                const bool tight = diam <= cluster_tol * scale;
                const bool plausible = diam <= 20.0 * std::pow(eps, 1.0 / static_cast<double>(m)) * scale;
                if (!tight && !plausible)
                    continue;

                const Poly dm = derivative(q, static_cast<int>(m) - 1);
                cplx refined = detail::newton_refine(dm, c);
                if (std::abs(refined - c) > std::max(diam, cluster_tol * scale))
                    refined = c;
                if (!tight) {
                    const double residual = std::abs(q(refined));
                    const double bound = 1e3 * static_cast<double>(q.size()) * eps * detail::horner_scale(q, std::abs(refined));
                    if (residual > bound)
                        continue;
                }
                members = m;
                center = refined;
                break;
            }
            for (std::size_t a = 0; a < members; ++a)
                used[idx[a]] = true;
            clusters.push_back({center, static_cast<int>(members)});
        }

        // Conjugate symmetry: near-real clusters become real, the rest are paired.
        std::vector<bool> paired(clusters.size(), false);
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            cplx& z = clusters[i].location;
            if (std::abs(z.imag()) <= cluster_tol * std::max(1.0, std::abs(z))) {
                z = cplx(z.real(), 0.0);
                paired[i] = true;
            }
        }
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            if (paired[i] || clusters[i].location.imag() < 0.0)
                continue;
            std::size_t best = clusters.size();
            for (std::size_t j = 0; j < clusters.size(); ++j) {
                if (paired[j] || j == i || clusters[j].location.imag() >= 0.0 ||
                    clusters[j].multiplicity != clusters[i].multiplicity)
                    continue;
                if (best == clusters.size() ||
                    std::abs(clusters[j].location - std::conj(clusters[i].location)) <
                        std::abs(clusters[best].location - std::conj(clusters[i].location)))
                    best = j;
            }
            if (best == clusters.size())
                continue;
            const cplx avg = 0.5 * (clusters[i].location + std::conj(clusters[best].location));
            clusters[i].location = avg;
            clusters[best].location = std::conj(avg);
            paired[i] = paired[best] = true;
        }
        for (std::size_t i = 0; i < clusters.size(); ++i)
            if (!paired[i])
                clusters[i].location = cplx(clusters[i].location.real(), 0.0);

        found.insert(found.end(), clusters.begin(), clusters.end());
    }
    return RootSet(std::move(found));
}

/// Expands leading * prod (s - r)^m. The root set must be closed under
/// conjugation so that the result is real.
inline Poly from_roots(const RootSet& rs, double leading = 1.0)
{
    Poly out({leading});
    std::vector<bool> consumed(rs.size(), false);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const Root& r = rs[i];
        const cplx z = r.location;
        if (z.imag() == 0.0) {
            for (int m = 0; m < r.multiplicity; ++m)
                out = out * Poly({-z.real(), 1.0});
            consumed[i] = true;
            continue;
        }
        if (z.imag() < 0.0)
            continue;
        std::size_t partner = rs.size();
        for (std::size_t j = 0; j < rs.size(); ++j) {
            if (consumed[j] || rs[j].location.imag() >= 0.0 || rs[j].multiplicity != r.multiplicity)
                continue;
            if (std::abs(rs[j].location - std::conj(z)) <= 1e-12 * std::max(1.0, std::abs(z))) {
                partner = j;
                break;
            }
        }
        if (partner == rs.size())
            throw DataError("root set is not closed under conjugation");
        consumed[i] = consumed[partner] = true;
        const Poly quad({std::norm(z), -2.0 * z.real(), 1.0});
        for (int m = 0; m < r.multiplicity; ++m)
            out = out * quad;
    }
    for (bool c : consumed)
        if (!c)
            throw DataError("root set is not closed under conjugation");
    return out;
}

} // namespace netlimits
