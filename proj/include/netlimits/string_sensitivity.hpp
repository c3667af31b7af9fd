#pragma once

// Network sensitivity S_N(s) = [(I + P(s)C(s) L_N)^{-1}]_{1,1} of a string
// of N identical agents, evaluated three independent ways:
//   mobius       closed form in the small root zeta of the iterated map
//   eigenproduct det(I + PC Lbar_{N-1}) / det(I + PC L_N) over closed-form spectra
//   linsolve     tridiagonal elimination of (I + PC L_N) x = e_1

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netlimits/errors.hpp"
#include "netlimits/polynomial.hpp"
#include "netlimits/rational_tf.hpp"

namespace netlimits
{

enum class LaplacianVariant
{
    pinned,   ///< L_N = B_N^T B_N, first diagonal entry 1
    dirichlet ///< Lbar_N, all diagonal entries 2
};

/// Symmetric tridiagonal coupling matrix of a string of n agents.
struct StringLaplacian
{
    int n = 0;
    LaplacianVariant variant = LaplacianVariant::pinned;
    std::vector<double> diag;
    std::vector<double> offdiag;

    static StringLaplacian make(int n, LaplacianVariant variant)
    {
        StringLaplacian l;
        l.n = n;
        l.variant = variant;
        l.diag.assign(static_cast<std::size_t>(n), 2.0);
        l.offdiag.assign(n > 0 ? static_cast<std::size_t>(n - 1) : 0, -1.0);
        if (variant == LaplacianVariant::pinned && n > 0)
            l.diag[0] = 1.0;
        return l;
    }

    static StringLaplacian pinned(int n) { return make(n, LaplacianVariant::pinned); }
    static StringLaplacian dirichlet(int n) { return make(n, LaplacianVariant::dirichlet); }
};

/// Eigenvalues of L_N, 2(1 - cos((2k-1)pi/(2N+1))), k = 1..N, ascending.
inline std::vector<double> eig_pinned(int n)
{
    if (n < 1)
        throw std::invalid_argument("eig_pinned needs N >= 1");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        // 2(1 - cos t) = 4 sin^2(t/2), free of cancellation for small t
        const double half = (2.0 * k - 1.0) * std::numbers::pi / (2.0 * (2.0 * n + 1.0));
        out[static_cast<std::size_t>(k - 1)] = 4.0 * std::sin(half) * std::sin(half);
    }
    return out;
}

/// Eigenvalues of Lbar_N, 2(1 - cos(k pi/(N+1))), k = 1..N, ascending; empty for N = 0.
inline std::vector<double> eig_dirichlet(int n)
{
    if (n < 0)
        throw std::invalid_argument("eig_dirichlet needs N >= 0");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        const double half = k * std::numbers::pi / (2.0 * (n + 1.0));
        out[static_cast<std::size_t>(k - 1)] = 4.0 * std::sin(half) * std::sin(half);
    }
    return out;
}

inline std::vector<double> eig(int n, LaplacianVariant variant)
{
    return variant == LaplacianVariant::pinned ? eig_pinned(n) : eig_dirichlet(n);
}

namespace detail
{

/// Small root of zeta^2 - (h + 2) zeta + 1 = 0 where h = 1/(PC).
inline cplx zeta_from_inverse_loop(cplx h)
{
    const cplx b = h + 2.0;
    // b^2 - 4 = h (h + 4), exact in the h -> 0 limit
    cplx root = std::sqrt(h * (h + 4.0));
    if (std::real(std::conj(b) * root) < 0.0)
        root = -root;
    const cplx big = 0.5 * (b + root);
    return 1.0 / big;
}

/// z^n for integer n >= 0 via log-magnitude and phase; underflows cleanly to 0.
inline cplx polar_power(cplx z, long long n)
{
    if (n == 0)
        return 1.0;
    const double mag = std::abs(z);
    if (mag == 0.0)
        return 0.0;
    const double log_mag = static_cast<double>(n) * std::log(mag);
    const double phase = std::remainder(static_cast<double>(n) * std::arg(z), 2.0 * std::numbers::pi);
    return std::polar(std::exp(log_mag), phase);
}

} // namespace detail

/// Root zeta of zeta^2 - (1/loop_value + 2) zeta + 1 = 0 with |zeta| <= 1.
inline cplx zeta(cplx loop_value)
{
    if (loop_value == 0.0)
        throw std::domain_error("zeta undefined for a zero loop value (S_N = 1 there)");
    return detail::zeta_from_inverse_loop(1.0 / loop_value);
}

/// Complex number held as ln|z| and arg z, so that huge and tiny magnitudes survive.
struct LogComplex
{
    double log_mag = 0.0;
    double phase = 0.0;

    cplx value() const
    {
        if (log_mag == -std::numeric_limits<double>::infinity())
            return 0.0;
        return std::polar(std::exp(log_mag), phase);
    }
};

enum class Method
{
    automatic,
    mobius,
    eigenproduct,
    linsolve
};

inline std::string_view to_string(Method m)
{
    switch (m) {
    case Method::automatic: return "auto";
    case Method::mobius: return "mobius";
    case Method::eigenproduct: return "eigenproduct";
    case Method::linsolve: return "linsolve";
    }
    return "?";
}

inline std::optional<Method> parse_method(std::string_view s)
{
    if (s == "auto")
        return Method::automatic;
    if (s == "mobius")
        return Method::mobius;
    if (s == "eigenproduct")
        return Method::eigenproduct;
    if (s == "linsolve")
        return Method::linsolve;
    return std::nullopt;
}

struct SensitivityOptions
{
    double mobius_guard = 1e-6;   ///< refuse the closed form when |zeta| > 1 - guard
    int linsolve_max_n = 2000;
    /// A factor 1 + k PC (or pivot) this small relative to its terms is a
    /// closed-loop pole to within rounding.
    double pole_factor_floor = 32 * std::numeric_limits<double>::epsilon();
};

/// S_N for one loop and one network size, with the spectra cached.
class NetworkSensitivity
{
public:
    NetworkSensitivity(const RationalTF& loop, int n, SensitivityOptions opt = {})
        : loop_(loop), n_(n), opt_(opt), pinned_(eig_pinned(n)), dirichlet_(eig_dirichlet(n - 1))
    {
    }

    int n() const noexcept { return n_; }
    const RationalTF& loop() const noexcept { return loop_; }
    const std::vector<double>& pinned_spectrum() const noexcept { return pinned_; }
    const std::vector<double>& dirichlet_spectrum() const noexcept { return dirichlet_; }

    /// (1 - zeta)(1 - zeta^2N)/(1 + zeta^(2N+1)). Throws ConditioningError
    /// when |zeta| is within the guard band of 1.
    cplx mobius(cplx s) const { return mobius(loop_.sample(s)); }

    cplx mobius(const RatioSample& x) const
    {
        if (x.num == 0.0)
            return 1.0;
        const cplx z = detail::zeta_from_inverse_loop(x.den / x.num);
        if (!(std::abs(z) <= 1.0 - opt_.mobius_guard))
            throw ConditioningError("|zeta| within the guard band of 1; closed form is ill-conditioned");
        const cplx z2n = detail::polar_power(z, 2LL * n_);
        return (1.0 - z) * (1.0 - z2n) / (1.0 + z2n * z);
    }

    /// prod(1 + mu_k PC) / prod(1 + lambda_k PC), accumulated as log-magnitude and phase.
    LogComplex eigenproduct_log(cplx s) const { return eigenproduct_log(loop_.sample(s)); }

    LogComplex eigenproduct_log(const RatioSample& x) const
    {
        LogComplex out;
        if (x.small()) {
            // ln|1 + k g| = log1p(2 k Re g + k^2 |g|^2) / 2, accurate as g -> 0
            const cplx g = x.num / x.den;
            auto accumulate = [&](double k, double sign) {
                const cplx f = 1.0 + k * g;
                if (std::abs(f) <= opt_.pole_factor_floor * (1.0 + k * std::abs(g)))
                    throw ClosedLoopPoleError("evaluation at a closed-loop pole");
                out.log_mag += sign * 0.5 * std::log1p(k * (2.0 * g.real() + k * std::norm(g)));
                out.phase += sign * std::arg(f);
            };
            for (double mu : dirichlet_)
                accumulate(mu, 1.0);
            for (double lambda : pinned_)
                accumulate(lambda, -1.0);
        } else {
            // In h = 1/g: S_N = h prod(h + mu) / prod(h + lambda)
            const cplx h = x.den / x.num;
            auto accumulate = [&](double k, double sign) {
                const cplx f = h + k;
                if (std::abs(f) <= opt_.pole_factor_floor * (std::abs(h) + k))
                    throw ClosedLoopPoleError("evaluation at a closed-loop pole");
                out.log_mag += sign * std::log(std::abs(f));
                out.phase += sign * std::arg(f);
            };
            out.log_mag = std::log(std::abs(h));
            out.phase = std::arg(h);
            for (double mu : dirichlet_)
                accumulate(mu, 1.0);
            for (double lambda : pinned_)
                accumulate(lambda, -1.0);
        }
        out.phase = std::remainder(out.phase, 2.0 * std::numbers::pi);
        return out;
    }

    cplx eigenproduct(cplx s) const { return eigenproduct_log(s).value(); }
    cplx eigenproduct(const RatioSample& x) const { return eigenproduct_log(x).value(); }

    /// x_1 of (I + PC L_N) x = e_1 by elimination from the last row upward.
    cplx linsolve(cplx s) const { return linsolve(loop_.sample(s)); }

    cplx linsolve(const RatioSample& x) const
    {
        if (n_ > opt_.linsolve_max_n)
            throw std::invalid_argument("network size exceeds the linsolve cap");
        // Scaled system (a I + b L) x = a e_1 with a/b = 1/PC; a = 1, b = g or a = h, b = 1.
        cplx a = 1.0, b = 0.0;
        if (x.small())
            b = x.num / x.den;
        else {
            a = x.den / x.num;
            b = 1.0;
        }
        const StringLaplacian lap = StringLaplacian::pinned(n_);
        const double floor = opt_.pole_factor_floor * (std::abs(a) + std::abs(b));
        cplx pivot = a + b * lap.diag.back();
        for (int i = n_ - 2; i >= 0; --i) {
            if (std::abs(pivot) < floor)
                throw ClosedLoopPoleError("zero pivot in tridiagonal elimination");
            const cplx off = b * lap.offdiag[static_cast<std::size_t>(i)];
            pivot = a + b * lap.diag[static_cast<std::size_t>(i)] - off * off / pivot;
        }
        if (std::abs(pivot) < floor)
            throw ClosedLoopPoleError("zero pivot in tridiagonal elimination");
        return a / pivot;
    }

    /// Evaluation with the given method; automatic uses mobius and falls
    /// back to eigenproduct on conditioning errors. `used` reports the method.
    cplx operator()(cplx s, Method method = Method::automatic, Method* used = nullptr) const
    {
        return evaluate(loop_.sample(s), method, used);
    }

    cplx evaluate(const RatioSample& x, Method method, Method* used = nullptr) const
    {
        Method m = method;
        cplx v;
        switch (method) {
        case Method::mobius: v = mobius(x); break;
        case Method::eigenproduct: v = eigenproduct(x); break;
        case Method::linsolve: v = linsolve(x); break;
        case Method::automatic:
            try {
                v = mobius(x);
                m = Method::mobius;
            } catch (const ConditioningError&) {
                v = eigenproduct(x);
                m = Method::eigenproduct;
            }
            break;
        }
        if (used)
            *used = m;
        return v;
    }

    /// ln|S_N| and arg S_N; eigenproduct works in log form natively.
    LogComplex log_value(cplx s, Method method = Method::eigenproduct) const
    {
        const RatioSample x = loop_.sample(s);
        if (method == Method::eigenproduct)
            return eigenproduct_log(x);
        const cplx v = evaluate(x, method);
        return {std::log(std::abs(v)), std::arg(v)};
    }

private:
    RationalTF loop_;
    int n_;
    SensitivityOptions opt_;
    std::vector<double> pinned_;
    std::vector<double> dirichlet_;
};

inline cplx sn_mobius(const RationalTF& loop, int n, cplx s) { return NetworkSensitivity(loop, n).mobius(s); }
inline cplx sn_eigenproduct(const RationalTF& loop, int n, cplx s) { return NetworkSensitivity(loop, n).eigenproduct(s); }
inline cplx sn_linsolve(const RationalTF& loop, int n, cplx s) { return NetworkSensitivity(loop, n).linsolve(s); }

enum class GridScale
{
    log,
    linear
};

/// Frequency grid in rad/s.
struct FrequencyGrid
{
    double omega_min = 1e-2;
    double omega_max = 1e2;
    int count = 2001;
    GridScale scale = GridScale::log;

    /// Grid with points_per_decade points per decade of [omega_min, omega_max]
    /// (for linear grids, the same count spread uniformly).
    static FrequencyGrid per_decade(double omega_min, double omega_max, int points_per_decade, GridScale scale)
    {
        double decades = 1.0;
        if (omega_min > 0.0)
            decades = std::max(1.0, std::log10(omega_max / omega_min));
        const int count = std::max(2, static_cast<int>(std::ceil(points_per_decade * decades)) + 1);
        return {omega_min, omega_max, count, scale};
    }

    std::vector<double> points() const
    {
        if (count < 2 || !(omega_min < omega_max))
            throw std::invalid_argument("frequency grid needs at least 2 points and omega_min < omega_max");
        if (scale == GridScale::log && omega_min <= 0.0)
            throw std::invalid_argument("logarithmic grid needs omega_min > 0");
        std::vector<double> w(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            const double t = static_cast<double>(i) / (count - 1);
            w[static_cast<std::size_t>(i)] = scale == GridScale::log
                ? omega_min * std::pow(omega_max / omega_min, t)
                : omega_min + (omega_max - omega_min) * t;
        }
        w.front() = omega_min;
        w.back() = omega_max;
        return w;
    }
};

/// Sampled S_N(j omega). Points where every applicable method failed are
/// gaps: value and log magnitude NaN, index listed in `gaps`.
struct SweepResult
{
    int n = 0;
    Method method = Method::automatic;
    std::vector<double> omegas;
    std::vector<cplx> values;
    std::vector<double> log_mags;
    std::vector<Method> point_methods;
    std::vector<std::size_t> gaps;
};

/// Moves omega off an exact imaginary-axis pole frequency of the loop.
inline double avoid_axis_poles(const RationalTF& loop, double omega)
{
    for (const Root& p : loop.poles()) {
        if (p.location.real() == 0.0 && p.location.imag() == omega) {
            const double bump = 1e-9 * std::max(std::abs(omega), 1e-300);
            return omega == 0.0 ? 1e-9 : omega + bump;
        }
    }
    return omega;
}

inline SweepResult sweep(const RationalTF& loop, int n, const std::vector<double>& omegas, Method method = Method::automatic,
                         SensitivityOptions opt = {})
{
    const NetworkSensitivity sn(loop, n, opt);
    SweepResult out;
    out.n = n;
    out.method = method;
    out.omegas.reserve(omegas.size());
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        const double w = avoid_axis_poles(loop, omegas[i]);
        out.omegas.push_back(w);
        const RatioSample x = loop.sample(cplx(0.0, w));
        try {
            Method used = method;
            if (method == Method::automatic) {
                try {
                    const cplx v = sn.mobius(x);
                    used = Method::mobius;
                    out.values.push_back(v);
                    out.log_mags.push_back(std::log(std::abs(v)));
                } catch (const ConditioningError&) {
                    used = Method::eigenproduct;
                }
            }
            if (used == Method::eigenproduct) {
                const LogComplex lv = sn.eigenproduct_log(x);
                out.values.push_back(lv.value());
                out.log_mags.push_back(lv.log_mag);
            } else if (method != Method::automatic) {
                const cplx v = sn.evaluate(x, method);
                out.values.push_back(v);
                out.log_mags.push_back(std::log(std::abs(v)));
            }
            out.point_methods.push_back(used);
        } catch (const Error&) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            out.values.emplace_back(nan, nan);
            out.log_mags.push_back(nan);
            out.point_methods.push_back(method);
            out.gaps.push_back(i);
        }
    }
    return out;
}

inline SweepResult sweep(const RationalTF& loop, int n, const FrequencyGrid& grid, Method method = Method::automatic,
                         SensitivityOptions opt = {})
{
    return sweep(loop, n, grid.points(), method, opt);
}

} // namespace netlimits
