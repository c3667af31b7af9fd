#pragma once

// Fundamental limitations of string networks:
//  - lower bound on sup_N ||S_N||_inf from Laurent data at closed-RHP poles,
//  - stability of 1/(1 + k PC) over the gain interval (0, 4),
//  - the sensitivity integrals of ln|S_N| and ln|det(I + PC L)^{-1}|.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "netlimits/errors.hpp"
#include "netlimits/polynomial.hpp"
#include "netlimits/rational_tf.hpp"
#include "netlimits/string_sensitivity.hpp"

namespace netlimits
{

// ---------------------------------------------------------------------------
// H-infinity lower bound

enum class Verdict
{
    finite,
    unbounded
};

enum class BoundReason
{
    orhp_pole,
    axis_multiplicity_ge_3,
    axis_m2,
    axis_m1,
    no_crhp_poles
};

inline std::string_view to_string(Verdict v) { return v == Verdict::finite ? "finite" : "unbounded"; }

inline std::string_view to_string(BoundReason r)
{
    switch (r) {
    case BoundReason::orhp_pole: return "orhp_pole";
    case BoundReason::axis_multiplicity_ge_3: return "axis_multiplicity_ge_3";
    case BoundReason::axis_m2: return "axis_m2";
    case BoundReason::axis_m1: return "axis_m1";
    case BoundReason::no_crhp_poles: return "no_crhp_poles";
    }
    return "?";
}

/// Bound contributed by a single imaginary-axis pole.
struct AxisPoleBound
{
    Root pole;
    cplx a_lead; ///< a_{-m}
    cplx a_next; ///< a_{1-m}
    double bound = 0.0;
};

struct BoundReport
{
    Verdict verdict = Verdict::finite;
    double bound_value = 0.0;
    std::optional<Root> contributing_pole;
    std::optional<std::pair<cplx, cplx>> laurent_used; ///< (a_{-m}, a_{1-m})
    BoundReason reason = BoundReason::no_crhp_poles;
    double axis_margin = std::numeric_limits<double>::infinity(); ///< |Re| of the decisive pole
    std::vector<AxisPoleBound> candidates;
};

struct BoundOptions
{
    double axis_tol = kDefaultAxisTol;
    LaurentOptions laurent;
};

/// 4(m-1) / (pi |a_{1-m} sqrt(a_{-m})|).
inline double axis_pole_bound(int m, cplx a_lead, cplx a_next)
{
    if (m <= 1)
        return 0.0;
    const double denom = std::numbers::pi * std::abs(a_next * std::sqrt(a_lead));
    return denom == 0.0 ? std::numeric_limits<double>::infinity() : 4.0 * (m - 1) / denom;
}

/// Lower bound on sup_N ||S_N||_inf.
///
/// An open right-half-plane pole, or an imaginary-axis pole of multiplicity
/// three or more, makes the supremum infinite. Double axis poles each give
/// 4/(pi |a_{-1} sqrt(a_{-2})|) and the largest is reported; simple axis
/// poles give the trivial bound 0. A double axis pole with a_{-1} = 0 gives
/// an infinite bound and is reported as unbounded.
inline BoundReport hinf_lower_bound(const RationalTF& loop, const BoundOptions& opt = {})
{
    BoundReport rep;
    const RootSet crhp = loop.poles().closed_rhp(opt.axis_tol);

    if (crhp.empty()) {
        for (const Root& p : loop.poles())
            rep.axis_margin = std::min(rep.axis_margin, std::abs(p.location.real()));
        return rep;
    }

    const RootSet orhp = crhp.open_rhp(opt.axis_tol);
    if (!orhp.empty()) {
        const Root* worst = &orhp[0];
        for (const Root& p : orhp)
            if (p.location.real() > worst->location.real())
                worst = &p;
        rep.verdict = Verdict::unbounded;
        rep.bound_value = std::numeric_limits<double>::infinity();
        rep.reason = BoundReason::orhp_pole;
        rep.contributing_pole = *worst;
        rep.axis_margin = worst->location.real();
        return rep;
    }

    const RootSet axis = crhp.on_axis(opt.axis_tol);
    for (const Root& p : axis) {
        if (p.multiplicity >= 3) {
            rep.verdict = Verdict::unbounded;
            rep.bound_value = std::numeric_limits<double>::infinity();
            rep.reason = BoundReason::axis_multiplicity_ge_3;
            rep.contributing_pole = p;
            rep.axis_margin = std::abs(p.location.real());
            return rep;
        }
    }

    for (const Root& p : axis) {
        const LaurentExpansion le = laurent_at(loop, p.location, p.multiplicity, p.multiplicity + 2, opt.laurent);
        const cplx lead = le.coeff(-p.multiplicity);
        const cplx next = le.coeff(1 - p.multiplicity);
        rep.candidates.push_back({p, lead, next, axis_pole_bound(p.multiplicity, lead, next)});
    }

    const AxisPoleBound* best = &rep.candidates.front();
    for (const AxisPoleBound& c : rep.candidates)
        if (c.bound > best->bound || (c.bound == best->bound && c.pole.multiplicity > best->pole.multiplicity))
            best = &c;

    rep.contributing_pole = best->pole;
    rep.laurent_used = std::make_pair(best->a_lead, best->a_next);
    rep.axis_margin = std::abs(best->pole.location.real());
    rep.bound_value = best->bound;
    rep.reason = best->pole.multiplicity == 2 ? BoundReason::axis_m2 : BoundReason::axis_m1;
    if (std::isinf(best->bound))
        rep.verdict = Verdict::unbounded;
    return rep;
}

// ---------------------------------------------------------------------------
// Peak probing near a double imaginary-axis pole

struct PeakProbe
{
    double omega_peak = 0.0;
    double peak_mag = 0.0;
    bool found = false; ///< false when the maximum sits on the window edge
    double window_lo = 0.0;
    double window_hi = 0.0;
    double seed = 0.0;
    std::string diagnostic;
};

struct ProbeOptions
{
    int scan_points = 0; ///< 0 selects max(4000, 16 N)
    Method method = Method::eigenproduct;
};

/// Largest |S_N(j omega)| in omega in (w0, w0 + 4 pi |sqrt(a_{-2})|/(2N+1)],
/// w0 = Im(pole). The window is scanned on a uniform grid that contains
/// the probe frequency w0 + pi |sqrt(a_{-2})|/(2N+1); the best scan point
/// is refined by golden-section search.
inline PeakProbe probe_peak(const RationalTF& loop, cplx pole, int n, const ProbeOptions& opt = {})
{
    const LaurentExpansion le = laurent_at(loop, pole, 2, 3);
    const double root_mag = std::sqrt(std::abs(le.coeff(-2)));
    const double w0 = le.center.imag();
    const double width = 4.0 * std::numbers::pi * root_mag / (2.0 * n + 1.0);

    PeakProbe out;
    out.window_lo = w0;
    out.window_hi = w0 + width;
    out.seed = w0 + width / 4.0;

    const NetworkSensitivity sn(loop, n);
    auto log_mag = [&](double w) {
        try {
            return sn.log_value(cplx(0.0, w), opt.method).log_mag;
        } catch (const ClosedLoopPoleError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    int points = opt.scan_points > 0 ? opt.scan_points : std::max(4000, 16 * n);
    points += (4 - points % 4) % 4;
    std::vector<double> grid(static_cast<std::size_t>(points));
    std::vector<double> vals(grid.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = w0 + width * static_cast<double>(i + 1) / points;
        vals[i] = log_mag(grid[i]);
        if (vals[i] > vals[best])
            best = i;
    }

    if (best == 0 || best + 1 == grid.size()) {
        out.omega_peak = grid[best];
        out.peak_mag = std::exp(vals[best]);
        out.diagnostic = "no interior local maximum in the probe window";
        return out;
    }

    // Golden-section maximisation on the bracketing scan cell.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = grid[best - 1], b = grid[best + 1];
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = log_mag(c), fd = log_mag(d);
    for (int it = 0; it < 200 && (b - a) > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(b); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = log_mag(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = log_mag(d);
        }
    }
    const double w = 0.5 * (a + b);
    const double fw = log_mag(w);
    if (fw >= vals[best]) {
        out.omega_peak = w;
        out.peak_mag = std::exp(fw);
    } else {
        out.omega_peak = grid[best];
        out.peak_mag = std::exp(vals[best]);
    }
    out.found = true;
    return out;
}

// ---------------------------------------------------------------------------
// Gain crossings and Routh-Hurwitz

struct Crossing
{
    double k = 0.0;
    double omega = 0.0;
};

namespace detail
{

/// Real and imaginary parts of p(j omega) as real polynomials in omega.
inline std::pair<Poly, Poly> split_on_axis(const Poly& p)
{
    std::vector<double> re(p.size(), 0.0), im(p.size(), 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
        (k % 2 == 0 ? re : im)[k] = sign * p.coeffs()[k];
    }
    return {Poly(std::move(re)), Poly(std::move(im))};
}

} // namespace detail

/// Gains k > 0 and frequencies omega >= 0 with d(j omega) + k n(j omega) = 0
/// for loop = n/d, ascending in k. Found from the real roots of
/// Im(d(j omega) conj(n(j omega))) with k = -Re(d conj n)/|n|^2. When that
/// imaginary part vanishes identically the crossings form a continuum and
/// only the omega = 0 crossing is reported.
inline std::vector<Crossing> gain_crossings(const RationalTF& loop)
{
    const Poly& n = loop.num();
    const Poly& d = loop.den();
    if (n.is_zero())
        throw DataError("degenerate loop: numerator is identically zero");

    const auto [nr, ni] = detail::split_on_axis(n);
    const auto [dr, di] = detail::split_on_axis(d);
    const Poly im = di * nr - dr * ni;
    const Poly re = dr * nr + di * ni;
    const Poly nn = nr * nr + ni * ni;

    std::vector<Crossing> out;
    auto consider = [&](double w) {
        const double mag = nn(w);
        if (!(mag > 0.0))
            return;
        const double k = -re(w) / mag;
        if (k > 0.0 && std::isfinite(k))
            out.push_back({k, w});
    };

    if (n[0] != 0.0)
        consider(0.0);

    // im is odd in omega: im(w) = w q(w^2).
    std::vector<double> q;
    for (std::size_t k = 1; k < im.size(); k += 2)
        q.push_back(im.coeffs()[k]);
    const Poly qx(std::move(q));
    if (qx.degree() >= 1) {
        std::size_t zeros_at_origin = 0;
        while (qx.coeffs()[zeros_at_origin] == 0.0)
            ++zeros_at_origin;
        if (static_cast<int>(zeros_at_origin) < qx.degree()) {
            for (const Root& r : roots(qx, loop.cluster_tol())) {
                const cplx x = r.location;
                if (x.real() <= 0.0 || std::abs(x.imag()) > 1e-8 * std::max(1.0, std::abs(x)))
                    continue;
                double w = std::sqrt(x.real());
                if (r.multiplicity == 1) {
                    const Poly dim = derivative(im);
                    for (int it = 0; it < 8; ++it) {
                        const double slope = dim(w);
                        if (slope == 0.0)
                            break;
                        const double next = w - im(w) / slope;
                        if (!(std::abs(im(next)) < std::abs(im(w))))
                            break;
                        w = next;
                    }
                }
                consider(w);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) { return a.k < b.k; });
    return out;
}

/// Hurwitz test through the full Routh array. A first-column entry that is
/// zero to 1e-12 relative counts as not stable (marginal or unstable).
/// A nonzero constant has no roots and is reported stable.
inline bool routh_hurwitz_stable(const Poly& p)
{
    if (p.is_zero())
        throw ZeroPolynomialError("Routh-Hurwitz test of the zero polynomial");
    const int deg = p.degree();
    if (deg == 0)
        return true;

    const std::size_t width = static_cast<std::size_t>(deg) / 2 + 1;
    std::vector<double> prev(width, 0.0), cur(width, 0.0);
    for (int k = deg, j = 0; k >= 0; k -= 2, ++j)
        prev[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(k)];
    for (int k = deg - 1, j = 0; k >= 0; k -= 2, ++j)
        cur[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(k)];

    const double sign = p.leading() > 0.0 ? 1.0 : -1.0;
    auto row_scale = [](const std::vector<double>& r) {
        double m = 0.0;
        for (double x : r)
            m = std::max(m, std::abs(x));
        return m;
    };
    const double coeff_scale = p.max_abs_coeff();
    if (!(sign * cur[0] > 1e-12 * coeff_scale))
        return false;

    for (int row = 2; row <= deg; ++row) {
        std::vector<double> next(width, 0.0);
        for (std::size_t j = 0; j + 1 < width; ++j)
            next[j] = (cur[0] * prev[j + 1] - prev[0] * cur[j + 1]) / cur[0];
        const double scale = std::max(row_scale(prev), row_scale(cur));
        if (!(sign * next[0] > 1e-12 * scale))
            return false;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return true;
}

struct CriticalGain
{
    double k = 0.0;
    double omega = 0.0;
    bool interior = false; ///< strictly inside the gain interval
    bool boundary = false; ///< at the upper end of the interval within 1e-9
};

struct StabilityReport
{
    bool stable_all_gains = false;
    std::vector<CriticalGain> critical_gains;
    std::vector<std::pair<double, bool>> tested_gains; ///< (k, stable)
    double gain_lo = 0.0;
    double gain_hi = 4.0;
};

/// Whether 1/(1 + k PC) is stable for every k in (0, 4), the interval
/// containing every eigenvalue of every L_N and Lbar_N.
inline StabilityReport stable_for_all_gains(const RationalTF& loop)
{
    StabilityReport rep;
    const double lo = rep.gain_lo, hi = rep.gain_hi;

    std::vector<double> cuts{lo};
    for (const Crossing& c : gain_crossings(loop)) {
        CriticalGain g{c.k, c.omega, false, std::abs(c.k - hi) <= 1e-9};
        g.interior = c.k > lo && c.k < hi && !g.boundary;
        if (g.interior)
            cuts.push_back(c.k);
        rep.critical_gains.push_back(g);
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    bool all = true;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double k = 0.5 * (cuts[i] + cuts[i + 1]);
        const Poly charpoly = (loop.den() + k * loop.num()).trimmed(1e-12);
        const bool ok = !charpoly.is_zero() && routh_hurwitz_stable(charpoly);
        rep.tested_gains.emplace_back(k, ok);
        all = all && ok;
    }
    const bool interior_crossing = std::any_of(rep.critical_gains.begin(), rep.critical_gains.end(),
                                               [](const CriticalGain& g) { return g.interior; });
    rep.stable_all_gains = all && !interior_crossing;
    return rep;
}

// ---------------------------------------------------------------------------
// Sensitivity integrals

struct IntegralReport
{
    int n = 0;
    double value = 0.0;
    double error_estimate = 0.0;
    std::vector<double> split_points;
    double truncation_freq = 0.0;
    double tail_estimate = 0.0; ///< contribution of [truncation_freq, inf), included in value
    double tail_error = 0.0;
    double expected = 0.0; ///< pi * sum Re(p) over closed-RHP loop poles, per factor
};

struct IntegralOptions
{
    double tol = 1e-6;
    Method method = Method::eigenproduct;
    bool enforce_premise = true;
    int max_pieces = 4000; ///< subinterval budget per adaptive run
    double near_axis = 0.2; ///< |Re z| <= near_axis |z| marks a singular or resonant frequency
};

namespace detail
{

/// ln|1 + k g| from a scaled num/den sample.
inline double log_abs_one_plus(double k, const RatioSample& x)
{
    if (x.small()) {
        const cplx g = x.num / x.den;
        return 0.5 * std::log1p(k * (2.0 * g.real() + k * std::norm(g)));
    }
    const cplx h = x.den / x.num;
    return std::log(std::abs(h + k)) - std::log(std::abs(h));
}

struct Quadrature
{
    double value = 0.0;
    double error = 0.0;
    double tail = 0.0;
    double tail_error = 0.0;
    std::vector<double> breaks;
    double omega_cut = 0.0;
};

/// Globally adaptive 15/31-point Gauss-Kronrod over consecutive break
/// points: the piece with the largest error is bisected until the
/// summed error is below abs_tol or the piece budget is spent. Boost's
/// rule is applied non-adaptively on each piece; its error estimate is in
/// [-1, 1] units and is rescaled by the half-width here.
template <class F>
std::pair<double, double> adaptive_gk(F& f, const std::vector<double>& breaks, double abs_tol, int max_pieces)
{
    using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    struct Piece
    {
        double a, b, value, error;
    };
    auto make = [&](double a, double b) {
        double err = 0.0;
        const double v = Rule::integrate(f, a, b, 0, 0.0, &err);
        return Piece{a, b, v, err * 0.5 * (b - a)};
    };
    auto by_error = [](const Piece& x, const Piece& y) { return x.error < y.error; };

    std::vector<Piece> heap;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        heap.push_back(make(breaks[i], breaks[i + 1]));
        total_err += heap.back().error;
    }
    std::make_heap(heap.begin(), heap.end(), by_error);

    while (total_err > abs_tol && static_cast<int>(heap.size()) < max_pieces && !heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), by_error);
        const Piece worst = heap.back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            std::push_heap(heap.begin(), heap.end(), by_error);
            break;
        }
        heap.pop_back();
        const Piece left = make(worst.a, mid);
        const Piece right = make(mid, worst.b);
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), by_error);
        total_err = 0.0;
        for (const Piece& p : heap)
            total_err += p.error;
    }

    std::sort(heap.begin(), heap.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
    double value = 0.0, err = 0.0;
    for (const Piece& p : heap) {
        value += p.value;
        err += p.error;
    }
    return {value, err};
}

/// Integrates f over [0, inf): panels between the break frequencies up to
/// omega_cut take 80% of the tolerance, the tail through omega = omega_cut / t
/// the remaining 20%.
template <class F>
Quadrature integrate_half_line(F f, std::vector<double> splits, double omega_cut, const IntegralOptions& opt)
{
    Quadrature q;
    q.omega_cut = omega_cut;

    splits.push_back(0.0);
    splits.push_back(omega_cut);
    double lowest = omega_cut;
    for (double s : splits)
        if (s > 0.0)
            lowest = std::min(lowest, s);
    for (double w = std::pow(10.0, std::floor(std::log10(lowest)) - 2.0); w < omega_cut; w *= 10.0)
        splits.push_back(w);
    std::sort(splits.begin(), splits.end());
    std::vector<double> breaks;
    for (double s : splits)
        if (s >= 0.0 && s <= omega_cut && (breaks.empty() || s > breaks.back() * (1.0 + 1e-12) + 1e-300))
            breaks.push_back(s);
    q.breaks = breaks;

    const auto [panels, panel_err] = adaptive_gk(f, breaks, 0.8 * opt.tol, opt.max_pieces);
    auto tail = [&](double t) { return f(omega_cut / t) * omega_cut / (t * t); };
    const auto [tail_value, tail_err] = adaptive_gk(tail, {0.0, 1.0}, 0.2 * opt.tol, opt.max_pieces);

    q.tail = tail_value;
    q.tail_error = tail_err;
    q.value = panels + tail_value;
    q.error = panel_err + tail_err;
    return q;
}

/// Imaginary parts (>= 0) of near-axis roots, and the largest root magnitude.
inline void collect_features(const RootSet& rs, double near_axis, std::vector<double>& splits, double& largest)
{
    for (const Root& r : rs) {
        largest = std::max(largest, std::abs(r.location));
        if (std::abs(r.location.real()) <= near_axis * std::abs(r.location) && r.location.imag() >= 0.0)
            splits.push_back(r.location.imag());
    }
}

inline void collect_closed_loop(const RationalTF& loop, const std::vector<double>& gains, double near_axis,
                                std::vector<double>& splits, double& largest)
{
    for (double k : gains) {
        const Poly charpoly = (loop.den() + k * loop.num()).trimmed(1e-12);
        if (charpoly.degree() >= 1)
            collect_features(roots(charpoly, loop.cluster_tol()), near_axis, splits, largest);
    }
}

inline double crhp_real_sum(const RationalTF& loop)
{
    double s = 0.0;
    for (const Root& p : loop.poles().closed_rhp(kDefaultAxisTol))
        s += p.multiplicity * p.location.real();
    return std::numbers::pi * s;
}

inline void require_relative_degree(const RationalTF& loop)
{
    if (loop.relative_degree() < 2) {
        std::ostringstream msg;
        msg << "loop has relative degree " << loop.relative_degree();
        throw PremiseError("relative degree >= 2", msg.str());
    }
}

} // namespace detail

/// Integral of ln|S_N(j omega)| over [0, inf). Requires relative degree >= 2
/// and stability of 1/(1 + k PC) for every k in (0, 4) unless
/// opt.enforce_premise is false.
inline IntegralReport bode_integral(const RationalTF& loop, int n, const IntegralOptions& opt = {})
{
    if (opt.enforce_premise) {
        detail::require_relative_degree(loop);
        if (!stable_for_all_gains(loop).stable_all_gains)
            throw PremiseError("stable for all gains in (0,4)", "1/(1+k PC) is not stable for every k in (0,4)");
    }

    const NetworkSensitivity sn(loop, n);
    std::vector<double> splits;
    double largest = 1.0;
    detail::collect_features(loop.poles(), opt.near_axis, splits, largest);
    detail::collect_features(loop.zeros(), opt.near_axis, splits, largest);
    detail::collect_closed_loop(loop, sn.pinned_spectrum(), opt.near_axis, splits, largest);
    detail::collect_closed_loop(loop, sn.dirichlet_spectrum(), opt.near_axis, splits, largest);
    const double omega_cut = 100.0 * largest;

    auto f = [&](double w) { return sn.log_value(cplx(0.0, w), opt.method).log_mag; };
    const detail::Quadrature q = detail::integrate_half_line(f, splits, omega_cut, opt);

    IntegralReport rep;
    rep.n = n;
    rep.value = q.value;
    rep.error_estimate = q.error;
    rep.split_points = q.breaks;
    rep.truncation_freq = q.omega_cut;
    rep.tail_estimate = q.tail;
    rep.tail_error = q.tail_error;
    rep.expected = detail::crhp_real_sum(loop);
    return rep;
}

/// Integral of ln|det(I + PC L)^{-1}| = -sum_k ln|1 + kappa_k PC| over
/// [0, inf), kappa_k the spectrum of L_N (pinned) or Lbar_N (dirichlet).
inline IntegralReport det_log_integral(const RationalTF& loop, int n, LaplacianVariant variant,
                                       const IntegralOptions& opt = {})
{
    const std::vector<double> spectrum = eig(n, variant);
    if (opt.enforce_premise) {
        detail::require_relative_degree(loop);
        for (double k : spectrum) {
            const Poly charpoly = (loop.den() + k * loop.num()).trimmed(1e-12);
            if (charpoly.is_zero() || !routh_hurwitz_stable(charpoly)) {
                std::ostringstream msg;
                msg << "1/(1+k PC) unstable at eigenvalue k=" << k;
                throw PremiseError("closed loop stable at every eigenvalue", msg.str());
            }
        }
    }

    IntegralReport rep;
    rep.n = n;
    if (spectrum.empty())
        return rep;

    std::vector<double> splits;
    double largest = 1.0;
    detail::collect_features(loop.poles(), opt.near_axis, splits, largest);
    detail::collect_features(loop.zeros(), opt.near_axis, splits, largest);
    detail::collect_closed_loop(loop, spectrum, opt.near_axis, splits, largest);
    const double omega_cut = 100.0 * largest;

    auto f = [&](double w) {
        const RatioSample x = loop.sample(cplx(0.0, w));
        double acc = 0.0;
        for (double k : spectrum)
            acc -= detail::log_abs_one_plus(k, x);
        return acc;
    };
    const detail::Quadrature q = detail::integrate_half_line(f, splits, omega_cut, opt);

    rep.value = q.value;
    rep.error_estimate = q.error;
    rep.split_points = q.breaks;
    rep.truncation_freq = q.omega_cut;
    rep.tail_estimate = q.tail;
    rep.tail_error = q.tail_error;
    rep.expected = static_cast<double>(spectrum.size()) * detail::crhp_real_sum(loop);
    return rep;
}

} // namespace netlimits
