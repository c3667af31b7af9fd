#pragma once

// JSON, CSV and SVG renderings of analysis results.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "netlimits/fundamental_limits.hpp"
#include "netlimits/string_sensitivity.hpp"

namespace netlimits::cli
{

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// JSON

/// Non-finite values have no JSON literal; they become null.
inline json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json to_json(cplx z) { return json{{"re", number(z.real())}, {"im", number(z.imag())}}; }

inline json to_json(const Root& r)
{
    return json{{"re", number(r.location.real())}, {"im", number(r.location.imag())}, {"multiplicity", r.multiplicity}};
}

inline json to_json(const BoundReport& b)
{
    json j;
    j["verdict"] = std::string(to_string(b.verdict));
    j["bound_value"] = number(b.bound_value);
    j["bound_db"] = b.bound_value > 0.0 ? number(20.0 * std::log10(b.bound_value)) : json(nullptr);
    j["reason"] = std::string(to_string(b.reason));
    j["contributing_pole"] = b.contributing_pole ? to_json(*b.contributing_pole) : json(nullptr);
    j["laurent_used"] = b.laurent_used
        ? json{{"a_lead", to_json(b.laurent_used->first)}, {"a_next", to_json(b.laurent_used->second)}}
        : json(nullptr);
    j["axis_margin"] = number(b.axis_margin);
    json cands = json::array();
    for (const AxisPoleBound& c : b.candidates)
        cands.push_back(json{{"pole", to_json(c.pole)},
                             {"a_lead", to_json(c.a_lead)},
                             {"a_next", to_json(c.a_next)},
                             {"bound", number(c.bound)}});
    j["candidates"] = std::move(cands);
    return j;
}

inline json to_json(const StabilityReport& s)
{
    json j;
    j["stable_all_gains"] = s.stable_all_gains;
    json crit = json::array();
    for (const CriticalGain& g : s.critical_gains)
        crit.push_back(json{{"k", number(g.k)}, {"omega", number(g.omega)}, {"interior", g.interior}, {"boundary", g.boundary}});
    j["critical_gains"] = std::move(crit);
    json tested = json::array();
    for (const auto& [k, ok] : s.tested_gains)
        tested.push_back(json{{"k", number(k)}, {"stable", ok}});
    j["tested_gains"] = std::move(tested);
    j["gain_interval"] = json::array({s.gain_lo, s.gain_hi});
    return j;
}

inline json to_json(const IntegralReport& r)
{
    json j;
    j["n"] = r.n;
    j["value"] = number(r.value);
    j["error_estimate"] = number(r.error_estimate);
    json splits = json::array();
    for (double w : r.split_points)
        splits.push_back(number(w));
    j["split_points"] = std::move(splits);
    j["truncation_freq"] = number(r.truncation_freq);
    j["tail_estimate"] = number(r.tail_estimate);
    j["tail_error"] = number(r.tail_error);
    j["expected"] = number(r.expected);
    return j;
}

inline json to_json(const SweepResult& s)
{
    json j;
    j["n"] = s.n;
    j["method"] = std::string(to_string(s.method));
    json rows = json::array();
    for (std::size_t i = 0; i < s.omegas.size(); ++i)
        rows.push_back(json{{"omega", number(s.omegas[i])},
                            {"re", number(s.values[i].real())},
                            {"im", number(s.values[i].imag())},
                            {"ln_abs", number(s.log_mags[i])}});
    j["points"] = std::move(rows);
    j["gaps"] = s.gaps;
    return j;
}

// ---------------------------------------------------------------------------
// CSV

/// Shortest decimal that reads back to the same double (at most 17
/// significant digits); "nan", "inf", "-inf" for non-finite values.
inline std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

inline double parse_double(std::string_view s)
{
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw DataError("malformed CSV number '" + std::string(s) + "'");
    return v;
}

/// Columns: omega, then re_S{N}, im_S{N}, ln_abs_S{N} per sweep. All sweeps
/// must share the frequency grid.
inline void write_csv(std::ostream& out, const std::vector<SweepResult>& sweeps)
{
    out << "omega";
    for (const SweepResult& s : sweeps)
        out << ",re_S" << s.n << ",im_S" << s.n << ",ln_abs_S" << s.n;
    out << '\n';
    if (sweeps.empty())
        return;
    const std::size_t rows = sweeps.front().omegas.size();
    for (const SweepResult& s : sweeps)
        if (s.omegas.size() != rows)
            throw DataError("sweeps on different grids cannot share a CSV table");
    for (std::size_t i = 0; i < rows; ++i) {
        out << format_double(sweeps.front().omegas[i]);
        for (const SweepResult& s : sweeps)
            out << ',' << format_double(s.values[i].real()) << ',' << format_double(s.values[i].imag()) << ','
                << format_double(s.log_mags[i]);
        out << '\n';
    }
}

/// Inverse of write_csv (method and gap bookkeeping are not stored).
inline std::vector<SweepResult> read_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw DataError("empty CSV");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            header.push_back(cell);
    }
    if (header.empty() || header.front() != "omega" || (header.size() - 1) % 3 != 0)
        throw DataError("unexpected CSV header");
    std::vector<SweepResult> sweeps((header.size() - 1) / 3);
    for (std::size_t k = 0; k < sweeps.size(); ++k) {
        const std::string& col = header[1 + 3 * k];
        if (col.rfind("re_S", 0) != 0)
            throw DataError("unexpected CSV column '" + col + "'");
        sweeps[k].n = std::stoi(col.substr(4));
    }
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<double> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            cells.push_back(parse_double(std::string_view(line).substr(start, comma - start)));
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        if (cells.size() != header.size())
            throw DataError("CSV row has the wrong number of columns");
        for (std::size_t k = 0; k < sweeps.size(); ++k) {
            sweeps[k].omegas.push_back(cells[0]);
            sweeps[k].values.emplace_back(cells[1 + 3 * k], cells[2 + 3 * k]);
            sweeps[k].log_mags.push_back(cells[3 + 3 * k]);
        }
    }
    return sweeps;
}

// ---------------------------------------------------------------------------
// SVG

namespace detail
{

inline std::string fixed(double x, int digits = 2)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::fixed, digits);
    return std::string(buf.data(), res.ptr);
}

inline std::string tick_label(double x)
{
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 3);
    return std::string(buf.data(), res.ptr);
}

} // namespace detail

/// ln|S_N(j omega)| against omega (log axis when the grid is logarithmic),
/// one polyline per sweep. Self-contained: no scripts, fonts or links.
inline void write_svg(std::ostream& out, const std::vector<SweepResult>& sweeps, double omega_min, double omega_max,
                      GridScale scale)
{
    const double width = 720, height = 440, left = 70, right = 20, top = 30, bottom = 50;
    const double pw = width - left - right, ph = height - top - bottom;
    const bool logx = scale == GridScale::log;
    auto xmap = [&](double w) {
        const double t = logx ? std::log10(w / omega_min) / std::log10(omega_max / omega_min)
                              : (w - omega_min) / (omega_max - omega_min);
        return left + t * pw;
    };

    double ylo = std::numeric_limits<double>::infinity(), yhi = -ylo;
    for (const SweepResult& s : sweeps)
        for (double v : s.log_mags)
            if (std::isfinite(v)) {
                ylo = std::min(ylo, v);
                yhi = std::max(yhi, v);
            }
    if (!std::isfinite(ylo)) {
        ylo = -1.0;
        yhi = 1.0;
    }
    ylo = std::min(ylo, 0.0);
    yhi = std::max(yhi, 0.0);
    const double pad = 0.05 * std::max(yhi - ylo, 1e-6);
    ylo = std::floor(ylo - pad);
    yhi = std::ceil(yhi + pad);
    auto ymap = [&](double v) { return top + (yhi - v) / (yhi - ylo) * ph; };

    static const char* const colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    // x ticks
    std::vector<double> xt;
    if (logx) {
        for (double e = std::ceil(std::log10(omega_min) - 1e-12); e <= std::log10(omega_max) + 1e-12; e += 1.0)
            xt.push_back(std::pow(10.0, e));
    } else {
        for (int i = 0; i <= 5; ++i)
            xt.push_back(omega_min + (omega_max - omega_min) * i / 5.0);
    }
    for (double w : xt) {
        const std::string x = detail::fixed(xmap(w));
        out << "<line x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x << "\" y2=\"" << top + ph
            << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << x << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << detail::tick_label(w)
            << "</text>\n";
    }
    // y ticks
    const double ystep = std::max(1.0, std::ceil((yhi - ylo) / 8.0));
    for (double v = ylo; v <= yhi + 1e-9; v += ystep) {
        const std::string y = detail::fixed(ymap(v));
        out << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + pw << "\" y2=\"" << y
            << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << left - 8 << "\" y=\"" << y << "\" text-anchor=\"end\" dominant-baseline=\"middle\">"
            << detail::tick_label(v) << "</text>\n";
    }
    // zero line
    out << "<line x1=\"" << left << "\" y1=\"" << detail::fixed(ymap(0.0)) << "\" x2=\"" << left + pw << "\" y2=\""
        << detail::fixed(ymap(0.0)) << "\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";

    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">omega (rad/s)</text>\n";
    out << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << top + ph / 2 << ")\">ln|S_N(j omega)|</text>\n";

    for (std::size_t k = 0; k < sweeps.size(); ++k) {
        const SweepResult& s = sweeps[k];
        const char* colour = colours[k % std::size(colours)];
        out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < s.omegas.size(); ++i) {
            const double w = s.omegas[i], v = s.log_mags[i];
            if (!std::isfinite(v) || w < omega_min || w > omega_max)
                continue;
            out << (first ? "" : " ") << detail::fixed(xmap(w)) << ',' << detail::fixed(ymap(std::clamp(v, ylo, yhi)));
            first = false;
        }
        out << "\"/>\n";
        out << "<text x=\"" << left + pw - 10 << "\" y=\"" << top + 16 + 16 * static_cast<double>(k)
            << "\" text-anchor=\"end\" fill=\"" << colour << "\">N = " << s.n << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace netlimits::cli
