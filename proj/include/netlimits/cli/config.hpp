#pragma once

// Analysis configuration: a flat `key = value` document.
//
//   # loop = P C; coefficients in ASCENDING powers of s
//   plant_num      = [1]
//   plant_den      = [0, 0, 1, 0.1]      # s^2 (0.1 s + 1)
//   controller_num = [1, 2]
//   controller_den = [1, 0.05]
//   n_values       = [1, 10]
//   omega_min      = 0.01
//   omega_max      = 100
//   points_per_decade = 2000
//   scale          = "log"               # or "linear"
//   cluster_tol    = 1e-6
//   axis_tol       = 1e-7
//   quad_tol       = 1e-6
//
// Arrays may span several lines. `#` starts a comment.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "netlimits/errors.hpp"
#include "netlimits/polynomial.hpp"
#include "netlimits/rational_tf.hpp"
#include "netlimits/string_sensitivity.hpp"

namespace netlimits::cli
{

/// Invalid configuration text; carries the offending key and line (0 when
/// the problem is a missing key).
class ConfigError : public Error
{
public:
    ConfigError(std::string key, int line, const std::string& detail)
        : Error(format(key, line, detail)), key_(std::move(key)), line_(line)
    {
    }

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    static std::string format(const std::string& key, int line, const std::string& detail)
    {
        std::ostringstream msg;
        msg << "config";
        if (line > 0)
            msg << " line " << line;
        if (!key.empty())
            msg << ", key '" << key << "'";
        msg << ": " << detail;
        return msg.str();
    }

    std::string key_;
    int line_;
};

struct GridConfig
{
    double omega_min = 1e-2;
    double omega_max = 1e2;
    int points_per_decade = 2000;
    GridScale scale = GridScale::log;

    FrequencyGrid grid() const { return FrequencyGrid::per_decade(omega_min, omega_max, points_per_decade, scale); }
};

struct Tolerances
{
    double cluster_tol = 1e-6;
    double axis_tol = 1e-7;
    double quad_tol = 1e-6;
};

struct AnalysisConfig
{
    std::vector<double> plant_num{1.0};
    std::vector<double> plant_den;
    std::vector<double> controller_num{1.0};
    std::vector<double> controller_den{1.0};
    std::vector<int> n_values{10};
    GridConfig grid;
    Tolerances tolerances;

    /// P(s) C(s).
    RationalTF loop() const
    {
        return RationalTF(mul(Poly(plant_num), Poly(controller_num)), mul(Poly(plant_den), Poly(controller_den)),
                          tolerances.cluster_tol);
    }
};

namespace detail
{

using Value = std::variant<double, std::string, std::vector<double>>;

struct Entry
{
    Value value;
    int line = 0;
};

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::string_view strip_comment(std::string_view s)
{
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"')
            quoted = !quoted;
        else if (s[i] == '#' && !quoted)
            return s.substr(0, i);
    }
    return s;
}

inline std::optional<double> parse_number(std::string_view s)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        return std::nullopt;
    return v;
}

inline Value parse_value(const std::string& key, std::string_view raw, int line)
{
    raw = trim(raw);
    if (raw.empty())
        throw ConfigError(key, line, "missing value");
    if (raw.front() == '[') {
        if (raw.back() != ']')
            throw ConfigError(key, line, "unterminated array");
        std::vector<double> out;
        std::string_view body = trim(raw.substr(1, raw.size() - 2));
        while (!body.empty()) {
            const auto comma = body.find(',');
            const std::string_view item = trim(body.substr(0, comma));
            if (item.empty()) {
                if (comma == std::string_view::npos)
                    break;
                throw ConfigError(key, line, "empty array element");
            }
            const auto v = parse_number(item);
            if (!v)
                throw ConfigError(key, line, "non-numeric array element '" + std::string(item) + "'");
            out.push_back(*v);
            if (comma == std::string_view::npos)
                break;
            body = trim(body.substr(comma + 1));
        }
        return out;
    }
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"')
            throw ConfigError(key, line, "unterminated string");
        return std::string(raw.substr(1, raw.size() - 2));
    }
    if (const auto v = parse_number(raw))
        return *v;
    return std::string(raw);
}

inline std::map<std::string, Entry> tokenize(std::string_view text)
{
    std::map<std::string, Entry> out;
    std::istringstream in{std::string(text)};
    std::string raw_line;
    int line_no = 0;
    std::string pending_key, pending_value;
    int pending_line = 0;

    auto finish = [&](const std::string& key, const std::string& value, int line) {
        if (out.count(key))
            throw ConfigError(key, line, "duplicate key (first set on line " + std::to_string(out[key].line) + ")");
        out[key] = Entry{parse_value(key, value, line), line};
    };

    while (std::getline(in, raw_line)) {
        ++line_no;
        const std::string_view body = trim(strip_comment(raw_line));
        if (!pending_key.empty()) {
            pending_value += ' ';
            pending_value += body;
            if (body.find(']') != std::string_view::npos) {
                finish(pending_key, pending_value, pending_line);
                pending_key.clear();
            }
            continue;
        }
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("", line_no, "expected 'key = value'");
        const std::string key(trim(body.substr(0, eq)));
        if (key.empty())
            throw ConfigError("", line_no, "empty key");
        const std::string_view value = trim(body.substr(eq + 1));
        if (!value.empty() && value.front() == '[' && value.find(']') == std::string_view::npos) {
            pending_key = key;
            pending_value = std::string(value);
            pending_line = line_no;
            continue;
        }
        finish(key, std::string(value), line_no);
    }
    if (!pending_key.empty())
        throw ConfigError(pending_key, pending_line, "unterminated array");
    return out;
}

} // namespace detail

/// Parses and validates a configuration document; defaults fill absent keys.
inline AnalysisConfig parse_config(std::string_view text)
{
    auto entries = detail::tokenize(text);
    AnalysisConfig cfg;

    auto take = [&](const std::string& key) -> const detail::Entry* {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };
    auto array = [&](const std::string& key, std::vector<double>& dst) {
        if (const auto* e = take(key)) {
            if (const auto* v = std::get_if<std::vector<double>>(&e->value))
                dst = *v;
            else if (const auto* d = std::get_if<double>(&e->value))
                dst = {*d};
            else
                throw ConfigError(key, e->line, "expected an array of numbers");
            if (dst.empty())
                throw ConfigError(key, e->line, "coefficient array is empty");
        }
    };
    auto number = [&](const std::string& key, double& dst) {
        if (const auto* e = take(key)) {
            const auto* d = std::get_if<double>(&e->value);
            if (!d)
                throw ConfigError(key, e->line, "expected a number");
            dst = *d;
        }
    };
    auto positive = [&](const std::string& key, double v) {
        if (!(v > 0.0))
            throw ConfigError(key, take(key) ? take(key)->line : 0, "must be positive");
    };

    if (!take("plant_den"))
        throw ConfigError("plant_den", 0, "required key is missing");
    array("plant_num", cfg.plant_num);
    array("plant_den", cfg.plant_den);
    array("controller_num", cfg.controller_num);
    array("controller_den", cfg.controller_den);

    for (const char* key : {"plant_den", "controller_den"}) {
        const auto& coeffs = std::string_view(key) == "plant_den" ? cfg.plant_den : cfg.controller_den;
        if (Poly(coeffs).is_zero())
            throw ConfigError(key, take(key) ? take(key)->line : 0, "denominator is the zero polynomial");
    }

    if (const auto* e = take("n_values")) {
        const auto* v = std::get_if<std::vector<double>>(&e->value);
        if (!v)
            throw ConfigError("n_values", e->line, "expected an array of positive integers");
        if (v->empty())
            throw ConfigError("n_values", e->line, "must not be empty");
        cfg.n_values.clear();
        for (double x : *v) {
            if (!(x >= 1.0) || x != std::floor(x) || x > 1e6)
                throw ConfigError("n_values", e->line, "entries must be positive integers");
            if (!cfg.n_values.empty() && static_cast<int>(x) <= cfg.n_values.back())
                throw ConfigError("n_values", e->line, "entries must be strictly ascending");
            cfg.n_values.push_back(static_cast<int>(x));
        }
    }

    number("omega_min", cfg.grid.omega_min);
    number("omega_max", cfg.grid.omega_max);
    if (const auto* e = take("points_per_decade")) {
        const auto* d = std::get_if<double>(&e->value);
        if (!d || *d < 1.0 || *d != std::floor(*d) || *d > 1e7)
            throw ConfigError("points_per_decade", e->line, "expected a positive integer");
        cfg.grid.points_per_decade = static_cast<int>(*d);
    }
    if (const auto* e = take("scale")) {
        const auto* s = std::get_if<std::string>(&e->value);
        if (s && *s == "log")
            cfg.grid.scale = GridScale::log;
        else if (s && *s == "linear")
            cfg.grid.scale = GridScale::linear;
        else
            throw ConfigError("scale", e->line, "expected \"log\" or \"linear\"");
    }
    if (!(cfg.grid.omega_min < cfg.grid.omega_max))
        throw ConfigError("omega_min", take("omega_min") ? take("omega_min")->line : 0, "must be below omega_max");
    if (cfg.grid.scale == GridScale::log && !(cfg.grid.omega_min > 0.0))
        throw ConfigError("omega_min", take("omega_min") ? take("omega_min")->line : 0,
                          "must be positive for a log grid");
    if (cfg.grid.omega_min < 0.0)
        throw ConfigError("omega_min", take("omega_min") ? take("omega_min")->line : 0, "must be nonnegative");

    number("cluster_tol", cfg.tolerances.cluster_tol);
    number("axis_tol", cfg.tolerances.axis_tol);
    number("quad_tol", cfg.tolerances.quad_tol);
    positive("cluster_tol", cfg.tolerances.cluster_tol);
    positive("axis_tol", cfg.tolerances.axis_tol);
    positive("quad_tol", cfg.tolerances.quad_tol);

    static const char* const known[] = {"plant_num", "plant_den", "controller_num", "controller_den",
                                        "n_values", "omega_min", "omega_max", "points_per_decade",
                                        "scale", "cluster_tol", "axis_tol", "quad_tol"};
    for (const auto& [key, entry] : entries) {
        if (std::find(std::begin(known), std::end(known), key) == std::end(known))
            throw ConfigError(key, entry.line, "unknown key");
    }
    return cfg;
}

} // namespace netlimits::cli
