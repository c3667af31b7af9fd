#pragma once

// Command implementations behind the netlimits executable. Each returns
// the process exit code: 0 success, 1 analysis refused or failed, 2 bad input.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "netlimits/cli/config.hpp"
#include "netlimits/cli/output.hpp"
#include "netlimits/fundamental_limits.hpp"
#include "netlimits/string_sensitivity.hpp"

namespace netlimits::cli
{

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int
{
    exit_ok = 0,
    exit_refused = 1,
    exit_input = 2
};

struct CommandOptions
{
    std::optional<Method> method;
    std::string out_path;
    bool svg = false;
    std::optional<double> tol;
    bool json = false;
};

/// Runs body, mapping exceptions to exit codes and stderr diagnostics.
inline int guarded(std::ostream& err, const std::function<int()>& body)
{
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const ZeroPolynomialError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const PremiseError& e) {
        err << "analysis refused: " << e.what() << '\n';
        return exit_refused;
    } catch (const std::exception& e) {
        err << "analysis failed: " << e.what() << '\n';
        return exit_refused;
    }
}

inline int cmd_bound(const AnalysisConfig& cfg, const CommandOptions&, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        BoundOptions opt;
        opt.axis_tol = cfg.tolerances.axis_tol;
        out << to_json(hinf_lower_bound(cfg.loop(), opt)).dump(2) << '\n';
        return exit_ok;
    });
}

inline int cmd_stability(const AnalysisConfig& cfg, const CommandOptions&, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        out << to_json(stable_for_all_gains(cfg.loop())).dump(2) << '\n';
        return exit_ok;
    });
}

inline json sweep_metadata(const AnalysisConfig& cfg, const std::vector<SweepResult>& sweeps)
{
    json meta;
    meta["tool"] = "netlimits";
    meta["version"] = kVersion;
    meta["command"] = "sweep";
    meta["config"] = json{{"plant_num", cfg.plant_num},
                          {"plant_den", cfg.plant_den},
                          {"controller_num", cfg.controller_num},
                          {"controller_den", cfg.controller_den},
                          {"n_values", cfg.n_values},
                          {"omega_min", cfg.grid.omega_min},
                          {"omega_max", cfg.grid.omega_max},
                          {"points_per_decade", cfg.grid.points_per_decade},
                          {"scale", cfg.grid.scale == GridScale::log ? "log" : "linear"}};
    json runs = json::array();
    for (const SweepResult& s : sweeps) {
        std::map<std::string, int> used;
        for (Method m : s.point_methods)
            ++used[std::string(to_string(m))];
        runs.push_back(json{{"n", s.n}, {"method", std::string(to_string(s.method))}, {"points", s.omegas.size()},
                            {"methods_used", used}, {"gaps", s.gaps}});
    }
    meta["sweeps"] = std::move(runs);
    return meta;
}

/// Sweeps every N on the config grid. CSV goes to opt.out_path (stdout when
/// empty) with a `.meta.json` sidecar; --svg writes `<out>.svg` as well.
inline int cmd_sweep(const AnalysisConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        if (opt.svg && opt.out_path.empty())
            throw ConfigError("", 0, "--svg needs --out");
        const RationalTF loop = cfg.loop();
        const std::vector<double> omegas = cfg.grid.grid().points();
        const Method method = opt.method.value_or(Method::automatic);

        std::vector<SweepResult> sweeps;
        for (int n : cfg.n_values)
            sweeps.push_back(sweep(loop, n, omegas, method));
        for (const SweepResult& s : sweeps)
            if (!s.gaps.empty())
                err << "warning: N=" << s.n << ": " << s.gaps.size() << " grid points could not be evaluated\n";

        if (opt.out_path.empty()) {
            if (opt.json) {
                json all = json::array();
                for (const SweepResult& s : sweeps)
                    all.push_back(to_json(s));
                out << all.dump() << '\n';
            } else {
                write_csv(out, sweeps);
            }
            return exit_ok;
        }

        auto open = [&](const std::string& path) {
            std::ofstream f(path, std::ios::binary);
            if (!f)
                throw ConfigError("", 0, "cannot write '" + path + "'");
            return f;
        };
        {
            std::ofstream f = open(opt.out_path);
            write_csv(f, sweeps);
        }
        {
            std::ofstream f = open(opt.out_path + ".meta.json");
            f << sweep_metadata(cfg, sweeps).dump(2) << '\n';
        }
        if (opt.svg) {
            std::ofstream f = open(opt.out_path + ".svg");
            write_svg(f, sweeps, cfg.grid.omega_min, cfg.grid.omega_max, cfg.grid.scale);
        }
        if (opt.json) {
            json all = json::array();
            for (const SweepResult& s : sweeps)
                all.push_back(to_json(s));
            out << all.dump() << '\n';
        }
        return exit_ok;
    });
}

/// Bode integral for every N. Refused (exit 1) when the loop fails the
/// relative-degree or all-gains stability premise.
inline int cmd_integral(const AnalysisConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& err)
{
    const int code = guarded(err, [&] {
        const RationalTF loop = cfg.loop();
        IntegralOptions iopt;
        iopt.tol = opt.tol.value_or(cfg.tolerances.quad_tol);
        iopt.method = opt.method.value_or(Method::eigenproduct);
        if (iopt.method == Method::automatic)
            iopt.method = Method::eigenproduct;
        json all = json::array();
        for (int n : cfg.n_values)
            all.push_back(to_json(bode_integral(loop, n, iopt)));
        out << all.dump(2) << '\n';
        return exit_ok;
    });
    if (code == exit_refused && opt.json)
        out << json{{"refused", true}}.dump() << '\n';
    return code;
}

struct VerifyRow
{
    int n = 0;
    int points = 0;
    int compared = 0;
    double max_rel_diff = 0.0;
    bool pass = true;
};

/// Cross-method agreement: mobius (where conditioned), eigenproduct and
/// linsolve must agree to the tolerance (default 1e-7 relative) at up to
/// 200 grid frequencies per N.
inline int cmd_verify(const AnalysisConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const RationalTF loop = cfg.loop();
        const double tol = opt.tol.value_or(1e-7);
        const std::vector<double> grid = cfg.grid.grid().points();
        const std::size_t stride = std::max<std::size_t>(1, grid.size() / 200);

        std::vector<VerifyRow> rows;
        for (int n : cfg.n_values) {
            const NetworkSensitivity sn(loop, n);
            VerifyRow row;
            row.n = n;
            for (std::size_t i = 0; i < grid.size(); i += stride) {
                const RatioSample x = loop.sample(cplx(0.0, avoid_axis_poles(loop, grid[i])));
                ++row.points;
                std::vector<cplx> vals;
                try {
                    vals.push_back(sn.eigenproduct(x));
                    if (n <= SensitivityOptions{}.linsolve_max_n)
                        vals.push_back(sn.linsolve(x));
                } catch (const ClosedLoopPoleError&) {
                    continue;
                }
                try {
                    vals.push_back(sn.mobius(x));
                } catch (const ConditioningError&) {
                }
                if (vals.size() < 2)
                    continue;
                ++row.compared;
                for (std::size_t a = 0; a < vals.size(); ++a)
                    for (std::size_t b = a + 1; b < vals.size(); ++b) {
                        const double scale = std::max({std::abs(vals[a]), std::abs(vals[b]), 1e-300});
                        row.max_rel_diff = std::max(row.max_rel_diff, std::abs(vals[a] - vals[b]) / scale);
                    }
            }
            row.pass = row.max_rel_diff <= tol;
            rows.push_back(row);
        }

        json report = json::array();
        bool all = true;
        for (const VerifyRow& r : rows) {
            all = all && r.pass;
            report.push_back(json{{"n", r.n}, {"points", r.points}, {"compared", r.compared},
                                  {"max_rel_diff", r.max_rel_diff}, {"pass", r.pass}});
        }
        out << json{{"tolerance", tol}, {"pass", all}, {"results", report}}.dump(2) << '\n';
        if (!all)
            err << "cross-method agreement failed\n";
        return all ? exit_ok : exit_refused;
    });
}

/// Reads and parses a config file; ConfigError on I/O failure.
inline AnalysisConfig load_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw ConfigError("", 0, "cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

} // namespace netlimits::cli
