// netlimits: command-line front end.
//
//   netlimits <command> <config> [--method M] [--out PATH] [--svg] [--tol X] [--json]
//
// commands: bound, stability, sweep, integral, verify

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "netlimits/cli/commands.hpp"

namespace nl = netlimits;
namespace cli = netlimits::cli;

int main(int argc, char** argv)
{
    CLI::App app{"Sensitivity limits of string networks"};
    app.set_version_flag("--version", cli::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string method_name = "auto";
    cli::CommandOptions opt;
    double tol = 0.0;

    struct Command
    {
        const char* name;
        const char* help;
        int (*run)(const cli::AnalysisConfig&, const cli::CommandOptions&, std::ostream&, std::ostream&);
    };
    const Command commands[] = {
        {"bound", "lower bound on sup_N ||S_N||_inf (JSON)", &cli::cmd_bound},
        {"stability", "stability of 1/(1+kPC) for k in (0,4) (JSON)", &cli::cmd_stability},
        {"sweep", "S_N(j omega) on the config grid (CSV, optional SVG)", &cli::cmd_sweep},
        {"integral", "integral of ln|S_N(j omega)| for each N (JSON)", &cli::cmd_integral},
        {"verify", "cross-method agreement check", &cli::cmd_verify},
    };

    const Command* chosen = nullptr;
    for (const Command& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("config", config_path, "analysis config file")->required();
        sub->add_option("--method", method_name, "auto|mobius|eigenproduct|linsolve")
            ->check(CLI::IsMember({"auto", "mobius", "eigenproduct", "linsolve"}));
        sub->add_option("--out", opt.out_path, "output path (sweep)");
        sub->add_flag("--svg", opt.svg, "also write <out>.svg (sweep)");
        sub->add_option("--tol", tol, "quadrature / agreement tolerance")->check(CLI::PositiveNumber);
        sub->add_flag("--json", opt.json, "force JSON on stdout");
        sub->callback([&chosen, &c] { chosen = &c; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::exit_input;
    }

    for (CLI::App* sub : app.get_subcommands()) {
        if (sub->count("--method"))
            opt.method = nl::parse_method(method_name);
        if (sub->count("--tol"))
            opt.tol = tol;
    }

    cli::AnalysisConfig cfg;
    try {
        cfg = cli::load_config(config_path);
    } catch (const nl::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::exit_input;
    }
    return chosen->run(cfg, opt, std::cout, std::cerr);
}
