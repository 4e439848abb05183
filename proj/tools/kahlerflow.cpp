#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kahlerflow/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"complex-time Hamiltonian flows on Kahler structures"};
    app.require_subcommand(1);

    struct Common {
        std::string config;
        std::string out = "-";
        std::string format = "json";
    };

    std::map<std::string, Common> options;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"evolve", "evolved chart, metric and polarization class on a grid"},
        {"potential", "evolved Kahler potential grid with the d dbar residual summary"},
        {"geodesic", "Mabuchi path values, velocity and geodesic residuals"},
        {"blu", "complexified-flow projection cross-check"},
        {"tstark", "cotangent-of-group closed form vs Lie series checks"},
    };
    for (const auto& [name, desc] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        Common& opt = options[name];
        sub->add_option("--config", opt.config, "JSON run configuration")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output path ('-' for stdout)");
        sub->add_option("--format", opt.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    }
    app.get_subcommand("geodesic")->alias("geodesic-check");
    app.get_subcommand("blu")->alias("blu-check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    for (const auto& [name, desc] : commands) {
        (void)desc;
        if (app.get_subcommand(name)->parsed()) {
            const Common& opt = options[name];
            return kahlerflow::run_cli(name, opt.config, opt.out, opt.format, std::cout, std::cerr);
        }
    }
    return 2;
}
