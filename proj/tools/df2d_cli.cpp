#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "df2d/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"df2d: symbolic-numeric checks for planar elastic fields with a "
                 "point singularity"};
    app.require_subcommand(1);

    struct Opts {
        std::string scenario;
        std::string out = "out";
    };

    // "run" executes every task in the scenario; the named subcommands restrict
    // execution to tasks of that kind.
    const std::vector<std::string> kinds = {
        "run",           "check-equilibrium", "check-compatibility",
        "check-incompatibility", "solve",     "force",
        "sdeg",          "render"};

    std::map<std::string, Opts> opts;
    for (const auto& k : kinds) {
        auto* sub = app.add_subcommand(
            k, k == "run" ? "run every task in the scenario"
                          : "run the scenario's '" + k + "' tasks");
        sub->add_option("--scenario", opts[k].scenario, "scenario JSON file")
            ->required();
        sub->add_option("--out", opts[k].out, "output directory (default: out)");
    }

    CLI11_PARSE(app, argc, argv);

    for (const auto& k : kinds) {
        if (!app.get_subcommand(k)->parsed()) continue;
        const auto& o = opts[k];
        auto res = df2d::run_scenario(o.scenario, o.out, k == "run" ? "" : k);
        std::cout << res.report_text;
        return res.exit_status;
    }
    return 1;
}
