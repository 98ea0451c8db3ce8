// Command-line front end: run, validate and compare scenarios.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "epinet/csv.hpp"
#include "epinet/error.hpp"
#include "epinet/runner.hpp"
#include "epinet/scenario.hpp"

namespace {

// Exit codes: 0 success, 1 comparison outside tolerance, 2 invalid input or
// failed run.
constexpr int kExitMismatch = 1;
constexpr int kExitError = 2;

void report(const std::exception &err)
{
    if (const auto *v = dynamic_cast<const epinet::ValidationError *>(&err)) {
        std::cerr << "error: scenario is invalid (" << v->problems().size() << " problem"
                  << (v->problems().size() == 1 ? "" : "s") << ")\n";
        for (const auto &p : v->problems())
            std::cerr << "  " << p << '\n';
    } else {
        std::cerr << "error: " << err.what() << '\n';
    }
}

int cmd_run(const std::string &path)
{
    const auto scenario = epinet::load_scenario(path);
    const auto outputs = epinet::run_scenario(scenario);
    for (const auto &f : outputs.files)
        std::cout << "wrote " << f.string() << '\n';
    return 0;
}

int cmd_validate(const std::string &path)
{
    const auto scenario = epinet::load_scenario(path);
    std::cout << path << ": valid " << epinet::to_string(scenario.model) << " scenario\n"
              << epinet::effective_config(scenario).dump(2) << '\n';
    return 0;
}

int cmd_compare(const std::string &a, const std::string &b, double tol)
{
    const auto report = epinet::compare_tables(epinet::read_csv(a), epinet::read_csv(b), tol);
    for (const auto &c : report.columns) {
        std::printf("%-12s max_abs_deviation=%.17g %s\n", c.column.c_str(), c.max_abs_deviation,
                    c.pass ? "pass" : "FAIL");
    }
    std::printf("%s (tolerance %.17g)\n", report.pass ? "PASS" : "FAIL", tol);
    return report.pass ? 0 : kExitMismatch;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Epidemic models on contact networks, with interventions and an input-output economy"};
    app.require_subcommand(1);
    app.set_version_flag("--version", epinet::kVersion);

    std::string scenario_path;
    auto *run = app.add_subcommand("run", "Run a scenario and write its outputs");
    run->add_option("scenario", scenario_path, "Scenario file")->required();

    auto *validate = app.add_subcommand("validate", "Check a scenario and print its effective configuration");
    validate->add_option("scenario", scenario_path, "Scenario file")->required();

    std::string file_a, file_b;
    double tol = 0.0;
    auto *compare = app.add_subcommand("compare", "Compare two trajectory CSV files column by column");
    compare->add_option("a", file_a, "First trajectory")->required();
    compare->add_option("b", file_b, "Second trajectory")->required();
    compare->add_option("--tol", tol, "Maximum absolute deviation per column")->required()->check(
        CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (*run)
            return cmd_run(scenario_path);
        if (*validate)
            return cmd_validate(scenario_path);
        return cmd_compare(file_a, file_b, tol);
    } catch (const std::exception &err) {
        report(err);
        return kExitError;
    }
}
