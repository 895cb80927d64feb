// reducesim: command-line front end for single runs, ensembles and scenario checks.

#include "reducesim/harness.hpp"
#include "reducesim/pulse_field.hpp"
#include "reducesim/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

namespace {

using namespace reducesim;

const std::map<std::string, TriggerLaw> kLaws = {
    {"current", TriggerLaw::Current},
    {"hazard", TriggerLaw::ConditionalHazard},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Current-driven stochastic state reduction simulator"};
    app.require_subcommand(1);

    std::string scenario;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string emit_kind;
    TriggerLaw law = TriggerLaw::Current;

    auto* run = app.add_subcommand("run", "Run one trajectory and emit a timeseries or event log");
    std::optional<double> dt;
    std::size_t stride = 1;
    run->add_option("--scenario", scenario, "Scenario file or builtin:NAME")->required();
    run->add_option("--seed", seed, "Trigger seed")->required();
    run->add_option("--dt", dt, "Override the scenario time step")->check(CLI::PositiveNumber);
    run->add_option("--stride", stride, "Record every k-th step")->check(CLI::PositiveNumber);
    run->add_option("--emit", emit_kind, "Artifact kind")->required()->check(CLI::IsMember({"timeseries", "events"}));
    run->add_option("--out", out_path, "Output path")->required();
    run->add_option("--law", law, "Trigger law")->transform(CLI::CheckedTransformer(kLaws));

    auto* mc = app.add_subcommand("mc", "Run a seeded Monte Carlo ensemble");
    std::uint64_t trials = 0;
    std::size_t bins = 100;
    mc->add_option("--scenario", scenario, "Scenario file or builtin:NAME")->required();
    mc->add_option("--trials", trials, "Number of trials")->required()->check(CLI::PositiveNumber);
    mc->add_option("--seed", seed, "Base seed; trials use seed .. seed + trials - 1")->required();
    mc->add_option("--emit", emit_kind, "Artifact kind")->required()->check(CLI::IsMember({"stats", "histogram"}));
    mc->add_option("--out", out_path, "Output path")->required();
    mc->add_option("--bins", bins, "Hit-time histogram bins over [0, t_max]")->check(CLI::PositiveNumber);
    mc->add_option("--dt", dt, "Override the scenario time step")->check(CLI::PositiveNumber);
    mc->add_option("--law", law, "Trigger law")->transform(CLI::CheckedTransformer(kLaws));

    auto* check = app.add_subcommand("check", "Parse and validate a scenario");
    check->add_option("--scenario", scenario, "Scenario file or builtin:NAME")->required();

    auto* field = app.add_subcommand("field", "Dump the scenario's pulse field as a plain-text grid");
    field->add_option("--scenario", scenario, "Scenario file or builtin:NAME")->required();
    field->add_option("--out", out_path, "Output path")->required();

    auto* show = app.add_subcommand("show", "Print a scenario in the scenario file format");
    show->add_option("--scenario", scenario, "Scenario file or builtin:NAME")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const auto spec = load_scenario(scenario);
        if (*run) {
            RunOptions options;
            options.stride = stride;
            options.dt = dt;
            options.law = law;
            const auto trajectory = run_once(spec, seed, options);
            emit(trajectory, emit_kind == "timeseries" ? EmitFormat::Timeseries : EmitFormat::Events, out_path);
        } else if (*mc) {
            MonteCarloOptions options;
            options.histogram_bins = bins;
            options.dt = dt;
            options.law = law;
            const auto stats = run_monte_carlo(spec, trials, seed, options);
            emit(stats, emit_kind == "stats" ? EmitFormat::Stats : EmitFormat::Histogram, out_path);
        } else if (*check) {
            std::cout << "ok: " << spec.name << " (" << spec.components.size() << " components, "
                      << spec.edges.size() << " edges)\n";
        } else if (*field) {
            if (!spec.field) throw Error(ErrorCode::InvalidArgument, "scenario declares no [field]");
            std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
            if (!out) throw Error(ErrorCode::IoError, "cannot open " + out_path);
            write_field_dump(make_field(*spec.field), out);
        } else if (*show) {
            std::cout << serialize_scenario(spec);
        }
    } catch (const Error& e) {
        std::cerr << "reducesim: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "reducesim: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
