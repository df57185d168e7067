// eitmem: command-line front end for the scenario runner.
//
//   eitmem <scenario> [--config FILE] [--time T] [--steps N] [--out STEM]
//                     [--fock-cutoff C] [--sweep T1,T2,...]
//
// Without --config each scenario runs its built-in preset. With --out the trace is
// written to STEM.csv and the summary to STEM.json. Exit status is 0 iff every
// verdict passes, 1 if any fails, 2 on bad input.

#include "eitmem/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <map>
#include <string>

namespace {

eitmem::ScenarioConfig preset_for(eitmem::Scenario s) {
    using namespace eitmem;
    const double quarter = std::numbers::pi / 4;
    switch (s) {
        case Scenario::verify:
        case Scenario::store:
        case Scenario::sweep: return presets::storage_line({1.0, 1.0}, {quarter}, presets::coherent(2.0));
        case Scenario::entangle2:
            return presets::storage_line({1.0, 1.0}, {quarter}, presets::cat(1.0, -1.0, -1.0));
        case Scenario::ghz3:
            return presets::storage_line({1.0, 1.0, 1.0}, {quarter, std::atan(std::sqrt(2.0) / 2)},
                                         presets::cat(1.5, -1.5, -1.0));
        case Scenario::crossline: return presets::crossline_transfer(1e-3, presets::cat(1.0, -1.0, 1.0));
        case Scenario::oracle: return presets::oracle_line();
    }
    return {};
}

void print_report(const eitmem::RunReport& r) {
    std::printf("scenario: %s\n", r.scenario.c_str());
    for (const auto& [k, v] : r.info) std::printf("  %-34s %s\n", k.c_str(), v.c_str());
    for (const auto& [k, v] : r.metrics) std::printf("  %-34s %.10g\n", k.c_str(), v);
    for (const auto& v : r.verdicts) {
        if (v.relation == "in")
            std::printf("%s %-4s %-34s %.6g in [%.6g, %.6g]\n", v.pass ? "PASS" : "FAIL", v.criterion.c_str(),
                        v.check.c_str(), v.value, v.threshold, v.threshold_hi);
        else
            std::printf("%s %-4s %-34s %.6g %s %.6g\n", v.pass ? "PASS" : "FAIL", v.criterion.c_str(),
                        v.check.c_str(), v.value, v.relation.c_str(), v.threshold);
    }
    std::printf("%s\n", r.passed() ? "ALL PASS" : "SOME CHECKS FAILED");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlated EIT quantum-memory simulator"};
    app.require_subcommand(1);

    std::string config_path, out;
    double time = 0.0;
    std::size_t steps = 0, cutoff = 0, trace_every = 1;
    std::vector<double> sweep;

    std::map<std::string, CLI::App*> subs;
    const std::map<std::string, std::string> help{
        {"verify", "check dark-state closed forms against the null space of h(t)"},
        {"store", "adiabatic storage of a coherent pulse"},
        {"entangle2", "cat-state storage into two ensembles"},
        {"ghz3", "cat-state storage into three ensembles"},
        {"crossline", "two-photon cross-line transfer"},
        {"sweep", "convergence sweep over the storage time"},
        {"oracle", "Fock-space cross-checks"},
    };
    for (const auto& [name, text] : help) {
        auto* sub = app.add_subcommand(name, text);
        sub->add_option("--config", config_path, "JSON scenario config")->check(CLI::ExistingFile);
        sub->add_option("--time", time, "storage time T")->check(CLI::PositiveNumber);
        sub->add_option("--steps", steps, "time steps")->check(CLI::PositiveNumber);
        sub->add_option("--out", out, "output stem for STEM.csv and STEM.json");
        sub->add_option("--fock-cutoff", cutoff, "per-mode Fock cutoff")->check(CLI::PositiveNumber);
        sub->add_option("--sweep", sweep, "storage times for the sweep")->delimiter(',');
        sub->add_option("--trace-every", trace_every, "trace decimation")->check(CLI::PositiveNumber);
        subs[name] = sub;
    }
    CLI11_PARSE(app, argc, argv);

    try {
        eitmem::RunSpec spec;
        for (const auto& [name, sub] : subs)
            if (sub->parsed()) spec.scenario = eitmem::parse_scenario(name);
        spec.config = config_path.empty() ? preset_for(spec.scenario) : eitmem::load_scenario_config(config_path);
        if (time > 0.0) spec.T = time;
        if (steps > 0) spec.steps = steps;
        if (cutoff > 0) spec.fock_cutoff = cutoff;
        spec.sweep = sweep;
        spec.trace_every = trace_every;
        spec.trace = !out.empty();

        const auto report = eitmem::run(spec);
        print_report(report);
        if (!out.empty())
            for (const auto& path : eitmem::emit_report(report, out)) std::printf("wrote %s\n", path.c_str());
        return report.passed() ? 0 : 1;
    } catch (const eitmem::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
