// Command-line driver for the minimal-surface laboratory. Subcommands
// solve one Plateau problem, build foliation leaves, run verification
// suites, compute mass tables, evaluate stability forms, construct metric
// perturbations, and aggregate reports. Exit codes: 0 all checks pass,
// 1 at least one check failed, 2 configuration or numerical error.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "minsurf/config.hpp"
#include "minsurf/runner.hpp"

namespace {

void print_checks(const std::vector<minsurf::CheckReport>& checks) {
    for (const auto& rep : checks) {
        std::printf("[%s] %-34s measured=%-12.5g tol=%-10.4g (%s)\n",
                    rep.pass ? "PASS" : "FAIL", rep.id.c_str(), rep.measured, rep.tolerance,
                    rep.anchor.c_str());
    }
}

int status_of(const std::vector<minsurf::CheckReport>& checks) {
    return minsurf::all_pass(checks) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minsurf laboratory: rotationally symmetric minimal surfaces in "
                 "conformally flat metrics"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand name

    std::string config_path;
    std::string out_dir;
    std::string suite;
    int jobs = 0;
    long long seed = -1;

    app.add_option("--config", config_path, "experiment configuration (JSON)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--jobs", jobs, "worker threads for independent problems");
    app.add_option("--seed", seed, "seed for sampled checks");

    auto* cmd_plateau = app.add_subcommand("plateau", "solve one Plateau problem");
    auto* cmd_foliate = app.add_subcommand("foliate", "build foliation leaves over a z grid");
    auto* cmd_verify = app.add_subcommand("verify", "run a verification suite");
    cmd_verify->add_option("--suite", suite, "identities | bounds | paper-suite");
    auto* cmd_mass = app.add_subcommand("mass", "ADM and induced mass tables");
    auto* cmd_stability = app.add_subcommand("stability", "second-variation evaluations");
    auto* cmd_perturb = app.add_subcommand("perturb", "bump chain construction and checks");
    auto* cmd_report = app.add_subcommand("report", "aggregate all check artifacts");

    CLI11_PARSE(app, argc, argv);

    try {
        minsurf::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = minsurf::ExperimentConfig::load(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (jobs > 0) cfg.jobs = jobs;
        if (seed >= 0) cfg.seed = static_cast<uint64_t>(seed);
        std::filesystem::path out = cfg.out_dir;

        std::vector<minsurf::CheckReport> checks;
        if (cmd_plateau->parsed()) {
            checks = minsurf::run_plateau(cfg, out);
        } else if (cmd_foliate->parsed()) {
            checks = minsurf::run_foliate(cfg, out).checks;
        } else if (cmd_verify->parsed()) {
            if (!suite.empty()) {
                checks = minsurf::run_verify(cfg, out, suite);
            } else {
                // no --suite: run every suite selected in the configuration
                for (const std::string& name : cfg.check_selection) {
                    auto part = minsurf::run_verify(cfg, out, name);
                    checks.insert(checks.end(), part.begin(), part.end());
                }
            }
        } else if (cmd_mass->parsed()) {
            checks = minsurf::run_mass(cfg, out);
        } else if (cmd_stability->parsed()) {
            checks = minsurf::run_stability(cfg, out);
        } else if (cmd_perturb->parsed()) {
            checks = minsurf::run_perturb(cfg, out);
        } else if (cmd_report->parsed()) {
            checks = minsurf::run_report(out);
        }
        print_checks(checks);
        return status_of(checks);
    } catch (const minsurf::LabError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
