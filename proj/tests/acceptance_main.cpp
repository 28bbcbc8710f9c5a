// Acceptance suite: runs every quantitative criterion of the laboratory at
// its pinned tolerance and prints one pass/fail line per criterion. The
// final criterion re-runs the whole bundle with the same seed and requires
// byte-identical artifacts. Exit status 0 only if every criterion passes.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "minsurf/config.hpp"
#include "minsurf/runner.hpp"

namespace fs = std::filesystem;
using namespace minsurf;

namespace {

const std::map<std::string, std::string> kDescriptions = {
    {"criterion.01", "ADM mass of the m=2 metric equals 2 within 1% (n=4,5)"},
    {"criterion.02", "scalar curvature vanishes at 100 random domain points"},
    {"criterion.03", "flat Plateau solutions are exact planes"},
    {"criterion.04", "flux-conserving integration matches the closed form"},
    {"criterion.05", "height and logarithmic slope bounds hold"},
    {"criterion.06", "monotonicity identity residual < 1e-6 on 10 configs"},
    {"criterion.07", "second variation matches oracle and sphere value"},
    {"criterion.08", "translation integration-by-parts identity"},
    {"criterion.09", "foliation: ordered leaves, inf heights, flattening"},
    {"criterion.10", "slab profiles flatten below the estimated threshold"},
    {"criterion.11", "leaf decay exponents match 3-n and the metric rate"},
    {"criterion.12", "induced mass of the leaf is consistent with zero"},
    {"criterion.13", "perturbation chain sign checks on two backgrounds"},
    {"criterion.14", "isoperimetric ball ratio within 1% at r = 256"},
    {"criterion.15", "paper-suite artifacts byte-identical across runs"},
};

bool print_line(const CheckReport& rep) {
    auto it = kDescriptions.find(rep.id);
    std::printf("[%s] %s: %s (measured %.4g vs tol %.4g, %.2fs)\n",
                rep.pass ? "PASS" : "FAIL", rep.id.c_str(),
                it != kDescriptions.end() ? it->second.c_str() : rep.anchor.c_str(),
                rep.measured, rep.tolerance, rep.runtime_ms / 1000.0);
    return rep.pass;
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::string body((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        files[fs::relative(entry.path(), root).string()] = std::move(body);
    }
    return files;
}

}  // namespace

int main(int argc, char** argv) {
    fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
    fs::remove_all(root);
    fs::create_directories(root);

    ExperimentConfig cfg;  // canonical defaults: schwarzschild, n = 4, m = 2

    bool ok = true;
    std::vector<CheckReport> checks;
    try {
        checks = paper_suite_checks(cfg, root / "run_a");
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
        return 2;
    }
    for (const auto& rep : checks) ok = print_line(rep) && ok;

    // 15: determinism. Re-run the identical bundle with the same seed and
    // compare every artifact byte for byte.
    try {
        auto t0 = std::chrono::steady_clock::now();
        paper_suite_checks(cfg, root / "run_b");
        auto a = snapshot(root / "run_a");
        auto b = snapshot(root / "run_b");
        int mismatches = 0;
        if (a.size() != b.size()) mismatches = 1;
        for (const auto& [rel, body] : a) {
            auto it = b.find(rel);
            if (it == b.end() || it->second != body) ++mismatches;
        }
        CheckReport rep = CheckReport::make("criterion.15", "suite-determinism",
                                            static_cast<double>(mismatches), 0.0);
        rep.runtime_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
        rep.details["files_compared"] = static_cast<double>(a.size());
        ok = print_line(rep) && ok;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "determinism run aborted: %s\n", e.what());
        return 2;
    }

    std::printf("%s\n", ok ? "acceptance: all criteria passed" : "acceptance: FAILURES present");
    return ok ? 0 : 1;
}
