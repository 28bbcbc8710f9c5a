#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "minsurf/config.hpp"
#include "minsurf/io.hpp"
#include "minsurf/runner.hpp"

using namespace minsurf;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("minsurf_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("config validation rejects malformed input") {
    nlohmann::json good = {{"schema_version", 1},
                           {"dimension", 4},
                           {"metric", {{"family", "schwarzschild"}, {"mass", 2.0}}}};
    CHECK_NOTHROW(ExperimentConfig::from_json(good));

    nlohmann::json bad_tol = good;
    bad_tol["tolerances"] = {{"shooting", -1e-9}};
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad_tol), LabError);

    nlohmann::json bad_dim = good;
    bad_dim["dimension"] = 9;
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad_dim), LabError);

    nlohmann::json bad_family = good;
    bad_family["metric"]["family"] = "kerr";
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad_family).metric(), LabError);

    nlohmann::json bad_version = good;
    bad_version["schema_version"] = 2;
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad_version), LabError);
}

TEST_CASE("config file loading errors carry the config code") {
    fs::path dir = temp_dir("cfg");
    fs::path path = dir / "broken.json";
    std::ofstream(path) << "{ not json";
    bool threw = false;
    try {
        ExperimentConfig::load(path.string());
    } catch (const LabError& e) {
        threw = true;
        CHECK(e.code() == ErrorCode::config_error);
    }
    CHECK(threw);
    CHECK_THROWS_AS(ExperimentConfig::load((dir / "missing.json").string()), LabError);
}

TEST_CASE("plateau artifacts: csv columns and re-run determinism") {
    ExperimentConfig cfg;
    cfg.family = "flat";
    cfg.plateau_r = 10.0;
    cfg.plateau_z = 1.0;
    fs::path a = temp_dir("plateau_a");
    fs::path b = temp_dir("plateau_b");
    auto checks_a = run_plateau(cfg, a);
    auto checks_b = run_plateau(cfg, b);
    CHECK(all_pass(checks_a));

    std::string csv = slurp(a / "profile.csv");
    CHECK(csv.rfind("t,f,p\n", 0) == 0);
    CHECK(csv == slurp(b / "profile.csv"));
    CHECK(slurp(a / "plateau_checks.json") == slurp(b / "plateau_checks.json"));
}

TEST_CASE("foliation plot data: one block per leaf plus the horizon") {
    ExperimentConfig cfg;
    cfg.family = "schwarzschild";
    cfg.z_grid = {1.0, 2.0, 4.0};
    cfg.t_view = 20.0;
    cfg.r_first = 50.0;
    cfg.r_doublings = 10;
    fs::path dir = temp_dir("foliate");
    FoliateResult result = run_foliate(cfg, dir);
    CHECK(all_pass(result.checks));

    std::string data = slurp(dir / "foliation_plotdata.dat");
    // blank-line separated blocks: 3 leaves + 1 horizon
    int blocks = 0;
    bool in_block = false;
    std::istringstream lines(data);
    std::string line;
    std::vector<double> block_heights;
    while (std::getline(lines, line)) {
        if (line.empty()) {
            if (in_block) ++blocks;
            in_block = false;
        } else if (line[0] != '#') {
            in_block = true;
        }
    }
    CHECK(blocks == 4);

    // leaf blocks ordered by ascending z: parse the header comments
    std::vector<double> zs;
    std::istringstream again(data);
    while (std::getline(again, line))
        if (line.rfind("# leaf z=", 0) == 0) zs.push_back(std::stod(line.substr(9)));
    REQUIRE(zs.size() == 3);
    CHECK(zs[0] < zs[1]);
    CHECK(zs[1] < zs[2]);

    CHECK(fs::exists(dir / "plotdata_README.txt"));

    // rebuilding with the same configuration is byte-identical
    fs::path dir2 = temp_dir("foliate2");
    run_foliate(cfg, dir2);
    CHECK(slurp(dir / "foliation_plotdata.dat") == slurp(dir2 / "foliation_plotdata.dat"));
    CHECK(slurp(dir / "foliation_summary.json") == slurp(dir2 / "foliation_summary.json"));
    for (int i = 0; i < 3; ++i) {
        auto name = "leaf_" + std::to_string(i) + ".csv";
        CHECK(slurp(dir / name) == slurp(dir2 / name));
    }
}

TEST_CASE("parallel leaf construction matches the sequential result") {
    ExperimentConfig cfg;
    cfg.family = "schwarzschild";
    cfg.z_grid = {1.0, 2.0};
    cfg.t_view = 20.0;
    cfg.r_doublings = 10;
    fs::path seq = temp_dir("jobs1");
    fs::path par = temp_dir("jobs2");
    cfg.jobs = 1;
    run_foliate(cfg, seq);
    cfg.jobs = 2;
    run_foliate(cfg, par);
    CHECK(slurp(seq / "foliation_summary.json") == slurp(par / "foliation_summary.json"));
    CHECK(slurp(seq / "leaf_0.csv") == slurp(par / "leaf_0.csv"));
    CHECK(slurp(seq / "leaf_1.csv") == slurp(par / "leaf_1.csv"));
}

TEST_CASE("report aggregation flags any failing check") {
    fs::path dir = temp_dir("report");
    std::vector<CheckReport> mixed;
    mixed.push_back(CheckReport::make("demo.ok", "anchor-a", 0.5, 1.0));
    mixed.push_back(CheckReport::make("demo.bad", "anchor-b", 2.0, 1.0));
    write_checks_json(dir / "verify_demo.json", "verify", mixed);
    auto collected = run_report(dir);
    REQUIRE(collected.size() == 2);
    CHECK(!all_pass(collected));
    CHECK(fs::exists(dir / "report_summary.json"));

    fs::path ok_dir = temp_dir("report_ok");
    std::vector<CheckReport> fine;
    fine.push_back(CheckReport::make("demo.ok", "anchor-a", 0.5, 1.0));
    write_checks_json(ok_dir / "verify_demo.json", "verify", fine);
    CHECK(all_pass(run_report(ok_dir)));
}

TEST_CASE("mass subcommand writes tables and passes its checks") {
    ExperimentConfig cfg;
    cfg.family = "flat";
    cfg.mass_radii = {8.0, 16.0, 32.0};
    fs::path dir = temp_dir("mass");
    auto checks = run_mass(cfg, dir);
    CHECK(all_pass(checks));
    auto doc = nlohmann::json::parse(slurp(dir / "mass.json"));
    CHECK(doc.at("adm").at("table").size() == 3);
}

TEST_CASE("check report invariants") {
    CheckReport rep = CheckReport::make("x", "anchor", 0.5, 1.0);
    CHECK(rep.pass == (rep.measured <= rep.tolerance));
    CheckReport bad = CheckReport::make("x", "anchor", 2.0, 1.0);
    CHECK(!bad.pass);
    CHECK(!rep.anchor.empty());
}
