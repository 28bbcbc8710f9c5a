#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "minsurf/core.hpp"
#include "minsurf/metrics.hpp"

namespace minsurf {

/// Experiment configuration: schema-validated JSON, one metric family plus
/// schedules, tolerances and check selection. Defaults reproduce the
/// canonical m = 2, n = 4 experiments.
struct ExperimentConfig {
    int schema_version = 1;
    int dimension = 4;
    std::string family = "schwarzschild";
    double mass = 2.0;
    double slab_delta = 0.1;
    double slab_tau = 1.5;

    uint64_t seed = 20240801;
    int jobs = 1;

    double shooting_tolerance = 1e-9;
    double leaf_tolerance = 1e-6;

    // plateau
    double plateau_r = 100.0;
    double plateau_z = 1.0;

    // foliation
    std::vector<double> z_grid = {0.5, 1.0, 2.0, 4.0, 8.0};
    double r_first = 50.0;
    int r_doublings = 11;
    double t_view = 25.0;

    // mass
    std::vector<double> mass_radii = {8, 16, 32, 64, 128, 256, 512};

    // stability test functions: bumps (a, b, amplitude) on the leaf
    struct Bump {
        double a = 5.0, b = 25.0, amp = 1.0;
    };
    std::vector<Bump> stability_bumps = {{5.0, 25.0, 1.0}};
    double stability_t_max = 80.0;

    // perturbation chain
    double bump_center_height = 10.0;
    double bump_radius = 0.5;
    int bump_count = 2;
    double perturbation_t = 0.1;

    std::vector<std::string> check_selection = {"identities", "bounds"};
    std::string out_dir = "out";

    ConformalMetric metric() const {
        if (family == "flat") return ConformalMetric::flat(dimension);
        if (family == "schwarzschild") return ConformalMetric::schwarzschild(dimension, mass);
        if (family == "hat") return ConformalMetric::hat_localized(dimension);
        if (family == "slab") return ConformalMetric::slab(dimension, slab_delta, slab_tau);
        fail(ErrorCode::config_error, "unknown metric family '" + family + "'");
    }

    std::vector<double> leaf_schedule() const {
        std::vector<double> r;
        for (int k = 0; k <= r_doublings; ++k) r.push_back(r_first * std::pow(2.0, k));
        return r;
    }

    static ExperimentConfig from_json(const nlohmann::json& j) {
        ExperimentConfig c;
        require(j.is_object(), ErrorCode::config_error, "config must be a JSON object");
        c.schema_version = j.value("schema_version", 1);
        require(c.schema_version == 1, ErrorCode::config_error, "unsupported schema_version");
        c.dimension = j.value("dimension", c.dimension);
        require(c.dimension >= kMinDim && c.dimension <= kMaxDim, ErrorCode::config_error,
                "dimension outside [3,7]");
        if (j.contains("metric")) {
            const auto& m = j.at("metric");
            c.family = m.value("family", c.family);
            c.mass = m.value("mass", c.mass);
            c.slab_delta = m.value("delta", c.slab_delta);
            c.slab_tau = m.value("tau", c.slab_tau);
        }
        c.seed = j.value("seed", c.seed);
        c.jobs = j.value("jobs", c.jobs);
        require(c.jobs >= 1, ErrorCode::config_error, "jobs must be positive");
        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            c.shooting_tolerance = t.value("shooting", c.shooting_tolerance);
            c.leaf_tolerance = t.value("leaf", c.leaf_tolerance);
        }
        require(c.shooting_tolerance > 0.0 && c.leaf_tolerance > 0.0, ErrorCode::config_error,
                "tolerances must be positive");
        if (j.contains("plateau")) {
            c.plateau_r = j.at("plateau").value("r", c.plateau_r);
            c.plateau_z = j.at("plateau").value("z", c.plateau_z);
        }
        if (j.contains("foliate")) {
            const auto& f = j.at("foliate");
            if (f.contains("z_grid")) c.z_grid = f.at("z_grid").get<std::vector<double>>();
            c.r_first = f.value("r_first", c.r_first);
            c.r_doublings = f.value("r_doublings", c.r_doublings);
            c.t_view = f.value("t_view", c.t_view);
            require(c.r_doublings >= 2 && c.r_doublings <= 24, ErrorCode::config_error,
                    "r_doublings outside [2,24]");
        }
        if (j.contains("mass") && j.at("mass").contains("radii"))
            c.mass_radii = j.at("mass").at("radii").get<std::vector<double>>();
        require(c.mass_radii.size() >= 3, ErrorCode::config_error,
                "mass schedule needs 3+ radii");
        if (j.contains("stability")) {
            const auto& s = j.at("stability");
            if (s.contains("bumps")) {
                c.stability_bumps.clear();
                for (const auto& b : s.at("bumps"))
                    c.stability_bumps.push_back(
                        {b.value("a", 5.0), b.value("b", 25.0), b.value("amp", 1.0)});
            }
            c.stability_t_max = s.value("t_max", c.stability_t_max);
        }
        if (j.contains("perturb")) {
            const auto& p = j.at("perturb");
            c.bump_center_height = p.value("center_height", c.bump_center_height);
            c.bump_radius = p.value("radius", c.bump_radius);
            c.bump_count = p.value("count", c.bump_count);
            c.perturbation_t = p.value("t", c.perturbation_t);
            require(c.bump_radius > 0.0 && c.bump_count >= 1, ErrorCode::config_error,
                    "invalid perturbation chain parameters");
            require(c.perturbation_t > 0.0 && c.perturbation_t < 1.0, ErrorCode::config_error,
                    "perturbation t outside (0,1)");
        }
        if (j.contains("checks")) c.check_selection = j.at("checks").get<std::vector<std::string>>();
        c.out_dir = j.value("out", c.out_dir);
        return c;
    }

    static ExperimentConfig load(const std::string& path) {
        std::ifstream in(path);
        require(in.good(), ErrorCode::config_error, "cannot read config file " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorCode::config_error, std::string("config parse error: ") + e.what());
        }
        return from_json(j);
    }
};

}  // namespace minsurf
