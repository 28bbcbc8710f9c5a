#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

#include "minsurf/adm.hpp"
#include "minsurf/analysis.hpp"
#include "minsurf/config.hpp"
#include "minsurf/foliation.hpp"
#include "minsurf/io.hpp"
#include "minsurf/perturbation.hpp"
#include "minsurf/profile.hpp"
#include "minsurf/report.hpp"
#include "minsurf/shooting.hpp"
#include "minsurf/variation_oracle.hpp"

namespace minsurf {

namespace detail {

/// Deterministic parallel map: results land by index regardless of the
/// thread schedule.
template <class F>
void parallel_for(int count, int jobs, F&& body) {
    jobs = std::min(jobs, count);
    if (jobs <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

inline std::mt19937_64 seeded_rng(uint64_t seed, uint64_t stream) {
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull * (stream + 1)));
    rng.discard(16);
    return rng;
}

inline Vec random_shell_point(std::mt19937_64& rng, int n, double rlo, double rhi) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(rlo, rhi);
    Vec x(n);
    double r2 = 0.0;
    do {
        r2 = 0.0;
        for (int i = 0; i < n; ++i) {
            x[i] = gauss(rng);
            r2 += x[i] * x[i];
        }
    } while (r2 < 1e-12);
    double scale = unif(rng) / std::sqrt(r2);
    for (int i = 0; i < n; ++i) x[i] *= scale;
    return x;
}

inline std::filesystem::path ensure_dir(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

inline std::vector<CheckReport> run_plateau(const ExperimentConfig& cfg,
                                            const std::filesystem::path& out) {
    detail::ensure_dir(out);
    ConformalMetric metric = cfg.metric();
    ShootingProblem pb(metric, cfg.plateau_r, cfg.plateau_z);
    pb.tolerance = cfg.shooting_tolerance;
    ShootInfo info;
    RadialProfile prof = solve_plateau(pb, &info);
    write_profile_csv(out / "profile.csv", prof, 2001);
    std::vector<CheckReport> checks = verify_solution(metric, prof);
    CheckReport res = CheckReport::make("plateau.residual", "plateau-boundary-residual",
                                        std::abs(info.residual), pb.tol());
    res.details["axis_height"] = info.axis_height;
    res.details["iterations"] = info.iterations;
    checks.insert(checks.begin(), res);
    write_checks_json(out / "plateau_checks.json", "plateau", checks);
    return checks;
}

struct FoliateResult {
    std::vector<Leaf> leaves;
    std::vector<CheckReport> checks;
};

inline FoliateResult run_foliate(const ExperimentConfig& cfg,
                                 const std::filesystem::path& out) {
    detail::ensure_dir(out);
    ConformalMetric metric = cfg.metric();
    auto schedule = cfg.leaf_schedule();
    LeafOptions lopt;
    lopt.tolerance = cfg.leaf_tolerance;

    FoliateResult result;
    result.leaves.resize(cfg.z_grid.size());
    detail::parallel_for(static_cast<int>(cfg.z_grid.size()), cfg.jobs, [&](int i) {
        result.leaves[i] = build_leaf(metric, cfg.z_grid[i], schedule, cfg.t_view, lopt);
    });

    ordered_json summary;
    summary["schema_version"] = 1;
    summary["command"] = "foliate";
    summary["t_view"] = cfg.t_view;
    summary["leaves"] = ordered_json::array();
    for (size_t i = 0; i < result.leaves.size(); ++i) {
        const Leaf& leaf = result.leaves[i];
        ordered_json lj;
        lj["z"] = leaf.z;
        lj["r_last"] = leaf.radii_used.back();
        lj["iterations"] = leaf.radii_used.size();
        lj["extrap_diff"] = leaf.extrap_diffs.back();
        lj["inf_height"] = leaf.inf_height;
        lj["axis_height"] = leaf.view_f.front();
        lj["oscillation"] = leaf.view_f.front() - leaf.view_f.back();
        summary["leaves"].push_back(lj);
        write_profile_csv(out / ("leaf_" + std::to_string(i) + ".csv"), leaf.profile, 1201);
    }

    result.checks.push_back(foliation_ordering_report(result.leaves));
    double worst_inf = 0.0;
    for (const Leaf& leaf : result.leaves)
        worst_inf = std::max(worst_inf, std::abs(leaf.inf_height - leaf.z));
    result.checks.push_back(CheckReport::make("foliation.inf_heights", "limit-leaf-inf-height",
                                              worst_inf, 1e-5));
    bool osc_monotone = true;
    for (size_t i = 0; i + 1 < result.leaves.size(); ++i) {
        double osc_lo = result.leaves[i].view_f.front() - result.leaves[i].view_f.back();
        double osc_hi = result.leaves[i + 1].view_f.front() - result.leaves[i + 1].view_f.back();
        if (osc_hi > osc_lo) osc_monotone = false;
    }
    CheckReport osc = CheckReport::make("foliation.oscillation", "leaf-flattening",
                                        osc_monotone ? 0.0 : 1.0, 0.5);
    result.checks.push_back(osc);

    summary["checks"] = ordered_json::array();
    for (const auto& rep : result.checks) summary["checks"].push_back(check_to_json(rep));
    write_text(out / "foliation_summary.json", summary.dump(2) + "\n");
    write_foliation_plotdata(out / "foliation_plotdata.dat", result.leaves,
                             metric.has_horizon() ? metric.horizon_radius() : 0.0);
    write_plotdata_readme(out / "plotdata_README.txt");
    return result;
}

inline std::vector<CheckReport> run_mass(const ExperimentConfig& cfg,
                                         const std::filesystem::path& out) {
    detail::ensure_dir(out);
    ConformalMetric metric = cfg.metric();
    std::vector<CheckReport> checks;
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["command"] = "mass";

    MassEstimate adm = adm_mass(metric, cfg.mass_radii);
    ordered_json adm_table = ordered_json::array();
    for (size_t i = 0; i < adm.radii.size(); ++i)
        adm_table.push_back({{"radius", adm.radii[i]}, {"flux", adm.flux[i]}});
    doc["adm"] = {{"table", adm_table},
                  {"limit", adm.limit},
                  {"rate", adm.fitted_rate},
                  {"error", adm.error_estimate}};
    if (cfg.family == "schwarzschild") {
        CheckReport rep = CheckReport::make("mass.adm", "adm-mass-limit",
                                            std::abs(adm.limit - cfg.mass), 0.01 * cfg.mass);
        rep.details["limit"] = adm.limit;
        checks.push_back(rep);
    } else if (cfg.family == "flat") {
        checks.push_back(CheckReport::make("mass.adm", "adm-mass-limit", std::abs(adm.limit),
                                           1e-10));
    }

    if (cfg.family == "schwarzschild") {
        auto schedule = cfg.leaf_schedule();
        LeafOptions lopt;
        lopt.tolerance = cfg.leaf_tolerance;
        Leaf leaf = build_leaf(metric, cfg.plateau_z, schedule, cfg.t_view, lopt);
        std::vector<double> radii;
        for (double lam = 2.0 * cfg.t_view; lam <= leaf.profile.t_max() / 2.0; lam *= 2.0)
            radii.push_back(lam);
        MassEstimate ind = induced_mass(leaf.profile, metric, radii);
        ordered_json ind_table = ordered_json::array();
        for (size_t i = 0; i < ind.radii.size(); ++i)
            ind_table.push_back({{"radius", ind.radii[i]}, {"flux", ind.flux[i]}});
        doc["induced"] = {{"table", ind_table},
                          {"limit", ind.limit},
                          {"rate", ind.fitted_rate},
                          {"error", ind.error_estimate}};
        CheckReport rep = CheckReport::make("mass.induced", "leaf-induced-mass",
                                            std::abs(ind.limit),
                                            std::max(3.0 * ind.error_estimate, 1e-3));
        rep.details["limit"] = ind.limit;
        rep.details["error"] = ind.error_estimate;
        checks.push_back(rep);
    }

    doc["checks"] = ordered_json::array();
    for (const auto& rep : checks) doc["checks"].push_back(check_to_json(rep));
    write_text(out / "mass.json", doc.dump(2) + "\n");
    return checks;
}

inline std::vector<CheckReport> run_stability(const ExperimentConfig& cfg,
                                              const std::filesystem::path& out) {
    detail::ensure_dir(out);
    ConformalMetric metric = cfg.metric();
    std::vector<CheckReport> checks;

    {  // closed-form anchor: second variation of the round sphere in flat space
        const int n = cfg.dimension;
        auto flat = ConformalMetric::flat(n);
        SphereCurve sphere(1.7, 0.0);
        SurfaceQuadrature quad(sphere, flat, 64, 16);
        double sv = second_variation(quad, TestFunction::constant(1.0), TestFunction::zero());
        double expect = n * unit_ball_volume(n) * (n - 1.0) * (n - 2.0) * std::pow(1.7, n - 3.0);
        checks.push_back(CheckReport::make("stability.sphere_closed_form",
                                           "sphere-second-variation", rel_diff(sv, expect),
                                           1e-6));
    }

    ordered_json doc;
    doc["schema_version"] = 1;
    doc["command"] = "stability";
    doc["evaluations"] = ordered_json::array();
    if (cfg.family == "schwarzschild" || cfg.family == "flat") {
        auto schedule = cfg.leaf_schedule();
        LeafOptions lopt;
        lopt.tolerance = cfg.leaf_tolerance;
        Leaf leaf = build_leaf(metric, cfg.plateau_z, schedule, cfg.t_view, lopt);
        ProfileCurve curve(leaf.profile, leaf.profile.t_min(), cfg.stability_t_max);
        SurfaceQuadrature quad(curve, metric, 96, 16);
        for (const auto& b : cfg.stability_bumps) {
            TestFunction u = TestFunction::bump(b.a, b.b, b.amp);
            double sv = second_variation(quad, u, TestFunction::zero());
            AcvResult acv = acv_functional(leaf.profile, metric, u, cfg.stability_t_max);
            ordered_json ev;
            ev["support"] = {b.a, b.b};
            ev["amplitude"] = b.amp;
            ev["second_variation"] = sv;
            ev["acv_value"] = acv.value;
            ev["acv_tail_error"] = acv.tail_error;
            doc["evaluations"].push_back(ev);
            // exploratory values: reported, never gated
            CheckReport rep = CheckReport::make(
                "stability.acv", "asymptotically-constant-variation", 0.0, 1e300);
            rep.details["value"] = acv.value;
            rep.details["tail_error"] = acv.tail_error;
            checks.push_back(rep);
        }
    }
    doc["checks"] = ordered_json::array();
    for (const auto& rep : checks) doc["checks"].push_back(check_to_json(rep));
    write_text(out / "stability.json", doc.dump(2) + "\n");
    return checks;
}

inline std::vector<CheckReport> run_perturb(const ExperimentConfig& cfg,
                                            const std::filesystem::path& out) {
    detail::ensure_dir(out);
    ConformalMetric metric = cfg.metric();
    require(cfg.family == "flat" || cfg.family == "schwarzschild", ErrorCode::config_error,
            "perturbation chains run on flat or schwarzschild backgrounds");
    const int n = cfg.dimension;
    double r = cfg.bump_radius;
    double lambda = 2.1 * (n - 1) / r;
    double base_height = cfg.family == "flat" ? 0.0 : cfg.bump_center_height;

    std::vector<BumpField> bumps;
    Vec q = axis_point(n, 0.0, base_height);
    for (int i = 0; i < cfg.bump_count; ++i) {
        bumps.push_back(make_bump(metric, q, r, lambda));
        if (i + 1 < cfg.bump_count) q = place_center_above(metric, q, 4.0 * r);
    }
    BumpChain chain = chain_coefficients(metric, std::move(bumps));
    double delta = default_chain_delta(chain);
    std::vector<CheckReport> checks =
        verify_perturbed_metric(metric, chain, cfg.perturbation_t, delta);

    ordered_json doc;
    doc["schema_version"] = 1;
    doc["command"] = "perturb";
    doc["coefficients"] = chain.coefficients;
    doc["delta"] = delta;
    doc["checks"] = ordered_json::array();
    for (const auto& rep : checks) doc["checks"].push_back(check_to_json(rep));
    write_text(out / "perturb.json", doc.dump(2) + "\n");
    return checks;
}

// ---------------------------------------------------------------------------
// the acceptance bundle: every quantitative criterion as one report
// ---------------------------------------------------------------------------


namespace detail {
template <class Fn>
void add_timed(std::vector<CheckReport>& all, Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    CheckReport rep = fn();
    rep.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    all.push_back(rep);
}
}  // namespace detail

inline std::vector<CheckReport> paper_suite_checks(const ExperimentConfig& cfg,
                                                   const std::filesystem::path& out) {
    detail::ensure_dir(out);
    std::vector<CheckReport> all;

    // 1: ADM mass of schwarzschild, n = 4 and 5, within 1%.
    detail::add_timed(all, [&] {
        std::vector<double> radii;
        for (int k = 0; k <= 6; ++k) radii.push_back(8.0 * std::pow(2.0, k));
        double worst = 0.0;
        for (int n : {4, 5}) {
            MassEstimate est = adm_mass(ConformalMetric::schwarzschild(n, 2.0), radii);
            worst = std::max(worst, std::abs(est.limit - 2.0) / 2.0);
        }
        return CheckReport::make("criterion.01", "adm-mass-limit", worst, 0.01);
    });
    // 2: scalar curvature of schwarzschild vanishes at 100 random points.
    detail::add_timed(all, [&] {
        auto schw = ConformalMetric::schwarzschild(4, 2.0);
        auto rng = detail::seeded_rng(cfg.seed, 2);
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            Vec x = detail::random_shell_point(rng, 4, 1.0 + 1e-9, 40.0);
            worst = std::max(worst, std::abs(schw.scalar_curvature(x)));
        }
        return CheckReport::make("criterion.02", "harmonic-factor-scalar-flatness", worst,
                                 1e-8);
    });
    // 3: flat plateau solutions are exact planes for 5 random (r, z).
    detail::add_timed(all, [&] {
        auto flat = ConformalMetric::flat(4);
        auto rng = detail::seeded_rng(cfg.seed, 3);
        std::uniform_real_distribution<double> ur(10.0, 100.0), uz(-3.0, 5.0);
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            double r = ur(rng), z = uz(rng);
            RadialProfile prof = solve_plateau(ShootingProblem(flat, r, z));
            for (const auto& s : prof.samples) worst = std::max(worst, std::abs(s.f - z));
        }
        return CheckReport::make("criterion.03", "flat-plateau-exactness", worst, 1e-10);
    });
    // 4: catenoid-type integration matches the closed form on [2, 100].
    detail::add_timed(all, [&] {
        auto flat = ConformalMetric::flat(4);
        ProfileState start;
        start.t = 2.0;
        start.f = 0.0;
        start.p = -1.0 / std::sqrt(15.0);
        RadialProfile prof = integrate_profile(flat, start, 100.0);
        double sup = 0.0;
        for (int i = 0; i <= 800; ++i) {
            double t = 2.0 + 98.0 * i / 800.0;
            sup = std::max(sup, std::abs(prof.height(t) + flat_region_drop(1.0, 2.0, t, 4)));
        }
        return CheckReport::make("criterion.04", "flat-flux-closed-form", sup, 1e-8);
    });
    // 5: height bounds and the slope bound across n, r, z.
    detail::add_timed(all, [&] {
        double worst_height = 0.0, worst_slope = -1e300;
        for (int n : {4, 5}) {
            auto schw = ConformalMetric::schwarzschild(n, 2.0);
            double c_height = height_bound_constant(n);
            double t0 = 4.0 * (n - 1);
            for (double r : {100.0, 400.0}) {
                for (double z : {0.5, 1.0, 4.0}) {
                    RadialProfile prof = solve_plateau(ShootingProblem(schw, r, z));
                    double scale = std::max(1.0, z);  // shooting residual scale
                    for (const auto& s : prof.samples) {
                        if (s.t < t0 || s.t > r) continue;
                        worst_height = std::max(
                            worst_height, std::max(z - s.f, s.f - z - c_height) / scale);
                        double bound =
                            -4.0 * (n - 1) * std::pow(s.t, 2.0 - n) * (std::log(s.t) + 1.0);
                        worst_slope = std::max(worst_slope, bound - s.p);
                    }
                }
            }
        }
        CheckReport rep = CheckReport::make("criterion.05", "height-and-slope-bounds",
                                            std::max(worst_height, worst_slope), 2e-9);
        rep.details["height_violation"] = worst_height;
        rep.details["slope_violation"] = worst_slope;
        return rep;
    });
    // 6: monotonicity identity on 10 configurations.
    detail::add_timed(all, [&] {
        double worst = 0.0;
        auto flat = ConformalMetric::flat(4);
        PlaneCurve plane(1.5, 0.0, 120.0);
        worst = std::max(worst, monotonicity_check(plane, flat, 1.5, 3.0, 20.0).measured);
        worst = std::max(worst, monotonicity_check(plane, flat, 0.0, 5.0, 50.0).measured);
        CatenoidCurve cat(1.0, 4, 0.0, 100.0);
        worst = std::max(worst, monotonicity_check(cat, flat, 0.0, 2.0, 50.0).measured);
        worst = std::max(worst, monotonicity_check(cat, flat, 0.5, 3.0, 30.0).measured);
        SphereCurve sphere(2.0, 0.0);
        worst = std::max(worst, monotonicity_check(sphere, flat, 0.0, 1.0, 7.0).measured);
        auto schw = ConformalMetric::schwarzschild(4, 2.0);
        RadialProfile prof1 = solve_plateau(ShootingProblem(schw, 400.0, 1.0));
        ProfileCurve curve1(prof1, prof1.t_min(), prof1.t_max());
        worst = std::max(worst, monotonicity_check(curve1, schw, 0.0, 5.0, 40.0).measured);
        worst = std::max(worst, monotonicity_check(curve1, schw, 1.0, 4.0, 30.0).measured);
        worst = std::max(worst, monotonicity_check(curve1, schw, 0.0, 10.0, 100.0).measured);
        RadialProfile prof2 = solve_plateau(ShootingProblem(schw, 400.0, 2.0));
        ProfileCurve curve2(prof2, prof2.t_min(), prof2.t_max());
        worst = std::max(worst, monotonicity_check(curve2, schw, 0.0, 6.0, 60.0).measured);
        worst = std::max(worst, monotonicity_check(curve2, schw, 2.0, 5.0, 25.0).measured);
        return CheckReport::make("criterion.06", "density-monotonicity-identity", worst,
                                 1e-6);
    });
    // 7: second variation vs the flowed-area oracle and the sphere value.
    detail::add_timed(all, [&] {
        auto flat = ConformalMetric::flat(4);
        auto schw = ConformalMetric::schwarzschild(4, 2.0);
        double worst_fd = 0.0;
        auto compare = [&](const RevolutionCurve& c, const ConformalMetric& m,
                           const TestFunction& u, const TestFunction& v) {
            SurfaceQuadrature quad(c, m, 96, 16);
            double sv = second_variation(quad, u, v);
            double fd = flowed_area_second_derivative(c, m, u, v);
            worst_fd = std::max(worst_fd, rel_diff(sv, fd));
        };
        SphereCurve sphere(1.7, 0.0);
        compare(sphere, flat, TestFunction::constant(1.0), TestFunction::zero());
        compare(sphere, flat, TestFunction::constant(1.0), TestFunction::constant(0.7));
        PlaneCurve plane(1.0, 0.0, 20.0);
        compare(plane, flat, TestFunction::bump(4.0, 12.0, 1.0), TestFunction::zero());
        SphereCurve csphere(2.5, 0.0);
        compare(csphere, schw, TestFunction::constant(1.0), TestFunction::zero());
        RadialProfile prof = solve_plateau(ShootingProblem(schw, 400.0, 1.0));
        ProfileCurve curve(prof, prof.t_min(), 60.0);
        compare(curve, schw, TestFunction::bump(5.0, 30.0, 1.0), TestFunction::zero());

        SurfaceQuadrature squad(sphere, flat, 64, 16);
        double sv = second_variation(squad, TestFunction::constant(1.0), TestFunction::zero());
        double expect = 4.0 * unit_ball_volume(4) * 3.0 * 2.0 * 1.7;
        double sphere_dev = rel_diff(sv, expect);
        CheckReport rep = CheckReport::make("criterion.07", "second-variation-oracle",
                                            std::max(worst_fd / 1e-4, sphere_dev / 1e-6), 1.0);
        rep.details["fd_oracle_rel"] = worst_fd;
        rep.details["sphere_rel"] = sphere_dev;
        return rep;
    });
    // 8: euclidean translation ibp identity on three surfaces.
    detail::add_timed(all, [&] {
        auto flat = ConformalMetric::flat(4);
        double worst = 0.0;
        PlaneCurve plane(1.0, 0.5, 15.0);
        worst = std::max(worst, euclidean_ibp_check(plane, flat).measured);
        CatenoidCurve cat(1.0, 4, 0.0, 10.0);
        worst = std::max(worst, euclidean_ibp_check(cat, flat).measured);
        SphereCurve cap(2.0, 0.0, 0.0, 1.1);
        worst = std::max(worst, euclidean_ibp_check(cap, flat).measured);
        return CheckReport::make("criterion.08", "translation-ibp-identity", worst, 1e-6);
    });

    // 9: foliation structure (also feeds criteria 11 and 12).
    ExperimentConfig fol_cfg = cfg;
    fol_cfg.family = "schwarzschild";
    fol_cfg.dimension = 4;
    fol_cfg.mass = 2.0;
    auto fol_t0 = std::chrono::steady_clock::now();
    FoliateResult foliation = run_foliate(fol_cfg, out / "foliation");
    {
        bool ok = all_pass(foliation.checks);
        double gap = 0.0;
        for (const auto& rep : foliation.checks)
            if (rep.id == "foliation.ordering") gap = rep.details.at("min_gap");
        CheckReport rep =
            CheckReport::make("criterion.09", "foliation-structure", ok ? 0.0 : 1.0, 0.5);
        rep.details["min_gap"] = gap;
        rep.runtime_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - fol_t0)
                             .count();
        all.push_back(rep);
    }

    // 10: slab flatness below the empirically estimated threshold.
    detail::add_timed(all, [&] {
        auto slab = ConformalMetric::slab(4, cfg.slab_delta, cfg.slab_tau);
        double t_hat = 1.0;
        double c_hat = 0.0;
        for (double z : {-0.25, -0.5, -1.0, -2.0}) {
            RadialProfile prof = solve_plateau(ShootingProblem(slab, 400.0, z));
            for (const auto& s : prof.samples) {
                double slope_norm = std::abs(s.p) / std::sqrt(1.0 + s.p * s.p);
                if (slope_norm > 0.5) t_hat = std::max(t_hat, s.t);
            }
            for (const auto& s : prof.samples)
                if (s.t >= t_hat) c_hat = std::max(c_hat, s.f - z);
        }
        double threshold = -c_hat - std::pow(t_hat, 1.0 / 2.0) * tail_integral(4);
        double z_test = threshold - 0.5;
        RadialProfile prof = solve_plateau(ShootingProblem(slab, 400.0, z_test));
        double worst = 0.0;
        for (const auto& s : prof.samples) worst = std::max(worst, std::abs(s.f - z_test));
        CheckReport rep = CheckReport::make("criterion.10", "slab-flatness-threshold", worst,
                                            1e-8);
        rep.details["c_hat"] = c_hat;
        rep.details["t_hat"] = t_hat;
        rep.details["threshold"] = threshold;
        return rep;
    });

    // 11: decay fits for n = 4 and n = 5.
    {
        auto t11 = std::chrono::steady_clock::now();
        double worst = 0.0;
        const Leaf* leaf4 = nullptr;
        for (const Leaf& leaf : foliation.leaves)
            if (std::abs(leaf.z - 1.0) < 1e-12) leaf4 = &leaf;
        require(leaf4 != nullptr, ErrorCode::config_error,
                "paper suite expects z = 1 in the foliation grid");
        DecayFit fit4 = decay_fit(*leaf4);
        worst = std::max(worst, std::abs(fit4.exponent + 1.0));
        auto schw4 = ConformalMetric::schwarzschild(4, 2.0);
        ExpansionDecay dec4 =
            geometric_expansion_check(leaf4->profile, schw4, 10.0, 2.0 * cfg.t_view);
        worst = std::max(worst, dec4.report.measured);

        auto schw5 = ConformalMetric::schwarzschild(5, 2.0);
        LeafOptions lopt;
        lopt.tolerance = cfg.leaf_tolerance;
        auto schedule = fol_cfg.leaf_schedule();
        Leaf leaf5 = build_leaf(schw5, 1.0, schedule, cfg.t_view, lopt);
        DecayFit fit5 = decay_fit(leaf5);
        worst = std::max(worst, std::abs(fit5.exponent + 2.0));
        ExpansionDecay dec5 =
            geometric_expansion_check(leaf5.profile, schw5, 10.0, 2.0 * cfg.t_view);
        worst = std::max(worst, dec5.report.measured);

        CheckReport rep = CheckReport::make("criterion.11", "leaf-decay-exponents", worst, 0.3);
        rep.details["height_exponent_n4"] = fit4.exponent;
        rep.details["height_exponent_n5"] = fit5.exponent;
        rep.runtime_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t11)
                             .count();
        all.push_back(rep);
        auto t12 = std::chrono::steady_clock::now();

        // 12: induced mass of the n = 4, z = 1 leaf.
        std::vector<double> radii;
        for (double lam = 2.0 * cfg.t_view; lam <= leaf4->profile.t_max() / 2.0; lam *= 2.0)
            radii.push_back(lam);
        MassEstimate ind = induced_mass(leaf4->profile, schw4, radii);
        CheckReport mrep =
            CheckReport::make("criterion.12", "leaf-induced-mass", std::abs(ind.limit),
                              std::max(3.0 * ind.error_estimate, 1e-3));
        mrep.details["limit"] = ind.limit;
        mrep.details["error"] = ind.error_estimate;
        mrep.runtime_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t12)
                              .count();
        all.push_back(mrep);
    }

    // 13: perturbation construction over flat and schwarzschild backgrounds.
    detail::add_timed(all, [&] {
        bool ok = true;
        double worst = 0.0;
        for (const std::string& family : {std::string("flat"), std::string("schwarzschild")}) {
            ExperimentConfig pcfg = cfg;
            pcfg.family = family;
            pcfg.dimension = 4;
            auto checks = run_perturb(pcfg, out / ("perturb_" + family));
            for (const auto& rep : checks) {
                ok = ok && rep.pass;
                worst = std::max(worst, rep.measured - rep.tolerance);
            }
        }
        CheckReport rep =
            CheckReport::make("criterion.13", "perturbed-metric-signs", ok ? 0.0 : 1.0, 0.5);
        rep.details["worst_margin"] = worst;
        return rep;
    });
    // 14: isoperimetric ball witness within 1% at r = 256.
    detail::add_timed(all, [&] {
        auto schw = ConformalMetric::schwarzschild(4, 2.0);
        std::vector<double> radii = {4, 8, 16, 32, 64, 128, 256};
        IsoperimetricWitness wit = ball_isoperimetric_witness(schw, radii, 0.01);
        CheckReport rep = CheckReport::make("criterion.14", "ball-isoperimetric-ratio",
                                            wit.report.measured, 0.01);
        rep.pass = wit.report.pass;
        rep.details["final_ratio"] = wit.ratios.back();
        return rep;
    });

    write_checks_json(out / "paper_suite.json", "verify", all);
    return all;
}

inline std::vector<CheckReport> run_verify(const ExperimentConfig& cfg,
                                           const std::filesystem::path& out,
                                           const std::string& suite) {
    detail::ensure_dir(out);
    if (suite == "paper-suite") return paper_suite_checks(cfg, out);

    std::vector<CheckReport> checks;
    ConformalMetric metric = cfg.metric();
    if (suite == "identities") {
        auto flat = ConformalMetric::flat(cfg.dimension);
        PlaneCurve plane(1.5, 0.0, 120.0);
        checks.push_back(monotonicity_check(plane, flat, 1.5, 3.0, 20.0));
        CatenoidCurve cat(1.0, cfg.dimension, 0.0, 100.0);
        checks.push_back(monotonicity_check(cat, flat, 0.0, 2.0, 50.0));
        checks.push_back(euclidean_ibp_check(cat, flat));
        SphereCurve sphere(1.3, 0.0);
        std::vector<double> sig = {0.4, 1.0, 2.2};
        checks.push_back(gauss_trace_check(sphere, flat, sig));
        if (cfg.family == "schwarzschild") {
            RadialProfile prof = solve_plateau(ShootingProblem(metric, 400.0, cfg.plateau_z));
            ProfileCurve curve(prof, prof.t_min(), prof.t_max());
            checks.push_back(monotonicity_check(curve, metric, 0.0, 5.0, 40.0));
            std::vector<double> sig2 = {2.0, 5.0, 11.0, 23.0};
            checks.push_back(gauss_trace_check(curve, metric, sig2));
        }
    } else if (suite == "bounds") {
        if (cfg.family == "schwarzschild") {
            RadialProfile prof = solve_plateau(ShootingProblem(metric, 400.0, cfg.plateau_z));
            for (auto& rep : verify_solution(metric, prof)) checks.push_back(rep);
            ProfileCurve curve(prof, prof.t_min(), prof.t_max());
            checks.push_back(
                layer_cake_check(curve, metric, cfg.dimension - 2.0, 2.0, 100.0));
            std::vector<double> sgrid = {10, 20, 40, 80, 160};
            AreaRatioScan scan = area_ratio_scan(curve, metric, sgrid);
            checks.push_back(scan.report);
            std::vector<double> zs = {0.2, 0.1, 0.05};
            checks.push_back(small_z_scan(metric, zs, 800.0));

            // scan tables for plotting
            std::string ratio_csv = "s,ratio\n";
            for (size_t i = 0; i < scan.radii.size(); ++i)
                ratio_csv += format_double(scan.radii[i]) + "," +
                             format_double(scan.ratios[i]) + "\n";
            write_text(out / "area_ratio.csv", ratio_csv);
            std::string shape_csv = "t,h2\n";
            for (int i = 0; i < 64; ++i) {
                double t = 2.0 * std::pow(100.0, i / 63.0);
                CurvatureSample c = second_fundamental_form(prof, metric, t);
                shape_csv += format_double(t) + "," + format_double(c.h2) + "\n";
            }
            write_text(out / "shape_profile.csv", shape_csv);
        } else {
            fail(ErrorCode::config_error, "bounds suite runs on the schwarzschild family");
        }
    } else {
        fail(ErrorCode::config_error, "unknown verify suite '" + suite + "'");
    }
    write_checks_json(out / ("verify_" + suite + ".json"), "verify", checks);
    return checks;
}

/// Aggregate every check array found in the output directory.
inline std::vector<CheckReport> run_report(const std::filesystem::path& out) {
    std::vector<CheckReport> all;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(out)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().extension() != ".json") continue;
        if (entry.path().filename() == "report_summary.json") continue;
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        std::ifstream in(path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception&) {
            continue;
        }
        if (!j.contains("checks")) continue;
        for (const auto& cj : j.at("checks")) {
            CheckReport rep;
            rep.id = cj.value("id", "");
            rep.anchor = cj.value("anchor", "");
            rep.measured = cj.value("measured", 0.0);
            rep.tolerance = cj.value("tolerance", 0.0);
            rep.pass = cj.value("pass", false);
            all.push_back(rep);
        }
    }
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["command"] = "report";
    doc["total"] = all.size();
    size_t passed = 0;
    for (const auto& rep : all)
        if (rep.pass) ++passed;
    doc["passed"] = passed;
    doc["all_pass"] = passed == all.size();
    doc["checks"] = ordered_json::array();
    for (const auto& rep : all) doc["checks"].push_back(check_to_json(rep));
    write_text(out / "report_summary.json", doc.dump(2) + "\n");
    return all;
}

}  // namespace minsurf
