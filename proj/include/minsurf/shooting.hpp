#pragma once

#include <algorithm>
#include <vector>

#include "minsurf/core.hpp"
#include "minsurf/metrics.hpp"
#include "minsurf/profile.hpp"
#include "minsurf/quadrature.hpp"
#include "minsurf/report.hpp"

namespace minsurf {

/// C_height(n) = 4(n-1) * integral over (4(n-1), infinity) of
/// t^{2-n} (log t + 1) dt, by the elementary antiderivative
/// t^{3-n} [ (log t + 1)/(3-n) - 1/(3-n)^2 ].
inline double height_bound_constant(int n) {
    require(n >= 4, ErrorCode::config_error, "height bound needs n >= 4");
    double a = 4.0 * (n - 1);
    double k = n - 3.0;
    return 4.0 * (n - 1) * std::pow(a, 3.0 - n) * ((std::log(a) + 1.0) / k + 1.0 / sq(k));
}

/// Same constant by geometric-panel quadrature; cross-check for the
/// antiderivative. The truncation tail beyond t_max is below 1e-11.
inline double height_bound_constant_quadrature(int n, double t_max = 1e13) {
    double a = 4.0 * (n - 1);
    auto integrand = [&](double t) { return std::pow(t, 2.0 - n) * (std::log(t) + 1.0); };
    return 4.0 * (n - 1) * integrate_geometric(integrand, a, t_max, 2.0, 48);
}

/// Boundary-value problem: least-area graph with boundary circle
/// S^{n-2}_r x {z}, solved by shooting on the axis height.
struct ShootingProblem {
    ConformalMetric metric;
    double r = 0.0;
    double z = 0.0;
    double tolerance = 0.0;  // 0: default 1e-9 * max(1, |z|)
    int max_iterations = 200;
    int max_bracket_expansions = 8;
    IntegrateOptions integrate_options;

    ShootingProblem(ConformalMetric m, double r_, double z_)
        : metric(std::move(m)), r(r_), z(z_) {
        require(r > 2.0, ErrorCode::config_error, "boundary radius must exceed 2");
    }

    double tol() const { return tolerance > 0.0 ? tolerance : 1e-9 * std::max(1.0, std::abs(z)); }
    // Axis offset for the series start. Growing it linearly with r lets the
    // quartic series truncation reach 1e-5 by r ~ 5e4 and fail the
    // start-refinement oracle; the square-root scaling keeps it below
    // 1e-13 across every schedule used here.
    double t_start() const { return 1e-6 * std::sqrt(std::max(1.0, r)); }
};

struct ShootInfo {
    int iterations = 0;
    int bracket_expansions = 0;
    bool scan_fallback = false;
    double residual = 0.0;
    double axis_height = 0.0;
};

namespace detail {

constexpr double kDive = -1e300;

/// f(r; f0) - z, with failed probes (horizon crossing, slope blowup,
/// domain exit) reported as a dive below any admissible residual.
inline double shooting_residual(const ShootingProblem& pb, double f0,
                                RadialProfile* keep = nullptr) {
    try {
        ProfileState start = axis_start(pb.metric, f0, pb.t_start());
        RadialProfile prof = integrate_profile(pb.metric, start, pb.r, pb.integrate_options);
        double res = prof.height(pb.r) - pb.z;
        if (keep) *keep = std::move(prof);
        return res;
    } catch (const LabError& e) {
        switch (e.code()) {
            case ErrorCode::horizon_collision:
            case ErrorCode::slope_blowup:
            case ErrorCode::domain_violation:
            case ErrorCode::point_outside_domain:
            case ErrorCode::step_underflow: return kDive;
            default: throw;
        }
    }
}

}  // namespace detail

/// Solve the Plateau problem by bisection on the axis height over the
/// bracket [z, z + C_height(n) + 1], geometrically expanded on demand.
/// The residual is assumed monotone in f0; this is checked while
/// bisecting, with a scan-and-rebracket fallback when it fails.
inline RadialProfile solve_plateau(const ShootingProblem& pb, ShootInfo* info_out = nullptr) {
    const double tol = pb.tol();
    ShootInfo info;

    auto finish = [&](double f0, double residual, RadialProfile prof) {
        prof.boundary_radius = pb.r;
        prof.boundary_height = pb.z;
        info.residual = residual;
        info.axis_height = f0;
        if (info_out) *info_out = info;
        return prof;
    };

    // Validate the bracket ends; the lower end solves flat problems outright.
    double lo = pb.z;
    double hi = pb.z + height_bound_constant(pb.metric.dimension()) + 1.0;
    RadialProfile prof;
    double res_lo = detail::shooting_residual(pb, lo, &prof);
    if (std::abs(res_lo) < tol && res_lo != detail::kDive) return finish(lo, res_lo, prof);

    double res_hi = detail::shooting_residual(pb, hi, &prof);
    if (std::abs(res_hi) < tol) return finish(hi, res_hi, prof);

    while (!(res_lo < 0.0 && res_hi > 0.0)) {
        require(info.bracket_expansions < pb.max_bracket_expansions, ErrorCode::no_bracket,
                "shooting residual has equal signs on the expanded bracket");
        info.bracket_expansions++;
        if (res_hi <= 0.0) {
            hi = pb.z + (hi - pb.z) * 2.0;
            res_hi = detail::shooting_residual(pb, hi, &prof);
            if (std::abs(res_hi) < tol) return finish(hi, res_hi, prof);
        } else {
            // res_lo > 0: the boundary height itself overshoots; search below.
            lo = pb.z - (hi - pb.z);
            res_lo = detail::shooting_residual(pb, lo, &prof);
            if (std::abs(res_lo) < tol && res_lo != detail::kDive)
                return finish(lo, res_lo, prof);
        }
    }

    // Bisection; evaluations must be consistent with a monotone residual.
    std::vector<std::pair<double, double>> seen = {{lo, res_lo}, {hi, res_hi}};
    const double slack = std::max(1e-6 * std::max(1.0, std::abs(pb.z)), 100.0 * tol);
    bool monotone = true;
    for (int it = 0; it < pb.max_iterations; ++it) {
        double mid = 0.5 * (lo + hi);
        RadialProfile mid_prof;
        double res = detail::shooting_residual(pb, mid, &mid_prof);
        info.iterations++;
        if (std::abs(res) < tol && res != detail::kDive)
            return finish(mid, res, std::move(mid_prof));

        seen.insert(std::lower_bound(seen.begin(), seen.end(), std::make_pair(mid, res)),
                    {mid, res});
        for (size_t i = 0; i + 1 < seen.size() && monotone; ++i)
            if (seen[i].second > seen[i + 1].second + slack) monotone = false;
        if (!monotone) break;

        if (res < 0.0)
            lo = mid;
        else
            hi = mid;
        require(hi - lo > 1e-16 * std::max(1.0, std::abs(hi)), ErrorCode::max_iterations,
                "bracket collapsed without meeting the residual tolerance");
    }

    if (monotone) fail(ErrorCode::max_iterations, "bisection iteration budget exhausted");

    // Fallback: scan for a sign change, then bisect inside it.
    info.scan_fallback = true;
    const int scan_points = 64;
    double prev_f0 = lo, prev_res = detail::shooting_residual(pb, lo);
    for (int i = 1; i <= scan_points; ++i) {
        double f0 = lo + (hi - lo) * i / scan_points;
        double res = detail::shooting_residual(pb, f0);
        if (prev_res < 0.0 && res >= 0.0) {
            double a = prev_f0, b = f0;
            for (int it = 0; it < pb.max_iterations; ++it) {
                double mid = 0.5 * (a + b);
                RadialProfile mid_prof;
                double rm = detail::shooting_residual(pb, mid, &mid_prof);
                info.iterations++;
                if (std::abs(rm) < tol && rm != detail::kDive)
                    return finish(mid, rm, std::move(mid_prof));
                (rm < 0.0 ? a : b) = mid;
            }
            fail(ErrorCode::max_iterations, "fallback bisection budget exhausted");
        }
        prev_f0 = f0;
        prev_res = res;
    }
    fail(ErrorCode::no_bracket, "scan fallback found no sign change");
}

/// Quality checks on a solved profile:
///  (a) monotone slope (families whose barriers force it),
///  (b) confinement above the boundary plane,
///  (c) the logarithmic slope bound for schwarzschild,
///  (d) vanishing mean curvature via the conformal law, with the euclidean
///      curvature reconstructed from dense output by finite differences.
inline std::vector<CheckReport> verify_solution(const ConformalMetric& metric,
                                                const RadialProfile& prof) {
    const int n = metric.dimension();
    const double z = prof.boundary_height;
    const double r = prof.boundary_radius > 0.0 ? prof.boundary_radius : prof.t_max();
    std::vector<CheckReport> out;

    bool monotone_family = metric.family() == MetricFamily::flat ||
                           metric.family() == MetricFamily::schwarzschild_conformal;

    {  // (a) slope sign
        double worst = -1e300;
        for (const auto& s : prof.samples) worst = std::max(worst, s.p);
        CheckReport rep = CheckReport::make("solution.slope_sign", "graph-monotone-slope",
                                            worst, 1e-10);
        if (!monotone_family) rep.pass = true;  // informational outside its scope
        rep.details["gated"] = monotone_family ? 1.0 : 0.0;
        out.push_back(rep);
    }
    {  // (b) confinement: f(t) >= z on t < r
        double worst = 0.0;
        for (const auto& s : prof.samples)
            if (s.t < r) worst = std::max(worst, z - s.f);
        out.push_back(CheckReport::make("solution.confinement", "cylinder-confinement", worst,
                                        1e-10 * std::max(1.0, std::abs(z))));
    }
    if (metric.family() == MetricFamily::schwarzschild_conformal) {
        // (c) f'(t) >= -4(n-1) t^{2-n} (log t + 1) for t >= 4(n-1)
        double worst = -1e300;
        double t0 = 4.0 * (n - 1);
        for (const auto& s : prof.samples) {
            if (s.t < t0 || s.t > r) continue;
            double bound = -4.0 * (n - 1) * std::pow(s.t, 2.0 - n) * (std::log(s.t) + 1.0);
            worst = std::max(worst, bound - s.p);
        }
        CheckReport rep = CheckReport::make("solution.slope_bound", "height-bound-slope",
                                            worst == -1e300 ? 0.0 : worst, 0.0);
        rep.details["samples_in_range"] = worst == -1e300 ? 0.0 : 1.0;
        out.push_back(rep);
    }
    {  // (d) mean curvature residual at interior samples
        double worst = 0.0;
        double t_lo = std::max(prof.t_min() * 4.0, 1e-3 * r);
        double t_hi = r * 0.98;
        const int count = 25;
        for (int i = 0; i < count; ++i) {
            double t = t_lo + (t_hi - t_lo) * (i + 0.5) / count;
            double h = 0.02 * (1.0 + 0.01 * t);
            if (t - 2.0 * h <= prof.t_min() || t + 2.0 * h >= prof.t_max()) continue;
            ProfileState s = prof.at(t);
            auto fval = [&](double tt) { return prof.height(tt); };
            double fpp = (-fval(t + 2 * h) + 16.0 * fval(t + h) - 30.0 * s.f +
                          16.0 * fval(t - h) - fval(t - 2 * h)) /
                         (12.0 * h * h);
            double sq1p = std::sqrt(1.0 + s.p * s.p);
            double h_bar = -(fpp / (sq1p * sq1p * sq1p) + (n - 2) * s.p / (t * sq1p));
            Vec x = axis_point(n, t, s.f);
            Vec nu(n);
            nu[0] = -s.p / sq1p;
            nu[n - 1] = 1.0 / sq1p;
            worst = std::max(worst, std::abs(metric.mean_curvature_from_euclidean(x, h_bar, nu)));
        }
        out.push_back(
            CheckReport::make("solution.mean_curvature", "minimal-graph-residual", worst, 1e-6));
    }
    return out;
}

/// Small-z limit of the height bound: f_{r,z}(z^{-2}) = z + o(z) as z -> 0.
/// Reports the ratio f(z^{-2})/z per z and checks it decreases toward 1.
inline CheckReport small_z_scan(const ConformalMetric& metric, std::span<const double> z_grid,
                                double r) {
    CheckReport rep;
    rep.id = "plateau.small_z";
    rep.anchor = "height-bound-small-z";
    double prev_ratio = 1e300;
    bool monotone = true, above_one = true;
    double last_ratio = 0.0;
    for (size_t i = 0; i < z_grid.size(); ++i) {
        double z = z_grid[i];
        require(i == 0 || z < z_grid[i - 1], ErrorCode::config_error,
                "z grid must decrease toward 0");
        require(r > 1.0 / (z * z), ErrorCode::config_error, "need r > z^{-2}");
        ShootingProblem pb(metric, r, z);
        RadialProfile prof = solve_plateau(pb);
        double ratio = prof.height(1.0 / (z * z)) / z;
        rep.details["ratio_z_" + std::to_string(i)] = ratio;
        if (ratio > prev_ratio + 1e-9) monotone = false;
        if (ratio < 1.0 - 1e-9) above_one = false;
        prev_ratio = ratio;
        last_ratio = ratio;
    }
    rep.measured = last_ratio - 1.0;
    rep.tolerance = 0.5;  // o(z)/z at the smallest sampled z
    rep.pass = monotone && above_one && rep.measured <= rep.tolerance && rep.measured >= -1e-9;
    return rep;
}

}  // namespace minsurf
