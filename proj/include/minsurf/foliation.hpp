#pragma once

#include <optional>
#include <vector>

#include "minsurf/core.hpp"
#include "minsurf/fit.hpp"
#include "minsurf/report.hpp"
#include "minsurf/shooting.hpp"

namespace minsurf {

/// One foliation leaf: the r -> infinity limit of Plateau solutions over a
/// growing boundary-radius schedule. The view samples on [0, T_view] are
/// pointwise Richardson extrapolations over the last three iterates (the
/// boundary effect decays like r^{3-n}, so raw iterates converge too slowly
/// to certify directly); the stored profile is the last genuine solution,
/// which is what the pointwise verification checks run on.
struct Leaf {
    double z = 0.0;
    double t_view = 0.0;
    std::vector<double> radii_used;
    std::vector<double> raw_diffs;     // sup |f_{r_{k+1}} - f_{r_k}| on the view
    std::vector<double> extrap_diffs;  // sup-difference of consecutive extrapolants
    std::vector<double> view_t;        // shared sample grid on [~0, T_view]
    std::vector<double> view_f;        // extrapolated leaf heights
    std::vector<double> fitted_rates;  // extrapolation rate per view sample (coarse)
    RadialProfile profile;             // last solved iterate, full range
    bool converged = false;
    double inf_height = 0.0;           // over the full last iterate
    std::vector<CheckReport> solution_checks;

    double view_height(double t) const {
        // linear interpolation on the uniform view grid
        require(!view_t.empty(), ErrorCode::insufficient_range, "empty leaf view");
        if (t <= view_t.front()) return view_f.front();
        if (t >= view_t.back()) return view_f.back();
        double step = view_t[1] - view_t[0];
        size_t i = std::min(view_t.size() - 2, static_cast<size_t>((t - view_t.front()) / step));
        double w = (t - view_t[i]) / step;
        return (1.0 - w) * view_f[i] + w * view_f[i + 1];
    }
};

struct LeafOptions {
    double tolerance = 1e-6;
    int view_samples = 512;
    ShootInfo* last_shoot = nullptr;
};

inline Leaf build_leaf(const ConformalMetric& metric, double z,
                       std::span<const double> r_schedule, double t_view,
                       const LeafOptions& opt = {}) {
    require(r_schedule.size() >= 3, ErrorCode::config_error,
            "leaf schedule needs at least three radii");
    require(r_schedule.front() >= std::max(2.0 + 1e-9, 2.0 * t_view), ErrorCode::config_error,
            "first radius must reach max(2, 2 T_view)");

    Leaf leaf;
    leaf.z = z;
    leaf.t_view = t_view;

    std::vector<std::vector<double>> iterates;   // raw view samples per radius
    std::vector<double> prev_extrap;
    const int m = opt.view_samples;

    double t_floor = 1e-6 * std::max(1.0, r_schedule.front());
    leaf.view_t.resize(m);
    for (int i = 0; i < m; ++i)
        leaf.view_t[i] = std::max(t_floor, t_view * i / (m - 1.0));

    double prev_r = 2.0;
    for (double r : r_schedule) {
        require(r > prev_r, ErrorCode::config_error, "leaf schedule must increase");
        prev_r = r;
        ShootingProblem pb(metric, r, z);
        ShootInfo info;
        RadialProfile prof = solve_plateau(pb, &info);
        leaf.radii_used.push_back(r);

        std::vector<double> view(m);
        for (int i = 0; i < m; ++i) view[i] = prof.height(leaf.view_t[i]);
        if (!iterates.empty()) {
            double sup = 0.0;
            for (int i = 0; i < m; ++i)
                sup = std::max(sup, std::abs(view[i] - iterates.back()[i]));
            leaf.raw_diffs.push_back(sup);
        }
        iterates.push_back(std::move(view));
        leaf.profile = std::move(prof);
        if (opt.last_shoot) *opt.last_shoot = info;

        if (iterates.size() < 3) continue;
        const auto& y0 = iterates[iterates.size() - 3];
        const auto& y1 = iterates[iterates.size() - 2];
        const auto& y2 = iterates[iterates.size() - 1];
        double ratio = leaf.radii_used.back() / leaf.radii_used[leaf.radii_used.size() - 2];
        std::vector<double> extrap(m);
        double rate_sum = 0.0;
        int rate_count = 0;
        for (int i = 0; i < m; ++i) {
            PowerFit fit = richardson3(leaf.radii_used[leaf.radii_used.size() - 3], y0[i],
                                       y1[i], y2[i], ratio);
            extrap[i] = fit.limit;
            if (fit.resolved) {
                rate_sum += fit.rate;
                ++rate_count;
            }
        }
        if (rate_count > 0) leaf.fitted_rates.push_back(rate_sum / rate_count);

        if (!prev_extrap.empty()) {
            double sup = 0.0;
            for (int i = 0; i < m; ++i) sup = std::max(sup, std::abs(extrap[i] - prev_extrap[i]));
            leaf.extrap_diffs.push_back(sup);
            if (sup < opt.tolerance) {
                leaf.view_f = std::move(extrap);
                leaf.converged = true;
                break;
            }
        }
        prev_extrap = std::move(extrap);
    }
    require(leaf.converged, ErrorCode::not_converged,
            "leaf schedule exhausted before the extrapolants settled");

    leaf.inf_height = 1e300;
    for (const auto& s : leaf.profile.samples) leaf.inf_height = std::min(leaf.inf_height, s.f);

    // The limit asymptotics: the view stays above the boundary plane and
    // approaches it from above moving outward.
    double view_min = 1e300;
    for (double f : leaf.view_f) view_min = std::min(view_min, f);
    require(view_min >= z - opt.tolerance, ErrorCode::domain_violation,
            "leaf view dips below its boundary plane");

    leaf.solution_checks = verify_solution(metric, leaf.profile);
    return leaf;
}

/// Strict ordering of leaves over a shared sample grid; the minimum gap is
/// reported.
struct FoliationScan {
    std::vector<Leaf> leaves;
    CheckReport report;
};

inline CheckReport foliation_ordering_report(const std::vector<Leaf>& leaves) {
    require(leaves.size() >= 2, ErrorCode::config_error, "ordering needs two leaves");
    double min_gap = 1e300;
    bool ordered = true;
    for (size_t k = 0; k + 1 < leaves.size(); ++k) {
        const Leaf& lo = leaves[k];
        const Leaf& hi = leaves[k + 1];
        require(hi.z > lo.z, ErrorCode::config_error, "z grid must increase");
        for (size_t i = 0; i < lo.view_t.size(); ++i) {
            double gap = hi.view_height(lo.view_t[i]) - lo.view_f[i];
            min_gap = std::min(min_gap, gap);
            if (gap <= 0.0) ordered = false;
        }
    }
    CheckReport rep = CheckReport::make("foliation.ordering", "leaf-disjointness",
                                        ordered ? 0.0 : 1.0, 0.5);
    rep.pass = ordered && min_gap > 0.0;
    rep.details["min_gap"] = min_gap;
    return rep;
}

inline FoliationScan foliation_scan(const ConformalMetric& metric, std::span<const double> z_grid,
                                    std::span<const double> r_schedule, double t_view,
                                    const LeafOptions& opt = {}) {
    FoliationScan scan;
    for (double z : z_grid) {
        require(z > 0.0, ErrorCode::config_error, "z grid must be positive");
        scan.leaves.push_back(build_leaf(metric, z, r_schedule, t_view, opt));
    }
    scan.report = foliation_ordering_report(scan.leaves);
    return scan;
}

/// Leaves for decreasing z: inf heights track z and the profiles decrease
/// monotonically toward the limit surface above the horizon. A horizon
/// collision at tiny z is reported as a finding rather than a failure.
struct Sigma0Limit {
    std::vector<Leaf> leaves;
    CheckReport report;
};

inline Sigma0Limit sigma0_limit(const ConformalMetric& metric, std::span<const double> z_seq,
                                std::span<const double> r_schedule, double t_view,
                                double inf_tol = 1e-5, const LeafOptions& opt = {}) {
    Sigma0Limit out;
    out.report.id = "foliation.sigma0";
    out.report.anchor = "limit-leaf-inf-height";
    double prev_z = 1e300;
    double worst_inf_dev = 0.0;
    bool horizon_finding = false;
    for (double z : z_seq) {
        require(z > 0.0 && z < prev_z, ErrorCode::config_error, "z sequence must decrease");
        prev_z = z;
        try {
            out.leaves.push_back(build_leaf(metric, z, r_schedule, t_view, opt));
        } catch (const LabError& e) {
            if (e.code() == ErrorCode::horizon_collision) {
                horizon_finding = true;
                continue;
            }
            throw;
        }
        worst_inf_dev = std::max(worst_inf_dev, std::abs(out.leaves.back().inf_height - z));
    }
    bool decreasing = true;
    for (size_t k = 0; k + 1 < out.leaves.size(); ++k) {
        const Leaf& hi = out.leaves[k];       // larger z
        const Leaf& lo = out.leaves[k + 1];   // smaller z
        for (size_t i = 0; i < hi.view_t.size(); ++i)
            if (lo.view_height(hi.view_t[i]) >= hi.view_f[i]) decreasing = false;
    }
    out.report.measured = worst_inf_dev;
    out.report.tolerance = inf_tol;
    out.report.pass = worst_inf_dev <= inf_tol && decreasing;
    out.report.details["horizon_finding"] = horizon_finding ? 1.0 : 0.0;
    out.report.details["leaves_built"] = static_cast<double>(out.leaves.size());
    return out;
}

/// Tail-height decay of a leaf: fit of log|f - f_tail| against log t on
/// [T_view/2, T_view], with f_tail estimated by three-point Richardson on
/// geometric anchors beyond the view.
struct DecayFit {
    double exponent = 0.0;
    double amplitude = 0.0;
    double residual = 0.0;
    double tail_height = 0.0;
};

inline DecayFit decay_fit(const Leaf& leaf) {
    const RadialProfile& prof = leaf.profile;
    double t_anchor = leaf.t_view;
    require(4.0 * t_anchor <= prof.t_max() / 2.0, ErrorCode::tail_too_short,
            "leaf not resolved far enough beyond the view for anchors");
    double y0 = prof.height(t_anchor);
    double y1 = prof.height(2.0 * t_anchor);
    double y2 = prof.height(4.0 * t_anchor);
    require(std::abs(y0 - y1) >= 1e-12 && std::abs(y1 - y2) >= 1e-12, ErrorCode::tail_too_flat,
            "tail differences below resolution: nothing to fit");
    PowerFit tail = richardson3(t_anchor, y0, y1, y2, 2.0);
    DecayFit fit;
    fit.tail_height = tail.limit;

    std::vector<double> ts, dev;
    const int count = 24;
    for (int i = 0; i < count; ++i) {
        double t = 0.5 * leaf.t_view * std::pow(2.0, double(i) / (count - 1));
        double d = std::abs(prof.height(t) - tail.limit);
        require(d > 1e-13, ErrorCode::tail_too_flat, "tail flat within the fit window");
        ts.push_back(t);
        dev.push_back(d);
    }
    SlopeFit slope = loglog_slope(ts, dev);
    fit.exponent = slope.slope;
    fit.amplitude = std::exp(slope.intercept);
    fit.residual = slope.residual;
    return fit;
}

}  // namespace minsurf
