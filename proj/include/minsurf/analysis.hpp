#pragma once

#include <functional>
#include <string>
#include <vector>

#include "minsurf/adm.hpp"
#include "minsurf/core.hpp"
#include "minsurf/fit.hpp"
#include "minsurf/metrics.hpp"
#include "minsurf/profile.hpp"
#include "minsurf/report.hpp"
#include "minsurf/surfaces.hpp"

namespace minsurf {

/// Axisymmetric scalar test function of the curve parameter, with its
/// derivative; compactly supported variants are built by bump().
struct TestFunction {
    std::function<double(double)> value;
    std::function<double(double)> deriv;
    bool compact_support = false;

    static TestFunction constant(double c) {
        return {[c](double) { return c; }, [](double) { return 0.0; }, false};
    }
    static TestFunction zero() { return constant(0.0); }

    /// amp * sin^2(pi (s-a)/(b-a)) on [a, b], zero outside; C^1 throughout.
    static TestFunction bump(double a, double b, double amp) {
        TestFunction f;
        f.compact_support = true;
        f.value = [=](double s) {
            if (s <= a || s >= b) return 0.0;
            return amp * sq(std::sin(M_PI * (s - a) / (b - a)));
        };
        f.deriv = [=](double s) {
            if (s <= a || s >= b) return 0.0;
            double w = M_PI / (b - a);
            return amp * 2.0 * std::sin(w * (s - a)) * std::cos(w * (s - a)) * w;
        };
        return f;
    }
};

/// Area of the rotation graph between two radii in g: the 1d reduction
/// (n-1) w_{n-1} * integral of t^{n-2} sqrt(1+p^2) omega^{(n-1)/2} dt,
/// refined by node doubling to the requested relative tolerance.
inline double area_functional(const RadialProfile& prof, const ConformalMetric& metric,
                              double t0, double t1, double rel_tol = 1e-9) {
    const int n = metric.dimension();
    t0 = std::max(t0, prof.t_min());
    t1 = std::min(t1, prof.t_max());
    auto density = [&](double t) {
        ProfileState s = prof.at(t);
        double w = metric.axisym_jet(t, s.f).value;
        return std::pow(t, n - 2) * std::sqrt(1.0 + s.p * s.p) * std::pow(w, 0.5 * (n - 1));
    };
    return (n - 1) * unit_ball_volume(n - 1) *
           integrate_adaptive(density, t0, t1, rel_tol, 24);
}

inline double area_of_quadrature(const SurfaceQuadrature& quad) {
    return quad.integrate_g([](const SurfacePoint&) { return 1.0; });
}

/// Both sides of the euclidean monotonicity identity for a ball pair
/// (s_r, t_r) centered at (0,...,0,center_height). All integrals are with
/// respect to the euclidean area element; the mean curvature is the
/// geometric one of the discrete curve, oriented so that the round sphere
/// has positive mean curvature toward the outward normal. Under that
/// orientation both correction terms enter with a plus sign (the closed
/// sphere fixes the signs: only base and the inner correction survive and
/// must reproduce the left side exactly).
struct MonotonicityParts {
    double lhs = 0.0, base = 0.0, excess = 0.0, corr_annulus = 0.0, corr_inner = 0.0;
    double rhs() const { return base + excess + corr_annulus + corr_inner; }
    double scale() const {
        return std::max({std::abs(lhs), std::abs(base), std::abs(excess), 1e-300});
    }
};

inline MonotonicityParts monotonicity_parts(const RevolutionCurve& curve,
                                            const ConformalMetric& metric, double center_height,
                                            double s_r, double t_r) {
    require(0.0 < s_r && s_r < t_r, ErrorCode::config_error, "need 0 < s < t");
    const int n = metric.dimension();
    BallIntersector bi(curve, metric, center_height);
    require(bi.min_dist() > 1e-6 || s_r > 1e-6, ErrorCode::quadrature_singularity,
            "center on the surface with vanishing inner radius");

    const double c = center_height;
    auto offset_dot_nu = [c](const SurfacePoint& p) {
        return p.jet.t * p.nu_t + (p.jet.f - c) * p.nu_f;
    };
    auto dist_of = [c](const SurfacePoint& p) { return std::hypot(p.jet.t, p.jet.f - c); };

    MonotonicityParts parts;
    parts.lhs = std::pow(t_r, 1.0 - n) * bi.area_inside(t_r);
    parts.base = std::pow(s_r, 1.0 - n) * bi.area_inside(s_r);
    parts.excess = bi.integrate_annulus_bar(s_r, t_r, [&](const SurfacePoint& p) {
        return std::pow(dist_of(p), -1.0 - n) * sq(offset_dot_nu(p));
    });
    parts.corr_annulus =
        bi.integrate_annulus_bar(s_r, t_r, [&](const SurfacePoint& p) {
            return (std::pow(t_r, 1.0 - n) - std::pow(dist_of(p), 1.0 - n)) *
                   offset_dot_nu(p) * p.hbar;
        }) /
        (n - 1.0);
    parts.corr_inner = (std::pow(t_r, 1.0 - n) - std::pow(s_r, 1.0 - n)) *
                       bi.integrate_inside_bar(s_r, [&](const SurfacePoint& p) {
                           return offset_dot_nu(p) * p.hbar;
                       }) /
                       (n - 1.0);
    return parts;
}

inline CheckReport monotonicity_check(const RevolutionCurve& curve, const ConformalMetric& metric,
                                      double center_height, double s_r, double t_r,
                                      double tolerance = 1e-6) {
    MonotonicityParts parts = monotonicity_parts(curve, metric, center_height, s_r, t_r);
    double residual = std::abs(parts.lhs - parts.rhs()) / parts.scale();
    CheckReport rep = CheckReport::make("identity.monotonicity", "density-monotonicity-identity",
                                        residual, tolerance);
    rep.details["lhs"] = parts.lhs;
    rep.details["base"] = parts.base;
    rep.details["excess"] = parts.excess;
    rep.details["corr_annulus"] = parts.corr_annulus;
    rep.details["corr_inner"] = parts.corr_inner;
    return rep;
}

/// Weighted annulus integral against the layer-cake style bound
///   c t^{n-1-a} + c a/(n-1-a) (t^{n-1-a} + s^{n-1-a}),
/// with c the measured density sup over [s, t].
inline CheckReport layer_cake_check(const RevolutionCurve& curve, const ConformalMetric& metric,
                                    double alpha, double s, double t) {
    const int n = metric.dimension();
    require(alpha > 0.0 && alpha < n - 1.0, ErrorCode::exponent_out_of_range,
            "alpha must lie in (0, n-1)");
    require(0.0 < s && s < t, ErrorCode::config_error, "need 0 < s < t");
    BallIntersector bi(curve, metric, 0.0);

    double c_sup = 0.0;
    const int grid = 33;
    for (int i = 0; i <= grid; ++i) {
        double r = s * std::pow(t / s, double(i) / grid);
        c_sup = std::max(c_sup, std::pow(r, 1.0 - n) * bi.area_inside(r));
    }
    double lhs = bi.integrate_annulus_bar(s, t, [&](const SurfacePoint& p) {
        return std::pow(norm(p.x), -alpha);
    });
    double bound = c_sup * std::pow(t, n - 1.0 - alpha) +
                   c_sup * alpha / (n - 1.0 - alpha) *
                       (std::pow(t, n - 1.0 - alpha) + std::pow(s, n - 1.0 - alpha));
    CheckReport rep =
        CheckReport::make("bound.layer_cake", "layer-cake-annulus-bound", lhs - bound, 0.0);
    rep.details["integral"] = lhs;
    rep.details["bound"] = bound;
    rep.details["density_sup"] = c_sup;
    return rep;
}

/// Euclidean-area density ratios |B_s cap Sigma| / (w_{n-1} s^{n-1}) over a
/// radius grid, with approach-to-one diagnostics.
struct AreaRatioScan {
    std::vector<double> radii;
    std::vector<double> ratios;
    SlopeFit deviation_fit;  // fitted exponent of |ratio - 1| on the tail
    CheckReport report;
};

inline AreaRatioScan area_ratio_scan(const RevolutionCurve& curve, const ConformalMetric& metric,
                                     std::span<const double> s_grid) {
    const int n = metric.dimension();
    AreaRatioScan scan;
    BallIntersector bi(curve, metric, 0.0);
    CurveJet end = curve.at(curve.sigma_max());
    double reach = std::hypot(end.t, end.f);
    for (double s : s_grid) {
        require(s < 0.95 * reach, ErrorCode::insufficient_range,
                "radius grid exceeds the resolved surface");
        scan.radii.push_back(s);
        scan.ratios.push_back(bi.area_inside(s) /
                              (unit_ball_volume(n - 1) * std::pow(s, n - 1.0)));
    }
    // Tail diagnostics on the upper half of the grid.
    size_t half = scan.radii.size() / 2;
    std::vector<double> xs(scan.radii.begin() + half, scan.radii.end());
    std::vector<double> dev;
    bool decreasing = true;
    double prev = 1e300;
    for (size_t i = half; i < scan.ratios.size(); ++i) {
        double d = std::abs(scan.ratios[i] - 1.0);
        dev.push_back(std::max(d, 1e-16));
        if (d > prev + 1e-12) decreasing = false;
        prev = d;
    }
    scan.deviation_fit = loglog_slope(xs, dev);

    bool in_band = true;
    for (size_t i = half; i < scan.ratios.size(); ++i)
        if (scan.ratios[i] < 0.8 || scan.ratios[i] > 1.2) in_band = false;

    double final_dev = std::abs(scan.ratios.back() - 1.0);
    scan.report = CheckReport::make("scan.area_ratio", "area-ratio-approach", final_dev, 0.2);
    scan.report.pass = scan.report.pass && in_band && decreasing;
    scan.report.details["fitted_exponent"] = scan.deviation_fit.slope;
    scan.report.details["final_ratio"] = scan.ratios.back();
    // The sharp decay-rate statement applies to the approach from above.
    double tau = metric.decay_rate();
    bool any_above = false;
    for (size_t i = half; i < scan.ratios.size(); ++i)
        if (scan.ratios[i] > 1.0 + 1e-10) any_above = true;
    if (any_above && std::isfinite(tau))
        scan.report.pass =
            scan.report.pass && std::abs(scan.deviation_fit.slope + tau) <= 0.5;
    return scan;
}

/// Principal curvature data of a profile graph at radius t.
struct CurvatureSample {
    double h = 0.0;
    double h2 = 0.0;
    double k_profile = 0.0;
    double k_rot = 0.0;
};

inline CurvatureSample second_fundamental_form(const RadialProfile& prof,
                                               const ConformalMetric& metric, double t) {
    ProfileCurve curve(prof, prof.t_min(), prof.t_max());
    SurfacePoint p = surface_point(curve, metric, t);
    return {p.h, p.h2, p.k_prof, p.k_rot};
}

/// Second variation of area for the normal variation with initial velocity
/// u and acceleration v (functions of the curve parameter):
/// integral of H v + H^2 u^2 + |grad u|^2 - (|h|^2 + Ric(nu,nu)) u^2 dmu.
inline double second_variation(const SurfaceQuadrature& quad, const TestFunction& u,
                               const TestFunction& v) {
    return quad.integrate_g([&](const SurfacePoint& p) {
        double uu = u.value(p.sigma), du = u.deriv(p.sigma), vv = v.value(p.sigma);
        double grad2 = sq(du) / (p.omega * sq(p.speed));
        return p.h * vv + sq(p.h) * sq(uu) + grad2 - (p.h2 + p.ric_nu) * sq(uu);
    });
}

/// Quadratic form for asymptotically constant variations 1 + u with u
/// compactly supported: integral |grad u|^2 - (|h|^2+Ric)(1+u)^2 dmu over
/// the resolved range, plus an unsigned tail estimate from a power-law fit
/// of the truncated integrand.
struct AcvResult {
    double value = 0.0;
    double tail_error = 0.0;
    double fit_exponent = 0.0;
    double fit_residual = 0.0;
};

inline AcvResult acv_functional(const RadialProfile& leaf, const ConformalMetric& metric,
                                const TestFunction& u, double t_max, int panels = 96) {
    require(u.compact_support, ErrorCode::config_error,
            "acv test function must be compactly supported");
    ProfileCurve curve(leaf, leaf.t_min(), t_max);
    SurfaceQuadrature quad(curve, metric, panels, 16);
    AcvResult res;
    res.value = quad.integrate_g([&](const SurfacePoint& p) {
        double uu = u.value(p.sigma), du = u.deriv(p.sigma);
        double grad2 = sq(du) / (p.omega * sq(p.speed));
        return grad2 - (p.h2 + p.ric_nu) * sq(1.0 + uu);
    });

    // Tail beyond t_max from a log-log fit of the radial integrand density.
    std::vector<double> ts, dens;
    double dens_peak = 0.0;
    for (int i = 0; i < 12; ++i) {
        double t = t_max * std::pow(0.5, (11 - i) / 11.0);  // [t_max/2, t_max]
        SurfacePoint p = surface_point(curve, metric, t);
        double d = std::abs((p.h2 + p.ric_nu) * p.conf_weight * p.area_bar);
        ts.push_back(t);
        dens.push_back(std::max(d, 1e-300));
        dens_peak = std::max(dens_peak, d);
    }
    if (dens_peak < 1e-30) return res;  // flat geometry: nothing to truncate
    SlopeFit fit = loglog_slope(ts, dens);
    res.fit_exponent = fit.slope;
    res.fit_residual = fit.residual;
    require(fit.residual < 0.5, ErrorCode::tail_estimate_unreliable,
            "integrand tail is not power-law within tolerance");
    require(fit.slope < -1.05, ErrorCode::tail_estimate_unreliable,
            "integrand tail decays too slowly to truncate");
    double c = std::exp(fit.intercept);
    res.tail_error = c * std::pow(t_max, fit.slope + 1.0) / (-fit.slope - 1.0);
    return res;
}

/// Residual of the traced Gauss equation
///   2 Ric(nu,nu) = R - R_Sigma + H^2 - |h|^2
/// with every term computed by an independent path. R_Sigma combines the
/// flat Gauss identity for the euclidean induced metric with the conformal
/// change in dimension n-1.
inline double gauss_trace_residual(const RevolutionCurve& curve, const ConformalMetric& metric,
                                   double sigma) {
    const int n = metric.dimension();
    SurfacePoint p = surface_point(curve, metric, sigma);
    const CurveJet& j = p.jet;
    ConformalMetric::AxisymJet w = metric.axisym_jet(j.t, j.f);

    double speed2 = sq(p.speed);
    double wp = w.wt * j.dt + w.wn * j.df;
    double wpp = w.wtt * sq(j.dt) + 2.0 * w.wtn * j.dt * j.df + w.wnn * sq(j.df) +
                 w.wt * j.d2t + w.wn * j.d2f;
    double theta_p = 0.5 * wp / w.value;
    double theta_pp = 0.5 * wpp / w.value - 0.5 * sq(wp) / sq(w.value);

    double grad2 = sq(theta_p) / speed2;
    double speed_p = (j.dt * j.d2t + j.df * j.d2f) / p.speed;
    double tpow = std::pow(j.t, n - 2);
    double bracket_p = (n - 2) * std::pow(j.t, n - 3) * j.dt * theta_p / p.speed +
                       tpow * (theta_pp / p.speed - theta_p * speed_p / speed2);
    double lap = bracket_p / (tpow * p.speed);

    double r_sigma_bar = sq(p.hbar) - p.h2bar;  // flat Gauss for the induced metric
    double r_sigma =
        (r_sigma_bar - 2.0 * (n - 2) * lap - (n - 2.0) * (n - 3.0) * grad2) / w.value;
    double r_ambient = metric.scalar_curvature(p.x);
    return 2.0 * p.ric_nu - (r_ambient - r_sigma + sq(p.h) - p.h2);
}

inline CheckReport gauss_trace_check(const RevolutionCurve& curve, const ConformalMetric& metric,
                                     std::span<const double> sigmas, double tolerance = 1e-5) {
    double worst = 0.0;
    for (double s : sigmas) worst = std::max(worst, std::abs(gauss_trace_residual(curve, metric, s)));
    return CheckReport::make("identity.gauss_trace", "traced-gauss-equation", worst, tolerance);
}

/// Both sides of the euclidean translation integration-by-parts identity on
/// a bounded revolution surface in flat space, with ubar = gbar(e_n, nubar)
/// and vbar = -hbar(e_n^T, e_n^T):
///   int [Hbar vbar + Hbar^2 ubar^2 + |grad ubar|^2 - |hbar|^2 ubar^2]
///     = boundary [ hbar(conormal, e_n^T) - gbar(e_n^T, conormal) Hbar ] ubar.
struct IbpParts {
    double interior = 0.0;
    double boundary = 0.0;
    double scale = 0.0;
};

inline IbpParts euclidean_ibp_parts(const RevolutionCurve& curve, const ConformalMetric& metric,
                                    int panels = 128) {
    require(metric.family() == MetricFamily::flat, ErrorCode::config_error,
            "identity formulated for the flat ambient metric");
    const int n = metric.dimension();
    SurfaceQuadrature quad(curve, metric, panels, 16);
    IbpParts parts;
    double abs_sum = 0.0;
    parts.interior = quad.integrate_bar([&](const SurfacePoint& p) {
        double tf = p.jet.df / p.speed;               // e_n component of the tangent
        double vbar = -sq(tf) * p.kbar_prof;          // -hbar(e_n^T, e_n^T)
        double du = p.jet.df * p.kbar_prof;           // d ubar / d sigma
        double grad2 = sq(du) / sq(p.speed);
        double val = p.hbar * vbar + sq(p.hbar) * sq(p.ubar) + grad2 - p.h2bar * sq(p.ubar);
        abs_sum += std::abs(val);
        return val;
    });

    for (int end = 0; end < 2; ++end) {
        double sigma = end == 0 ? curve.sigma_min() : curve.sigma_max();
        double sign = end == 0 ? -1.0 : 1.0;
        SurfacePoint p = surface_point(curve, metric, sigma);
        if (p.jet.t < 1e-14) continue;  // poles carry no boundary circle
        double circ = (n - 1) * unit_ball_volume(n - 1) * std::pow(p.jet.t, n - 2);
        double tf = p.jet.df / p.speed;
        parts.boundary += sign * tf * p.ubar * (p.kbar_prof - p.hbar) * circ;
    }
    parts.scale = std::max({std::abs(parts.interior), std::abs(parts.boundary), abs_sum * 1e-3,
                            1e-300});
    return parts;
}

inline CheckReport euclidean_ibp_check(const RevolutionCurve& curve, const ConformalMetric& metric,
                                       double tolerance = 1e-6) {
    IbpParts parts = euclidean_ibp_parts(curve, metric);
    double residual = std::abs(parts.interior - parts.boundary) / parts.scale;
    CheckReport rep = CheckReport::make("identity.euclidean_ibp", "translation-ibp-identity",
                                        residual, tolerance);
    rep.details["interior"] = parts.interior;
    rep.details["boundary"] = parts.boundary;
    return rep;
}

/// Mass of the induced metric on a leaf graph. In the graph chart the
/// induced metric is A(t) delta + B(t) yhat yhat with A = omega and
/// B = omega p^2; for such fields the (n-1)-dimensional flux reduces to
///   m(lambda) = lambda^{n-3} (B - lambda A') / 2.
inline MassEstimate induced_mass(const RadialProfile& leaf, const ConformalMetric& metric,
                                 std::span<const double> radii) {
    const int n = metric.dimension();
    require(radii.size() >= 3, ErrorCode::insufficient_range, "need 3 radii for extrapolation");
    require(radii.back() <= leaf.t_max(), ErrorCode::tail_too_short,
            "schedule exceeds the resolved leaf");
    MassEstimate est;
    for (double lam : radii) {
        ProfileState s = leaf.at(lam);
        ConformalMetric::AxisymJet w = metric.axisym_jet(lam, s.f);
        double a_prime = w.wt + s.p * w.wn;
        double b = w.value * sq(s.p);
        est.radii.push_back(lam);
        est.flux.push_back(0.5 * std::pow(lam, n - 3.0) * (b - lam * a_prime));
    }
    PowerFit fit = power_extrapolate(est.radii, est.flux);
    est.limit = fit.limit;
    est.fitted_rate = fit.rate;
    est.extrapolated = fit.resolved;
    size_t m = est.flux.size();
    est.error_estimate = std::abs(est.flux[m - 1] - est.flux[m - 2]);
    return est;
}

/// Coordinate-ball isoperimetric witness: per radius, the g-volume of the
/// ball region and the g-area of its sphere, combined into the profile
/// ratio (V/w_n)^{(1-n)/n} A which tends to n w_n.
struct IsoperimetricWitness {
    std::vector<double> radii;
    std::vector<double> ratios;
    CheckReport report;
};

inline IsoperimetricWitness ball_isoperimetric_witness(const ConformalMetric& metric,
                                                       std::span<const double> radii,
                                                       double final_tolerance = 0.01) {
    const int n = metric.dimension();
    IsoperimetricWitness wit;
    double r_inner = metric.has_horizon() ? metric.horizon_radius() : 0.0;
    double target = n * unit_ball_volume(n);
    double volume = 0.0;
    double prev_r = r_inner;
    double prev_dev = 1e300;
    bool decreasing = true;
    for (double r : radii) {
        require(r > prev_r, ErrorCode::config_error, "radius schedule must increase");
        auto vol_density = [&](double rho) {
            double w = metric.axisym_jet(rho, 0.0).value;
            return n * unit_ball_volume(n) * std::pow(rho, n - 1.0) * std::pow(w, 0.5 * n);
        };
        volume += integrate_adaptive(vol_density, prev_r, r, 1e-12, 24);
        prev_r = r;
        double w_r = metric.axisym_jet(r, 0.0).value;
        double area = n * unit_ball_volume(n) * std::pow(r, n - 1.0) * std::pow(w_r, 0.5 * (n - 1));
        double ratio = std::pow(volume / unit_ball_volume(n), (1.0 - n) / n) * area;
        wit.radii.push_back(r);
        wit.ratios.push_back(ratio);
        double dev = std::abs(ratio - target);
        if (dev > prev_dev + 1e-12) decreasing = false;
        prev_dev = dev;
    }
    double final_dev = std::abs(wit.ratios.back() - target) / target;
    wit.report = CheckReport::make("scan.isoperimetric_witness", "ball-isoperimetric-ratio",
                                   final_dev, final_tolerance);
    wit.report.pass = wit.report.pass && decreasing;
    wit.report.details["final_ratio"] = wit.ratios.back();
    wit.report.details["target"] = target;
    return wit;
}

/// Decay of the euclidean-vs-g discrepancies along a leaf tail: |nu - nubar|,
/// |dmu/dmubar - 1| and t |h - hbar| all decay like t^{-tau}; the fitted
/// exponents are compared against the metric's decay rate.
struct ExpansionDecay {
    SlopeFit normal_fit, density_fit, shape_fit;
    CheckReport report;
};

inline ExpansionDecay geometric_expansion_check(const RadialProfile& leaf,
                                                const ConformalMetric& metric, double t_lo,
                                                double t_hi, double exponent_tolerance = 0.3) {
    const int n = metric.dimension();
    require(t_hi <= leaf.t_max() && t_lo >= leaf.t_min(), ErrorCode::tail_too_short,
            "fit window outside the resolved leaf");
    ProfileCurve curve(leaf, leaf.t_min(), leaf.t_max());
    std::vector<double> ts, e_nu, e_mu, e_h;
    const int count = 16;
    double worst_signal = 0.0;
    for (int i = 0; i < count; ++i) {
        double t = t_lo * std::pow(t_hi / t_lo, double(i) / (count - 1));
        SurfacePoint p = surface_point(curve, metric, t);
        double nu_dev = std::abs(1.0 / std::sqrt(p.omega) - 1.0);
        double mu_dev = std::abs(p.conf_weight - 1.0);
        double h_dev = t * std::sqrt(sq(p.k_prof - p.kbar_prof) +
                                     (n - 2.0) * sq(p.k_rot - p.kbar_rot));
        ts.push_back(t);
        e_nu.push_back(std::max(nu_dev, 1e-300));
        e_mu.push_back(std::max(mu_dev, 1e-300));
        e_h.push_back(std::max(h_dev, 1e-300));
        worst_signal = std::max({worst_signal, nu_dev, mu_dev, h_dev});
    }
    ExpansionDecay dec;
    if (worst_signal < 1e-14) {
        // Exactly euclidean along the window (flat metric): nothing to fit.
        dec.report = CheckReport::make("scan.geometric_expansions", "euclidean-comparison-decay",
                                       0.0, exponent_tolerance);
        return dec;
    }
    dec.normal_fit = loglog_slope(ts, e_nu);
    dec.density_fit = loglog_slope(ts, e_mu);
    dec.shape_fit = loglog_slope(ts, e_h);
    double tau = metric.decay_rate();
    // Normal and area-density discrepancies decay at exactly the metric
    // rate. The t|h - hbar| comparison is an upper envelope: graphs
    // asymptotic to horizontal planes decay one power faster (the normal
    // becomes orthogonal to the conformal gradient), so only slower-than-
    // envelope decay counts against it.
    double worst = std::max({std::abs(dec.normal_fit.slope + tau),
                             std::abs(dec.density_fit.slope + tau),
                             dec.shape_fit.slope + tau});
    dec.report = CheckReport::make("scan.geometric_expansions", "euclidean-comparison-decay",
                                   worst, exponent_tolerance);
    dec.report.details["normal_exponent"] = dec.normal_fit.slope;
    dec.report.details["density_exponent"] = dec.density_fit.slope;
    dec.report.details["shape_exponent"] = dec.shape_fit.slope;
    return dec;
}

}  // namespace minsurf
