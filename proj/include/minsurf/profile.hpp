#pragma once

#include <optional>
#include <span>
#include <vector>

#include "minsurf/core.hpp"
#include "minsurf/metrics.hpp"
#include "minsurf/ode.hpp"
#include "minsurf/quadrature.hpp"

namespace minsurf {

/// One sample of a radial profile: height f and slope p at radius t,
/// with the ambient radius rho = sqrt(t^2 + f^2).
struct ProfileState {
    double t = 0.0;
    double f = 0.0;
    double p = 0.0;
    double rho() const { return std::sqrt(t * t + f * f); }
};

/// The radial graph ODE is integrated in the variables (f, Q) with
/// Q = t^{n-2} p / sqrt(1+p^2); the minimal-surface law is first order in
/// Q, and p is recovered by inversion (well defined while |Q| < t^{n-2}).
inline double slope_from_flux(double t, double q, int n) {
    double tn = std::pow(t, n - 2);
    double den2 = (tn - q) * (tn + q);
    require(den2 > 0.0, ErrorCode::slope_blowup, "flux exceeds t^{n-2}: graph property lost");
    return q / std::sqrt(den2);
}

inline double flux_from_slope(double t, double p, int n) {
    return std::pow(t, n - 2) * p / std::sqrt(1.0 + p * p);
}

/// Right-hand side dQ/dt for m=2 Schwarzschild:
///   -[2(n-1)/(1+rho^{-(n-2)})] [t^{n-2}/rho^n] [(f - p t)/sqrt(1+p^2)].
inline double rhs_schwarzschild(double t, double f, double p, int n) {
    require(n >= 4 && n <= kMaxDim, ErrorCode::config_error, "rhs requires 4 <= n <= 7");
    require(t > 0.0, ErrorCode::domain_violation, "rhs requires t > 0");
    double rho2 = t * t + f * f;
    require(rho2 >= 1.0, ErrorCode::domain_violation, "state inside the horizon");
    double amp = 2.0 * (n - 1) / (1.0 + std::pow(rho2, -0.5 * (n - 2)));
    double geom = std::pow(t, n - 2) / std::pow(rho2, 0.5 * n);
    return -amp * geom * (f - p * t) / std::sqrt(1.0 + p * p);
}

/// dQ/dt for any rotationally symmetric conformal factor: H = 0 in
/// g = omega * euclidean reduces, via the conformal mean-curvature law, to
///   Q' = (n-1)/2 * t^{n-2} * omega^{-1} (d_n omega - p d_t omega) / sqrt(1+p^2).
inline double rhs_general(double t, double f, double p, const ConformalMetric& metric) {
    require(t > 0.0, ErrorCode::domain_violation, "rhs requires t > 0");
    require(metric.axisymmetric(), ErrorCode::config_error,
            "profile ODE needs a metric symmetric about e_n");
    const int n = metric.dimension();
    ConformalMetric::AxisymJet w = metric.axisym_jet(t, f);
    return 0.5 * (n - 1) * std::pow(t, n - 2) * (w.wn - p * w.wt) /
           (w.value * std::sqrt(1.0 + p * p));
}

/// Series start at the axis. Regularity forces p(0) = 0; the limiting
/// curvature comes from the t->0 limit of the ODE,
///   f''(0) = d_n log(omega)(0, f0) / 2,
/// so f ~ f0 + f''(0) t^2/2 and p ~ f''(0) t.
inline double axis_curvature(const ConformalMetric& metric, double f0) {
    ConformalMetric::AxisymJet w = metric.axisym_jet(0.0, f0);
    return 0.5 * w.wn / w.value;
}

inline ProfileState axis_start(const ConformalMetric& metric, double f0, double t_start) {
    require(t_start > 0.0, ErrorCode::config_error, "t_start must be positive");
    require(metric.contains(axis_point(metric.dimension(), 0.0, f0)),
            ErrorCode::domain_violation, "axis point outside the metric domain");
    double c = axis_curvature(metric, f0);
    ProfileState s;
    s.t = t_start;
    s.f = f0 + 0.5 * c * t_start * t_start;
    s.p = c * t_start;
    return s;
}

struct IntegratorStats {
    long steps = 0;
    long rejected_steps = 0;
    double max_error_ratio = 0.0;
    int height_sign_changes = 0;
};

struct IntegrateOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.0;      // 0: choose from the span
    double slope_cap = 1e6;
    double horizon_band = 1e-8;
};

/// Solved radial graph: dense samples, boundary data and diagnostics.
class RadialProfile {
  public:
    using Trajectory = Dopri5<2>::Output;

    int dimension = 0;
    double boundary_radius = 0.0;  // r (0 when not a boundary-value solve)
    double boundary_height = 0.0;  // z
    double axis_height = 0.0;      // f0 = f(0)
    std::vector<ProfileState> samples;
    IntegratorStats stats;

    double t_min() const { return samples.front().t; }
    double t_max() const { return samples.back().t; }

    /// Height and slope anywhere in [t_min, t_max] via dense output.
    ProfileState at(double t) const {
        if (t <= t_min()) return samples.front();
        if (t >= t_max()) return samples.back();
        auto y = traj_.eval(t);
        ProfileState s;
        s.t = t;
        s.f = y[0];
        s.p = slope_from_flux(t, y[1], dimension);
        return s;
    }

    double height(double t) const { return at(t).f; }
    double slope(double t) const { return at(t).p; }

    /// Second derivative of f from the ODE the profile solves.
    double curvature(double t) const {
        ProfileState s = at(t);
        double q = flux_from_slope(s.t, s.p, dimension);
        double qp = rhs_ ? rhs_(s.t, s.f, s.p) : 0.0;
        double tn = std::pow(s.t, dimension - 2);
        double g = q / tn;  // p / sqrt(1+p^2)
        double dg = (qp - (dimension - 2) * std::pow(s.t, dimension - 3) * g) / tn;
        return dg * std::pow(1.0 + s.p * s.p, 1.5);
    }

    void attach(Trajectory traj, std::function<double(double, double, double)> rhs) {
        traj_ = std::move(traj);
        rhs_ = std::move(rhs);
    }

  private:
    Trajectory traj_;
    std::function<double(double, double, double)> rhs_;
};

/// Adaptive integration of the profile ODE from a start state to t_end.
/// Events: horizon approach aborts with HorizonCollision, loss of the graph
/// property with SlopeBlowup; height sign changes are counted in the stats.
inline RadialProfile integrate_profile(const ConformalMetric& metric, const ProfileState& start,
                                       double t_end, const IntegrateOptions& opt = {}) {
    const int n = metric.dimension();
    require(t_end > start.t, ErrorCode::config_error, "t_end must exceed the start radius");

    // Owned copy: the profile keeps this callable beyond the caller's scope.
    auto rhs_scalar = [m = metric](double t, double f, double p) {
        return rhs_general(t, f, p, m);
    };

    auto rhs = [&](double t, const Dopri5<2>::State& y, Dopri5<2>::State& dy) {
        double p = slope_from_flux(t, y[1], n);
        dy[0] = p;
        dy[1] = rhs_scalar(t, y[0], p);
    };

    const double horizon = metric.has_horizon() ? metric.horizon_radius() : 0.0;
    // Guard band above the horizon; starts already inside the band (for
    // example a horizon-grazing axis height) only keep the domain floor.
    double rho_floor = horizon * (1.0 + opt.horizon_band);
    if (horizon > 0.0 && start.rho() < rho_floor) rho_floor = horizon * (1.0 - 1e-12);
    int sign_changes = 0;
    double prev_f = start.f;
    auto monitor = [&](double t, const Dopri5<2>::State& y) {
        if (horizon > 0.0) {
            double rho2 = t * t + y[0] * y[0];
            require(rho2 >= sq(rho_floor), ErrorCode::horizon_collision,
                    "trajectory entered the horizon guard band");
        }
        double p = slope_from_flux(t, y[1], n);
        require(std::abs(p) <= opt.slope_cap, ErrorCode::slope_blowup,
                "slope cap exceeded: graph property lost");
        if (prev_f != 0.0 && y[0] * prev_f < 0.0) ++sign_changes;
        prev_f = y[0];
    };

    Dopri5<2>::Options oopt;
    oopt.rel_tol = opt.rel_tol;
    oopt.abs_tol = opt.abs_tol;
    double span = t_end - start.t;
    oopt.max_step = opt.max_step > 0.0 ? opt.max_step : std::clamp(span / 1024.0, 2.0, 64.0);

    Dopri5<2>::State y0{start.f, flux_from_slope(start.t, start.p, n)};
    Dopri5<2>::Output traj;
    try {
        traj = Dopri5<2>::integrate(rhs, start.t, y0, t_end, oopt, monitor);
    } catch (const LabError& e) {
        if (horizon > 0.0 && (e.code() == ErrorCode::point_outside_domain ||
                              e.code() == ErrorCode::domain_violation))
            fail(ErrorCode::horizon_collision, "trajectory crossed the horizon");
        throw;
    }

    RadialProfile prof;
    prof.dimension = n;
    prof.axis_height = start.f;
    prof.samples.reserve(traj.t.size());
    for (size_t i = 0; i < traj.t.size(); ++i) {
        ProfileState s;
        s.t = traj.t[i];
        s.f = traj.y[i][0];
        s.p = i == 0 ? start.p : slope_from_flux(s.t, traj.y[i][1], n);
        prof.samples.push_back(s);
    }
    prof.stats.steps = traj.stats.accepted;
    prof.stats.rejected_steps = traj.stats.rejected;
    prof.stats.max_error_ratio = traj.stats.max_error_ratio;
    prof.stats.height_sign_changes = sign_changes;
    prof.attach(std::move(traj), rhs_scalar);
    return prof;
}

/// Height drop of the flat-region solution between two radii:
/// integral of a / sqrt(s^{2n-4} - a^2).
inline double flat_region_drop(double a, double t0, double t1, int n) {
    if (a == 0.0) return 0.0;
    require(a > 0.0, ErrorCode::config_error, "flux magnitude a must be non-negative");
    double t_sing = std::pow(a, 1.0 / (n - 2));
    require(std::min(t0, t1) > t_sing, ErrorCode::singular_lower_limit,
            "radius at or below the closed-form singular radius a^{1/(n-2)}");
    auto integrand = [&](double s) {
        return a / std::sqrt(std::pow(s, 2 * n - 4) - a * a);
    };
    return integrate_adaptive(integrand, t0, t1, 1e-13);
}

/// Drop from t out to infinity (substitution u = 1/s removes the infinite
/// endpoint; the integrand is smooth in u).
inline double flat_region_drop_to_infinity(double a, double t, int n) {
    if (a == 0.0) return 0.0;
    double t_sing = std::pow(a, 1.0 / (n - 2));
    require(t > t_sing, ErrorCode::singular_lower_limit, "radius at or below the singular radius");
    auto integrand = [&](double u) {
        double um = std::pow(u, n - 4);
        return a * um / std::sqrt(1.0 - a * a * std::pow(u, 2 * n - 4));
    };
    return integrate_adaptive(integrand, 0.0, 1.0 / t, 1e-13);
}

/// Closed-form flat-region profile with conserved Q = -a, evaluated on a grid.
inline std::vector<ProfileState> flat_region_profile(double a, double t_ref, double f_ref,
                                                     std::span<const double> t_grid, int n) {
    require(!t_grid.empty(), ErrorCode::config_error, "empty sample grid");
    std::vector<ProfileState> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        ProfileState s;
        s.t = t;
        s.f = f_ref - flat_region_drop(a, t_ref, t, n);
        s.p = a == 0.0 ? 0.0
                       : -a / std::sqrt(std::pow(t, 2 * n - 4) - a * a);
        out.push_back(s);
    }
    return out;
}

/// I_n = integral over (1, infinity) of 1/sqrt(s^{2n-4} - 1). With s = 1/u
/// this is integral over (0,1) of u^{n-4}/sqrt(1-u^{2n-4}); the endpoint
/// square-root singularity at u = 1 is removed by u = 1 - v^2.
inline double tail_integral(int n, int order = 32) {
    require(n >= 4, ErrorCode::config_error, "tail integral finite only for n >= 4");
    auto w = [&](double u) {
        // 1 - u^{2n-4} evaluated without cancellation near u = 1.
        double one_minus = -std::expm1((2.0 * n - 4.0) * std::log1p(u - 1.0));
        return std::pow(u, n - 4) / std::sqrt(one_minus);
    };
    double inner = integrate_composite(w, 0.0, 0.5, 4, order);
    auto outer = [&](double v) { return 2.0 * v * w(1.0 - v * v); };
    double tail = integrate_composite(outer, 0.0, std::sqrt(0.5), 4, order);
    return inner + tail;
}

}  // namespace minsurf
