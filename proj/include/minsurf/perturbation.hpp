#pragma once

#include <memory>
#include <random>
#include <vector>

#include "minsurf/core.hpp"
#include "minsurf/metrics.hpp"
#include "minsurf/report.hpp"

namespace minsurf {

/// Radial bump profile: the exponential -(e^{lambda(6r-s)} - 1) on
/// [r/2, 6r], capped to a constant below r/2 and joined to zero at 6r,
/// both through quintic-smoothstep blends of width 0.05 r. Negative on
/// [0, 6r), identically zero beyond, and superharmonic on the annulus
/// r < s < 6r away from the outer join band.
class BumpProfile {
  public:
    BumpProfile(double r, double lambda)
        : r_(r), lambda_(lambda), width_(0.05 * r), core_(0.5 * r) {}

    double operator()(double s) const {
        if (s >= 6.0 * r_) return 0.0;
        double base;
        if (s <= core_ - width_) {
            base = raw(core_);
        } else if (s < core_ + width_) {
            double mu = step_.eval(0.5 + 0.5 * (s - core_) / width_);
            base = (1.0 - mu) * raw(core_) + mu * raw(s);
        } else {
            base = raw(s);
        }
        double join_lo = 6.0 * r_ - width_;
        if (s > join_lo) base *= 1.0 - step_.eval(0.5 + 0.5 * (s - join_lo) / width_ - 0.0);
        return base;
    }

    double radius() const { return r_; }
    double lambda() const { return lambda_; }
    double join_width() const { return width_; }

    /// Closed-form laplacian of the raw exponential in flat space:
    /// e^{lambda(6r-s)} lambda (-lambda + (n-1)/s).
    double flat_laplacian_raw(double s, int n) const {
        return std::exp(lambda_ * (6.0 * r_ - s)) * lambda_ * (-lambda_ + (n - 1.0) / s);
    }

  private:
    double raw(double s) const { return -std::expm1(lambda_ * (6.0 * r_ - s)); }

    double r_, lambda_, width_, core_;
    StepCutoff step_;
};

/// Superharmonic bump field v(x) = psi(dist_g(x, q)) with the straight-ray
/// conformal distance standing in for dist_g.
struct BumpField {
    Vec center;
    BumpProfile profile;
    ConformalMetric metric;
    double min_laplacian_margin = 0.0;  // measured |sup of Delta_g v| margin

    double operator()(const Vec& x) const {
        return profile(metric.ray_distance(center, x));
    }

    double dist(const Vec& x) const { return metric.ray_distance(center, x); }
};

namespace detail {

/// Deterministic spread of unit directions (fixed-seed gaussian draws).
inline std::vector<Vec> sample_directions(int n, int count, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Vec> dirs;
    dirs.reserve(count);
    while (static_cast<int>(dirs.size()) < count) {
        Vec d(n);
        for (int i = 0; i < n; ++i) d[i] = gauss(rng);
        double len = norm(d);
        if (len < 1e-6) continue;
        d *= 1.0 / len;
        dirs.push_back(d);
    }
    return dirs;
}

/// Laplace-Beltrami of a scalar field by central differences feeding the
/// conformal laplacian formula.
template <class Field>
double fd_laplace_beltrami(const ConformalMetric& metric, const Field& field, const Vec& x,
                           double h) {
    const int n = metric.dimension();
    FactorJet vj;
    vj.grad = Vec(n);
    vj.hess = Mat(n);
    vj.value = field(x);
    for (int i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        double fp = field(xp), fm = field(xm);
        vj.grad[i] = (fp - fm) / (2.0 * h);
        vj.hess(i, i) = (fp - 2.0 * vj.value + fm) / (h * h);
    }
    // Mixed entries drop out of the trace; the conformal correction only
    // needs the gradient.
    return metric.laplace_beltrami(x, vj);
}

}  // namespace detail

/// Construct a bump field and verify its sign pattern on a radial-angular
/// grid: v = 0 outside the 6r ball, v < 0 inside, Delta_g v < 0 on the
/// annulus r < dist < 6r away from the join bands.
inline BumpField make_bump(const ConformalMetric& metric, const Vec& q, double r, double lambda,
                           int radial_samples = 64, int angular_samples = 32) {
    const int n = metric.dimension();
    require(lambda > 2.0 * (n - 1) / r, ErrorCode::steepness_too_low,
            "steepness must exceed 2(n-1)/r");
    if (metric.has_horizon())
        require(norm(q) - 6.0 * r > metric.horizon_radius() + 0.1 * r,
                ErrorCode::domain_violation, "6r ball reaches the horizon");

    BumpField field{q, BumpProfile(r, lambda), metric, 0.0};
    const double w = field.profile.join_width();
    const double h_fd = 0.05 / lambda;

    auto dirs = detail::sample_directions(n, angular_samples, 0x5eed5eed);
    double worst_lap = -1e300;
    double worst_v = -1e300;
    for (int i = 0; i < radial_samples; ++i) {
        double s = r + (6.0 * r - w * 1.5 - r) * (i + 0.5) / radial_samples;
        for (const Vec& dir : dirs) {
            Vec x = q;
            for (int k = 0; k < n; ++k) x[k] += s * dir[k];
            // place by conformal distance: step the ray until dist matches
            double d = field.dist(x);
            Vec x2 = q;
            for (int k = 0; k < n; ++k) x2[k] += s * (s / d) * dir[k];
            double dist2 = field.dist(x2);
            if (dist2 > 6.0 * r - 1.6 * w || dist2 < r) continue;
            double lap = detail::fd_laplace_beltrami(metric, field, x2, h_fd);
            worst_lap = std::max(worst_lap, lap);
            worst_v = std::max(worst_v, field(x2));
        }
    }
    require(worst_lap < 0.0, ErrorCode::steepness_too_low,
            "grid check of Delta_g v < 0 failed on the annulus");
    require(worst_v < 0.0, ErrorCode::sign_check_failed, "v failed to stay negative");
    field.min_laplacian_margin = -worst_lap;
    return field;
}

/// Chain of bumps with recursively grown coefficients: each coefficient
/// compensates the positive laplacian of the previous bump's core with the
/// strictly negative laplacian of the current bump's 3r..5r annulus.
struct BumpChain {
    std::vector<BumpField> bumps;
    std::vector<double> coefficients;
    double min_value = 0.0;  // grid minimum of the combined field

    double operator()(const Vec& x) const {
        double v = 0.0;
        for (size_t i = 0; i < bumps.size(); ++i) v += coefficients[i] * bumps[i](x);
        return v;
    }

    double radius() const { return bumps.front().profile.radius(); }

    bool inside_support(const Vec& x) const {
        for (const auto& b : bumps)
            if (b.dist(x) < 6.0 * b.profile.radius()) return true;
        return false;
    }

    bool centers_on_axis(int n) const {
        for (const auto& b : bumps)
            for (int i = 0; i + 1 < n; ++i)
                if (std::abs(b.center[i]) > 1e-12) return false;
        return true;
    }
};

inline BumpChain chain_coefficients(const ConformalMetric& metric,
                                    std::vector<BumpField> bumps, double margin_factor = 1.1,
                                    int radial_samples = 64, int angular_samples = 32) {
    require(!bumps.empty(), ErrorCode::config_error, "empty bump list");
    const int n = metric.dimension();
    const double r = bumps.front().profile.radius();
    for (const auto& b : bumps)
        require(std::abs(b.profile.radius() - r) < 1e-12 * r, ErrorCode::config_error,
                "chain bumps must share one radius");

    // Overlap geometry: the r-ball of q_i must sit inside the 3r..5r
    // annulus of q_{i+1}, forcing consecutive distances to 4r.
    for (size_t i = 0; i + 1 < bumps.size(); ++i) {
        double d = metric.ray_distance(bumps[i].center, bumps[i + 1].center);
        require(d - r >= 3.0 * r - 0.02 * r && d + r <= 5.0 * r + 0.02 * r,
                ErrorCode::overlap_violation,
                "consecutive centers must be 4r apart (in g)");
    }

    auto dirs = detail::sample_directions(n, angular_samples, 0xc0ffee);
    const double h_fd = 0.05 / bumps.front().profile.lambda();
    const double w = bumps.front().profile.join_width();

    // Radii sampled in the r-ball: uniform coverage plus a dense band
    // around the cap blend, where the positive laplacian peaks.
    std::vector<double> ball_radii;
    for (int i = 0; i < radial_samples; ++i) ball_radii.push_back(r * (i + 0.5) / radial_samples);
    for (int i = 0; i < 32; ++i)
        ball_radii.push_back(0.5 * r - w + 2.0 * w * (i + 0.5) / 32.0);

    // Per ball point, the compensating bump's laplacian magnitude varies by
    // e^{2 lambda r} across the 3r..5r annulus, so the coefficient uses the
    // pointwise ratio sup rather than the quotient of global sup and inf.
    BumpChain chain;
    chain.coefficients.assign(bumps.size(), 1.0);
    for (size_t i = 1; i < bumps.size(); ++i) {
        double ratio_sup = 0.0;
        for (double s : ball_radii) {
            for (const Vec& dir : dirs) {
                Vec x = bumps[i - 1].center;
                for (int k = 0; k < n; ++k) x[k] += s * dir[k];
                double lap_prev = detail::fd_laplace_beltrami(metric, bumps[i - 1], x, h_fd);
                if (lap_prev <= 0.0) continue;
                double lap_cur = detail::fd_laplace_beltrami(metric, bumps[i], x, h_fd);
                require(lap_cur < 0.0, ErrorCode::sign_check_failed,
                        "compensating bump is not superharmonic over the previous core");
                ratio_sup = std::max(ratio_sup, lap_prev / std::abs(lap_cur));
            }
        }
        chain.coefficients[i] = 1.0 + margin_factor * ratio_sup * chain.coefficients[i - 1];
    }
    chain.bumps = std::move(bumps);

    // Combined-field sign check on all annuli and balls except the last
    // bump's r-ball, skipping the outer join bands.
    double worst = -1e300;
    double min_v = 1e300;
    const Vec& q_last = chain.bumps.back().center;
    for (const auto& b : chain.bumps) {
        double w = b.profile.join_width();
        for (int i = 0; i < radial_samples; ++i) {
            double s = (6.0 * r - 1.6 * w) * (i + 0.5) / radial_samples;
            for (const Vec& dir : dirs) {
                Vec x = b.center;
                for (int k = 0; k < n; ++k) x[k] += s * dir[k];
                min_v = std::min(min_v, chain(x));
                if (metric.ray_distance(q_last, x) <= r) continue;
                bool in_join = false;
                for (const auto& other : chain.bumps) {
                    double d = other.dist(x);
                    if (d > 6.0 * r - 1.6 * w && d < 6.0 * r + 0.6 * w) in_join = true;
                }
                if (in_join) continue;
                worst = std::max(worst,
                                 detail::fd_laplace_beltrami(metric, chain, x, h_fd));
            }
        }
    }
    require(worst < 0.0, ErrorCode::sign_check_failed,
            "combined field is not superharmonic away from the last core");
    chain.min_value = min_v;
    return chain;
}

/// A perturbation amplitude keeping 1 + t delta v well above zero.
inline double default_chain_delta(const BumpChain& chain) {
    return 0.5 / std::abs(chain.min_value);
}

/// Center on the axis above q at the requested g-distance (bisection on the
/// height offset; the ray distance grows monotonically with it).
inline Vec place_center_above(const ConformalMetric& metric, const Vec& q, double target) {
    double lo = 0.0, hi = 2.0 * target + 1.0;
    const int n = metric.dimension();
    auto at = [&](double off) {
        Vec p = q;
        p[n - 1] += off;
        return p;
    };
    while (metric.ray_distance(q, at(hi)) < target) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (metric.ray_distance(q, at(mid)) < target ? lo : hi) = mid;
        if (hi - lo < 1e-14 * std::max(1.0, hi)) break;
    }
    return at(0.5 * (lo + hi));
}

inline ConformalMetric perturbed_metric(const ConformalMetric& base, const BumpChain& chain,
                                        double t, double delta) {
    PerturbationField field;
    field.eval = [chain, delta](const Vec& x) { return delta * chain(x); };
    field.fd_step = 0.05 / chain.bumps.front().profile.lambda();
    field.axisymmetric = chain.centers_on_axis(base.dimension());
    return ConformalMetric::perturbed(base, std::move(field), t);
}

/// Sign checks of the conformally perturbed metric family:
///   g_t = g outside the support, g_t < g inside, R(g_t) > 0 away from the
///   last core, and first-order linearity of the factor in t.
inline std::vector<CheckReport> verify_perturbed_metric(const ConformalMetric& base,
                                                        const BumpChain& chain, double t,
                                                        double delta,
                                                        int radial_samples = 24,
                                                        int angular_samples = 16) {
    require(t > 0.0 && t < 1.0, ErrorCode::config_error, "t must lie in (0,1)");
    require(1.0 + t * delta * chain.min_value > 0.0, ErrorCode::positivity_violation,
            "1 + t delta v must stay positive");
    const int n = base.dimension();
    const double r = chain.radius();
    ConformalMetric g_t = perturbed_metric(base, chain, t, delta);
    ConformalMetric g_half = perturbed_metric(base, chain, 0.5 * t, delta);

    auto dirs = detail::sample_directions(n, angular_samples, 0xabcdef);
    std::vector<CheckReport> out;

    {  // identity outside the union of supports
        double worst = 0.0;
        for (const auto& b : chain.bumps) {
            for (const Vec& dir : dirs) {
                Vec x = b.center;
                for (int k = 0; k < n; ++k) x[k] += 6.5 * r * dir[k];
                if (chain.inside_support(x)) continue;
                worst = std::max(worst,
                                 std::abs(g_t.factor_value(x) - base.factor_value(x)));
            }
        }
        out.push_back(CheckReport::make("perturbation.outside_identity",
                                        "perturbed-metric-support", worst, 0.0));
    }

    double worst_order = -1e300;   // factor ratio must drop below one inside
    double worst_scalar = 1e300;   // R(g_t) on the checked region
    double scalar_scale = 0.0;     // curvature magnitude, sets the roundoff floor
    double worst_linearity = 0.0;  // |ratio(t)/ratio(t/2) - 2|
    const Vec& q_last = chain.bumps.back().center;
    for (const auto& b : chain.bumps) {
        double w = b.profile.join_width();
        for (int i = 0; i < radial_samples; ++i) {
            double s = (6.0 * r - 1.6 * w) * (i + 0.5) / radial_samples;
            for (const Vec& dir : dirs) {
                Vec x = b.center;
                for (int k = 0; k < n; ++k) x[k] += s * dir[k];
                double ratio_t = g_t.factor_value(x) / base.factor_value(x);
                worst_order = std::max(worst_order, ratio_t - 1.0);
                double dev_t = std::abs(ratio_t - 1.0);
                double dev_h = std::abs(g_half.factor_value(x) / base.factor_value(x) - 1.0);
                if (dev_t > 1e-12)
                    worst_linearity = std::max(worst_linearity, std::abs(dev_t / dev_h - 2.0));
                if (base.ray_distance(q_last, x) <= r) continue;
                bool in_join = false;
                for (const auto& other : chain.bumps) {
                    double d = other.dist(x);
                    if (d > 6.0 * r - 1.6 * w && d < 6.0 * r + 0.6 * w) in_join = true;
                }
                if (in_join) continue;
                double rr = g_t.scalar_curvature(x);
                worst_scalar = std::min(worst_scalar, rr);
                scalar_scale = std::max(scalar_scale, std::abs(rr));
            }
        }
    }
    out.push_back(CheckReport::make("perturbation.metric_decrease", "perturbed-metric-order",
                                    worst_order, 0.0));
    CheckReport scal = CheckReport::make("perturbation.scalar_positivity",
                                         "perturbed-scalar-sign", -worst_scalar,
                                         1e-10 * (1.0 + scalar_scale));
    scal.details["min_scalar"] = worst_scalar;
    out.push_back(scal);
    out.push_back(CheckReport::make("perturbation.linearity", "perturbed-first-order",
                                    worst_linearity, 0.05));
    return out;
}

}  // namespace minsurf
