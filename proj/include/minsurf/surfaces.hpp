#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "minsurf/core.hpp"
#include "minsurf/metrics.hpp"
#include "minsurf/profile.hpp"
#include "minsurf/quadrature.hpp"

namespace minsurf {

/// Jet of the generating curve sigma -> (t, f) in the half plane {t >= 0}.
struct CurveJet {
    double t = 0.0, f = 0.0;
    double dt = 0.0, df = 0.0;
    double d2t = 0.0, d2f = 0.0;
};

/// Profile curve of an axisymmetric hypersurface in R^n. The surface normal
/// is the +90 degree rotation of the curve tangent, so parametrization
/// direction fixes the orientation.
class RevolutionCurve {
  public:
    virtual ~RevolutionCurve() = default;
    virtual CurveJet at(double sigma) const = 0;
    virtual double sigma_min() const = 0;
    virtual double sigma_max() const = 0;
};

/// Horizontal plane f = z over t in [t0, t1]; normal points up.
class PlaneCurve final : public RevolutionCurve {
  public:
    PlaneCurve(double z, double t0, double t1) : z_(z), t0_(t0), t1_(t1) {}
    CurveJet at(double s) const override { return {s, z_, 1.0, 0.0, 0.0, 0.0}; }
    double sigma_min() const override { return t0_; }
    double sigma_max() const override { return t1_; }

  private:
    double z_, t0_, t1_;
};

/// Sphere of radius rho centered at height c on the axis, parametrized by
/// the polar angle from the north pole; normal points outward.
class SphereCurve final : public RevolutionCurve {
  public:
    SphereCurve(double rho, double center_height, double sigma0 = 0.0, double sigma1 = M_PI)
        : rho_(rho), c_(center_height), s0_(sigma0), s1_(sigma1) {}
    CurveJet at(double s) const override {
        return {rho_ * std::sin(s),  c_ + rho_ * std::cos(s),
                rho_ * std::cos(s),  -rho_ * std::sin(s),
                -rho_ * std::sin(s), -rho_ * std::cos(s)};
    }
    double sigma_min() const override { return s0_; }
    double sigma_max() const override { return s1_; }
    double radius() const { return rho_; }

  private:
    double rho_, c_, s0_, s1_;
};

/// Solved radial graph as a curve (sigma = t); the profile's own ODE
/// supplies the second derivative.
class ProfileCurve final : public RevolutionCurve {
  public:
    ProfileCurve(const RadialProfile& prof, double t0, double t1)
        : prof_(&prof), t0_(std::max(t0, prof.t_min())), t1_(std::min(t1, prof.t_max())) {}
    CurveJet at(double s) const override {
        ProfileState st = prof_->at(s);
        return {st.t, st.f, 1.0, st.p, 0.0, prof_->curvature(s)};
    }
    double sigma_min() const override { return t0_; }
    double sigma_max() const override { return t1_; }

  private:
    const RadialProfile* prof_;
    double t0_, t1_;
};

/// Flat-metric catenoid-type surface with conserved flux a, both sheets,
/// parametrized by sigma = sign * sqrt(t - t_neck) which is smooth through
/// the neck. sigma > 0 is the upper sheet.
class CatenoidCurve final : public RevolutionCurve {
  public:
    CatenoidCurve(double a, int n, double f_neck, double t_outer)
        : a_(a), n_(n), f_neck_(f_neck), t_neck_(std::pow(a, 1.0 / (n - 2))),
          s_max_(std::sqrt(t_outer - t_neck_)) {}

    CurveJet at(double s) const override {
        CurveJet j;
        double t = t_neck_ + s * s;
        j.t = t;
        j.dt = 2.0 * s;
        j.d2t = 2.0;
        // f' wrt sigma is 2a/sqrt(Psi), Psi = (t^{2n-4} - a^2)/(t - t_neck).
        double psi = psi_at(t);
        double dpsi_dt = dpsi_at(t);
        j.df = 2.0 * a_ / std::sqrt(psi);
        j.d2f = -a_ * std::pow(psi, -1.5) * dpsi_dt * 2.0 * s;
        j.f = f_neck_ + height_offset(std::abs(s)) * (s >= 0.0 ? 1.0 : -1.0);
        return j;
    }
    double sigma_min() const override { return -s_max_; }
    double sigma_max() const override { return s_max_; }
    double neck_radius() const { return t_neck_; }

  private:
    // (t^{2n-4} - a^2)/(t - t_neck), series form near the neck.
    double psi_at(double t) const {
        double d = t - t_neck_;
        if (d > 1e-5 * std::max(1.0, t_neck_))
            return (std::pow(t, 2 * n_ - 4) - a_ * a_) / d;
        int m = 2 * n_ - 4;
        return m * std::pow(t_neck_, m - 1) + 0.5 * m * (m - 1) * std::pow(t_neck_, m - 2) * d +
               m * (m - 1) * (m - 2) * std::pow(t_neck_, m - 3) * d * d / 6.0;
    }
    double dpsi_at(double t) const {
        double d = t - t_neck_;
        int m = 2 * n_ - 4;
        if (d > 1e-4 * std::max(1.0, t_neck_))
            return (m * std::pow(t, m - 1) - psi_at(t)) / d;
        return 0.5 * m * (m - 1) * std::pow(t_neck_, m - 2) +
               m * (m - 1) * (m - 2) * std::pow(t_neck_, m - 3) * d / 3.0;
    }
    double height_offset(double s_abs) const {
        auto integrand = [&](double w) { return 2.0 * a_ / std::sqrt(psi_at(t_neck_ + w * w)); };
        return integrate_panel(integrand, 0.0, s_abs, 48);
    }

    double a_;
    int n_;
    double f_neck_, t_neck_, s_max_;
};

/// All pointwise geometric data of the revolution surface at one curve
/// point: euclidean and conformal normals, area densities, principal
/// curvatures, mean curvature and |h|^2, and the ambient Ricci along the
/// normal. Principal curvatures split into the profile direction and the
/// n-2 rotational directions.
struct SurfacePoint {
    double sigma = 0.0;
    CurveJet jet;
    Vec x;            // (t, 0, ..., 0, f)
    double speed = 0.0;
    double nu_t = 0.0, nu_f = 0.0;  // profile-plane components of nu_bar
    double area_bar = 0.0;          // dmu_bar / dsigma
    double omega = 1.0;
    double conf_weight = 1.0;       // omega^{(n-1)/2}
    double theta_nu = 0.0;          // normal derivative of log(omega)/2
    double kbar_prof = 0.0, kbar_rot = 0.0, hbar = 0.0, h2bar = 0.0;
    double k_prof = 0.0, k_rot = 0.0, h = 0.0, h2 = 0.0;
    double ubar = 0.0;              // gbar(e_n, nu_bar)
    double ric_nu = 0.0;            // Ric(nu, nu), nu g-unit

    Vec nu_bar() const {
        Vec v(x.dim);
        v[0] = nu_t;
        v[x.dim - 1] = nu_f;
        return v;
    }
};

inline SurfacePoint surface_point(const RevolutionCurve& curve, const ConformalMetric& metric,
                                  double sigma) {
    const int n = metric.dimension();
    SurfacePoint p;
    p.sigma = sigma;
    p.jet = curve.at(sigma);
    p.speed = std::hypot(p.jet.dt, p.jet.df);
    require(p.speed > 0.0, ErrorCode::domain_violation, "degenerate curve point");
    p.x = axis_point(n, p.jet.t, p.jet.f);

    p.nu_t = -p.jet.df / p.speed;
    p.nu_f = p.jet.dt / p.speed;
    p.ubar = p.nu_f;

    p.area_bar = (n - 1) * unit_ball_volume(n - 1) * std::pow(p.jet.t, n - 2) * p.speed;

    FactorJet w = metric.factor(p.x);
    p.omega = w.value;
    p.conf_weight = std::pow(w.value, 0.5 * (n - 1));
    double grad_dot_nu = w.grad[0] * p.nu_t + w.grad[n - 1] * p.nu_f;
    p.theta_nu = 0.5 * grad_dot_nu / w.value;

    p.kbar_prof = (p.jet.df * p.jet.d2t - p.jet.dt * p.jet.d2f) /
                  (p.speed * p.speed * p.speed);
    p.kbar_rot = p.nu_t / p.jet.t;
    p.hbar = p.kbar_prof + (n - 2) * p.kbar_rot;
    p.h2bar = sq(p.kbar_prof) + (n - 2) * sq(p.kbar_rot);

    double root = std::sqrt(w.value);
    p.k_prof = (p.kbar_prof + p.theta_nu) / root;
    p.k_rot = (p.kbar_rot + p.theta_nu) / root;
    p.h = p.k_prof + (n - 2) * p.k_rot;
    p.h2 = sq(p.k_prof) + (n - 2) * sq(p.k_rot);

    Vec nu(n);
    nu[0] = p.nu_t / root;
    nu[n - 1] = p.nu_f / root;
    p.ric_nu = metric.ricci_form(w, nu, nu);
    return p;
}

/// Cached composite Gauss-Legendre quadrature over a revolution surface.
class SurfaceQuadrature {
  public:
    SurfaceQuadrature(const RevolutionCurve& curve, const ConformalMetric& metric,
                      int panels = 64, int order = 16)
        : curve_(&curve), metric_(&metric) {
        const QuadratureRule& rule = gauss_legendre(order);
        double a = curve.sigma_min(), b = curve.sigma_max();
        require(b > a, ErrorCode::config_error, "empty curve range");
        double h = (b - a) / panels;
        nodes_.reserve(static_cast<size_t>(panels) * order);
        weights_.reserve(nodes_.capacity());
        for (int k = 0; k < panels; ++k) {
            double mid = a + (k + 0.5) * h, half = 0.5 * h;
            for (size_t i = 0; i < rule.nodes.size(); ++i) {
                double sigma = mid + half * rule.nodes[i];
                nodes_.push_back(surface_point(curve, metric, sigma));
                weights_.push_back(half * rule.weights[i]);
                double nlen = sq(nodes_.back().nu_t) + sq(nodes_.back().nu_f);
                require(std::abs(nlen - 1.0) < 1e-12, ErrorCode::domain_violation,
                        "normal failed to normalize");
            }
        }
    }

    const std::vector<SurfacePoint>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    const RevolutionCurve& curve() const { return *curve_; }
    const ConformalMetric& metric() const { return *metric_; }

    /// integral of F dmu_bar (euclidean area element)
    template <class F>
    double integrate_bar(F&& f) const {
        double s = 0.0;
        for (size_t i = 0; i < nodes_.size(); ++i)
            s += weights_[i] * nodes_[i].area_bar * f(nodes_[i]);
        return s;
    }

    /// integral of F dmu (area element of g)
    template <class F>
    double integrate_g(F&& f) const {
        double s = 0.0;
        for (size_t i = 0; i < nodes_.size(); ++i)
            s += weights_[i] * nodes_[i].area_bar * nodes_[i].conf_weight * f(nodes_[i]);
        return s;
    }

    double max_abs_mean_curvature() const {
        double m = 0.0;
        for (const auto& p : nodes_) m = std::max(m, std::abs(p.h));
        return m;
    }

  private:
    const RevolutionCurve* curve_;
    const ConformalMetric* metric_;
    std::vector<SurfacePoint> nodes_;
    std::vector<double> weights_;
};

/// Euclidean area of the surface portion inside the coordinate ball
/// B_radius(x0) with x0 = (0,...,0,center_height): locate the crossing
/// intervals of dist(sigma) = radius, then integrate panelwise.
class BallIntersector {
  public:
    BallIntersector(const RevolutionCurve& curve, const ConformalMetric& metric,
                    double center_height, int scan_points = 4096)
        : curve_(&curve), metric_(&metric), c_(center_height) {
        double a = curve.sigma_min(), b = curve.sigma_max();
        scan_sigma_.reserve(scan_points + 1);
        scan_dist_.reserve(scan_points + 1);
        for (int i = 0; i <= scan_points; ++i) {
            double s = a + (b - a) * i / scan_points;
            scan_sigma_.push_back(s);
            scan_dist_.push_back(dist(s));
        }
    }

    double dist(double sigma) const {
        CurveJet j = curve_->at(sigma);
        return std::hypot(j.t, j.f - c_);
    }

    double min_dist() const {
        double m = 1e300;
        for (double d : scan_dist_) m = std::min(m, d);
        return m;
    }

    /// sigma-intervals with dist < radius.
    std::vector<std::pair<double, double>> inside(double radius) const {
        std::vector<double> cuts;
        for (size_t i = 0; i + 1 < scan_sigma_.size(); ++i) {
            bool in0 = scan_dist_[i] < radius, in1 = scan_dist_[i + 1] < radius;
            if (in0 != in1) cuts.push_back(refine(scan_sigma_[i], scan_sigma_[i + 1], radius));
        }
        std::vector<std::pair<double, double>> intervals;
        bool in = scan_dist_.front() < radius;
        double start = scan_sigma_.front();
        size_t ci = 0;
        while (true) {
            if (in) {
                double end = ci < cuts.size() ? cuts[ci] : scan_sigma_.back();
                intervals.emplace_back(start, end);
            }
            if (ci >= cuts.size()) break;
            start = cuts[ci++];
            in = !in;
        }
        return intervals;
    }

    /// integral of F dmu_bar over {dist < radius}.
    template <class F>
    double integrate_inside_bar(double radius, F&& f, int order = 24) const {
        double s = 0.0;
        for (auto [a, b] : inside(radius)) s += integrate_piece(a, b, f, order);
        return s;
    }

    /// integral of F dmu_bar over {lo < dist < hi}.
    template <class F>
    double integrate_annulus_bar(double lo, double hi, F&& f, int order = 24) const {
        return integrate_inside_bar(hi, f, order) - integrate_inside_bar(lo, f, order);
    }

    double area_inside(double radius) const {
        return integrate_inside_bar(radius, [](const SurfacePoint&) { return 1.0; });
    }

  private:
    template <class F>
    double integrate_piece(double a, double b, F&& f, int order) const {
        if (b <= a) return 0.0;
        // Panel count grows with the sigma-extent so long pieces stay sharp.
        int panels = std::max(4, static_cast<int>((b - a) / (scan_sigma_.back() -
                                                            scan_sigma_.front()) *
                                                  64));
        const QuadratureRule& rule = gauss_legendre(order);
        double h = (b - a) / panels, total = 0.0;
        for (int k = 0; k < panels; ++k) {
            double mid = a + (k + 0.5) * h, half = 0.5 * h;
            for (size_t i = 0; i < rule.nodes.size(); ++i) {
                SurfacePoint p = surface_point(*curve_, *metric_, mid + half * rule.nodes[i]);
                total += half * rule.weights[i] * p.area_bar * f(p);
            }
        }
        return total;
    }

    double refine(double lo, double hi, double radius) const {
        double flo = dist(lo) - radius;
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            double fm = dist(mid) - radius;
            if (fm == 0.0) return mid;
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
            if (hi - lo < 1e-14 * std::max(1.0, std::abs(hi))) break;
        }
        return 0.5 * (lo + hi);
    }

    const RevolutionCurve* curve_;
    const ConformalMetric* metric_;
    double c_;
    std::vector<double> scan_sigma_;
    std::vector<double> scan_dist_;
};

}  // namespace minsurf
