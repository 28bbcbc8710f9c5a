#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "minsurf/core.hpp"
#include "minsurf/quadrature.hpp"

namespace minsurf {

/// Value, gradient and hessian of the conformal factor at a point.
struct FactorJet {
    double value = 1.0;
    Vec grad;
    Mat hess;
};

/// C^2 monotone step: 0 below 1/2, 1 above 1, quintic smoothstep between
/// (in the rescaled variable 2t-1).
struct StepCutoff {
    double eval(double t) const {
        if (t <= 0.5) return 0.0;
        if (t >= 1.0) return 1.0;
        double u = 2.0 * t - 1.0;
        return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    }
    double d1(double t) const {
        if (t <= 0.5 || t >= 1.0) return 0.0;
        double u = 2.0 * t - 1.0;
        return 2.0 * 30.0 * u * u * sq(1.0 - u);
    }
    double d2(double t) const {
        if (t <= 0.5 || t >= 1.0) return 0.0;
        double u = 2.0 * t - 1.0;
        return 4.0 * 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
    }
};

enum class MetricFamily {
    flat,
    schwarzschild_conformal,
    hat_localized,
    slab_interpolated,
    conformally_perturbed,
};

/// Externally supplied conformal perturbation field (already scaled by its
/// amplitude delta, so values are order one). Derivatives are taken by
/// finite differences with the given step.
struct PerturbationField {
    std::function<double(const Vec&)> eval;
    double fd_step = 1e-3;
    bool axisymmetric = false;
};

/// Conformally flat ambient metric g = omega * euclidean on a chart of R^n.
///
/// All curvature quantities follow from the factor jet: with
/// theta = log(omega)/2,
///   Ric_ij    = -(n-2)(theta_ij - theta_i theta_j)
///               - (lap theta + (n-2)|grad theta|^2) delta_ij,
///   R         = -(n-1) omega^{-2} (lap omega + (n-6)/4 |grad omega|^2/omega),
///   H(g)      = omega^{-1/2} (Hbar + (n-1)/2 * omega^{-1} D_nubar omega),
/// which reduce to the usual phi^{4/(n-2)} formulas when omega is such a
/// power of a harmonic phi.
class ConformalMetric {
  public:
    static ConformalMetric flat(int n) { return ConformalMetric(n, MetricFamily::flat); }

    static ConformalMetric schwarzschild(int n, double mass = 2.0) {
        ConformalMetric m(n, MetricFamily::schwarzschild_conformal);
        require(mass > 0.0, ErrorCode::config_error, "schwarzschild mass must be positive");
        m.mass_ = mass;
        m.horizon_radius_ = std::pow(0.5 * mass, 1.0 / (n - 2));
        return m;
    }

    static ConformalMetric hat_localized(int n) {
        return ConformalMetric(n, MetricFamily::hat_localized);
    }

    static ConformalMetric slab(int n, double delta, double tau_tilde) {
        ConformalMetric m(n, MetricFamily::slab_interpolated);
        require(delta > 0.0 && delta < 1.0, ErrorCode::config_error, "slab delta outside (0,1)");
        require(tau_tilde > 0.5 * (n - 2) && tau_tilde < n - 2.0, ErrorCode::config_error,
                "slab tau outside ((n-2)/2, n-2)");
        m.slab_delta_ = delta;
        m.slab_tau_ = tau_tilde;
        return m;
    }

    static ConformalMetric perturbed(const ConformalMetric& base, PerturbationField field,
                                     double t) {
        require(base.family_ != MetricFamily::conformally_perturbed, ErrorCode::config_error,
                "nested perturbations not supported");
        require(t > 0.0 && t < 1.0, ErrorCode::config_error, "perturbation t outside (0,1)");
        ConformalMetric m(base.dim_, MetricFamily::conformally_perturbed);
        m.base_ = std::make_shared<ConformalMetric>(base);
        m.field_ = std::make_shared<PerturbationField>(std::move(field));
        m.pert_t_ = t;
        return m;
    }

    int dimension() const { return dim_; }
    MetricFamily family() const { return family_; }
    double mass_parameter() const { return mass_; }
    double horizon_radius() const { return horizon_radius_; }
    double perturbation_t() const { return pert_t_; }
    const ConformalMetric& base() const { return *base_; }

    /// Decay rate metadata: omega - 1 = O(|x|^{-tau}).
    double decay_rate() const {
        switch (family_) {
            case MetricFamily::flat: return std::numeric_limits<double>::infinity();
            case MetricFamily::schwarzschild_conformal:
            case MetricFamily::hat_localized: return dim_ - 2.0;
            case MetricFamily::slab_interpolated: return slab_tau_;
            case MetricFamily::conformally_perturbed: return base_->decay_rate();
        }
        return 0.0;
    }

    bool has_horizon() const { return family_ == MetricFamily::schwarzschild_conformal; }

    bool contains(const Vec& x) const {
        if (family_ == MetricFamily::conformally_perturbed) return base_->contains(x);
        if (!has_horizon()) return true;
        return norm(x) >= horizon_radius_ - 1e-12;
    }

    /// Rotationally symmetric about e_n (all closed-form families are;
    /// perturbed metrics only if the field declares it).
    bool axisymmetric() const {
        if (family_ == MetricFamily::conformally_perturbed)
            return field_->axisymmetric && base_->axisymmetric();
        return true;
    }

    /// omega with first and second coordinate derivatives.
    FactorJet factor(const Vec& x) const {
        require(contains(x), ErrorCode::point_outside_domain,
                "factor requested inside the horizon");
        switch (family_) {
            case MetricFamily::flat: {
                FactorJet j;
                j.grad = Vec(dim_);
                j.hess = Mat(dim_);
                return j;
            }
            case MetricFamily::schwarzschild_conformal:
                return power_jet(schwarzschild_phi(x), 4.0 / (dim_ - 2));
            case MetricFamily::hat_localized:
                return power_jet(hat_phi(x), 4.0 / (dim_ - 2));
            case MetricFamily::slab_interpolated: return slab_factor(x);
            case MetricFamily::conformally_perturbed: return perturbed_factor(x);
        }
        return {};
    }

    double factor_value(const Vec& x) const {
        // Cheaper than the full jet for quadrature-heavy paths.
        require(contains(x), ErrorCode::point_outside_domain,
                "factor requested inside the horizon");
        switch (family_) {
            case MetricFamily::flat: return 1.0;
            case MetricFamily::schwarzschild_conformal:
                return std::pow(schwarzschild_phi(x).value, 4.0 / (dim_ - 2));
            case MetricFamily::hat_localized:
                return std::pow(hat_phi(x).value, 4.0 / (dim_ - 2));
            case MetricFamily::slab_interpolated: return slab_factor_value(x);
            case MetricFamily::conformally_perturbed:
                return std::pow(1.0 + pert_t_ * field_->eval(x), 4.0 / (dim_ - 2)) *
                       base_->factor_value(x);
        }
        return 1.0;
    }

    /// Scalar curvature of g. Conformal-Laplacian route for perturbed
    /// metrics, direct conformal-change formula otherwise.
    double scalar_curvature(const Vec& x) const {
        if (family_ == MetricFamily::conformally_perturbed) {
            // g_t = u^{4/(n-2)} g_base with u = 1 + t*field:
            // R(g_t) = u^{-(n+2)/(n-2)} (-(4(n-1)/(n-2)) lap_g u + R(g_base) u).
            FactorJet u = field_jet(x);
            u.value = 1.0 + pert_t_ * u.value;
            u.grad *= pert_t_;
            for (int i = 0; i < dim_; ++i)
                for (int j = 0; j < dim_; ++j) u.hess(i, j) *= pert_t_;
            double lap_u = base_->laplace_beltrami(x, u);
            double r_base = base_->scalar_curvature(x);
            double c = 4.0 * (dim_ - 1) / (dim_ - 2);
            return std::pow(u.value, -(dim_ + 2.0) / (dim_ - 2.0)) * (-c * lap_u + r_base * u.value);
        }
        FactorJet w = factor(x);
        double lap = w.hess.trace();
        double g2 = dot(w.grad, w.grad);
        return -(dim_ - 1.0) / sq(w.value) * (lap + 0.25 * (dim_ - 6.0) * g2 / w.value);
    }

    /// Ricci curvature of g evaluated on a g-unit vector.
    double ricci_normal(const Vec& x, const Vec& nu) const {
        FactorJet w = factor(x);
        double len2 = w.value * dot(nu, nu);
        require(std::abs(len2 - 1.0) < 2e-10, ErrorCode::non_unit_normal,
                "vector is not g-unit");
        return ricci_form(w, nu, nu);
    }

    /// Ric(u, v) for coordinate vectors u, v (no normalization applied).
    double ricci_form(const FactorJet& w, const Vec& u, const Vec& v) const {
        const int n = dim_;
        Vec th(n);
        for (int i = 0; i < n; ++i) th[i] = w.grad[i] / (2.0 * w.value);
        double lap_th = 0.0, th2 = dot(th, th);
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double th_ij = w.hess(i, j) / (2.0 * w.value) -
                               w.grad[i] * w.grad[j] / (2.0 * sq(w.value));
                if (i == j) lap_th += th_ij;
                s += -(n - 2.0) * (th_ij - th[i] * th[j]) * u[i] * v[j];
            }
        }
        s -= (lap_th + (n - 2.0) * th2) * dot(u, v);
        return s;
    }

    /// Conformal transformation of the mean curvature: given the euclidean
    /// mean curvature and euclidean unit normal of a hypersurface, the mean
    /// curvature in g.
    double mean_curvature_from_euclidean(const Vec& x, double h_bar, const Vec& nu_bar) const {
        FactorJet w = factor(x);
        double dn = dot(w.grad, nu_bar);
        return (h_bar + 0.5 * (dim_ - 1) * dn / w.value) / std::sqrt(w.value);
    }

    /// Laplace-Beltrami of a scalar with known euclidean jet:
    /// lap_g v = omega^{-1} (lap v + (n-2)/2 omega^{-1} <grad omega, grad v>).
    double laplace_beltrami(const Vec& x, const FactorJet& v) const {
        FactorJet w = factor(x);
        return (v.hess.trace() + 0.5 * (dim_ - 2) * dot(w.grad, v.grad) / w.value) / w.value;
    }

    /// Christoffel contraction Gamma(u,v)^k of g (conformally flat closed
    /// form); used for second-order geodesic expansions.
    Vec christoffel(const Vec& x, const Vec& u, const Vec& v) const {
        FactorJet w = factor(x);
        Vec th(dim_);
        for (int i = 0; i < dim_; ++i) th[i] = w.grad[i] / (2.0 * w.value);
        Vec r(dim_);
        double tu = dot(th, u), tv = dot(th, v), uv = dot(u, v);
        for (int k = 0; k < dim_; ++k) r[k] = tu * v[k] + tv * u[k] - uv * th[k];
        return r;
    }

    /// Length of the straight coordinate segment from q to x in g. Exact
    /// geodesic distance on radial rays of fully radial factors; an upper
    /// bound for the geodesic distance in general.
    double ray_distance(const Vec& q, const Vec& x) const {
        Vec d = x;
        d -= q;
        double len = norm(d);
        if (len == 0.0) return 0.0;
        auto integrand = [&](double s) {
            Vec p = q;
            for (int i = 0; i < dim_; ++i) p[i] += s * d[i];
            return std::sqrt(factor_value(p));
        };
        return len * integrate_panel(integrand, 0.0, 1.0, 48);
    }

    /// Factor jet restricted to the half-plane point (t, 0, ..., 0, xn):
    /// value, (d_t, d_xn) gradient and (tt, t xn, xn xn) hessian entries.
    struct AxisymJet {
        double value;
        double wt, wn;
        double wtt, wtn, wnn;
    };

    AxisymJet axisym_jet(double t, double xn) const {
        FactorJet j = factor(axis_point(dim_, t, xn));
        AxisymJet a;
        a.value = j.value;
        a.wt = j.grad[0];
        a.wn = j.grad[dim_ - 1];
        a.wtt = j.hess(0, 0);
        a.wtn = j.hess(0, dim_ - 1);
        a.wnn = j.hess(dim_ - 1, dim_ - 1);
        return a;
    }

    const StepCutoff& cutoff() const { return cutoff_; }
    double slab_delta() const { return slab_delta_; }
    double slab_tau() const { return slab_tau_; }

  private:
    ConformalMetric(int n, MetricFamily f) : dim_(n), family_(f) {
        require(n >= kMinDim && n <= kMaxDim, ErrorCode::config_error,
                "dimension outside [3,7]");
    }

    struct ScalarJet {
        double value;
        Vec grad;
        Mat hess;
    };

    // phi = 1 + (m/2) |x|^{2-n}.
    ScalarJet schwarzschild_phi(const Vec& x) const {
        return radial_power_field(x, 0.5 * mass_, 2.0 - dim_);
    }

    // phi = 1 + (1 + |x|^{2n-4})^{-1/2}.
    ScalarJet hat_phi(const Vec& x) const {
        const int n = dim_;
        double rho2 = dot(x, x);
        ScalarJet s;
        s.grad = Vec(n);
        s.hess = Mat(n);
        // s-field: |x|^{2n-4} = (rho^2)^{n-2}.
        double sp = std::pow(rho2, n - 2);  // rho^{2n-4}
        double spd = rho2 > 0.0 ? (n - 2.0) * std::pow(rho2, n - 3) : (n == 3 ? 1.0 : 0.0);
        double spdd = (n - 2.0) * (n - 3.0) * (rho2 > 0.0 ? std::pow(rho2, n - 4) : (n == 4 ? 1.0 : 0.0));
        // d_i rho2 = 2 x_i ; d_i d_j rho2 = 2 delta_ij.
        double f = std::pow(1.0 + sp, -0.5);
        double fp = -0.5 * std::pow(1.0 + sp, -1.5);
        double fpp = 0.75 * std::pow(1.0 + sp, -2.5);
        s.value = 1.0 + f;
        for (int i = 0; i < n; ++i) s.grad[i] = fp * spd * 2.0 * x[i];
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double d2sp = spdd * 4.0 * x[i] * x[j] + spd * 2.0 * (i == j ? 1.0 : 0.0);
                s.hess(i, j) = fpp * sq(spd) * 4.0 * x[i] * x[j] + fp * d2sp;
            }
        }
        return s;
    }

    // field = 1 + c |x|^p with its jet.
    ScalarJet radial_power_field(const Vec& x, double c, double p) const {
        const int n = dim_;
        double rho = norm(x);
        ScalarJet s;
        s.grad = Vec(n);
        s.hess = Mat(n);
        double rp = std::pow(rho, p);
        s.value = 1.0 + c * rp;
        double d1 = c * p * std::pow(rho, p - 2.0);        // coefficient of x_i
        double d2 = c * p * (p - 2.0) * std::pow(rho, p - 4.0);
        for (int i = 0; i < n; ++i) s.grad[i] = d1 * x[i];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                s.hess(i, j) = d2 * x[i] * x[j] + (i == j ? d1 : 0.0);
        return s;
    }

    // omega = phi^q from a phi jet.
    FactorJet power_jet(const ScalarJet& phi, double q) const {
        const int n = dim_;
        FactorJet w;
        w.grad = Vec(n);
        w.hess = Mat(n);
        double pq = std::pow(phi.value, q);
        double pq1 = q * std::pow(phi.value, q - 1.0);
        double pq2 = q * (q - 1.0) * std::pow(phi.value, q - 2.0);
        w.value = pq;
        for (int i = 0; i < n; ++i) w.grad[i] = pq1 * phi.grad[i];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                w.hess(i, j) = pq2 * phi.grad[i] * phi.grad[j] + pq1 * phi.hess(i, j);
        return w;
    }

    double slab_factor_value(const Vec& x) const {
        const int n = dim_;
        double xn = x[n - 1];
        double y2 = dot(x, x) - sq(xn);
        double wgt = std::sqrt(1.0 + y2);
        double arg = xn / wgt;
        double eta = cutoff_.eval(arg);
        if (eta == 0.0) return 1.0;
        double b = std::pow(1.0 + slab_delta_ * dot(x, x), -0.5 * slab_tau_);
        return 1.0 - (1.0 - slab_delta_) * eta * b;
    }

    FactorJet slab_factor(const Vec& x) const {
        const int n = dim_;
        FactorJet w;
        w.grad = Vec(n);
        w.hess = Mat(n);

        double xn = x[n - 1];
        double rho2 = dot(x, x);
        double y2 = rho2 - sq(xn);
        double wg = std::sqrt(1.0 + y2);  // sqrt(1+|y|^2)

        // a = xn / wg and its jet. Horizontal indices i<n-1 carry y_i.
        double a = xn / wg;
        Vec ag(n);
        Mat ah(n);
        double w3 = wg * wg * wg, w5 = w3 * wg * wg;
        for (int i = 0; i < n - 1; ++i) ag[i] = -xn * x[i] / w3;
        ag[n - 1] = 1.0 / wg;
        for (int i = 0; i < n - 1; ++i) {
            for (int j = 0; j < n - 1; ++j)
                ah(i, j) = -xn * ((i == j ? 1.0 : 0.0) / w3 - 3.0 * x[i] * x[j] / w5);
            ah(i, n - 1) = ah(n - 1, i) = -x[i] / w3;
        }
        ah(n - 1, n - 1) = 0.0;

        double eta = cutoff_.eval(a);
        double eta1 = cutoff_.d1(a);
        double eta2 = cutoff_.d2(a);

        // b = (1 + delta rho^2)^{-tau/2} and its jet.
        double base = 1.0 + slab_delta_ * rho2;
        double b = std::pow(base, -0.5 * slab_tau_);
        double bc = -slab_tau_ * slab_delta_ * std::pow(base, -0.5 * slab_tau_ - 1.0);
        double bcc = slab_tau_ * (slab_tau_ + 2.0) * sq(slab_delta_) *
                     std::pow(base, -0.5 * slab_tau_ - 2.0);
        Vec bg(n);
        Mat bh(n);
        for (int i = 0; i < n; ++i) bg[i] = bc * x[i];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                bh(i, j) = bcc * x[i] * x[j] + (i == j ? bc : 0.0);

        double c = 1.0 - slab_delta_;
        w.value = 1.0 - c * eta * b;
        for (int i = 0; i < n; ++i) w.grad[i] = -c * (eta1 * ag[i] * b + eta * bg[i]);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                w.hess(i, j) = -c * (eta2 * ag[i] * ag[j] * b + eta1 * ah(i, j) * b +
                                     eta1 * ag[i] * bg[j] + eta1 * ag[j] * bg[i] + eta * bh(i, j));
            }
        }
        return w;
    }

    /// Jet of the scaled field delta*v by 4th-order central differences.
    FactorJet field_jet(const Vec& x) const {
        const int n = dim_;
        const double h = field_->fd_step;
        const auto& F = field_->eval;
        FactorJet j;
        j.grad = Vec(n);
        j.hess = Mat(n);
        j.value = F(x);
        auto at = [&](int i, double di, int k, double dk) {
            Vec p = x;
            p[i] += di;
            p[k] += dk;
            return F(p);
        };
        for (int i = 0; i < n; ++i) {
            double fp1 = at(i, h, i, 0), fm1 = at(i, -h, i, 0);
            double fp2 = at(i, 2 * h, i, 0), fm2 = at(i, -2 * h, i, 0);
            j.grad[i] = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
            j.hess(i, i) = (-fp2 + 16.0 * fp1 - 30.0 * j.value + 16.0 * fm1 - fm2) / (12.0 * h * h);
        }
        for (int i = 0; i < n; ++i) {
            for (int k = i + 1; k < n; ++k) {
                double v = (at(i, h, k, h) - at(i, h, k, -h) - at(i, -h, k, h) +
                            at(i, -h, k, -h)) /
                           (4.0 * h * h);
                j.hess(i, k) = j.hess(k, i) = v;
            }
        }
        return j;
    }

    FactorJet perturbed_factor(const Vec& x) const {
        const int n = dim_;
        const double q = 4.0 / (n - 2);
        FactorJet f = field_jet(x);
        // u = 1 + t * field.
        double u = 1.0 + pert_t_ * f.value;
        require(u > 0.0, ErrorCode::positivity_violation, "1 + t*delta*v must stay positive");
        FactorJet wb = base_->factor(x);
        double A = std::pow(u, q);
        double A1 = q * std::pow(u, q - 1.0) * pert_t_;
        double A2 = q * (q - 1.0) * std::pow(u, q - 2.0) * sq(pert_t_);
        FactorJet w;
        w.grad = Vec(n);
        w.hess = Mat(n);
        w.value = A * wb.value;
        for (int i = 0; i < n; ++i) w.grad[i] = A1 * f.grad[i] * wb.value + A * wb.grad[i];
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double Aij = A2 * f.grad[i] * f.grad[j] + A1 * f.hess(i, j);
                w.hess(i, j) = Aij * wb.value + A1 * f.grad[i] * wb.grad[j] +
                               A1 * f.grad[j] * wb.grad[i] + A * wb.hess(i, j);
            }
        }
        return w;
    }

    int dim_;
    MetricFamily family_;
    double mass_ = 0.0;
    double horizon_radius_ = 0.0;
    double slab_delta_ = 0.0;
    double slab_tau_ = 0.0;
    double pert_t_ = 0.0;
    StepCutoff cutoff_;
    std::shared_ptr<const ConformalMetric> base_;
    std::shared_ptr<const PerturbationField> field_;
};

}  // namespace minsurf
