#pragma once

#include "minsurf/analysis.hpp"
#include "minsurf/surfaces.hpp"

namespace minsurf {

/// Surface flowed by the normal variation U = s u + s^2 v / 2 along the
/// geodesic normal exponential, expanded to second order:
///   X_s = x + U nu - (s u)^2 Gamma(nu, nu) / 2 + O(s^3).
/// Curve derivatives come from five-point differences in sigma; the area
/// integrand only consumes first derivatives, and the stencil bias is
/// smooth in s, so it cancels from second differences in s.
class FlowedCurve final : public RevolutionCurve {
  public:
    FlowedCurve(const RevolutionCurve& base, const ConformalMetric& metric,
                const TestFunction& u, const TestFunction& v, double s)
        : base_(&base), metric_(&metric), u_(&u), v_(&v), s_(s) {
        h_ = 1e-4 * (base.sigma_max() - base.sigma_min());
    }

    CurveJet at(double sigma) const override {
        double lo = base_->sigma_min(), hi = base_->sigma_max();
        double sc = std::clamp(sigma, lo + 2.0 * h_, hi - 2.0 * h_);
        auto [t0, f0] = position(sc);
        auto [tp1, fp1] = position(sc + h_);
        auto [tm1, fm1] = position(sc - h_);
        auto [tp2, fp2] = position(sc + 2 * h_);
        auto [tm2, fm2] = position(sc - 2 * h_);
        CurveJet j;
        j.t = t0;
        j.f = f0;
        j.dt = (-tp2 + 8 * tp1 - 8 * tm1 + tm2) / (12 * h_);
        j.df = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h_);
        j.d2t = (-tp2 + 16 * tp1 - 30 * t0 + 16 * tm1 - tm2) / (12 * h_ * h_);
        j.d2f = (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h_ * h_);
        return j;
    }
    double sigma_min() const override { return base_->sigma_min() + 2.0 * h_; }
    double sigma_max() const override { return base_->sigma_max() - 2.0 * h_; }

  private:
    std::pair<double, double> position(double sigma) const {
        SurfacePoint p = surface_point(*base_, *metric_, sigma);
        const int n = metric_->dimension();
        double root = std::sqrt(p.omega);
        double uu = u_->value(sigma), vv = v_->value(sigma);
        double U = s_ * uu + 0.5 * s_ * s_ * vv;
        Vec nu(n);
        nu[0] = p.nu_t / root;
        nu[n - 1] = p.nu_f / root;
        Vec gamma = metric_->christoffel(p.x, nu, nu);
        double c2 = 0.5 * sq(s_ * uu);
        return {p.jet.t + U * nu[0] - c2 * gamma[0],
                p.jet.f + U * nu[n - 1] - c2 * gamma[n - 1]};
    }

    const RevolutionCurve* base_;
    const ConformalMetric* metric_;
    const TestFunction* u_;
    const TestFunction* v_;
    double s_;
    double h_;
};

/// Independent route for the second variation: d^2/ds^2 of the flowed area
/// at s = 0 by a five-point stencil.
inline double flowed_area_second_derivative(const RevolutionCurve& base,
                                            const ConformalMetric& metric,
                                            const TestFunction& u, const TestFunction& v,
                                            double step = 2e-3, int panels = 96) {
    auto area_at = [&](double s) {
        FlowedCurve fc(base, metric, u, v, s);
        return area_of_quadrature(SurfaceQuadrature(fc, metric, panels, 16));
    };
    return (-area_at(2 * step) + 16.0 * area_at(step) - 30.0 * area_at(0.0) +
            16.0 * area_at(-step) - area_at(-2 * step)) /
           (12.0 * step * step);
}

}  // namespace minsurf
