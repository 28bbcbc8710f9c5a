// Test-side geometry oracles:
//  - GraphFnCurve: closure-backed profile graphs,
//  - fd_second_variation: thin wrapper over the library's flowed-area
//    second derivative,
//  - fd_second_fundamental: level-set shape operator assembled from
//    finite-difference christoffels of the metric components.
#pragma once

#include <functional>

#include "minsurf/analysis.hpp"
#include "minsurf/curvature_fd.hpp"
#include "minsurf/surfaces.hpp"
#include "minsurf/variation_oracle.hpp"

namespace minsurf::testing {

class GraphFnCurve final : public RevolutionCurve {
  public:
    using Fn = std::function<double(double)>;
    GraphFnCurve(Fn f, Fn p, Fn fpp, double t0, double t1)
        : f_(std::move(f)), p_(std::move(p)), fpp_(std::move(fpp)), t0_(t0), t1_(t1) {}
    CurveJet at(double t) const override { return {t, f_(t), 1.0, p_(t), 0.0, fpp_(t)}; }
    double sigma_min() const override { return t0_; }
    double sigma_max() const override { return t1_; }

  private:
    Fn f_, p_, fpp_;
    double t0_, t1_;
};

inline double fd_second_variation(const RevolutionCurve& base, const ConformalMetric& metric,
                                  const TestFunction& u, const TestFunction& v,
                                  double step = 2e-3, int panels = 96) {
    return flowed_area_second_derivative(base, metric, u, v, step, panels);
}

struct ShapeOracle {
    double h = 0.0;
    double h2 = 0.0;
};

/// Shape operator of the graph x_n = f(|y|) at the representative point
/// (t, 0, ..., 0, f): level-set formula h(X,Y) = Hess_g F (X,Y)/|grad F|_g
/// with F = x_n - f(|y|), christoffels by finite differences of the metric
/// components, tangent frame by Gram-Schmidt.
inline ShapeOracle fd_second_fundamental(const ConformalMetric& metric, double t, double f,
                                         double p, double fpp) {
    const int n = metric.dimension();
    Vec x = axis_point(n, t, f);
    double omega = metric.factor(x).value;

    Vec dF(n);
    dF[0] = -p;
    dF[n - 1] = 1.0;
    Mat d2F(n);
    d2F(0, 0) = -fpp;
    for (int a = 1; a < n - 1; ++a) d2F(a, a) = -p / t;

    FdCurvature oracle(as_metric_field(metric), n);
    auto gam = oracle.christoffels(x);
    Mat hess_g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = d2F(i, j);
            for (int k = 0; k < n; ++k) s -= gam[k](i, j) * dF[k];
            hess_g(i, j) = s;
        }

    double grad_norm_g = norm(dF) / std::sqrt(omega);

    // Euclidean-orthonormal tangent frame orthogonal to dF, rescaled to
    // g-unit length (the metric is conformal, so orthogonality transfers).
    std::vector<Vec> frame;
    Vec u_hat = dF;
    u_hat *= 1.0 / norm(dF);
    for (int k = 0; k < n && static_cast<int>(frame.size()) < n - 1; ++k) {
        Vec cand = basis(n, k);
        cand -= dot(cand, u_hat) * u_hat;
        for (const Vec& e : frame) cand -= dot(cand, e) * e;
        double len = norm(cand);
        if (len < 1e-8) continue;
        cand *= 1.0 / len;
        frame.push_back(cand);
    }

    ShapeOracle out;
    for (size_t a = 0; a < frame.size(); ++a) {
        for (size_t b = 0; b < frame.size(); ++b) {
            // g-unit tangents are euclid-unit / sqrt(omega).
            double hab = quad_form(hess_g, frame[a], frame[b]) / (omega * grad_norm_g);
            out.h2 += sq(hab);
            if (a == b) out.h += hab;
        }
    }
    return out;
}

}  // namespace minsurf::testing
