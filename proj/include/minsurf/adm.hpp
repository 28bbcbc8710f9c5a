#pragma once

#include <span>
#include <vector>

#include "minsurf/core.hpp"
#include "minsurf/fit.hpp"
#include "minsurf/metrics.hpp"
#include "minsurf/quadrature.hpp"

namespace minsurf {

/// Integrate f over the coordinate sphere S^{n-1}_radius(0) against the
/// euclidean area element, by product Gauss-Legendre in the n-1 angles.
/// Spherical coordinates: x_1 = r cos a_1, x_2 = r sin a_1 cos a_2, ...,
/// with area weight prod_k sin^{n-1-k}(a_k).
template <class F>
double integrate_sphere(int n, double radius, F&& f, int order = 32) {
    const QuadratureRule& rule = gauss_legendre(order);
    const int n_angles = n - 1;
    // Per-axis nodes and weights: a_k in [0,pi] for k < n-1, last in [0,2pi].
    std::vector<std::vector<double>> angle(n_angles), weight(n_angles);
    for (int k = 0; k < n_angles; ++k) {
        double hi = (k == n_angles - 1) ? 2.0 * M_PI : M_PI;
        angle[k].resize(order);
        weight[k].resize(order);
        for (int i = 0; i < order; ++i) {
            double a = 0.5 * hi * (1.0 + rule.nodes[i]);
            double w = 0.5 * hi * rule.weights[i];
            int sin_pow = n - 2 - k;  // sin^{n-1-(k+1)}
            angle[k][i] = a;
            weight[k][i] = w * std::pow(std::sin(a), sin_pow);
        }
    }
    std::vector<int> idx(n_angles, 0);
    double total = 0.0;
    Vec x(n);
    while (true) {
        double w = 1.0;
        double sin_prod = 1.0;
        for (int k = 0; k < n_angles; ++k) {
            double a = angle[k][idx[k]];
            w *= weight[k][idx[k]];
            x[k] = radius * sin_prod * std::cos(a);
            sin_prod *= std::sin(a);
        }
        x[n - 1] = radius * sin_prod;
        total += w * f(x);
        int k = n_angles - 1;
        while (k >= 0 && ++idx[k] == order) idx[k--] = 0;
        if (k < 0) break;
    }
    return total * std::pow(radius, n - 1);
}

/// Flux integrals over coordinate spheres with extrapolated limit.
struct MassEstimate {
    std::vector<double> radii;
    std::vector<double> flux;       // mass integrand value at each radius
    double limit = 0.0;
    double fitted_rate = 0.0;       // decay exponent of flux - limit
    double error_estimate = 0.0;    // last-two-term difference
    bool extrapolated = false;
};

/// ADM mass flux at one radius:
/// (2(n-1) n omega_n)^{-1} lambda^{-1} * surface integral of
///   sum_ij x^i [ d_j g(e_i,e_j) - d_i g(e_j,e_j) ].
/// Metric is any type exposing dimension(), contains() and factor().
template <class Metric = ConformalMetric>
double adm_flux(const Metric& metric, double lambda, int order = 32) {
    const int n = metric.dimension();
    double integral = integrate_sphere(n, lambda, [&](const Vec& x) {
        FactorJet w = metric.factor(x);
        // g_ij = omega delta_ij, so d_j g_ij = d_i omega and d_i g_jj = n d_i omega.
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            double sum_j_d_j_g_ij = w.grad[i];
            double d_i_tr = n * w.grad[i];
            s += x[i] * (sum_j_d_j_g_ij - d_i_tr);
        }
        return s;
    }, order);
    return integral / (2.0 * (n - 1) * n * unit_ball_volume(n) * lambda);
}

/// ADM mass over an increasing radius schedule, with power-law
/// extrapolation over the last three radii and a last-two-term error bar.
template <class Metric = ConformalMetric>
MassEstimate adm_mass(const Metric& metric, std::span<const double> radii,
                      int order = 32) {
    require(radii.size() >= 3, ErrorCode::insufficient_range,
            "mass schedule needs at least 3 radii for extrapolation");
    MassEstimate est;
    double prev = -1.0;
    for (double lam : radii) {
        require(lam > prev, ErrorCode::config_error, "radius schedule must be increasing");
        require(metric.contains(axis_point(metric.dimension(), lam, 0.0)),
                ErrorCode::point_outside_domain, "sphere radius inside horizon");
        prev = lam;
        est.radii.push_back(lam);
        est.flux.push_back(adm_flux(metric, lam, order));
    }
    // Convergence guard: the tail differences must not grow.
    size_t m = est.flux.size();
    double scale = 0.0;
    for (double v : est.flux) scale = std::max(scale, std::abs(v));
    double d_prev = std::abs(est.flux[m - 2] - est.flux[m - 3]);
    double d_last = std::abs(est.flux[m - 1] - est.flux[m - 2]);
    require(d_last <= 2.0 * d_prev + 1e-12 * std::max(scale, 1.0),
            ErrorCode::quadrature_divergence, "flux sequence is not settling");

    PowerFit fit = power_extrapolate(est.radii, est.flux);
    est.limit = fit.limit;
    est.fitted_rate = fit.rate;
    est.extrapolated = fit.resolved;
    est.error_estimate = d_last;
    return est;
}

}  // namespace minsurf
