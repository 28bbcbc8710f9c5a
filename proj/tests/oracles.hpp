// Test-only oracles: finite-difference derivative checks and sample
// generators, kept independent of the implementation paths they verify.
#pragma once

#include <functional>
#include <random>

#include "minsurf/core.hpp"

namespace minsurf::testing {

using ScalarFn = std::function<double(const Vec&)>;

/// Central-difference gradient, default step 1e-4.
inline Vec fd_gradient(const ScalarFn& f, const Vec& x, double h = 1e-4) {
    Vec g(x.dim);
    for (int i = 0; i < x.dim; ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

/// Central-difference hessian from function values.
inline Mat fd_hessian(const ScalarFn& f, const Vec& x, double h = 1e-4) {
    Mat m(x.dim);
    double f0 = f(x);
    for (int i = 0; i < x.dim; ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        m(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (h * h);
    }
    for (int i = 0; i < x.dim; ++i) {
        for (int j = i + 1; j < x.dim; ++j) {
            Vec a = x, b = x, c = x, d = x;
            a[i] += h; a[j] += h;
            b[i] += h; b[j] -= h;
            c[i] -= h; c[j] += h;
            d[i] -= h; d[j] -= h;
            m(i, j) = m(j, i) = (f(a) - f(b) - f(c) + f(d)) / (4.0 * h * h);
        }
    }
    return m;
}

/// Five-point fourth-order second derivative of a 1d function.
inline double fd_second(const std::function<double(double)>& f, double t, double h) {
    return (-f(t + 2 * h) + 16.0 * f(t + h) - 30.0 * f(t) + 16.0 * f(t - h) - f(t - 2 * h)) /
           (12.0 * h * h);
}

/// Five-point fourth-order first derivative.
inline double fd_first(const std::function<double(double)>& f, double t, double h) {
    return (-f(t + 2 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2 * h)) / (12.0 * h);
}

struct SampleGen {
    std::mt19937_64 rng;
    explicit SampleGen(uint64_t seed) : rng(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }

    /// Random point with |x| in [rlo, rhi].
    Vec point_in_shell(int n, double rlo, double rhi) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        Vec x(n);
        double r2 = 0.0;
        do {
            r2 = 0.0;
            for (int i = 0; i < n; ++i) {
                x[i] = gauss(rng);
                r2 += x[i] * x[i];
            }
        } while (r2 < 1e-12);
        double target = uniform(rlo, rhi);
        double scale = target / std::sqrt(r2);
        for (int i = 0; i < n; ++i) x[i] *= scale;
        return x;
    }

    Vec unit_vector(int n) {
        Vec v = point_in_shell(n, 1.0, 1.0);
        return v;
    }
};

inline double max_rel_component_diff(const Vec& a, const Vec& b, double floor_scale) {
    double worst = 0.0;
    for (int i = 0; i < a.dim; ++i) {
        double scale = std::max({std::abs(a[i]), std::abs(b[i]), floor_scale});
        worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
    }
    return worst;
}

inline double max_rel_component_diff(const Mat& a, const Mat& b, double floor_scale) {
    double worst = 0.0;
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j) {
            double scale = std::max({std::abs(a(i, j)), std::abs(b(i, j)), floor_scale});
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / scale);
        }
    return worst;
}

}  // namespace minsurf::testing
