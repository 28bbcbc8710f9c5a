#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "minsurf/core.hpp"

namespace minsurf {

struct QuadratureRule {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;  // sum to 2
};

namespace detail {

/// Legendre P_m(x) and derivative by the three-term recurrence.
inline std::pair<double, double> legendre(int m, double x) {
    double p0 = 1.0, p1 = x;
    if (m == 0) return {1.0, 0.0};
    for (int k = 2; k <= m; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    double dp = m * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

inline QuadratureRule compute_gauss_legendre(int m) {
    QuadratureRule rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        // Chebyshev-based initial guess, then Newton.
        double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        for (int it = 0; it < 100; ++it) {
            auto [p, dp] = legendre(m, x);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        auto [p, dp] = legendre(m, x);
        (void)p;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[m - 1 - i] = x;
        rule.weights[m - 1 - i] = w;
    }
    return rule;
}

}  // namespace detail

/// Cached Gauss-Legendre rule of given order.
inline const QuadratureRule& gauss_legendre(int order) {
    static std::mutex mu;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, detail::compute_gauss_legendre(order)).first;
    return it->second;
}

/// Single-panel Gauss-Legendre on [a, b].
template <class F>
double integrate_panel(F&& f, double a, double b, int order = 32) {
    const QuadratureRule& rule = gauss_legendre(order);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
        s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return s * half;
}

/// Composite Gauss-Legendre with a fixed panel count.
template <class F>
double integrate_composite(F&& f, double a, double b, int panels, int order = 32) {
    double s = 0.0;
    double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k) s += integrate_panel(f, a + k * h, a + (k + 1) * h, order);
    return s;
}

/// Panel-doubling integration until successive values agree to rel_tol.
/// Smooth integrands converge in two or three rounds.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-12, int order = 32,
                          int max_panels = 4096) {
    double prev = integrate_composite(f, a, b, 1, order);
    for (int panels = 2; panels <= max_panels; panels *= 2) {
        double cur = integrate_composite(f, a, b, panels, order);
        if (std::abs(cur - prev) <= rel_tol * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

/// Geometric panel decomposition of [a, b] (b may be very large); used for
/// slowly decaying tails where uniform panels waste nodes.
template <class F>
double integrate_geometric(F&& f, double a, double b, double ratio = 2.0, int order = 32) {
    double s = 0.0;
    double lo = a;
    while (lo < b) {
        double hi = std::min(b, lo * ratio);
        if (hi <= lo) break;
        s += integrate_panel(f, lo, hi, order);
        lo = hi;
    }
    return s;
}

}  // namespace minsurf
