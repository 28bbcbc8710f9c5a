#pragma once

#include <span>
#include <vector>

#include "minsurf/core.hpp"

namespace minsurf {

/// y = limit + c * x^{-p} fitted through the last three samples.
struct PowerFit {
    double limit = 0.0;
    double rate = 0.0;   // p
    double coeff = 0.0;  // c
    bool resolved = false;  // false when the samples are flat to roundoff
};

/// Solve the three-point power-law extrapolation. Works for any increasing
/// abscissae; for geometric schedules the rate equation has the usual
/// closed form, in general it is solved by bisection on p.
inline PowerFit power_extrapolate(std::span<const double> xs, std::span<const double> ys,
                                  double flat_eps = 1e-13) {
    PowerFit f;
    size_t m = xs.size();
    require(m >= 3 && ys.size() == m, ErrorCode::insufficient_range,
            "power extrapolation needs at least three samples");
    double xa = xs[m - 3], xb = xs[m - 2], xc = xs[m - 1];
    double ya = ys[m - 3], yb = ys[m - 2], yc = ys[m - 1];
    double d1 = ya - yb, d2 = yb - yc;
    double scale = std::max({std::abs(ya), std::abs(yb), std::abs(yc), 1.0});
    if (std::abs(d1) < flat_eps * scale || std::abs(d2) < flat_eps * scale ||
        d1 * d2 <= 0.0) {
        f.limit = yc;
        return f;
    }
    auto ratio = [&](double p) {
        return (std::pow(xa, -p) - std::pow(xb, -p)) / (std::pow(xb, -p) - std::pow(xc, -p));
    };
    double target = d1 / d2;
    // ratio(p) is monotone in p for increasing abscissae; bracket then bisect.
    double lo = 1e-3, hi = 16.0;
    double rlo = ratio(lo) - target, rhi = ratio(hi) - target;
    if (rlo * rhi > 0.0) {
        f.limit = yc;  // inconsistent with a pure power law; report last value
        return f;
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double rm = ratio(mid) - target;
        if (rm == 0.0) { lo = hi = mid; break; }
        if (rm * rlo > 0.0) {
            lo = mid;
            rlo = rm;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-12 * hi) break;
    }
    double p = 0.5 * (lo + hi);
    double c = d2 / (std::pow(xb, -p) - std::pow(xc, -p));
    f.limit = yc - c * std::pow(xc, -p);
    f.rate = p;
    f.coeff = c;
    f.resolved = true;
    return f;
}

/// Least-squares slope of log|y| against log x.
struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // rms residual of the fit in log space
};

inline SlopeFit loglog_slope(std::span<const double> xs, std::span<const double> ys) {
    size_t m = xs.size();
    require(m >= 2 && ys.size() == m, ErrorCode::insufficient_range, "slope fit needs 2+ samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> lx(m), ly(m);
    for (size_t i = 0; i < m; ++i) {
        require(xs[i] > 0.0 && std::abs(ys[i]) > 0.0, ErrorCode::insufficient_range,
                "non-positive sample in log fit");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(std::abs(ys[i]));
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    double denom = m * sxx - sx * sx;
    SlopeFit f;
    f.slope = (m * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / m;
    double rss = 0.0;
    for (size_t i = 0; i < m; ++i) rss += sq(ly[i] - (f.intercept + f.slope * lx[i]));
    f.residual = std::sqrt(rss / m);
    return f;
}

/// Limit of a sequence sampled at geometrically spaced abscissae, assuming
/// y = a + c x^{-q}: three-point Richardson elimination.
inline PowerFit richardson3(double x0, double y0, double y1, double y2, double ratio,
                            double flat_eps = 1e-12) {
    PowerFit f;
    double d1 = y0 - y1, d2 = y1 - y2;
    double scale = std::max({std::abs(y0), std::abs(y2), 1.0});
    if (std::abs(d1) < flat_eps * scale || std::abs(d2) < flat_eps * scale || d1 * d2 <= 0.0) {
        f.limit = y2;
        return f;
    }
    double shrink = d2 / d1;  // = ratio^{-q}
    if (shrink <= 0.0 || shrink >= 1.0) {
        f.limit = y2;
        return f;
    }
    f.rate = -std::log(shrink) / std::log(ratio);
    f.limit = y2 - d2 * shrink / (1.0 - shrink);
    f.coeff = d2 / (std::pow(x0 * ratio, -f.rate) - std::pow(x0 * ratio * ratio, -f.rate));
    f.resolved = true;
    return f;
}

}  // namespace minsurf
