#pragma once

#include <functional>

#include "minsurf/core.hpp"

namespace minsurf {

/// Black-box metric field: coordinates -> metric components.
using MetricField = std::function<Mat(const Vec&)>;

/// Curvature of an arbitrary metric field by finite-difference Christoffel
/// assembly. Independent of every conformal closed form in metrics.hpp:
/// only metric component values enter, differentiated by central stencils.
/// Serves as the oracle side of all curvature dual-route checks.
class FdCurvature {
  public:
    FdCurvature(MetricField g, int dim, double step_scale = 1e-4)
        : g_(std::move(g)), dim_(dim), step_scale_(step_scale) {}

    struct Result {
        Mat ricci;
        double scalar;
    };

    Result at(const Vec& x) const {
        const int n = dim_;
        const double h = step_scale_ * std::max(1.0, norm(x));

        Mat g0 = g_(x);
        Mat ginv = invert(g0);

        // First derivatives dg[m](i,j), second derivatives d2g[m][l](i,j).
        std::array<Mat, kMaxDim> dg;
        std::array<std::array<Mat, kMaxDim>, kMaxDim> d2g;
        for (int m = 0; m < n; ++m) {
            Vec xp = x, xm = x;
            xp[m] += h;
            xm[m] -= h;
            Mat gp = g_(xp), gm = g_(xm);
            dg[m] = Mat(n);
            d2g[m][m] = Mat(n);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    dg[m](i, j) = (gp(i, j) - gm(i, j)) / (2.0 * h);
                    d2g[m][m](i, j) = (gp(i, j) - 2.0 * g0(i, j) + gm(i, j)) / (h * h);
                }
            }
        }
        for (int m = 0; m < n; ++m) {
            for (int l = m + 1; l < n; ++l) {
                Vec xpp = x, xpm = x, xmp = x, xmm = x;
                xpp[m] += h; xpp[l] += h;
                xpm[m] += h; xpm[l] -= h;
                xmp[m] -= h; xmp[l] += h;
                xmm[m] -= h; xmm[l] -= h;
                Mat gpp = g_(xpp), gpm = g_(xpm), gmp = g_(xmp), gmm = g_(xmm);
                d2g[m][l] = Mat(n);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        d2g[m][l](i, j) =
                            (gpp(i, j) - gpm(i, j) - gmp(i, j) + gmm(i, j)) / (4.0 * h * h);
                d2g[l][m] = d2g[m][l];
            }
        }

        // Christoffels and their derivatives from the metric jets.
        auto gamma_low = [&](int i, int j, int l) {
            return 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        };
        auto dgamma_low = [&](int m, int i, int j, int l) {
            return 0.5 * (d2g[m][i](j, l) + d2g[m][j](i, l) - d2g[m][l](i, j));
        };

        std::array<Mat, kMaxDim> gam;  // gam[k](i,j) = Gamma^k_ij
        for (int k = 0; k < n; ++k) {
            gam[k] = Mat(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = 0.0;
                    for (int l = 0; l < n; ++l) s += ginv(k, l) * gamma_low(i, j, l);
                    gam[k](i, j) = s;
                }
        }
        // d_m Gamma^k_ij, with d_m g^{kl} = -g^{ka} dg_m(a,b) g^{bl}.
        auto dginv = [&](int m, int k, int l) {
            double s = 0.0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) s -= ginv(k, a) * dg[m](a, b) * ginv(b, l);
            return s;
        };
        auto dgamma = [&](int m, int k, int i, int j) {
            double s = 0.0;
            for (int l = 0; l < n; ++l)
                s += dginv(m, k, l) * gamma_low(i, j, l) + ginv(k, l) * dgamma_low(m, i, j, l);
            return s;
        };

        Result res;
        res.ricci = Mat(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double r = 0.0;
                for (int k = 0; k < n; ++k) r += dgamma(k, k, i, j) - dgamma(i, k, k, j);
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        r += gam[k](k, l) * gam[l](i, j) - gam[k](i, l) * gam[l](k, j);
                res.ricci(i, j) = r;
            }
        }
        res.scalar = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) res.scalar += ginv(i, j) * res.ricci(i, j);
        return res;
    }

    double scalar(const Vec& x) const { return at(x).scalar; }

    double ricci(const Vec& x, const Vec& u, const Vec& v) const {
        return quad_form(at(x).ricci, u, v);
    }

    /// Gamma^k_ij from first differences of the metric components.
    std::array<Mat, kMaxDim> christoffels(const Vec& x) const {
        const int n = dim_;
        const double h = step_scale_ * std::max(1.0, norm(x));
        Mat ginv = invert(g_(x));
        std::array<Mat, kMaxDim> dg;
        for (int m = 0; m < n; ++m) {
            Vec xp = x, xm = x;
            xp[m] += h;
            xm[m] -= h;
            Mat gp = g_(xp), gm = g_(xm);
            dg[m] = Mat(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) dg[m](i, j) = (gp(i, j) - gm(i, j)) / (2.0 * h);
        }
        std::array<Mat, kMaxDim> gam;
        for (int k = 0; k < n; ++k) {
            gam[k] = Mat(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = 0.0;
                    for (int l = 0; l < n; ++l)
                        s += ginv(k, l) * 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                    gam[k](i, j) = s;
                }
        }
        return gam;
    }

  private:
    static Mat invert(const Mat& m) {
        const int n = m.dim;
        // Gauss-Jordan on [m | I]; matrices here are tiny and well conditioned.
        std::array<std::array<double, 2 * kMaxDim>, kMaxDim> a{};
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) a[i][j] = m(i, j);
            a[i][n + i] = 1.0;
        }
        for (int col = 0; col < n; ++col) {
            int piv = col;
            for (int r = col + 1; r < n; ++r)
                if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
            std::swap(a[piv], a[col]);
            double d = a[col][col];
            require(std::abs(d) > 1e-300, ErrorCode::domain_violation, "singular metric");
            for (int j = 0; j < 2 * n; ++j) a[col][j] /= d;
            for (int r = 0; r < n; ++r) {
                if (r == col) continue;
                double f = a[r][col];
                for (int j = 0; j < 2 * n; ++j) a[r][j] -= f * a[col][j];
            }
        }
        Mat inv(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) inv(i, j) = a[i][n + j];
        return inv;
    }

    MetricField g_;
    int dim_;
    double step_scale_;
};

/// Metric field view of a conformal metric, for feeding the FD oracle.
template <class Metric>
MetricField as_metric_field(const Metric& m) {
    return [m](const Vec& x) {
        double w = m.factor_value(x);
        Mat g(x.dim);
        for (int i = 0; i < x.dim; ++i) g(i, i) = w;
        return g;
    };
}

}  // namespace minsurf
