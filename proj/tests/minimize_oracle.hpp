// Direct discretized-area minimization over radial graphs with a fixed
// boundary value: the independent oracle for the shooting solver. The
// functional is the midpoint-rule area of the rotation graph; minimization
// runs gradient descent (Barzilai-Borwein steps with backtracking) followed
// by a damped Newton polish on the tridiagonal hessian. Initialized from
// the constant plane, so no information flows in from the ODE path.
#pragma once

#include <vector>

#include "minsurf/core.hpp"
#include "minsurf/metrics.hpp"

namespace minsurf::testing {

class DiscreteAreaProblem {
  public:
    DiscreteAreaProblem(const ConformalMetric& metric, double r, double z, int segments)
        : metric_(metric), n_(metric.dimension()), r_(r), z_(z), m_(segments), dt_(r / segments) {
        prefactor_ = (n_ - 1) * unit_ball_volume(n_ - 1);
    }

    int unknowns() const { return m_; }  // f_0 .. f_{m-1}; f_m = z fixed
    double node(int i) const { return i * dt_; }

    double area(const std::vector<double>& f) const {
        double a = 0.0;
        for (int i = 0; i < m_; ++i) a += segment(f, i).value;
        return a;
    }

    std::vector<double> gradient(const std::vector<double>& f) const {
        std::vector<double> g(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            Segment s = segment(f, i);
            if (i < m_) g[i] += s.d_lo;
            if (i + 1 < m_) g[i + 1] += s.d_hi;
        }
        return g;
    }

    // Tridiagonal hessian (diag, upper) of the discrete functional.
    void hessian(const std::vector<double>& f, std::vector<double>& diag,
                 std::vector<double>& upper) const {
        diag.assign(m_, 0.0);
        upper.assign(m_ - 1, 0.0);
        for (int i = 0; i < m_; ++i) {
            Segment s = segment(f, i);
            diag[i] += s.d2_lolo;
            if (i + 1 < m_) {
                diag[i + 1] += s.d2_hihi;
                upper[i] += s.d2_lohi;
            }
        }
    }

    /// Levenberg-damped Newton descent from the constant plane, run to
    /// stationarity of the discrete functional.
    std::vector<double> minimize(double grad_tol = 1e-9) const {
        std::vector<double> f(m_, z_);
        double mu = 1e-3;
        std::vector<double> diag, upper, damped, trial(m_);
        for (int it = 0; it < 500; ++it) {
            std::vector<double> g = gradient(f);
            double gnorm = 0.0;
            for (double v : g) gnorm = std::max(gnorm, std::abs(v));
            if (gnorm < grad_tol) break;
            hessian(f, diag, upper);
            double a0 = area(f);
            bool accepted = false;
            for (int attempt = 0; attempt < 30; ++attempt) {
                damped = diag;
                for (double& d : damped) d += mu;
                std::vector<double> delta = solve_tridiagonal(damped, upper, g);
                for (int i = 0; i < m_; ++i) trial[i] = f[i] - delta[i];
                if (area(trial) < a0) {
                    f = trial;
                    mu = std::max(mu / 3.0, 1e-12);
                    accepted = true;
                    break;
                }
                mu *= 8.0;
            }
            if (!accepted) break;
        }
        return f;
    }

  private:
    struct Segment {
        double value;
        double d_lo, d_hi;
        double d2_lolo, d2_hihi, d2_lohi;
    };

    Segment segment(const std::vector<double>& f, int i) const {
        double f_lo = f[i];
        double f_hi = i + 1 < m_ ? f[i + 1] : z_;
        double t_mid = (node(i) + node(i + 1)) * 0.5;
        double f_mid = 0.5 * (f_lo + f_hi);
        double s = (f_hi - f_lo) / dt_;

        ConformalMetric::AxisymJet w = metric_.axisym_jet(t_mid, f_mid);
        double half_n1 = 0.5 * (n_ - 1);
        double omega_pow = std::pow(w.value, half_n1);          // conformal area weight
        double ow_f = half_n1 * std::pow(w.value, half_n1 - 1.0) * w.wn;
        double ow_ff = half_n1 * ((half_n1 - 1.0) * std::pow(w.value, half_n1 - 2.0) * sq(w.wn) +
                                  std::pow(w.value, half_n1 - 1.0) * w.wnn);

        double root = std::sqrt(1.0 + s * s);
        double g1 = s / root;                       // d root / d s
        double g2 = 1.0 / (root * root * root);     // d^2 root / d s^2
        double k = prefactor_ * std::pow(t_mid, n_ - 2) * dt_;

        const double s_lo = -1.0 / dt_, s_hi = 1.0 / dt_, h_mid = 0.5;
        Segment seg;
        seg.value = k * root * omega_pow;
        seg.d_lo = k * (g1 * s_lo * omega_pow + root * ow_f * h_mid);
        seg.d_hi = k * (g1 * s_hi * omega_pow + root * ow_f * h_mid);
        auto second = [&](double sa, double sb) {
            return k * (g2 * sa * sb * omega_pow + g1 * sa * ow_f * h_mid +
                        g1 * sb * ow_f * h_mid + root * ow_ff * h_mid * h_mid);
        };
        seg.d2_lolo = second(s_lo, s_lo);
        seg.d2_hihi = second(s_hi, s_hi);
        seg.d2_lohi = second(s_lo, s_hi);
        return seg;
    }

    static std::vector<double> solve_tridiagonal(std::vector<double> diag,
                                                 std::vector<double> upper,
                                                 std::vector<double> rhs) {
        const int m = static_cast<int>(diag.size());
        std::vector<double> lower = upper;  // symmetric
        for (int i = 1; i < m; ++i) {
            double w = lower[i - 1] / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        std::vector<double> x(m);
        x[m - 1] = rhs[m - 1] / diag[m - 1];
        for (int i = m - 2; i >= 0; --i) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
        return x;
    }

    const ConformalMetric& metric_;
    int n_;
    double r_, z_;
    int m_;
    double dt_;
    double prefactor_;
};

}  // namespace minsurf::testing
