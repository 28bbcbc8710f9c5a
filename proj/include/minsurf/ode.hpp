#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "minsurf/core.hpp"

namespace minsurf {

/// Dormand-Prince 5(4) embedded pair with the standard quartic continuous
/// extension. State dimension is a compile-time constant; the right-hand
/// side and the per-step monitor are template parameters so the stepping
/// loop stays inlineable.
template <int N>
class Dopri5 {
  public:
    using State = std::array<double, N>;

    struct Options {
        double rel_tol = 1e-10;
        double abs_tol = 1e-12;
        double max_step = 0.0;  // 0: unrestricted
        double initial_step = 0.0;
        long max_steps = 50'000'000;
    };

    struct DenseSegment {
        double t0 = 0.0, h = 0.0;
        std::array<std::array<double, 5>, N> c{};

        double eval(int comp, double t) const {
            double th = (t - t0) / h;
            double th1 = 1.0 - th;
            const auto& r = c[static_cast<size_t>(comp)];
            return r[0] + th * (r[1] + th1 * (r[2] + th * (r[3] + th1 * r[4])));
        }
    };

    struct Stats {
        long accepted = 0;
        long rejected = 0;
        double max_error_ratio = 0.0;  // largest accepted local-error ratio
    };

    struct Output {
        std::vector<double> t;
        std::vector<State> y;
        std::vector<DenseSegment> dense;
        Stats stats;

        State eval(double time) const {
            const DenseSegment& seg = locate(time);
            State s;
            for (int i = 0; i < N; ++i) s[i] = seg.eval(i, time);
            return s;
        }

        const DenseSegment& locate(double time) const {
            require(!dense.empty(), ErrorCode::insufficient_range, "empty trajectory");
            size_t lo = 0, hi = dense.size() - 1;
            while (lo < hi) {
                size_t mid = (lo + hi) / 2;
                if (time > dense[mid].t0 + dense[mid].h)
                    lo = mid + 1;
                else
                    hi = mid;
            }
            return dense[lo];
        }
    };

    /// Integrate y' = rhs(t, y) from (t0, y0) to t1 > t0. The monitor is
    /// invoked after every accepted step and may throw to abort.
    template <class Rhs, class Monitor>
    static Output integrate(Rhs&& rhs, double t0, State y0, double t1, const Options& opt,
                            Monitor&& monitor) {
        Output out;
        double span = t1 - t0;
        require(span > 0.0, ErrorCode::config_error, "integration span must be positive");
        double hmax = opt.max_step > 0.0 ? std::min(opt.max_step, span) : span;
        // Conservative start near t0 (matters at regular-singular origins);
        // the controller ramps up by 5x per accepted step.
        double h = opt.initial_step > 0.0
                       ? std::min(opt.initial_step, hmax)
                       : std::min({hmax, span / 256.0,
                                   std::max(0.1 * std::abs(t0), 1e-6 * span)});

        double t = t0;
        State y = y0;
        State k1;
        rhs(t, y, k1);
        out.t.push_back(t);
        out.y.push_back(y);

        State k2, k3, k4, k5, k6, k7, ytmp, ynew;
        while (t < t1) {
            require(out.stats.accepted + out.stats.rejected < opt.max_steps,
                    ErrorCode::step_underflow, "step budget exhausted");
            if (t + h > t1) h = t1 - t;
            require(h > 1e-14 * std::max(1.0, std::abs(t)), ErrorCode::step_underflow,
                    "step size underflow");

            try {
                stage(rhs, t, y, h, k1, k2, k3, k4, k5, k6, k7, ytmp, ynew);
            } catch (const LabError&) {
                // A trial stage left the admissible region; retry shorter.
                out.stats.rejected++;
                h *= 0.25;
                continue;
            }

            // Weighted rms of the embedded error estimate.
            double err = 0.0;
            for (int i = 0; i < N; ++i) {
                double e = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                                kE6 * k6[i] + kE7 * k7[i]);
                double sk = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                err += sq(e / sk);
            }
            err = std::sqrt(err / N);

            if (err <= 1.0) {
                DenseSegment seg;
                seg.t0 = t;
                seg.h = h;
                for (int i = 0; i < N; ++i) {
                    double ydiff = ynew[i] - y[i];
                    double bspl = h * k1[i] - ydiff;
                    seg.c[i][0] = y[i];
                    seg.c[i][1] = ydiff;
                    seg.c[i][2] = bspl;
                    seg.c[i][3] = ydiff - h * k7[i] - bspl;
                    seg.c[i][4] = h * (kD1 * k1[i] + kD3 * k3[i] + kD4 * k4[i] + kD5 * k5[i] +
                                       kD6 * k6[i] + kD7 * k7[i]);
                }
                out.dense.push_back(seg);

                t += h;
                y = ynew;
                k1 = k7;  // FSAL
                out.t.push_back(t);
                out.y.push_back(y);
                out.stats.accepted++;
                out.stats.max_error_ratio = std::max(out.stats.max_error_ratio, err);
                monitor(t, y);
                double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
                h = std::min(hmax, h * std::min(5.0, std::max(0.2, fac)));
            } else {
                out.stats.rejected++;
                double fac = 0.9 * std::pow(err, -0.2);
                h *= std::min(0.9, std::max(0.2, fac));
            }
        }
        return out;
    }

  private:
    template <class Rhs>
    static void stage(Rhs&& rhs, double t, const State& y, double h, const State& k1, State& k2,
                      State& k3, State& k4, State& k5, State& k6, State& k7, State& ytmp,
                      State& ynew) {
        auto comb = [&](State& dst, std::initializer_list<std::pair<double, const State*>> terms) {
            for (int i = 0; i < N; ++i) {
                double s = y[i];
                for (const auto& [c, k] : terms) s += h * c * (*k)[i];
                dst[i] = s;
            }
        };
        comb(ytmp, {{1.0 / 5, &k1}});
        rhs(t + h / 5, ytmp, k2);
        comb(ytmp, {{3.0 / 40, &k1}, {9.0 / 40, &k2}});
        rhs(t + 3 * h / 10, ytmp, k3);
        comb(ytmp, {{44.0 / 45, &k1}, {-56.0 / 15, &k2}, {32.0 / 9, &k3}});
        rhs(t + 4 * h / 5, ytmp, k4);
        comb(ytmp, {{19372.0 / 6561, &k1},
                    {-25360.0 / 2187, &k2},
                    {64448.0 / 6561, &k3},
                    {-212.0 / 729, &k4}});
        rhs(t + 8 * h / 9, ytmp, k5);
        comb(ytmp, {{9017.0 / 3168, &k1},
                    {-355.0 / 33, &k2},
                    {46732.0 / 5247, &k3},
                    {49.0 / 176, &k4},
                    {-5103.0 / 18656, &k5}});
        rhs(t + h, ytmp, k6);
        comb(ynew, {{35.0 / 384, &k1},
                    {500.0 / 1113, &k3},
                    {125.0 / 192, &k4},
                    {-2187.0 / 6784, &k5},
                    {11.0 / 84, &k6}});
        rhs(t + h, ynew, k7);
    }

    static constexpr double kE1 = 71.0 / 57600.0;
    static constexpr double kE3 = -71.0 / 16695.0;
    static constexpr double kE4 = 71.0 / 1920.0;
    static constexpr double kE5 = -17253.0 / 339200.0;
    static constexpr double kE6 = 22.0 / 525.0;
    static constexpr double kE7 = -1.0 / 40.0;

    static constexpr double kD1 = -12715105075.0 / 11282082432.0;
    static constexpr double kD3 = 87487479700.0 / 32700410799.0;
    static constexpr double kD4 = -10690763975.0 / 1880347072.0;
    static constexpr double kD5 = 701980252875.0 / 199316789632.0;
    static constexpr double kD6 = -1453857185.0 / 822651844.0;
    static constexpr double kD7 = 69997945.0 / 29380423.0;
};

}  // namespace minsurf
