#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace minsurf {

inline constexpr int kMinDim = 3;
inline constexpr int kMaxDim = 7;

/// Error codes shared by all modules. Every throwing path raises LabError
/// with one of these codes so callers can dispatch without string matching.
enum class ErrorCode {
    point_outside_domain,
    non_unit_normal,
    quadrature_divergence,
    domain_violation,
    horizon_collision,
    slope_blowup,
    step_underflow,
    singular_lower_limit,
    no_bracket,
    max_iterations,
    not_converged,
    tail_too_flat,
    tail_too_short,
    tail_estimate_unreliable,
    insufficient_range,
    quadrature_singularity,
    exponent_out_of_range,
    overlap_violation,
    sign_check_failed,
    steepness_too_low,
    positivity_violation,
    config_error,
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::point_outside_domain: return "PointOutsideDomain";
        case ErrorCode::non_unit_normal: return "NonUnitNormal";
        case ErrorCode::quadrature_divergence: return "QuadratureDivergence";
        case ErrorCode::domain_violation: return "DomainViolation";
        case ErrorCode::horizon_collision: return "HorizonCollision";
        case ErrorCode::slope_blowup: return "SlopeBlowup";
        case ErrorCode::step_underflow: return "StepUnderflow";
        case ErrorCode::singular_lower_limit: return "SingularLowerLimit";
        case ErrorCode::no_bracket: return "NoBracket";
        case ErrorCode::max_iterations: return "MaxIterations";
        case ErrorCode::not_converged: return "NotConverged";
        case ErrorCode::tail_too_flat: return "TailTooFlat";
        case ErrorCode::tail_too_short: return "TailTooShort";
        case ErrorCode::tail_estimate_unreliable: return "TailEstimateUnreliable";
        case ErrorCode::insufficient_range: return "InsufficientRange";
        case ErrorCode::quadrature_singularity: return "QuadratureSingularity";
        case ErrorCode::exponent_out_of_range: return "ExponentOutOfRange";
        case ErrorCode::overlap_violation: return "OverlapViolation";
        case ErrorCode::sign_check_failed: return "SignCheckFailed";
        case ErrorCode::steepness_too_low: return "SteepnessTooLow";
        case ErrorCode::positivity_violation: return "PositivityViolation";
        case ErrorCode::config_error: return "ConfigError";
    }
    return "Unknown";
}

class LabError : public std::runtime_error {
  public:
    LabError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw LabError(code, what);
}

inline void require(bool ok, ErrorCode code, const std::string& what) {
    if (!ok) fail(code, what);
}

/// Point / vector in R^n for runtime dimension n <= kMaxDim.
struct Vec {
    int dim = 0;
    std::array<double, kMaxDim> a{};

    Vec() = default;
    explicit Vec(int n) : dim(n) { a.fill(0.0); }

    double& operator[](int i) { return a[static_cast<size_t>(i)]; }
    double operator[](int i) const { return a[static_cast<size_t>(i)]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < dim; ++i) a[i] += o.a[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < dim; ++i) a[i] -= o.a[i];
        return *this;
    }
    Vec& operator*=(double c) {
        for (int i = 0; i < dim; ++i) a[i] *= c;
        return *this;
    }

    friend Vec operator+(Vec x, const Vec& y) { return x += y; }
    friend Vec operator-(Vec x, const Vec& y) { return x -= y; }
    friend Vec operator*(double c, Vec x) { return x *= c; }
};

inline double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (int i = 0; i < x.dim; ++i) s += x[i] * y[i];
    return s;
}

inline double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

/// Unit basis vector e_i in R^n.
inline Vec basis(int n, int i) {
    Vec e(n);
    e[i] = 1.0;
    return e;
}

/// Point on the symmetry axis: (0,...,0,height) plus a horizontal radial
/// offset t along e_1. All axisymmetric reductions evaluate here.
inline Vec axis_point(int n, double t, double height) {
    Vec x(n);
    x[0] = t;
    x[n - 1] = height;
    return x;
}

/// Symmetric n x n matrix (hessians, metric components).
struct Mat {
    int dim = 0;
    std::array<double, kMaxDim * kMaxDim> a{};

    Mat() = default;
    explicit Mat(int n) : dim(n) { a.fill(0.0); }

    double& operator()(int i, int j) { return a[static_cast<size_t>(i * kMaxDim + j)]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i * kMaxDim + j)]; }

    double trace() const {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s += (*this)(i, i);
        return s;
    }
};

inline Vec mat_vec(const Mat& m, const Vec& v) {
    Vec r(v.dim);
    for (int i = 0; i < m.dim; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.dim; ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

inline double quad_form(const Mat& m, const Vec& u, const Vec& v) {
    return dot(u, mat_vec(m, v));
}

/// Volume of the unit ball in R^k, pi^{k/2} / Gamma(k/2 + 1).
inline double unit_ball_volume(int k) {
    return std::pow(M_PI, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

/// Area of the unit sphere S^{k-1} in R^k.
inline double unit_sphere_area(int k) { return k * unit_ball_volume(k); }

inline double sq(double x) { return x * x; }

inline double rel_diff(double a, double b) {
    double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0) return 0.0;
    return std::abs(a - b) / scale;
}

}  // namespace minsurf
