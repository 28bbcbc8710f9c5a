#include <catch2/catch_amalgamated.hpp>

#include "minsurf/adm.hpp"
#include "minsurf/curvature_fd.hpp"
#include "minsurf/metrics.hpp"
#include "oracles.hpp"

using namespace minsurf;
using minsurf::testing::SampleGen;

namespace {

/// Minimal metric for the vanishing-mass property: omega = 1 + |x|^{-(n-1)},
/// decaying strictly faster than the critical rate n-2.
struct FastDecayMetric {
    int n;
    int dimension() const { return n; }
    bool contains(const Vec&) const { return true; }
    FactorJet factor(const Vec& x) const {
        FactorJet j;
        j.grad = Vec(n);
        j.hess = Mat(n);
        double rho = norm(x);
        double p = -(n - 1.0);
        j.value = 1.0 + std::pow(rho, p);
        double d1 = p * std::pow(rho, p - 2.0);
        double d2 = p * (p - 2.0) * std::pow(rho, p - 4.0);
        for (int i = 0; i < n; ++i) j.grad[i] = d1 * x[i];
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                j.hess(i, k) = d2 * x[i] * x[k] + (i == k ? d1 : 0.0);
        return j;
    }
};

}  // namespace

TEST_CASE("step cutoff obeys its support and monotonicity constraints") {
    StepCutoff eta;
    CHECK(eta.eval(0.2) == 0.0);
    CHECK(eta.eval(0.5) == 0.0);
    CHECK(eta.eval(1.0) == 1.0);
    CHECK(eta.eval(3.0) == 1.0);
    for (int i = 0; i <= 200; ++i) {
        double t = 0.3 + 0.9 * i / 200.0;
        CHECK(eta.d1(t) >= 0.0);
    }
    // C^2 joins at 1/2 and 1: derivatives approach zero.
    CHECK(std::abs(eta.d1(0.5 + 1e-5)) < 1e-3);
    CHECK(std::abs(eta.d2(0.5 + 1e-4)) < 0.3);
    CHECK(std::abs(eta.d1(1.0 - 1e-5)) < 1e-3);
}

TEST_CASE("conformal factor values match the closed forms") {
    auto flat = ConformalMetric::flat(5);
    SampleGen gen(11);
    for (int k = 0; k < 5; ++k) {
        Vec x = gen.point_in_shell(5, 0.5, 20.0);
        FactorJet j = flat.factor(x);
        CHECK(j.value == 1.0);
        CHECK(norm(j.grad) == 0.0);
        CHECK(j.hess.trace() == 0.0);
    }

    // Schwarzschild m=2, n=4 on the horizon |x|=1: phi = 2, omega = 2^2.
    auto schw = ConformalMetric::schwarzschild(4);
    Vec hx = axis_point(4, 1.0, 0.0);
    CHECK_THAT(schw.factor(hx).value, Catch::Matchers::WithinAbs(4.0, 1e-14));

    // Inside the horizon is outside the domain.
    Vec inside = axis_point(4, 0.5, 0.0);
    CHECK_THROWS_AS(schw.factor(inside), LabError);
    CHECK(!schw.contains(inside));
}

TEST_CASE("factor jets agree with central finite differences on random samples") {
    SampleGen gen(2024);
    std::vector<ConformalMetric> metrics;
    metrics.push_back(ConformalMetric::schwarzschild(4));
    metrics.push_back(ConformalMetric::schwarzschild(5));
    metrics.push_back(ConformalMetric::schwarzschild(7));
    metrics.push_back(ConformalMetric::hat_localized(4));
    metrics.push_back(ConformalMetric::hat_localized(6));
    metrics.push_back(ConformalMetric::slab(4, 0.1, 1.5));
    metrics.push_back(ConformalMetric::slab(5, 0.2, 2.2));

    for (const auto& m : metrics) {
        const int n = m.dimension();
        auto value = [&](const Vec& x) { return m.factor(x).value; };
        for (int k = 0; k < 40; ++k) {
            Vec x = gen.point_in_shell(n, 1.5, 12.0);
            FactorJet j = m.factor(x);
            Vec fg = minsurf::testing::fd_gradient(value, x);
            Mat fh = minsurf::testing::fd_hessian(value, x);
            // Floor 1: relative for order-one entries, absolute below; the
            // step-1e-4 stencil itself carries ~1e-8 absolute noise.
            CHECK(minsurf::testing::max_rel_component_diff(j.grad, fg, 1.0) < 1e-6);
            CHECK(minsurf::testing::max_rel_component_diff(j.hess, fh, 1.0) < 1e-6);
        }
    }
}

TEST_CASE("slab factor is exactly one below the equator plane and axisymmetric") {
    auto slab = ConformalMetric::slab(4, 0.1, 1.5);
    SampleGen gen(7);
    for (int k = 0; k < 60; ++k) {
        Vec x = gen.point_in_shell(4, 0.2, 30.0);
        if (x[3] > 0.0) x[3] = -x[3];
        FactorJet j = slab.factor(x);
        CHECK(j.value == 1.0);
        CHECK(norm(j.grad) == 0.0);
    }
    // Invariance under rotations fixing e_n.
    for (int k = 0; k < 30; ++k) {
        Vec x = gen.point_in_shell(4, 0.5, 10.0);
        double ang = gen.uniform(0.0, 2.0 * M_PI);
        Vec y = x;
        y[0] = std::cos(ang) * x[0] - std::sin(ang) * x[1];
        y[1] = std::sin(ang) * x[0] + std::cos(ang) * x[1];
        CHECK_THAT(slab.factor(y).value, Catch::Matchers::WithinRel(slab.factor(x).value, 1e-14));
    }
    // omega positive everywhere sampled, including deep in the interpolated cone.
    for (int k = 0; k < 60; ++k) {
        Vec x = gen.point_in_shell(4, 0.2, 50.0);
        x[3] = std::abs(x[3]) * 3.0 + 1.0;
        CHECK(slab.factor(x).value > 0.0);
    }
}

TEST_CASE("schwarzschild scalar curvature vanishes at 100 random domain points") {
    for (int n : {4, 5}) {
        auto schw = ConformalMetric::schwarzschild(n);
        SampleGen gen(31 + n);
        for (int k = 0; k < 100; ++k) {
            Vec x = gen.point_in_shell(n, 1.0 + 1e-6, 40.0);
            CHECK(std::abs(schw.scalar_curvature(x)) < 1e-8);
        }
    }
}

TEST_CASE("flat scalar curvature is identically zero") {
    auto flat = ConformalMetric::flat(6);
    SampleGen gen(3);
    for (int k = 0; k < 10; ++k)
        CHECK(flat.scalar_curvature(gen.point_in_shell(6, 0.1, 50.0)) == 0.0);
}

TEST_CASE("hat-localized scalar curvature is non-negative on a sample grid") {
    auto hat = ConformalMetric::hat_localized(4);
    SampleGen gen(5);
    double min_r = 1e30;
    for (int k = 0; k < 400; ++k) {
        Vec x = gen.point_in_shell(4, 1.0, 50.0);
        min_r = std::min(min_r, hat.scalar_curvature(x));
    }
    // Also probe near the origin where curvature is largest.
    for (int k = 0; k < 100; ++k) {
        Vec x = gen.point_in_shell(4, 0.05, 1.0);
        min_r = std::min(min_r, hat.scalar_curvature(x));
    }
    CHECK(min_r >= -1e-8);
}

TEST_CASE("analytic curvature matches the finite-difference christoffel oracle") {
    // Independent route: assemble Ricci from metric components alone.
    for (auto metric : {ConformalMetric::hat_localized(4), ConformalMetric::slab(4, 0.1, 1.5),
                        ConformalMetric::schwarzschild(5)}) {
        const int n = metric.dimension();
        FdCurvature oracle(as_metric_field(metric), n);
        SampleGen gen(n * 100 + 1);
        for (int k = 0; k < 15; ++k) {
            Vec x = gen.point_in_shell(n, 1.5, 8.0);
            double r_impl = metric.scalar_curvature(x);
            double r_fd = oracle.scalar(x);
            CHECK(std::abs(r_impl - r_fd) < 1e-5 * std::max(1.0, std::abs(r_impl)));
        }
    }
}

TEST_CASE("ricci_normal: flat vanishes, schwarzschild matches the fd oracle") {
    auto flat = ConformalMetric::flat(4);
    SampleGen gen(17);
    for (int k = 0; k < 10; ++k) {
        Vec x = gen.point_in_shell(4, 0.5, 10.0);
        Vec nu = gen.unit_vector(4);  // flat: euclidean unit = g unit
        CHECK(std::abs(flat.ricci_normal(x, nu)) == 0.0);
    }

    auto schw = ConformalMetric::schwarzschild(4);
    FdCurvature oracle(as_metric_field(schw), 4);
    Vec x = axis_point(4, 2.0, 0.0);
    double w = schw.factor(x).value;
    Vec nu(4);
    nu[0] = 1.0 / std::sqrt(w);  // radial g-unit direction
    double impl = schw.ricci_normal(x, nu);
    double fd = oracle.ricci(x, nu, nu);
    CHECK_THAT(impl, Catch::Matchers::WithinRel(fd, 1e-5));

    // Non-unit normal rejected.
    Vec bad = nu;
    bad[0] *= 1.001;
    CHECK_THROWS_AS(schw.ricci_normal(x, bad), LabError);
}

TEST_CASE("ricci trace over a g-orthonormal frame equals the scalar curvature") {
    for (auto metric : {ConformalMetric::schwarzschild(4), ConformalMetric::hat_localized(5)}) {
        const int n = metric.dimension();
        SampleGen gen(n);
        for (int k = 0; k < 20; ++k) {
            Vec x = gen.point_in_shell(n, 1.2, 20.0);
            FactorJet wj = metric.factor(x);
            double scale = 1.0 / std::sqrt(wj.value);
            double trace = 0.0;
            for (int i = 0; i < n; ++i) {
                Vec e(n);
                e[i] = scale;
                trace += metric.ricci_normal(x, e);
            }
            double r = metric.scalar_curvature(x);
            CHECK(std::abs(trace - r) < 1e-6 * std::max(1.0, std::abs(r)));
        }
    }
}

TEST_CASE("conformal mean curvature law") {
    SECTION("flat metric leaves the euclidean mean curvature unchanged") {
        auto flat = ConformalMetric::flat(4);
        Vec x = axis_point(4, 3.0, 1.0);
        Vec nu(4);
        nu[3] = 1.0;
        CHECK(flat.mean_curvature_from_euclidean(x, 1.75, nu) == 1.75);
    }
    SECTION("the horizon sphere of schwarzschild is minimal") {
        for (int n : {4, 5, 6, 7}) {
            auto schw = ConformalMetric::schwarzschild(n);
            SampleGen gen(77 + n);
            for (int k = 0; k < 10; ++k) {
                Vec x = gen.point_in_shell(n, 1.0, 1.0);
                Vec nu = x;  // outward euclidean unit normal of the unit sphere
                double h = schw.mean_curvature_from_euclidean(x, n - 1.0, nu);
                CHECK(std::abs(h) < 1e-10);
            }
        }
    }
    SECTION("vertical hyperplanes through the origin stay minimal") {
        auto schw = ConformalMetric::schwarzschild(4);
        Vec x(4);
        x[1] = 2.0;
        x[3] = 1.5;  // point on {x_0 = 0}, outside horizon
        Vec nu(4);
        nu[0] = 1.0;
        CHECK(std::abs(schw.mean_curvature_from_euclidean(x, 0.0, nu)) < 1e-14);
    }
}

TEST_CASE("sphere quadrature reproduces areas") {
    for (int n : {3, 4, 5}) {
        double r = 2.5;
        double area = integrate_sphere(n, r, [](const Vec&) { return 1.0; });
        CHECK_THAT(area, Catch::Matchers::WithinRel(unit_sphere_area(n) * std::pow(r, n - 1),
                                                    1e-12));
    }
}

TEST_CASE("adm mass of schwarzschild extrapolates to the mass parameter") {
    std::vector<double> radii;
    for (int k = 0; k <= 6; ++k) radii.push_back(8.0 * std::pow(2.0, k));
    for (int n : {4, 5}) {
        auto schw = ConformalMetric::schwarzschild(n);
        MassEstimate est = adm_mass(schw, radii, n == 5 ? 20 : 32);
        CHECK_THAT(est.limit, Catch::Matchers::WithinRel(2.0, 0.01));
    }
}

TEST_CASE("adm mass of flat space vanishes at every radius") {
    auto flat = ConformalMetric::flat(4);
    std::vector<double> radii = {8.0, 16.0, 32.0};
    MassEstimate est = adm_mass(flat, radii);
    for (double f : est.flux) CHECK(std::abs(f) < 1e-10);
    CHECK(std::abs(est.limit) < 1e-10);
}

TEST_CASE("mass vanishes when the factor decays faster than the critical rate") {
    FastDecayMetric m{4};
    std::vector<double> radii = {8.0, 16.0, 32.0, 64.0, 128.0};
    MassEstimate est = adm_mass(m, radii);
    // Flux sequence tends to zero.
    CHECK(std::abs(est.flux.back()) < std::abs(est.flux.front()));
    CHECK(std::abs(est.flux.back()) < 0.05);
    CHECK(std::abs(est.limit) < 5e-3);
}

TEST_CASE("adm schedule validation") {
    auto schw = ConformalMetric::schwarzschild(4);
    std::vector<double> bad = {8.0, 4.0, 16.0};
    CHECK_THROWS_AS(adm_mass(schw, bad), LabError);
    std::vector<double> two = {8.0, 16.0};
    CHECK_THROWS_AS(adm_mass(schw, two), LabError);
}
