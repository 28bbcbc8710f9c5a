#include <catch2/catch_amalgamated.hpp>

#include "minsurf/foliation.hpp"
#include "oracles.hpp"

using namespace minsurf;

namespace {

std::vector<double> geometric_schedule(double first, int count) {
    std::vector<double> r;
    for (int k = 0; k < count; ++k) r.push_back(first * std::pow(2.0, k));
    return r;
}

}  // namespace

TEST_CASE("flat leaves converge immediately to the plane") {
    auto flat = ConformalMetric::flat(4);
    auto sched = geometric_schedule(60.0, 5);
    Leaf leaf = build_leaf(flat, 1.0, sched, 25.0);
    CHECK(leaf.converged);
    CHECK(leaf.radii_used.size() <= 4);  // settles at the first extrapolation pair
    for (double f : leaf.view_f) CHECK_THAT(f, Catch::Matchers::WithinAbs(1.0, 1e-10));
    CHECK_THAT(leaf.inf_height, Catch::Matchers::WithinAbs(1.0, 1e-10));
}

TEST_CASE("schwarzschild leaf converges with decreasing history") {
    auto schw = ConformalMetric::schwarzschild(4);
    auto sched = geometric_schedule(50.0, 12);
    Leaf leaf = build_leaf(schw, 1.0, sched, 25.0);
    CHECK(leaf.converged);
    CHECK(leaf.extrap_diffs.back() < 1e-6);
    for (size_t i = 0; i + 1 < leaf.raw_diffs.size(); ++i)
        CHECK(leaf.raw_diffs[i + 1] < leaf.raw_diffs[i]);
    // boundary effect decays like 1/r for n = 4
    CHECK_THAT(leaf.fitted_rates.back(), Catch::Matchers::WithinAbs(1.0, 0.2));
    // inf over the full profile is the boundary height
    CHECK_THAT(leaf.inf_height, Catch::Matchers::WithinAbs(1.0, 1e-8));
    // view stays above the plane and decreases outward
    CHECK(leaf.view_f.front() > leaf.view_f.back());
    CHECK(leaf.view_f.back() > 1.0);
    CHECK(all_pass(leaf.solution_checks));
}

TEST_CASE("iterates rise monotonically toward the leaf as the radius grows") {
    // The boundary circle pins f(r) = z below the limit profile, so larger
    // radii release the surface upward: f_{r',z} >= f_{r,z} for r' > r.
    auto schw = ConformalMetric::schwarzschild(4);
    RadialProfile small = solve_plateau(ShootingProblem(schw, 100.0, 1.0));
    RadialProfile large = solve_plateau(ShootingProblem(schw, 200.0, 1.0));
    for (int i = 1; i <= 100; ++i) {
        double t = std::max(small.t_min(), 90.0 * i / 100.0);
        CHECK(large.height(t) >= small.height(t) - 1e-9);
    }
}

TEST_CASE("high leaves flatten toward constant planes") {
    auto schw = ConformalMetric::schwarzschild(4);
    auto sched = geometric_schedule(220.0, 10);
    LeafOptions opt;
    opt.tolerance = 5e-6;  // the flatness assertion only needs 1e-3
    Leaf leaf = build_leaf(schw, 100.0, sched, 25.0, opt);
    double osc = 0.0;
    for (double f : leaf.view_f) osc = std::max(osc, f - leaf.view_f.back());
    CHECK(osc < 1e-3);
}

TEST_CASE("foliation scan: ordered leaves with positive gaps") {
    auto schw = ConformalMetric::schwarzschild(4);
    auto sched = geometric_schedule(50.0, 12);
    std::vector<double> zs = {1.0, 2.0, 4.0};
    FoliationScan scan = foliation_scan(schw, zs, sched, 20.0);
    CHECK(scan.report.pass);
    CHECK(scan.report.details.at("min_gap") > 0.5);

    // negative control: perturb one leaf across its neighbor
    FoliationScan corrupted = scan;
    for (double& f : corrupted.leaves[1].view_f) f += 3.0;
    CheckReport bad = foliation_ordering_report(corrupted.leaves);
    CHECK(!bad.pass);
}

TEST_CASE("foliation scan on the flat metric has exact gaps") {
    auto flat = ConformalMetric::flat(4);
    auto sched = geometric_schedule(60.0, 4);
    std::vector<double> zs = {1.0, 2.5};
    FoliationScan scan = foliation_scan(flat, zs, sched, 25.0);
    CHECK(scan.report.pass);
    CHECK_THAT(scan.report.details.at("min_gap"), Catch::Matchers::WithinAbs(1.5, 1e-9));
}

TEST_CASE("sigma0 limit: inf heights equal z and leaves descend") {
    auto schw = ConformalMetric::schwarzschild(4);
    auto sched = geometric_schedule(50.0, 12);
    std::vector<double> zs = {0.5, 0.25, 0.125};
    Sigma0Limit lim = sigma0_limit(schw, zs, sched, 20.0, 1e-6);
    CHECK(lim.report.pass);
    CHECK(lim.report.measured < 1e-6);
    CHECK(lim.leaves.size() == 3);
}

TEST_CASE("decay fit: leaf tail exponent matches 3 - n") {
    auto schw4 = ConformalMetric::schwarzschild(4);
    auto sched = geometric_schedule(50.0, 12);
    Leaf leaf4 = build_leaf(schw4, 1.0, sched, 25.0);
    DecayFit fit4 = decay_fit(leaf4);
    CHECK_THAT(fit4.exponent, Catch::Matchers::WithinAbs(-1.0, 0.3));

    auto schw5 = ConformalMetric::schwarzschild(5);
    Leaf leaf5 = build_leaf(schw5, 1.0, sched, 25.0);
    DecayFit fit5 = decay_fit(leaf5);
    CHECK_THAT(fit5.exponent, Catch::Matchers::WithinAbs(-2.0, 0.3));
}

TEST_CASE("decay fit on an exact plane reports a flat tail") {
    auto flat = ConformalMetric::flat(4);
    auto sched = geometric_schedule(210.0, 4);
    Leaf leaf = build_leaf(flat, 1.0, sched, 25.0);
    bool threw = false;
    try {
        decay_fit(leaf);
    } catch (const LabError& e) {
        threw = true;
        CHECK(e.code() == ErrorCode::tail_too_flat);
    }
    CHECK(threw);
}

TEST_CASE("leaf schedule validation") {
    auto schw = ConformalMetric::schwarzschild(4);
    std::vector<double> bad = {30.0, 60.0, 120.0};  // first entry below 2*T_view
    CHECK_THROWS_AS(build_leaf(schw, 1.0, bad, 25.0), LabError);
    std::vector<double> short_sched = {60.0, 120.0, 240.0};
    LeafOptions opt;
    opt.tolerance = 1e-12;  // unreachable: schedule exhausts
    bool threw = false;
    try {
        build_leaf(schw, 1.0, short_sched, 25.0, opt);
    } catch (const LabError& e) {
        threw = true;
        CHECK(e.code() == ErrorCode::not_converged);
    }
    CHECK(threw);
}
