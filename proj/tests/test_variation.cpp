#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "srlab/errors.hpp"
#include "srlab/numeric.hpp"
#include "srlab/structure.hpp"
#include "srlab/trajectory.hpp"
#include "srlab/variation.hpp"

using namespace srlab;
using geodesics::Trajectory;
using variation::TestFunction;

namespace {

Trajectory martinet_line(const srgeom::SRStructure& mart, int N) {
    Eigen::MatrixXd ctr = Eigen::MatrixXd::Zero(2, N);
    ctr.row(0).setOnes();
    return geodesics::integrate(mart, Eigen::Vector3d::Zero(), ctr);
}

// u1 = 1, u2 sampled at interval midpoints of cos(2 pi t); the first-order
// endpoint response to a component-0 profile phi is the vertical pairing
// -integral of phi * u2, which for the hat profile is 2/pi^2.
Trajectory oscillating_base(const srgeom::SRStructure& heis, int N) {
    Eigen::MatrixXd ctr(2, N);
    const double dt = 1.0 / N;
    for (int i = 0; i < N; ++i) {
        ctr(0, i) = 1.0;
        ctr(1, i) = std::cos(2.0 * M_PI * (i + 0.5) * dt);
    }
    return geodesics::integrate(heis, Eigen::Vector3d::Zero(), ctr);
}

} // namespace

TEST_CASE("profile norms are the exact piecewise-linear integrals") {
    TestFunction hat = TestFunction::hat(64);
    CHECK(hat.sup_norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(hat.l1_norm() == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(hat.l2_norm() == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-13));

    TestFunction sn = TestFunction::sine(128, 1);
    CHECK(sn.l2_norm() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));

    // slopes integrate back to zero boundary values
    TestFunction rnd = TestFunction::random(96, 11);
    Eigen::VectorXd sl = rnd.slopes();
    CHECK(sl.size() == 96);
    CHECK(std::abs(sl.sum() * rnd.dt()) <= 1e-12);
}

TEST_CASE("grid of variation amplitudes") {
    std::vector<double> g = variation::lambda_grid(1e-3, 1e-1);
    REQUIRE(g.size() == 15);
    CHECK(g.front() == doctest::Approx(1e-3).epsilon(1e-14));
    CHECK(g.back() == doctest::Approx(1e-1).epsilon(1e-14));
    for (size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}

TEST_CASE("length formula matches the re-integrated length") {
    auto heis = srgeom::catalogue("heisenberg");
    auto rng = num::make_rng(7);
    std::normal_distribution<double> gauss(0.0, 0.4);
    const int N = 48;
    Eigen::MatrixXd ctr(2, N);
    for (int i = 0; i < N; ++i) {
        ctr(0, i) = 0.8 + gauss(rng);
        ctr(1, i) = gauss(rng);
    }
    Trajectory base = geodesics::integrate(heis, Eigen::Vector3d::Zero(), ctr);
    for (int c = 0; c < 2; ++c) {
        for (std::uint64_t sd : {21u, 22u, 23u}) {
            TestFunction phi = TestFunction::random(N, sd);
            variation::VariationResult vr = variation::vary(heis, base, phi, 0.05, c);
            CHECK(std::abs(vr.varied.length - vr.length_formula) <=
                  1e-12 * (1.0 + base.length));
            CHECK(vr.length_change == doctest::Approx(vr.varied.length - base.length)
                                          .epsilon(1e-12));
        }
    }
}

TEST_CASE("straight abnormal base: exact deviation identities") {
    auto mart = srgeom::catalogue("martinet");
    const int N = 128;
    Trajectory base = martinet_line(mart, N);
    TestFunction hat = TestFunction::hat(N);
    const double lam = 1e-2;

    // perturbing the aligned component slides along the same line
    variation::VariationResult v0 = variation::vary(mart, base, hat, lam, 0);
    CHECK(v0.endpoint_deviation <= 1e-13);

    // perturbing the transverse component: x2 = -lambda phi, so the third
    // coordinate picks up exactly (lambda^2 / 2) |phi|_2^2 (the one-step
    // integrator is exact on this quadratic integrand)
    variation::VariationResult v1 = variation::vary(mart, base, hat, lam, 1);
    double expected = 0.5 * lam * lam * hat.l2_norm() * hat.l2_norm();
    CHECK(v1.endpoint_deviation == doctest::Approx(expected).epsilon(1e-10));

    // order fits: aligned component moves nothing, transverse is quadratic
    std::vector<double> lam_grid = variation::lambda_grid(1e-3, 1e-1);
    CHECK_THROWS_AS(variation::endpoint_order(mart, base, hat, 0, lam_grid),
                    srlab::insufficient_data);
    variation::OrderFit fit = variation::endpoint_order(mart, base, hat, 1, lam_grid);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-6));

    // every moment sample vanishes on the singular line, so the projection
    // has nothing to remove
    variation::ProjectionResult pr = variation::project_to_H(mart, base, hat, 1);
    CHECK(pr.degenerate);
    CHECK(pr.active_constraints == 0);
    CHECK((pr.projected.values - hat.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("oscillating base: first-order coefficient and projection") {
    auto heis = srgeom::catalogue("heisenberg");
    const int N = 256;
    Trajectory base = oscillating_base(heis, N);
    TestFunction hat = TestFunction::hat(N);

    // |deviation| / lambda approaches |integral of hat * cos(2 pi t)| = 2/pi^2
    const double lam = 1e-4;
    variation::VariationResult vr = variation::vary(heis, base, hat, lam, 0);
    double coeff = vr.endpoint_deviation / lam;
    CHECK(std::abs(coeff - 2.0 / (M_PI * M_PI)) <= 3e-3);

    // raw variation is first order, the projected one second order
    std::vector<double> lam_grid = variation::lambda_grid(1e-3, 1e-1);
    variation::OrderFit raw = variation::endpoint_order(heis, base, hat, 0, lam_grid);
    CHECK(raw.slope == doctest::Approx(1.0).epsilon(0.1));

    variation::ProjectionResult pr = variation::project_to_H(heis, base, hat, 0);
    CHECK(!pr.degenerate);
    CHECK(pr.active_constraints >= 1);
    CHECK(pr.residual <= 1e-10);

    // the endpoint map of this structure is affine in each control slot, so
    // removing the first-order pairing removes the whole deviation: the
    // order fit has no signal left to work with
    CHECK_THROWS_AS(variation::endpoint_order(heis, base, pr.projected, 0, lam_grid),
                    srlab::insufficient_data);
    variation::VariationResult vp = variation::vary(heis, base, pr.projected, 1e-2, 0);
    CHECK(vp.endpoint_deviation <= 1e-12);
}

TEST_CASE("pointwise deviation bound holds with the explicit constant") {
    auto heis = srgeom::catalogue("heisenberg");
    const int N = 128;
    Trajectory base = oscillating_base(heis, N);
    CHECK(variation::deviation_constant(heis, base.length) >= 1.0);
    for (int c = 0; c < 2; ++c) {
        for (std::uint64_t sd : {101u, 102u}) {
            TestFunction phi = TestFunction::random(N, sd);
            variation::FirstOrderCheck fc =
                variation::first_order_check(heis, base, phi, 1e-2, c);
            CHECK(fc.holds);
            CHECK(fc.max_excess <= 1e-8);
            CHECK(fc.max_ratio <= 1.0 + 1e-12);
            CHECK(fc.constant >= 1.0);
        }
    }
}
