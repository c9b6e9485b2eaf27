#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "srlab/numeric.hpp"
#include "srlab/shortest.hpp"
#include "srlab/structure.hpp"

using namespace srlab;

TEST_CASE("adjoint gradient matches finite differences") {
    srgeom::SRStructure h = srgeom::heisenberg();
    auto rng = num::make_rng(21);
    std::normal_distribution<double> gauss(0.0, 0.5);
    const int N = 16;
    Eigen::MatrixXd u(2, N);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < N; ++j) u(i, j) = gauss(rng);
    Eigen::Vector3d x0(0.0, 0.0, 0.0), x1(0.4, 0.1, 0.05);
    Eigen::VectorXd mu(3);
    mu << 0.3, -0.2, 0.5;
    double rho = 3.0;

    Eigen::MatrixXd grad;
    geodesics::augmented_objective(h, x0, x1, u, mu, rho, &grad);
    REQUIRE(grad.rows() == 2);
    REQUIRE(grad.cols() == N);

    const double fd_h = 1e-6;
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < N; j += 3) {
            Eigen::MatrixXd up = u, dn = u;
            up(i, j) += fd_h;
            dn(i, j) -= fd_h;
            double fp = geodesics::augmented_objective(h, x0, x1, up, mu, rho, nullptr);
            double fm = geodesics::augmented_objective(h, x0, x1, dn, mu, rho, nullptr);
            double fd = (fp - fm) / (2.0 * fd_h);
            worst = std::max(worst, std::abs(fd - grad(i, j)) / (1.0 + std::abs(fd)));
        }
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("horizontal targets are reached by straight lines") {
    srgeom::SRStructure h = srgeom::heisenberg();
    geodesics::SolveOptions opts;
    opts.grid = 64;
    opts.restarts = 2;
    geodesics::SolveResult r =
        geodesics::solve_shortest(h, Eigen::Vector3d::Zero(), Eigen::Vector3d(0.8, 0.0, 0.0), opts);
    REQUIRE(r.converged);
    CHECK(r.endpoint_defect <= 1e-7);
    CHECK(r.traj.length == doctest::Approx(0.8).epsilon(2e-3));
    CHECK(r.traj.speed_defect() <= 1e-9);
    CHECK(r.certificate == "candidate local minimizer");
}

TEST_CASE("vertical target costs the circumference of the area-matching circle") {
    srgeom::SRStructure h = srgeom::heisenberg();
    const double z = 0.1;
    geodesics::SolveOptions opts;
    opts.grid = 128;
    opts.restarts = 8;
    opts.seed = 3;
    geodesics::SolveResult r =
        geodesics::solve_shortest(h, Eigen::Vector3d::Zero(), Eigen::Vector3d(0.0, 0.0, z), opts);
    REQUIRE(r.converged);
    CHECK(r.traj.length == doctest::Approx(2.0 * std::sqrt(M_PI * z)).epsilon(0.015));
}

TEST_CASE("mixed target on the flat structure converges") {
    srgeom::SRStructure m = srgeom::martinet();
    geodesics::SolveOptions opts;
    opts.grid = 96;
    opts.restarts = 3;
    geodesics::SolveResult r = geodesics::solve_shortest(m, Eigen::Vector3d::Zero(),
                                                         Eigen::Vector3d(0.6, 0.4, 0.05), opts);
    CHECK(r.converged);
    CHECK(r.endpoint_defect <= 1e-7);
    CHECK(r.traj.length >= std::sqrt(0.6 * 0.6 + 0.4 * 0.4) - 1e-6);
}

TEST_CASE("repeated solves with one seed are bitwise identical") {
    srgeom::SRStructure h = srgeom::heisenberg();
    geodesics::SolveOptions opts;
    opts.grid = 48;
    opts.restarts = 3;
    opts.seed = 5;
    Eigen::Vector3d tgt(0.5, 0.2, 0.04);
    geodesics::SolveResult a = geodesics::solve_shortest(h, Eigen::Vector3d::Zero(), tgt, opts);
    geodesics::SolveResult b = geodesics::solve_shortest(h, Eigen::Vector3d::Zero(), tgt, opts);
    CHECK(a.traj.length == b.traj.length);
    CHECK((a.traj.controls - b.traj.controls).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("distance probe along a frame direction scales linearly") {
    srgeom::SRStructure h = srgeom::heisenberg();
    std::vector<double> radii = {0.1, 0.2, 0.4};
    geodesics::BallBoxReport rep = geodesics::ballbox_probe(
        h, Eigen::Vector3d::Zero(), Eigen::Vector3d(1, 0, 0), radii, 32, 2, 1);
    REQUIRE(!rep.partial);
    CHECK(rep.exponent == doctest::Approx(1.0).epsilon(0.1));
    CHECK(rep.exponent_in_range);
    CHECK(rep.cbb_horizontal >= 0.9);
}
