#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include <Eigen/Dense>

#include "srlab/errors.hpp"
#include "srlab/numeric.hpp"
#include "srlab/structure.hpp"
#include "srlab/trajectory.hpp"

using namespace srlab;
using geodesics::Trajectory;

namespace {

Eigen::MatrixXd random_controls(int k, int N, double scale, std::uint64_t seed) {
    auto rng = num::make_rng(seed);
    std::normal_distribution<double> gauss(0.0, scale);
    Eigen::MatrixXd u(k, N);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < N; ++j) u(i, j) = gauss(rng);
    return u;
}

} // namespace

TEST_CASE("constant controls integrate to closed-form endpoints") {
    srgeom::SRStructure h = srgeom::heisenberg();
    const int N = 64;
    Eigen::MatrixXd u(2, N);
    u.row(0).setConstant(0.7);
    u.row(1).setConstant(-0.4);
    Trajectory t = geodesics::integrate(h, Eigen::Vector3d::Zero(), u);
    // x3' = (x1 u2 - x2 u1)/2 vanishes along straight lines through 0
    CHECK(std::abs(t.state(N)[0] - 0.7) <= 1e-13);
    CHECK(std::abs(t.state(N)[1] + 0.4) <= 1e-13);
    CHECK(std::abs(t.state(N)[2]) <= 1e-13);
    CHECK(t.length == doctest::Approx(std::hypot(0.7, 0.4)).epsilon(1e-12));
    CHECK(t.speed_defect() <= 1e-13);
    CHECK(t.mean_speed() == doctest::Approx(std::hypot(0.7, 0.4)));
}

TEST_CASE("node states satisfy the discrete dynamics step by step") {
    srgeom::SRStructure m = srgeom::martinet();
    Eigen::MatrixXd u = random_controls(2, 32, 0.8, 5);
    Trajectory t = geodesics::integrate(m, Eigen::Vector3d(0.1, -0.2, 0.0), u);
    for (int i = 0; i < t.intervals(); ++i) {
        Eigen::VectorXd next = geodesics::rk4_step(m, t.state(i), u.col(i), t.dt());
        CHECK((next - t.state(i + 1)).norm() <= 1e-14);
    }
}

TEST_CASE("leaving the box raises escape_error with the exit time") {
    srgeom::SRStructure h = srgeom::heisenberg();
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(2, 16);
    u.row(0).setConstant(5.0);  // reaches x1 = 2 at t = 0.4
    bool thrown = false;
    try {
        geodesics::integrate(h, Eigen::Vector3d::Zero(), u);
    } catch (const escape_error& e) {
        thrown = true;
        CHECK(e.exit_time() > 0.3);
        CHECK(e.exit_time() < 0.6);
    }
    CHECK(thrown);
    CHECK_NOTHROW(geodesics::integrate(h, Eigen::Vector3d::Zero(), u, false));
}

TEST_CASE("linearized flow obeys the exponential bound") {
    for (const auto& s : {srgeom::heisenberg(), srgeom::martinet()}) {
        Eigen::MatrixXd u = random_controls(2, 48, 0.5, 7);
        Trajectory t = geodesics::integrate(s, Eigen::Vector3d::Zero(), u, false);
        double bound = std::exp(s.rank_k * t.length * s.field_bound) + 0.1;
        for (int excluded : {-1, 0, 1}) {
            geodesics::VariationalFlow f = geodesics::variational_flow(s, t, excluded);
            REQUIRE(f.P.size() == static_cast<size_t>(t.intervals() + 1));
            for (size_t i = 0; i < f.P.size(); ++i) {
                CHECK(f.P[i].operatorNorm() <= bound);
                CHECK(f.P_inv[i].operatorNorm() <= bound);
                CHECK((f.P[i] * f.P_inv[i] - Eigen::MatrixXd::Identity(s.dim_n, s.dim_n))
                          .norm() <= 1e-10);
            }
        }
    }
    CHECK_THROWS(geodesics::variational_flow(srgeom::heisenberg(),
                                             geodesics::integrate(srgeom::heisenberg(),
                                                                  Eigen::Vector3d::Zero(),
                                                                  Eigen::MatrixXd::Zero(2, 8)),
                                             5));
}

TEST_CASE("vertical direction is invariant under the plane-frame flow") {
    srgeom::SRStructure h = srgeom::heisenberg();
    Eigen::MatrixXd u = random_controls(2, 32, 0.7, 9);
    Trajectory t = geodesics::integrate(h, Eigen::Vector3d::Zero(), u, false);
    geodesics::VariationalFlow f = geodesics::variational_flow(h, t, -1);
    Eigen::Vector3d e3(0.0, 0.0, 1.0);
    for (const auto& Pinv : f.P_inv) CHECK((Pinv * e3 - e3).norm() <= 1e-12);
    for (const auto& P : f.P) CHECK((P * e3 - e3).norm() <= 1e-12);
}

TEST_CASE("constant-speed reparametrization preserves length and endpoint") {
    srgeom::SRStructure h = srgeom::heisenberg();
    // non-constant speed, smoothly turning direction (a direction sequence
    // rougher than the grid cannot survive any same-grid resampling)
    const int N = 64;
    Eigen::MatrixXd u(2, N);
    for (int i = 0; i < N; ++i) {
        double t = (i + 0.5) / N;
        double speed = 1.0 + 0.5 * std::cos(2.0 * M_PI * t);
        double theta = 0.7 * std::sin(2.0 * M_PI * t);
        u(0, i) = speed * std::cos(theta);
        u(1, i) = speed * std::sin(theta);
    }
    Trajectory t = geodesics::integrate(h, Eigen::Vector3d::Zero(), u, false);
    CHECK(t.speed_defect() > 0.3);  // genuinely non-constant before
    Trajectory r = geodesics::reparam_constant_speed(h, t);
    CHECK(r.speed_defect() <= 1e-10 * (1.0 + r.mean_speed()));
    CHECK(std::abs(r.length - t.length) <= 1e-10 * t.length);
    CHECK((r.state(r.intervals()) - t.state(t.intervals())).norm() <= 2e-3 * (1.0 + t.length));
    CHECK_THROWS_AS(geodesics::reparam_constant_speed(
                        h, geodesics::integrate(h, Eigen::Vector3d::Zero(),
                                                Eigen::MatrixXd::Zero(2, 8))),
                    std::invalid_argument);
}

TEST_CASE("trajectory JSON round trip is bit exact") {
    srgeom::SRStructure h = srgeom::heisenberg();
    Eigen::MatrixXd u = random_controls(2, 24, 0.9, 17);
    Trajectory t = geodesics::integrate(h, Eigen::Vector3d::Zero(), u, false);
    t.structure = "heisenberg";
    std::string path = (std::filesystem::temp_directory_path() / "srlab_traj_rt.json").string();
    geodesics::save_trajectory_json(t, path);
    Trajectory r = geodesics::load_trajectory_json(path);
    CHECK(r.structure == t.structure);
    REQUIRE(r.states.rows() == t.states.rows());
    REQUIRE(r.controls.cols() == t.controls.cols());
    CHECK((r.states - t.states).cwiseAbs().maxCoeff() == 0.0);
    CHECK((r.controls - t.controls).cwiseAbs().maxCoeff() == 0.0);
    CHECK(r.length == t.length);
    std::filesystem::remove(path);
}
