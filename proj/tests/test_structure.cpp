#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include <Eigen/Dense>

#include "srlab/numeric.hpp"
#include "srlab/structure.hpp"

using namespace srlab;
using srgeom::SRStructure;

TEST_CASE("catalogue dimensions and declared steps") {
    SRStructure h = srgeom::heisenberg();
    CHECK(h.dim_n == 3);
    CHECK(h.rank_k == 2);
    CHECK(h.declared_step == 2);

    SRStructure m = srgeom::martinet();
    CHECK(m.dim_n == 3);
    CHECK(m.declared_step == 3);

    SRStructure e = srgeom::engel();
    CHECK(e.dim_n == 4);
    CHECK(e.rank_k == 2);
    CHECK(e.declared_step == 3);

    CHECK(srgeom::catalogue("martinet").name == "martinet");
    CHECK_THROWS(srgeom::catalogue("nosuch"));
}

TEST_CASE("frame fields evaluate to their defining formulas") {
    SRStructure h = srgeom::heisenberg();
    Eigen::Vector3d x(0.3, -0.7, 1.1);
    Eigen::MatrixXd F = h.eval_frame(x);
    CHECK(F(0, 0) == doctest::Approx(1.0));
    CHECK(F(1, 0) == doctest::Approx(0.0));
    CHECK(F(2, 0) == doctest::Approx(0.35));   // -x2/2
    CHECK(F(0, 1) == doctest::Approx(0.0));
    CHECK(F(1, 1) == doctest::Approx(1.0));
    CHECK(F(2, 1) == doctest::Approx(0.15));   // x1/2

    SRStructure m = srgeom::martinet();
    Eigen::Vector3d y(0.0, 0.4, 0.0);
    Eigen::MatrixXd G = m.eval_frame(y);
    CHECK(G(2, 0) == doctest::Approx(0.08));   // x2^2/2
    CHECK(G(2, 1) == doctest::Approx(0.0));

    SRStructure e = srgeom::engel();
    Eigen::Vector4d z(0.5, 0.0, 0.0, 0.0);
    Eigen::MatrixXd E = e.eval_frame(z);
    CHECK(E(2, 1) == doctest::Approx(0.5));    // x1
    CHECK(E(3, 1) == doctest::Approx(0.125));  // x1^2/2
}

TEST_CASE("analytic and finite-difference brackets agree") {
    auto rng = num::make_rng(3);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (const auto& s : {srgeom::heisenberg(), srgeom::martinet(), srgeom::engel()}) {
        for (int t = 0; t < 10; ++t) {
            Eigen::VectorXd x(s.dim_n);
            for (int i = 0; i < s.dim_n; ++i) x[i] = uni(rng);
            Eigen::VectorXd a = srgeom::lie_bracket_at(s, 0, 1, x);
            Eigen::VectorXd b = srgeom::lie_bracket_fd(s, 0, 1, x);
            CHECK((a - b).norm() <= 1e-6 * (1.0 + a.norm()));
        }
    }
}

TEST_CASE("vertical bracket of the plane frame") {
    SRStructure h = srgeom::heisenberg();
    Eigen::Vector3d x(0.2, 0.9, -0.4);
    Eigen::Vector3d br = srgeom::lie_bracket_at(h, 0, 1, x);
    CHECK(br[0] == doctest::Approx(0.0));
    CHECK(br[1] == doctest::Approx(0.0));
    CHECK(std::abs(br[2]) == doctest::Approx(1.0));
    // antisymmetry
    Eigen::Vector3d rb = srgeom::lie_bracket_at(h, 1, 0, x);
    CHECK((br + rb).norm() <= 1e-14);
}

TEST_CASE("bracket-generating depth at reference points") {
    SRStructure h = srgeom::heisenberg();
    auto sh = srgeom::hoermander_step(h, Eigen::Vector3d::Zero(), 4);
    REQUIRE(sh.has_value());
    CHECK(*sh == 2);

    SRStructure m = srgeom::martinet();
    auto s0 = srgeom::hoermander_step(m, Eigen::Vector3d::Zero(), 5);
    REQUIRE(s0.has_value());
    CHECK(*s0 == 3);
    auto s1 = srgeom::hoermander_step(m, Eigen::Vector3d(0.0, 0.5, 0.0), 5);
    REQUIRE(s1.has_value());
    CHECK(*s1 == 2);

    SRStructure e = srgeom::engel();
    auto se = srgeom::hoermander_step(e, Eigen::Vector4d::Zero(), 5);
    REQUIRE(se.has_value());
    CHECK(*se == 3);
}

TEST_CASE("field bounds over the default box") {
    CHECK(srgeom::heisenberg().field_bound == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
    CHECK(srgeom::martinet().field_bound == doctest::Approx(std::sqrt(5.0)).epsilon(0.02));
    CHECK(srgeom::engel().field_bound == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("orthonormality residual vanishes for catalogue frames") {
    SRStructure h = srgeom::heisenberg();
    std::vector<Eigen::VectorXd> pts;
    pts.push_back(Eigen::Vector3d(0.1, 0.2, 0.3));
    pts.push_back(Eigen::Vector3d(-1.0, 1.0, 0.0));
    CHECK(srgeom::orthonormality_residual(h, pts) <= 1e-14);
}

TEST_CASE("drift and its jacobian match the frame contraction") {
    SRStructure h = srgeom::heisenberg();
    Eigen::Vector3d x(0.4, -0.2, 0.0);
    Eigen::Vector2d u(2.0, -1.0);
    Eigen::Vector3d d = h.drift(x, u);
    CHECK((d - (2.0 * h.eval_frame(x).col(0) - h.eval_frame(x).col(1))).norm() <= 1e-14);
    Eigen::MatrixXd J = h.drift_jacobian(x, u);
    CHECK((J - (2.0 * h.frame_jacobian(0, x) - h.frame_jacobian(1, x))).norm() <= 1e-14);
}

TEST_CASE("structure files round-trip") {
    SRStructure m = srgeom::martinet();
    std::string path = (std::filesystem::temp_directory_path() / "srlab_struct_rt.txt").string();
    srgeom::save_structure(m, path);
    SRStructure r = srgeom::load_structure(path);
    CHECK(r.dim_n == m.dim_n);
    CHECK(r.rank_k == m.rank_k);
    CHECK(r.declared_step == m.declared_step);
    auto rng = num::make_rng(11);
    std::uniform_real_distribution<double> uni(-1.5, 1.5);
    for (int t = 0; t < 20; ++t) {
        Eigen::Vector3d x(uni(rng), uni(rng), uni(rng));
        CHECK((r.eval_frame(x) - m.eval_frame(x)).norm() <= 1e-12);
    }
    std::filesystem::remove(path);
}

TEST_CASE("box membership") {
    SRStructure h = srgeom::heisenberg();
    CHECK(h.in_box(Eigen::Vector3d(1.9, -1.9, 0.0)));
    CHECK(!h.in_box(Eigen::Vector3d(2.1, 0.0, 0.0)));
    CHECK(h.in_box(Eigen::Vector3d(2.05, 0.0, 0.0), 0.1));
}
