#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "srlab/errors.hpp"
#include "srlab/numeric.hpp"
#include "srlab/regularity.hpp"

using namespace srlab;
using regularity::SampledControl;

namespace {

SampledControl step_control(int N) {
    SampledControl u;
    u.values = Eigen::MatrixXd::Ones(1, N);
    for (int j = N / 2; j < N; ++j) u.values(0, j) = -1.0;
    return u;
}

} // namespace

TEST_CASE("step moduli are exactly 2 sqrt(h) in L2 and 2h in L1") {
    SampledControl u = step_control(64);
    for (int k : {1, 2, 4, 8}) {
        double h = k * u.dt();
        CHECK(regularity::modulus_at(u, 2.0, k) == doctest::Approx(2.0 * std::sqrt(h)).epsilon(1e-12));
        CHECK(regularity::modulus_at(u, 1.0, k) == doctest::Approx(2.0 * h).epsilon(1e-12));
        // the step is symmetric, so backward shifts see the same mass
        CHECK(regularity::modulus_at(u, 2.0, -k) ==
              doctest::Approx(regularity::modulus_at(u, 2.0, k)).epsilon(1e-12));
    }
    double used = 0.0;
    regularity::modulus(u, 2.0, 0.126, &used);
    CHECK(used == doctest::Approx(8 * u.dt()));  // rounded to the grid
}

TEST_CASE("fitted exponents recover the square-root and linear profiles") {
    SampledControl u = step_control(256);
    regularity::ExponentFit f2 = regularity::fit_exponent(u, 2.0);
    CHECK(!f2.exact_invariance);
    CHECK(f2.alpha == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(f2.residual <= 1e-10);
    regularity::ExponentFit f1 = regularity::fit_exponent(u, 1.0);
    CHECK(f1.alpha == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("holder constant and seminorm of the step") {
    SampledControl u = step_control(256);
    regularity::HolderConstant hc = regularity::holder_constant(u, 2.0, 0.5);
    CHECK(hc.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(regularity::besov_norm(u, 2.0, 0.5) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("constant controls trip the exact-invariance sentinel") {
    SampledControl u;
    u.values = Eigen::MatrixXd::Constant(2, 64, 0.7);
    regularity::ExponentFit f = regularity::fit_exponent(u, 2.0);
    CHECK(f.exact_invariance);
}

TEST_CASE("too few usable shifts raise insufficient_data") {
    SampledControl u = step_control(64);
    CHECK_THROWS_AS(regularity::fit_exponent(u, 2.0, {0.125, 0.0625}), insufficient_data);
}

TEST_CASE("window validation") {
    SampledControl u = step_control(64);
    u.delta = 0.5;  // more than a quarter of the window
    CHECK_THROWS(u.validate());
    SampledControl v = step_control(64);
    CHECK_NOTHROW(v.validate());
    SampledControl w = step_control(16);  // 2 samples per default delta window
    CHECK_THROWS(w.validate());
}

TEST_CASE("energy identity for constant-speed controls") {
    const int N = 128;
    SampledControl u;
    u.values.resize(2, N);
    const double l = 1.3;
    for (int j = 0; j < N; ++j) {
        double th = 2.0 * M_PI * (j + 0.5) / N * 0.3;
        u.values(0, j) = l * std::cos(th);
        u.values(1, j) = l * std::sin(th);
    }
    regularity::PoincareCheck pc = regularity::poincare_ratio(u, 2.0, 0.5);
    CHECK(pc.identity_residual <= 1e-12);
    CHECK(pc.mean_speed == doctest::Approx(l).epsilon(1e-12));
    CHECK(pc.ratio > 0.0);
    CHECK(std::isfinite(pc.ratio));
    Eigen::Vector2d mean = u.values.rowwise().mean();
    CHECK(pc.deviation_norm ==
          doctest::Approx(std::sqrt(l * l - mean.squaredNorm())).epsilon(1e-10));
}

TEST_CASE("smoothing rate table lands in the error band") {
    SampledControl u = step_control(256);
    std::vector<double> eps = {0.2, 0.1, 0.05};
    regularity::ApproxRateTable t = regularity::smooth_approx_rate(u, 1.0, eps);
    REQUIRE(t.rows.size() == eps.size());
    for (const auto& r : t.rows) {
        CHECK(r.in_band);
        CHECK(r.achieved <= r.eps * (1.0 + 1e-9));
        CHECK(r.achieved >= r.eps / 2.0 * (1.0 - 1e-9));
        CHECK(r.dw_sup > 0.0);
    }
    CHECK(!t.partial);
}

TEST_CASE("aggregated report carries every table") {
    SampledControl u = step_control(128);
    regularity::RegularityReport rep = regularity::analyze(u, {1.0, 2.0}, 0.5);
    CHECK(rep.moduli.size() == 2);
    CHECK(rep.fits.size() == 2);
    CHECK(rep.holder.size() == 2);
    REQUIRE(rep.poincare.has_value());
    CHECK(!rep.approx.has_value());
    for (const auto& t : rep.moduli) {
        REQUIRE(!t.h.empty());
        for (size_t i = 0; i + 1 < t.h.size(); ++i) CHECK(t.h[i] > t.h[i + 1]);
    }
}
