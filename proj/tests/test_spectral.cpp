#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "srlab/numeric.hpp"
#include "srlab/regularity.hpp"
#include "srlab/spectral.hpp"

using namespace srlab;
using regularity::SampledControl;

namespace {

Eigen::MatrixXd step_values(int N) {
    Eigen::MatrixXd v = Eigen::MatrixXd::Ones(1, N);
    for (int j = N / 2; j < N; ++j) v(0, j) = -1.0;
    return v;
}

Eigen::MatrixXd midpoint_cos(int N, int m, double amp = 1.0) {
    Eigen::MatrixXd v(1, N);
    for (int j = 0; j < N; ++j)
        v(0, j) = amp * std::cos(2.0 * M_PI * m * (j + 0.5) / N);
    return v;
}

SampledControl wrap(const Eigen::MatrixXd& v) {
    SampledControl u;
    u.values = v;
    return u;
}

} // namespace

TEST_CASE("single-harmonic transform is exact") {
    const int N = 256;
    spectral::FourierTable t = spectral::fourier_coeffs(midpoint_cos(N, 1), N / 2 - 1);
    CHECK(std::abs(t.at(1)(0) - std::complex<double>(0.5, 0.0)) <= 1e-13);
    CHECK(std::abs(t.at(0)(0)) <= 1e-13);
    for (int m = 2; m <= t.max_mode; ++m) CHECK(std::abs(t.at(m)(0)) <= 1e-12);

    // signed modes by conjugation
    CHECK(t.at(-1)(0) == std::conj(t.at(1)(0)));
    CHECK(t.power_abs(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("constant control concentrates at mode zero") {
    Eigen::MatrixXd v = Eigen::MatrixXd::Constant(1, 64, 0.7);
    spectral::FourierTable t = spectral::fourier_coeffs(v, 31);
    CHECK(t.power(0) == doctest::Approx(0.49).epsilon(1e-13));
    for (int m = 1; m <= 31; ++m) CHECK(t.power(m) <= 1e-26);
    CHECK(t.total_power() == doctest::Approx(0.49).epsilon(1e-12));
}

TEST_CASE("band-limited energy identity") {
    const int N = 64;
    Eigen::MatrixXd v = midpoint_cos(N, 1, 0.9) + midpoint_cos(N, 2, -0.4) +
                        midpoint_cos(N, 3, 0.25) +
                        Eigen::MatrixXd::Constant(1, N, 0.3);
    spectral::FourierTable t = spectral::fourier_coeffs(v, N / 2 - 1);
    double energy = v.squaredNorm() / N;  // dt * sum of squares
    CHECK(t.total_power() == doctest::Approx(energy).epsilon(1e-12));
}

TEST_CASE("step control: closed-form coefficients and decay fit") {
    const int N = 1024;
    spectral::FourierTable t = spectral::fourier_coeffs(step_values(N), N / 2 - 1);
    for (int m = 1; m <= t.max_mode; ++m) {
        double a = std::abs(t.at(m)(0));
        if (m % 2 == 1) {
            double exact = (2.0 / N) / std::sin(M_PI * m / N);
            CHECK(std::abs(a - exact) <= 1e-12);
        } else {
            CHECK(a <= 1e-14);
        }
    }
    num::LineFit lf = spectral::decay_fit(t, 4, 32);
    CHECK(lf.slope == doctest::Approx(-1.0).epsilon(0.02));

    // unweighted tail mass beyond the table, against the 4/(pi^2 M) law
    double tail = spectral::tail_estimate(t, 0.0);
    double law = 4.0 / (M_PI * M_PI * t.max_mode);
    CHECK(tail >= 0.5 * law);
    CHECK(tail <= 2.0 * law);
}

TEST_CASE("weighted sums separate summable from non-summable weights") {
    const int N = 4096;
    spectral::FourierTable t = spectral::fourier_coeffs(step_values(N), N / 2 - 1);

    spectral::WeightedSumReport lo = spectral::weighted_sum(t, 0.4);
    CHECK(lo.converging);
    CHECK(lo.last_ratio <= 1.05);
    CHECK(lo.value > 0.0);
    CHECK(std::isfinite(lo.tail));

    spectral::WeightedSumReport hi = spectral::weighted_sum(t, 0.6);
    CHECK(!hi.converging);
    CHECK(hi.last_ratio > 1.05);

    spectral::EllGammaReport g2 = spectral::ell_gamma_norm(t, 2.0);
    CHECK(g2.converging);
    spectral::EllGammaReport g1 = spectral::ell_gamma_norm(t, 1.0);
    CHECK(!g1.converging);
}

TEST_CASE("partial-sum errors: half-order decay for the step") {
    const int N = 4096;
    SampledControl u = wrap(step_values(N));
    std::vector<int> Ms;
    for (int M = 16; M <= N / 4; M *= 2) Ms.push_back(M);
    spectral::TruncationReport rep = spectral::partial_sum_error(u, Ms);
    REQUIRE(rep.rows.size() == Ms.size());
    CHECK(rep.slope_valid);
    CHECK(rep.slope == doctest::Approx(-0.5).epsilon(0.1));
    for (size_t i = 1; i < rep.rows.size(); ++i)
        CHECK(rep.rows[i].error < rep.rows[i - 1].error);
}

TEST_CASE("partial-sum errors on a trigonometric polynomial hit the floor") {
    const int N = 256;
    Eigen::MatrixXd v = midpoint_cos(N, 1) + midpoint_cos(N, 3, 0.5);
    SampledControl u = wrap(v);
    spectral::TruncationReport rep = spectral::partial_sum_error(u, {4, 8, 16, 32});
    for (const auto& r : rep.rows) CHECK(r.at_floor);
    CHECK(!rep.slope_valid);
}

TEST_CASE("cyclic shift modulus of the step is exact") {
    const int N = 256;
    SampledControl u = wrap(step_values(N));
    for (int steps : {1, 4, 16}) {
        double h = double(steps) / N;
        CHECK(spectral::periodic_modulus(u, 2.0, steps) ==
              doctest::Approx(2.0 * std::sqrt(2.0 * h)).epsilon(1e-13));
        CHECK(spectral::periodic_modulus(u, 1.0, steps) ==
              doctest::Approx(4.0 * h).epsilon(1e-13));
    }
}

TEST_CASE("interval exponent brackets the periodic one") {
    auto b1 = spectral::periodic_exponent_bracket(0.5, 2.0);
    CHECK(b1.first == doctest::Approx(0.5));
    CHECK(b1.second == doctest::Approx(0.5));
    auto b2 = spectral::periodic_exponent_bracket(0.7, 2.0);
    CHECK(b2.first == doctest::Approx(0.5));
    CHECK(b2.second == doctest::Approx(0.7));
}

TEST_CASE("coefficient bound by the half-period shift modulus") {
    const int N = 64;
    auto rng = num::make_rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd v(2, N);
    for (int c = 0; c < 2; ++c)
        for (int j = 0; j < N; ++j) v(c, j) = gauss(rng);
    SampledControl u = wrap(v);
    spectral::FourierTable t = spectral::fourier_coeffs(u, N / 2 - 1);
    for (int m : {1, 2, 4, 8, 16}) {
        double lhs = std::sqrt(t.power(m));
        double rhs = 0.5 * spectral::periodic_modulus(u, 1.0, N / (2 * m));
        CHECK(lhs <= rhs + 1e-12);
    }
}
