// Timing comparison between the serial reference path and the OpenMP
// path of the batch kernels. Both run the same per-index code through
// par::for_each_index, so outputs are identical; this tool measures the
// wall-clock difference on representative workloads.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "srlab/interpdual.hpp"
#include "srlab/numeric.hpp"
#include "srlab/parallel.hpp"
#include "srlab/regularity.hpp"
#include "srlab/spectral.hpp"
#include "srlab/structure.hpp"
#include "srlab/trajectory.hpp"
#include "srlab/variation.hpp"

namespace {

using namespace srlab;

double time_once(void (*work)()) {
    auto t0 = std::chrono::steady_clock::now();
    work();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

void work_sqrt_lemma() {
    const int n = 4000;
    std::vector<double> slack(n);
    par::for_each_index(n, [&](std::int64_t i) {
        auto rng = num::make_rng(7, i);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::normal_distribution<double> gauss(0.0, 1.0);
        int N = 64;
        double l = 1.0 + uni(rng);
        Eigen::VectorXd u1(N), psi(N);
        for (int j = 0; j < N; ++j) {
            u1[j] = l * (2.0 * uni(rng) - 1.0);
            psi[j] = gauss(rng);
        }
        slack[i] = interpdual::sqrt_lemma_check(l, u1, psi, 1.5).slack;
    });
}

void work_moduli() {
    regularity::SampledControl u;
    u.values = Eigen::MatrixXd::Ones(1, 8192);
    for (int j = 4096; j < 8192; ++j) u.values(0, j) = -1.0;
    std::vector<double> h = regularity::dyadic_h_grid(u);
    std::vector<double> w(h.size());
    for (int rep = 0; rep < 20; ++rep)
        par::for_each_index(static_cast<std::int64_t>(h.size()), [&](std::int64_t i) {
            w[i] = regularity::modulus(u, 2.0, h[i]);
        });
}

void work_fourier() {
    regularity::SampledControl u;
    u.values = Eigen::MatrixXd::Ones(1, 4096);
    for (int j = 2048; j < 4096; ++j) u.values(0, j) = -1.0;
    spectral::FourierTable t = spectral::fourier_coeffs(u, 2047);
    (void)t.total_power();
}

void work_variation() {
    srgeom::SRStructure mart = srgeom::martinet();
    const int N = 256;
    Eigen::MatrixXd ctr = Eigen::MatrixXd::Zero(2, N);
    ctr.row(0).setOnes();
    geodesics::Trajectory base = geodesics::integrate(mart, Eigen::Vector3d::Zero(), ctr);
    variation::TestFunction phi = variation::TestFunction::hat(N);
    std::vector<double> lams = variation::lambda_grid(1e-4, 1e-1);
    (void)variation::endpoint_order(mart, base, phi, 1, lams);
}

struct Bench {
    const char* name;
    void (*work)();
};

} // namespace

int main() {
    const Bench benches[] = {
        {"sqrt-lemma batch (4000 instances)", work_sqrt_lemma},
        {"modulus tables (N = 8192, 20 reps)", work_moduli},
        {"fourier table (N = 4096, 2047 modes)", work_fourier},
        {"endpoint-order sweep (22 amplitudes)", work_variation},
    };
    std::printf("%-40s %12s %12s %9s\n", "kernel", "serial [s]", "openmp [s]", "speedup");
    for (const Bench& b : benches) {
        par::set_enabled(false);
        b.work();  // warm up caches and one-time setup
        double ts = time_once(b.work);
        par::set_enabled(true);
        double tp = time_once(b.work);
        std::printf("%-40s %12.4f %12.4f %8.2fx\n", b.name, ts, tp, ts / tp);
    }
    par::set_enabled(true);
    return 0;
}
