#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "srlab/trajectory.hpp"

namespace srlab::geodesics {

struct SolveOptions {
    int grid = 256;                 // control intervals
    int restarts = 1;               // random restarts, best length wins
    std::uint64_t seed = 1;
    double endpoint_tol = 1e-8;     // required |x(1) - x1|
    double init_noise = 0.25;       // stddev of the Gaussian kick on the initial control
    int max_outer = 40;             // multiplier updates
    int max_inner = 600;            // quasi-Newton iterations per subproblem
    double grad_tol = 1e-11;
};

struct SolveResult {
    Trajectory traj;                // constant-speed on success
    bool converged = false;         // endpoint defect met
    double endpoint_defect = 0.0;
    double energy = 0.0;            // control energy of the minimizer
    int outer_iters = 0;
    // Direct transcription certifies stationarity only, not global
    // optimality, so the honest label for a converged solve:
    std::string certificate = "candidate local minimizer";
};

// Shortest horizontal path x0 -> x1 by direct transcription: minimize the
// control energy with the endpoint handled by an augmented Lagrangian,
// gradients through the adjoint of the discrete RK4 dynamics, quasi-Newton
// (L-BFGS) inner solves. Initial control: straight-line interpolation via
// the frame pseudoinverse plus a small seeded perturbation. The best of
// `restarts` runs is reparametrized to constant speed.
// A run that misses endpoint_tol is returned flagged, never thrown.
SolveResult solve_shortest(const SRStructure& s, const Eigen::VectorXd& x0,
                           const Eigen::VectorXd& x1, const SolveOptions& opts = {});

struct BallBoxPoint {
    double radius = 0.0;
    double distance = 0.0;  // best solve length (upper estimate of d_SR)
    bool converged = false;
};

struct BallBoxReport {
    std::vector<BallBoxPoint> points;
    double exponent = 0.0;       // slope of log d against log r
    double intercept = 0.0;
    bool exponent_in_range = false;  // within [1/declared_step, 1] up to tolerance
    double cbb_horizontal = 0.0;     // max r_i / d_i      (lower inclusion constant)
    double cbb_anisotropic = 0.0;    // max d_i / r_i^(1/step)
    bool partial = false;            // some radii failed to converge
};

// Probes d_SR(x, x + r * dir) over the given radii (unit direction),
// m-restart solves per radius, and fits the scaling exponent.
BallBoxReport ballbox_probe(const SRStructure& s, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& dir, const std::vector<double>& radii,
                            int grid = 64, int restarts = 5, std::uint64_t seed = 1,
                            double range_tol = 0.05);

// Energy and its gradient for a control matrix (used by the solver and
// exposed for the gradient unit tests): J = sum |u_i|^2 dt + mu.c + rho/2 |c|^2
// with c = x_u(1) - x1.
double augmented_objective(const SRStructure& s, const Eigen::VectorXd& x0,
                           const Eigen::VectorXd& x1, const Eigen::MatrixXd& controls,
                           const Eigen::VectorXd& mu, double rho, Eigen::MatrixXd* grad);

} // namespace srlab::geodesics
