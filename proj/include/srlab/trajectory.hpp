#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "srlab/structure.hpp"

namespace srlab::geodesics {

using srgeom::SRStructure;

// Horizontal curve on the unit time interval: N+1 states on a uniform
// grid, piecewise-constant controls on the N intervals (column i steers
// [t_i, t_{i+1})), states generated by one classical RK4 step per interval.
struct Trajectory {
    std::string structure;     // catalogue/file name the curve lives on
    Eigen::MatrixXd states;    // (N+1) x n, row i = x(t_i)
    Eigen::MatrixXd controls;  // k x N
    double length = 0.0;       // L1 quadrature of |u|

    int intervals() const { return static_cast<int>(controls.cols()); }
    double dt() const { return 1.0 / intervals(); }
    Eigen::VectorXd state(int i) const { return states.row(i).transpose(); }

    // max_i | |u_i| - l | for the mean speed l; ~0 after reparametrization
    double speed_defect() const;
    double mean_speed() const;
};

// Fundamental solution P(t) of the linearized control-to-state flow
// dP/dt = (sum over frame fields j != excluded of u_j Df_j) P, P(0) = I,
// sampled at the grid nodes, with cached inverses. Gronwall gives
// |P|, |P^{-1}| <= e^(k L c_f).
struct VariationalFlow {
    std::vector<Eigen::MatrixXd> P;      // N+1 matrices
    std::vector<Eigen::MatrixXd> P_inv;  // cached inverses
};

// One RK4 step of x' = F(x) u with constant u over step h.
Eigen::VectorXd rk4_step(const SRStructure& s, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u, double h);

// Integrates the controls from x0. Throws escape_error (with the exit
// time) if a node leaves the domain box; enforce_box=false skips the
// check for solver-internal iterates.
Trajectory integrate(const SRStructure& s, const Eigen::VectorXd& x0,
                     const Eigen::MatrixXd& controls, bool enforce_box = true);

// excluded is the zero-based index of the frame field whose control is
// being varied; the generator sums the Jacobians of the other fields.
// Pass -1 to keep every field (the full linearized flow).
VariationalFlow variational_flow(const SRStructure& s, const Trajectory& traj,
                                 int excluded = 0);

// Reparametrizes to constant speed |u| = length on the same grid size and
// re-integrates, so the discrete dynamics invariant is preserved.
// Throws std::invalid_argument on (near-)zero length input.
Trajectory reparam_constant_speed(const SRStructure& s, const Trajectory& traj);

// Serialization. The JSON record stores every double as a hex-float
// string, so a load/save round trip is bit-exact; the columnar text form
// (t, states, controls) uses shortest round-trip decimals.
void save_trajectory_json(const Trajectory& t, const std::string& path);
Trajectory load_trajectory_json(const std::string& path);
void save_trajectory_text(const Trajectory& t, const std::string& path);

} // namespace srlab::geodesics
