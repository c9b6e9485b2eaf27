#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "srlab/polynomial.hpp"

namespace srlab::srgeom {

// A rank-k distribution on a box in R^n, spanned by k polynomial vector
// fields that are declared orthonormal for the metric (the frame itself
// defines the metric unless an explicit matrix is supplied for
// validation). Horizontal curves steer with controls through this frame,
// and curve length is the L1 norm of the control speed.
struct SRStructure {
    std::string name;
    int dim_n = 0;
    int rank_k = 0;
    int declared_step = 0;

    Eigen::VectorXd box_min, box_max;     // domain box, default [-2,2]^n
    std::vector<PolyField> frame;         // k fields f_1..f_k
    std::optional<Eigen::MatrixXd> metric;  // explicit metric matrix, user structures only

    // Uniform C0 bound on the fields and their first two derivatives over
    // the box (sampled on a corner-including grid; fields are polynomial,
    // so low-degree maxima sit on the boundary).
    double field_bound = 0.0;

    bool in_box(const Eigen::VectorXd& x, double tol = 0.0) const;

    // n x k matrix whose columns are f_1(x)..f_k(x).
    Eigen::MatrixXd eval_frame(const Eigen::VectorXd& x) const;

    // Jacobian of field i at x (exact, from the polynomial representation).
    Eigen::MatrixXd frame_jacobian(int i, const Eigen::VectorXd& x) const;

    // Frame contracted with a control vector: sum_i u_i f_i(x).
    Eigen::VectorXd drift(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;

    // Jacobian of the contracted field: sum_i u_i Df_i(x).
    Eigen::MatrixXd drift_jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;
};

// Catalogue structures with fixed conventions:
//   heisenberg: n=3, f1=(1,0,-x2/2), f2=(0,1,x1/2), step 2
//   martinet:   n=3, f1=(1,0,x2^2/2), f2=(0,1,0), step 3 on x2=0, else 2
//   engel:      n=4, f1=(1,0,0,0), f2=(0,1,x1,x1^2/2), step 3 at the origin
SRStructure heisenberg();
SRStructure martinet();
SRStructure engel();
SRStructure catalogue(const std::string& name);  // throws on unknown name

// Lie bracket [f_i, f_j] evaluated at x (field indices are zero-based).
// Uses the exact polynomial Jacobians.
Eigen::VectorXd lie_bracket_at(const SRStructure& s, int i, int j, const Eigen::VectorXd& x);

// Same bracket through central finite differences of the fields
// (step h); kept as an independent cross-check of the analytic path.
Eigen::VectorXd lie_bracket_fd(const SRStructure& s, int i, int j, const Eigen::VectorXd& x,
                               double h = 1e-5);

// Smallest m such that iterated brackets of length <= m span R^n at x.
// Rank decisions use the SVD with relative threshold sigma > 1e-8 * sigma_max.
// Returns nullopt when the span is still deficient at max_depth
// (a bad structure definition: the bracket-generating hypothesis fails).
std::optional<int> hoermander_step(const SRStructure& s, const Eigen::VectorXd& x,
                                   int max_depth);

// Max over the given points of |f_i^T G f_j - delta_ij| for the explicit
// metric G (identity if the structure declares none, in which case the
// residual measures how far the frame is from Euclidean-orthonormal).
// Catalogue frames define their metric, so their residual is zero by fiat.
double orthonormality_residual(const SRStructure& s,
                               const std::vector<Eigen::VectorXd>& points);

// Structure definition file, line-oriented key-value text:
//   name = "martinet"
//   dim = 3
//   rank = 2
//   step = 3
//   box_min = [-2, -2, -2]
//   box_max = [2, 2, 2]
//   field_1_3 = "0.5*x2^2"     # component 3 of field 1; omitted components are 0
SRStructure load_structure(const std::string& path);
void save_structure(const SRStructure& s, const std::string& path);

} // namespace srlab::srgeom
