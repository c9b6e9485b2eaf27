#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "srlab/structure.hpp"
#include "srlab/trajectory.hpp"

namespace srlab::variation {

using geodesics::Trajectory;
using srgeom::SRStructure;

// Piecewise-linear perturbation profile on the trajectory grid: values at
// the N-1 interior nodes, zero at both endpoints, constant slope per
// interval.
struct TestFunction {
    Eigen::VectorXd values;  // nodes t_1 .. t_{N-1}

    static TestFunction hat(int N);                       // peak 1 near t = 1/2
    static TestFunction sine(int N, int m);               // sin(pi m t) samples
    static TestFunction random(int N, std::uint64_t seed);  // low-frequency Gaussian mix

    int intervals() const { return static_cast<int>(values.size()) + 1; }
    double dt() const { return 1.0 / intervals(); }
    Eigen::VectorXd slopes() const;  // N per-interval derivatives

    // Norms of the continuous piecewise-linear function (exact integrals,
    // not grid-sample quadrature).
    double sup_norm() const;
    double l1_norm() const;
    double l2_norm() const;
};

// Result of replacing control component c by u_c - lambda * phi' and
// re-integrating from the same initial point. length_formula is the
// quadrature of sqrt(|u|^2 - 2 lambda u_c phi' + lambda^2 phi'^2), which
// must match the re-integrated length to roundoff.
struct VariationResult {
    Trajectory varied;
    double lambda = 0.0;
    int component = 0;
    double endpoint_deviation = 0.0;  // |y(1) - x(1)|
    double length_change = 0.0;       // varied length minus base length
    double length_formula = 0.0;
};

VariationResult vary(const SRStructure& s, const Trajectory& base,
                     const TestFunction& phi, double lambda, int component = 0,
                     bool enforce_box = false);

// L2-orthogonal projection of the profile onto the subspace where the
// first-order endpoint deviation vanishes. The constraint rows are the
// moment samples m(t) = P(t)^{-1} sum_{j != c} u_j(t) [f_j, f_c](x(t))
// with P the full linearized flow, assembled into a trapezoid quadrature
// matrix over the interior nodes.
struct ProjectionResult {
    TestFunction projected;
    double residual = 0.0;        // |B phi_H| relative to sigma_max |phi|
    int active_constraints = 0;   // numerical rank of the moment matrix
    bool degenerate = false;      // all moments vanish; projection is the identity
};

ProjectionResult project_to_H(const SRStructure& s, const Trajectory& base,
                              const TestFunction& phi, int component = 0);

// Explicit constant in the pointwise deviation bound
// |y(t) - x(t)| <= lambda (|phi(t)| + c * l * |phi|_1), assembled from
// Gronwall estimates on the linearized flow with g = k L c_f:
// c = max(1, g e^g, g e^(2g) (1 + 2 g e^g + g^2 e^(2g))).
double deviation_constant(const SRStructure& s, double length);

struct FirstOrderCheck {
    double max_ratio = 0.0;      // max over nodes of deviation / bound
    double max_excess = 0.0;     // max over nodes of deviation - bound
    double max_deviation = 0.0;
    double constant = 0.0;       // the explicit constant used in the bound
    bool holds = false;
};

FirstOrderCheck first_order_check(const SRStructure& s, const Trajectory& base,
                                  const TestFunction& phi, double lambda,
                                  int component = 0);

// Endpoint deviation versus lambda on log-log axes. Throws
// insufficient_data when the deviations sit at roundoff level (the
// variation moves the endpoint by nothing measurable) or fewer than 3
// usable points remain.
struct OrderFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    std::vector<double> lambdas;
    std::vector<double> deviations;
};

OrderFit endpoint_order(const SRStructure& s, const Trajectory& base,
                        const TestFunction& phi, int component,
                        const std::vector<double>& lambdas);

std::vector<double> lambda_grid(double lo, double hi);  // 7 points per decade

} // namespace srlab::variation
