#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace srlab::interpdual {

// The two exponent regimes of the interpolational estimate. Case W is the
// weak-regularity route (square-root energy comparison, zeta = 2/step);
// case G is the endpoint route through the length Gagliardo argument
// (zeta = 1/step).
enum class Regime { W, G };

struct ExponentSet {
    double q = 2.0;      // derivative norm index, 1 <= q <= 2
    double zeta = 0.5;   // scaling input, 0 < zeta <= 1
    Regime regime = Regime::W;
    double r = 2.0;      // companion norm index: 2 in case W, 1 in case G
    double theta = 0.0;  // interpolation weight on ||phi||_r
    double kappa = 0.0;  // length exponent
    double q_star = 2.0;  // conjugate of q (>= 2, inf at q = 1)
    double r_star = 2.0;  // conjugate of r
};

// theta = (q-1) zeta / (q - zeta), kappa = (1 + 2 q zeta - 3 zeta) / (q - zeta);
// r and the conjugate pair follow from the regime.
ExponentSet exponents(double q, double zeta, Regime regime);

struct AdmissibleRanges {
    Regime regime = Regime::W;
    int step = 2;
    double p = 2.0;
    // case W: Besov exponents alpha in (0, alpha_sup); at p = 2 the
    // endpoint alpha = 1/(step-1) is attained rather than approached.
    double alpha_sup = 0.0;
    bool endpoint_attained = false;
    // case G: beta in (0, beta_sup), kappa < kappa_const - kappa_slope * beta.
    double beta_sup = 0.0;
    double kappa_const = 1.0;
    double kappa_slope = 0.0;
};

// Symbolic admissible ranges for a step-`step` structure and L_p scale.
// Case W needs p >= 2; case G needs p >= 2 + 1/(step-1).
AdmissibleRanges admissible_ranges(int step, double p, Regime regime);

struct SqrtLemmaCheck {
    double lhs = 0.0;    // integral of sqrt(l^2 - 2 u1 psi + psi^2) minus l
    double rhs = 0.0;    // 4 l^(1-q) ||psi||_q^q - (1/l) integral of u1 psi
    double slack = 0.0;  // rhs - lhs, nonnegative (the bound is pointwise)
};

// Verifies the square-root comparison inequality on sampled data;
// requires ||u1||_inf <= l and 1 <= q <= 2. Rectangle quadrature, which
// keeps the pointwise inequality exact in the discrete sums.
SqrtLemmaCheck sqrt_lemma_check(double l, const Eigen::VectorXd& u1,
                                const Eigen::VectorXd& psi, double q);

struct SolverResult {
    double value = 0.0;
    Eigen::VectorXd arg;   // phi interior nodes (S) or interval values w (K)
    int iterations = 0;
    bool converged = true;
};

// S(u1, M): minimum of -integral(u1 phi') over continuous piecewise-linear
// phi with phi(0)=phi(1)=0, ||phi||_r <= 1 and ||phi'||_q <= M (norms with
// interval weight dt). Solved by a primal-dual first-order splitting whose
// only building blocks are exact norm-ball projections. Always <= 0.
// Supported: q in {1,2}, r in {1,2}.
SolverResult solve_S(const Eigen::VectorXd& u1, double M, double r, double q);

// The matching dual value: inf over interval-sampled w of
// ||w'||_{r*} + M ||u1 - w||_{q*}, with w' the difference quotients at the
// interior nodes. This discretization is the exact finite-dimensional
// Fenchel dual of solve_S, so S + K = 0 at solver tolerance.
SolverResult solve_K(const Eigen::VectorXd& u1, double M, double r, double q);

// Full interpolation K-functional variant: adds the lower-order term
// ||w||_{q*} to the W^1 norm (used by the corollary-style diagnostics).
double k_functional_full(const Eigen::VectorXd& u1, double M, double r, double q);

struct DualPair {
    double M = 1.0, q = 2.0, r = 2.0;
    double S_value = 0.0;
    double K_value = 0.0;
    double gap = 0.0;       // S + K, zero at the exact optimum
    double rel_gap = 0.0;   // |gap| / (1 + |S| + K)
    Eigen::VectorXd primal_phi;
    Eigen::VectorXd dual_w;
    bool converged = true;
};

DualPair duality_gap(const Eigen::VectorXd& u1, double M, double r, double q);

struct InterpolationCheck {
    double max_ratio = 0.0;      // max over the batch of the normalized pairing
    int witness = -1;            // index attaining the max
    int skipped = 0;             // degenerate phi (zero norms) skipped
    std::vector<double> ratios;  // per-phi values
};

// Empirical interpolational estimate: for each test function phi,
//   ratio = integral(u1 phi') / (l^kappa ||phi||_r^theta ||phi'||_q^(1-theta)),
// reported as a batch max (an empirical lower bound for the constant in
// the estimate; the theory gives finiteness, not its value).
InterpolationCheck verify_interpolation_bound(const Eigen::VectorXd& u1, double l,
                                              const ExponentSet& exps,
                                              const std::vector<Eigen::VectorXd>& phis);

struct MSweepRow {
    double M = 0.0;
    double S = 0.0;
    double surrogate = 0.0;  // -S / (l^kappa M^(1-theta))
};

// Sweeps M over a grid and normalizes -S by the predicted growth
// l^kappa M^(1-theta); boundedness of the surrogate column is the
// observable form of the S lower bound.
std::vector<MSweepRow> interpolation_msweep(const Eigen::VectorXd& u1, double l,
                                            const ExponentSet& exps,
                                            const std::vector<double>& M_grid);

} // namespace srlab::interpdual
