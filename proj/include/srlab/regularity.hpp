#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "srlab/trajectory.hpp"

namespace srlab::regularity {

// R^k-valued function on [t1, t2], piecewise constant on N uniform
// intervals (column i on [t1 + i*dt, t1 + (i+1)*dt)), with the shift
// margin delta used by the difference moduli. Rectangle quadrature is
// exact for this class, so the moduli below are exact values, not
// approximations, whenever the shift is a grid multiple.
struct SampledControl {
    double t1 = 0.0, t2 = 1.0;
    Eigen::MatrixXd values;  // k x N
    double delta = 0.125;

    int samples() const { return static_cast<int>(values.cols()); }
    double dt() const { return (t2 - t1) / samples(); }
    int delta_index() const;  // delta / dt, rounded

    Eigen::VectorXd component(int c) const { return values.row(c).transpose(); }
    void validate() const;  // delta <= (t2-t1)/4 and at least 8 samples per window
};

SampledControl from_trajectory(const geodesics::Trajectory& t, double delta = 0.125);

// L_p distance between the control and its shift by `shift` grid steps
// (signed), taken over the window that keeps both arguments inside
// [t1, t2]: (t1, t2-h) for forward shifts and (t1+h, t2) for backward.
double modulus_at(const SampledControl& u, double p, int shift);

// Same with a real shift h, rounded to the nearest grid multiple;
// `used` (optional) receives the shift actually applied.
double modulus(const SampledControl& u, double p, double h, double* used = nullptr);

struct HolderConstant {
    double value = 0.0;   // sup over grid shifts 0 < |h| <= delta of w_p(h)/|h|^alpha
    double arg_h = 0.0;   // shift attaining the sup
    bool at_grid_floor = false;  // sup attained at the smallest representable shift
};

HolderConstant holder_constant(const SampledControl& u, double p, double alpha);

// ||u||_p + holder constant; the Besov-style seminorm the estimators report.
double besov_norm(const SampledControl& u, double p, double alpha);

struct ExponentFit {
    double alpha = 0.0;       // fitted decay of w_p(h) against h
    double log_c = 0.0;       // fitted log prefactor
    double residual = 0.0;
    int points = 0;
    bool exact_invariance = false;  // all moduli were exactly zero
};

// Log-log fit of the modulus over a dyadic h grid (delta, delta/2, ...,
// down to the grid scale). Zero moduli are excluded; all-zero input is
// the exact-invariance sentinel; fewer than 3 usable points throws
// insufficient_data.
ExponentFit fit_exponent(const SampledControl& u, double p,
                         const std::vector<double>& h_grid = {});

std::vector<double> dyadic_h_grid(const SampledControl& u);

struct PoincareCheck {
    double ratio = 0.0;              // c_p^alpha / ||u - mean||_p
    double holder = 0.0;
    double deviation_norm = 0.0;     // ||u - mean||_p
    double identity_residual = 0.0;  // | ||u-mean||_2^2 - (l^2 - |mean|^2) | for p=2
    double mean_speed = 0.0;
};

// Lower-bound ratio between the Holder constant and the mean deviation;
// for p=2 also evaluates the exact decomposition ||u - mean||_2^2 =
// l^2 - |mean|^2 valid for constant-speed controls.
PoincareCheck poincare_ratio(const SampledControl& u, double p, double alpha);

struct ApproxRateRow {
    double eps = 0.0;        // target L2 distance
    double achieved = 0.0;   // realized ||w - u||_2
    double bandwidth = 0.0;  // mollifier half-width
    double dw_sup = 0.0;     // ||w'||_inf
    double scaled = 0.0;     // eps^gamma * ||w'||_inf
    bool in_band = false;    // achieved error inside [eps/2, eps]
};

struct ApproxRateTable {
    double gamma = 0.0;
    std::vector<ApproxRateRow> rows;
    bool bounded = false;   // last column non-increasing trend (no blow-up)
    bool partial = false;   // some eps rows missed the error band
};

// Smooths u with the compactly supported bump kernel exp(-1/(1-t^2))
// (constant extension at the window ends), picking the bandwidth by
// bisection so the L2 error lands in [eps/2, eps], and tabulates
// eps^gamma * ||w'||_inf over the eps grid.
ApproxRateTable smooth_approx_rate(const SampledControl& u, double gamma,
                                   const std::vector<double>& eps_grid);

// Aggregated per-control report used by the CLI and the experiment driver.
struct RegularityReport {
    struct ModulusTable {
        double p = 2.0;
        std::vector<double> h, omega;
    };
    std::vector<ModulusTable> moduli;
    struct FitRow {
        double p = 2.0, alpha = 0.0, residual = 0.0;
        bool exact_invariance = false;
    };
    std::vector<FitRow> fits;
    struct HolderRow {
        double p = 2.0, alpha = 0.0, c = 0.0, besov = 0.0;
        bool at_grid_floor = false;
    };
    std::vector<HolderRow> holder;
    std::optional<PoincareCheck> poincare;
    std::optional<ApproxRateTable> approx;
};

RegularityReport analyze(const SampledControl& u, const std::vector<double>& p_list,
                         double alpha, std::optional<double> approx_gamma = {});

} // namespace srlab::regularity
