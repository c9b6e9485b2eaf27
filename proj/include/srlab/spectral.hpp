#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "srlab/numeric.hpp"
#include "srlab/regularity.hpp"

namespace srlab::spectral {

using regularity::SampledControl;

// Fourier coefficients of the periodic extension of a piecewise-constant
// control, by the midpoint rectangle transform
//   u^m = dt * sum_j u_j exp(-2 pi i m t_j),  t_j = (j + 1/2) dt.
// Conjugate symmetry u^{-m} = conj(u^m) is exact for real data, so only
// m >= 0 is stored. Restricting to |m| <= N/2 - 1 keeps the modes an
// orthogonal family on the grid (discrete Parseval holds exactly).
struct FourierTable {
    int grid = 0;            // N source intervals
    int max_mode = 0;        // M_max <= N/2 - 1
    Eigen::MatrixXcd coeff;  // k x (max_mode + 1), column m

    Eigen::VectorXcd at(int m) const;  // signed mode via conjugation
    double power(int m) const;         // squared norm of u^m over components
    double power_abs(int m) const;     // power(m) + power(-m), m >= 1
    double total_power() const;        // sum over |m| <= max_mode
};

FourierTable fourier_coeffs(const Eigen::MatrixXd& values, int max_mode);
FourierTable fourier_coeffs(const SampledControl& u, int max_mode);

// Power-law fit of the spectral density over a mode window: slope of
// log |u^m| against log m on a log-spaced subsample of the modes whose
// power rises above the roundoff floor.
num::LineFit decay_fit(const FourierTable& t, int m_lo, int m_hi, int max_points = 40);

// Tail mass estimate beyond max_mode: fit power_abs(m) ~ a m^{-b} on the
// top octave of the resolved band (the rectangle transform distorts the
// octave below Nyquist by 1/sinc(pi m/N), so fits stay at or below
// grid/8), correct for the density of nonzero modes, and integrate the
// fitted law against the weight |m|^{2 alpha}. Returns +inf when the
// fitted law is not summable, 0 when the window sits at the roundoff
// floor.
double tail_estimate(const FourierTable& t, double alpha);

struct DyadicRow {
    int M = 0;
    double value = 0.0;
    double ratio = 0.0;  // value / value at the previous (halved) M
};

// Truncated weighted coefficient sum sum_{0<|m|<=M_max} |m|^{2 alpha} |u^m|^2
// with doubling-ratio convergence diagnostics: the partial sum is
// tabulated on a dyadic mode ladder and consecutive ratios reported; the
// final ratio at or below 1.05 reads as converging. The ladder stops at
// grid/4 (when the table reaches that far) so the verdict is not polluted
// by the sampling distortion near Nyquist; `value` still sums to M_max.
struct WeightedSumReport {
    double alpha = 0.0;
    double value = 0.0;  // sum at M_max
    double tail = 0.0;   // estimated weighted mass beyond M_max
    std::vector<DyadicRow> rows;
    double last_ratio = 0.0;
    bool converging = false;
};

WeightedSumReport weighted_sum(const FourierTable& t, double alpha);

// Truncated l_gamma norm (sum_{|m|<=M_max} |u^m|^gamma)^{1/gamma},
// m = 0 included, with the same doubling diagnostics on the gamma-power
// partial sums.
struct EllGammaReport {
    double gamma = 0.0;
    double value = 0.0;
    std::vector<DyadicRow> rows;
    double last_ratio = 0.0;
    bool converging = false;
};

EllGammaReport ell_gamma_norm(const FourierTable& t, double gamma);

// L2 distance to the degree-M Fourier partial sum, by Parseval over the
// discarded coefficients plus the fitted tail beyond max_mode. Rows whose
// error sits at the roundoff floor are flagged and excluded from the
// log-log slope fit; fewer than 3 surviving rows leaves slope_valid false.
struct TruncationRow {
    int M = 0;
    double error = 0.0;
    bool at_floor = false;
};

struct TruncationReport {
    std::vector<TruncationRow> rows;
    double tail = 0.0;     // unweighted tail mass estimate beyond max_mode
    double slope = 0.0;    // fitted decay of error against M
    double decay_b = 0.0;  // fitted power-law exponent of power_abs on the top octave
    bool slope_valid = false;
};

TruncationReport partial_sum_error(const FourierTable& t, const std::vector<int>& M_list);
TruncationReport partial_sum_error(const SampledControl& u, const std::vector<int>& M_list);

// L_p norm of the cyclic (periodic) shift difference u(. + steps*dt) - u,
// taken over the whole circle; the shift convention the coefficient
// bounds above are proved with.
double periodic_modulus(const SampledControl& u, double p, int steps);

// An interval Holder exponent alpha measured at integrability p brackets
// the periodic exponent: min(alpha, 1/p) <= periodic <= alpha.
std::pair<double, double> periodic_exponent_bracket(double alpha, double p);

} // namespace srlab::spectral
