#include "srlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "srlab/parallel.hpp"

namespace srlab::spectral {

Eigen::VectorXcd FourierTable::at(int m) const {
    if (std::abs(m) > max_mode) throw std::out_of_range("mode beyond the table");
    if (m >= 0) return coeff.col(m);
    return coeff.col(-m).conjugate();
}

double FourierTable::power(int m) const {
    if (std::abs(m) > max_mode) throw std::out_of_range("mode beyond the table");
    return coeff.col(std::abs(m)).squaredNorm();
}

double FourierTable::power_abs(int m) const { return 2.0 * power(m); }

double FourierTable::total_power() const {
    double s = power(0);
    for (int m = 1; m <= max_mode; ++m) s += power_abs(m);
    return s;
}

FourierTable fourier_coeffs(const Eigen::MatrixXd& values, int max_mode) {
    const int N = static_cast<int>(values.cols());
    const int k = static_cast<int>(values.rows());
    if (N < 4) throw std::invalid_argument("need at least 4 samples");
    if (max_mode < 1 || max_mode > N / 2 - 1)
        throw std::invalid_argument("max mode must lie in [1, N/2 - 1] (anti-aliasing)");

    // exp(-2 pi i m (j+1/2)/N) = W^((m (2j+1)) mod 2N) for W = exp(-pi i/N);
    // reducing the phase by integer arithmetic keeps every angle exact.
    std::vector<std::complex<double>> W(2 * N);
    for (int r = 0; r < 2 * N; ++r) {
        double th = -M_PI * r / N;
        W[r] = {std::cos(th), std::sin(th)};
    }

    FourierTable t;
    t.grid = N;
    t.max_mode = max_mode;
    t.coeff.resize(k, max_mode + 1);
    const double dt = 1.0 / N;
    par::for_each_index(max_mode + 1, [&](std::int64_t m) {
        Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(k);
        for (int j = 0; j < N; ++j) {
            std::int64_t r = (m * (2 * j + 1)) % (2 * N);
            acc += values.col(j) * W[static_cast<size_t>(r)];
        }
        t.coeff.col(m) = dt * acc;
    });
    return t;
}

FourierTable fourier_coeffs(const SampledControl& u, int max_mode) {
    return fourier_coeffs(u.values, max_mode);
}

num::LineFit decay_fit(const FourierTable& t, int m_lo, int m_hi, int max_points) {
    m_lo = std::max(1, m_lo);
    m_hi = std::min(t.max_mode, m_hi);
    if (m_hi < m_lo) throw std::invalid_argument("empty mode window");

    double peak = 0.0;
    for (int m = m_lo; m <= m_hi; ++m) peak = std::max(peak, t.power(m));
    const double floor = 1e-26 * std::max(peak, t.total_power());

    // log-spaced subsample of the nonzero modes
    std::vector<double> xs, ys;
    double step = std::pow(double(m_hi) / m_lo, 1.0 / std::max(1, max_points - 1));
    int prev = 0;
    for (int i = 0; i < max_points; ++i) {
        int m = static_cast<int>(std::lround(m_lo * std::pow(step, i)));
        m = std::min(std::max(m, m_lo), m_hi);
        if (m == prev) continue;
        prev = m;
        // snap forward to the nearest mode above the floor
        int mm = m;
        while (mm <= m_hi && t.power(mm) <= floor) ++mm;
        if (mm > m_hi) continue;
        if (!xs.empty() && std::exp(xs.back()) == mm) continue;
        xs.push_back(std::log(double(mm)));
        ys.push_back(0.5 * std::log(t.power(mm)));
    }
    return num::fit_line(xs, ys);
}

namespace {

// The rectangle transform of piecewise-constant data inflates the
// underlying function's coefficients by exactly 1/sinc(pi m / N), so the
// octave below the Nyquist mode does not follow the function's power law.
// Law fits stay at or below grid/8, doubling verdicts at or below grid/4
// (ratios tolerate the milder distortion there); short tables are left
// whole, windowing away most of 16 modes would leave nothing to read.
int fit_top(const FourierTable& t) {
    int res = t.grid / 8;
    return res >= 16 ? std::min(t.max_mode, res) : t.max_mode;
}

int verdict_top(const FourierTable& t) {
    int res = t.grid / 4;
    return res >= 32 ? std::min(t.max_mode, res) : t.max_mode;
}

std::vector<int> dyadic_modes(int max_mode) {
    std::vector<int> ms{max_mode};
    while (ms.back() >= 16) ms.push_back(ms.back() / 2);
    std::reverse(ms.begin(), ms.end());
    return ms;
}

} // namespace

double tail_estimate(const FourierTable& t, double alpha) {
    const int hi = fit_top(t);
    const int lo = std::max(1, hi / 2);
    double peak = 0.0;
    int nonzero = 0;
    const double floor = 1e-26 * std::max(t.total_power(), 1e-300);
    std::vector<double> xs, ys;
    for (int m = lo; m <= hi; ++m) {
        double p = t.power_abs(m);
        peak = std::max(peak, p);
        if (p > floor) {
            ++nonzero;
            xs.push_back(std::log(double(m)));
            ys.push_back(std::log(p));
        }
    }
    if (nonzero < 3) return 0.0;  // spectrum already at the floor: no tail

    num::LineFit f = num::fit_line(xs, ys);
    double b = -f.slope;
    double a = std::exp(f.intercept);
    double density = double(nonzero) / (hi - lo + 1);
    double expo = b - 2.0 * alpha - 1.0;
    if (expo <= 0.05) return num::inf;  // fitted law is not summable against the weight
    return density * a * std::pow(double(t.max_mode), -expo) / expo;
}

WeightedSumReport weighted_sum(const FourierTable& t, double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("alpha must be nonnegative");
    WeightedSumReport rep;
    rep.alpha = alpha;

    std::vector<double> cumulative(t.max_mode + 1, 0.0);
    for (int m = 1; m <= t.max_mode; ++m)
        cumulative[m] = cumulative[m - 1] + std::pow(double(m), 2.0 * alpha) * t.power_abs(m);

    for (int M : dyadic_modes(verdict_top(t))) {
        DyadicRow row;
        row.M = M;
        row.value = cumulative[M];
        if (!rep.rows.empty() && rep.rows.back().value > 0.0)
            row.ratio = row.value / rep.rows.back().value;
        rep.rows.push_back(row);
    }
    rep.value = cumulative[t.max_mode];
    rep.tail = tail_estimate(t, alpha);
    rep.last_ratio = rep.rows.size() >= 2 ? rep.rows.back().ratio : 0.0;
    rep.converging = rep.rows.size() >= 2 && rep.last_ratio <= 1.05;
    if (rep.value == 0.0) rep.converging = true;  // nothing to sum
    return rep;
}

EllGammaReport ell_gamma_norm(const FourierTable& t, double gamma) {
    if (gamma < 1.0) throw std::invalid_argument("gamma must be >= 1");
    EllGammaReport rep;
    rep.gamma = gamma;

    std::vector<double> cumulative(t.max_mode + 1, 0.0);
    cumulative[0] = std::pow(std::sqrt(t.power(0)), gamma);
    for (int m = 1; m <= t.max_mode; ++m)
        cumulative[m] = cumulative[m - 1] + 2.0 * std::pow(std::sqrt(t.power(m)), gamma);

    for (int M : dyadic_modes(verdict_top(t))) {
        DyadicRow row;
        row.M = M;
        row.value = cumulative[M];
        if (!rep.rows.empty() && rep.rows.back().value > 0.0)
            row.ratio = row.value / rep.rows.back().value;
        rep.rows.push_back(row);
    }
    rep.value = std::pow(cumulative[t.max_mode], 1.0 / gamma);
    rep.last_ratio = rep.rows.size() >= 2 ? rep.rows.back().ratio : 0.0;
    rep.converging = rep.rows.size() >= 2 && rep.last_ratio <= 1.05;
    if (cumulative[t.max_mode] == 0.0) rep.converging = true;
    return rep;
}

TruncationReport partial_sum_error(const FourierTable& t, const std::vector<int>& M_list) {
    TruncationReport rep;
    rep.tail = tail_estimate(t, 0.0);
    {
        const int hi = fit_top(t), lo = std::max(1, hi / 2);
        std::vector<double> xs, ys;
        const double floor = 1e-26 * std::max(t.total_power(), 1e-300);
        for (int m = lo; m <= hi; ++m)
            if (t.power_abs(m) > floor) {
                xs.push_back(std::log(double(m)));
                ys.push_back(std::log(t.power_abs(m)));
            }
        if (xs.size() >= 3) rep.decay_b = -num::fit_line(xs, ys).slope;
    }

    const double total = t.total_power() + (std::isfinite(rep.tail) ? rep.tail : 0.0);
    const double floor_err = 1e-12 * std::sqrt(std::max(total, 1e-300));

    std::vector<double> xs, ys;
    for (int M : M_list) {
        if (M < 0 || M > t.max_mode)
            throw std::invalid_argument("truncation order beyond the table's max mode");
        double mass = std::isfinite(rep.tail) ? rep.tail : 0.0;
        for (int m = M + 1; m <= t.max_mode; ++m) mass += t.power_abs(m);
        TruncationRow row;
        row.M = M;
        row.error = std::sqrt(mass);
        row.at_floor = row.error <= floor_err;
        rep.rows.push_back(row);
        if (!row.at_floor && M >= 1) {
            xs.push_back(std::log(double(M)));
            ys.push_back(std::log(row.error));
        }
    }
    if (xs.size() >= 3) {
        num::LineFit f = num::fit_line(xs, ys);
        rep.slope = f.slope;
        rep.slope_valid = true;
    }
    return rep;
}

TruncationReport partial_sum_error(const SampledControl& u, const std::vector<int>& M_list) {
    int max_mode = u.samples() / 2 - 1;
    FourierTable t = fourier_coeffs(u, max_mode);
    return partial_sum_error(t, M_list);
}

double periodic_modulus(const SampledControl& u, double p, int steps) {
    const int N = u.samples();
    int s = ((steps % N) + N) % N;
    Eigen::VectorXd diffs(N);
    for (int j = 0; j < N; ++j)
        diffs[j] = (u.values.col((j + s) % N) - u.values.col(j)).norm();
    return num::lp_norm(diffs, p, u.dt());
}

std::pair<double, double> periodic_exponent_bracket(double alpha, double p) {
    return {std::min(alpha, 1.0 / p), alpha};
}

} // namespace srlab::spectral
