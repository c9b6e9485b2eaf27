#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace srlab::num {

constexpr double inf = std::numeric_limits<double>::infinity();

// Discrete L_p norm of interval samples with uniform weight dt,
// i.e. (sum |v_i|^p dt)^(1/p); p = inf gives the sup norm.
inline double lp_norm(const Eigen::VectorXd& v, double p, double dt) {
    if (v.size() == 0) return 0.0;
    if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
    if (p == 1.0) return v.cwiseAbs().sum() * dt;
    if (p == 2.0) return std::sqrt(v.squaredNorm() * dt);
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        s += std::pow(std::abs(v[i]), p);
    return std::pow(s * dt, 1.0 / p);
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // rms residual of the least-squares fit
    int n = 0;
};

// Least squares y = slope*x + intercept.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit r;
    r.n = static_cast<int>(x.size());
    if (r.n < 2) return r;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < r.n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double det = r.n * sxx - sx * sx;
    r.slope = (r.n * sxy - sx * sy) / det;
    r.intercept = (sy * sxx - sx * sxy) / det;
    double ss = 0;
    for (int i = 0; i < r.n; ++i) {
        double e = y[i] - (r.slope * x[i] + r.intercept);
        ss += e * e;
    }
    r.residual = std::sqrt(ss / r.n);
    return r;
}

// Fit y ~ c * x^e on log-log axes.
inline LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    lx.reserve(x.size());
    ly.reserve(y.size());
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0 && y[i] > 0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    return fit_line(lx, ly);
}

// Log-spaced grid with a fixed number of points per decade (first and
// last values are included exactly).
inline std::vector<double> log_grid(double lo, double hi, int per_decade) {
    std::vector<double> g;
    double decades = std::log10(hi / lo);
    int n = std::max(2, static_cast<int>(std::round(decades * per_decade)) + 1);
    for (int i = 0; i < n; ++i)
        g.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
    return g;
}

// Derives an independent stream seed from a base seed and an index
// (splitmix64), so batch items can be run in any order.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t index = 0) {
    return std::mt19937_64(substream(seed, index));
}

} // namespace srlab::num
