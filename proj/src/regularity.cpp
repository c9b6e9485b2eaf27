#include "srlab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "srlab/errors.hpp"
#include "srlab/numeric.hpp"
#include "srlab/parallel.hpp"

namespace srlab::regularity {

int SampledControl::delta_index() const {
    return std::max(1, static_cast<int>(std::lround(delta / dt())));
}

void SampledControl::validate() const {
    if (samples() < 1 || values.rows() < 1)
        throw std::invalid_argument("empty control sample");
    if (!(t2 > t1)) throw std::invalid_argument("control window is empty");
    if (delta > (t2 - t1) / 4.0 + 1e-12)
        throw std::invalid_argument("shift margin delta exceeds a quarter window");
    if (delta_index() < 8)
        throw std::invalid_argument("need at least 8 samples per shift window");
}

SampledControl from_trajectory(const geodesics::Trajectory& t, double delta) {
    SampledControl u;
    u.t1 = 0.0;
    u.t2 = 1.0;
    u.values = t.controls;
    u.delta = delta;
    return u;
}

double modulus_at(const SampledControl& u, double p, int shift) {
    const int N = u.samples();
    const int d = u.delta_index();
    if (shift == 0 || std::abs(shift) > d)
        throw std::invalid_argument("shift must satisfy 0 < |shift| <= delta/dt");

    // fixed delta-trimmed windows: forward shifts integrate over
    // (t1, t2 - delta), backward ones over (t1 + delta, t2); any shift up
    // to delta then stays inside the sample
    const int lo = shift > 0 ? 0 : d;
    const int hi = shift > 0 ? N - d : N;  // exclusive

    if (std::isinf(p)) {
        double worst = 0.0;
        for (int i = lo; i < hi; ++i)
            worst = std::max(worst, (u.values.col(i + shift) - u.values.col(i)).norm());
        return worst;
    }
    double acc = 0.0;
    for (int i = lo; i < hi; ++i) {
        double diff = (u.values.col(i + shift) - u.values.col(i)).norm();
        acc += (p == 2.0) ? diff * diff : std::pow(diff, p);
    }
    return std::pow(acc * u.dt(), 1.0 / p);
}

double modulus(const SampledControl& u, double p, double h, double* used) {
    int shift = static_cast<int>(std::lround(h / u.dt()));
    if (shift == 0) shift = h >= 0 ? 1 : -1;
    if (used) *used = shift * u.dt();
    return modulus_at(u, p, shift);
}

HolderConstant holder_constant(const SampledControl& u, double p, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("holder exponent must lie in (0, 1]");
    const int d = u.delta_index();
    HolderConstant best;
    // both shift signs; the two windows differ, so neither is redundant
    std::vector<double> ratio(2 * d, 0.0);
    par::for_each_index(2 * d, [&](std::int64_t idx) {
        int j = static_cast<int>(idx / 2) + 1;
        int shift = (idx % 2 == 0) ? j : -j;
        double h = std::abs(shift) * u.dt();
        ratio[idx] = modulus_at(u, p, shift) / std::pow(h, alpha);
    });
    for (int idx = 0; idx < 2 * d; ++idx) {
        int j = idx / 2 + 1;
        if (ratio[idx] > best.value) {
            best.value = ratio[idx];
            best.arg_h = j * u.dt();
        }
    }
    best.at_grid_floor = best.value > 0.0 && std::abs(best.arg_h - u.dt()) < 1e-15;
    return best;
}

double besov_norm(const SampledControl& u, double p, double alpha) {
    // ||u||_p over the full window plus the difference seminorm
    Eigen::VectorXd speeds(u.samples());
    for (int i = 0; i < u.samples(); ++i) speeds[i] = u.values.col(i).norm();
    double base = num::lp_norm(speeds, p, u.dt());
    return base + holder_constant(u, p, alpha).value;
}

std::vector<double> dyadic_h_grid(const SampledControl& u) {
    std::vector<double> g;
    const double dt = u.dt();
    for (double h = u.delta; h >= dt * (1.0 - 1e-12); h *= 0.5) {
        int shift = static_cast<int>(std::lround(h / dt));
        if (shift < 1) break;
        double snapped = shift * dt;
        if (g.empty() || std::abs(g.back() - snapped) > 1e-15) g.push_back(snapped);
    }
    return g;
}

ExponentFit fit_exponent(const SampledControl& u, double p,
                         const std::vector<double>& h_grid_in) {
    std::vector<double> hs = h_grid_in.empty() ? dyadic_h_grid(u) : h_grid_in;
    std::vector<double> h_used(hs.size()), w(hs.size());
    par::for_each_index(static_cast<std::int64_t>(hs.size()), [&](std::int64_t i) {
        w[i] = modulus(u, p, hs[i], &h_used[i]);
    });

    std::vector<double> hh, ww;
    for (size_t i = 0; i < hs.size(); ++i)
        if (w[i] > 0.0) {
            hh.push_back(h_used[i]);
            ww.push_back(w[i]);
        }

    ExponentFit fit;
    if (hh.empty()) {
        fit.exact_invariance = true;  // shift-invariant control, e.g. constant speed line
        fit.alpha = num::inf;
        return fit;
    }
    if (hh.size() < 3)
        throw insufficient_data("fewer than 3 nonzero moduli; cannot fit an exponent");
    num::LineFit lf = num::fit_loglog(hh, ww);
    fit.alpha = lf.slope;
    fit.log_c = lf.intercept;
    fit.residual = lf.residual;
    fit.points = lf.n;
    return fit;
}

PoincareCheck poincare_ratio(const SampledControl& u, double p, double alpha) {
    PoincareCheck out;
    const int N = u.samples();
    const double dt = u.dt();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(u.values.rows());
    for (int i = 0; i < N; ++i) mean += u.values.col(i);
    mean *= dt / (u.t2 - u.t1);

    Eigen::VectorXd dev(N);
    double l1 = 0.0, l2 = 0.0;
    for (int i = 0; i < N; ++i) {
        dev[i] = (u.values.col(i) - mean).norm();
        l1 += u.values.col(i).norm() * dt;
        l2 += u.values.col(i).squaredNorm() * dt;
    }
    out.deviation_norm = num::lp_norm(dev, p, dt);
    out.holder = holder_constant(u, p, alpha).value;
    out.ratio = out.deviation_norm > 0.0 ? out.holder / out.deviation_norm : num::inf;
    out.mean_speed = l1 / (u.t2 - u.t1);
    if (p == 2.0) {
        // ||u - mean||_2^2 = ||u||_2^2 - |mean|^2; with |u| = l a.e. the first
        // term is l^2 exactly
        double dev2 = 0.0;
        for (int i = 0; i < N; ++i) dev2 += (u.values.col(i) - mean).squaredNorm() * dt;
        out.identity_residual = std::abs(dev2 - (l2 - mean.squaredNorm() * (u.t2 - u.t1)));
    }
    return out;
}

namespace {

// bump kernel exp(-1/(1-t^2)) on (-1,1), normalized to unit mass
struct Bump {
    static constexpr int M = 256;  // quadrature points per unit half-width
    double mass;
    Bump() {
        mass = 0.0;
        for (int i = 0; i < 2 * M; ++i) {
            double t = -1.0 + (i + 0.5) / M;
            mass += raw(t) / M;
        }
    }
    static double raw(double t) {
        double r = 1.0 - t * t;
        return r > 0.0 ? std::exp(-1.0 / r) : 0.0;
    }
    double value(double t) const { return raw(t) / mass; }
    double deriv(double t) const {
        double r = 1.0 - t * t;
        if (r <= 0.0) return 0.0;
        return raw(t) / mass * (-2.0 * t / (r * r));
    }
};

// piecewise-constant sample lookup with constant extension
double sample_at(const SampledControl& u, int comp_rows, const Eigen::VectorXd& flat,
                 double t) {
    (void)comp_rows;
    const int N = u.samples();
    double s = (t - u.t1) / u.dt();
    int i = std::clamp(static_cast<int>(std::floor(s)), 0, N - 1);
    return flat[i];
}

} // namespace

ApproxRateTable smooth_approx_rate(const SampledControl& u, double gamma,
                                   const std::vector<double>& eps_grid) {
    static const Bump kernel;
    const int N = u.samples();
    const double dt = u.dt();
    const double T = u.t2 - u.t1;

    // scalar reduction: smooth the speed profile |u(t)| when k > 1,
    // the single component otherwise
    Eigen::VectorXd f(N);
    for (int i = 0; i < N; ++i)
        f[i] = u.values.rows() == 1 ? u.values(0, i) : u.values.col(i).norm();

    double fnorm = std::sqrt(f.squaredNorm() * dt);

    const int Q = 64;  // kernel quadrature points
    auto mollify = [&](double b, Eigen::VectorXd& w, Eigen::VectorXd& dw) {
        w.resize(N);
        dw.resize(N);
        for (int i = 0; i < N; ++i) {
            double t = u.t1 + (i + 0.5) * dt;
            double acc = 0.0, dacc = 0.0;
            for (int qi = 0; qi < Q; ++qi) {
                double s = -1.0 + (qi + 0.5) * 2.0 / Q;
                double fv = sample_at(u, 1, f, t - b * s);
                acc += fv * kernel.value(s);
                dacc += fv * kernel.deriv(s);
            }
            w[i] = acc * 2.0 / Q;
            dw[i] = dacc * 2.0 / Q / b;
        }
    };

    auto error_of = [&](double b) {
        Eigen::VectorXd w, dw;
        mollify(b, w, dw);
        return std::sqrt((w - f).squaredNorm() * dt);
    };

    ApproxRateTable table;
    table.gamma = gamma;
    for (double eps : eps_grid) {
        if (!(eps > 0.0) || eps > fnorm + 1e-12)
            throw std::invalid_argument("eps must lie in (0, ||u||_2]");
        ApproxRateRow row;
        row.eps = eps;

        double blo = dt * 0.5, bhi = T / 2.0;
        double elo = error_of(blo), ehi = error_of(bhi);
        double b = bhi;
        if (elo >= eps / 2.0) {
            b = blo;  // already rough enough at the grid floor
        } else if (ehi <= eps) {
            b = bhi;  // max smoothing still within the error budget
        } else {
            for (int it = 0; it < 60; ++it) {
                b = std::sqrt(blo * bhi);
                double e = error_of(b);
                if (e < eps / 2.0)
                    blo = b;
                else if (e > eps)
                    bhi = b;
                else
                    break;
                if (bhi / blo < 1.0 + 1e-12) break;
            }
        }
        Eigen::VectorXd w, dw;
        mollify(b, w, dw);
        row.bandwidth = b;
        row.achieved = std::sqrt((w - f).squaredNorm() * dt);
        row.dw_sup = dw.cwiseAbs().maxCoeff();
        row.scaled = std::pow(eps, gamma) * row.dw_sup;
        row.in_band = row.achieved >= eps / 2.0 - 1e-12 && row.achieved <= eps + 1e-12;
        if (!row.in_band) table.partial = true;
        table.rows.push_back(row);
    }

    // bounded if the scaled column does not blow up as eps decreases:
    // compare the tail against the head on a geometric eps grid
    if (table.rows.size() >= 2) {
        double head = table.rows.front().scaled;
        double tail = table.rows.back().scaled;
        table.bounded = tail <= 4.0 * std::max(head, 1e-30);
    }
    return table;
}

RegularityReport analyze(const SampledControl& u, const std::vector<double>& p_list,
                         double alpha, std::optional<double> approx_gamma) {
    u.validate();
    RegularityReport rep;
    for (double p : p_list) {
        RegularityReport::ModulusTable table;
        table.p = p;
        table.h = dyadic_h_grid(u);
        table.omega.resize(table.h.size());
        par::for_each_index(static_cast<std::int64_t>(table.h.size()), [&](std::int64_t i) {
            table.omega[i] = modulus(u, p, table.h[i]);
        });
        rep.moduli.push_back(std::move(table));

        RegularityReport::FitRow fr;
        fr.p = p;
        try {
            ExponentFit ef = fit_exponent(u, p);
            fr.alpha = ef.alpha;
            fr.residual = ef.residual;
            fr.exact_invariance = ef.exact_invariance;
        } catch (const insufficient_data&) {
            fr.alpha = std::nan("");
        }
        rep.fits.push_back(fr);

        RegularityReport::HolderRow hr;
        hr.p = p;
        hr.alpha = alpha;
        HolderConstant hc = holder_constant(u, p, alpha);
        hr.c = hc.value;
        hr.at_grid_floor = hc.at_grid_floor;
        hr.besov = besov_norm(u, p, alpha);
        rep.holder.push_back(hr);
    }
    rep.poincare = poincare_ratio(u, 2.0, alpha);
    if (approx_gamma) {
        Eigen::VectorXd f(u.samples());
        for (int i = 0; i < u.samples(); ++i) f[i] = u.values.col(i).norm();
        double fn = std::sqrt(f.squaredNorm() * u.dt());
        std::vector<double> eps;
        for (double e = 0.4 * fn; e > 0.02 * fn; e *= 0.5) eps.push_back(e);
        rep.approx = smooth_approx_rate(u, *approx_gamma, eps);
    }
    return rep;
}

} // namespace srlab::regularity
