#include "srlab/interpdual.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "srlab/numeric.hpp"
#include "srlab/parallel.hpp"

namespace srlab::interpdual {

namespace {

constexpr double kSqrtLemmaConstant = 4.0;  // prefactor of the comparison bound
constexpr int kMaxIters = 100000;
constexpr double kRelTol = 1e-9;

void check_qr(double q, double r) {
    auto ok = [](double v) { return v == 1.0 || v == 2.0; };
    if (!ok(q) || !ok(r))
        throw std::invalid_argument("solver supports exponents q, r in {1, 2} only");
}

// --- exact Euclidean norm-ball projections -----------------------------------

// l1 ball by the sort-based simplex reduction
Eigen::VectorXd project_l1(const Eigen::VectorXd& v, double radius) {
    if (radius <= 0.0) return Eigen::VectorXd::Zero(v.size());
    if (v.cwiseAbs().sum() <= radius) return v;
    Eigen::VectorXd a = v.cwiseAbs();
    std::vector<double> s(a.data(), a.data() + a.size());
    std::sort(s.begin(), s.end(), std::greater<double>());
    double cum = 0.0, theta = 0.0;
    for (size_t i = 0; i < s.size(); ++i) {
        cum += s[i];
        double t = (cum - radius) / (i + 1);
        if (t >= (i + 1 < s.size() ? s[i + 1] : 0.0)) {
            theta = t;
            break;
        }
    }
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        double m = std::max(0.0, std::abs(v[i]) - theta);
        out[i] = v[i] >= 0 ? m : -m;
    }
    return out;
}

Eigen::VectorXd project_l2(const Eigen::VectorXd& v, double radius) {
    double n = v.norm();
    return n <= radius ? v : Eigen::VectorXd((radius / n) * v);
}

Eigen::VectorXd project_linf(const Eigen::VectorXd& v, double radius) {
    return v.cwiseMax(-radius).cwiseMin(radius);
}

// Euclidean projection onto the dt-weighted L_p ball of radius R
// (uniform weights, so the weighted projection is the Euclidean one with
// a rescaled radius).
Eigen::VectorXd project_weighted(const Eigen::VectorXd& v, double p, double R, double dt) {
    if (p == 1.0) return project_l1(v, R / dt);
    if (p == 2.0) return project_l2(v, R / std::sqrt(dt));
    return project_linf(v, R);
}

double weighted_norm(const Eigen::VectorXd& v, double p, double dt) {
    if (std::isinf(p)) return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
    return num::lp_norm(v, p, dt);
}

// prox of c * ||.||_{p,dt} in the Euclidean metric
Eigen::VectorXd prox_weighted_norm(const Eigen::VectorXd& v, double p, double c, double dt) {
    if (p == 2.0) {
        double n = v.norm();
        double t = c * std::sqrt(dt);
        if (n <= t) return Eigen::VectorXd::Zero(v.size());
        return (1.0 - t / n) * v;
    }
    if (std::isinf(p)) {
        // Moreau: subtract the projection onto the l1 ball of radius c
        return v - project_l1(v, c);
    }
    throw std::invalid_argument("prox only needed for the conjugate exponents 2, inf");
}

// derivative of the zero-endpoint node vector phi (interior nodes 1..N-1)
Eigen::VectorXd D_nodes(const Eigen::VectorXd& phi, double dt) {
    const Eigen::Index n = phi.size();  // N-1
    Eigen::VectorXd d(n + 1);
    d[0] = phi[0] / dt;
    for (Eigen::Index i = 1; i < n; ++i) d[i] = (phi[i] - phi[i - 1]) / dt;
    d[n] = -phi[n - 1] / dt;
    return d;
}

// Euclidean transpose of D_nodes
Eigen::VectorXd Dt_intervals(const Eigen::VectorXd& y, double dt) {
    const Eigen::Index N = y.size();
    Eigen::VectorXd out(N - 1);
    for (Eigen::Index j = 0; j < N - 1; ++j) out[j] = (y[j] - y[j + 1]) / dt;
    return out;
}

// difference quotients of interval values at the interior nodes
Eigen::VectorXd D_intervals(const Eigen::VectorXd& w, double dt) {
    const Eigen::Index N = w.size();
    Eigen::VectorXd d(N - 1);
    for (Eigen::Index j = 0; j + 1 < N; ++j) d[j] = (w[j + 1] - w[j]) / dt;
    return d;
}

Eigen::VectorXd Dt_nodes(const Eigen::VectorXd& y, double dt) {
    const Eigen::Index n = y.size();  // N-1
    Eigen::VectorXd out(n + 1);
    out[0] = -y[0] / dt;
    for (Eigen::Index i = 1; i < n; ++i) out[i] = (y[i - 1] - y[i]) / dt;
    out[n] = y[n - 1] / dt;
    return out;
}

} // namespace

ExponentSet exponents(double q, double zeta, Regime regime) {
    if (!(q >= 1.0 && q <= 2.0)) throw std::invalid_argument("q must lie in [1, 2]");
    if (!(zeta > 0.0 && zeta <= 1.0)) throw std::invalid_argument("zeta must lie in (0, 1]");
    if (!(q > zeta)) throw std::invalid_argument("q must exceed zeta");
    ExponentSet e;
    e.q = q;
    e.zeta = zeta;
    e.regime = regime;
    e.r = (regime == Regime::W) ? 2.0 : 1.0;
    e.theta = (q - 1.0) * zeta / (q - zeta);
    e.kappa = (1.0 + 2.0 * q * zeta - 3.0 * zeta) / (q - zeta);
    e.q_star = (q == 1.0) ? num::inf : q / (q - 1.0);
    e.r_star = (e.r == 1.0) ? num::inf : e.r / (e.r - 1.0);
    return e;
}

AdmissibleRanges admissible_ranges(int step, double p, Regime regime) {
    if (step < 2) throw std::invalid_argument("step must be >= 2");
    AdmissibleRanges a;
    a.regime = regime;
    a.step = step;
    a.p = p;
    if (regime == Regime::W) {
        if (!(p >= 2.0)) throw std::invalid_argument("case W needs p >= 2");
        a.alpha_sup = 2.0 / (p * (step - 1));
        a.endpoint_attained = (p == 2.0);  // alpha = 1/(step-1) attained at p=2
    } else {
        if (!(p >= 2.0 + 1.0 / (step - 1)))
            throw std::invalid_argument("case G needs p >= 2 + 1/(step-1)");
        a.beta_sup = 1.0 / (p * (step - 1));
        a.kappa_const = 1.0;
        a.kappa_slope = static_cast<double>(step - 2);
    }
    return a;
}

SqrtLemmaCheck sqrt_lemma_check(double l, const Eigen::VectorXd& u1,
                                const Eigen::VectorXd& psi, double q) {
    if (!(l > 0.0)) throw std::invalid_argument("l must be positive");
    if (!(q >= 1.0 && q <= 2.0)) throw std::invalid_argument("q must lie in [1, 2]");
    if (u1.size() != psi.size()) throw std::invalid_argument("u1 and psi sizes differ");
    if (u1.cwiseAbs().maxCoeff() > l * (1.0 + 1e-12))
        throw std::invalid_argument("need |u1| <= l pointwise");
    const double dt = 1.0 / u1.size();

    SqrtLemmaCheck c;
    double integral = 0.0, pairing = 0.0, psi_q = 0.0;
    for (Eigen::Index i = 0; i < u1.size(); ++i) {
        double rad = l * l - 2.0 * u1[i] * psi[i] + psi[i] * psi[i];
        integral += std::sqrt(std::max(0.0, rad)) * dt;
        pairing += u1[i] * psi[i] * dt;
        psi_q += std::pow(std::abs(psi[i]), q) * dt;
    }
    c.lhs = integral - l;
    c.rhs = kSqrtLemmaConstant * std::pow(l, 1.0 - q) * psi_q - pairing / l;
    c.slack = c.rhs - c.lhs;
    return c;
}

namespace {

// Shared primal-dual loop. Variables x (primal) and y (dual of Kx);
// prox_g and prox_fstar are exact, so the iterates stay feasible for
// their own constraint sets throughout.
template <class Kop, class KTop, class ProxG, class ProxFstar, class Objective>
SolverResult chambolle_pock(Eigen::VectorXd x, Eigen::VectorXd y, double opnorm,
                            Kop&& K, KTop&& KT, ProxG&& prox_g, ProxFstar&& prox_fstar,
                            Objective&& objective) {
    const double tau = 1.0 / opnorm;
    const double sigma = 1.0 / opnorm;
    Eigen::VectorXd xbar = x;
    double prev = objective(x);
    SolverResult res;
    for (int it = 1; it <= kMaxIters; ++it) {
        y = prox_fstar(y + sigma * K(xbar), sigma);
        Eigen::VectorXd xnew = prox_g(x - tau * KT(y), tau);
        xbar = 2.0 * xnew - x;
        x = xnew;
        if (it % 50 == 0) {
            double val = objective(x);
            if (std::abs(val - prev) <= kRelTol * std::max({std::abs(val), std::abs(prev), 1e-12})) {
                res.iterations = it;
                res.converged = true;
                res.value = val;
                res.arg = x;
                return res;
            }
            prev = val;
        }
    }
    res.iterations = kMaxIters;
    res.converged = false;
    res.value = objective(x);
    res.arg = x;
    return res;
}

} // namespace

SolverResult solve_S(const Eigen::VectorXd& u1, double M, double r, double q) {
    check_qr(q, r);
    if (M < 0.0) throw std::invalid_argument("M must be nonnegative");
    const int N = static_cast<int>(u1.size());
    if (N < 2) throw std::invalid_argument("need at least 2 intervals");
    const double dt = 1.0 / N;

    if (M == 0.0) {
        SolverResult res;  // phi' == 0 with zero endpoints forces phi == 0
        res.arg = Eigen::VectorXd::Zero(N - 1);
        return res;
    }

    const double opnorm = 2.0 / dt;
    auto K = [dt](const Eigen::VectorXd& phi) { return D_nodes(phi, dt); };
    auto KT = [dt](const Eigen::VectorXd& y) { return Dt_intervals(y, dt); };
    auto prox_g = [&](const Eigen::VectorXd& v, double) {
        return project_weighted(v, r, 1.0, dt);
    };
    // f(z) = -<u1, z>_dt + indicator(||z||_q <= M); conjugate prox by Moreau
    auto prox_fstar = [&](const Eigen::VectorXd& v, double sigma) {
        Eigen::VectorXd inner = (v + dt * u1) / sigma;
        return Eigen::VectorXd(v - sigma * project_weighted(inner, q, M, dt));
    };
    // report the value of a feasible point: scale the derivative back into
    // its ball (scaling also stays inside the phi ball, both contain 0)
    auto feasible_value = [&](const Eigen::VectorXd& phi) {
        Eigen::VectorXd d = D_nodes(phi, dt);
        double dn = weighted_norm(d, q, dt);
        double scale = dn > M ? M / dn : 1.0;
        return -(u1.dot(d) * dt) * scale;
    };

    SolverResult res = chambolle_pock(Eigen::VectorXd::Zero(N - 1),
                                      Eigen::VectorXd::Zero(N), opnorm, K, KT, prox_g,
                                      prox_fstar, feasible_value);
    // hand back the feasible rescaled argument
    Eigen::VectorXd d = D_nodes(res.arg, dt);
    double dn = weighted_norm(d, q, dt);
    if (dn > M) res.arg *= M / dn;
    res.value = feasible_value(res.arg);
    return res;
}

SolverResult solve_K(const Eigen::VectorXd& u1, double M, double r, double q) {
    check_qr(q, r);
    if (M < 0.0) throw std::invalid_argument("M must be nonnegative");
    const int N = static_cast<int>(u1.size());
    if (N < 2) throw std::invalid_argument("need at least 2 intervals");
    const double dt = 1.0 / N;
    const double rstar = (r == 1.0) ? num::inf : 2.0;
    const double qstar = (q == 1.0) ? num::inf : 2.0;

    const double opnorm = 2.0 / dt;
    auto K = [dt](const Eigen::VectorXd& w) { return D_intervals(w, dt); };
    auto KT = [dt](const Eigen::VectorXd& y) { return Dt_nodes(y, dt); };
    // g(w) = M ||u1 - w||_{q*,dt}
    auto prox_g = [&](const Eigen::VectorXd& v, double tau) {
        Eigen::VectorXd e = v - u1;
        return Eigen::VectorXd(u1 + prox_weighted_norm(e, qstar, tau * M, dt));
    };
    // f = ||.||_{r*,dt}; f* = indicator of the Euclidean-dual unit ball
    auto prox_fstar = [&](const Eigen::VectorXd& v, double) {
        if (rstar == 2.0) return project_l2(v, std::sqrt(dt));
        return project_l1(v, 1.0);  // r* = inf
    };
    auto objective = [&](const Eigen::VectorXd& w) {
        return weighted_norm(D_intervals(w, dt), rstar, dt) +
               M * weighted_norm(u1 - w, qstar, dt);
    };

    SolverResult res =
        chambolle_pock(u1, Eigen::VectorXd::Zero(N - 1), opnorm, K, KT, prox_g,
                       prox_fstar, objective);
    res.value = objective(res.arg);
    return res;
}

double k_functional_full(const Eigen::VectorXd& u1, double M, double r, double q) {
    // Lower-order term ||w||_{q*} stacked into the operator part, so every
    // prox stays an exact ball projection: K w = (D w, w), f(y1, y2) =
    // ||y1||_{r*} + ||y2||_{q*}, g(w) = M ||u1 - w||_{q*}.
    check_qr(q, r);
    const int N = static_cast<int>(u1.size());
    if (N < 2) throw std::invalid_argument("need at least 2 intervals");
    const double dt = 1.0 / N;
    const double rstar = (r == 1.0) ? num::inf : 2.0;
    const double qstar = (q == 1.0) ? num::inf : 2.0;
    const double opnorm = std::sqrt(4.0 / (dt * dt) + 1.0);

    auto K = [dt, N](const Eigen::VectorXd& w) {
        Eigen::VectorXd y(2 * N - 1);
        y.head(N - 1) = D_intervals(w, dt);
        y.tail(N) = w;
        return y;
    };
    auto KT = [dt, N](const Eigen::VectorXd& y) {
        return Eigen::VectorXd(Dt_nodes(y.head(N - 1), dt) + y.tail(N));
    };
    auto prox_g = [&](const Eigen::VectorXd& v, double tau) {
        Eigen::VectorXd e = v - u1;
        return Eigen::VectorXd(u1 + prox_weighted_norm(e, qstar, tau * M, dt));
    };
    auto dual_ball = [&](const Eigen::VectorXd& v, double p) {
        if (p == 2.0) return project_l2(v, std::sqrt(dt));
        return project_l1(v, 1.0);
    };
    auto prox_fstar = [&](const Eigen::VectorXd& v, double) {
        Eigen::VectorXd y(2 * N - 1);
        y.head(N - 1) = dual_ball(v.head(N - 1), rstar);
        y.tail(N) = dual_ball(v.tail(N), qstar);
        return y;
    };
    auto objective = [&](const Eigen::VectorXd& w) {
        return weighted_norm(D_intervals(w, dt), rstar, dt) +
               weighted_norm(w, qstar, dt) + M * weighted_norm(u1 - w, qstar, dt);
    };
    SolverResult res =
        chambolle_pock(u1, Eigen::VectorXd::Zero(2 * N - 1), opnorm, K, KT, prox_g,
                       prox_fstar, objective);
    return objective(res.arg);
}

DualPair duality_gap(const Eigen::VectorXd& u1, double M, double r, double q) {
    DualPair d;
    d.M = M;
    d.q = q;
    d.r = r;
    SolverResult S = solve_S(u1, M, r, q);
    SolverResult K = solve_K(u1, M, r, q);
    d.S_value = S.value;
    d.K_value = K.value;
    d.primal_phi = S.arg;
    d.dual_w = K.arg;
    d.gap = S.value + K.value;
    d.rel_gap = std::abs(d.gap) / (1.0 + std::abs(S.value) + K.value);
    d.converged = S.converged && K.converged;
    return d;
}

InterpolationCheck verify_interpolation_bound(const Eigen::VectorXd& u1, double l,
                                              const ExponentSet& exps,
                                              const std::vector<Eigen::VectorXd>& phis) {
    const int N = static_cast<int>(u1.size());
    const double dt = 1.0 / N;
    InterpolationCheck out;
    out.ratios.assign(phis.size(), 0.0);
    std::vector<int> skip(phis.size(), 0);

    par::for_each_index(static_cast<std::int64_t>(phis.size()), [&](std::int64_t i) {
        const Eigen::VectorXd& phi = phis[i];
        if (phi.size() != N - 1) {
            skip[i] = 1;
            return;
        }
        Eigen::VectorXd d = D_nodes(phi, dt);
        double pn = weighted_norm(phi, exps.r, dt);
        double dn = weighted_norm(d, exps.q, dt);
        if (pn < 1e-14 || dn < 1e-14) {
            skip[i] = 1;
            return;
        }
        double pairing = u1.dot(d) * dt;
        out.ratios[i] = pairing / (std::pow(l, exps.kappa) * std::pow(pn, exps.theta) *
                                   std::pow(dn, 1.0 - exps.theta));
    });

    for (size_t i = 0; i < phis.size(); ++i) {
        if (skip[i]) {
            ++out.skipped;
            continue;
        }
        if (out.ratios[i] > out.max_ratio) {
            out.max_ratio = out.ratios[i];
            out.witness = static_cast<int>(i);
        }
    }
    return out;
}

std::vector<MSweepRow> interpolation_msweep(const Eigen::VectorXd& u1, double l,
                                            const ExponentSet& exps,
                                            const std::vector<double>& M_grid) {
    std::vector<MSweepRow> rows(M_grid.size());
    par::for_each_index(static_cast<std::int64_t>(M_grid.size()), [&](std::int64_t i) {
        rows[i].M = M_grid[i];
        rows[i].S = solve_S(u1, M_grid[i], exps.r, exps.q).value;
        rows[i].surrogate =
            -rows[i].S / (std::pow(l, exps.kappa) * std::pow(M_grid[i], 1.0 - exps.theta));
    });
    return rows;
}

} // namespace srlab::interpdual
