#include "srlab/shortest.hpp"

#include <array>
#include <cmath>
#include <random>

#include "srlab/numeric.hpp"
#include "srlab/parallel.hpp"

namespace srlab::geodesics {

namespace {

// Forward RK4 sweep keeping the stage points, then a reverse sweep
// propagating the endpoint adjoint into per-interval control gradients.
struct ForwardTape {
    std::vector<Eigen::VectorXd> x;                    // N+1 nodes
    std::vector<std::array<Eigen::VectorXd, 4>> stage; // stage points per interval
};

ForwardTape forward(const SRStructure& s, const Eigen::VectorXd& x0,
                    const Eigen::MatrixXd& u) {
    const int N = static_cast<int>(u.cols());
    const double h = 1.0 / N;
    ForwardTape tape;
    tape.x.resize(N + 1);
    tape.stage.resize(N);
    tape.x[0] = x0;
    for (int i = 0; i < N; ++i) {
        const Eigen::VectorXd ui = u.col(i);
        const Eigen::VectorXd& x = tape.x[i];
        Eigen::VectorXd k1 = s.drift(x, ui);
        Eigen::VectorXd x2 = x + 0.5 * h * k1;
        Eigen::VectorXd k2 = s.drift(x2, ui);
        Eigen::VectorXd x3 = x + 0.5 * h * k2;
        Eigen::VectorXd k3 = s.drift(x3, ui);
        Eigen::VectorXd x4 = x + h * k3;
        Eigen::VectorXd k4 = s.drift(x4, ui);
        tape.stage[i] = {x, x2, x3, x4};
        tape.x[i + 1] = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return tape;
}

// Given lambda = dJ/dx(1), accumulates dJ/du into grad and returns nothing;
// the caller adds the running-cost term separately.
void backward(const SRStructure& s, const ForwardTape& tape, const Eigen::MatrixXd& u,
              Eigen::VectorXd lambda, Eigen::MatrixXd& grad) {
    const int N = static_cast<int>(u.cols());
    const double h = 1.0 / N;
    for (int i = N - 1; i >= 0; --i) {
        const Eigen::VectorXd ui = u.col(i);
        const auto& st = tape.stage[i];
        Eigen::MatrixXd A1 = s.drift_jacobian(st[0], ui);
        Eigen::MatrixXd A2 = s.drift_jacobian(st[1], ui);
        Eigen::MatrixXd A3 = s.drift_jacobian(st[2], ui);
        Eigen::MatrixXd A4 = s.drift_jacobian(st[3], ui);

        Eigen::VectorXd l4 = (h / 6.0) * lambda;
        Eigen::VectorXd l3 = (h / 3.0) * lambda + h * A4.transpose() * l4;
        Eigen::VectorXd l2 = (h / 3.0) * lambda + 0.5 * h * A3.transpose() * l3;
        Eigen::VectorXd l1 = (h / 6.0) * lambda + 0.5 * h * A2.transpose() * l2;

        grad.col(i) += s.eval_frame(st[0]).transpose() * l1 +
                       s.eval_frame(st[1]).transpose() * l2 +
                       s.eval_frame(st[2]).transpose() * l3 +
                       s.eval_frame(st[3]).transpose() * l4;

        lambda += A1.transpose() * l1 + A2.transpose() * l2 + A3.transpose() * l3 +
                  A4.transpose() * l4;
    }
}

// Compact two-loop L-BFGS with Armijo backtracking.
template <class FG>
void lbfgs(FG&& fg, Eigen::VectorXd& x, int max_iters, double grad_tol) {
    const int m = 10;
    std::vector<Eigen::VectorXd> S, Y;
    Eigen::VectorXd g(x.size()), gp, xp;
    double f = fg(x, g);
    for (int it = 0; it < max_iters; ++it) {
        if (g.norm() <= grad_tol * std::max(1.0, x.norm())) break;

        // two-loop recursion
        Eigen::VectorXd q = -g;
        const int hsize = static_cast<int>(S.size());
        std::vector<double> alpha(hsize);
        for (int i = hsize - 1; i >= 0; --i) {
            double rho = 1.0 / Y[i].dot(S[i]);
            alpha[i] = rho * S[i].dot(q);
            q -= alpha[i] * Y[i];
        }
        if (hsize > 0) {
            double gamma = S.back().dot(Y.back()) / Y.back().squaredNorm();
            q *= gamma;
        }
        for (int i = 0; i < hsize; ++i) {
            double rho = 1.0 / Y[i].dot(S[i]);
            double beta = rho * Y[i].dot(q);
            q += (alpha[i] - beta) * S[i];
        }
        if (q.dot(g) > -1e-14 * q.norm() * g.norm()) q = -g;  // not a descent direction

        double step = 1.0;
        double gq = g.dot(q);
        xp = x;
        gp = g;
        double fp = f;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            x = xp + step * q;
            f = fg(x, g);
            if (std::isfinite(f) && f <= fp + 1e-4 * step * gq) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            x = xp;
            f = fp;
            g = gp;
            break;
        }
        Eigen::VectorXd sv = x - xp, yv = g - gp;
        if (sv.dot(yv) > 1e-12 * sv.norm() * yv.norm()) {
            S.push_back(sv);
            Y.push_back(yv);
            if (static_cast<int>(S.size()) > m) {
                S.erase(S.begin());
                Y.erase(Y.begin());
            }
        }
    }
}

// Minimal-norm Gauss-Newton correction on the endpoint map. The multiplier
// loop can plateau with a small residual once the subproblems turn stiff;
// near the constraint manifold the cheapest cure is Newton on the constraint
// alone, which leaves the length stationary to first order in the defect.
void polish_endpoint(const SRStructure& s, const Eigen::VectorXd& x0,
                     const Eigen::VectorXd& x1, Eigen::MatrixXd& u, double tol) {
    const int n = s.dim_n;
    const int k = static_cast<int>(u.rows());
    const int N = static_cast<int>(u.cols());
    for (int it = 0; it < 25; ++it) {
        ForwardTape tape = forward(s, x0, u);
        Eigen::VectorXd c = tape.x[N] - x1;
        double defect = c.norm();
        if (defect <= tol) return;

        Eigen::MatrixXd G(n, k * N);  // rows: d endpoint_l / d controls
        for (int l = 0; l < n; ++l) {
            Eigen::MatrixXd row = Eigen::MatrixXd::Zero(k, N);
            backward(s, tape, u, Eigen::VectorXd::Unit(n, l), row);
            G.row(l) = Eigen::Map<Eigen::VectorXd>(row.data(), row.size());
        }
        Eigen::MatrixXd GGt = G * G.transpose();
        GGt.diagonal().array() += 1e-14 * (1.0 + GGt.trace());
        Eigen::VectorXd du = G.transpose() * GGt.ldlt().solve(-c);
        if (!du.allFinite()) return;

        Eigen::Map<Eigen::MatrixXd> dum(du.data(), k, N);
        double step = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 25; ++ls) {
            Eigen::MatrixXd ut = u + step * dum;
            double dnew = (forward(s, x0, ut).x[N] - x1).norm();
            if (dnew < 0.9 * defect) {
                u = ut;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) return;
    }
}

Eigen::MatrixXd initial_control(const SRStructure& s, const Eigen::VectorXd& x0,
                                const Eigen::VectorXd& x1, int N, double noise,
                                std::mt19937_64& rng) {
    // straight-line interpolation: least-squares control for x1 - x0 at x0
    Eigen::MatrixXd F = s.eval_frame(x0);
    Eigen::VectorXd ubase =
        F.completeOrthogonalDecomposition().pseudoInverse() * (x1 - x0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double scale = noise * std::max(0.2, (x1 - x0).norm());
    Eigen::MatrixXd u(s.rank_k, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < s.rank_k; ++j) u(j, i) = ubase[j] + scale * gauss(rng);
    return u;
}

} // namespace

double augmented_objective(const SRStructure& s, const Eigen::VectorXd& x0,
                           const Eigen::VectorXd& x1, const Eigen::MatrixXd& controls,
                           const Eigen::VectorXd& mu, double rho, Eigen::MatrixXd* grad) {
    const int N = static_cast<int>(controls.cols());
    const double h = 1.0 / N;
    ForwardTape tape = forward(s, x0, controls);
    Eigen::VectorXd c = tape.x[N] - x1;
    double J = controls.squaredNorm() * h + mu.dot(c) + 0.5 * rho * c.squaredNorm();
    if (grad) {
        grad->setZero(controls.rows(), N);
        Eigen::VectorXd lambda = mu + rho * c;
        backward(s, tape, controls, lambda, *grad);
        *grad += 2.0 * h * controls;
    }
    return J;
}

SolveResult solve_shortest(const SRStructure& s, const Eigen::VectorXd& x0,
                           const Eigen::VectorXd& x1, const SolveOptions& opts) {
    const int N = opts.grid;
    const int k = s.rank_k;

    auto run_one = [&](std::uint64_t seed) {
        std::mt19937_64 rng = num::make_rng(seed);
        Eigen::MatrixXd u = initial_control(s, x0, x1, N, opts.init_noise, rng);

        Eigen::VectorXd mu = Eigen::VectorXd::Zero(s.dim_n);
        double rho = 10.0;
        double prev_defect = num::inf;
        int stalled = 0;
        SolveResult r;
        for (int outer = 0; outer < opts.max_outer; ++outer) {
            Eigen::Map<Eigen::VectorXd> uvec(u.data(), u.size());
            Eigen::VectorXd xv = uvec;
            auto fg = [&](const Eigen::VectorXd& v, Eigen::VectorXd& g) {
                Eigen::MatrixXd um = Eigen::Map<const Eigen::MatrixXd>(v.data(), k, N);
                Eigen::MatrixXd gm;
                double J = augmented_objective(s, x0, x1, um, mu, rho, &gm);
                g = Eigen::Map<Eigen::VectorXd>(gm.data(), gm.size());
                return J;
            };
            lbfgs(fg, xv, opts.max_inner, opts.grad_tol);
            u = Eigen::Map<Eigen::MatrixXd>(xv.data(), k, N);

            ForwardTape tape = forward(s, x0, u);
            Eigen::VectorXd c = tape.x[N] - x1;
            double defect = c.norm();
            // by the time the defect is this small the length has settled;
            // a minimal-norm Newton step finishes the constraint off faster
            // than further multiplier updates
            if (defect > opts.endpoint_tol && defect <= 1e-4) {
                polish_endpoint(s, x0, x1, u, 0.2 * opts.endpoint_tol);
                tape = forward(s, x0, u);
                c = tape.x[N] - x1;
                defect = c.norm();
            }
            r.outer_iters = outer + 1;
            r.endpoint_defect = defect;
            if (defect <= opts.endpoint_tol) {
                r.converged = true;
                break;
            }
            mu += rho * c;
            stalled = defect > 0.9 * prev_defect ? stalled + 1 : 0;
            if (defect > 0.25 * prev_defect) rho *= 8.0;
            prev_defect = defect;
            if (stalled >= 6) break;  // six outers without progress: stop
        }
        if (!r.converged && r.endpoint_defect <= 5e-2) {
            polish_endpoint(s, x0, x1, u, 0.2 * opts.endpoint_tol);
            r.endpoint_defect = (forward(s, x0, u).x[N] - x1).norm();
            r.converged = r.endpoint_defect <= opts.endpoint_tol;
        }
        r.energy = u.squaredNorm() / N;
        r.traj = integrate(s, x0, u, /*enforce_box=*/false);
        return r;
    };

    // restarts are independent seeded runs; keep the shortest converged one
    std::vector<SolveResult> runs(opts.restarts);
    par::for_each_index(opts.restarts, [&](std::int64_t i) {
        runs[i] = run_one(num::substream(opts.seed, static_cast<std::uint64_t>(i)));
    });

    int best = 0;
    for (int i = 1; i < opts.restarts; ++i) {
        auto better = [](const SolveResult& a, const SolveResult& b) {
            if (a.converged != b.converged) return a.converged;
            if (a.converged) return a.traj.length < b.traj.length;
            return a.endpoint_defect < b.endpoint_defect;
        };
        if (better(runs[i], runs[best])) best = i;
    }
    SolveResult r = std::move(runs[best]);
    if (r.converged && r.traj.length > 1e-14) {
        // constant-speed resampling slides the endpoint by the resampling
        // error, and the Newton corrector breaks exact constant speed by the
        // size of the defect it removes; alternating the two contracts both
        r.traj = reparam_constant_speed(s, r.traj);
        for (int round = 0; round < 6; ++round) {
            if ((r.traj.state(N) - x1).norm() <= opts.endpoint_tol) break;
            Eigen::MatrixXd uc = r.traj.controls;
            polish_endpoint(s, x0, x1, uc, 0.2 * opts.endpoint_tol);
            r.traj = reparam_constant_speed(s, integrate(s, x0, uc, false));
        }
        r.endpoint_defect = (r.traj.state(N) - x1).norm();
        r.converged = r.endpoint_defect <= 10.0 * opts.endpoint_tol;
    }
    if (!r.converged) r.certificate = "not certified: endpoint defect above tolerance";
    return r;
}

BallBoxReport ballbox_probe(const SRStructure& s, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& dir, const std::vector<double>& radii,
                            int grid, int restarts, std::uint64_t seed, double range_tol) {
    BallBoxReport rep;
    rep.points.resize(radii.size());
    Eigen::VectorXd d = dir / dir.norm();

    par::for_each_index(static_cast<std::int64_t>(radii.size()), [&](std::int64_t i) {
        SolveOptions o;
        o.grid = grid;
        o.restarts = restarts;
        o.seed = num::substream(seed, static_cast<std::uint64_t>(i));
        SolveResult sr = solve_shortest(s, x, x + radii[i] * d, o);
        rep.points[i] = {radii[i], sr.traj.length, sr.converged};
    });

    std::vector<double> lr, ld;
    for (const auto& p : rep.points) {
        if (!p.converged) {
            rep.partial = true;
            continue;
        }
        lr.push_back(p.radius);
        ld.push_back(p.distance);
    }
    if (lr.size() >= 2) {
        num::LineFit fit = num::fit_loglog(lr, ld);
        rep.exponent = fit.slope;
        rep.intercept = fit.intercept;
        double lo = 1.0 / s.declared_step;
        rep.exponent_in_range =
            (rep.exponent >= lo - range_tol) && (rep.exponent <= 1.0 + range_tol);
        for (size_t i = 0; i < lr.size(); ++i) {
            rep.cbb_horizontal = std::max(rep.cbb_horizontal, lr[i] / ld[i]);
            rep.cbb_anisotropic =
                std::max(rep.cbb_anisotropic, ld[i] / std::pow(lr[i], lo));
        }
    } else {
        rep.partial = true;
    }
    return rep;
}

} // namespace srlab::geodesics
