#include "srlab/variation.hpp"

#include <cmath>
#include <stdexcept>

#include "srlab/errors.hpp"
#include "srlab/numeric.hpp"
#include "srlab/parallel.hpp"

namespace srlab::variation {

TestFunction TestFunction::hat(int N) {
    if (N < 2) throw std::invalid_argument("need at least 2 intervals");
    TestFunction tf;
    tf.values.resize(N - 1);
    for (int i = 1; i < N; ++i) {
        double t = double(i) / N;
        tf.values[i - 1] = t <= 0.5 ? 2.0 * t : 2.0 * (1.0 - t);
    }
    return tf;
}

TestFunction TestFunction::sine(int N, int m) {
    if (N < 2) throw std::invalid_argument("need at least 2 intervals");
    if (m < 1) throw std::invalid_argument("mode index must be >= 1");
    TestFunction tf;
    tf.values.resize(N - 1);
    for (int i = 1; i < N; ++i)
        tf.values[i - 1] = std::sin(M_PI * m * double(i) / N);
    return tf;
}

TestFunction TestFunction::random(int N, std::uint64_t seed) {
    if (N < 2) throw std::invalid_argument("need at least 2 intervals");
    auto rng = num::make_rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double a[6];
    for (int m = 0; m < 6; ++m) a[m] = gauss(rng) / ((m + 1) * (m + 1));
    TestFunction tf;
    tf.values = Eigen::VectorXd::Zero(N - 1);
    for (int i = 1; i < N; ++i)
        for (int m = 0; m < 6; ++m)
            tf.values[i - 1] += a[m] * std::sin(M_PI * (m + 1) * double(i) / N);
    return tf;
}

Eigen::VectorXd TestFunction::slopes() const {
    const int N = intervals();
    const double h = dt();
    Eigen::VectorXd d(N);
    d[0] = values[0] / h;
    for (int i = 1; i < N - 1; ++i) d[i] = (values[i] - values[i - 1]) / h;
    d[N - 1] = -values[N - 2] / h;
    return d;
}

double TestFunction::sup_norm() const {
    return values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
}

double TestFunction::l1_norm() const {
    // exact integral of |phi| per interval; sign changes split the
    // interval at the zero crossing
    const int N = intervals();
    const double h = dt();
    double s = 0.0;
    for (int i = 0; i < N; ++i) {
        double a = (i == 0) ? 0.0 : values[i - 1];
        double b = (i == N - 1) ? 0.0 : values[i];
        if (a * b >= 0.0)
            s += 0.5 * (std::abs(a) + std::abs(b)) * h;
        else
            s += 0.5 * (a * a + b * b) / std::abs(b - a) * h;
    }
    return s;
}

double TestFunction::l2_norm() const {
    // integral of a linear segment squared: h (a^2 + a b + b^2) / 3
    const int N = intervals();
    const double h = dt();
    double s = 0.0;
    for (int i = 0; i < N; ++i) {
        double a = (i == 0) ? 0.0 : values[i - 1];
        double b = (i == N - 1) ? 0.0 : values[i];
        s += h * (a * a + a * b + b * b) / 3.0;
    }
    return std::sqrt(s);
}

VariationResult vary(const SRStructure& s, const Trajectory& base,
                     const TestFunction& phi, double lambda, int component,
                     bool enforce_box) {
    const int N = base.intervals();
    if (phi.intervals() != N)
        throw std::invalid_argument("profile grid does not match the trajectory grid");
    if (component < 0 || component >= s.rank_k)
        throw std::invalid_argument("component out of range");

    Eigen::VectorXd d = phi.slopes();
    Eigen::MatrixXd v = base.controls;
    v.row(component) -= lambda * d.transpose();

    VariationResult r;
    r.lambda = lambda;
    r.component = component;
    r.varied = geodesics::integrate(s, base.state(0), v, enforce_box);
    r.endpoint_deviation = (r.varied.state(N) - base.state(N)).norm();
    r.length_change = r.varied.length - base.length;

    double q = 0.0;
    for (int i = 0; i < N; ++i) {
        double u2 = base.controls.col(i).squaredNorm();
        double uc = base.controls(component, i);
        q += std::sqrt(std::max(0.0, u2 - 2.0 * lambda * uc * d[i] + lambda * lambda * d[i] * d[i]));
    }
    r.length_formula = q / N;
    return r;
}

ProjectionResult project_to_H(const SRStructure& s, const Trajectory& base,
                              const TestFunction& phi, int component) {
    const int N = base.intervals();
    const int n = s.dim_n;
    if (phi.intervals() != N)
        throw std::invalid_argument("profile grid does not match the trajectory grid");
    if (component < 0 || component >= s.rank_k)
        throw std::invalid_argument("component out of range");

    geodesics::VariationalFlow flow = geodesics::variational_flow(s, base, -1);

    // moment sample at node i driven by the controls of interval `iv`
    auto moment = [&](int i, int iv) {
        Eigen::VectorXd x = base.state(i);
        Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
        for (int j = 0; j < s.rank_k; ++j) {
            if (j == component) continue;
            double uj = base.controls(j, iv);
            if (uj != 0.0) m += uj * srgeom::lie_bracket_at(s, j, component, x);
        }
        return Eigen::VectorXd(flow.P_inv[i] * m);
    };

    // trapezoid over each interval with its own control, collected per
    // interior node
    const double h = base.dt();
    Eigen::MatrixXd B(n, N - 1);
    double raw_scale = 0.0;
    for (int i = 1; i < N; ++i) {
        Eigen::VectorXd left = moment(i, i);       // node i opens interval i
        Eigen::VectorXd right = moment(i, i - 1);  // and closes interval i-1
        B.col(i - 1) = 0.5 * h * (left + right);
        raw_scale = std::max({raw_scale, left.cwiseAbs().maxCoeff(),
                              right.cwiseAbs().maxCoeff()});
    }

    ProjectionResult out;
    out.projected = phi;
    double degen_tol = 1e-12 * std::max(1.0, base.length * s.field_bound * s.field_bound);
    if (raw_scale <= degen_tol) {
        out.degenerate = true;
        return out;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sing = svd.singularValues();
    double smax = sing[0];
    int rank = 0;
    for (Eigen::Index i = 0; i < sing.size(); ++i)
        if (sing[i] > 1e-10 * smax) ++rank;
    out.active_constraints = rank;

    Eigen::MatrixXd Vr = svd.matrixV().leftCols(rank);
    out.projected.values = phi.values - Vr * (Vr.transpose() * phi.values);

    double pn = phi.values.norm();
    if (pn > 0.0)
        out.residual = (B * out.projected.values).norm() / (smax * pn);
    return out;
}

double deviation_constant(const SRStructure& s, double length) {
    double g = s.rank_k * length * s.field_bound;
    double eg = std::exp(g);
    double c1 = g * eg;
    double c2 = g * eg * eg * (1.0 + 2.0 * g * eg + g * g * eg * eg);
    return std::max({1.0, c1, c2});
}

FirstOrderCheck first_order_check(const SRStructure& s, const Trajectory& base,
                                  const TestFunction& phi, double lambda,
                                  int component) {
    FirstOrderCheck chk;
    chk.constant = deviation_constant(s, base.length);
    double phi_l1 = phi.l1_norm();
    if (phi.sup_norm() == 0.0) {
        chk.holds = true;  // trivial profile moves nothing
        return chk;
    }

    VariationResult vr = vary(s, base, phi, lambda, component);
    const int N = base.intervals();
    chk.holds = true;
    for (int i = 0; i <= N; ++i) {
        double dev = (vr.varied.state(i) - base.state(i)).norm();
        double pv = (i == 0 || i == N) ? 0.0 : std::abs(phi.values[i - 1]);
        double bound = lambda * (pv + chk.constant * base.length * phi_l1);
        chk.max_deviation = std::max(chk.max_deviation, dev);
        chk.max_excess = std::max(chk.max_excess, dev - bound);
        if (bound > 0.0) chk.max_ratio = std::max(chk.max_ratio, dev / bound);
    }
    chk.holds = chk.max_ratio <= 1.0;
    return chk;
}

OrderFit endpoint_order(const SRStructure& s, const Trajectory& base,
                        const TestFunction& phi, int component,
                        const std::vector<double>& lambdas) {
    OrderFit fit;
    fit.lambdas = lambdas;
    fit.deviations.assign(lambdas.size(), 0.0);
    par::for_each_index(static_cast<std::int64_t>(lambdas.size()), [&](std::int64_t i) {
        fit.deviations[i] = vary(s, base, phi, lambdas[i], component).endpoint_deviation;
    });

    double peak = 0.0;
    for (double d : fit.deviations) peak = std::max(peak, d);
    if (peak < 1e-12)
        throw insufficient_data(
            "endpoint deviations sit at roundoff level; the variation does not move "
            "the endpoint measurably");

    num::LineFit lf = num::fit_loglog(fit.lambdas, fit.deviations);
    if (lf.n < 3)
        throw insufficient_data("fewer than 3 usable points for the order fit");
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.residual = lf.residual;
    return fit;
}

std::vector<double> lambda_grid(double lo, double hi) {
    return num::log_grid(lo, hi, 7);
}

} // namespace srlab::variation
