#include "srlab/trajectory.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "srlab/errors.hpp"
#include "srlab/io.hpp"

namespace srlab::geodesics {

using ordered_json = nlohmann::ordered_json;

double Trajectory::mean_speed() const {
    double s = 0.0;
    for (int i = 0; i < intervals(); ++i) s += controls.col(i).norm();
    return s / intervals();
}

double Trajectory::speed_defect() const {
    double l = mean_speed();
    double worst = 0.0;
    for (int i = 0; i < intervals(); ++i)
        worst = std::max(worst, std::abs(controls.col(i).norm() - l));
    return worst;
}

Eigen::VectorXd rk4_step(const SRStructure& s, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u, double h) {
    Eigen::VectorXd k1 = s.drift(x, u);
    Eigen::VectorXd k2 = s.drift(x + 0.5 * h * k1, u);
    Eigen::VectorXd k3 = s.drift(x + 0.5 * h * k2, u);
    Eigen::VectorXd k4 = s.drift(x + h * k3, u);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory integrate(const SRStructure& s, const Eigen::VectorXd& x0,
                     const Eigen::MatrixXd& controls, bool enforce_box) {
    if (controls.rows() != s.rank_k)
        throw std::invalid_argument("control rows must equal the frame rank");
    if (controls.cols() < 1) throw std::invalid_argument("empty control grid");
    if (enforce_box && !s.in_box(x0)) throw std::domain_error("x0 outside domain box");

    const int N = static_cast<int>(controls.cols());
    const double h = 1.0 / N;
    Trajectory t;
    t.structure = s.name;
    t.controls = controls;
    t.states.resize(N + 1, s.dim_n);
    t.states.row(0) = x0.transpose();
    Eigen::VectorXd x = x0;
    double len = 0.0;
    for (int i = 0; i < N; ++i) {
        x = rk4_step(s, x, controls.col(i), h);
        if (enforce_box && !s.in_box(x, 1e-12))
            throw escape_error((i + 1) * h, "trajectory left the domain box at t=" +
                                                std::to_string((i + 1) * h));
        t.states.row(i + 1) = x.transpose();
        len += controls.col(i).norm() * h;
    }
    t.length = len;
    return t;
}

VariationalFlow variational_flow(const SRStructure& s, const Trajectory& traj,
                                 int excluded) {
    const int N = traj.intervals();
    const int n = s.dim_n;
    const double h = traj.dt();
    if (excluded < -1 || excluded >= s.rank_k)
        throw std::invalid_argument("excluded component out of range");

    // A(x, u) = sum_{j != excluded} u_j Df_j(x); the state is advanced
    // alongside P with the same RK4 stages, which reproduces the stored
    // nodes exactly.
    auto A = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (int j = 0; j < s.rank_k; ++j)
            if (j != excluded && u[j] != 0.0) m += u[j] * s.frame[j].jacobian_at(x);
        return m;
    };

    VariationalFlow flow;
    flow.P.reserve(N + 1);
    flow.P_inv.reserve(N + 1);
    flow.P.push_back(Eigen::MatrixXd::Identity(n, n));
    flow.P_inv.push_back(Eigen::MatrixXd::Identity(n, n));

    Eigen::VectorXd x = traj.state(0);
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < N; ++i) {
        Eigen::VectorXd u = traj.controls.col(i);

        Eigen::VectorXd k1 = s.drift(x, u);
        Eigen::MatrixXd K1 = A(x, u) * P;
        Eigen::VectorXd x2 = x + 0.5 * h * k1;
        Eigen::VectorXd k2 = s.drift(x2, u);
        Eigen::MatrixXd K2 = A(x2, u) * (P + 0.5 * h * K1);
        Eigen::VectorXd x3 = x + 0.5 * h * k2;
        Eigen::VectorXd k3 = s.drift(x3, u);
        Eigen::MatrixXd K3 = A(x3, u) * (P + 0.5 * h * K2);
        Eigen::VectorXd x4 = x + h * k3;
        Eigen::VectorXd k4 = s.drift(x4, u);
        Eigen::MatrixXd K4 = A(x4, u) * (P + h * K3);

        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        P += (h / 6.0) * (K1 + 2.0 * K2 + 2.0 * K3 + K4);
        flow.P.push_back(P);
        flow.P_inv.push_back(P.partialPivLu().inverse());
    }
    return flow;
}

Trajectory reparam_constant_speed(const SRStructure& s, const Trajectory& traj) {
    const int N = traj.intervals();
    const double h = traj.dt();
    const double l = traj.length;
    if (!(l > 1e-14)) throw std::invalid_argument("cannot reparametrize a zero-length curve");

    // cumulative arclength at the nodes
    std::vector<double> arc(N + 1, 0.0);
    for (int i = 0; i < N; ++i) arc[i + 1] = arc[i] + traj.controls.col(i).norm() * h;

    // average the unit direction over each new interval's preimage in
    // arclength measure, then rescale to the common speed; pointwise
    // sampling at midpoints misattributes whole intervals near breakpoints
    Eigen::MatrixXd v(traj.controls.rows(), N);
    int seg = 0;
    for (int i = 0; i < N; ++i) {
        const double s0 = l * i / N, s1 = l * (i + 1) / N;
        while (seg + 1 < N && arc[seg + 1] <= s0) ++seg;
        Eigen::VectorXd m = Eigen::VectorXd::Zero(traj.controls.rows());
        for (int j = seg; j < N; ++j) {
            if (arc[j] >= s1) break;
            double w = std::min(arc[j + 1], s1) - std::max(arc[j], s0);
            double un = traj.controls.col(j).norm();
            if (w > 0.0 && un >= 1e-15) m += (w / un) * traj.controls.col(j);
        }
        double mn = m.norm();
        if (mn < 1e-15) {
            // idle stretch: hold direction from the nearest moving segment
            int probe = seg;
            while (probe < N - 1 && traj.controls.col(probe).norm() < 1e-15) ++probe;
            m = traj.controls.col(probe);
            mn = m.norm();
        }
        v.col(i) = (l / mn) * m;
    }
    return integrate(s, traj.state(0), v);
}

void save_trajectory_json(const Trajectory& t, const std::string& path) {
    ordered_json j;
    j["structure"] = t.structure;
    j["n"] = t.states.cols();
    j["k"] = t.controls.rows();
    j["intervals"] = t.intervals();
    j["length"] = io::hex_double(t.length);
    auto mat = [](const Eigen::MatrixXd& m) {
        ordered_json rows = ordered_json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            ordered_json row = ordered_json::array();
            for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(io::hex_double(m(r, c)));
            rows.push_back(row);
        }
        return rows;
    };
    j["states"] = mat(t.states);
    j["controls"] = mat(t.controls);
    io::write_text_file(path, j.dump(2) + "\n");
}

Trajectory load_trajectory_json(const std::string& path) {
    ordered_json j = ordered_json::parse(io::read_text_file(path));
    Trajectory t;
    t.structure = j.at("structure").get<std::string>();
    t.length = io::parse_double(j.at("length").get<std::string>());
    auto mat = [](const ordered_json& rows) {
        Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows[0].size());
        for (size_t r = 0; r < rows.size(); ++r)
            for (size_t c = 0; c < rows[r].size(); ++c)
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    io::parse_double(rows[r][c].get<std::string>());
        return m;
    };
    t.states = mat(j.at("states"));
    t.controls = mat(j.at("controls"));
    return t;
}

void save_trajectory_text(const Trajectory& t, const std::string& path) {
    std::ostringstream os;
    const int n = static_cast<int>(t.states.cols());
    const int k = static_cast<int>(t.controls.rows());
    os << "# structure=" << t.structure << " length=" << io::fmt_double(t.length) << "\n";
    os << "# t";
    for (int c = 0; c < n; ++c) os << " x" << (c + 1);
    for (int c = 0; c < k; ++c) os << " u" << (c + 1);
    os << "\n";
    const int N = t.intervals();
    for (int i = 0; i <= N; ++i) {
        os << io::fmt_double(double(i) / N);
        for (int c = 0; c < n; ++c) os << " " << io::fmt_double(t.states(i, c));
        for (int c = 0; c < k; ++c)
            os << " " << io::fmt_double(i < N ? t.controls(c, i) : t.controls(c, N - 1));
        os << "\n";
    }
    io::write_text_file(path, os.str());
}

} // namespace srlab::geodesics
