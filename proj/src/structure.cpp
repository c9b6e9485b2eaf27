#include "srlab/structure.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "srlab/io.hpp"

namespace srlab::srgeom {

namespace {

// Grid sample of sup norms of the fields and their first two derivatives.
// The catalogue components have degree <= 2, so a corner-including grid
// captures the boundary maxima these polynomials attain.
double sample_field_bound(const SRStructure& s) {
    const int n = s.dim_n;
    const int per_axis = (n <= 3) ? 17 : 9;
    std::vector<int> idx(n, 0);
    double bound = 0.0;

    // precompute derivative polynomials
    std::vector<std::vector<std::vector<Polynomial>>> d1(s.rank_k), d2(s.rank_k);
    for (int i = 0; i < s.rank_k; ++i) {
        d1[i].assign(n, {});
        d2[i].assign(n, {});
        for (int c = 0; c < n; ++c) {
            d1[i][c].resize(n);
            d2[i][c].resize(n * n);
            for (int a = 0; a < n; ++a) {
                d1[i][c][a] = s.frame[i].comp[c].derivative(a);
                for (int b = 0; b < n; ++b)
                    d2[i][c][a * n + b] = d1[i][c][a].derivative(b);
            }
        }
    }

    Eigen::VectorXd x(n);
    bool done = false;
    while (!done) {
        for (int v = 0; v < n; ++v) {
            double t = double(idx[v]) / (per_axis - 1);
            x[v] = s.box_min[v] + t * (s.box_max[v] - s.box_min[v]);
        }
        for (int i = 0; i < s.rank_k; ++i) {
            bound = std::max(bound, s.frame[i].eval(x).norm());
            double j2 = 0.0, h2 = 0.0;
            for (int c = 0; c < n; ++c)
                for (int a = 0; a < n; ++a) {
                    double d = d1[i][c][a].eval(x);
                    j2 += d * d;
                    for (int b = 0; b < n; ++b) {
                        double dd = d2[i][c][a * n + b].eval(x);
                        h2 += dd * dd;
                    }
                }
            bound = std::max(bound, std::sqrt(j2));
            bound = std::max(bound, std::sqrt(h2));
        }
        // advance the multi-index
        int v = 0;
        while (v < n && ++idx[v] == per_axis) {
            idx[v] = 0;
            ++v;
        }
        done = (v == n);
    }
    return bound;
}

SRStructure finish(SRStructure s) {
    if (s.box_min.size() == 0) {
        s.box_min = Eigen::VectorXd::Constant(s.dim_n, -2.0);
        s.box_max = Eigen::VectorXd::Constant(s.dim_n, 2.0);
    }
    s.field_bound = sample_field_bound(s);
    return s;
}

} // namespace

bool SRStructure::in_box(const Eigen::VectorXd& x, double tol) const {
    for (int i = 0; i < dim_n; ++i)
        if (x[i] < box_min[i] - tol || x[i] > box_max[i] + tol) return false;
    return true;
}

Eigen::MatrixXd SRStructure::eval_frame(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd F(dim_n, rank_k);
    for (int i = 0; i < rank_k; ++i) F.col(i) = frame[i].eval(x);
    return F;
}

Eigen::MatrixXd SRStructure::frame_jacobian(int i, const Eigen::VectorXd& x) const {
    return frame[i].jacobian_at(x);
}

Eigen::VectorXd SRStructure::drift(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim_n);
    for (int i = 0; i < rank_k; ++i) v += u[i] * frame[i].eval(x);
    return v;
}

Eigen::MatrixXd SRStructure::drift_jacobian(const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& u) const {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(dim_n, dim_n);
    for (int i = 0; i < rank_k; ++i)
        if (u[i] != 0.0) J += u[i] * frame[i].jacobian_at(x);
    return J;
}

SRStructure heisenberg() {
    SRStructure s;
    s.name = "heisenberg";
    s.dim_n = 3;
    s.rank_k = 2;
    s.declared_step = 2;
    PolyField f1, f2;
    f1.comp = {Polynomial::constant(3, 1.0), Polynomial::constant(3, 0.0),
               Polynomial::variable(3, 1) * -0.5};
    f2.comp = {Polynomial::constant(3, 0.0), Polynomial::constant(3, 1.0),
               Polynomial::variable(3, 0) * 0.5};
    s.frame = {f1, f2};
    return finish(std::move(s));
}

SRStructure martinet() {
    SRStructure s;
    s.name = "martinet";
    s.dim_n = 3;
    s.rank_k = 2;
    s.declared_step = 3;
    PolyField f1, f2;
    f1.comp = {Polynomial::constant(3, 1.0), Polynomial::constant(3, 0.0),
               Polynomial::variable(3, 1) * Polynomial::variable(3, 1) * 0.5};
    f2.comp = {Polynomial::constant(3, 0.0), Polynomial::constant(3, 1.0),
               Polynomial::constant(3, 0.0)};
    s.frame = {f1, f2};
    return finish(std::move(s));
}

SRStructure engel() {
    SRStructure s;
    s.name = "engel";
    s.dim_n = 4;
    s.rank_k = 2;
    s.declared_step = 3;
    PolyField f1, f2;
    f1.comp = {Polynomial::constant(4, 1.0), Polynomial::constant(4, 0.0),
               Polynomial::constant(4, 0.0), Polynomial::constant(4, 0.0)};
    f2.comp = {Polynomial::constant(4, 0.0), Polynomial::constant(4, 1.0),
               Polynomial::variable(4, 0),
               Polynomial::variable(4, 0) * Polynomial::variable(4, 0) * 0.5};
    s.frame = {f1, f2};
    return finish(std::move(s));
}

SRStructure catalogue(const std::string& name) {
    if (name == "heisenberg") return heisenberg();
    if (name == "martinet") return martinet();
    if (name == "engel") return engel();
    throw std::invalid_argument("unknown catalogue structure: " + name);
}

Eigen::VectorXd lie_bracket_at(const SRStructure& s, int i, int j, const Eigen::VectorXd& x) {
    if (i < 0 || i >= s.rank_k || j < 0 || j >= s.rank_k)
        throw std::invalid_argument("field index out of range");
    if (!s.in_box(x)) throw std::domain_error("bracket point outside domain box");
    return lie_bracket(s.frame[i], s.frame[j]).eval(x);
}

Eigen::VectorXd lie_bracket_fd(const SRStructure& s, int i, int j, const Eigen::VectorXd& x,
                               double h) {
    if (i < 0 || i >= s.rank_k || j < 0 || j >= s.rank_k)
        throw std::invalid_argument("field index out of range");
    const int n = s.dim_n;
    auto jac = [&](const PolyField& f) {
        Eigen::MatrixXd J(n, n);
        for (int m = 0; m < n; ++m) {
            Eigen::VectorXd xp = x, xm = x;
            xp[m] += h;
            xm[m] -= h;
            J.col(m) = (f.eval(xp) - f.eval(xm)) / (2.0 * h);
        }
        return J;
    };
    return jac(s.frame[j]) * s.frame[i].eval(x) - jac(s.frame[i]) * s.frame[j].eval(x);
}

std::optional<int> hoermander_step(const SRStructure& s, const Eigen::VectorXd& x,
                                   int max_depth) {
    if (!s.in_box(x)) throw std::domain_error("step query outside domain box");
    if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");

    std::vector<PolyField> layer = s.frame;   // brackets of length 1
    std::vector<Eigen::VectorXd> collected;
    for (const auto& f : layer) collected.push_back(f.eval(x));

    auto rank_of = [&]() {
        Eigen::MatrixXd M(s.dim_n, static_cast<int>(collected.size()));
        for (size_t c = 0; c < collected.size(); ++c) M.col(static_cast<int>(c)) = collected[c];
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
        const auto& sv = svd.singularValues();
        double smax = sv.size() ? sv[0] : 0.0;
        int r = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv[i] > 1e-8 * smax) ++r;
        return r;
    };

    if (rank_of() == s.dim_n) return 1;
    for (int depth = 2; depth <= max_depth; ++depth) {
        std::vector<PolyField> next;
        for (const auto& b : layer)
            for (int i = 0; i < s.rank_k; ++i) {
                next.push_back(lie_bracket(s.frame[i], b));
                collected.push_back(next.back().eval(x));
            }
        if (rank_of() == s.dim_n) return depth;
        layer = std::move(next);
    }
    return std::nullopt;
}

double orthonormality_residual(const SRStructure& s,
                               const std::vector<Eigen::VectorXd>& points) {
    // Without an explicit metric the frame itself defines the inner product,
    // so it is orthonormal by construction.
    if (!s.metric) return 0.0;
    const Eigen::MatrixXd& G = *s.metric;
    double worst = 0.0;
    for (const auto& x : points) {
        Eigen::MatrixXd F = s.eval_frame(x);
        Eigen::MatrixXd gram = F.transpose() * G * F;
        worst = std::max(worst,
                         (gram - Eigen::MatrixXd::Identity(s.rank_k, s.rank_k)).cwiseAbs().maxCoeff());
    }
    return worst;
}

SRStructure load_structure(const std::string& path) {
    io::KVFile kv = io::KVFile::parse_file(path);
    SRStructure s;
    s.name = kv.get_string("name", "user");
    s.dim_n = static_cast<int>(kv.get_int("dim", 0));
    s.rank_k = static_cast<int>(kv.get_int("rank", 0));
    s.declared_step = static_cast<int>(kv.get_int("step", 0));
    if (s.dim_n < 1 || s.rank_k < 1 || s.rank_k > s.dim_n)
        throw std::invalid_argument("structure file has bad dim/rank: " + path);

    if (kv.has("box_min")) {
        auto lo = kv.get_list("box_min"), hi = kv.get_list("box_max");
        if (static_cast<int>(lo.size()) != s.dim_n || static_cast<int>(hi.size()) != s.dim_n)
            throw std::invalid_argument("box bounds have wrong arity: " + path);
        s.box_min = Eigen::Map<Eigen::VectorXd>(lo.data(), s.dim_n);
        s.box_max = Eigen::Map<Eigen::VectorXd>(hi.data(), s.dim_n);
    }

    s.frame.assign(s.rank_k, PolyField{});
    for (int i = 0; i < s.rank_k; ++i)
        s.frame[i].comp.assign(s.dim_n, Polynomial::constant(s.dim_n, 0.0));
    for (const auto& [key, val] : kv.pairs()) {
        if (key.rfind("field_", 0) != 0) continue;
        int fi = 0, ci = 0;
        if (std::sscanf(key.c_str(), "field_%d_%d", &fi, &ci) != 2)
            throw std::invalid_argument("bad field key in structure file: " + key);
        if (fi < 1 || fi > s.rank_k || ci < 1 || ci > s.dim_n)
            throw std::invalid_argument("field key out of range: " + key);
        std::string text = val;
        if (!text.empty() && text.front() == '"') text = text.substr(1, text.size() - 2);
        s.frame[fi - 1].comp[ci - 1] = Polynomial::parse(s.dim_n, text);
    }

    if (kv.has("metric")) {
        auto m = kv.get_list("metric");
        if (static_cast<int>(m.size()) != s.dim_n * s.dim_n)
            throw std::invalid_argument("metric must be a flat n*n list: " + path);
        Eigen::MatrixXd G(s.dim_n, s.dim_n);
        for (int r = 0; r < s.dim_n; ++r)
            for (int c = 0; c < s.dim_n; ++c) G(r, c) = m[r * s.dim_n + c];
        s.metric = G;
    }
    return finish(std::move(s));
}

void save_structure(const SRStructure& s, const std::string& path) {
    std::ostringstream os;
    os << "name = \"" << s.name << "\"\n";
    os << "dim = " << s.dim_n << "\n";
    os << "rank = " << s.rank_k << "\n";
    os << "step = " << s.declared_step << "\n";
    auto list = [&](const Eigen::VectorXd& v) {
        std::ostringstream ls;
        ls << "[";
        for (int i = 0; i < v.size(); ++i) ls << (i ? ", " : "") << io::fmt_double(v[i]);
        ls << "]";
        return ls.str();
    };
    os << "box_min = " << list(s.box_min) << "\n";
    os << "box_max = " << list(s.box_max) << "\n";
    for (int i = 0; i < s.rank_k; ++i)
        for (int c = 0; c < s.dim_n; ++c)
            if (!s.frame[i].comp[c].is_zero())
                os << "field_" << (i + 1) << "_" << (c + 1) << " = \""
                   << s.frame[i].comp[c].to_string() << "\"\n";
    io::write_text_file(path, os.str());
}

} // namespace srlab::srgeom
