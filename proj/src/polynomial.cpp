#include "srlab/polynomial.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace srlab::srgeom {

namespace {
constexpr double kDropTol = 0.0;  // exact arithmetic on coefficients; drop true zeros only
}

Polynomial Polynomial::constant(int nvars, double c) {
    Polynomial p(nvars);
    if (c != 0.0) p.terms_[std::vector<int>(nvars, 0)] = c;
    return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
    Polynomial p(nvars);
    std::vector<int> e(nvars, 0);
    e[index] = 1;
    p.terms_[e] = 1.0;
    return p;
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
        int t = 0;
        for (int k : e) t += k;
        d = std::max(d, t);
    }
    return d;
}

double Polynomial::eval(const Eigen::VectorXd& x) const {
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = c;
        for (int v = 0; v < nvars_; ++v)
            for (int k = 0; k < e[v]; ++k) t *= x[v];
        s += t;
    }
    return s;
}

Polynomial Polynomial::derivative(int var) const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        std::vector<int> d = e;
        d[var] -= 1;
        r.terms_[d] += c * e[var];
        if (r.terms_[d] == kDropTol) r.terms_.erase(d);
    }
    return r;
}

Polynomial& Polynomial::add_term(double coef, const std::vector<int>& exps) {
    if (static_cast<int>(exps.size()) != nvars_)
        throw std::invalid_argument("polynomial term has wrong arity");
    terms_[exps] += coef;
    if (terms_[exps] == 0.0) terms_.erase(exps);
    return *this;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_) {
        r.terms_[e] += c;
        if (r.terms_[e] == 0.0) r.terms_.erase(e);
    }
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    return *this + o * -1.0;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial r(nvars_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            std::vector<int> e(nvars_);
            for (int v = 0; v < nvars_; ++v) e[v] = ea[v] + eb[v];
            r.terms_[e] += ca * cb;
            if (r.terms_[e] == 0.0) r.terms_.erase(e);
        }
    }
    return r;
}

Polynomial Polynomial::operator*(double c) const {
    Polynomial r(nvars_);
    if (c == 0.0) return r;
    for (const auto& [e, k] : terms_) r.terms_[e] = k * c;
    return r;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        double v = c;
        if (!first) {
            os << (v < 0 ? " - " : " + ");
            v = std::abs(v);
        }
        first = false;
        bool any_var = false;
        for (int k : e)
            if (k > 0) any_var = true;
        if (!any_var || v != 1.0) os << v;
        bool star = (!any_var || v != 1.0);
        for (int varIdx = 0; varIdx < nvars_; ++varIdx) {
            if (e[varIdx] == 0) continue;
            if (star) os << "*";
            os << "x" << (varIdx + 1);
            if (e[varIdx] > 1) os << "^" << e[varIdx];
            star = true;
        }
    }
    return os.str();
}

// --- tiny recursive-descent parser for "c*x1^2*x3 + ..." --------------------

namespace {

struct Cursor {
    const std::string& s;
    size_t i = 0;
    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eof() {
        skip();
        return i >= s.size();
    }
    char peek() {
        skip();
        return i < s.size() ? s[i] : '\0';
    }
};

double parse_number(Cursor& c) {
    c.skip();
    size_t end = c.i;
    const std::string& s = c.s;
    while (end < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' ||
            s[end] == 'e' || s[end] == 'E' ||
            ((s[end] == '+' || s[end] == '-') && end > c.i &&
             (s[end - 1] == 'e' || s[end - 1] == 'E'))))
        ++end;
    double v = std::stod(s.substr(c.i, end - c.i));
    c.i = end;
    return v;
}

int parse_varindex(Cursor& c, int nvars) {
    // at 'x'
    ++c.i;
    size_t end = c.i;
    while (end < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[end]))) ++end;
    if (end == c.i) throw std::invalid_argument("bad variable in polynomial: " + c.s);
    int idx = std::stoi(c.s.substr(c.i, end - c.i));
    c.i = end;
    if (idx < 1 || idx > nvars)
        throw std::invalid_argument("variable index out of range in polynomial: " + c.s);
    return idx - 1;
}

} // namespace

Polynomial Polynomial::parse(int nvars, const std::string& text) {
    Polynomial result(nvars);
    Cursor c{text};
    int sign = +1;
    while (!c.eof()) {
        char ch = c.peek();
        if (ch == '+') {
            sign = +1;
            ++c.i;
            continue;
        }
        if (ch == '-') {
            sign = -1;
            ++c.i;
            continue;
        }
        // one term: [number] {*} {x<i>[^k]} ...
        double coef = 1.0;
        std::vector<int> exps(nvars, 0);
        bool saw_factor = false;
        while (!c.eof()) {
            ch = c.peek();
            if (ch == '+' || ch == '-') break;
            if (ch == '*') {
                ++c.i;
                continue;
            }
            if (ch == 'x') {
                int v = parse_varindex(c, nvars);
                int p = 1;
                if (c.peek() == '^') {
                    ++c.i;
                    p = static_cast<int>(parse_number(c));
                }
                exps[v] += p;
                saw_factor = true;
            } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
                coef *= parse_number(c);
                saw_factor = true;
            } else {
                throw std::invalid_argument("unexpected character in polynomial: " + text);
            }
        }
        if (!saw_factor) throw std::invalid_argument("empty term in polynomial: " + text);
        result.add_term(sign * coef, exps);
        sign = +1;
    }
    return result;
}

// --- PolyField ---------------------------------------------------------------

Eigen::VectorXd PolyField::eval(const Eigen::VectorXd& x) const {
    Eigen::VectorXd v(dim());
    for (int i = 0; i < dim(); ++i) v[i] = comp[i].eval(x);
    return v;
}

Eigen::MatrixXd PolyField::jacobian_at(const Eigen::VectorXd& x) const {
    const int n = dim();
    Eigen::MatrixXd J(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) J(i, j) = comp[i].derivative(j).eval(x);
    return J;
}

PolyField lie_bracket(const PolyField& f, const PolyField& g) {
    const int n = f.dim();
    PolyField b;
    b.comp.resize(n);
    for (int i = 0; i < n; ++i) {
        Polynomial s(f.comp[i].nvars());
        for (int j = 0; j < n; ++j)
            s = s + g.comp[i].derivative(j) * f.comp[j] - f.comp[i].derivative(j) * g.comp[j];
        b.comp[i] = s;
    }
    return b;
}

} // namespace srlab::srgeom
