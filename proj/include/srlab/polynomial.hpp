#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace srlab::srgeom {

// Sparse multivariate polynomial over a fixed number of variables.
// Terms are kept in a map keyed by exponent vector, so arithmetic
// stays canonical (like terms combined, zeros dropped).
//
// This is the backbone of the frame catalogue: every field component is
// polynomial, which gives exact Jacobians, Hessians and iterated Lie
// brackets without finite differencing.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(int nvars) : nvars_(nvars) {}

    static Polynomial constant(int nvars, double c);
    static Polynomial variable(int nvars, int index);

    // Parses "1 - 0.5*x2 + 0.25*x1^2*x3" (1-based variable names x1..xn).
    static Polynomial parse(int nvars, const std::string& text);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;

    double eval(const Eigen::VectorXd& x) const;
    Polynomial derivative(int var) const;

    Polynomial& add_term(double coef, const std::vector<int>& exps);

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(double c) const;

    std::string to_string() const;

private:
    int nvars_ = 0;
    std::map<std::vector<int>, double> terms_;
};

// A vector field on R^n with polynomial components.
struct PolyField {
    std::vector<Polynomial> comp;  // size n

    int dim() const { return static_cast<int>(comp.size()); }
    Eigen::VectorXd eval(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd jacobian_at(const Eigen::VectorXd& x) const;
};

// Lie bracket [f, g] = Dg f - Df g, computed symbolically.
PolyField lie_bracket(const PolyField& f, const PolyField& g);

} // namespace srlab::srgeom
