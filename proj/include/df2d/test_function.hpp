#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "df2d/multi_index.hpp"

namespace df2d {

// Smooth radial cutoff chi(r): 1 on [0, R/2], 0 on [R, inf), exp(-1/t) splice
// in between. First and second derivatives are analytic.
struct Cutoff {
    double R = 1.0;
    double value(double r) const;
    double d1(double r) const;
    double d2(double r) const;
};

// Compactly supported scalar test function phi(x) = P(x) * chi(|x|), with P an
// exact polynomial (so phi == P on B_{R/2} and all derivatives at O are exact).
class TestFunction {
public:
    TestFunction(std::map<MultiIndex, double> poly, double support_radius);

    // Adapted probe w^alpha: core (-1)^{|a|} x1^{a1} x2^{a2} / (a1! a2!).
    static TestFunction w_alpha(const MultiIndex& a, double support_radius);

    double support_radius() const { return cut_.R; }
    const std::map<MultiIndex, double>& poly() const { return poly_; }
    int poly_degree() const;

    double operator()(const Eigen::Vector2d& x) const;
    Eigen::Vector2d gradient(const Eigen::Vector2d& x) const;
    Eigen::Matrix2d hessian(const Eigen::Vector2d& x) const;

    // Exact d^beta phi(O) (equals the polynomial core's derivative at O).
    double deriv_at_origin(const MultiIndex& b) const;
    // Taylor coefficient d^beta phi(O) / beta!.
    double taylor_coeff(const MultiIndex& b) const;

    // phi_lambda(x) = lambda^-2 phi(x/lambda); support scales by lambda.
    TestFunction rescaled(double lambda) const;

private:
    std::map<MultiIndex, double> poly_;
    Cutoff cut_;
    double poly_eval(const Eigen::Vector2d& x) const;
    Eigen::Vector2d poly_grad(const Eigen::Vector2d& x) const;
    Eigen::Matrix2d poly_hess(const Eigen::Vector2d& x) const;
};

TestFunction make_w_alpha(const MultiIndex& a, double support_radius);
TestFunction rescale_test(const TestFunction& phi, double lambda);

} // namespace df2d
