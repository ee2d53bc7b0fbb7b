#pragma once

#include <string>
#include <vector>

#include "df2d/calculus.hpp"
#include "df2d/quadrature.hpp"

namespace df2d {

enum class Verdict { Satisfied, Violated, InsufficientInformation };

std::string verdict_str(Verdict v);

struct Condition {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

struct CheckReport {
    Verdict verdict = Verdict::Satisfied;
    std::vector<Condition> conditions;
    std::vector<std::string> degree_report;
    double max_residual = 0.0;

    void add(const std::string& name, double residual, double tol);
    void finalize(bool hypotheses_ok = true);
    std::string text() const;
};

struct DefectCharges {
    Eigen::Vector2d burgers = Eigen::Vector2d::Zero();
    double disclination = 0.0;
    bool higher_unresolvable = false; // deg(E0) >= 0: multipoles beyond order 1 not recoverable
};

// Oracle pairing tolerance policy: |residual| <= 1e-8 * (1 + |scale|).
double oracle_tol(double scale);

// Full-field equilibrium check: symbolic Div sigma + B = 0 plus
// oracle pairings -sigma(grad(w^a e_i)) + B(w^a e_i) for |a| <= deg(sigma)+1,
// plus the degree inequality deg(B) <= deg(sigma) + 1.
CheckReport check_equilibrium(const SingularField& sigma, const SingularField& B,
                              const QuadratureSpec& q = {});

// Restricted-map check: smooth div sigma0 = 0, loop traction
// against -b00; verdict Satisfied only under the deg(sigma0) < 0 hypothesis,
// else InsufficientInformation.
CheckReport check_equilibrium_restricted(const SingularField& sigma0,
                                         const Eigen::Vector2d& b00,
                                         const QuadratureSpec& q = {});

// Closed-form circle integral of the traction of the smooth part over dB_eps.
Eigen::Vector2d loop_integral_traction(const SingularField& sigma0, double eps);

CheckReport check_compatibility(const SingularField& E, const QuadratureSpec& q = {});

CheckReport check_incompatibility(const SingularField& E, const SingularField& N,
                                  const QuadratureSpec& q = {});

// Cesaro-type loop integral: closed form, affine in x.
Eigen::Vector2d cesaro_integral(const SingularField& E0, const Eigen::Vector2d& x,
                                double eps);

DefectCharges identify_point_defect(const SingularField& E0);

// Point-supported antiderivatives of a scalar point
// part with vanishing (0,0) entry.
SingularField point_antiderivative_div(const SingularField& E_point);
SingularField point_antiderivative_curl(const SingularField& E_point);
// Sym-tensor with curl_curl equal to the given scalar
// point part (entries with |alpha| < 2 must vanish).
SingularField point_antiderivative_curlcurl(const SingularField& N_point);

// Source combination: Curl A + Theta + Laplacian(theta_scalar).
SingularField incompatibility_from_sources(const SingularField& A,
                                           const SingularField& Theta,
                                           const SingularField& vartheta);

} // namespace df2d
