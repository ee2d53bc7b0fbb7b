#pragma once

#include "df2d/checkers.hpp"

namespace df2d {

// Plane-strain isotropic moduli; stiffness positive definite iff E > 0 and
// -1 < nu < 1/2.
struct IsotropicModuli {
    double youngs = 1.0;
    double poisson = 0.0;
    IsotropicModuli() = default;
    IsotropicModuli(double E, double nu);
};

// Point-source problem: body-force multipoles (vector coefficients) and
// incompatibility multipoles (scalar).
struct PointSourceProblem {
    std::map<MultiIndex, Eigen::Vector2d> body_force;
    std::map<MultiIndex, double> incompatibility;
    IsotropicModuli moduli;
    double domain_radius = 1.0;
};

// E = ((1+nu)/E) sigma - (nu(1+nu)/E)(tr sigma) I, applied term/entry-wise.
SingularField compliance_apply(const SingularField& sigma, const IsotropicModuli& m);
// Exact inverse of compliance_apply.
SingularField stiffness_apply(const SingularField& strain, const IsotropicModuli& m);
// Same maps on plain matrix values.
Eigen::Matrix2d compliance_apply(const Eigen::Matrix2d& sigma, const IsotropicModuli& m);
Eigen::Matrix2d stiffness_apply(const Eigen::Matrix2d& strain, const IsotropicModuli& m);

// sigma_1: Kelvin solution, unit point force along e1.
SingularField kelvin_stress(const IsotropicModuli& m, double domain_radius);
// Kelvin solution for unit force along e2 (axis swap of sigma_1).
SingularField kelvin_stress_e2(const IsotropicModuli& m, double domain_radius);
// sigma_2: unit point incompatibility (wedge disclination).
SingularField incompatibility_stress(const IsotropicModuli& m, double domain_radius);
// sigma_3: dilatation center; sigma_4: force-dipole stress. Identical smooth
// parts, different point parts.
SingularField dilatation_stress(const IsotropicModuli& m, double domain_radius);
SingularField dipole_body_force_stress(const IsotropicModuli& m, double domain_radius);

// Sources matching sigma_3 / sigma_4 per the closed forms:
// N3 = (2(nu^2-1)/E) Lap delta_O;  B4 = (2(nu-1)/(1-2nu)) grad delta_O.
SingularField dilatation_source_N(const IsotropicModuli& m, double domain_radius);
SingularField dipole_source_B(const IsotropicModuli& m, double domain_radius);

// sigma = sum_a B^a d^a sigma_1^{(dir)} + sum_a N^a d^a sigma_2 with all
// derivatives distributional.
SingularField general_point_solution(const PointSourceProblem& p);

// Body-force / incompatibility fields of the problem as SingularFields.
SingularField problem_body_force(const PointSourceProblem& p);
SingularField problem_incompatibility(const PointSourceProblem& p);

struct SolutionReport {
    CheckReport equilibrium;
    CheckReport incompatibility;
    bool ok() const {
        return equilibrium.verdict == Verdict::Satisfied &&
               incompatibility.verdict == Verdict::Satisfied;
    }
};

SolutionReport verify_solution(const SingularField& sigma, const PointSourceProblem& p,
                               const QuadratureSpec& q = {});

} // namespace df2d
