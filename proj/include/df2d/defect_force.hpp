#pragma once

#include "df2d/elasticity.hpp"

namespace df2d {

// Smooth (near O) stress given by polynomial components; sym invariant kept.
struct PolyStress {
    // component polynomials, entries [i][j] as maps MultiIndex -> coeff
    std::array<std::array<std::map<MultiIndex, double>, 2>, 2> comp;

    static PolyStress uniform(const Eigen::Matrix2d& s0);
    void set(int i, int j, const MultiIndex& a, double c); // keeps symmetry
    Eigen::Matrix2d eval(const Eigen::Vector2d& x) const;
    Eigen::Matrix2d deriv_at_origin(const MultiIndex& a) const; // d^a sigma(O)
    int degree() const;
};

// Distortion beta = E + a (e1 x e2 skew): strain plus scalar skew part.
struct Distortion {
    SingularField strain;          // sym-tensor
    SingularField skew_scalar;     // scalar field a
    Distortion(SingularField E, SingularField a);
    // Full tensor field beta = E + a(e1⊗e2 - e2⊗e1).
    SingularField as_tensor() const;
};

// Generalized force F^I = sum F^{I,alpha} d^alpha delta_O.
struct GeneralizedForce {
    std::map<MultiIndex, Eigen::Vector2d> entries;
    Eigen::Vector2d order0() const;
    int order() const;
};

// Cross-product conventions used throughout this module:
// e3 x v = (v2, -v1), v x e3 = (-v2, v1).
Eigen::Vector2d e3_cross(const Eigen::Vector2d& v);
Eigen::Vector2d cross_e3(const Eigen::Vector2d& v);

// Interaction Eshelby tensor J^I = <C beta1, beta2> I - beta2^T sigma1
// - beta1^T sigma2 (the two <C.,.> halves coincide by symmetry of C).
// beta2/sigma2 are smooth polynomial data; the products are exact in the
// algebra (polynomials fold into r^{|gamma|} harmonics).
SingularField interaction_eshelby(const Distortion& beta1, const SingularField& sigma1,
                                  const PolyStress& sigma2, const IsotropicModuli& m);

// F^I = e3 x (sigma2 A) for a point-supported dislocation density A.
GeneralizedForce generalized_force(const SingularField& A, const PolyStress& sigma2);

// Closed forms for the standard defect models.
Eigen::Vector2d peach_koehler(const Eigen::Vector2d& b, const Eigen::Matrix2d& sigma0);

struct DipoleForceCouple {
    Eigen::Vector2d force;
    std::map<MultiIndex, Eigen::Vector2d> couple; // order-1 coefficients
};
DipoleForceCouple dipole_force_couple(const Eigen::Vector2d& b, const Eigen::Vector2d& v,
                                      const PolyStress& sigma2);

// Finite-separation dipole: sum of the two Peach-Koehler forces of the pair
// (b/h at O, -b/h at O + h v) in the smooth stress.
Eigen::Vector2d dipole_pair_force(const Eigen::Vector2d& b, const Eigen::Vector2d& v,
                                  double h, const PolyStress& sigma2);

Eigen::Vector2d dilation_force(double a, const PolyStress& sigma2);
// Dislocation-density form of the dilation defect: A = (a/2)(e1⊗e2-e2⊗e1) grad delta.
SingularField dilation_density(double a, double domain_radius);

// Quadrature loop integral of J^I n over the eps ladder, extrapolated.
Eigen::Vector2d force_loop_oracle(const SingularField& J, const QuadratureSpec& q = {});

// Elastic distortion of an isolated defect solution: strain = compliance(sigma),
// skew from the antigradient of (A - Curl E) restricted (A vanishes away from O).
Distortion defect_distortion(const SingularField& sigma, const IsotropicModuli& m);

} // namespace df2d
