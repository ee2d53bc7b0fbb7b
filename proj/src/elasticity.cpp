#include "df2d/elasticity.hpp"

#include <cmath>

namespace df2d {

IsotropicModuli::IsotropicModuli(double E, double nu) : youngs(E), poisson(nu) {
    if (!(E > 0.0) || !(nu > -1.0) || !(nu < 0.5))
        throw FieldError("IsotropicModuli: require E > 0 and -1 < nu < 1/2");
}

Eigen::Matrix2d compliance_apply(const Eigen::Matrix2d& sigma, const IsotropicModuli& m) {
    double a = (1.0 + m.poisson) / m.youngs;
    double b = m.poisson * (1.0 + m.poisson) / m.youngs;
    return a * sigma - b * sigma.trace() * Eigen::Matrix2d::Identity();
}

Eigen::Matrix2d stiffness_apply(const Eigen::Matrix2d& strain, const IsotropicModuli& m) {
    double c = m.youngs / (1.0 + m.poisson);
    double d = c * m.poisson / (1.0 - 2.0 * m.poisson);
    return c * strain + d * strain.trace() * Eigen::Matrix2d::Identity();
}

namespace {

// Apply an isotropic channel map out = a T + b tr(T) I to a tensor field.
SingularField isotropic_map(const SingularField& T, double a, double b) {
    if (T.codomain() != Codomain::Tensor && T.codomain() != Codomain::SymTensor)
        throw FieldError("isotropic map: tensor field expected");
    SingularField out(T.codomain(), T.domain_radius());
    out.set_fp_rho(T.fp_rho());
    auto put = [&](int ch, double w, const SmoothTerm& t) {
        if (w == 0.0) return;
        SmoothTerm s = t;
        s.coeff *= w;
        out.add_term(ch, s);
    };
    for (const auto& t : T.channel(0)) {
        put(0, a + b, t);
        put(3, b, t);
    }
    for (const auto& t : T.channel(3)) {
        put(0, b, t);
        put(3, a + b, t);
    }
    for (const auto& t : T.channel(1)) put(1, a, t);
    for (const auto& t : T.channel(2)) put(2, a, t);
    for (const auto& [al, v] : T.point_part()) {
        Eigen::Matrix2d M = std::get<Eigen::Matrix2d>(v);
        out.add_point(al, Eigen::Matrix2d(a * M + b * M.trace() * Eigen::Matrix2d::Identity()));
    }
    out.normalize();
    return out;
}

} // namespace

SingularField compliance_apply(const SingularField& sigma, const IsotropicModuli& m) {
    double a = (1.0 + m.poisson) / m.youngs;
    double b = -m.poisson * (1.0 + m.poisson) / m.youngs;
    return isotropic_map(sigma, a, b);
}

SingularField stiffness_apply(const SingularField& strain, const IsotropicModuli& m) {
    double c = m.youngs / (1.0 + m.poisson);
    double d = c * m.poisson / (1.0 - 2.0 * m.poisson);
    return isotropic_map(strain, c, d);
}

SingularField kelvin_stress(const IsotropicModuli& m, double domain_radius) {
    double nu = m.poisson;
    double a = -(3.0 - 2.0 * nu) / (4.0 * M_PI * (1.0 - nu));
    double b = (1.0 - 2.0 * nu) / (4.0 * M_PI * (1.0 - nu));
    auto S = SingularField::sym_tensor(domain_radius);
    S.add_tensor_polar(a, -1, 0, 1, Parity::Cos, PolarDyad::ErEr);
    S.add_tensor_polar(b, -1, 0, 1, Parity::Cos, PolarDyad::EtEt);
    S.add_tensor_polar(b, -1, 0, 1, Parity::Sin, PolarDyad::ErEt);
    S.add_tensor_polar(b, -1, 0, 1, Parity::Sin, PolarDyad::EtEr);
    S.normalize();
    return S;
}

SingularField kelvin_stress_e2(const IsotropicModuli& m, double domain_radius) {
    return kelvin_stress(m, domain_radius).swap_axes();
}

SingularField incompatibility_stress(const IsotropicModuli& m, double domain_radius) {
    double nu = m.poisson;
    double ca = m.youngs / (4.0 * M_PI * (1.0 - nu) * (1.0 + nu));
    double cb = -0.5 * ca;
    auto S = SingularField::sym_tensor(domain_radius);
    // ca (ln r + 1) I + cb M,  M = [[cos 2th, sin 2th], [sin 2th, -cos 2th]]
    for (int d : {0, 3}) {
        S.add_tensor_cart(d / 2, d % 2, ca, 0, 1, 0, Parity::Cos);
        S.add_tensor_cart(d / 2, d % 2, ca, 0, 0, 0, Parity::Cos);
    }
    S.add_tensor_cart(0, 0, cb, 0, 0, 2, Parity::Cos);
    S.add_tensor_cart(1, 1, -cb, 0, 0, 2, Parity::Cos);
    S.add_tensor_cart(0, 1, cb, 0, 0, 2, Parity::Sin);
    S.add_tensor_cart(1, 0, cb, 0, 0, 2, Parity::Sin);
    S.normalize();
    return S;
}

namespace {

// Shared smooth part of sigma_3 and sigma_4: -M / (pi r^2).
void add_minus_M_over_pir2(SingularField& S) {
    double c = -1.0 / M_PI;
    S.add_tensor_cart(0, 0, c, -2, 0, 2, Parity::Cos);
    S.add_tensor_cart(1, 1, -c, -2, 0, 2, Parity::Cos);
    S.add_tensor_cart(0, 1, c, -2, 0, 2, Parity::Sin);
    S.add_tensor_cart(1, 0, c, -2, 0, 2, Parity::Sin);
}

} // namespace

SingularField dilatation_stress(const IsotropicModuli& m, double domain_radius) {
    (void)m;
    auto S = SingularField::sym_tensor(domain_radius);
    add_minus_M_over_pir2(S);
    S.add_point(MultiIndex(0, 0), Eigen::Matrix2d(-Eigen::Matrix2d::Identity()));
    S.normalize();
    return S;
}

SingularField dipole_body_force_stress(const IsotropicModuli& m, double domain_radius) {
    auto S = SingularField::sym_tensor(domain_radius);
    add_minus_M_over_pir2(S);
    double c = 1.0 / (1.0 - 2.0 * m.poisson);
    S.add_point(MultiIndex(0, 0), Eigen::Matrix2d(c * Eigen::Matrix2d::Identity()));
    S.normalize();
    return S;
}

SingularField dilatation_source_N(const IsotropicModuli& m, double domain_radius) {
    auto N = SingularField::scalar(domain_radius);
    double c = 2.0 * (m.poisson * m.poisson - 1.0) / m.youngs;
    N.add_point(MultiIndex(2, 0), c);
    N.add_point(MultiIndex(0, 2), c);
    return N;
}

SingularField dipole_source_B(const IsotropicModuli& m, double domain_radius) {
    auto B = SingularField::vector(domain_radius);
    double c = 2.0 * (m.poisson - 1.0) / (1.0 - 2.0 * m.poisson);
    B.add_point(MultiIndex(1, 0), Eigen::Vector2d(c, 0.0));
    B.add_point(MultiIndex(0, 1), Eigen::Vector2d(0.0, c));
    return B;
}

SingularField general_point_solution(const PointSourceProblem& p) {
    double R = p.domain_radius;
    std::vector<std::pair<double, SingularField>> parts;
    SingularField s1 = kelvin_stress(p.moduli, R);
    SingularField s1e2 = kelvin_stress_e2(p.moduli, R);
    SingularField s2 = incompatibility_stress(p.moduli, R);
    for (const auto& [a, v] : p.body_force) {
        if (v.x() != 0.0) parts.push_back({v.x(), derivative_multi(s1, a)});
        if (v.y() != 0.0) parts.push_back({v.y(), derivative_multi(s1e2, a)});
    }
    for (const auto& [a, c] : p.incompatibility)
        if (c != 0.0) parts.push_back({c, derivative_multi(s2, a)});
    if (parts.empty()) return SingularField::sym_tensor(R);
    return linear_combine(parts);
}

SingularField problem_body_force(const PointSourceProblem& p) {
    auto B = SingularField::vector(p.domain_radius);
    for (const auto& [a, v] : p.body_force) B.add_point(a, v);
    B.normalize();
    return B;
}

SingularField problem_incompatibility(const PointSourceProblem& p) {
    auto N = SingularField::scalar(p.domain_radius);
    for (const auto& [a, c] : p.incompatibility) N.add_point(a, c);
    N.normalize();
    return N;
}

SolutionReport verify_solution(const SingularField& sigma, const PointSourceProblem& p,
                               const QuadratureSpec& q) {
    SolutionReport rep;
    rep.equilibrium = check_equilibrium(sigma, problem_body_force(p), q);
    rep.incompatibility =
        check_incompatibility(compliance_apply(sigma, p.moduli),
                              problem_incompatibility(p), q);
    return rep;
}

} // namespace df2d
