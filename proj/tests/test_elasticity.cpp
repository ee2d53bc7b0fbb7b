#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "df2d/elasticity.hpp"

using namespace df2d;

namespace {
constexpr double R = 1.0;
const std::vector<double> nus = {0.0, 0.25, 0.49};

bool is_zero_field(const SingularField& F) { return F.empty(); }
} // namespace

TEST_CASE("moduli validation") {
    CHECK_THROWS_AS((void)IsotropicModuli(-1.0, 0.3), FieldError);
    CHECK_THROWS_AS((void)IsotropicModuli(1.0, 0.5), FieldError);
    CHECK_THROWS_AS((void)IsotropicModuli(1.0, -1.0), FieldError);
    (void)IsotropicModuli(1.0, 0.49);
}

TEST_CASE("compliance/stiffness round trip and values") {
    IsotropicModuli m(1.0, 0.0);
    Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
    CHECK((compliance_apply(I, m) - I).norm() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK((stiffness_apply(I, m) - I).norm() == doctest::Approx(0.0).epsilon(1e-14));

    IsotropicModuli m2(2.3, 0.31);
    auto F = SingularField::sym_tensor(R);
    F.add_tensor_cart(0, 0, 1.2, 1, 0, 1, Parity::Cos);
    F.add_tensor_cart(0, 1, -0.4, 0, 0, 2, Parity::Sin);
    F.add_tensor_cart(1, 0, -0.4, 0, 0, 2, Parity::Sin);
    F.add_tensor_cart(1, 1, 0.9, 2, 0, 0, Parity::Cos);
    F.add_point(MultiIndex(1, 0), Eigen::Matrix2d(0.3 * Eigen::Matrix2d::Identity()));
    auto round = stiffness_apply(compliance_apply(F, m2), m2);
    auto diff = linear_combine({{1.0, round}, {-1.0, F}});
    CHECK(is_zero_field(diff));
}

TEST_CASE("Kelvin stress sigma_1") {
    for (double nu : nus) {
        IsotropicModuli m(1.0, nu);
        auto s1 = kelvin_stress(m, R);
        // formula value <sigma1 er, er> at (1, 0)
        auto V = std::get<Eigen::Matrix2d>(s1.eval_smooth(1.0, 0.0));
        double expect = (2 * nu - 3) / (4 * M_PI * (1 - nu));
        CHECK(V(0, 0) == doctest::Approx(expect).epsilon(1e-12)); // er = e1 at theta 0
        // Div sigma1 = -delta e1
        auto d = div(s1);
        CHECK(d.smooth_empty());
        REQUIRE(d.point_part().size() == 1);
        auto v = std::get<Eigen::Vector2d>(d.point_part().at(MultiIndex(0, 0)));
        CAPTURE(nu);
        CHECK(v.x() == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(v.y() == doctest::Approx(0.0).epsilon(1e-12));
        // CurlCurl of the strain = 0
        auto n = curl_curl(compliance_apply(s1, m));
        CHECK(is_zero_field(n));
    }
    // spot value nu = 1/4: -5/(6 pi)
    IsotropicModuli m(1.0, 0.25);
    auto s1 = kelvin_stress(m, R);
    auto V = std::get<Eigen::Matrix2d>(s1.eval_smooth(1.0, 0.0));
    CHECK(V(0, 0) == doctest::Approx(-5.0 / (6 * M_PI)).epsilon(1e-13));
}

TEST_CASE("Kelvin stress along e2") {
    for (double nu : nus) {
        IsotropicModuli m(1.0, nu);
        auto s = kelvin_stress_e2(m, R);
        auto d = div(s);
        CHECK(d.smooth_empty());
        auto v = std::get<Eigen::Vector2d>(d.point_part().at(MultiIndex(0, 0)));
        CHECK(v.x() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(v.y() == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(is_zero_field(curl_curl(compliance_apply(s, m))));
    }
}

TEST_CASE("incompatibility stress sigma_2") {
    for (double nu : nus) {
        IsotropicModuli m(1.0, nu);
        auto s2 = incompatibility_stress(m, R);
        // trace at r = e^{-1} vanishes
        auto V = std::get<Eigen::Matrix2d>(s2.eval_smooth(std::exp(-1.0), 0.7));
        CHECK(V.trace() == doctest::Approx(0.0).epsilon(1e-12));
        // Div sigma2 = 0
        CHECK(is_zero_field(div(s2)));
        // CurlCurl compliance(sigma2) = delta
        auto n = curl_curl(compliance_apply(s2, m));
        CHECK(n.smooth_empty());
        REQUIRE(!n.point_empty());
        CAPTURE(nu);
        CHECK(std::get<double>(n.point_part().at(MultiIndex(0, 0))) ==
              doctest::Approx(1.0).epsilon(1e-11));
    }
}

TEST_CASE("sigma_3 and sigma_4") {
    for (double nu : nus) {
        if (nu == 0.49) continue; // keep runtime small; accepted set covered below
        IsotropicModuli m(1.0, nu);
        auto s3 = dilatation_stress(m, R);
        auto s4 = dipole_body_force_stress(m, R);
        // identical restrictions
        auto diff = linear_combine({{1.0, s3.restricted()}, {-1.0, s4.restricted()}});
        CHECK(is_zero_field(diff));

        // sigma_3: equilibrated with B = 0, incompatibility N3
        PointSourceProblem p3;
        p3.moduli = m;
        p3.domain_radius = R;
        auto eq3 = check_equilibrium(s3, SingularField::vector(R));
        CHECK(eq3.verdict == Verdict::Satisfied);
        auto N3 = dilatation_source_N(m, R);
        auto inc3 = check_incompatibility(compliance_apply(s3, m), N3);
        CHECK(inc3.verdict == Verdict::Satisfied);

        // sigma_4: body force B4, zero incompatibility
        auto B4 = dipole_source_B(m, R);
        auto eq4 = check_equilibrium(s4, B4);
        CHECK(eq4.verdict == Verdict::Satisfied);
        auto inc4 = check_incompatibility(compliance_apply(s4, m),
                                          SingularField::scalar(R));
        CHECK(inc4.verdict == Verdict::Satisfied);

        // swapped sources must fail
        CHECK(check_incompatibility(compliance_apply(s4, m), N3).verdict ==
              Verdict::Violated);
        CHECK(check_equilibrium(s3, B4).verdict == Verdict::Violated);
    }
}

TEST_CASE("general point solution reproduces the basic cases") {
    IsotropicModuli m(1.0, 0.25);
    {
        PointSourceProblem p;
        p.moduli = m;
        p.domain_radius = R;
        p.body_force[MultiIndex(0, 0)] = Eigen::Vector2d(1.0, 0.0);
        auto s = general_point_solution(p);
        auto diff = linear_combine({{1.0, s}, {-1.0, kelvin_stress(m, R)}});
        CHECK(diff.empty());
    }
    {
        PointSourceProblem p;
        p.moduli = m;
        p.domain_radius = R;
        p.incompatibility[MultiIndex(0, 0)] = 1.0;
        auto s = general_point_solution(p);
        auto diff = linear_combine({{1.0, s}, {-1.0, incompatibility_stress(m, R)}});
        CHECK(diff.empty());
    }
    {
        // force dipole B = (e1 x e1) grad delta -> d1 sigma1
        PointSourceProblem p;
        p.moduli = m;
        p.domain_radius = R;
        p.body_force[MultiIndex(1, 0)] = Eigen::Vector2d(1.0, 0.0);
        auto s = general_point_solution(p);
        auto ref = partial_derivative(kelvin_stress(m, R), 1);
        CHECK(linear_combine({{1.0, s}, {-1.0, ref}}).empty());
        auto rep = verify_solution(s, p);
        CHECK(rep.ok());
    }
}

TEST_CASE("verify_solution catches tampering") {
    IsotropicModuli m(1.0, 0.25);
    PointSourceProblem p;
    p.moduli = m;
    p.domain_radius = R;
    p.body_force[MultiIndex(0, 0)] = Eigen::Vector2d(1.0, 0.0);
    auto s = kelvin_stress(m, R);
    CHECK(verify_solution(s, p).ok());
    auto bad = s;
    bad.add_point(MultiIndex(0, 0), Eigen::Matrix2d(Eigen::Matrix2d::Identity()));
    CHECK(!verify_solution(bad, p).ok());
    // zero problem, zero solution
    PointSourceProblem z;
    z.moduli = m;
    z.domain_radius = R;
    CHECK(verify_solution(SingularField::sym_tensor(R), z).ok());
}

TEST_CASE("general solution linearity and degree accounting") {
    IsotropicModuli m(1.0, 0.25);
    std::vector<PointSourceProblem> probs;
    // a few random-ish multipole problems with |alpha| <= 2
    auto mk = [&](std::map<MultiIndex, Eigen::Vector2d> bf,
                  std::map<MultiIndex, double> inc) {
        PointSourceProblem p;
        p.moduli = m;
        p.domain_radius = R;
        p.body_force = std::move(bf);
        p.incompatibility = std::move(inc);
        return p;
    };
    probs.push_back(mk({{MultiIndex(1, 1), {0.2, -0.7}}}, {}));
    probs.push_back(mk({}, {{MultiIndex(2, 0), 1.1}, {MultiIndex(0, 0), -0.5}}));
    probs.push_back(mk({{MultiIndex(0, 1), {0.0, 1.0}}}, {{MultiIndex(1, 0), 0.3}}));
    for (size_t i = 0; i < probs.size(); ++i) {
        CAPTURE(i);
        auto s = general_point_solution(probs[i]);
        auto rep = verify_solution(s, probs[i]);
        CHECK(rep.ok());
        // degree accounting: deg(d^a sigma1) <= -1 + |a|, deg(d^a sigma2) <= -2 + |a|
        double bound = -std::numeric_limits<double>::infinity();
        for (auto& [a, v] : probs[i].body_force) bound = std::max(bound, a.order() - 1.0);
        for (auto& [a, v] : probs[i].incompatibility) bound = std::max(bound, a.order() - 2.0);
        CHECK(s.degree_of_divergence() <= bound + 1e-9);
    }
    // linearity: solution of sum = sum of solutions
    auto pa = probs[0], pb = probs[1];
    PointSourceProblem psum = pa;
    for (auto& [a, v] : pb.body_force) psum.body_force[a] += v;
    for (auto& [a, v] : pb.incompatibility) psum.incompatibility[a] += v;
    auto ssum = general_point_solution(psum);
    auto sa = general_point_solution(pa);
    auto sb = general_point_solution(pb);
    CHECK(linear_combine({{1.0, ssum}, {-1.0, sa}, {-1.0, sb}}).empty());
}
