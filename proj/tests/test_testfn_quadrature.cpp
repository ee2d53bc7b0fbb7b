#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "df2d/calculus.hpp"
#include "df2d/quadrature.hpp"

using namespace df2d;

namespace {
constexpr double R = 1.0;

// Independent dense polar-grid reference integral of term * phi over the disk,
// used only in this test file (composite Simpson; no shared code with pair()).
double reference_integral(const SmoothTerm& t, const TestFunction& phi, double r_lo) {
    const int nr = 4000, nth = 512;
    double r_hi = phi.support_radius();
    double hr = (r_hi - r_lo) / nr;
    double total = 0.0;
    for (int i = 0; i <= nr; ++i) {
        double r = r_lo + i * hr;
        double wr = (i == 0 || i == nr) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        double ang = 0.0;
        for (int j = 0; j < nth; ++j) {
            double th = 2 * M_PI * j / nth;
            ang += t.eval(r, th) * phi({r * std::cos(th), r * std::sin(th)});
        }
        ang *= 2 * M_PI / nth;
        total += wr * ang * r;
    }
    return total * hr / 3.0;
}
} // namespace

TEST_CASE("w_alpha normalization") {
    for (int a1 = 0; a1 <= 3; ++a1)
        for (int a2 = 0; a2 + a1 <= 3; ++a2) {
            MultiIndex a(a1, a2);
            auto w = make_w_alpha(a, 0.5);
            for (int b1 = 0; b1 <= 3; ++b1)
                for (int b2 = 0; b1 + b2 <= 3; ++b2) {
                    MultiIndex b(b1, b2);
                    double expect = (a == b) ? parity_sign(a.order()) : 0.0;
                    CHECK(w.deriv_at_origin(b) == doctest::Approx(expect).epsilon(1e-14));
                }
        }
    auto w = make_w_alpha(MultiIndex(0, 0), 0.5);
    CHECK(w({0.1, 0.05}) == doctest::Approx(1.0)); // identically 1 near O
    auto g = w.gradient({0.1, 0.05});
    CHECK(g.norm() == doctest::Approx(0.0));
    auto w10 = make_w_alpha(MultiIndex(1, 0), 0.5);
    CHECK(w10({0.1, 0.0}) == doctest::Approx(-0.1));
}

TEST_CASE("cutoff profile smoothness and derivatives") {
    Cutoff c{1.0};
    CHECK(c.value(0.3) == doctest::Approx(1.0));
    CHECK(c.value(1.1) == doctest::Approx(0.0));
    // finite-difference check of d1 and d2 in the transition zone
    for (double r : {0.55, 0.7, 0.9}) {
        double h = 1e-6;
        double fd1 = (c.value(r + h) - c.value(r - h)) / (2 * h);
        double fd2 = (c.value(r + h) - 2 * c.value(r) + c.value(r - h)) / (h * h);
        CHECK(c.d1(r) == doctest::Approx(fd1).epsilon(1e-6));
        CHECK(c.d2(r) == doctest::Approx(fd2).epsilon(2e-4));
    }
}

TEST_CASE("rescale preserves the integral") {
    auto w = make_w_alpha(MultiIndex(0, 0), 0.5);
    SmoothTerm one(1.0, 0, 0, 0, Parity::Cos);
    double i1 = reference_integral(one, w, 0.0);
    double i2 = reference_integral(one, rescale_test(w, 0.5), 0.0);
    CHECK(i2 == doctest::Approx(i1).epsilon(1e-8));
    CHECK_THROWS_AS((void)rescale_test(w, 1.5), FieldError);
}

TEST_CASE("point-part pairing is exact") {
    auto D = SingularField::scalar(R);
    D.add_point(MultiIndex(0, 0), 1.0);
    auto w = make_w_alpha(MultiIndex(0, 0), 0.5);
    CHECK(std::get<double>(pair(D, w)) == doctest::Approx(1.0).epsilon(1e-14));

    auto G = SingularField::vector(R);
    G.add_point(MultiIndex(1, 0), Eigen::Vector2d(1.0, 0.0)); // e1 d1 delta
    auto w10 = make_w_alpha(MultiIndex(1, 0), 0.5);
    auto v = std::get<Eigen::Vector2d>(pair(G, w10));
    CHECK(v.x() == doctest::Approx(1.0).epsilon(1e-14)); // (-1)^1 * d1 w10(O) = 1
    CHECK(v.y() == doctest::Approx(0.0));
}

TEST_CASE("pair matches an independent dense 2D quadrature") {
    auto w = make_w_alpha(MultiIndex(0, 0), 0.5);
    // integrable: ln r
    {
        auto F = SingularField::scalar(R);
        F.add_scalar(1.0, 0, 1, 0, Parity::Cos);
        double ref = reference_integral(SmoothTerm(1.0, 0, 1, 0, Parity::Cos), w, 1e-8);
        CHECK(std::get<double>(pair(F, w)) == doctest::Approx(ref).epsilon(1e-7));
    }
    // cos th / r against w^(1,0): nonzero value
    {
        auto F = SingularField::scalar(R);
        F.add_scalar(1.0, -1, 0, 1, Parity::Cos);
        auto w10 = make_w_alpha(MultiIndex(1, 0), 0.5);
        double ref = reference_integral(SmoothTerm(1.0, -1, 0, 1, Parity::Cos), w10, 1e-8);
        CHECK(std::abs(ref) > 1e-3);
        CHECK(std::get<double>(pair(F, w10)) == doctest::Approx(ref).epsilon(1e-7));
    }
    // pv term cos th / r against w^(0,0): zero by parity
    {
        auto F = SingularField::scalar(R);
        F.add_scalar(1.0, -1, 0, 1, Parity::Cos);
        CHECK(std::get<double>(pair(F, w)) == doctest::Approx(0.0).epsilon(1e-10));
    }
}

TEST_CASE("oracle linearity to 1e-12") {
    auto A = SingularField::scalar(R);
    A.add_scalar(1.0, 0, 1, 0, Parity::Cos);
    auto B = SingularField::scalar(R);
    B.add_scalar(1.0, -1, 0, 1, Parity::Cos);
    B.add_point(MultiIndex(0, 0), 0.3);
    auto w = make_w_alpha(MultiIndex(0, 0), 0.5);
    double a = std::get<double>(pair(A, w));
    double b = std::get<double>(pair(B, w));
    auto C = linear_combine({{2.5, A}, {-1.25, B}});
    double c = std::get<double>(pair(C, w));
    CHECK(c == doctest::Approx(2.5 * a - 1.25 * b).epsilon(1e-12));
}

TEST_CASE("oracle equivalence: pair(dF, psi) = -pair(F, d psi)") {
    QuadratureSpec q;
    struct Case { int k, p, n; Parity par; };
    std::vector<Case> corpus = {
        {0, 1, 0, Parity::Cos},  // ln r
        {-1, 0, 1, Parity::Cos}, // cos/r
        {-1, 0, 1, Parity::Sin},
        {1, 0, 2, Parity::Cos},
        {-2, 0, 2, Parity::Cos}, // pv
        {-2, 0, 0, Parity::Cos}, // finite part
    };
    for (const auto& cs : corpus) {
        auto F = SingularField::scalar(R);
        F.add_scalar(1.0, cs.k, cs.p, cs.n, cs.par);
        for (int dir : {1, 2}) {
            auto D = partial_derivative(F, dir);
            for (auto alpha : {MultiIndex(0, 0), MultiIndex(1, 0), MultiIndex(0, 1),
                               MultiIndex(2, 0), MultiIndex(1, 1)}) {
                auto w = make_w_alpha(alpha, 0.5);
                double lhs = pair_channel(D, 0, as_scalar_test(w), q);
                MultiIndex g = dir == 1 ? MultiIndex(1, 0) : MultiIndex(0, 1);
                double rhs = -pair_channel(F, 0, derivative_test(w, g), q);
                CAPTURE(cs.k); CAPTURE(cs.n); CAPTURE(dir); CAPTURE(alpha.a1); CAPTURE(alpha.a2);
                double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
                CHECK(std::abs(lhs - rhs) <= 2e-6 * scale);
            }
        }
    }
}

TEST_CASE("empirical scaling degree matches analytic on the basis corpus") {
    std::vector<double> grid;
    for (int j = 2; j <= 13; ++j) grid.push_back(std::pow(2.0, -j));
    for (int k = -4; k <= 4; ++k)
        for (int n : {0, 1, 2}) {
            for (Parity par : {Parity::Cos, Parity::Sin}) {
                if (n == 0 && par == Parity::Sin) continue;
                auto F = SingularField::scalar(R);
                F.add_scalar(1.0, k, 0, n, par);
                auto est = estimate_scaling_degree(F, grid);
                REQUIRE(est.has_value());
                CAPTURE(k); CAPTURE(n);
                CHECK(std::abs(*est - (-k)) <= 0.1);
            }
        }
    // log-bearing sample
    {
        auto F = SingularField::scalar(R);
        F.add_scalar(1.0, -2, 1, 0, Parity::Cos);
        auto est = estimate_scaling_degree(F, grid);
        REQUIRE(est.has_value());
        CHECK(std::abs(*est - 2.0) <= 0.1);
    }
    // point parts |alpha| <= 3
    for (int a1 = 0; a1 <= 3; ++a1)
        for (int a2 = 0; a1 + a2 <= 3; ++a2) {
            auto F = SingularField::scalar(R);
            F.add_point(MultiIndex(a1, a2), 1.0);
            auto est = estimate_scaling_degree(F, grid);
            REQUIRE(est.has_value());
            CAPTURE(a1); CAPTURE(a2);
            CHECK(std::abs(*est - (a1 + a2 + 2)) <= 0.1);
        }
    CHECK(!estimate_scaling_degree(SingularField::scalar(R), grid).has_value());
}

TEST_CASE("cutoff series extension") {
    QuadratureSpec q;
    auto w = make_w_alpha(MultiIndex(0, 0), 0.5);
    // deg < 0 corpus: converges to the canonical pairing
    struct Case { int k, p, n; Parity par; };
    for (const auto& cs : std::vector<Case>{{0, 1, 0, Parity::Cos},
                                            {-1, 0, 1, Parity::Cos},
                                            {-1, 0, 0, Parity::Cos}}) {
        auto F = SingularField::scalar(R);
        F.add_scalar(1.0, cs.k, cs.p, cs.n, cs.par);
        auto seq = cutoff_series_extension(F.channel(0), as_scalar_test(w), R, 14, q);
        double limit = seq.back();
        double canonical = pair_channel(F, 0, as_scalar_test(w), q);
        CHECK(std::abs(limit - canonical) <= 1e-6 * (1 + std::abs(canonical)));
        // Cauchy: differences shrink
        double d_early = std::abs(seq[3] - seq[2]);
        double d_late = std::abs(seq[13] - seq[12]);
        CHECK(d_late < d_early + 1e-15);
    }
    // zero input -> all-zero sequence
    auto Z = SingularField::scalar(R);
    auto zs = cutoff_series_extension(Z.channel(0), as_scalar_test(w), R, 5, q);
    for (double v : zs) CHECK(v == 0.0);
}

TEST_CASE("pv ladder convergence agrees with the criterion (m <= 4, n <= 4)") {
    QuadratureSpec q;
    for (int m = 2; m <= 4; ++m)
        for (int n = 0; n <= 4; ++n) {
            SmoothTerm t(1.0, -m, 0, n, Parity::Cos);
            // probe with a test function whose Taylor data excites the mode
            MultiIndex probe(n, 0);
            auto w = make_w_alpha(probe, 0.5);
            auto scan = pv_ladder_scan(t, as_scalar_test(w), q);
            CAPTURE(m); CAPTURE(n);
            CHECK(scan.convergent == pv_extension_exists(t));
        }
}
