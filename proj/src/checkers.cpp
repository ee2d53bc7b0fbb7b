#include "df2d/checkers.hpp"

#include <cmath>
#include <sstream>

namespace df2d {

namespace {

// Magnitude of a field: max |coeff| over smooth terms and max value norm over
// point entries.
double field_magnitude(const SingularField& F) {
    double s = 0.0;
    for (int c = 0; c < F.channels(); ++c)
        for (const auto& t : F.channel(c)) s = std::max(s, std::abs(t.coeff));
    for (const auto& [a, v] : F.point_part()) s = std::max(s, value_norm(v));
    return s;
}

std::vector<MultiIndex> jets_up_to(int order) {
    std::vector<MultiIndex> v;
    for (int o = 0; o <= order; ++o)
        for (int a1 = 0; a1 <= o; ++a1) v.push_back(MultiIndex(a1, o - a1));
    return v;
}

int tensor_channel(int i, int j) { return i * 2 + j; }

} // namespace

std::string verdict_str(Verdict v) {
    switch (v) {
        case Verdict::Satisfied: return "satisfied";
        case Verdict::Violated: return "violated";
        default: return "insufficient-information";
    }
}

void CheckReport::add(const std::string& name, double residual, double tol) {
    Condition c;
    c.name = name;
    c.residual = residual;
    c.tolerance = tol;
    c.pass = std::abs(residual) <= tol;
    conditions.push_back(c);
    max_residual = std::max(max_residual, std::abs(residual));
}

void CheckReport::finalize(bool hypotheses_ok) {
    for (const auto& c : conditions)
        if (!c.pass) {
            verdict = Verdict::Violated;
            return;
        }
    verdict = hypotheses_ok ? Verdict::Satisfied : Verdict::InsufficientInformation;
}

std::string CheckReport::text() const {
    std::ostringstream os;
    os << "verdict: " << verdict_str(verdict) << "\n";
    for (const auto& c : conditions)
        os << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.name
           << "  residual=" << c.residual << "  tol=" << c.tolerance << "\n";
    for (const auto& s : degree_report) os << "  " << s << "\n";
    return os.str();
}

double oracle_tol(double scale) { return 1e-8 * (1.0 + std::abs(scale)); }

Eigen::Vector2d loop_integral_traction(const SingularField& sigma0, double eps) {
    if (sigma0.codomain() != Codomain::Tensor && sigma0.codomain() != Codomain::SymTensor)
        throw FieldError("loop_integral_traction: tensor field expected");
    Eigen::Vector2d out = Eigen::Vector2d::Zero();
    double le = std::log(eps);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            TrigPoly nj = TrigPoly::harmonic(1, j == 0 ? Parity::Cos : Parity::Sin);
            for (const auto& t : sigma0.channel(tensor_channel(i, j))) {
                double ang = (TrigPoly::harmonic(t.n, t.parity) * nj).integrate_period();
                if (ang == 0.0) continue;
                double lp = 1.0;
                for (int q = 0; q < t.p; ++q) lp *= le;
                out(i) += t.coeff * std::pow(eps, t.k + 1) * lp * ang;
            }
        }
    return out;
}

CheckReport check_equilibrium(const SingularField& sigma, const SingularField& B,
                              const QuadratureSpec& q) {
    if (sigma.codomain() != Codomain::Tensor && sigma.codomain() != Codomain::SymTensor)
        throw FieldError("check_equilibrium: tensor stress expected");
    if (B.codomain() != Codomain::Vector)
        throw FieldError("check_equilibrium: vector body force expected");
    CheckReport rep;
    double scale = field_magnitude(sigma) + field_magnitude(B);

    // symbolic: Div sigma + B = 0 in the algebra
    auto resid = linear_combine({{1.0, div(sigma)}, {1.0, B}});
    rep.add("symbolic Div(sigma) + B", field_magnitude(resid), 1e-10 * (1.0 + scale));

    // oracle pairings against w^a e_i for |a| <= deg(sigma) + 1
    double deg = sigma.degree_of_divergence();
    int amax = std::isfinite(deg) ? std::max(0, int(std::floor(deg)) + 1) : 0;
    double S = std::min(0.5, 0.5 * sigma.domain_radius());
    for (const auto& a : jets_up_to(amax)) {
        TestFunction w = make_w_alpha(a, S);
        for (int i = 0; i < 2; ++i) {
            double v = 0.0;
            // (Div sigma)(w e_i) = -<sigma_ij, d_j w>
            for (int j = 0; j < 2; ++j) {
                ScalarTest dj = derivative_test(w, j == 0 ? MultiIndex(1, 0)
                                                          : MultiIndex(0, 1));
                v -= pair_channel(sigma, tensor_channel(i, j), dj, q);
            }
            v += pair_channel(B, i, as_scalar_test(w), q);
            rep.add("oracle pairing w^" + a.str() + " e" + std::to_string(i + 1), v,
                    oracle_tol(scale));
        }
    }

    // degree inequality deg(B) <= deg(sigma) + 1
    double degB = B.degree_of_divergence();
    bool deg_ok = !std::isfinite(degB) || degB <= deg + 1.0 + 1e-9;
    rep.degree_report.push_back("deg(B) <= deg(sigma) + 1: " +
                                std::string(deg_ok ? "ok" : "FAIL"));
    if (!deg_ok) rep.add("degree inequality", 1.0, 0.0);

    rep.finalize(true);
    return rep;
}

CheckReport check_equilibrium_restricted(const SingularField& sigma0,
                                         const Eigen::Vector2d& b00,
                                         const QuadratureSpec& q) {
    (void)q;
    CheckReport rep;
    double scale = field_magnitude(sigma0) + b00.norm();

    // classical divergence away from O must vanish (smooth part only)
    auto d = div(sigma0.restricted());
    double smooth_resid = 0.0;
    for (int c = 0; c < d.channels(); ++c)
        for (const auto& t : d.channel(c)) smooth_resid = std::max(smooth_resid, std::abs(t.coeff));
    rep.add("div(sigma0) = 0 on the punctured disk", smooth_resid,
            1e-10 * (1.0 + scale));

    // loop traction = -b00, checked on two radii
    for (double eps : {sigma0.domain_radius() / 4.0, sigma0.domain_radius() / 8.0}) {
        Eigen::Vector2d l = loop_integral_traction(sigma0, eps) + b00;
        rep.add("loop traction + b00 at eps=" + std::to_string(eps), l.norm(),
                1e-10 * (1.0 + scale));
    }

    double deg = sigma0.degree_of_divergence();
    bool hyp = !std::isfinite(deg) || deg < 0.0;
    rep.degree_report.push_back(
        hyp ? "deg(sigma0) < 0: restricted conditions are conclusive"
            : "deg(sigma0) >= 0: restricted conditions do not pin the extension");
    rep.finalize(hyp);
    return rep;
}

CheckReport check_compatibility(const SingularField& E, const QuadratureSpec& q) {
    (void)q;
    if (E.codomain() != Codomain::SymTensor)
        throw FieldError("check_compatibility: symmetric strain expected");
    CheckReport rep;
    double scale = field_magnitude(E);
    auto N = curl_curl(E);
    rep.add("symbolic CurlCurl(E)", field_magnitude(N), 1e-10 * (1.0 + scale));
    rep.finalize(true);
    return rep;
}

CheckReport check_incompatibility(const SingularField& E, const SingularField& N,
                                  const QuadratureSpec& q) {
    (void)q;
    if (E.codomain() != Codomain::SymTensor)
        throw FieldError("check_incompatibility: symmetric strain expected");
    if (N.codomain() != Codomain::Scalar)
        throw FieldError("check_incompatibility: scalar incompatibility expected");
    CheckReport rep;
    double scale = field_magnitude(E) + field_magnitude(N);
    auto resid = linear_combine({{1.0, curl_curl(E)}, {-1.0, N}});
    rep.add("symbolic CurlCurl(E) - N", field_magnitude(resid), 1e-10 * (1.0 + scale));
    rep.finalize(true);
    return rep;
}

Eigen::Vector2d cesaro_integral(const SingularField& E0, const Eigen::Vector2d& x,
                                double eps) {
    if (E0.codomain() != Codomain::SymTensor)
        throw FieldError("cesaro_integral: symmetric strain expected");
    // rotation gradient c_j = d1 E_{j2} - d2 E_{j1} (classical, smooth part)
    auto c = curl(E0.restricted());
    int max_mode = 0;
    for (int ch = 0; ch < 4; ++ch)
        for (const auto& t : E0.channel(ch)) max_mode = std::max(max_mode, t.n);
    for (int ch = 0; ch < 2; ++ch)
        for (const auto& t : c.channel(ch)) max_mode = std::max(max_mode, t.n);
    int nodes = 2 * (max_mode + 2) + 32;
    Eigen::Vector2d out = Eigen::Vector2d::Zero();
    for (int m = 0; m < nodes; ++m) {
        double th = 2.0 * M_PI * m / nodes;
        Eigen::Vector2d y(eps * std::cos(th), eps * std::sin(th));
        Eigen::Vector2d t(-std::sin(th), std::cos(th));
        Eigen::Matrix2d Ev = std::get<Eigen::Matrix2d>(E0.eval_smooth(eps, th));
        Eigen::Vector2d cv = std::get<Eigen::Vector2d>(c.eval_smooth(eps, th));
        Eigen::Vector2d d = y - x;
        Eigen::Vector2d Rv(d.y(), -d.x());
        out += (Ev * t + Rv * cv.dot(t)) * (eps * 2.0 * M_PI / nodes);
    }
    return out;
}

DefectCharges identify_point_defect(const SingularField& E0) {
    DefectCharges ch;
    double eps = E0.domain_radius() / 4.0;
    ch.burgers = cesaro_integral(E0, Eigen::Vector2d::Zero(), eps);
    // disclination: circulation of the rotation gradient
    auto c = curl(E0.restricted());
    int max_mode = 2;
    for (int k = 0; k < 2; ++k)
        for (const auto& t : c.channel(k)) max_mode = std::max(max_mode, t.n);
    int nodes = 2 * max_mode + 32;
    double gamma = 0.0;
    for (int m = 0; m < nodes; ++m) {
        double th = 2.0 * M_PI * m / nodes;
        Eigen::Vector2d t(-std::sin(th), std::cos(th));
        Eigen::Vector2d cv = std::get<Eigen::Vector2d>(c.eval_smooth(eps, th));
        gamma += cv.dot(t) * eps * 2.0 * M_PI / nodes;
    }
    ch.disclination = gamma;
    double deg = E0.degree_of_divergence();
    ch.higher_unresolvable = std::isfinite(deg) && deg >= 0.0;
    return ch;
}

SingularField point_antiderivative_div(const SingularField& E_point) {
    if (E_point.codomain() != Codomain::Scalar)
        throw FieldError("point_antiderivative_div: scalar field expected");
    if (!E_point.smooth_empty())
        throw FieldError("point_antiderivative_div: smooth part must be empty");
    SingularField F = SingularField::vector(E_point.domain_radius());
    for (const auto& [a, v] : E_point.point_part()) {
        double c = std::get<double>(v);
        if (a.order() == 0)
            throw FieldError("point_antiderivative_div: order-0 entry has no antiderivative");
        if (a.a1 >= 1)
            F.add_point(MultiIndex(a.a1 - 1, a.a2), Eigen::Vector2d(c, 0.0));
        else
            F.add_point(MultiIndex(a.a1, a.a2 - 1), Eigen::Vector2d(0.0, c));
    }
    F.normalize();
    return F;
}

SingularField point_antiderivative_curl(const SingularField& E_point) {
    if (E_point.codomain() != Codomain::Scalar)
        throw FieldError("point_antiderivative_curl: scalar field expected");
    if (!E_point.smooth_empty())
        throw FieldError("point_antiderivative_curl: smooth part must be empty");
    SingularField F = SingularField::vector(E_point.domain_radius());
    for (const auto& [a, v] : E_point.point_part()) {
        double c = std::get<double>(v);
        if (a.order() == 0)
            throw FieldError("point_antiderivative_curl: order-0 entry has no antiderivative");
        // curl F = d1 F2 - d2 F1
        if (a.a1 >= 1)
            F.add_point(MultiIndex(a.a1 - 1, a.a2), Eigen::Vector2d(0.0, c));
        else
            F.add_point(MultiIndex(a.a1, a.a2 - 1), Eigen::Vector2d(-c, 0.0));
    }
    F.normalize();
    return F;
}

SingularField point_antiderivative_curlcurl(const SingularField& N_point) {
    if (N_point.codomain() != Codomain::Scalar)
        throw FieldError("point_antiderivative_curlcurl: scalar field expected");
    if (!N_point.smooth_empty())
        throw FieldError("point_antiderivative_curlcurl: smooth part must be empty");
    SingularField F = SingularField::sym_tensor(N_point.domain_radius());
    for (const auto& [a, v] : N_point.point_part()) {
        double c = std::get<double>(v);
        if (a.order() < 2)
            throw FieldError(
                "point_antiderivative_curlcurl: entries below order 2 have no antiderivative");
        Eigen::Matrix2d M = Eigen::Matrix2d::Zero();
        // CurlCurl F = d11 F22 + d22 F11 - d12 (F12 + F21)
        if (a.a1 >= 2) {
            M(1, 1) = c;
            F.add_point(MultiIndex(a.a1 - 2, a.a2), Value(M));
        } else if (a.a2 >= 2) {
            M(0, 0) = c;
            F.add_point(MultiIndex(a.a1, a.a2 - 2), Value(M));
        } else {
            M(0, 1) = M(1, 0) = -0.5 * c;
            F.add_point(MultiIndex(a.a1 - 1, a.a2 - 1), Value(M));
        }
    }
    F.normalize();
    return F;
}

SingularField incompatibility_from_sources(const SingularField& A,
                                           const SingularField& Theta,
                                           const SingularField& vartheta) {
    if (A.codomain() != Codomain::Vector)
        throw FieldError("incompatibility_from_sources: vector dislocation density expected");
    if (Theta.codomain() != Codomain::Scalar || vartheta.codomain() != Codomain::Scalar)
        throw FieldError("incompatibility_from_sources: scalar sources expected");
    std::vector<std::pair<double, SingularField>> parts;
    parts.push_back({1.0, curl(A)});
    parts.push_back({1.0, Theta});
    parts.push_back({1.0, laplacian(vartheta)});
    return linear_combine(parts);
}

} // namespace df2d
