#include "df2d/defect_force.hpp"

#include <cmath>
#include <tuple>

namespace df2d {

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

double mi_binom(const MultiIndex& a, const MultiIndex& b) {
    return binom(a.a1, b.a1) * binom(a.a2, b.a2);
}

bool mi_leq(const MultiIndex& b, const MultiIndex& a) {
    return b.a1 <= a.a1 && b.a2 <= a.a2;
}

std::vector<MultiIndex> sub_indices(const MultiIndex& a) {
    std::vector<MultiIndex> v;
    for (int b1 = 0; b1 <= a.a1; ++b1)
        for (int b2 = 0; b2 <= a.a2; ++b2) v.push_back(MultiIndex(b1, b2));
    return v;
}

// Polynomial scalar: map MultiIndex -> coefficient.
using Poly = std::map<MultiIndex, double>;

double poly_deriv_at_origin(const Poly& P, const MultiIndex& b) {
    auto it = P.find(b);
    return it == P.end() ? 0.0 : it->second * mi_factorial(b);
}

// Multiply a scalar channel (term list) by a polynomial, folding x^gamma into
// r^{|gamma|} harmonics; append to an output channel of `out`.
void poly_times_terms(const Poly& P, const std::vector<SmoothTerm>& terms, int out_ch,
                      SingularField& out) {
    for (const auto& [gam, c] : P) {
        if (c == 0.0) continue;
        TrigPoly mono = TrigPoly::monomial(gam.a1, gam.a2);
        for (const auto& t : terms) {
            TrigPoly prod = mono * TrigPoly::harmonic(t.n, t.parity, 1.0);
            for (const auto& [key, gc] : prod.coeffs())
                if (gc != 0.0)
                    out.add_term(out_ch, SmoothTerm(c * t.coeff * gc,
                                                    t.k + gam.order(), t.p,
                                                    key.first, key.second));
        }
    }
}

// Leibniz expansion of P(x) d^alpha delta into delta multipoles; accumulates
// coefficient-weighted entries into `acc` (per target multi-index).
void poly_times_point(const Poly& P, const MultiIndex& alpha, double coeff,
                      std::map<MultiIndex, double>& acc) {
    if (coeff == 0.0) return;
    for (const auto& beta : sub_indices(alpha)) {
        double dP = poly_deriv_at_origin(P, beta);
        if (dP == 0.0) continue;
        double w = parity_sign(beta.order()) * mi_binom(alpha, beta) * dP * coeff;
        acc[MultiIndex(alpha.a1 - beta.a1, alpha.a2 - beta.a2)] += w;
    }
}

Poly poly_scale(const Poly& P, double s) {
    Poly out;
    for (const auto& [a, c] : P)
        if (c * s != 0.0) out[a] = c * s;
    return out;
}

Poly poly_add(const Poly& A, const Poly& B) {
    Poly out = A;
    for (const auto& [a, c] : B) out[a] += c;
    return out;
}

} // namespace

PolyStress PolyStress::uniform(const Eigen::Matrix2d& s0) {
    PolyStress s;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (s0(i, j) != 0.0) s.comp[i][j][MultiIndex(0, 0)] = s0(i, j);
    return s;
}

void PolyStress::set(int i, int j, const MultiIndex& a, double c) {
    comp[i][j][a] = c;
    comp[j][i][a] = c;
}

Eigen::Matrix2d PolyStress::eval(const Eigen::Vector2d& x) const {
    Eigen::Matrix2d M = Eigen::Matrix2d::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (const auto& [a, c] : comp[i][j])
                M(i, j) += c * std::pow(x(0), a.a1) * std::pow(x(1), a.a2);
    return M;
}

Eigen::Matrix2d PolyStress::deriv_at_origin(const MultiIndex& a) const {
    Eigen::Matrix2d M = Eigen::Matrix2d::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) M(i, j) = poly_deriv_at_origin(comp[i][j], a);
    return M;
}

int PolyStress::degree() const {
    int d = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (const auto& [a, c] : comp[i][j])
                if (c != 0.0) d = std::max(d, a.order());
    return d;
}

Distortion::Distortion(SingularField E, SingularField a)
    : strain(std::move(E)), skew_scalar(std::move(a)) {
    if (strain.codomain() != Codomain::SymTensor)
        throw FieldError("Distortion: strain must be a symmetric tensor field");
    if (skew_scalar.codomain() != Codomain::Scalar)
        throw FieldError("Distortion: skew part must be a scalar field");
}

SingularField Distortion::as_tensor() const {
    SingularField out = SingularField::tensor(strain.domain_radius());
    out.set_fp_rho(strain.fp_rho());
    for (int c = 0; c < 4; ++c)
        for (const auto& t : strain.channel(c)) out.add_term(c, t);
    for (const auto& [a, v] : strain.point_part())
        out.add_point(a, std::get<Eigen::Matrix2d>(v));
    // + a (e1 x e2 - e2 x e1)
    for (const auto& t : skew_scalar.channel(0)) {
        out.add_term(1, t);
        SmoothTerm s = t;
        s.coeff = -s.coeff;
        out.add_term(2, s);
    }
    for (const auto& [a, v] : skew_scalar.point_part()) {
        double c = std::get<double>(v);
        Eigen::Matrix2d W;
        W << 0.0, c, -c, 0.0;
        out.add_point(a, Eigen::Matrix2d(W));
    }
    out.normalize();
    return out;
}

Eigen::Vector2d GeneralizedForce::order0() const {
    auto it = entries.find(MultiIndex(0, 0));
    return it == entries.end() ? Eigen::Vector2d::Zero().eval() : it->second;
}

int GeneralizedForce::order() const {
    int o = 0;
    for (const auto& [a, v] : entries) o = std::max(o, a.order());
    return o;
}

Eigen::Vector2d e3_cross(const Eigen::Vector2d& v) { return {v.y(), -v.x()}; }
Eigen::Vector2d cross_e3(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }

GeneralizedForce generalized_force(const SingularField& A, const PolyStress& sigma2) {
    if (A.codomain() != Codomain::Vector)
        throw FieldError("generalized_force: vector dislocation density expected");
    if (!A.smooth_empty())
        throw FieldError("generalized_force: density must be point-supported");
    GeneralizedForce F;
    std::map<MultiIndex, Eigen::Vector2d> sA; // entries of sigma2 A
    for (const auto& [alpha, v] : A.point_part()) {
        Eigen::Vector2d a = std::get<Eigen::Vector2d>(v);
        for (const auto& beta : sub_indices(alpha)) {
            Eigen::Matrix2d Mb = sigma2.deriv_at_origin(beta);
            Eigen::Vector2d contrib =
                parity_sign(beta.order()) * mi_binom(alpha, beta) * (Mb * a);
            if (contrib.norm() == 0.0) continue;
            MultiIndex tgt(alpha.a1 - beta.a1, alpha.a2 - beta.a2);
            auto it = sA.find(tgt);
            if (it == sA.end())
                sA[tgt] = contrib;
            else
                it->second += contrib;
        }
    }
    for (const auto& [a, v] : sA)
        if (v.norm() > 0.0) F.entries[a] = e3_cross(v);
    return F;
}

Eigen::Vector2d peach_koehler(const Eigen::Vector2d& b, const Eigen::Matrix2d& sigma0) {
    return e3_cross(sigma0 * b);
}

DipoleForceCouple dipole_force_couple(const Eigen::Vector2d& b, const Eigen::Vector2d& v,
                                      const PolyStress& sigma2) {
    DipoleForceCouple out;
    Eigen::Matrix2d d1 = sigma2.deriv_at_origin(MultiIndex(1, 0));
    Eigen::Matrix2d d2 = sigma2.deriv_at_origin(MultiIndex(0, 1));
    Eigen::Matrix2d vgrad = v.x() * d1 + v.y() * d2;
    out.force = -e3_cross(vgrad * b);
    Eigen::Vector2d pk0 = e3_cross(sigma2.deriv_at_origin(MultiIndex(0, 0)) * b);
    out.couple[MultiIndex(1, 0)] = v.x() * pk0;
    out.couple[MultiIndex(0, 1)] = v.y() * pk0;
    return out;
}

Eigen::Vector2d dipole_pair_force(const Eigen::Vector2d& b, const Eigen::Vector2d& v,
                                  double h, const PolyStress& sigma2) {
    if (h <= 0.0) throw FieldError("dipole_pair_force: separation must be positive");
    Eigen::Matrix2d ds = sigma2.eval(h * v) - sigma2.eval(Eigen::Vector2d::Zero());
    return -e3_cross(ds * b) / h;
}

Eigen::Vector2d dilation_force(double a, const PolyStress& sigma2) {
    // (a/2) grad tr(sigma2) at O
    Poly tr = poly_add(sigma2.comp[0][0], sigma2.comp[1][1]);
    Eigen::Vector2d g(poly_deriv_at_origin(tr, MultiIndex(1, 0)),
                      poly_deriv_at_origin(tr, MultiIndex(0, 1)));
    return 0.5 * a * g;
}

SingularField dilation_density(double a, double domain_radius) {
    auto A = SingularField::vector(domain_radius);
    A.add_point(MultiIndex(0, 1), Eigen::Vector2d(0.5 * a, 0.0));
    A.add_point(MultiIndex(1, 0), Eigen::Vector2d(0.0, -0.5 * a));
    A.normalize();
    return A;
}

SingularField interaction_eshelby(const Distortion& beta1, const SingularField& sigma1,
                                  const PolyStress& sigma2, const IsotropicModuli& m) {
    if (sigma1.codomain() != Codomain::Tensor && sigma1.codomain() != Codomain::SymTensor)
        throw FieldError("interaction_eshelby: tensor stress expected");
    double R = sigma1.domain_radius();
    SingularField J = SingularField::tensor(R);
    J.set_fp_rho(sigma1.fp_rho());

    // E2 = compliance(sigma2), polynomial entries
    double ca = (1.0 + m.poisson) / m.youngs;
    double cb = -m.poisson * (1.0 + m.poisson) / m.youngs;
    Poly tr2 = poly_add(sigma2.comp[0][0], sigma2.comp[1][1]);
    std::array<std::array<Poly, 2>, 2> E2;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            E2[i][j] = poly_scale(sigma2.comp[i][j], ca);
            if (i == j) E2[i][j] = poly_add(E2[i][j], poly_scale(tr2, cb));
        }

    SingularField b1 = beta1.as_tensor();

    std::map<MultiIndex, Eigen::Matrix2d> point_acc;
    auto acc_point = [&](const Poly& P, const MultiIndex& alpha, double coeff, int i,
                         int j, double sign) {
        std::map<MultiIndex, double> acc;
        poly_times_point(P, alpha, coeff * sign, acc);
        for (const auto& [tgt, w] : acc) {
            auto it = point_acc.find(tgt);
            if (it == point_acc.end()) it = point_acc.emplace(tgt, Eigen::Matrix2d::Zero()).first;
            it->second(i, j) += w;
        }
    };

    // <sigma1, E2> I on the diagonal
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            int ch = k * 2 + l;
            for (int d = 0; d < 2; ++d)
                poly_times_terms(E2[k][l], sigma1.channel(ch), d * 2 + d, J);
            for (const auto& [alpha, v] : sigma1.point_part()) {
                double c = value_component(v, ch);
                for (int d = 0; d < 2; ++d) acc_point(E2[k][l], alpha, c, d, d, 1.0);
            }
        }
    // beta2 = E2 + W2: the external rotation omega follows from the strain via
    // d1 omega = d1 E12 - d2 E11, d2 omega = d1 E22 - d2 E12 (omega(0) = 0)
    auto pderiv = [](const Poly& P, int dir) {
        Poly out;
        for (const auto& [a, c] : P) {
            int e = dir == 0 ? a.a1 : a.a2;
            if (e == 0) continue;
            MultiIndex b = dir == 0 ? MultiIndex(a.a1 - 1, a.a2) : MultiIndex(a.a1, a.a2 - 1);
            out[b] += c * e;
        }
        return out;
    };
    Poly gx = poly_add(pderiv(E2[0][1], 0), poly_scale(pderiv(E2[0][0], 1), -1.0));
    Poly gy = poly_add(pderiv(E2[1][1], 0), poly_scale(pderiv(E2[0][1], 1), -1.0));
    Poly omega;
    for (const auto& [a, c] : gx) omega[MultiIndex(a.a1 + 1, a.a2)] += c / (a.a1 + 1);
    for (const auto& [a, c] : gy)
        if (a.a1 == 0) omega[MultiIndex(0, a.a2 + 1)] += c / (a.a2 + 1);
    std::array<std::array<Poly, 2>, 2> B2 = E2;
    B2[0][1] = poly_add(B2[0][1], poly_scale(omega, -1.0)); // W12 = -omega
    B2[1][0] = poly_add(B2[1][0], omega);                   // W21 = +omega
    // - beta2^T sigma1
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                int ch = k * 2 + j;
                poly_times_terms(poly_scale(B2[k][i], -1.0), sigma1.channel(ch),
                                 i * 2 + j, J);
                for (const auto& [alpha, v] : sigma1.point_part())
                    acc_point(B2[k][i], alpha, value_component(v, ch), i, j, -1.0);
            }
    // - beta1^T sigma2
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                int ch = k * 2 + i;
                poly_times_terms(poly_scale(sigma2.comp[k][j], -1.0), b1.channel(ch),
                                 i * 2 + j, J);
                for (const auto& [alpha, v] : b1.point_part())
                    acc_point(sigma2.comp[k][j], alpha, value_component(v, ch), i, j,
                              -1.0);
            }

    for (const auto& [a, M] : point_acc)
        if (M.norm() > 0.0) J.add_point(a, M);
    J.normalize();
    return J;
}

Eigen::Vector2d force_loop_oracle(const SingularField& J, const QuadratureSpec& q) {
    (void)q;
    if (J.codomain() != Codomain::Tensor && J.codomain() != Codomain::SymTensor)
        throw FieldError("force_loop_oracle: tensor field expected");
    // The loop integral of the smooth part is a closed form in eps:
    //   F_i(eps) = sum_terms coeff * eps^{k+1} ln^p(eps) * I(g * n_j).
    // The eps -> 0 limit exists iff every net coefficient with k+1 < 0, or with
    // k+1 = 0 and p > 0, vanishes.
    Eigen::Vector2d F = Eigen::Vector2d::Zero();
    std::map<std::tuple<int, int, int>, double> divergent; // (i, k+1, p) -> net coeff
    double scale = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            TrigPoly nj = TrigPoly::harmonic(1, j == 0 ? Parity::Cos : Parity::Sin);
            for (const auto& t : J.channel(i * 2 + j)) {
                double ang = (TrigPoly::harmonic(t.n, t.parity) * nj).integrate_period();
                scale = std::max(scale, std::abs(t.coeff));
                if (ang == 0.0) continue;
                double c = t.coeff * ang;
                if (t.k + 1 < 0 || (t.k + 1 == 0 && t.p > 0))
                    divergent[{i, t.k + 1, t.p}] += c;
                else if (t.k + 1 == 0 && t.p == 0)
                    F(i) += c;
            }
        }
    for (const auto& [key, c] : divergent)
        if (std::abs(c) > 1e-9 * (1.0 + scale))
            throw FieldError("force_loop_oracle: loop integral diverges like eps^" +
                             std::to_string(std::get<1>(key)) + " ln^" +
                             std::to_string(std::get<2>(key)));
    return F;
}

Distortion defect_distortion(const SingularField& sigma, const IsotropicModuli& m) {
    SingularField E = compliance_apply(sigma, m);
    SingularField c = curl(E.restricted()).restricted();
    SingularField minus_c = linear_combine({{-1.0, c}});
    SingularField a = antigradient(minus_c);
    return Distortion(E, a);
}

} // namespace df2d
