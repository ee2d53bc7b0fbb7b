#include "df2d/calculus.hpp"

#include <cmath>
#include <set>
#include <tuple>

namespace df2d {

namespace {

// TrigPoly of one term's angular factor.
TrigPoly ang_of(const SmoothTerm& t) {
    return TrigPoly::harmonic(t.n, t.parity, 1.0);
}

// cos(theta), sin(theta)
TrigPoly unit(int i) {
    return TrigPoly::harmonic(1, i == 1 ? Parity::Cos : Parity::Sin);
}

// x-hat^gamma = cos^g1 sin^g2
TrigPoly xhat_pow(const MultiIndex& g) { return TrigPoly::monomial(g.a1, g.a2); }

double ang_int(const TrigPoly& t) { return t.integrate_period(); }

// Classical term-wise derivative of one term in direction i, as a term list
// (not yet merged):
//   d_i [ c r^k ln^p g ] =
//     c r^{k-1} [ (k ln^p + p ln^{p-1}) tau_i g + ln^p sig_i g' ]
// with tau_1 = cos, sig_1 = -sin; tau_2 = sin, sig_2 = cos.
void classical_derivative_terms(const SmoothTerm& t, int i, std::vector<SmoothTerm>& out) {
    TrigPoly g = ang_of(t);
    TrigPoly tau = unit(i == 1 ? 1 : 2);
    TrigPoly sig = (i == 1) ? unit(2) * -1.0 : unit(1);
    auto push = [&](double c, int p, const TrigPoly& trig) {
        if (c == 0.0) return;
        for (const auto& [key, gc] : trig.coeffs())
            if (gc != 0.0) out.push_back(SmoothTerm(c * gc, t.k - 1, p, key.first, key.second));
    };
    push(t.coeff * t.k, t.p, g * tau);
    if (t.p > 0) push(t.coeff * t.p, t.p - 1, g * tau);
    push(t.coeff, t.p, g.dtheta() * sig);
}

// Expansion bookkeeping: per jet gamma, coefficients on eps^s (ln eps)^q plus
// an eps-independent accumulator.
struct EpsExpansion {
    std::map<std::pair<int, int>, double> eps; // (s, q) -> coeff, s <= 0 entries kept
    double constant = 0.0;
    double scale = 0.0; // magnitude bookkeeping for the cancellation check

    void add_eps(int s, int q, double c) {
        if (c == 0.0) return;
        scale = std::max(scale, std::abs(c));
        if (s > 0) return; // vanishes in the limit
        if (s == 0 && q == 0) {
            constant += c;
            return;
        }
        eps[{s, q}] += c;
    }
    void add_const(double c) {
        scale = std::max(scale, std::abs(c));
        constant += c;
    }
};

// Radial moment int_eps^rho r^a (ln r)^p dr, split into the eps-independent
// part (added via add_const) and eps-dependent entries, all times "weight".
void add_radial_moment(EpsExpansion& e, int a, int p, double rho, double weight) {
    if (weight == 0.0) return;
    if (a == -1) {
        double lr = std::log(rho);
        double v = 1.0;
        for (int i = 0; i <= p; ++i) v *= lr;
        e.add_const(weight * v / (p + 1));
        e.add_eps(0, p + 1, -weight / (p + 1));
        return;
    }
    // antiderivative F(r) = r^{a+1} sum_j (-1)^j p! / ((p-j)! (a+1)^{j+1}) ln^{p-j} r
    double lr = std::log(rho);
    for (int j = 0; j <= p; ++j) {
        double cj = (j % 2 == 0 ? 1.0 : -1.0) * factorial(p) /
                    (factorial(p - j) * std::pow(double(a + 1), j + 1));
        double lp = 1.0;
        for (int i = 0; i < p - j; ++i) lp *= lr;
        e.add_const(weight * std::pow(rho, a + 1) * cj * lp);
        e.add_eps(a + 1, p - j, -weight * cj);
    }
}

std::vector<MultiIndex> jets_up_to(int order) {
    std::vector<MultiIndex> v;
    for (int o = 0; o <= order; ++o)
        for (int a1 = 0; a1 <= o; ++a1) v.push_back(MultiIndex(a1, o - a1));
    return v;
}

} // namespace

ChannelDerivative derive_channel(const std::vector<SmoothTerm>& terms, int i, double rho) {
    if (i != 1 && i != 2) throw FieldError("derive_channel: direction must be 1 or 2");
    ChannelDerivative out;
    if (terms.empty()) return out;

    // 1) classical derivative, merged
    std::vector<SmoothTerm> raw;
    for (const auto& t : terms) classical_derivative_terms(t, i, raw);
    {
        std::map<std::tuple<int, int, int, Parity>, double> merged;
        double sc = 0.0;
        for (const auto& t : raw) {
            merged[{t.k, t.p, t.n, t.parity}] += t.coeff;
            sc = std::max(sc, std::abs(t.coeff));
        }
        for (const auto& [key, c] : merged)
            if (std::abs(c) > 1e-14 * sc)
                out.terms.push_back(SmoothTerm(c, std::get<0>(key), std::get<1>(key),
                                               std::get<2>(key), std::get<3>(key)));
    }

    // jet order bound
    int max_jet = 0;
    for (const auto& t : terms) max_jet = std::max(max_jet, -t.k - 1);
    if (max_jet == 0 && [&] {
            for (const auto& t : terms)
                if (t.k <= -1) return false;
            return true;
        }())
        return out; // all terms have k >= 0: no corrections possible

    std::map<MultiIndex, EpsExpansion> expn;
    for (const auto& g : jets_up_to(max_jet)) expn[g]; // ensure slots

    for (const auto& t : terms) {
        TrigPoly g = ang_of(t);
        TrigPoly tau = unit(i);
        // Source 1: boundary term of integration by parts,
        //   sum_gamma d^g phi(0)/g! * c * eps^{k+1+|g|} (ln eps)^p * I(g tau xhat^g)
        for (const auto& gam : jets_up_to(-t.k - 1)) {
            double I = ang_int(g * tau * xhat_pow(gam));
            if (I == 0.0) continue;
            expn[gam].add_eps(t.k + 1 + gam.order(), t.p,
                              t.coeff * I / mi_factorial(gam));
        }
        // Source 2: finite-part counterterms of the original term, acting on
        // d^{beta+e_i} phi
        bool fp = t.k <= -2 && !pv_extension_exists(t);
        if (fp) {
            int d0 = -t.k - 2;
            for (const auto& beta : jets_up_to(d0)) {
                double S = ang_int(g * xhat_pow(beta));
                if (S == 0.0) continue;
                MultiIndex gam = beta.plus(i);
                add_radial_moment(expn[gam], t.k + beta.order() + 1, t.p, rho,
                                  t.coeff * S / mi_factorial(beta));
            }
        }
    }

    // Source 3: finite-part counterterms of the (merged) derivative terms
    for (const auto& t : out.terms) {
        if (!(t.k <= -2 && !pv_extension_exists(t))) continue;
        TrigPoly g = ang_of(t);
        int d0 = -t.k - 2;
        for (const auto& gam : jets_up_to(d0)) {
            double S = ang_int(g * xhat_pow(gam));
            if (S == 0.0) continue;
            add_radial_moment(expn[gam], t.k + gam.order() + 1, t.p, rho,
                              t.coeff * S / mi_factorial(gam));
        }
    }

    // Collect: divergent entries must cancel; the constant parts are the
    // correction coefficients.
    for (auto& [gam, e] : expn) {
        for (const auto& [sq, c] : e.eps) {
            if (std::abs(c) > 1e-9 * (1.0 + e.scale))
                throw FieldError("distributional derivative not representable: "
                                 "divergent eps^" + std::to_string(sq.first) + " ln^" +
                                 std::to_string(sq.second) + " residue " +
                                 std::to_string(c) + " at jet " + gam.str());
        }
        double A = e.constant;
        if (std::abs(A) > 1e-12 * (1.0 + e.scale))
            out.corrections[gam] = parity_sign(gam.order()) * A;
    }
    return out;
}

SingularField partial_derivative(const SingularField& F, int i) {
    SingularField out(F.codomain(), F.domain_radius());
    out.set_fp_rho(F.fp_rho());
    for (int c = 0; c < F.channels(); ++c) {
        auto d = derive_channel(F.channel(c), i, F.fp_rho());
        for (const auto& t : d.terms) out.add_term(c, t);
        for (const auto& [gam, coeff] : d.corrections) {
            Value v = zero_value(F.codomain());
            if (F.codomain() == Codomain::Scalar)
                v = coeff;
            else if (F.codomain() == Codomain::Vector) {
                Eigen::Vector2d u = Eigen::Vector2d::Zero();
                u(c) = coeff;
                v = u;
            } else {
                Eigen::Matrix2d M = Eigen::Matrix2d::Zero();
                M(c / 2, c % 2) = coeff;
                v = M;
            }
            out.add_point(gam, v);
        }
    }
    // derivative of the point part shifts the multi-index
    for (const auto& [a, v] : F.point_part()) out.add_point(a.plus(i), v);
    out.normalize();
    return out;
}

namespace {
SingularField combine_channels(Codomain out_cod, const SingularField& src,
                               const std::vector<std::vector<std::pair<double, std::pair<int, int>>>>& plan) {
    // plan[out_channel] = list of (weight, (src_channel, direction))
    SingularField out(out_cod, src.domain_radius());
    out.set_fp_rho(src.fp_rho());
    std::vector<SingularField> d = {partial_derivative(src, 1), partial_derivative(src, 2)};
    for (size_t oc = 0; oc < plan.size(); ++oc) {
        for (const auto& [w, key] : plan[oc]) {
            const auto& df = d[key.second - 1];
            for (const auto& t : df.channel(key.first)) {
                SmoothTerm s = t;
                s.coeff *= w;
                out.add_term(int(oc), s);
            }
            for (const auto& [a, v] : df.point_part()) {
                double comp = value_component(v, key.first);
                if (comp == 0.0) continue;
                Value nv = zero_value(out_cod);
                if (out_cod == Codomain::Scalar)
                    nv = w * comp;
                else if (out_cod == Codomain::Vector) {
                    Eigen::Vector2d u = Eigen::Vector2d::Zero();
                    u(oc) = w * comp;
                    nv = u;
                } else {
                    Eigen::Matrix2d M = Eigen::Matrix2d::Zero();
                    M(oc / 2, oc % 2) = w * comp;
                    nv = M;
                }
                out.add_point(a, nv);
            }
        }
    }
    out.normalize();
    return out;
}
} // namespace

SingularField grad(const SingularField& f) {
    if (f.codomain() != Codomain::Scalar) throw FieldError("grad: scalar field expected");
    return combine_channels(Codomain::Vector, f,
                            {{{1.0, {0, 1}}}, {{1.0, {0, 2}}}});
}

SingularField div(const SingularField& F) {
    if (F.codomain() == Codomain::Vector)
        return combine_channels(Codomain::Scalar, F, {{{1.0, {0, 1}}, {1.0, {1, 2}}}});
    if (F.codomain() == Codomain::Tensor || F.codomain() == Codomain::SymTensor)
        return combine_channels(Codomain::Vector, F,
                                {{{1.0, {0, 1}}, {1.0, {1, 2}}},
                                 {{1.0, {2, 1}}, {1.0, {3, 2}}}});
    throw FieldError("div: vector or tensor field expected");
}

SingularField curl(const SingularField& F) {
    if (F.codomain() == Codomain::Vector)
        return combine_channels(Codomain::Scalar, F, {{{1.0, {1, 1}}, {-1.0, {0, 2}}}});
    if (F.codomain() == Codomain::Tensor || F.codomain() == Codomain::SymTensor)
        return combine_channels(Codomain::Vector, F,
                                {{{1.0, {1, 1}}, {-1.0, {0, 2}}},
                                 {{1.0, {3, 1}}, {-1.0, {2, 2}}}});
    throw FieldError("curl: vector or tensor field expected");
}

SingularField curl_curl(const SingularField& E) {
    if (E.codomain() != Codomain::SymTensor && E.codomain() != Codomain::Tensor)
        throw FieldError("curl_curl: tensor field expected");
    return curl(curl(E));
}

SingularField laplacian(const SingularField& f) {
    if (f.codomain() != Codomain::Scalar) throw FieldError("laplacian: scalar field expected");
    return div(grad(f));
}

SingularField amap(const SingularField& T) {
    if (T.codomain() != Codomain::Tensor && T.codomain() != Codomain::SymTensor)
        throw FieldError("amap: tensor field expected");
    SingularField out(T.codomain(), T.domain_radius());
    out.set_fp_rho(T.fp_rho());
    // channel mapping: out = [[T22, -T21], [-T12, T11]] (1-based components)
    const int src[4] = {3, 2, 1, 0};
    const double sgn[4] = {1.0, -1.0, -1.0, 1.0};
    for (int c = 0; c < 4; ++c)
        for (const auto& t : T.channel(src[c])) {
            SmoothTerm s = t;
            s.coeff *= sgn[c];
            out.add_term(c, s);
        }
    for (const auto& [a, v] : T.point_part()) {
        auto M = std::get<Eigen::Matrix2d>(v);
        Eigen::Matrix2d N;
        N << M(1, 1), -M(1, 0), -M(0, 1), M(0, 0);
        out.add_point(a, Eigen::Matrix2d(N));
    }
    out.normalize();
    return out;
}

SingularField derivative_multi(const SingularField& F, const MultiIndex& a) {
    SingularField out = F;
    for (int i = 0; i < a.a1; ++i) out = partial_derivative(out, 1);
    for (int i = 0; i < a.a2; ++i) out = partial_derivative(out, 2);
    return out;
}

SingularField antigradient(const SingularField& v) {
    if (v.codomain() != Codomain::Vector)
        throw FieldError("antigradient: vector field expected");
    if (!v.point_empty())
        throw FieldError("antigradient: point parts are not gradients of algebra fields");
    if (v.smooth_empty()) return SingularField::scalar(v.domain_radius());

    // candidate dictionary of potential terms
    struct Key {
        int k, p, n;
        Parity par;
        auto operator<=>(const Key&) const = default;
    };
    std::set<Key> cand;
    for (int c = 0; c < 2; ++c)
        for (const auto& t : v.channel(c)) {
            for (int n : {t.n - 1, t.n + 1}) {
                if (n < 0) continue;
                for (Parity par : {Parity::Cos, Parity::Sin}) {
                    if (n == 0 && par == Parity::Sin) continue;
                    for (int p : {t.p, t.p + 1}) {
                        if (p > 2) continue;
                        if (t.k + 1 == 0 && p == 0 && n == 0) continue; // constants
                        cand.insert(Key{t.k + 1, p, n, par});
                    }
                }
            }
        }
    std::vector<Key> keys(cand.begin(), cand.end());
    if (keys.empty()) throw FieldError("antigradient: no candidate potentials");

    // target coefficient space: union of term signatures of v and of all
    // candidate gradients
    std::map<std::tuple<int, int, int, int, Parity>, int> rows; // (ch,k,p,n,par)->row
    auto row_of = [&](int ch, const SmoothTerm& t) {
        auto key = std::make_tuple(ch, t.k, t.p, t.n, t.parity);
        auto it = rows.find(key);
        if (it == rows.end()) it = rows.emplace(key, int(rows.size())).first;
        return it->second;
    };
    std::vector<std::vector<SmoothTerm>> grads1(keys.size()), grads2(keys.size());
    for (size_t j = 0; j < keys.size(); ++j) {
        SmoothTerm pot(1.0, keys[j].k, keys[j].p, keys[j].n, keys[j].par);
        classical_derivative_terms(pot, 1, grads1[j]);
        classical_derivative_terms(pot, 2, grads2[j]);
        for (const auto& t : grads1[j]) row_of(0, t);
        for (const auto& t : grads2[j]) row_of(1, t);
    }
    for (int c = 0; c < 2; ++c)
        for (const auto& t : v.channel(c)) row_of(c, t);

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(int(rows.size()), int(keys.size()));
    Eigen::VectorXd b = Eigen::VectorXd::Zero(int(rows.size()));
    for (size_t j = 0; j < keys.size(); ++j) {
        for (const auto& t : grads1[j]) A(row_of(0, t), int(j)) += t.coeff;
        for (const auto& t : grads2[j]) A(row_of(1, t), int(j)) += t.coeff;
    }
    for (int c = 0; c < 2; ++c)
        for (const auto& t : v.channel(c)) b(row_of(c, t)) += t.coeff;

    Eigen::VectorXd x = A.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
    double resid = (A * x - b).norm();
    if (resid > 1e-9 * (1.0 + b.norm()))
        throw FieldError("antigradient: field is not a gradient in the algebra "
                         "(residual " + std::to_string(resid) + ")");
    SingularField out = SingularField::scalar(v.domain_radius());
    for (size_t j = 0; j < keys.size(); ++j)
        if (std::abs(x(int(j))) > 1e-12 * (1.0 + x.norm()))
            out.add_scalar(x(int(j)), keys[j].k, keys[j].p, keys[j].n, keys[j].par);
    out.normalize();
    return out;
}

} // namespace df2d
