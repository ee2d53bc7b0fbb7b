#include "df2d/field.hpp"

#include <algorithm>
#include <cmath>

namespace df2d {

Value zero_value(Codomain c) {
    switch (c) {
        case Codomain::Scalar: return 0.0;
        case Codomain::Vector: return Eigen::Vector2d(Eigen::Vector2d::Zero());
        default: return Eigen::Matrix2d(Eigen::Matrix2d::Zero());
    }
}

Value value_add(const Value& a, const Value& b) {
    if (a.index() != b.index()) throw FieldError("value_add: mismatched codomains");
    if (std::holds_alternative<double>(a))
        return std::get<double>(a) + std::get<double>(b);
    if (std::holds_alternative<Eigen::Vector2d>(a))
        return Eigen::Vector2d(std::get<Eigen::Vector2d>(a) + std::get<Eigen::Vector2d>(b));
    return Eigen::Matrix2d(std::get<Eigen::Matrix2d>(a) + std::get<Eigen::Matrix2d>(b));
}

Value value_scale(const Value& a, double s) {
    if (std::holds_alternative<double>(a)) return std::get<double>(a) * s;
    if (std::holds_alternative<Eigen::Vector2d>(a))
        return Eigen::Vector2d(std::get<Eigen::Vector2d>(a) * s);
    return Eigen::Matrix2d(std::get<Eigen::Matrix2d>(a) * s);
}

double value_norm(const Value& a) {
    if (std::holds_alternative<double>(a)) return std::abs(std::get<double>(a));
    if (std::holds_alternative<Eigen::Vector2d>(a)) return std::get<Eigen::Vector2d>(a).norm();
    return std::get<Eigen::Matrix2d>(a).norm();
}

double value_component(const Value& v, int channel) {
    if (std::holds_alternative<double>(v)) return std::get<double>(v);
    if (std::holds_alternative<Eigen::Vector2d>(v)) return std::get<Eigen::Vector2d>(v)(channel);
    return std::get<Eigen::Matrix2d>(v)(channel / 2, channel % 2);
}

SmoothTerm::SmoothTerm(double c, int k_, int p_, int n_, Parity par)
    : coeff(c), k(k_), p(p_), n(n_), parity(par) {
    if (p < 0 || p > 2) throw FieldError("SmoothTerm: log power must be in [0,2]");
    if (n < 0) throw FieldError("SmoothTerm: angular mode must be >= 0");
    if (n == 0 && par == Parity::Sin)
        throw FieldError("SmoothTerm: sin(0*theta) is identically zero");
}

double SmoothTerm::eval(double r, double theta) const {
    double v = coeff * std::pow(r, k);
    for (int i = 0; i < p; ++i) v *= std::log(r);
    v *= (parity == Parity::Cos) ? std::cos(n * theta) : std::sin(n * theta);
    return v;
}

bool pv_extension_exists(const SmoothTerm& t) {
    if (t.k >= -1) return true;
    if (t.p > 0) return false;
    int m = -t.k;
    return t.n > m - 2;
}

SingularField::SingularField(Codomain cod, double R) : cod_(cod), R_(R), rho_(R / 2) {
    if (!(R > 0.0)) throw FieldError("SingularField: domain radius must be positive");
    ch_.resize(channel_count(cod));
}

void SingularField::set_fp_rho(double rho) {
    if (!(rho > 0.0) || rho >= R_)
        throw FieldError("set_fp_rho: need 0 < rho < domain radius");
    rho_ = rho;
}

ExtensionPolicy SingularField::policy_for(const SmoothTerm& t) const {
    if (t.k >= 0 || (t.k == -1 && t.p == 0 && t.n >= 1)) return {PolicyKind::Integrable, 0.0};
    if (t.k >= -1) return {PolicyKind::Integrable, 0.0}; // locally integrable in 2d
    if (pv_extension_exists(t)) return {PolicyKind::Pv, 0.0};
    return {PolicyKind::FinitePart, rho_};
}

void SingularField::add_term(int channel, const SmoothTerm& t) {
    if (channel < 0 || channel >= channels()) throw FieldError("add_term: bad channel");
    if (t.coeff != 0.0) ch_[channel].push_back(t);
}

void SingularField::add_channel_trig(int channel, double coeff, int k, int p,
                                     const TrigPoly& g) {
    for (const auto& [key, c] : g.coeffs())
        add_term(channel, SmoothTerm(coeff * c, k, p, key.first, key.second));
}

void SingularField::add_scalar(double coeff, int k, int p, int n, Parity par) {
    if (cod_ != Codomain::Scalar) throw FieldError("add_scalar: not a scalar field");
    add_term(0, SmoothTerm(coeff, k, p, n, par));
}

void SingularField::add_vector_cart(int i, double coeff, int k, int p, int n, Parity par) {
    if (cod_ != Codomain::Vector) throw FieldError("add_vector_cart: not a vector field");
    if (i < 0 || i > 1) throw FieldError("add_vector_cart: component out of range");
    add_term(i, SmoothTerm(coeff, k, p, n, par));
}

void SingularField::add_vector_polar(double coeff, int k, int p, int n, Parity par,
                                     PolarVec f) {
    if (cod_ != Codomain::Vector) throw FieldError("add_vector_polar: not a vector field");
    TrigPoly g = TrigPoly::harmonic(n, par);
    TrigPoly c1 = TrigPoly::harmonic(1, Parity::Cos);
    TrigPoly s1 = TrigPoly::harmonic(1, Parity::Sin);
    if (f == PolarVec::Er) {
        add_channel_trig(0, coeff, k, p, g * c1);
        add_channel_trig(1, coeff, k, p, g * s1);
    } else {
        add_channel_trig(0, -coeff, k, p, g * s1);
        add_channel_trig(1, coeff, k, p, g * c1);
    }
}

void SingularField::add_tensor_cart(int i, int j, double coeff, int k, int p, int n,
                                    Parity par) {
    if (cod_ != Codomain::Tensor && cod_ != Codomain::SymTensor)
        throw FieldError("add_tensor_cart: not a tensor field");
    if (i < 0 || i > 1 || j < 0 || j > 1)
        throw FieldError("add_tensor_cart: component out of range");
    add_term(i * 2 + j, SmoothTerm(coeff, k, p, n, par));
}

void SingularField::add_tensor_polar(double coeff, int k, int p, int n, Parity par,
                                     PolarDyad f) {
    if (cod_ != Codomain::Tensor && cod_ != Codomain::SymTensor)
        throw FieldError("add_tensor_polar: not a tensor field");
    TrigPoly g = TrigPoly::harmonic(n, par);
    TrigPoly c1 = TrigPoly::harmonic(1, Parity::Cos);
    TrigPoly s1 = TrigPoly::harmonic(1, Parity::Sin);
    TrigPoly er[2] = {c1, s1};
    TrigPoly et[2] = {s1 * -1.0, c1};
    const TrigPoly* a = nullptr;
    const TrigPoly* b = nullptr;
    switch (f) {
        case PolarDyad::ErEr: a = er; b = er; break;
        case PolarDyad::ErEt: a = er; b = et; break;
        case PolarDyad::EtEr: a = et; b = er; break;
        case PolarDyad::EtEt: a = et; b = et; break;
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            add_channel_trig(i * 2 + j, coeff, k, p, g * a[i] * b[j]);
}

void SingularField::add_point(const MultiIndex& a, const Value& v) {
    Value z = zero_value(cod_);
    if (v.index() != z.index()) throw FieldError("add_point: value has wrong codomain");
    point_scale_hint_ = std::max(point_scale_hint_, value_norm(v));
    auto it = point_.find(a);
    if (it == point_.end())
        point_[a] = v;
    else
        it->second = value_add(it->second, v);
}

void SingularField::normalize(double rel_tol) {
    double scale = 0.0;
    for (const auto& terms : ch_)
        for (const auto& t : terms) scale = std::max(scale, std::abs(t.coeff));
    for (auto& terms : ch_) {
        std::map<std::tuple<int, int, int, Parity>, double> merged;
        for (const auto& t : terms) merged[{t.k, t.p, t.n, t.parity}] += t.coeff;
        terms.clear();
        for (const auto& [key, c] : merged) {
            if (std::abs(c) <= rel_tol * scale || c == 0.0) continue;
            terms.push_back(SmoothTerm(c, std::get<0>(key), std::get<1>(key),
                                       std::get<2>(key), std::get<3>(key)));
        }
    }
    double pscale = point_scale_hint_;
    for (const auto& [a, v] : point_) pscale = std::max(pscale, value_norm(v));
    for (auto it = point_.begin(); it != point_.end();) {
        if (value_norm(it->second) <= rel_tol * pscale || value_norm(it->second) == 0.0)
            it = point_.erase(it);
        else
            ++it;
    }
    point_scale_hint_ = 0.0;
    for (const auto& [a, v] : point_)
        point_scale_hint_ = std::max(point_scale_hint_, value_norm(v));
    if (cod_ == Codomain::SymTensor) {
        // enforce the symmetry invariant by symmetrizing channels 1 and 2
        std::vector<SmoothTerm> sym;
        for (const auto& t : ch_[1]) {
            sym.push_back(t);
            sym.back().coeff *= 0.5;
        }
        for (const auto& t : ch_[2]) {
            sym.push_back(t);
            sym.back().coeff *= 0.5;
        }
        ch_[1] = sym;
        ch_[2] = sym;
        for (auto& [a, v] : point_) {
            auto M = std::get<Eigen::Matrix2d>(v);
            v = Eigen::Matrix2d(0.5 * (M + M.transpose()));
        }
    }
}

bool SingularField::smooth_empty() const {
    for (const auto& terms : ch_)
        if (!terms.empty()) return false;
    return true;
}

double SingularField::scaling_degree() const {
    double sd = -std::numeric_limits<double>::infinity();
    for (const auto& terms : ch_)
        for (const auto& t : terms) sd = std::max(sd, double(t.sd()));
    for (const auto& [a, v] : point_) sd = std::max(sd, double(2 + a.order()));
    return sd;
}

double SingularField::degree_of_divergence() const {
    double sd = scaling_degree();
    if (sd == -std::numeric_limits<double>::infinity()) return sd;
    return sd - 2.0;
}

SingularField SingularField::restricted() const {
    SingularField out = *this;
    out.point_.clear();
    out.point_scale_hint_ = 0.0;
    return out;
}

Value SingularField::eval_smooth(double r, double theta) const {
    if (!(r > 0.0)) throw FieldError("eval_smooth: r must be positive");
    Value v = zero_value(cod_);
    for (int c = 0; c < channels(); ++c) {
        double s = 0.0;
        for (const auto& t : ch_[c]) s += t.eval(r, theta);
        if (cod_ == Codomain::Scalar)
            v = std::get<double>(v) + s;
        else if (cod_ == Codomain::Vector)
            std::get<Eigen::Vector2d>(v)(c) += s;
        else
            std::get<Eigen::Matrix2d>(v)(c / 2, c % 2) += s;
    }
    return v;
}

Value SingularField::eval_smooth_xy(const Eigen::Vector2d& x) const {
    return eval_smooth(x.norm(), std::atan2(x.y(), x.x()));
}

namespace {
// Rewrite one term under x1 <-> x2 (theta -> pi/2 - theta):
// cos(n theta) -> cos(n pi/2 - n theta), expanded back into cos/sin of n theta.
void swap_term(const SmoothTerm& t, std::vector<SmoothTerm>& out) {
    double c = std::cos(M_PI_2 * t.n), s = std::sin(M_PI_2 * t.n);
    // exact for integer n
    c = std::round(c);
    s = std::round(s);
    if (t.parity == Parity::Cos) {
        // cos(n(pi/2 - th)) = cos(n pi/2)cos(n th) + sin(n pi/2)sin(n th)
        if (c != 0.0) out.push_back(SmoothTerm(t.coeff * c, t.k, t.p, t.n, Parity::Cos));
        if (s != 0.0 && t.n > 0)
            out.push_back(SmoothTerm(t.coeff * s, t.k, t.p, t.n, Parity::Sin));
    } else {
        // sin(n(pi/2 - th)) = sin(n pi/2)cos(n th) - cos(n pi/2)sin(n th)
        if (s != 0.0) out.push_back(SmoothTerm(t.coeff * s, t.k, t.p, t.n, Parity::Cos));
        if (c != 0.0 && t.n > 0)
            out.push_back(SmoothTerm(-t.coeff * c, t.k, t.p, t.n, Parity::Sin));
    }
}
} // namespace

SingularField SingularField::swap_axes() const {
    SingularField out(cod_, R_);
    out.rho_ = rho_;
    auto chmap = [&](int c) {
        if (cod_ == Codomain::Scalar) return 0;
        if (cod_ == Codomain::Vector) return 1 - c;
        int i = c / 2, j = c % 2;
        return (1 - i) * 2 + (1 - j);
    };
    for (int c = 0; c < channels(); ++c)
        for (const auto& t : ch_[c]) {
            std::vector<SmoothTerm> parts;
            swap_term(t, parts);
            for (const auto& q : parts) out.ch_[chmap(c)].push_back(q);
        }
    for (const auto& [a, v] : point_) {
        MultiIndex b(a.a2, a.a1);
        Value w = v;
        if (cod_ == Codomain::Vector) {
            auto u = std::get<Eigen::Vector2d>(v);
            w = Eigen::Vector2d(u.y(), u.x());
        } else if (cod_ != Codomain::Scalar) {
            auto M = std::get<Eigen::Matrix2d>(v);
            Eigen::Matrix2d P;
            P << 0, 1, 1, 0;
            w = Eigen::Matrix2d(P * M * P);
        }
        out.add_point(b, w);
    }
    out.normalize();
    return out;
}

SingularField linear_combine(const std::vector<std::pair<double, SingularField>>& parts) {
    if (parts.empty()) throw FieldError("linear_combine: empty input");
    SingularField out(parts.front().second.cod_, parts.front().second.R_);
    out.rho_ = parts.front().second.rho_;
    for (const auto& [w, f] : parts) {
        if (f.cod_ != out.cod_) throw FieldError("linear_combine: mixed codomains");
        if (f.R_ != out.R_) throw FieldError("linear_combine: mixed domain radii");
        for (int c = 0; c < out.channels(); ++c)
            for (const auto& t : f.ch_[c]) {
                SmoothTerm s = t;
                s.coeff *= w;
                if (s.coeff != 0.0) out.ch_[c].push_back(s);
            }
        for (const auto& [a, v] : f.point_) out.add_point(a, value_scale(v, w));
    }
    out.normalize();
    return out;
}

SingularField canonical_extension(Codomain cod, double domain_radius,
                                  const std::vector<std::vector<SmoothTerm>>& channels,
                                  double rho) {
    SingularField out(cod, domain_radius);
    if (rho > 0.0) out.set_fp_rho(rho);
    if (int(channels.size()) != out.channels())
        throw FieldError("canonical_extension: wrong channel count");
    for (int c = 0; c < out.channels(); ++c)
        for (const auto& t : channels[c]) out.add_term(c, t);
    out.normalize();
    return out;
}

} // namespace df2d
