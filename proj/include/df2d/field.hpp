#pragma once

#include <Eigen/Dense>
#include <array>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "df2d/multi_index.hpp"
#include "df2d/trig.hpp"

namespace df2d {

struct FieldError : std::runtime_error {
    explicit FieldError(const std::string& what) : std::runtime_error(what) {}
};

enum class Codomain { Scalar, Vector, Tensor, SymTensor };

inline int channel_count(Codomain c) {
    switch (c) {
        case Codomain::Scalar: return 1;
        case Codomain::Vector: return 2;
        default: return 4; // tensor channels in row-major order 11,12,21,22
    }
}

// Codomain-typed value: double, Vector2d, or Matrix2d.
using Value = std::variant<double, Eigen::Vector2d, Eigen::Matrix2d>;

Value zero_value(Codomain c);
Value value_add(const Value& a, const Value& b);
Value value_scale(const Value& a, double s);
double value_norm(const Value& a);
double value_component(const Value& v, int channel);

// One scalar-channel term  coeff * r^k * (ln r)^p * trig(n theta)  on the
// punctured disk. All calculus happens on these Cartesian-component terms;
// polar frame input (e_r, e_theta dyads) is expanded on ingestion.
struct SmoothTerm {
    double coeff = 0.0;
    int k = 0;          // integer radial exponent
    int p = 0;          // log power, capped at 2
    int n = 0;          // angular mode, n >= 0
    Parity parity = Parity::Cos;

    SmoothTerm() = default;
    SmoothTerm(double c, int k_, int p_, int n_, Parity par);

    double eval(double r, double theta) const;
    // Scaling degree of the lone term: sd = -k (log factors do not shift it).
    int sd() const { return -k; }
};

enum class PolicyKind { Integrable, Pv, FinitePart };

// Extension policy for a single term; derived from the pv criterion
// (see pv_extension_exists), with rho the finite-part reference radius.
struct ExtensionPolicy {
    PolicyKind kind = PolicyKind::Integrable;
    double rho = 0.0; // only meaningful for FinitePart
};

// Criterion: k >= -1 (integrable), or k = -m <= -2 and mode n > m-2.
// Log-power terms (p > 0) with k <= -2 are not granted pv.
bool pv_extension_exists(const SmoothTerm& t);

// Polar frame selectors for ingestion helpers.
enum class PolarVec { Er, Etheta };
enum class PolarDyad { ErEr, ErEt, EtEr, EtEt };

// A field on the open disk of radius domain_radius centered at O whose
// singular support is contained in {O}: a finite list of smooth terms per
// Cartesian channel plus a delta-multipole point part.
class SingularField {
public:
    SingularField(Codomain cod, double domain_radius);

    static SingularField scalar(double R) { return SingularField(Codomain::Scalar, R); }
    static SingularField vector(double R) { return SingularField(Codomain::Vector, R); }
    static SingularField tensor(double R) { return SingularField(Codomain::Tensor, R); }
    static SingularField sym_tensor(double R) { return SingularField(Codomain::SymTensor, R); }

    Codomain codomain() const { return cod_; }
    double domain_radius() const { return R_; }
    double fp_rho() const { return rho_; }
    void set_fp_rho(double rho);

    int channels() const { return channel_count(cod_); }
    const std::vector<SmoothTerm>& channel(int c) const { return ch_.at(c); }
    const std::map<MultiIndex, Value>& point_part() const { return point_; }

    ExtensionPolicy policy_for(const SmoothTerm& t) const;

    // Ingestion. add_term adds a raw Cartesian-channel term; helpers expand an
    // angular trig polynomial against frame components.
    void add_term(int channel, const SmoothTerm& t);
    void add_channel_trig(int channel, double coeff, int k, int p, const TrigPoly& g);
    void add_scalar(double coeff, int k, int p, int n, Parity par);
    void add_vector_polar(double coeff, int k, int p, int n, Parity par, PolarVec f);
    void add_vector_cart(int i, double coeff, int k, int p, int n, Parity par);
    void add_tensor_polar(double coeff, int k, int p, int n, Parity par, PolarDyad f);
    void add_tensor_cart(int i, int j, double coeff, int k, int p, int n, Parity par);
    void add_point(const MultiIndex& a, const Value& v);

    // Merge like terms, prune zeros (relative tolerance), enforce symmetry
    // invariant for SymTensor.
    void normalize(double rel_tol = 1e-13);

    bool smooth_empty() const;
    bool point_empty() const { return point_.empty(); }
    bool empty() const { return smooth_empty() && point_empty(); }

    // Degrees. Empty field returns -infinity sentinel.
    double scaling_degree() const;
    double degree_of_divergence() const;

    // Restriction to Omega - O: same smooth part, empty point part.
    SingularField restricted() const;

    Value eval_smooth(double r, double theta) const;
    Value eval_smooth_xy(const Eigen::Vector2d& x) const;

    // x1 <-> x2 axis swap (theta -> pi/2 - theta, components permuted).
    SingularField swap_axes() const;

    friend SingularField linear_combine(
        const std::vector<std::pair<double, SingularField>>& parts);

private:
    Codomain cod_;
    double R_;
    double rho_; // finite-part reference radius, default R/2
    std::vector<std::vector<SmoothTerm>> ch_;
    std::map<MultiIndex, Value> point_;
    // largest point-value magnitude ever accumulated; lets normalize() prune
    // roundoff residue left by exact cancellations in add_point
    double point_scale_hint_ = 0.0;
};

SingularField linear_combine(const std::vector<std::pair<double, SingularField>>& parts);

// canonical_extension: field whose smooth part is the given channel terms and
// whose point part is empty; policies are implied (pv where the criterion
// holds, else finite-part(rho)).
SingularField canonical_extension(Codomain cod, double domain_radius,
                                  const std::vector<std::vector<SmoothTerm>>& channels,
                                  double rho = -1.0);

} // namespace df2d
