#include "df2d/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace df2d {

namespace {

// ---- Gauss-Legendre nodes (order 12) on [-1, 1], computed once by Newton ----
struct GaussRule {
    std::vector<double> x, w;
    GaussRule(int n) : x(n), w(n) {
        for (int i = 0; i < n; ++i) {
            double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (t * p1 - p0) / (t * t - 1.0);
                double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-15) break;
            }
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            x[i] = t;
            w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

const GaussRule& gauss12() {
    static GaussRule g(12);
    return g;
}

template <class F>
double gl_panel(const F& f, double a, double b) {
    const auto& g = gauss12();
    double m = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(m + h * g.x[i]);
    return s * h;
}

// Adaptive bisection with a split budget.
template <class F>
double adaptive(const F& f, double a, double b, double tol, int& budget) {
    double whole = gl_panel(f, a, b);
    struct Item {
        double a, b, val;
    };
    std::vector<Item> stack = {{a, b, whole}};
    double total = 0.0;
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        double m = 0.5 * (it.a + it.b);
        double l = gl_panel(f, it.a, m), r = gl_panel(f, m, it.b);
        if (std::abs(l + r - it.val) <= tol || budget <= 0 ||
            (it.b - it.a) < 1e-14 * (b - a)) {
            total += l + r;
        } else {
            --budget;
            stack.push_back({it.a, m, l});
            stack.push_back({m, it.b, r});
        }
    }
    return total;
}

double log_pow(double r, int p) {
    if (p == 0) return 1.0;
    double l = std::log(r);
    double v = l;
    for (int i = 1; i < p; ++i) v *= l;
    return v;
}

double log_pow_or_one(double l, int q) {
    double v = 1.0;
    for (int i = 0; i < q; ++i) v *= l;
    return v;
}

// int_0^r s^a (ln s)^p ds for a >= 0 (finite), closed form.
double moment_zero_to(double r, int a, int p) {
    double lr = std::log(r);
    double v = 0.0;
    for (int j = 0; j <= p; ++j) {
        double cj = (j % 2 == 0 ? 1.0 : -1.0) * factorial(p) /
                    (factorial(p - j) * std::pow(double(a + 1), j + 1));
        v += cj * log_pow_or_one(lr, p - j);
    }
    return std::pow(r, a + 1) * v;
}

// int_a^b s^m (ln s)^p ds for 0 < a < b, any integer m.
double moment_between(double a, double b, int m, int p) {
    if (m == -1) {
        return (log_pow_or_one(std::log(b), p + 1) -
                log_pow_or_one(std::log(a), p + 1)) /
               (p + 1);
    }
    auto F = [&](double r) {
        double lr = std::log(r);
        double v = 0.0;
        for (int j = 0; j <= p; ++j) {
            double cj = (j % 2 == 0 ? 1.0 : -1.0) * factorial(p) /
                        (factorial(p - j) * std::pow(double(m + 1), j + 1));
            v += cj * log_pow_or_one(lr, p - j);
        }
        return std::pow(r, m + 1) * v;
    };
    return F(b) - F(a);
}

// Angular moment of g(theta) * psi(r x-hat) by trapezoid: exact for trig
// polynomials up to the node count.
double angular_moment(const TrigPoly& g, double r,
                      const std::function<double(const Eigen::Vector2d&)>& psi,
                      int nodes) {
    double s = 0.0;
    for (int m = 0; m < nodes; ++m) {
        double th = 2.0 * M_PI * m / nodes;
        s += g.eval(th) * psi({r * std::cos(th), r * std::sin(th)});
    }
    return s * 2.0 * M_PI / nodes;
}

std::vector<MultiIndex> jets_up_to(int order) {
    std::vector<MultiIndex> v;
    for (int o = 0; o <= order; ++o)
        for (int a1 = 0; a1 <= o; ++a1) v.push_back(MultiIndex(a1, o - a1));
    return v;
}

} // namespace

ScalarTest as_scalar_test(const TestFunction& phi) {
    ScalarTest t;
    t.eval = [phi](const Eigen::Vector2d& x) { return phi(x); };
    t.taylor = [phi](const MultiIndex& b) { return phi.taylor_coeff(b); };
    t.support = phi.support_radius();
    t.poly_degree = phi.poly_degree();
    return t;
}

ScalarTest derivative_test(const TestFunction& phi, const MultiIndex& gamma) {
    if (gamma.order() > 2)
        throw FieldError("derivative_test: only derivatives up to order 2");
    ScalarTest t;
    if (gamma.order() == 0) return as_scalar_test(phi);
    if (gamma.order() == 1) {
        int i = gamma.a1 == 1 ? 0 : 1;
        t.eval = [phi, i](const Eigen::Vector2d& x) { return phi.gradient(x)(i); };
    } else {
        int i = gamma.a1 >= 1 ? 0 : 1;
        int j = gamma.a1 == 2 ? 0 : (gamma.a2 == 2 ? 1 : 1);
        t.eval = [phi, i, j](const Eigen::Vector2d& x) { return phi.hessian(x)(i, j); };
    }
    t.taylor = [phi, gamma](const MultiIndex& b) {
        MultiIndex full(b.a1 + gamma.a1, b.a2 + gamma.a2);
        return phi.deriv_at_origin(full) / mi_factorial(b);
    };
    t.support = phi.support_radius();
    t.poly_degree = std::max(0, phi.poly_degree() - gamma.order());
    return t;
}

PairOutcome pair_terms(const std::vector<SmoothTerm>& terms, const ScalarTest& t,
                       double rho, const QuadratureSpec& q) {
    PairOutcome out;
    double S = t.support;
    for (const auto& term : terms) {
        TrigPoly g = TrigPoly::harmonic(term.n, term.parity, 1.0);
        int nodes = 2 * (term.n + t.poly_degree) + q.angular_extra;
        bool fp = term.k <= -2 && !pv_extension_exists(term);
        int d = std::max(-1, -term.k); // Taylor subtraction order (-1: none)
        double r_sub = fp ? rho : std::min(rho, S);
        double r_in = std::min(S, r_sub); // quadrature region with subtraction

        // jets and angular moments for the subtraction
        std::vector<MultiIndex> jets = d >= 0 ? jets_up_to(d) : std::vector<MultiIndex>{};
        std::vector<double> tay(jets.size()), ang(jets.size());
        for (size_t i = 0; i < jets.size(); ++i) {
            tay[i] = t.taylor(jets[i]);
            ang[i] = (g * TrigPoly::monomial(jets[i].a1, jets[i].a2)).integrate_period();
        }

        auto psi_sub = [&](const Eigen::Vector2d& x) {
            double v = t.eval(x);
            for (size_t i = 0; i < jets.size(); ++i)
                if (tay[i] != 0.0)
                    v -= tay[i] * std::pow(x(0), jets[i].a1) * std::pow(x(1), jets[i].a2);
            return v;
        };
        auto psi_raw = [&](const Eigen::Vector2d& x) { return t.eval(x); };

        int budget = q.max_radial_splits;
        double val = 0.0;
        // region [0, r_in]: subtracted integrand, dyadic panels toward 0
        if (d >= 0) {
            double hi = r_in;
            double acc = 0.0;
            for (int level = 0; level < 48 && hi > 1e-13 * r_in; ++level) {
                double lo = hi * 0.5;
                auto f = [&](double r) {
                    return term.coeff * std::pow(r, term.k + 1) * log_pow(r, term.p) *
                           angular_moment(g, r, psi_sub, nodes);
                };
                double piece = adaptive(f, lo, hi, q.radial_tol * (1.0 + std::abs(acc)),
                                        budget);
                acc += piece;
                hi = lo;
                if (level > 6 && std::abs(piece) < q.radial_tol * (1.0 + std::abs(acc)))
                    break;
            }
            val += acc;
        } else {
            auto f = [&](double r) {
                return term.coeff * std::pow(r, term.k + 1) * log_pow(r, term.p) *
                       angular_moment(g, r, psi_raw, nodes);
            };
            val += adaptive(f, 0.0, r_in, q.radial_tol, budget);
        }
        // region [r_in, S]: raw integrand (only when the subtraction radius is
        // inside the support)
        if (S > r_in + 1e-15 * S) {
            auto f = [&](double r) {
                return term.coeff * std::pow(r, term.k + 1) * log_pow(r, term.p) *
                       angular_moment(g, r, psi_raw, nodes);
            };
            val += adaptive(f, r_in, S, q.radial_tol * (1.0 + std::abs(val)), budget);
        }
        // moment add-backs
        for (size_t i = 0; i < jets.size(); ++i) {
            if (tay[i] == 0.0 || ang[i] == 0.0) continue;
            int a = term.k + jets[i].order() + 1;
            if (a >= 0) {
                val += term.coeff * tay[i] * ang[i] * moment_zero_to(r_sub, a, term.p);
            } else if (!fp) {
                throw FieldError("pair_terms: divergent moment for a non-finite-part term");
            }
            // finite-part: divergent moments are dropped by convention
            // tail correction: the subtraction extends to rho even where the
            // test function vanishes
            if (fp && S < rho) {
                val -= term.coeff * tay[i] * ang[i] * moment_between(S, rho, a, term.p);
            }
        }
        out.value += val;
        out.err_estimate += q.radial_tol * (1.0 + std::abs(val));
    }
    return out;
}

double pair_point_channel(const std::map<MultiIndex, Value>& point, int channel,
                          const ScalarTest& t) {
    double v = 0.0;
    for (const auto& [a, val] : point) {
        double c = value_component(val, channel);
        if (c == 0.0) continue;
        v += c * parity_sign(a.order()) * t.taylor(a) * mi_factorial(a);
    }
    return v;
}

double pair_channel(const SingularField& F, int channel, const ScalarTest& t,
                    const QuadratureSpec& q) {
    PairOutcome o = pair_terms(F.channel(channel), t, F.fp_rho(), q);
    return o.value + pair_point_channel(F.point_part(), channel, t);
}

Value pair(const SingularField& F, const TestFunction& phi, const QuadratureSpec& q) {
    ScalarTest t = as_scalar_test(phi);
    if (F.codomain() == Codomain::Scalar) return pair_channel(F, 0, t, q);
    if (F.codomain() == Codomain::Vector) {
        Eigen::Vector2d v;
        v << pair_channel(F, 0, t, q), pair_channel(F, 1, t, q);
        return v;
    }
    Eigen::Matrix2d M;
    M << pair_channel(F, 0, t, q), pair_channel(F, 1, t, q),
        pair_channel(F, 2, t, q), pair_channel(F, 3, t, q);
    return M;
}

std::optional<double> estimate_scaling_degree(const SingularField& F,
                                              const std::vector<double>& lambda_grid,
                                              const QuadratureSpec& q) {
    if (F.empty() || lambda_grid.size() < 4) return std::nullopt;

    // adapted probe set from the field's angular modes and point multi-indices
    std::set<MultiIndex> probes;
    probes.insert(MultiIndex(0, 0));
    for (int c = 0; c < F.channels(); ++c)
        for (const auto& t : F.channel(c)) {
            probes.insert(MultiIndex(t.n, 0));
            if (t.n >= 1) probes.insert(MultiIndex(t.n - 1, 1));
        }
    for (const auto& [a, v] : F.point_part()) probes.insert(a);

    double base_support = std::min(0.5, 0.5 * F.domain_radius());
    // evaluate all probes first: a probe that pairs to an exact zero still
    // returns quadrature roundoff, recognizable as machine-epsilon-small
    // relative to the per-lambda maximum across probes
    std::vector<std::vector<double>> vals;
    std::vector<double> lam(lambda_grid.begin(), lambda_grid.end());
    for (const auto& beta : probes) {
        TestFunction w = make_w_alpha(beta, base_support);
        std::vector<double> val;
        for (double l : lam) {
            TestFunction wl = rescale_test(w, l);
            ScalarTest t = as_scalar_test(wl);
            double v = 0.0;
            for (int c = 0; c < F.channels(); ++c)
                v += std::abs(pair_terms(F.channel(c), t, F.fp_rho(), q).value +
                              pair_point_channel(F.point_part(), c, t));
            val.push_back(v);
        }
        vals.push_back(std::move(val));
    }
    std::vector<double> colmax(lam.size(), 0.0);
    for (const auto& val : vals)
        for (size_t j = 0; j < val.size(); ++j) colmax[j] = std::max(colmax[j], val[j]);

    std::optional<double> best;
    for (const auto& val : vals) {
        double vmax = *std::max_element(val.begin(), val.end());
        if (vmax < 1e-11) continue;
        double rel = 0.0;
        for (size_t j = 0; j < val.size(); ++j)
            if (colmax[j] > 0.0) rel = std::max(rel, val[j] / colmax[j]);
        if (rel < 1e-10) continue; // roundoff around an exact zero
        // model: log2 v = s*j + c0 + c1*log2(j) + c2/j with j = -log2(lambda);
        // the log2(j) and 1/j terms absorb polynomial-in-log(lambda) anomalies
        // of the canonical extensions.
        std::vector<double> J, D;
        for (size_t j = 0; j < val.size(); ++j) {
            if (val[j] < 1e-13 * vmax) continue;
            J.push_back(-std::log2(lam[j]));
            D.push_back(std::log2(val[j]));
        }
        if (J.size() < 4) continue;
        // fit on the tail only: early points carry transients (for quadrature
        // noise around an exact zero they are erratic and can skew the model)
        const size_t tail = 8;
        if (J.size() > tail) {
            J.erase(J.begin(), J.end() - tail);
            D.erase(D.begin(), D.end() - tail);
        }
        int cols = J.size() >= 6 ? 4 : 2;
        Eigen::MatrixXd A(J.size(), cols);
        Eigen::VectorXd b(J.size());
        for (size_t j = 0; j < J.size(); ++j) {
            A(j, 0) = J[j];
            A(j, 1) = 1.0;
            if (cols == 4) {
                A(j, 2) = std::log2(J[j]);
                A(j, 3) = 1.0 / J[j];
            }
            b(j) = D[j];
        }
        Eigen::VectorXd x = A.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
        double rms = std::sqrt((A * x - b).squaredNorm() / double(J.size()));
        // erratic sequences are quadrature noise around an exact zero; skip them
        if (rms > 0.05) continue;
        double est = x(0);
        if (!best || est > *best) best = est;
    }
    return best;
}

std::vector<double> cutoff_series_extension(const std::vector<SmoothTerm>& terms,
                                            const ScalarTest& t, double domain_radius,
                                            int j_max, const QuadratureSpec& q) {
    std::vector<double> raw(j_max + 1, 0.0);
    if (!terms.empty()) {
        Cutoff cut{domain_radius};
        double S = t.support;
        for (int j = 0; j <= j_max; ++j) {
            double scale = std::pow(2.0, j);
            double r_lo = 0.5 * domain_radius / scale; // cutoff is 1 below this
            double v = 0.0;
            int budget = q.max_radial_splits;
            for (const auto& term : terms) {
                TrigPoly g = TrigPoly::harmonic(term.n, term.parity, 1.0);
                int nodes = 2 * (term.n + t.poly_degree) + q.angular_extra;
                auto f = [&](double r) {
                    double w = 1.0 - cut.value(scale * r);
                    if (w == 0.0) return 0.0;
                    return w * term.coeff * std::pow(r, term.k + 1) *
                           log_pow(r, term.p) *
                           angular_moment(g, r, t.eval, nodes);
                };
                double hi = std::min(S, domain_radius / scale);
                if (hi > r_lo)
                    v += adaptive(f, r_lo, hi, q.radial_tol * (1.0 + std::abs(v)), budget);
                if (S > domain_radius / scale)
                    v += adaptive(f, domain_radius / scale, S,
                                  q.radial_tol * (1.0 + std::abs(v)), budget);
            }
            raw[j] = v;
        }
    }
    // Richardson acceleration against the geometric tail 2^{-m j}
    std::vector<std::vector<double>> R(j_max + 1);
    for (int j = 0; j <= j_max; ++j) {
        R[j].resize(std::min(j, q.extrap_order) + 1);
        R[j][0] = raw[j];
        for (int m = 1; m < int(R[j].size()); ++m) {
            double pw = std::pow(2.0, m);
            R[j][m] = (pw * R[j][m - 1] - R[j - 1][m - 1]) / (pw - 1.0);
        }
    }
    std::vector<double> out(j_max + 1);
    for (int j = 0; j <= j_max; ++j) out[j] = R[j].back();
    return out;
}

LadderScan pv_ladder_scan(const SmoothTerm& term, const ScalarTest& t,
                          const QuadratureSpec& q) {
    LadderScan scan;
    double S = t.support;
    TrigPoly g = TrigPoly::harmonic(term.n, term.parity, 1.0);
    int nodes = 2 * (term.n + t.poly_degree) + q.angular_extra;
    auto f = [&](double r) {
        return term.coeff * std::pow(r, term.k + 1) * log_pow(r, term.p) *
               angular_moment(g, r, t.eval, nodes);
    };
    std::vector<double> eps(q.ladder_len);
    for (int j = 0; j < q.ladder_len; ++j) eps[j] = S / std::pow(2.0, j + 2);
    int budget = q.max_radial_splits;
    double acc = adaptive(f, eps[0], S, q.radial_tol, budget);
    scan.values.push_back(acc);
    for (int j = 1; j < q.ladder_len; ++j) {
        acc += adaptive(f, eps[j], eps[j - 1], q.radial_tol * (1.0 + std::abs(acc)),
                        budget);
        scan.values.push_back(acc);
    }
    // convergence: successive differences must shrink geometrically
    std::vector<double> diff;
    for (size_t j = 0; j + 1 < scan.values.size(); ++j)
        diff.push_back(std::abs(scan.values[j + 1] - scan.values[j]));
    double vscale = 0.0;
    for (double v : scan.values) vscale = std::max(vscale, std::abs(v));
    double floor_tol = 1e-11 * (1.0 + vscale);
    // use the tail of the ladder
    std::vector<double> rates;
    for (size_t j = diff.size() / 2; j + 1 < diff.size(); ++j) {
        if (diff[j] < floor_tol && diff[j + 1] < floor_tol) continue;
        if (diff[j + 1] < 1e-300) continue;
        rates.push_back(std::log2(diff[j] / diff[j + 1]));
    }
    if (rates.empty()) {
        scan.convergent = true;
        return scan;
    }
    std::nth_element(rates.begin(), rates.begin() + rates.size() / 2, rates.end());
    double a = rates[rates.size() / 2];
    scan.convergent = a > 0.5;
    scan.divergence_exponent = scan.convergent ? 0.0 : -a;
    return scan;
}

} // namespace df2d
