#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "df2d/field.hpp"
#include "df2d/test_function.hpp"

namespace df2d {

// Scalar test slot: what one channel of a field is paired against. Wraps a
// test function or one of its derivatives (analytic evaluation + exact Taylor
// data at O).
struct ScalarTest {
    std::function<double(const Eigen::Vector2d&)> eval;
    // Exact Taylor coefficient d^beta (O) / beta!.
    std::function<double(const MultiIndex&)> taylor;
    double support = 1.0;
    int poly_degree = 0;
};

ScalarTest as_scalar_test(const TestFunction& phi);
// d^gamma phi as a ScalarTest, |gamma| <= 2.
ScalarTest derivative_test(const TestFunction& phi, const MultiIndex& gamma);

struct QuadratureSpec {
    int ladder_len = 11;       // eps_j = base / 2^{j+2}, j = 0..ladder_len-1
    int extrap_order = 3;      // Richardson sweeps
    double radial_tol = 1e-12; // adaptive radial tolerance (relative)
    int angular_extra = 16;    // angular nodes: 2*(max mode) + angular_extra
    int max_radial_splits = 2000;
};

struct PairOutcome {
    double value = 0.0;
    bool converged = true;
    double divergence_exponent = 0.0; // estimated growth order when not converged
    double err_estimate = 0.0;
};

// Numerical pairing of a list of same-channel smooth terms against a scalar
// test, honoring per-term policy. Taylor subtraction around O with closed-form
// moment add-backs makes every integral absolutely convergent (divergent
// finite-part moments are dropped by convention; pv moments vanish by parity).
// Angular trapezoid (spectrally exact) times adaptive Gauss radial panels.
PairOutcome pair_terms(const std::vector<SmoothTerm>& terms, const ScalarTest& t,
                       double rho, const QuadratureSpec& q = {});

// Point-part pairing is exact: sum c^alpha (-1)^{|alpha|} d^alpha phi(O).
double pair_point_channel(const std::map<MultiIndex, Value>& point, int channel,
                          const ScalarTest& t);

// Full pairing of a field against a scalar test function, channel-wise; the
// result has the field's codomain.
Value pair(const SingularField& F, const TestFunction& phi, const QuadratureSpec& q = {});

// Single channel of the above.
double pair_channel(const SingularField& F, int channel, const ScalarTest& t,
                    const QuadratureSpec& q = {});

// Empirical scaling degree: pairings against rescaled probes on a dyadic
// lambda grid; local slopes of log|pairing| vs log(lambda) extrapolated in
// 1/log(lambda). Returns nullopt when everything is below the noise floor.
std::optional<double> estimate_scaling_degree(const SingularField& F,
                                              const std::vector<double>& lambda_grid,
                                              const QuadratureSpec& q = {});

// Cutoff series T^j(phi) = T0((1 - theta_{2^j}) phi), j = 0..j_max, computed by
// quadrature on the annuli where the cutoff is active; the returned sequence is
// Richardson-accelerated against its geometric tail.
std::vector<double> cutoff_series_extension(const std::vector<SmoothTerm>& terms,
                                            const ScalarTest& t, double domain_radius,
                                            int j_max, const QuadratureSpec& q = {});

// pv ladder diagnostics for the pv-criterion scan: values of
// int_{Omega - B_eps} f phi over the ladder plus a convergence verdict.
struct LadderScan {
    std::vector<double> values;
    bool convergent = true;
    double divergence_exponent = 0.0;
};
LadderScan pv_ladder_scan(const SmoothTerm& term, const ScalarTest& t,
                          const QuadratureSpec& q = {});

} // namespace df2d
