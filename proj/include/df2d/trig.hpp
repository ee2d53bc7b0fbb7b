#pragma once

#include <cmath>
#include <map>
#include <utility>

namespace df2d {

// Angular harmonic parity.
enum class Parity { Cos, Sin };

// Finite trigonometric polynomial sum_n ( a_n cos(n th) + b_n sin(n th) ).
// Keys are (n, parity) with n >= 0; sin(0*th) is identically zero and never stored.
// Coefficients here arise from products of harmonics, so they are dyadic-rational
// multiples of the inputs and exact in double arithmetic.
class TrigPoly {
public:
    using Key = std::pair<int, Parity>;

    TrigPoly() = default;

    static TrigPoly harmonic(int n, Parity par, double c = 1.0) {
        TrigPoly t;
        t.add(n, par, c);
        return t;
    }
    static TrigPoly constant(double c) { return harmonic(0, Parity::Cos, c); }
    // Expansion of cos^a(th) * sin^b(th) into harmonics.
    static TrigPoly monomial(int a, int b);

    void add(int n, Parity par, double c) {
        if (n < 0 || c == 0.0) return;
        if (n == 0 && par == Parity::Sin) return;
        c_[{n, par}] += c;
        if (c_[{n, par}] == 0.0) c_.erase({n, par});
    }

    const std::map<Key, double>& coeffs() const { return c_; }
    bool empty() const { return c_.empty(); }
    int max_mode() const { return c_.empty() ? 0 : c_.rbegin()->first.first; }

    double coeff(int n, Parity par) const {
        auto it = c_.find({n, par});
        return it == c_.end() ? 0.0 : it->second;
    }

    TrigPoly operator*(const TrigPoly& o) const;
    TrigPoly operator*(double s) const;
    TrigPoly operator+(const TrigPoly& o) const;

    // d/dtheta.
    TrigPoly dtheta() const;

    double eval(double theta) const {
        double v = 0.0;
        for (const auto& [k, c] : c_)
            v += c * (k.second == Parity::Cos ? std::cos(k.first * theta)
                                              : std::sin(k.first * theta));
        return v;
    }

    // Integral over a full period [0, 2pi): only the constant mode survives.
    double integrate_period() const { return 2.0 * M_PI * coeff(0, Parity::Cos); }

private:
    std::map<Key, double> c_;
};

} // namespace df2d
