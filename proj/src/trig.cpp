#include "df2d/trig.hpp"

namespace df2d {

namespace {
// add c * cos(n th) / c * sin(n th) allowing negative n
void add_signed(TrigPoly& t, int n, Parity par, double c) {
    if (n < 0) {
        if (par == Parity::Sin) c = -c;
        n = -n;
    }
    t.add(n, par, c);
}
} // namespace

TrigPoly TrigPoly::operator*(const TrigPoly& o) const {
    TrigPoly out;
    for (const auto& [ka, a] : c_) {
        for (const auto& [kb, b] : o.c_) {
            int n = ka.first, m = kb.first;
            double c = 0.5 * a * b;
            if (ka.second == Parity::Cos && kb.second == Parity::Cos) {
                add_signed(out, n - m, Parity::Cos, c);
                add_signed(out, n + m, Parity::Cos, c);
            } else if (ka.second == Parity::Sin && kb.second == Parity::Sin) {
                add_signed(out, n - m, Parity::Cos, c);
                add_signed(out, n + m, Parity::Cos, -c);
            } else if (ka.second == Parity::Cos && kb.second == Parity::Sin) {
                // cos(n) sin(m) = 1/2 [ sin(n+m) - sin(n-m) ]
                add_signed(out, n + m, Parity::Sin, c);
                add_signed(out, n - m, Parity::Sin, -c);
            } else {
                // sin(n) cos(m) = 1/2 [ sin(n+m) + sin(n-m) ]
                add_signed(out, n + m, Parity::Sin, c);
                add_signed(out, n - m, Parity::Sin, c);
            }
        }
    }
    return out;
}

TrigPoly TrigPoly::operator*(double s) const {
    TrigPoly out;
    if (s == 0.0) return out;
    for (const auto& [k, c] : c_) out.add(k.first, k.second, c * s);
    return out;
}

TrigPoly TrigPoly::operator+(const TrigPoly& o) const {
    TrigPoly out = *this;
    for (const auto& [k, c] : o.c_) out.add(k.first, k.second, c);
    return out;
}

TrigPoly TrigPoly::dtheta() const {
    TrigPoly out;
    for (const auto& [k, c] : c_) {
        int n = k.first;
        if (n == 0) continue;
        if (k.second == Parity::Cos)
            out.add(n, Parity::Sin, -c * n);
        else
            out.add(n, Parity::Cos, c * n);
    }
    return out;
}

TrigPoly TrigPoly::monomial(int a, int b) {
    TrigPoly out = TrigPoly::constant(1.0);
    TrigPoly c = TrigPoly::harmonic(1, Parity::Cos);
    TrigPoly s = TrigPoly::harmonic(1, Parity::Sin);
    for (int i = 0; i < a; ++i) out = out * c;
    for (int i = 0; i < b; ++i) out = out * s;
    return out;
}

} // namespace df2d
