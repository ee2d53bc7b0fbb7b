#pragma once

#include <compare>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace df2d {

// 2D multi-index alpha = (a1, a2) with |alpha| = a1 + a2.
struct MultiIndex {
    int a1 = 0;
    int a2 = 0;

    constexpr MultiIndex() = default;
    constexpr MultiIndex(int x1, int x2) : a1(x1), a2(x2) {
        if (x1 < 0 || x2 < 0)
            throw std::invalid_argument("MultiIndex components must be non-negative");
    }

    constexpr int order() const { return a1 + a2; }

    constexpr MultiIndex plus(int i) const {
        return i == 1 ? MultiIndex{a1 + 1, a2} : MultiIndex{a1, a2 + 1};
    }

    auto operator<=>(const MultiIndex&) const = default;

    std::string str() const {
        return "(" + std::to_string(a1) + "," + std::to_string(a2) + ")";
    }
};

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

inline double mi_factorial(const MultiIndex& a) {
    return factorial(a.a1) * factorial(a.a2);
}

inline double parity_sign(int order) { return order % 2 == 0 ? 1.0 : -1.0; }

} // namespace df2d
