#pragma once

#include <array>

namespace slmaj::detail {

// Five-point Gauss-Legendre rule on [a, b].
template <class F>
double gauss_legendre(double a, double b, F&& f) {
    static constexpr std::array<double, 5> nodes{0.0, -0.5384693101056831, 0.5384693101056831,
                                                 -0.9061798459386640, 0.9061798459386640};
    static constexpr std::array<double, 5> weights{0.5688888888888889, 0.4786286704993665,
                                                   0.4786286704993665, 0.2369268850561891,
                                                   0.2369268850561891};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(mid + half * nodes[i]);
    return s * half;
}

} // namespace slmaj::detail
