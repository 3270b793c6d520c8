#pragma once

// Dormand-Prince 5(4) embedded pair with step-size control, integrating one smooth
// stretch [a, b] at a time. Callers split the domain at breakpoints of the right-hand side.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "slmaj/errors.hpp"

namespace slmaj::detail {

struct StepControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 1.0;
    double min_step = 1e-14;
};

template <std::size_t N>
using State = std::array<double, N>;

// rhs(x, y, dydx); on_step(x, y) after each accepted step. stop(y) ends the stretch early;
// returns false in that case.
template <std::size_t N, class Rhs, class OnStep, class Stop>
bool dopri5_stretch(Rhs&& rhs, double a, double b, State<N>& y, double& h, const StepControl& c,
                    OnStep&& on_step, Stop&& stop) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    double x = a;
    State<N> k1, k2, k3, k4, k5, k6, k7, tmp, ynew;
    rhs(x, y, k1);
    h = std::min({h, c.max_step, b - a});
    while (x < b) {
        const double remaining = b - x;
        // Snap onto b when the leftover would be a sliver.
        double step = std::min(h, c.max_step);
        if (step >= remaining || remaining - step < 1e-3 * step) step = remaining;
        if (step < c.min_step * std::max(1.0, std::abs(x)) && step < remaining) {
            std::ostringstream os;
            os << "step size underflow at x = " << x;
            throw IntegrationFailure(os.str(), x);
        }

        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + step * a21 * k1[i];
        rhs(x + c2 * step, tmp, k2);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + step * (a31 * k1[i] + a32 * k2[i]);
        rhs(x + c3 * step, tmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + step * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(x + c4 * step, tmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + step * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(x + c5 * step, tmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + step * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                    a65 * k5[i]);
        const double xnew = step == remaining ? b : x + step;
        rhs(xnew, tmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + step * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                     b6 * k6[i]);
        rhs(xnew, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double ei = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                      e6 * k6[i] + e7 * k7[i]);
            const double scale = c.abs_tol + c.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err = std::max(err, std::abs(ei) / scale);
        }

        if (err <= 1.0) {
            x = xnew;
            y = ynew;
            k1 = k7;
            on_step(x, y);
            const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
            h = step * std::max(1.0, grow);
            if (stop(y)) return false;
        } else {
            h = step * std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
    }
    return true;
}

} // namespace slmaj::detail
