#include "slmaj/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "slmaj/errors.hpp"

namespace slmaj {

namespace {

using std::numbers::pi;

// Exact integral of the piecewise-affine q over [a, b], advancing a piece cursor that the caller
// keeps across monotonically increasing intervals.
double integrate_q(const Potential& q, double a, double b, std::size_t& k) {
    const auto br = q.breakpoints();
    while (k + 1 < q.piece_count() && br[k + 1] <= a) ++k;
    double s = 0.0;
    for (std::size_t j = k; j < q.piece_count() && br[j] < b; ++j) {
        const double l = std::max(a, br[j]), r = std::min(b, br[j + 1]);
        if (r > l) s += 0.5 * (q.on_piece(j, l) + q.on_piece(j, r)) * (r - l);
    }
    return s;
}

// Number of eigenvalues of tridiag(off, diag, off) strictly below x.
std::size_t sturm_count(const std::vector<double>& diag, double off2, double x) {
    std::size_t count = 0;
    double d = std::numeric_limits<double>::infinity();
    for (double a : diag) {
        d = (a - x) - off2 / d;
        if (d == 0.0) d = -std::numeric_limits<double>::min();
        if (d < 0.0) ++count;
    }
    return count;
}

// One inverse-iteration solve (T - shift) v = rhs by the Thomas recurrence.
void shifted_solve(const std::vector<double>& diag, double off, double shift,
                   std::vector<double>& v) {
    const std::size_t n = diag.size();
    std::vector<double> c(n);
    double d = diag[0] - shift;
    c[0] = off / d;
    v[0] /= d;
    for (std::size_t i = 1; i < n; ++i) {
        d = diag[i] - shift - off * c[i - 1];
        if (d == 0.0) d = std::numeric_limits<double>::epsilon() * std::abs(diag[i]);
        c[i] = off / d;
        v[i] = (v[i] - off * v[i - 1]) / d;
    }
    for (std::size_t i = n - 1; i-- > 0;) v[i] -= c[i] * v[i + 1];
    const double scale = *std::max_element(v.begin(), v.end(), [](double a, double b) {
        return std::abs(a) < std::abs(b);
    });
    for (double& x : v) x /= scale;
}

double fd_single(const Potential& q, std::size_t n) {
    const double h = 1.0 / static_cast<double>(n + 1);
    const double inv_h2 = 1.0 / (h * h);
    std::vector<double> qbar(n), diag(n);
    double qmin = 0.0;
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i + 1) * h;
        qbar[i] = integrate_q(q, x - 0.5 * h, x + 0.5 * h, cursor) / h;
        qmin = std::min(qmin, qbar[i]);
        diag[i] = 2.0 * inv_h2 + qbar[i];
    }
    const double off2 = inv_h2 * inv_h2;
    // The discrete Laplacian is positive definite with smallest eigenvalue below pi^2,
    // and q <= 0 only lowers it.
    double lo = qmin;
    double hi = pi * pi;
    while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (sturm_count(diag, off2, mid) >= 1 ? hi : lo) = mid;
    }

    // The count is exact only for a matrix perturbed by O(eps / h^2), so finish with the
    // Rayleigh quotient written in difference form, which carries no such cancellation.
    std::vector<double> v(n, 1.0);
    for (int it = 0; it < 2; ++it) shifted_solve(diag, -inv_h2, 0.5 * (lo + hi), v);
    long double num = 0.0L, den = 0.0L;
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const long double dv = v[i] - prev;
        num += dv * dv * inv_h2 + static_cast<long double>(qbar[i]) * v[i] * v[i];
        den += static_cast<long double>(v[i]) * v[i];
        prev = v[i];
    }
    num += static_cast<long double>(prev) * prev * inv_h2;
    return static_cast<double>(num / den);
}

} // namespace

double fd_ground_eigenvalue(const Potential& q, const FdConfig& cfg) {
    if (cfg.n < 16) throw DomainError("finite-difference grid needs n >= 16");
    const double coarse = fd_single(q, cfg.n);
    if (!cfg.extrapolate) return coarse;
    const double fine = fd_single(q, 2 * cfg.n + 1);
    return (4.0 * fine - coarse) / 3.0;
}

namespace {

struct Cell {
    double length;
    double depth;
};

std::vector<Cell> constant_cells(const Potential& q) {
    if (std::holds_alternative<shape::GridSampled>(q.repr())) {
        throw DomainError("transcendental matching needs a piecewise-constant potential");
    }
    const auto br = q.breakpoints();
    std::vector<Cell> cells;
    for (std::size_t k = 0; k < q.piece_count(); ++k) {
        cells.push_back({br[k + 1] - br[k], -q.on_piece(k, br[k])});
    }
    return cells;
}

// Scaled phase psi with tan(psi) = k y / y' on each cell; psi advances by k * length across a
// cell, and at an interface y and y' are continuous, so the angle is re-expressed for the new
// wavenumber within the same branch [m pi, (m+1) pi). y(1) = 0 on the first branch iff psi = pi.
double terminal_scaled_phase(const std::vector<Cell>& cells, double lambda) {
    double psi = 0.0;
    double k_prev = std::sqrt(lambda + cells.front().depth);
    for (const Cell& c : cells) {
        const double k = std::sqrt(lambda + c.depth);
        if (k != k_prev) {
            const double branch = std::floor(psi / pi);
            const double phi = psi - branch * pi;
            psi = branch * pi + std::atan2(k * std::sin(phi), k_prev * std::cos(phi));
        }
        psi += k * c.length;
        k_prev = k;
    }
    return psi;
}

} // namespace

double well_eigenvalue_transcendental(const Potential& q, double tol) {
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    const auto cells = constant_cells(q);
    double hi = pi * pi;
    double lo = std::max(1e-9, hi - q.max_abs());
    if (lo >= hi) return hi;
    if (lo == 1e-9 && terminal_scaled_phase(cells, lo) > pi) {
        throw OutOfPruferDomain("ground state outside Pruefer domain: no root of the matching "
                                "condition in (0, pi^2)");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (terminal_scaled_phase(cells, mid) < pi ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace slmaj
