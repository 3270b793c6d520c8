#include "slmaj/prufer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dopri5.hpp"
#include "quadrature.hpp"
#include "slmaj/errors.hpp"

namespace slmaj {

namespace {

using std::numbers::pi;

detail::StepControl to_step_control(const IntegrationControl& c) {
    if (!(c.rel_tol > 0.0) || !(c.abs_tol > 0.0) || !(c.max_step > 0.0) || !(c.min_step > 0.0)) {
        throw DomainError("integration control values must be positive");
    }
    return {c.rel_tol, c.abs_tol, c.max_step, c.min_step};
}

void require_positive_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("spectral parameter lambda must be positive");
    }
}

// theta' and (log rho)' on one affine piece of q.
struct PieceFlow {
    const Potential& q;
    std::size_t piece;
    double sqrt_lambda;

    double theta_prime(double x, double th) const {
        const double s = std::sin(th);
        return sqrt_lambda - q.on_piece(piece, x) * s * s / sqrt_lambda;
    }
    double log_rho_prime(double x, double th) const {
        return q.on_piece(piece, x) / sqrt_lambda * std::sin(th) * std::cos(th);
    }
};

template <class OnStep, class Stop>
double run_phase(const Potential& q, double lambda, const IntegrationControl& control,
                 OnStep&& on_step, Stop&& stop) {
    const auto sc = to_step_control(control);
    const double sl = std::sqrt(lambda);
    const auto br = q.breakpoints();
    detail::State<1> state{0.0};
    double h = std::min(0.01, control.max_step);
    for (std::size_t k = 0; k < q.piece_count(); ++k) {
        const PieceFlow flow{q, k, sl};
        auto rhs = [&](double x, const detail::State<1>& y, detail::State<1>& dy) {
            dy[0] = flow.theta_prime(x, y[0]);
        };
        auto step = [&](double x, const detail::State<1>& y) { on_step(k, x, y[0]); };
        if (!detail::dopri5_stretch<1>(rhs, br[k], br[k + 1], state, h, sc, step,
                                       [&](const detail::State<1>& y) { return stop(y[0]); })) {
            break;
        }
    }
    return state[0];
}

} // namespace

PhaseTrajectory integrate_phase(const Potential& q, double lambda, const IntegrationControl& control) {
    require_positive_lambda(lambda);
    PhaseTrajectory t;
    t.lambda = lambda;
    const double sl = std::sqrt(lambda);
    t.nodes.push_back(0.0);
    t.theta.push_back(0.0);
    t.theta_prime.push_back(PieceFlow{q, 0, sl}.theta_prime(0.0, 0.0));
    run_phase(
        q, lambda, control,
        [&](std::size_t k, double x, double th) {
            // At a breakpoint record the derivative of the piece that starts there.
            const std::size_t next = (x == q.breakpoints()[k + 1] && k + 1 < q.piece_count()) ? k + 1 : k;
            t.nodes.push_back(x);
            t.theta.push_back(th);
            t.theta_prime.push_back(PieceFlow{q, next, sl}.theta_prime(x, th));
        },
        [](double) { return false; });
    return t;
}

double terminal_phase(const Potential& q, double lambda, const IntegrationControl& control) {
    require_positive_lambda(lambda);
    return run_phase(q, lambda, control, [](std::size_t, double, double) {},
                     [](double) { return false; });
}

namespace {

// True when theta(1; lambda) < pi, i.e. lambda lies below the ground eigenvalue.
// The phase is increasing in x, so integration stops as soon as it passes pi.
bool below_ground_state(const Potential& q, double lambda, const IntegrationControl& control) {
    const double th = run_phase(q, lambda, control, [](std::size_t, double, double) {},
                                [](double t) { return t > pi; });
    return th < pi;
}

struct Bracket {
    double lo, hi;
};

Bracket bracket_ground_state(const Potential& q, const EigenOptions& opt) {
    if (!(opt.tol > 0.0)) throw DomainError("eigenvalue tolerance must be positive");
    if (!(opt.positive_floor > 0.0)) throw DomainError("positive floor must be positive");
    double hi = pi * pi;
    double lo = std::max(opt.positive_floor, hi - q.max_abs());
    if (lo >= hi) return {hi, hi};
    // pi^2 - max|q| is a lower bound by comparison with the constant potential; only the
    // positive floor needs checking.
    if (lo == opt.positive_floor && !below_ground_state(q, lo, opt.bisection_control)) {
        std::ostringstream os;
        os << "ground eigenvalue is below " << lo
           << ": outside the Pruefer domain, use the finite-difference oracle";
        throw OutOfPruferDomain(os.str());
    }
    while (hi - lo > opt.tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (below_ground_state(q, mid, opt.bisection_control) ? lo : hi) = mid;
    }
    return {lo, hi};
}

} // namespace

double ground_eigenvalue(const Potential& q, const EigenOptions& options) {
    const auto b = bracket_ground_state(q, options);
    return 0.5 * (b.lo + b.hi);
}

EigenSolution eigenvalue_dirichlet(const Potential& q, double tol) {
    EigenOptions opt;
    opt.tol = tol;
    return eigenvalue_dirichlet(q, opt);
}

EigenSolution eigenvalue_dirichlet(const Potential& q, const EigenOptions& options) {
    const auto b = bracket_ground_state(q, options);
    EigenSolution e{q};
    e.lambda0 = 0.5 * (b.lo + b.hi);
    e.solver_tolerance = b.hi - b.lo;

    const double sl = std::sqrt(e.lambda0);
    const auto sc = to_step_control(options.output_control);
    const auto br = q.breakpoints();
    std::vector<double> log_rho{0.0};
    e.grid.push_back(0.0);
    e.theta.push_back(0.0);
    detail::State<2> state{0.0, 0.0};
    double h = std::min(0.01, options.output_control.max_step);
    for (std::size_t k = 0; k < q.piece_count(); ++k) {
        const PieceFlow flow{q, k, sl};
        auto rhs = [&](double x, const detail::State<2>& s, detail::State<2>& ds) {
            ds[0] = flow.theta_prime(x, s[0]);
            ds[1] = flow.log_rho_prime(x, s[0]);
        };
        auto record = [&](double x, const detail::State<2>& s) {
            e.grid.push_back(x);
            e.theta.push_back(s[0]);
            log_rho.push_back(s[1]);
        };
        detail::dopri5_stretch<2>(rhs, br[k], br[k + 1], state, h, sc, record,
                                  [](const detail::State<2>&) { return false; });
    }

    const std::size_t n = e.grid.size();
    e.y.resize(n);
    e.y_prime.resize(n);
    e.rho.resize(n);
    e.sigma.resize(n);
    double ymax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        e.rho[i] = std::exp(log_rho[i]);
        ymax = std::max(ymax, std::abs(e.rho[i] * std::sin(e.theta[i])));
    }
    for (std::size_t i = 0; i < n; ++i) {
        e.rho[i] /= ymax;
        const double s = std::sin(e.theta[i]);
        e.y[i] = e.rho[i] * s;
        e.y_prime[i] = sl * e.rho[i] * std::cos(e.theta[i]);
        e.sigma[i] = std::abs(q(e.grid[i])) * s * s;
    }
    return e;
}

PhaseInterpolant::PhaseInterpolant(const EigenSolution& e)
    : e_(e), sqrt_lambda_(std::sqrt(e.lambda0)) {
    const std::size_t cells = e.grid.size() - 1;
    piece_.resize(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        piece_[c] = e.potential.piece_at(0.5 * (e.grid[c] + e.grid[c + 1]));
    }
    log_rho_.resize(e.rho.size());
    std::transform(e.rho.begin(), e.rho.end(), log_rho_.begin(), [](double r) { return std::log(r); });
}

double PhaseInterpolant::q(std::size_t c, double x) const noexcept {
    return std::min(0.0, e_.potential.on_piece(piece_[c], x));
}

double PhaseInterpolant::flow_theta_prime(std::size_t c, double x, double th) const noexcept {
    const double s = std::sin(th);
    return sqrt_lambda_ - q(c, x) * s * s / sqrt_lambda_;
}

double PhaseInterpolant::flow_log_rho_prime(std::size_t c, double x, double th) const noexcept {
    return q(c, x) / sqrt_lambda_ * std::sin(th) * std::cos(th);
}

namespace {

struct Hermite {
    double h, t;
    double value(double y0, double y1, double d0, double d1) const {
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
               (t3 - t2) * h * d1;
    }
    double derivative(double y0, double y1, double d0, double d1) const {
        const double t2 = t * t;
        return ((6 * t2 - 6 * t) * y0 + (-6 * t2 + 6 * t) * y1) / h + (3 * t2 - 4 * t + 1) * d0 +
               (3 * t2 - 2 * t) * d1;
    }
};

} // namespace

double PhaseInterpolant::theta(std::size_t c, double x) const noexcept {
    const double a = left(c), b = right(c);
    const double t0 = e_.theta[c], t1 = e_.theta[c + 1];
    const Hermite H{b - a, (x - a) / (b - a)};
    return H.value(t0, t1, flow_theta_prime(c, a, t0), flow_theta_prime(c, b, t1));
}

double PhaseInterpolant::theta_prime(std::size_t c, double x) const noexcept {
    const double a = left(c), b = right(c);
    const double t0 = e_.theta[c], t1 = e_.theta[c + 1];
    const Hermite H{b - a, (x - a) / (b - a)};
    return H.derivative(t0, t1, flow_theta_prime(c, a, t0), flow_theta_prime(c, b, t1));
}

double PhaseInterpolant::sigma(std::size_t c, double x) const noexcept {
    const double s = std::sin(theta(c, x));
    return -q(c, x) * s * s;
}

double PhaseInterpolant::y(std::size_t c, double x) const noexcept {
    const double a = left(c), b = right(c);
    const double t0 = e_.theta[c], t1 = e_.theta[c + 1];
    const Hermite H{b - a, (x - a) / (b - a)};
    const double lr = H.value(log_rho_[c], log_rho_[c + 1], flow_log_rho_prime(c, a, t0),
                              flow_log_rho_prime(c, b, t1));
    return std::exp(lr) * std::sin(theta(c, x));
}

double PhaseInterpolant::sigma_left(std::size_t c) const noexcept {
    const double s = std::sin(e_.theta[c]);
    return -q(c, left(c)) * s * s;
}

double PhaseInterpolant::sigma_right(std::size_t c) const noexcept {
    const double s = std::sin(e_.theta[c + 1]);
    return -q(c, right(c)) * s * s;
}

double phase_defect(const EigenSolution& e) {
    const PhaseInterpolant pi_(e);
    const double lambda = e.lambda0;
    double total = 0.0;
    for (std::size_t c = 0; c < pi_.cell_count(); ++c) {
        total += detail::gauss_legendre(pi_.left(c), pi_.right(c), [&](double x) {
            const double s = pi_.sigma(c, x);
            return s * pi_.theta_prime(c, x) / (lambda + s);
        });
    }
    return total;
}

} // namespace slmaj
