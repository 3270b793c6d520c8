#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "slmaj/potential.hpp"

namespace slmaj {

/// Settings for the adaptive Dormand-Prince integration of the phase flow.
struct IntegrationControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    /// Upper bound on accepted step length; also the sampling density of recorded output.
    double max_step = 1.0;
    double min_step = 1e-14;
};

/// Phase  theta' = sqrt(lambda) + |q| sin^2(theta) / sqrt(lambda),  theta(0) = 0,
/// sampled at the accepted steps of the integrator. Breakpoints of q are always nodes.
struct PhaseTrajectory {
    double lambda = 0.0;
    std::vector<double> nodes;
    std::vector<double> theta;
    /// Right-sided derivative at interior nodes, left-sided at x = 1.
    std::vector<double> theta_prime;
};

/// Lowest Dirichlet eigenpair in Pruefer form:
///   y = rho sin(theta),  y' / sqrt(lambda0) = rho cos(theta),  sigma = |q| sin^2(theta).
/// The eigenfunction is scaled so that max |y| over the grid is 1.
struct EigenSolution {
    explicit EigenSolution(Potential q) : potential(std::move(q)) {}

    Potential potential;
    double lambda0 = 0.0;
    std::vector<double> grid;
    std::vector<double> y;
    std::vector<double> y_prime;
    std::vector<double> theta;
    std::vector<double> rho;
    std::vector<double> sigma;
    /// Width of the final eigenvalue bracket.
    double solver_tolerance = 0.0;
};

struct EigenOptions {
    /// Bisection stops once the bracket is at most this wide.
    double tol = 1e-10;
    /// Lower end of the initial bracket never drops below this.
    double positive_floor = 1e-4;
    IntegrationControl bisection_control{};
    /// Control for the final recorded integration at the bracket midpoint.
    IntegrationControl output_control{1e-11, 1e-13, 1.0 / 2048, 1e-14};
};

PhaseTrajectory integrate_phase(const Potential& q, double lambda,
                                const IntegrationControl& control = {});

/// theta(1; lambda). Strictly increasing in lambda.
double terminal_phase(const Potential& q, double lambda, const IntegrationControl& control = {});

/// Bisection on theta(1; lambda) = pi over [max(floor, pi^2 - max|q|), pi^2].
/// Throws OutOfPruferDomain when the phase already exceeds pi at the lower end.
EigenSolution eigenvalue_dirichlet(const Potential& q, const EigenOptions& options = {});
EigenSolution eigenvalue_dirichlet(const Potential& q, double tol);

/// Eigenvalue only (skips the recorded output integration).
double ground_eigenvalue(const Potential& q, const EigenOptions& options = {});

/// int_0^1 sigma theta' / (lambda0 + sigma) dx. Equals pi - sqrt(lambda0) in exact arithmetic.
double phase_defect(const EigenSolution& e);

/// Smooth evaluation of a solution between grid nodes: cubic Hermite interpolation of theta and
/// log rho with end derivatives taken from the flow on the cell's potential piece.
class PhaseInterpolant {
public:
    explicit PhaseInterpolant(const EigenSolution& e);

    std::size_t cell_count() const noexcept { return e_.grid.size() - 1; }
    double left(std::size_t c) const noexcept { return e_.grid[c]; }
    double right(std::size_t c) const noexcept { return e_.grid[c + 1]; }
    std::size_t piece(std::size_t c) const noexcept { return piece_[c]; }

    double q(std::size_t c, double x) const noexcept;
    double theta(std::size_t c, double x) const noexcept;
    /// Derivative of the interpolant (not the flow right-hand side).
    double theta_prime(std::size_t c, double x) const noexcept;
    double sigma(std::size_t c, double x) const noexcept;
    double y(std::size_t c, double x) const noexcept;

    /// sigma at the ends of cell c, as limits from inside the cell.
    double sigma_left(std::size_t c) const noexcept;
    double sigma_right(std::size_t c) const noexcept;

    const EigenSolution& solution() const noexcept { return e_; }

private:
    double flow_theta_prime(std::size_t c, double x, double th) const noexcept;
    double flow_log_rho_prime(std::size_t c, double x, double th) const noexcept;

    const EigenSolution& e_;
    double sqrt_lambda_;
    std::vector<std::size_t> piece_;
    std::vector<double> log_rho_;
};

} // namespace slmaj
