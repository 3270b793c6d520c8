#pragma once

#include <cstddef>

#include "slmaj/potential.hpp"

namespace slmaj {

struct FdConfig {
    /// Interior grid points; the mesh width is 1 / (n + 1).
    std::size_t n = 10000;
    /// Combine n and the exactly halved mesh (2n + 1 interior points) as (4 L_fine - L_coarse) / 3.
    bool extrapolate = false;
};

/// Smallest eigenvalue of the central-difference discretization of -y'' + q y with Dirichlet
/// rows eliminated. q enters as its exact average over each node's control volume.
/// Located by Sturm-sequence counting and bisection down to adjacent doubles.
double fd_ground_eigenvalue(const Potential& q, const FdConfig& cfg = {});

/// Ground eigenvalue of a piecewise-constant potential from the exact trigonometric solution on
/// each cell, matched by continuity of y and y' at the interfaces. Accepts Constant,
/// PiecewiseConstant, Well and EdgeWells. Throws OutOfPruferDomain when the ground state is not
/// in (0, pi^2], DomainError for grid-sampled input.
double well_eigenvalue_transcendental(const Potential& q, double tol = 1e-12);

} // namespace slmaj
