#include <cmath>
#include <numbers>

#include "doctest.h"
#include "slmaj/errors.hpp"
#include "slmaj/oracles.hpp"
#include "slmaj/prufer.hpp"

using namespace slmaj;
using std::numbers::pi;

// Roots of the symmetric matching conditions, solved independently in 40-digit arithmetic:
//   single well(0.5, 0.2, 10):  k cot(0.4 k) = K tan(0.1 K)
//   edge wells(0.1, 5):         K cot(0.1 K) = k tan(0.4 k)
// with k = sqrt(lambda), K = sqrt(lambda + depth).
constexpr double well_reference = 5.8201893809658691808;
constexpr double edge_reference = 9.8041505933668836496;

TEST_CASE("finite differences on closed forms") {
    CHECK(std::abs(fd_ground_eigenvalue(constant(0.0)) - pi * pi) <= 1e-6);
    CHECK(std::abs(fd_ground_eigenvalue(constant(0.0), FdConfig{10000, true}) - pi * pi) <= 1e-9);
    CHECK(std::abs(fd_ground_eigenvalue(constant(-1.0)) - (pi * pi - 1.0)) <= 1e-6);
    // Discrete Laplacian eigenvalue on n interior points, h = 1 / (n + 1).
    const std::size_t n = 200;
    const double h = 1.0 / (n + 1);
    const double discrete = 4.0 / (h * h) * std::pow(std::sin(pi * h / 2), 2);
    CHECK(fd_ground_eigenvalue(constant(0.0), FdConfig{n, false}) == doctest::Approx(discrete).epsilon(1e-13));
    CHECK_THROWS_AS(fd_ground_eigenvalue(constant(0.0), FdConfig{8, false}), DomainError);
}

TEST_CASE("finite differences reach negative eigenvalues") {
    CHECK(fd_ground_eigenvalue(constant(-30.0), FdConfig{4000, true}) == doctest::Approx(pi * pi - 30.0).epsilon(1e-9));
}

TEST_CASE("transcendental matching") {
    CHECK(well_eigenvalue_transcendental(single_well(0.5, 0.2, 0.0)) == doctest::Approx(pi * pi).epsilon(1e-12));
    CHECK(std::abs(well_eigenvalue_transcendental(single_well(0.5, 1.0, 1.0)) - (pi * pi - 1.0)) <= 1e-10);
    CHECK(std::abs(well_eigenvalue_transcendental(single_well(0.5, 0.2, 10.0)) - well_reference) <= 1e-10);
    CHECK(std::abs(well_eigenvalue_transcendental(edge_wells(0.1, 5.0)) - edge_reference) <= 1e-10);
    CHECK_THROWS_AS(well_eigenvalue_transcendental(single_well(0.5, 0.2, 500.0)), OutOfPruferDomain);
    CHECK_THROWS_AS(well_eigenvalue_transcendental(from_grid({0, 1}, {0, -1})), DomainError);
}

TEST_CASE("three oracles agree") {
    const Potential q = single_well(0.5, 0.2, 10.0);
    CHECK(std::abs(fd_ground_eigenvalue(q, FdConfig{20000, true}) - well_reference) <= 1e-7);
    CHECK(std::abs(ground_eigenvalue(q) - well_reference) <= 1e-8);
    CHECK(std::abs(ground_eigenvalue(edge_wells(0.1, 5.0)) - edge_reference) <= 1e-8);

    const double g = 0.4;
    const Potential e = edge_wells(0.05, std::pow(0.1, -1.0 / g));
    CHECK(std::abs(fd_ground_eigenvalue(e, FdConfig{10000, true}) - ground_eigenvalue(e)) <= 1e-5);
}
