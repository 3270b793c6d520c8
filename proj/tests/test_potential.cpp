#include <cmath>
#include <random>

#include "doctest.h"
#include "slmaj/errors.hpp"
#include "slmaj/potential.hpp"

using namespace slmaj;

TEST_CASE("pointwise evaluation") {
    CHECK(constant(-1.0)(0.3) == -1.0);
    const Potential w = single_well(0.5, 0.2, 10.0);
    CHECK(w(0.39) == 0.0);
    CHECK(w(0.41) == -10.0);
    CHECK(from_grid({0.0, 1.0}, {0.0, -2.0})(0.25) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK_THROWS_AS(w(1.5), DomainError);
    CHECK_THROWS_AS(w(-0.1), DomainError);
}

TEST_CASE("right-continuous at interior breakpoints") {
    const Potential p = piecewise_constant({0.0, 0.5, 1.0}, {-1.0, -3.0});
    CHECK(p(0.5) == -3.0);
    CHECK(p(1.0) == -3.0);
    CHECK(p.piece_count() == 2);
}

TEST_CASE("family constructors") {
    const Potential e = edge_wells(0.25, 3.0);
    CHECK(e(0.1) == -3.0);
    CHECK(e(0.5) == 0.0);
    CHECK(e(0.9) == -3.0);

    // Support clipped to [0, 1].
    const Potential clipped = single_well(0.05, 0.2, 2.0);
    CHECK(clipped(0.0) == -2.0);
    CHECK(clipped(0.14) == -2.0);
    CHECK(clipped(0.16) == 0.0);
    CHECK(clipped.l1_norm() == doctest::Approx(0.3));

    CHECK(constant(0.0).is_zero());
    CHECK_THROWS_AS(constant(1.0), DomainError);
    CHECK_THROWS_AS(piecewise_constant({0.0, 0.6, 0.4, 1.0}, {-1, -1, -1}), DomainError);
    CHECK_THROWS_AS(from_grid({0.0, 0.5}, {0.0, -1.0}), DomainError);
}

TEST_CASE("gamma exponent") {
    CHECK_THROWS_AS(GammaExponent(0.0), DomainError);
    CHECK_THROWS_AS(GammaExponent(-0.2), DomainError);
    CHECK_THROWS_AS(GammaExponent(std::nan("")), DomainError);
    CHECK(GammaExponent(0.45).in_chain_range());
    CHECK_FALSE(GammaExponent(0.5).in_chain_range());
}

TEST_CASE("gamma norm closed forms") {
    for (double g : {0.05, 0.2, 0.45, 0.7}) CHECK(gamma_norm(constant(-1.0), GammaExponent(g)) == doctest::Approx(1.0));
    CHECK(gamma_norm(piecewise_constant({0.0, 0.25, 1.0}, {-16.0, 0.0}), GammaExponent(0.5)) ==
          doctest::Approx(1.0).epsilon(1e-15));
    for (double g : {0.1, 0.3, 0.45}) {
        for (double w : {0.01, 0.05, 0.2, 0.4}) {
            const double depth = std::pow(2.0 * w, -1.0 / g);
            CHECK(gamma_norm(edge_wells(w, depth), GammaExponent(g)) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    // Grid: |q| = 2x on [0, 1], int (2x)^g = 2^g / (g + 1).
    const double g = 0.3;
    CHECK(gamma_norm(from_grid({0.0, 1.0}, {0.0, -2.0}), GammaExponent(g)) ==
          doctest::Approx(std::pow(2.0, g) / (g + 1.0)).epsilon(1e-10));
}

TEST_CASE("normalization") {
    const Potential n = normalize_to_admissible(constant(-4.0), GammaExponent(0.5));
    CHECK(n(0.5) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(normalize_to_admissible(constant(-1.0), GammaExponent(0.3))(0.2) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(normalize_to_admissible(constant(0.0), GammaExponent(0.3)), CannotNormalize);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> xs, qs;
        for (int i = 0; i <= 12; ++i) {
            xs.push_back(i / 12.0);
            qs.push_back(-u(rng));
        }
        const GammaExponent g(0.1 + 0.03 * trial);
        const Potential p = normalize_to_admissible(from_grid(xs, qs), g);
        CHECK(gamma_norm(p, g) == doctest::Approx(1.0).epsilon(1e-10));
        // Idempotent.
        const Potential again = normalize_to_admissible(p, g);
        CHECK(again(0.37) == doctest::Approx(p(0.37)).epsilon(1e-12));
    }
}

TEST_CASE("json round trip and diagnostics") {
    for (const Potential& p : {constant(-1.5), piecewise_constant({0.0, 0.3, 1.0}, {-2.0, -0.5}),
                               single_well(0.4, 0.3, 7.0), edge_wells(0.1, 4.0),
                               from_grid({0.0, 0.5, 1.0}, {-1.0, -3.0, 0.0})}) {
        const Potential back = potential_from_json(nlohmann::json::parse(to_json(p).dump()));
        CHECK(back.kind() == p.kind());
        for (double x : {0.0, 0.13, 0.3, 0.55, 0.99, 1.0}) CHECK(back(x) == p(x));
    }
    CHECK_THROWS_AS(potential_from_json(nlohmann::json{{"type", "bogus"}}), DomainError);
    CHECK_THROWS_AS(potential_from_json(nlohmann::json{{"type", "well"}, {"center", 0.5}}), DomainError);
    CHECK_THROWS_AS(potential_from_json(nlohmann::json::array()), DomainError);
    CHECK_THROWS_AS(potential_from_json(nlohmann::json{{"type", "constant"}, {"value", "x"}}), DomainError);
}

TEST_CASE("scaling is homogeneous in the gamma norm") {
    const Potential p = single_well(0.3, 0.25, 6.0);
    const GammaExponent g(0.35);
    CHECK(gamma_norm(p.scaled(2.0), g) == doctest::Approx(std::pow(2.0, 0.35) * gamma_norm(p, g)));
}
