#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "slmaj/potential.hpp"

namespace slmaj {

/// 113-bit significand; U(gamma) sits within ~1e-26 of pi^2 on parts of (0, 1/2).
using quad = boost::multiprecision::cpp_bin_float_quad;

/// (pi^2 + 2) / (1 - 2 gamma) * eps^((1 - 2 gamma) gamma / (1 - gamma)).
/// DomainError unless 0 < gamma < 1/2 and eps >= 0.
double final_bound_constant(GammaExponent g, double epsilon);

/// pi^2 eps^(gamma / (1 - gamma)) + eps
double mu_of_epsilon(GammaExponent g, double epsilon);

/// eps^((1 - 2 gamma) / (1 - gamma)), the threshold defining the set E_eps.
double sigma_threshold(GammaExponent g, double epsilon);

/// Root of final_bound_constant(g, eps) = 1 in closed form, evaluated as exp of its logarithm.
quad epsilon_star_exact(GammaExponent g);
double epsilon_star(GammaExponent g);

/// Independent route: bisection on log(eps) for final_bound_constant(g, eps) - 1 = 0.
double epsilon_star_by_root(GammaExponent g, double rel_tol = 1e-13);

/// Root of mu(eps) = pi.
double epsilon_mu_cap(GammaExponent g);

enum class ActiveCap { EpsStar, MuCap, Headroom };
std::string_view to_string(ActiveCap c);

struct BoundResult {
    double gamma = 0.0;
    double eps_star = 0.0;
    double eps_mu_cap = 0.0;
    /// pi - 2 - 1e-6, which keeps (pi - eps)^2 > 4.
    double eps_headroom_cap = 0.0;
    double eps_effective = 0.0;
    /// U(gamma) = (pi - eps_effective)^2 in extended precision.
    quad upper;
    /// pi^2 - U(gamma) = eps_effective (2 pi - eps_effective), exact enough to print.
    double upper_deficit = 0.0;
    ActiveCap active = ActiveCap::EpsStar;
};

/// Explicit majorant U(gamma) < pi^2 extracted from the final estimate.
BoundResult upper_bound(GammaExponent g);

enum class RegimeClass { EqualityPi2, StrictPrior, StrictThisWork };
std::string_view to_string(RegimeClass c);

struct ReferenceFacts {
    RegimeClass regime;
    std::string citation;
};

/// gamma >= 1/2: M = pi^2. gamma < 1/3: strict, known earlier. 1/3 <= gamma < 1/2: strict, via
/// the estimate chain implemented here.
ReferenceFacts reference_facts(GammaExponent g);

struct BoundCurveRow {
    double gamma = 0.0;
    std::optional<double> lower;
    std::optional<quad> upper;
    std::optional<double> eps_star;
    std::string flags;
};

/// Rows sorted by gamma.
struct BoundCurve {
    std::vector<BoundCurveRow> rows;

    /// Throws std::logic_error when rows are unsorted or lower > upper + 1e-9 somewhere.
    void check_invariants() const;
};

quad pi_squared_quad();
/// Decimal string with 36 significant digits.
std::string to_decimal(const quad& v);

} // namespace slmaj
