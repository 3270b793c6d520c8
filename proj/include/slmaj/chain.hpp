#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "slmaj/potential.hpp"
#include "slmaj/prufer.hpp"

namespace slmaj {

/// int_0^m sin^(-2 gamma)(x) dx for 0 <= m <= pi, 0 < gamma < 1/2.
/// Half-interval [0, pi/2] handled by u = x^(1 - 2 gamma), which removes the endpoint
/// singularity; the upper half follows by symmetry of sin about pi/2.
double incomplete_sine_integral(double m, GammaExponent g);

struct ChainPreconditions {
    bool lambda_above_shifted = false; // lambda0 > (pi - eps)^2
    bool lambda_above_four = false;    // lambda0 > 4
    bool mu_below_pi = false;          // mu(eps) < pi
    bool all() const noexcept { return lambda_above_shifted && lambda_above_four && mu_below_pi; }
};

/// Every quantity of the phase-flow estimate chain for one (q, gamma, eps).
struct ChainReport {
    double gamma = 0.0;
    double epsilon = 0.0;
    double lambda0 = 0.0;
    double threshold_t = 0.0;
    double mu = 0.0;
    double lebesgue_measure_E = 0.0;
    double phase_measure_E = 0.0;
    double J_E = 0.0;
    double J_C = 0.0;
    double sine_cap_E = 0.0;
    double sine_cap_total = 0.0;
    double defect = 0.0;
    double gamma_norm_direct = 0.0;
    double gamma_norm_via_phase = 0.0;
    double final_bound = 0.0;
    /// Named inequality residuals; nonnegative means the inequality holds.
    std::vector<std::pair<std::string, double>> slacks;
    ChainPreconditions preconditions_met;

    /// E_eps as disjoint intervals [a, b] in x.
    std::vector<std::pair<double, double>> E_intervals;
    /// Smallest lambda0 + sigma - 2 sqrt(lambda0) sigma^gamma over the grid, both one-sided
    /// limits at breakpoints.
    double am_gm_min_slack = 0.0;
    std::size_t am_gm_violations = 0;
    std::size_t grid_nodes = 0;

    double slack(const std::string& name) const;
};

/// pi - sqrt(lambda0), scaled by 1.01: the default eps, the smallest that satisfies the strict
/// precondition with 1% headroom.
double default_epsilon(double lambda0);

/// DomainError if gamma is outside (0, 1/2) or eps <= 0. Preconditions are recorded, not required.
ChainReport build_report(const EigenSolution& e, GammaExponent g, double epsilon);
ChainReport build_report(const EigenSolution& e, GammaExponent g);

struct CheckVerdict {
    std::string name;
    double slack = 0.0;
    bool passed = false;
};

enum class ChainStatus { AllPass, Violations, NotApplicable };

struct ChainVerdict {
    ChainStatus status = ChainStatus::NotApplicable;
    /// Empty when not applicable.
    std::vector<CheckVerdict> checks;
    /// Preconditions met, unit gamma-norm and final_bound < 1: the chain refutes q in A_gamma.
    bool contradiction = false;
};

ChainVerdict verify(const ChainReport& r, double tol = 1e-6);

std::string_view to_string(ChainStatus s);

nlohmann::json to_json(const ChainReport& r);
ChainReport chain_report_from_json(const nlohmann::json& j);

} // namespace slmaj
