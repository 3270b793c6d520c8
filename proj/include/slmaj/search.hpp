#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "slmaj/potential.hpp"
#include "slmaj/prufer.hpp"

namespace slmaj {

struct TraceEntry {
    std::size_t iteration = 0;
    double objective = 0.0;
    /// Accepted step length for ascent; the scanned parameter (width) for family scans.
    double step = 0.0;
    /// |gamma_norm - 1| of the evaluated potential.
    double constraint_residual = 0.0;
    /// "prufer", or "fd" when the ground state left the Pruefer domain.
    std::string evaluator = "prufer";
    std::string label;
};

struct SearchResult {
    double gamma = 0.0;
    Potential best_potential = constant(-1.0);
    double lower = 0.0;
    std::string strategy;
    std::uint64_t seed = 0;
    std::vector<TraceEntry> trace;
};

/// d lambda0 / d v_i = -int_{cell i} y^2 dx / int_0^1 y^2 dx for cell depths v_i = |q|.
/// cell_edges: 0 = c_0 < ... < c_n = 1. Entries are <= 0 and sum to -1.
std::vector<double> eigen_gradient(const EigenSolution& e, std::span<const double> cell_edges);

struct AscentOptions {
    EigenOptions eigen{};
    double initial_step = 0.5;
    double min_step = 1.0 / 1024;
    double rel_stop = 1e-9;
    /// Concentration of the symmetric Dirichlet draw for the starting cell weights.
    double dirichlet_alpha = 1.0;
};

/// Gradient ascent of lambda0 over piecewise-constant potentials on n_cells equal cells, kept on
/// the constraint set by rescaling after every step. Deterministic for a given seed.
SearchResult projected_ascent(GammaExponent g, std::size_t n_cells, std::uint64_t seed,
                              std::size_t budget, const AscentOptions& options = {});

enum class Family { Constant, SingleWell, EdgeWells };
std::string_view to_string(Family f);

struct FamilyGrid {
    /// Well widths (single_well, edge_wells).
    std::vector<double> widths;
    /// Well centers (single_well only); the scan visits centers x widths.
    std::vector<double> centers{0.5};
};

FamilyGrid default_grid(Family f);

/// Normalizes each member to unit gamma-norm and keeps the one with the largest lambda0.
/// Members with lambda0 below the Pruefer floor are evaluated by the finite-difference oracle.
SearchResult family_scan(GammaExponent g, Family family, const FamilyGrid& grid);

/// Best of the three family scans and projected ascent from seeds 1..n_seeds (16 cells).
SearchResult lower_bound(GammaExponent g, std::size_t budget, std::size_t n_seeds = 8,
                         const AscentOptions& options = {});

nlohmann::json to_json(const SearchResult& r);
SearchResult search_result_from_json(const nlohmann::json& j);

} // namespace slmaj
