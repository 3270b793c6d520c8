#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace slmaj {

/// Exponent of the constraint functional  int_0^1 |q|^gamma dx.
/// Only positivity is enforced here; the estimate chain additionally needs gamma < 1/2
/// and checks that where it is used.
class GammaExponent {
public:
    explicit GammaExponent(double gamma);
    double value() const noexcept { return gamma_; }
    bool in_chain_range() const noexcept { return gamma_ < 0.5; }

private:
    double gamma_;
};

namespace shape {
struct Constant {
    double value;
};
struct PiecewiseConstant {
    std::vector<double> breakpoints;
    std::vector<double> values;
};
// q = -depth on [center - width/2, center + width/2] intersected with [0,1].
struct Well {
    double center;
    double width;
    double depth;
};
// q = -depth on [0, width] and [1 - width, 1].
struct EdgeWells {
    double width;
    double depth;
};
// Linear interpolation between samples.
struct GridSampled {
    std::vector<double> abscissae;
    std::vector<double> ordinates;
};
} // namespace shape

/// Nonpositive potential on [0,1].
///
/// Every representation is stored alongside a normalized piecewise-linear view:
/// breakpoints 0 = b_0 < ... < b_m = 1 and, on piece k, q(x) = a_k + s_k (x - b_k).
/// The solvers only talk to the piecewise view; the tagged representation is kept
/// for serialization and for the closed-form gamma-norm.
class Potential {
public:
    using Repr = std::variant<shape::Constant, shape::PiecewiseConstant, shape::Well,
                              shape::EdgeWells, shape::GridSampled>;

    explicit Potential(Repr repr);

    const Repr& repr() const noexcept { return repr_; }
    std::string_view kind() const noexcept;

    /// Pointwise value, right-continuous at interior breakpoints. Throws DomainError
    /// outside [0,1].
    double operator()(double x) const;

    /// 0 = b_0 < b_1 < ... < b_m = 1. q is affine on each [b_k, b_{k+1}].
    std::span<const double> breakpoints() const noexcept { return breaks_; }
    std::size_t piece_count() const noexcept { return offsets_.size(); }
    std::size_t piece_at(double x) const noexcept;
    /// The affine formula of piece k, evaluated anywhere (used for one-sided limits).
    double on_piece(std::size_t k, double x) const noexcept {
        return offsets_[k] + slopes_[k] * (x - breaks_[k]);
    }
    bool piece_is_constant(std::size_t k) const noexcept { return slopes_[k] == 0.0; }

    double max_abs() const noexcept;
    /// int_0^1 |q| dx
    double l1_norm() const noexcept;
    bool is_zero() const noexcept { return max_abs() == 0.0; }

    /// s * q for s >= 0, representation tag preserved.
    Potential scaled(double s) const;

private:
    void build_pieces();

    Repr repr_;
    std::vector<double> breaks_;
    std::vector<double> offsets_;
    std::vector<double> slopes_;
};

// Family constructors.
Potential constant(double value);
Potential piecewise_constant(std::vector<double> breakpoints, std::vector<double> values);
Potential single_well(double center, double width, double depth);
Potential edge_wells(double width, double depth);
Potential from_grid(std::vector<double> xs, std::vector<double> qs);

/// int_0^1 |q(x)|^gamma dx. Closed form for piecewise-constant shapes, adaptive
/// tanh-sinh quadrature per linear piece for grid samples.
double gamma_norm(const Potential& q, GammaExponent g);

/// s * q with s = gamma_norm(q)^(-1/gamma), so the result has unit gamma-norm.
/// Throws CannotNormalize for the zero potential.
Potential normalize_to_admissible(const Potential& q, GammaExponent g);

// JSON schema: {"type": "constant"|"piecewise"|"well"|"edge_wells"|"grid", ...}.
nlohmann::json to_json(const Potential& q);
/// Throws DomainError with a schema diagnostic on malformed input.
Potential potential_from_json(const nlohmann::json& j);

} // namespace slmaj
