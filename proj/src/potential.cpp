#include "slmaj/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "slmaj/errors.hpp"

namespace slmaj {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

void require_finite_nonpositive(double v, const char* what) {
    require(std::isfinite(v), std::string(what) + " must be finite");
    require(v <= 0.0, std::string(what) + " must be <= 0");
}

void require_partition(const std::vector<double>& xs, const char* what) {
    require(xs.size() >= 2, std::string(what) + " needs at least two entries");
    require(xs.front() == 0.0 && xs.back() == 1.0,
            std::string(what) + " must start at 0 and end at 1");
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        require(std::isfinite(xs[i + 1]) && xs[i] < xs[i + 1],
                std::string(what) + " must be strictly increasing");
    }
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

GammaExponent::GammaExponent(double gamma) : gamma_(gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw DomainError("gamma must be a finite positive number");
    }
}

Potential::Potential(Repr repr) : repr_(std::move(repr)) {
    std::visit(
        overloaded{
            [](const shape::Constant& c) { require_finite_nonpositive(c.value, "constant value"); },
            [](const shape::PiecewiseConstant& p) {
                require_partition(p.breakpoints, "piecewise breakpoints");
                require(p.values.size() + 1 == p.breakpoints.size(),
                        "piecewise needs one value per cell");
                for (double v : p.values) require_finite_nonpositive(v, "piecewise value");
            },
            [](const shape::Well& w) {
                require(w.center > 0.0 && w.center < 1.0, "well center must lie in (0,1)");
                require(std::isfinite(w.width) && w.width > 0.0, "well width must be > 0");
                require(std::isfinite(w.depth) && w.depth >= 0.0,
                        "well depth must be finite and >= 0");
            },
            [](const shape::EdgeWells& w) {
                require(w.width > 0.0 && w.width < 0.5, "edge well width must lie in (0, 1/2)");
                require(std::isfinite(w.depth) && w.depth >= 0.0,
                        "edge well depth must be finite and >= 0");
            },
            [](const shape::GridSampled& g) {
                require_partition(g.abscissae, "grid abscissae");
                require(g.ordinates.size() == g.abscissae.size(),
                        "grid needs one ordinate per abscissa");
                for (double v : g.ordinates) require_finite_nonpositive(v, "grid ordinate");
            },
        },
        repr_);
    build_pieces();
}

void Potential::build_pieces() {
    breaks_.clear();
    offsets_.clear();
    slopes_.clear();
    auto add_const = [this](double x0, double v) {
        breaks_.push_back(x0);
        offsets_.push_back(v);
        slopes_.push_back(0.0);
    };
    std::visit(overloaded{
                   [&](const shape::Constant& c) { add_const(0.0, c.value); },
                   [&](const shape::PiecewiseConstant& p) {
                       for (std::size_t k = 0; k < p.values.size(); ++k) {
                           add_const(p.breakpoints[k], p.values[k]);
                       }
                   },
                   [&](const shape::Well& w) {
                       const double a = std::max(0.0, w.center - 0.5 * w.width);
                       const double b = std::min(1.0, w.center + 0.5 * w.width);
                       if (a > 0.0) add_const(0.0, 0.0);
                       add_const(a, -w.depth);
                       if (b < 1.0) add_const(b, 0.0);
                   },
                   [&](const shape::EdgeWells& w) {
                       add_const(0.0, -w.depth);
                       add_const(w.width, 0.0);
                       add_const(1.0 - w.width, -w.depth);
                   },
                   [&](const shape::GridSampled& g) {
                       for (std::size_t k = 0; k + 1 < g.abscissae.size(); ++k) {
                           const double dx = g.abscissae[k + 1] - g.abscissae[k];
                           breaks_.push_back(g.abscissae[k]);
                           offsets_.push_back(g.ordinates[k]);
                           slopes_.push_back((g.ordinates[k + 1] - g.ordinates[k]) / dx);
                       }
                   },
               },
               repr_);
    breaks_.push_back(1.0);
}

std::string_view Potential::kind() const noexcept {
    static constexpr std::string_view names[] = {"constant", "piecewise", "well", "edge_wells",
                                                 "grid"};
    return names[repr_.index()];
}

std::size_t Potential::piece_at(double x) const noexcept {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    std::size_t k = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
    return std::min(k, piece_count() - 1);
}

double Potential::operator()(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("evaluate: x outside [0,1]");
    const std::size_t k = piece_at(x);
    if (auto* g = std::get_if<shape::GridSampled>(&repr_); g && x == breaks_[k + 1]) {
        return g->ordinates[k + 1];
    }
    return std::min(0.0, on_piece(k, x));
}

double Potential::max_abs() const noexcept {
    double m = 0.0;
    for (std::size_t k = 0; k < piece_count(); ++k) {
        m = std::max({m, -on_piece(k, breaks_[k]), -on_piece(k, breaks_[k + 1])});
    }
    return m;
}

double Potential::l1_norm() const noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < piece_count(); ++k) {
        const double a = breaks_[k], b = breaks_[k + 1];
        s -= 0.5 * (on_piece(k, a) + on_piece(k, b)) * (b - a);
    }
    return s;
}

Potential Potential::scaled(double s) const {
    if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("scale factor must be finite and >= 0");
    Repr r = std::visit(
        overloaded{
            [s](shape::Constant c) -> Repr {
                c.value *= s;
                return c;
            },
            [s](shape::PiecewiseConstant p) -> Repr {
                for (double& v : p.values) v *= s;
                return p;
            },
            [s](shape::Well w) -> Repr {
                w.depth *= s;
                return w;
            },
            [s](shape::EdgeWells w) -> Repr {
                w.depth *= s;
                return w;
            },
            [s](shape::GridSampled g) -> Repr {
                for (double& v : g.ordinates) v *= s;
                return g;
            },
        },
        repr_);
    return Potential(std::move(r));
}

Potential constant(double value) { return Potential(shape::Constant{value}); }

Potential piecewise_constant(std::vector<double> breakpoints, std::vector<double> values) {
    return Potential(shape::PiecewiseConstant{std::move(breakpoints), std::move(values)});
}

Potential single_well(double center, double width, double depth) {
    return Potential(shape::Well{center, width, depth});
}

Potential edge_wells(double width, double depth) {
    return Potential(shape::EdgeWells{width, depth});
}

Potential from_grid(std::vector<double> xs, std::vector<double> qs) {
    return Potential(shape::GridSampled{std::move(xs), std::move(qs)});
}

double gamma_norm(const Potential& q, GammaExponent g) {
    const double gamma = g.value();
    const auto br = q.breakpoints();
    if (std::holds_alternative<shape::GridSampled>(q.repr())) {
        // |q|^gamma has unbounded slope where an affine piece touches zero; tanh-sinh
        // clusters its nodes doubly-exponentially at both piece ends.
        thread_local boost::math::quadrature::tanh_sinh<double> integrator;
        double total = 0.0;
        for (std::size_t k = 0; k < q.piece_count(); ++k) {
            const double a = br[k], b = br[k + 1];
            const double qa = q.on_piece(k, a), qb = q.on_piece(k, b);
            if (qa == 0.0 && qb == 0.0) continue;
            if (q.piece_is_constant(k)) {
                total += std::pow(-qa, gamma) * (b - a);
                continue;
            }
            auto f = [&](double x) { return std::pow(std::max(0.0, -q.on_piece(k, x)), gamma); };
            total += integrator.integrate(f, a, b, 1e-15);
        }
        return total;
    }
    double total = 0.0;
    for (std::size_t k = 0; k < q.piece_count(); ++k) {
        const double v = -q.on_piece(k, br[k]);
        if (v > 0.0) total += std::pow(v, gamma) * (br[k + 1] - br[k]);
    }
    return total;
}

Potential normalize_to_admissible(const Potential& q, GammaExponent g) {
    const double norm = gamma_norm(q, g);
    if (!(norm > 0.0)) throw CannotNormalize("cannot normalize the zero potential");
    return q.scaled(std::pow(norm, -1.0 / g.value()));
}

nlohmann::json to_json(const Potential& q) {
    using nlohmann::json;
    json j = std::visit(
        overloaded{
            [](const shape::Constant& c) { return json{{"value", c.value}}; },
            [](const shape::PiecewiseConstant& p) {
                return json{{"breakpoints", p.breakpoints}, {"values", p.values}};
            },
            [](const shape::Well& w) {
                return json{{"center", w.center}, {"width", w.width}, {"depth", w.depth}};
            },
            [](const shape::EdgeWells& w) { return json{{"width", w.width}, {"depth", w.depth}}; },
            [](const shape::GridSampled& g) {
                return json{{"abscissae", g.abscissae}, {"ordinates", g.ordinates}};
            },
        },
        q.repr());
    j["type"] = std::string(q.kind());
    return j;
}

namespace {

double number_field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw DomainError(std::string("potential: missing field \"") + key + "\"");
    const auto& v = j.at(key);
    if (!v.is_number()) throw DomainError(std::string("potential: field \"") + key + "\" must be a number");
    return v.get<double>();
}

std::vector<double> array_field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw DomainError(std::string("potential: missing field \"") + key + "\"");
    const auto& v = j.at(key);
    if (!v.is_array()) throw DomainError(std::string("potential: field \"") + key + "\" must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) {
            throw DomainError(std::string("potential: field \"") + key + "\" must hold numbers");
        }
        out.push_back(e.get<double>());
    }
    return out;
}

} // namespace

Potential potential_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw DomainError("potential: expected a JSON object");
    if (!j.contains("type") || !j.at("type").is_string()) {
        throw DomainError("potential: missing string field \"type\"");
    }
    const auto type = j.at("type").get<std::string>();
    if (type == "constant") return constant(number_field(j, "value"));
    if (type == "piecewise") {
        return piecewise_constant(array_field(j, "breakpoints"), array_field(j, "values"));
    }
    if (type == "well") {
        return single_well(number_field(j, "center"), number_field(j, "width"),
                           number_field(j, "depth"));
    }
    if (type == "edge_wells") return edge_wells(number_field(j, "width"), number_field(j, "depth"));
    if (type == "grid") return from_grid(array_field(j, "abscissae"), array_field(j, "ordinates"));
    throw DomainError("potential: unknown type \"" + type +
                      "\" (expected constant, piecewise, well, edge_wells or grid)");
}

} // namespace slmaj
