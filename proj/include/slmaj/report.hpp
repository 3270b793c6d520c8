#pragma once

#include <cstddef>
#include <string>

#include "json.hpp"
#include "slmaj/bounds.hpp"
#include "slmaj/prufer.hpp"

namespace slmaj {

inline constexpr const char* tool_version = "0.1.0";

/// %.17g: round-trips every double, so repeated runs compare byte for byte.
std::string format_double(double v);

nlohmann::json to_json(const BoundResult& b);
BoundResult bound_result_from_json(const nlohmann::json& j);

/// lambda0, tolerance and potential; the eigenfunction samples are omitted.
nlohmann::json eigen_summary(const EigenSolution& e);

struct RunRecord {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    std::string version = tool_version;
    /// ISO 8601 UTC. SOURCE_DATE_EPOCH, when set, replaces the clock.
    std::string timestamp;
    nlohmann::json result;
};

std::string current_timestamp();
RunRecord make_record(std::string command, nlohmann::json parameters, nlohmann::json result);
nlohmann::json to_json(const RunRecord& r);
RunRecord run_record_from_json(const nlohmann::json& j);

struct SweepOptions {
    double gamma_min = 0.05;
    double gamma_max = 0.45;
    std::size_t steps = 9;
    std::size_t budget = 200;
    std::size_t seeds = 8;
};

/// Evenly spaced gammas from gamma_min to gamma_max inclusive. Rows with gamma >= 1/2 hold only
/// the regime classification.
BoundCurve sweep(const SweepOptions& opt);

/// Header "gamma,lower,upper,eps_star,flags". upper carries 36 digits: U sits closer to pi^2
/// than a double can resolve.
std::string to_csv(const BoundCurve& c);
BoundCurve bound_curve_from_csv(const std::string& text);
nlohmann::json to_json(const BoundCurve& c);

/// Gnuplot blocks "lower" and "upper" (gamma value), separated by two blank lines.
std::string plot_data(const BoundCurve& c);
/// Standalone SVG line chart of lower and upper against gamma, with the pi^2 level.
std::string to_svg(const BoundCurve& c);

} // namespace slmaj
