#include "slmaj/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <numbers>
#include <sstream>

#include "slmaj/errors.hpp"
#include "slmaj/search.hpp"

namespace slmaj {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json to_json(const BoundResult& b) {
    return {{"gamma", b.gamma},
            {"eps_star", b.eps_star},
            {"eps_mu_cap", b.eps_mu_cap},
            {"eps_headroom_cap", b.eps_headroom_cap},
            {"eps_effective", b.eps_effective},
            {"upper", to_decimal(b.upper)},
            {"upper_deficit", b.upper_deficit},
            {"active_cap", std::string(to_string(b.active))}};
}

BoundResult bound_result_from_json(const nlohmann::json& j) {
    BoundResult b;
    b.gamma = j.at("gamma").get<double>();
    b.eps_star = j.at("eps_star").get<double>();
    b.eps_mu_cap = j.at("eps_mu_cap").get<double>();
    b.eps_headroom_cap = j.at("eps_headroom_cap").get<double>();
    b.eps_effective = j.at("eps_effective").get<double>();
    b.upper = quad(j.at("upper").get<std::string>());
    b.upper_deficit = j.at("upper_deficit").get<double>();
    const auto cap = j.at("active_cap").get<std::string>();
    if (cap == to_string(ActiveCap::EpsStar)) {
        b.active = ActiveCap::EpsStar;
    } else if (cap == to_string(ActiveCap::MuCap)) {
        b.active = ActiveCap::MuCap;
    } else if (cap == to_string(ActiveCap::Headroom)) {
        b.active = ActiveCap::Headroom;
    } else {
        throw DomainError("unknown active_cap '" + cap + "'");
    }
    return b;
}

nlohmann::json eigen_summary(const EigenSolution& e) {
    return {{"lambda0", e.lambda0},
            {"solver_tolerance", e.solver_tolerance},
            {"grid_nodes", e.grid.size()},
            {"potential", to_json(e.potential)}};
}

std::string current_timestamp() {
    std::time_t t;
    const char* fixed = std::getenv("SOURCE_DATE_EPOCH");
    if (fixed && *fixed) {
        t = static_cast<std::time_t>(std::strtoll(fixed, nullptr, 10));
    } else {
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunRecord make_record(std::string command, nlohmann::json parameters, nlohmann::json result) {
    RunRecord r;
    r.command = std::move(command);
    r.parameters = std::move(parameters);
    r.timestamp = current_timestamp();
    r.result = std::move(result);
    return r;
}

nlohmann::json to_json(const RunRecord& r) {
    return {{"command", r.command},
            {"parameters", r.parameters},
            {"version", r.version},
            {"timestamp", r.timestamp},
            {"result", r.result}};
}

RunRecord run_record_from_json(const nlohmann::json& j) {
    RunRecord r;
    r.command = j.at("command").get<std::string>();
    r.parameters = j.at("parameters");
    r.version = j.at("version").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.result = j.at("result");
    return r;
}

BoundCurve sweep(const SweepOptions& opt) {
    if (!(opt.gamma_min > 0.0) || !(opt.gamma_max > opt.gamma_min) || !std::isfinite(opt.gamma_max)) {
        throw DomainError("sweep needs 0 < gamma-min < gamma-max");
    }
    if (opt.steps < 2) throw DomainError("sweep needs at least two steps");
    if (opt.budget < 1) throw DomainError("search budget must be at least one iteration");

    BoundCurve curve;
    for (std::size_t i = 0; i < opt.steps; ++i) {
        const double gamma =
            i + 1 == opt.steps
                ? opt.gamma_max
                : opt.gamma_min + (opt.gamma_max - opt.gamma_min) * static_cast<double>(i) /
                                      static_cast<double>(opt.steps - 1);
        const GammaExponent g(gamma);
        BoundCurveRow row;
        row.gamma = gamma;
        row.flags = std::string(to_string(reference_facts(g).regime));
        if (g.in_chain_range()) {
            const BoundResult b = upper_bound(g);
            row.upper = b.upper;
            row.eps_star = b.eps_star;
            row.flags += ";" + std::string(to_string(b.active));
            row.lower = lower_bound(g, opt.budget, opt.seeds).lower;
        }
        curve.rows.push_back(std::move(row));
    }
    curve.check_invariants();
    return curve;
}

std::string to_csv(const BoundCurve& c) {
    std::string out = "gamma,lower,upper,eps_star,flags\n";
    for (const auto& r : c.rows) {
        out += format_double(r.gamma) + ",";
        if (r.lower) out += format_double(*r.lower);
        out += ",";
        if (r.upper) out += to_decimal(*r.upper);
        out += ",";
        if (r.eps_star) out += format_double(*r.eps_star);
        out += "," + r.flags + "\n";
    }
    return out;
}

BoundCurve bound_curve_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "gamma,lower,upper,eps_star,flags") {
        throw DomainError("bound curve CSV must start with gamma,lower,upper,eps_star,flags");
    }
    BoundCurve c;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        for (std::size_t pos; (pos = line.find(',', start)) != std::string::npos; start = pos + 1) {
            f.push_back(line.substr(start, pos - start));
        }
        f.push_back(line.substr(start));
        if (f.size() != 5) throw DomainError("bound curve CSV row needs 5 fields: " + line);
        BoundCurveRow r;
        r.gamma = std::stod(f[0]);
        if (!f[1].empty()) r.lower = std::stod(f[1]);
        if (!f[2].empty()) r.upper = quad(f[2]);
        if (!f[3].empty()) r.eps_star = std::stod(f[3]);
        r.flags = f[4];
        c.rows.push_back(std::move(r));
    }
    return c;
}

nlohmann::json to_json(const BoundCurve& c) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : c.rows) {
        nlohmann::json j{{"gamma", r.gamma}, {"flags", r.flags}};
        j["lower"] = r.lower ? nlohmann::json(*r.lower) : nlohmann::json(nullptr);
        j["upper"] = r.upper ? nlohmann::json(to_decimal(*r.upper)) : nlohmann::json(nullptr);
        j["eps_star"] = r.eps_star ? nlohmann::json(*r.eps_star) : nlohmann::json(nullptr);
        rows.push_back(std::move(j));
    }
    return {{"rows", rows}};
}

std::string plot_data(const BoundCurve& c) {
    std::string out = "# lower: gamma L\n";
    for (const auto& r : c.rows) {
        if (r.lower) out += format_double(r.gamma) + " " + format_double(*r.lower) + "\n";
    }
    out += "\n\n# upper: gamma U\n";
    for (const auto& r : c.rows) {
        if (r.upper) out += format_double(r.gamma) + " " + to_decimal(*r.upper) + "\n";
    }
    return out;
}

std::string to_svg(const BoundCurve& c) {
    constexpr double W = 640, H = 400, left = 70, right = 20, top = 20, bottom = 50;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double gmin = 0.0, gmax = 0.5, vmin = pi2 - 1.0;
    if (!c.rows.empty()) {
        gmin = c.rows.front().gamma;
        gmax = std::max(c.rows.back().gamma, gmin + 1e-3);
    }
    for (const auto& r : c.rows) {
        if (r.lower) vmin = std::min(vmin, *r.lower);
    }
    vmin = std::floor(vmin * 4.0) / 4.0;
    const double vmax = pi2 + 0.1;
    auto px = [&](double g) { return left + (g - gmin) / (gmax - gmin) * (W - left - right); };
    auto py = [&](double v) { return top + (vmax - v) / (vmax - vmin) * (H - top - bottom); };
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };
    auto polyline = [&](bool upper, const char* colour) {
        std::string pts;
        for (const auto& r : c.rows) {
            if (upper && r.upper) pts += fmt(px(r.gamma)) + "," + fmt(py(static_cast<double>(*r.upper))) + " ";
            if (!upper && r.lower) pts += fmt(px(r.gamma)) + "," + fmt(py(*r.lower)) + " ";
        }
        if (pts.empty()) return std::string();
        pts.pop_back();
        return "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"2\" points=\"" +
               pts + "\"/>\n";
    };

    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
                    "font-family=\"sans-serif\" font-size=\"12\">\n"
                    "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    s += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(H - bottom) + "\" x2=\"" + fmt(W - right) + "\" y2=\"" +
         fmt(H - bottom) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(left) + "\" y2=\"" +
         fmt(H - bottom) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(py(pi2)) + "\" x2=\"" + fmt(W - right) + "\" y2=\"" +
         fmt(py(pi2)) + "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
    s += "<text x=\"" + fmt(W - right - 30) + "\" y=\"" + fmt(py(pi2) - 4) + "\">pi^2</text>\n";
    for (int k = 0; k <= 4; ++k) {
        const double g = gmin + (gmax - gmin) * k / 4.0;
        const double v = vmin + (pi2 - vmin) * k / 4.0;
        s += "<text x=\"" + fmt(px(g) - 12) + "\" y=\"" + fmt(H - bottom + 18) + "\">" + fmt(g) + "</text>\n";
        s += "<text x=\"" + fmt(left - 45) + "\" y=\"" + fmt(py(v) + 4) + "\">" + fmt(v) + "</text>\n";
    }
    s += "<text x=\"" + fmt(W / 2) + "\" y=\"" + fmt(H - 10) + "\">gamma</text>\n";
    s += polyline(true, "firebrick");
    s += polyline(false, "steelblue");
    s += "<text x=\"" + fmt(left + 10) + "\" y=\"" + fmt(top + 14) +
         "\" fill=\"firebrick\">U (upper)</text>\n";
    s += "<text x=\"" + fmt(left + 10) + "\" y=\"" + fmt(top + 30) +
         "\" fill=\"steelblue\">L (lower)</text>\n";
    s += "</svg>\n";
    return s;
}

} // namespace slmaj
