#include "slmaj/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "quadrature.hpp"
#include "slmaj/bounds.hpp"
#include "slmaj/errors.hpp"

namespace slmaj {

namespace {

using std::numbers::pi;

constexpr const char* slack_order[] = {
    "defect_below_epsilon",         "phase_measure_below_mu",   "phase_measure_vs_lebesgue",
    "J_E_below_sine_cap_E",         "sine_cap_E_below_power_bound", "J_C_below_sine_cap_total",
    "sine_cap_total_below_4_over",  "am_gm_pointwise",          "gamma_norm_split_bound",
    "gamma_norm_below_final_bound",
};

void require_chain_gamma(GammaExponent g) {
    if (!g.in_chain_range()) throw DomainError("gamma must lie in (0, 1/2) for the estimate chain");
}

// int_0^m sin^(-2 gamma) x dx for m <= pi/2, after x = u^p, p = 1 / (1 - 2 gamma):
// the integrand becomes p (x / sin x)^(2 gamma), smooth and bounded on [0, m^(1 - 2 gamma)].
double half_sine_integral(double m, double gamma) {
    if (m <= 0.0) return 0.0;
    const double p = 1.0 / (1.0 - 2.0 * gamma);
    auto f = [&](double u) {
        const double x = std::pow(u, p);
        const double ratio = x < 1e-8 ? 1.0 + x * x / 6.0 : x / std::sin(x);
        return p * std::pow(ratio, 2.0 * gamma);
    };
    // x(u) = u^p has non-integer powers at u = 0; tanh-sinh is insensitive to that.
    thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate(f, 0.0, std::pow(m, 1.0 - 2.0 * gamma), 1e-14);
}

} // namespace

double incomplete_sine_integral(double m, GammaExponent g) {
    require_chain_gamma(g);
    if (!(m >= 0.0 && m <= pi)) throw DomainError("sine integral limit must lie in [0, pi]");
    const double gamma = g.value();
    if (m <= 0.5 * pi) return half_sine_integral(m, gamma);
    return 2.0 * half_sine_integral(0.5 * pi, gamma) - half_sine_integral(pi - m, gamma);
}

double default_epsilon(double lambda0) { return 1.01 * (pi - std::sqrt(lambda0)); }

double ChainReport::slack(const std::string& name) const {
    for (const auto& [n, v] : slacks) {
        if (n == name) return v;
    }
    throw std::out_of_range("no slack named " + name);
}

namespace {

std::size_t cell_of(const EigenSolution& e, double x) {
    auto it = std::upper_bound(e.grid.begin(), e.grid.end(), x);
    std::size_t c = it == e.grid.begin() ? 0 : static_cast<std::size_t>(it - e.grid.begin()) - 1;
    return std::min(c, e.grid.size() - 2);
}

// Union of intervals where sigma > t. sigma is continuous inside each grid cell and may jump
// at potential breakpoints (always cell ends); equality belongs to the complement.
std::vector<std::pair<double, double>> locate_superlevel_set(const PhaseInterpolant& P, double t) {
    constexpr int kSub = 4;
    std::vector<std::pair<double, double>> out;
    bool inside = false;
    double start = 0.0;
    auto f = [&](std::size_t c, double x) { return P.sigma(c, x) - t; };
    auto root = [&](std::size_t c, double a, double b, bool rising) {
        for (int it = 0; it < 60; ++it) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;
            ((f(c, m) > 0.0) == rising ? b : a) = m;
        }
        return 0.5 * (a + b);
    };
    for (std::size_t c = 0; c < P.cell_count(); ++c) {
        const double a = P.left(c), b = P.right(c);
        double u = a;
        double fu = f(c, a);
        if (inside && fu <= 0.0) {
            out.emplace_back(start, a);
            inside = false;
        } else if (!inside && fu > 0.0) {
            start = a;
            inside = true;
        }
        for (int s = 1; s <= kSub; ++s) {
            const double v = s == kSub ? b : a + (b - a) * s / kSub;
            const double fv = f(c, v);
            if (!inside && fv > 0.0) {
                start = root(c, u, v, true);
                inside = true;
            } else if (inside && fv <= 0.0) {
                out.emplace_back(start, root(c, u, v, false));
                inside = false;
            }
            u = v;
            fu = fv;
        }
    }
    if (inside) out.emplace_back(start, P.right(P.cell_count() - 1));
    return out;
}

double theta_at(const PhaseInterpolant& P, const EigenSolution& e, double x) {
    return P.theta(cell_of(e, x), x);
}

} // namespace

ChainReport build_report(const EigenSolution& e, GammaExponent g) {
    const double eps = default_epsilon(e.lambda0);
    if (!(eps > 0.0)) {
        throw DomainError("lambda0 = pi^2 (zero potential): no positive default epsilon");
    }
    return build_report(e, g, eps);
}

ChainReport build_report(const EigenSolution& e, GammaExponent g, double epsilon) {
    require_chain_gamma(g);
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be positive");

    const double gamma = g.value();
    const double lambda = e.lambda0;
    const double sl = std::sqrt(lambda);
    const PhaseInterpolant P(e);

    ChainReport r;
    r.gamma = gamma;
    r.epsilon = epsilon;
    r.lambda0 = lambda;
    r.threshold_t = sigma_threshold(g, epsilon);
    r.mu = mu_of_epsilon(g, epsilon);
    r.grid_nodes = e.grid.size();

    r.E_intervals = locate_superlevel_set(P, r.threshold_t);
    auto F = [&](double th) { return incomplete_sine_integral(std::clamp(th, 0.0, pi), g); };
    for (const auto& [a, b] : r.E_intervals) {
        const double ta = theta_at(P, e, a), tb = theta_at(P, e, b);
        r.lebesgue_measure_E += b - a;
        r.phase_measure_E += tb - ta;
        r.J_E += F(tb) - F(ta);
    }
    r.J_C = F(e.theta.back()) - r.J_E;
    r.sine_cap_E = 2.0 * F(0.5 * r.mu);
    r.sine_cap_total = F(pi);

    r.defect = phase_defect(e);
    r.gamma_norm_direct = gamma_norm(e.potential, g);
    double via_phase = 0.0;
    for (std::size_t c = 0; c < P.cell_count(); ++c) {
        via_phase += detail::gauss_legendre(P.left(c), P.right(c), [&](double x) {
            const double sigma = P.sigma(c, x);
            if (sigma == 0.0) return 0.0;
            const double s = std::sin(P.theta(c, x));
            return std::pow(sigma, gamma) * std::pow(s * s, -gamma) / (lambda + sigma) *
                   P.theta_prime(c, x);
        });
    }
    r.gamma_norm_via_phase = sl * via_phase;
    r.final_bound = final_bound_constant(g, epsilon);

    r.am_gm_min_slack = std::numeric_limits<double>::infinity();
    auto am_gm = [&](double sigma) {
        const double s = lambda + sigma - 2.0 * sl * std::pow(sigma, gamma);
        r.am_gm_min_slack = std::min(r.am_gm_min_slack, s);
        if (s < 0.0) ++r.am_gm_violations;
    };
    for (std::size_t c = 0; c < P.cell_count(); ++c) {
        am_gm(P.sigma_left(c));
        am_gm(P.sigma_right(c));
    }

    r.preconditions_met.lambda_above_shifted = lambda > (pi - epsilon) * (pi - epsilon);
    r.preconditions_met.lambda_above_four = lambda > 4.0;
    r.preconditions_met.mu_below_pi = r.mu < pi;

    const double one_minus = 1.0 - 2.0 * gamma;
    const double t_gamma = std::pow(r.threshold_t, gamma);
    const double eps_power = std::pow(epsilon, one_minus * gamma / (1.0 - gamma));
    r.slacks = {
        {"defect_below_epsilon", epsilon - r.defect},
        {"phase_measure_below_mu", r.mu - r.phase_measure_E},
        {"phase_measure_vs_lebesgue", r.phase_measure_E - sl * r.lebesgue_measure_E},
        {"J_E_below_sine_cap_E", r.sine_cap_E - r.J_E},
        {"sine_cap_E_below_power_bound", 2.0 * pi * pi / one_minus * eps_power - r.sine_cap_E},
        {"J_C_below_sine_cap_total", r.sine_cap_total - r.J_C},
        {"sine_cap_total_below_4_over", 4.0 / one_minus - r.sine_cap_total},
        {"am_gm_pointwise", r.am_gm_min_slack},
        {"gamma_norm_split_bound", 0.5 * r.J_E + t_gamma / sl * r.J_C - r.gamma_norm_direct},
        {"gamma_norm_below_final_bound", r.final_bound - r.gamma_norm_direct},
    };
    return r;
}

ChainVerdict verify(const ChainReport& r, double tol) {
    ChainVerdict v;
    if (!r.preconditions_met.all()) {
        v.status = ChainStatus::NotApplicable;
        return v;
    }
    bool ok = true;
    for (const auto& [name, slack] : r.slacks) {
        const bool passed = slack >= -tol;
        ok = ok && passed;
        v.checks.push_back({name, slack, passed});
    }
    v.status = ok ? ChainStatus::AllPass : ChainStatus::Violations;
    v.contradiction = std::abs(r.gamma_norm_direct - 1.0) <= tol && r.final_bound < 1.0;
    return v;
}

std::string_view to_string(ChainStatus s) {
    switch (s) {
    case ChainStatus::AllPass: return "ALL PASS";
    case ChainStatus::Violations: return "VIOLATIONS";
    case ChainStatus::NotApplicable: return "NOT APPLICABLE";
    }
    return "";
}

nlohmann::json to_json(const ChainReport& r) {
    nlohmann::json j;
    j["gamma"] = r.gamma;
    j["epsilon"] = r.epsilon;
    j["lambda0"] = r.lambda0;
    j["threshold_t"] = r.threshold_t;
    j["mu"] = r.mu;
    j["lebesgue_measure_E"] = r.lebesgue_measure_E;
    j["phase_measure_E"] = r.phase_measure_E;
    j["J_E"] = r.J_E;
    j["J_C"] = r.J_C;
    j["sine_cap_E"] = r.sine_cap_E;
    j["sine_cap_total"] = r.sine_cap_total;
    j["defect"] = r.defect;
    j["gamma_norm_direct"] = r.gamma_norm_direct;
    j["gamma_norm_via_phase"] = r.gamma_norm_via_phase;
    j["final_bound"] = r.final_bound;
    j["am_gm_min_slack"] = r.am_gm_min_slack;
    j["am_gm_violations"] = r.am_gm_violations;
    j["grid_nodes"] = r.grid_nodes;
    auto& s = j["slacks"] = nlohmann::json::object();
    for (const auto& [name, value] : r.slacks) s[name] = value;
    j["preconditions_met"] = {
        {"lambda_above_shifted", r.preconditions_met.lambda_above_shifted},
        {"lambda_above_four", r.preconditions_met.lambda_above_four},
        {"mu_below_pi", r.preconditions_met.mu_below_pi},
    };
    auto& iv = j["E_intervals"] = nlohmann::json::array();
    for (const auto& [a, b] : r.E_intervals) iv.push_back({a, b});
    return j;
}

ChainReport chain_report_from_json(const nlohmann::json& j) {
    ChainReport r;
    r.gamma = j.at("gamma").get<double>();
    r.epsilon = j.at("epsilon").get<double>();
    r.lambda0 = j.at("lambda0").get<double>();
    r.threshold_t = j.at("threshold_t").get<double>();
    r.mu = j.at("mu").get<double>();
    r.lebesgue_measure_E = j.at("lebesgue_measure_E").get<double>();
    r.phase_measure_E = j.at("phase_measure_E").get<double>();
    r.J_E = j.at("J_E").get<double>();
    r.J_C = j.at("J_C").get<double>();
    r.sine_cap_E = j.at("sine_cap_E").get<double>();
    r.sine_cap_total = j.at("sine_cap_total").get<double>();
    r.defect = j.at("defect").get<double>();
    r.gamma_norm_direct = j.at("gamma_norm_direct").get<double>();
    r.gamma_norm_via_phase = j.at("gamma_norm_via_phase").get<double>();
    r.final_bound = j.at("final_bound").get<double>();
    r.am_gm_min_slack = j.at("am_gm_min_slack").get<double>();
    r.am_gm_violations = j.at("am_gm_violations").get<std::size_t>();
    r.grid_nodes = j.at("grid_nodes").get<std::size_t>();
    // JSON objects do not keep insertion order; restore the order of the chain.
    const auto& slacks = j.at("slacks");
    for (const char* name : slack_order) {
        if (slacks.contains(name)) r.slacks.emplace_back(name, slacks.at(name).get<double>());
    }
    for (const auto& [name, value] : slacks.items()) {
        if (std::find(std::begin(slack_order), std::end(slack_order), name) == std::end(slack_order)) {
            r.slacks.emplace_back(name, value.get<double>());
        }
    }
    const auto& p = j.at("preconditions_met");
    r.preconditions_met.lambda_above_shifted = p.at("lambda_above_shifted").get<bool>();
    r.preconditions_met.lambda_above_four = p.at("lambda_above_four").get<bool>();
    r.preconditions_met.mu_below_pi = p.at("mu_below_pi").get<bool>();
    for (const auto& iv : j.at("E_intervals")) {
        r.E_intervals.emplace_back(iv.at(0).get<double>(), iv.at(1).get<double>());
    }
    return r;
}

} // namespace slmaj
