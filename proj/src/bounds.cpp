#include "slmaj/bounds.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>

#include "slmaj/errors.hpp"

namespace slmaj {

namespace {

using std::numbers::pi;

void require_chain_gamma(GammaExponent g) {
    if (!g.in_chain_range()) {
        throw DomainError("gamma must lie in (0, 1/2) for the estimate chain");
    }
}

double power_exponent(double gamma) { return (1.0 - 2.0 * gamma) * gamma / (1.0 - gamma); }

} // namespace

double final_bound_constant(GammaExponent g, double epsilon) {
    require_chain_gamma(g);
    if (!(epsilon >= 0.0)) throw DomainError("epsilon must be nonnegative");
    const double gamma = g.value();
    return (pi * pi + 2.0) / (1.0 - 2.0 * gamma) * std::pow(epsilon, power_exponent(gamma));
}

double mu_of_epsilon(GammaExponent g, double epsilon) {
    const double gamma = g.value();
    return pi * pi * std::pow(epsilon, gamma / (1.0 - gamma)) + epsilon;
}

double sigma_threshold(GammaExponent g, double epsilon) {
    const double gamma = g.value();
    return std::pow(epsilon, (1.0 - 2.0 * gamma) / (1.0 - gamma));
}

quad pi_squared_quad() {
    const quad p = boost::math::constants::pi<quad>();
    return p * p;
}

quad epsilon_star_exact(GammaExponent g) {
    require_chain_gamma(g);
    const quad gamma = g.value();
    const quad one = 1;
    const quad base = (one - 2 * gamma) / (pi_squared_quad() + 2);
    const quad expo = (one - gamma) / ((one - 2 * gamma) * gamma);
    return exp(expo * log(base));
}

double epsilon_star(GammaExponent g) { return static_cast<double>(epsilon_star_exact(g)); }

double epsilon_star_by_root(GammaExponent g, double rel_tol) {
    require_chain_gamma(g);
    // final_bound_constant is increasing in eps and exceeds 1 at eps = 1.
    double lo = std::log(std::numeric_limits<double>::min());
    double hi = 0.0;
    while (hi - lo > rel_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (final_bound_constant(g, std::exp(mid)) < 1.0 ? lo : hi) = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

double epsilon_mu_cap(GammaExponent g) {
    double lo = 0.0, hi = pi;
    while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (mu_of_epsilon(g, mid) < pi ? lo : hi) = mid;
    }
    return lo;
}

std::string_view to_string(ActiveCap c) {
    switch (c) {
    case ActiveCap::EpsStar: return "eps_star";
    case ActiveCap::MuCap: return "mu_cap";
    case ActiveCap::Headroom: return "headroom_cap";
    }
    return "";
}

BoundResult upper_bound(GammaExponent g) {
    require_chain_gamma(g);
    BoundResult r;
    r.gamma = g.value();
    const quad eps_star_q = epsilon_star_exact(g);
    r.eps_star = static_cast<double>(eps_star_q);
    r.eps_mu_cap = epsilon_mu_cap(g);
    r.eps_headroom_cap = pi - 2.0 - 1e-6;

    quad eff = eps_star_q;
    r.active = ActiveCap::EpsStar;
    if (quad(r.eps_mu_cap) < eff) {
        eff = r.eps_mu_cap;
        r.active = ActiveCap::MuCap;
    }
    if (quad(r.eps_headroom_cap) < eff) {
        eff = r.eps_headroom_cap;
        r.active = ActiveCap::Headroom;
    }
    r.eps_effective = static_cast<double>(eff);
    const quad p = boost::math::constants::pi<quad>();
    r.upper = (p - eff) * (p - eff);
    r.upper_deficit = static_cast<double>(eff * (2 * p - eff));
    return r;
}

std::string_view to_string(RegimeClass c) {
    switch (c) {
    case RegimeClass::EqualityPi2: return "EQUALITY_PI2";
    case RegimeClass::StrictPrior: return "STRICT_PRIOR";
    case RegimeClass::StrictThisWork: return "STRICT_THIS_PAPER";
    }
    return "";
}

ReferenceFacts reference_facts(GammaExponent g) {
    const double gamma = g.value();
    if (gamma >= 0.5) {
        return {RegimeClass::EqualityPi2,
                "Ezhak (2012), Thm 1.2: M_gamma = pi^2 for gamma >= 1/2"};
    }
    if (gamma < 1.0 / 3.0) {
        return {RegimeClass::StrictPrior,
                "Ezhak (2012), Thm 1.2: M_gamma < pi^2 for gamma < 1/3"};
    }
    return {RegimeClass::StrictThisWork,
            "M_gamma < pi^2 for gamma in [1/3, 1/2), via the phase-flow estimate chain"};
}

void BoundCurve::check_invariants() const {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (!(rows[i - 1].gamma < rows[i].gamma)) {
            throw std::logic_error("bound curve rows must be sorted by gamma");
        }
    }
    for (const auto& r : rows) {
        if (r.lower && r.upper && quad(*r.lower) > *r.upper + quad(1e-9)) {
            std::ostringstream os;
            os << "lower bound exceeds upper bound at gamma = " << r.gamma;
            throw std::logic_error(os.str());
        }
    }
}

std::string to_decimal(const quad& v) {
    std::ostringstream os;
    os << std::setprecision(36) << v;
    return os.str();
}

} // namespace slmaj
