#include "slmaj/search.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "quadrature.hpp"
#include "slmaj/errors.hpp"
#include "slmaj/oracles.hpp"
#include "slmaj/parallel.hpp"

namespace slmaj {

std::vector<double> eigen_gradient(const EigenSolution& e, std::span<const double> cell_edges) {
    if (cell_edges.size() < 2 || cell_edges.front() != 0.0 || cell_edges.back() != 1.0) {
        throw DomainError("cell edges must run from 0 to 1");
    }
    const PhaseInterpolant P(e);
    std::vector<double> mass(cell_edges.size() - 1, 0.0);
    double total = 0.0;
    std::size_t k = 0;
    for (std::size_t c = 0; c < P.cell_count(); ++c) {
        const double a = P.left(c), b = P.right(c);
        while (k + 1 < mass.size() && cell_edges[k + 1] <= a) ++k;
        for (std::size_t j = k; j < mass.size() && cell_edges[j] < b; ++j) {
            const double l = std::max(a, cell_edges[j]), r = std::min(b, cell_edges[j + 1]);
            if (r <= l) continue;
            const double m = detail::gauss_legendre(l, r, [&](double x) {
                const double y = P.y(c, x);
                return y * y;
            });
            mass[j] += m;
            total += m;
        }
    }
    for (double& m : mass) m = -m / total;
    return mass;
}

namespace {

struct Evaluation {
    double lambda;
    const char* evaluator;
};

Evaluation evaluate(const Potential& q, const EigenOptions& opt) {
    try {
        return {ground_eigenvalue(q, opt), "prufer"};
    } catch (const OutOfPruferDomain&) {
    } catch (const IntegrationFailure&) {
        // Wells deep enough to stall the phase integrator at the bracket floor.
    }
    return {fd_ground_eigenvalue(q, FdConfig{4000, true}), "fd"};
}

std::vector<double> uniform_edges(std::size_t n) {
    std::vector<double> edges(n + 1);
    for (std::size_t i = 0; i <= n; ++i) edges[i] = static_cast<double>(i) / static_cast<double>(n);
    edges.back() = 1.0;
    return edges;
}

Potential cells_to_potential(const std::vector<double>& edges, const std::vector<double>& depth,
                             GammaExponent g) {
    std::vector<double> values(depth.size());
    std::transform(depth.begin(), depth.end(), values.begin(), [](double v) { return -v; });
    return normalize_to_admissible(piecewise_constant(edges, std::move(values)), g);
}

std::vector<double> depths_of(const Potential& q) {
    const auto& p = std::get<shape::PiecewiseConstant>(q.repr());
    std::vector<double> v(p.values.size());
    std::transform(p.values.begin(), p.values.end(), v.begin(), [](double x) { return -x; });
    return v;
}

} // namespace

SearchResult projected_ascent(GammaExponent g, std::size_t n_cells, std::uint64_t seed,
                              std::size_t budget, const AscentOptions& opt) {
    if (n_cells < 2) throw DomainError("projected ascent needs at least two cells");
    if (budget < 1) throw DomainError("search budget must be at least one iteration");

    const auto edges = uniform_edges(n_cells);
    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> draw(opt.dirichlet_alpha, 1.0);
    std::vector<double> v(n_cells);
    for (double& w : v) w = draw(rng);

    SearchResult res;
    res.gamma = g.value();
    res.strategy = "projected-ascent";
    res.seed = seed;

    Potential q = cells_to_potential(edges, v, g);
    Evaluation ev = evaluate(q, opt.eigen);
    if (std::string_view(ev.evaluator) == "fd") {
        // No eigenfunction to differentiate; restart from the uniform cell profile.
        q = cells_to_potential(edges, std::vector<double>(n_cells, 1.0), g);
        ev = evaluate(q, opt.eigen);
    }
    double objective = ev.lambda;
    auto residual = [&](const Potential& p) { return std::abs(gamma_norm(p, g) - 1.0); };
    res.trace.push_back({0, objective, 0.0, residual(q), ev.evaluator, "start"});

    for (std::size_t it = 1; it <= budget; ++it) {
        const EigenSolution e = eigenvalue_dirichlet(q, opt.eigen);
        const auto grad = eigen_gradient(e, edges);
        v = depths_of(q);
        // Tangent projection onto sum v_i^gamma = const; empty cells stay empty (infinite normal).
        std::vector<double> dir(n_cells, 0.0), normal(n_cells, 0.0);
        double gn = 0.0, nn = 0.0;
        for (std::size_t i = 0; i < n_cells; ++i) {
            if (v[i] <= 0.0) continue;
            normal[i] = std::pow(v[i], g.value() - 1.0);
            gn += grad[i] * normal[i];
            nn += normal[i] * normal[i];
        }
        double dmax = 0.0;
        for (std::size_t i = 0; i < n_cells; ++i) {
            if (v[i] <= 0.0) continue;
            dir[i] = grad[i] - gn / nn * normal[i];
            dmax = std::max(dmax, std::abs(dir[i]));
        }
        if (dmax == 0.0) break;
        const double vmax = *std::max_element(v.begin(), v.end());

        bool accepted = false;
        double step = opt.initial_step;
        for (; step >= opt.min_step; step *= 0.5) {
            std::vector<double> trial(n_cells);
            for (std::size_t i = 0; i < n_cells; ++i) {
                trial[i] = std::max(0.0, v[i] + step * dir[i] / dmax * vmax);
            }
            if (*std::max_element(trial.begin(), trial.end()) == 0.0) continue;
            Potential cand = cells_to_potential(edges, trial, g);
            const Evaluation ce = evaluate(cand, opt.eigen);
            if (std::string_view(ce.evaluator) == "prufer" && ce.lambda > objective) {
                const double change = (ce.lambda - objective) / std::abs(objective);
                q = std::move(cand);
                objective = ce.lambda;
                res.trace.push_back({it, objective, step, residual(q), ce.evaluator, ""});
                accepted = true;
                if (change < opt.rel_stop) it = budget;
                break;
            }
        }
        if (!accepted) break;
    }
    res.best_potential = q;
    res.lower = objective;
    return res;
}

std::string_view to_string(Family f) {
    switch (f) {
    case Family::Constant: return "constant";
    case Family::SingleWell: return "single_well";
    case Family::EdgeWells: return "edge_wells";
    }
    return "";
}

FamilyGrid default_grid(Family f) {
    switch (f) {
    case Family::Constant: return {};
    case Family::SingleWell:
        return {{1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1}, {0.5, 0.3, 0.15}};
    case Family::EdgeWells:
        return {{0.45, 0.4, 0.35, 0.3, 0.25, 0.2, 0.15, 0.1, 0.075, 0.05, 0.03, 0.02, 0.01}, {}};
    }
    return {};
}

SearchResult family_scan(GammaExponent g, Family family, const FamilyGrid& grid) {
    std::vector<std::pair<Potential, std::string>> members;
    auto label = [](const char* name, double v) {
        std::ostringstream os;
        os << name << "=" << v;
        return os.str();
    };
    std::vector<double> params;
    switch (family) {
    case Family::Constant:
        members.emplace_back(constant(-1.0), "constant");
        params.push_back(1.0);
        break;
    case Family::SingleWell:
        for (double c : grid.centers) {
            for (double w : grid.widths) {
                members.emplace_back(single_well(c, w, 1.0), label("center", c) + "," + label("width", w));
                params.push_back(w);
            }
        }
        break;
    case Family::EdgeWells:
        for (double w : grid.widths) {
            members.emplace_back(edge_wells(w, 1.0), label("width", w));
            params.push_back(w);
        }
        break;
    }
    if (members.empty()) throw DomainError("family scan needs a nonempty grid");

    SearchResult res;
    res.gamma = g.value();
    res.strategy = std::string(to_string(family));
    bool have_best = false;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const Potential q = normalize_to_admissible(members[i].first, g);
        const Evaluation ev = evaluate(q, EigenOptions{});
        res.trace.push_back({i, ev.lambda, params[i], std::abs(gamma_norm(q, g) - 1.0), ev.evaluator,
                             members[i].second});
        if (!have_best || ev.lambda > res.lower) {
            res.best_potential = q;
            res.lower = ev.lambda;
            have_best = true;
        }
    }
    return res;
}

SearchResult lower_bound(GammaExponent g, std::size_t budget, std::size_t n_seeds,
                         const AscentOptions& options) {
    const std::size_t families = 3;
    const std::size_t tasks = families + n_seeds;
    auto results = parallel_map(tasks, [&](std::size_t i) {
        if (i < families) {
            const auto f = static_cast<Family>(i);
            return family_scan(g, f, default_grid(f));
        }
        return projected_ascent(g, 16, i - families + 1, budget, options);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i) {
        if (results[i].lower > results[best].lower) best = i;
    }
    return std::move(results[best]);
}

nlohmann::json to_json(const SearchResult& r) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& t : r.trace) {
        trace.push_back({{"iteration", t.iteration},
                         {"objective", t.objective},
                         {"step", t.step},
                         {"constraint_residual", t.constraint_residual},
                         {"evaluator", t.evaluator},
                         {"label", t.label}});
    }
    return {{"gamma", r.gamma},
            {"lower", r.lower},
            {"strategy", r.strategy},
            {"seed", r.seed},
            {"best_potential", to_json(r.best_potential)},
            {"trace", trace}};
}

SearchResult search_result_from_json(const nlohmann::json& j) {
    SearchResult r;
    r.gamma = j.at("gamma").get<double>();
    r.lower = j.at("lower").get<double>();
    r.strategy = j.at("strategy").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.best_potential = potential_from_json(j.at("best_potential"));
    for (const auto& t : j.at("trace")) {
        r.trace.push_back({t.at("iteration").get<std::size_t>(), t.at("objective").get<double>(),
                           t.at("step").get<double>(), t.at("constraint_residual").get<double>(),
                           t.at("evaluator").get<std::string>(), t.at("label").get<std::string>()});
    }
    return r;
}

} // namespace slmaj
