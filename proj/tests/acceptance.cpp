// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "slmaj/bounds.hpp"
#include "slmaj/chain.hpp"
#include "slmaj/errors.hpp"
#include "slmaj/oracles.hpp"
#include "slmaj/prufer.hpp"
#include "slmaj/search.hpp"

using namespace slmaj;
using std::numbers::pi;

namespace {

const double pi2 = pi * pi;

struct Outcome {
    bool passed;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double time_limit, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < time_limit;
    const bool ok = o.passed && in_time;
    if (!ok) ++failures;
    std::printf("[%s] %2d %-32s %s (%.2fs, limit %.0fs)\n", ok ? "PASS" : "FAIL", id, name, o.detail.c_str(),
                secs, time_limit);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// Normalized random piecewise-constant potentials shared by criteria 3, 4 and 6.
struct Sample {
    Potential q;
    GammaExponent g;
};

std::vector<Sample> random_piecewise(std::size_t count) {
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> cells(3, 12);
    std::uniform_real_distribution<double> weight(0.2, 1.0), gamma(0.3, 0.49);
    std::vector<Sample> out;
    while (out.size() < count) {
        const int n = cells(rng);
        std::vector<double> br(n + 1), vals(n);
        for (int i = 0; i <= n; ++i) br[i] = static_cast<double>(i) / n;
        for (double& v : vals) v = -weight(rng);
        const GammaExponent g(gamma(rng));
        out.push_back({normalize_to_admissible(piecewise_constant(br, vals), g), g});
    }
    return out;
}

std::vector<ChainReport> reports_with_lambda_above_four;

} // namespace

int main() {
    std::printf("acceptance criteria (threads: %s)\n",
                std::getenv("SL_MAJORANT_THREADS") ? std::getenv("SL_MAJORANT_THREADS") : "default");

    // 1 ---------------------------------------------------------------------------------------
    criterion(1, "closed-form eigenvalues", 2.0, [] {
        double worst = 0.0, slowest = 0.0;
        for (double c : {0.0, -1.0}) {
            const auto t0 = std::chrono::steady_clock::now();
            worst = std::max(worst, std::abs(eigenvalue_dirichlet(constant(c)).lambda0 - (pi2 + c)));
            slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        }
        return Outcome{worst <= 1e-8 && slowest < 1.0,
                       "q = 0 and q = -1: max |lambda0 - exact| = " + fmt("%.2e", worst) +
                           ", slowest solve " + fmt("%.3fs", slowest)};
    });

    // 2 ---------------------------------------------------------------------------------------
    criterion(2, "cross-oracle agreement", 30.0, [] {
        const std::vector<Potential> members{
            single_well(0.5, 0.2, 10.0), single_well(0.5, 0.5, 8.0),  single_well(0.3, 0.1, 20.0),
            single_well(0.7, 0.4, 5.0),  single_well(0.05, 0.2, 6.0), single_well(0.5, 1.0, 3.0),
            edge_wells(0.1, 5.0),        edge_wells(0.05, 30.0),      edge_wells(0.25, 2.0),
            edge_wells(0.02, 100.0)};
        double worst = 0.0;
        bool in_range = true;
        for (const Potential& q : members) {
            const double a = ground_eigenvalue(q);
            const double b = fd_ground_eigenvalue(q, FdConfig{10000, true});
            const double c = well_eigenvalue_transcendental(q);
            in_range = in_range && a > 0.5;
            worst = std::max({worst, std::abs(a - b), std::abs(a - c), std::abs(b - c)});
        }
        return Outcome{in_range && worst <= 1e-5,
                       "10 members, max pairwise |dlambda| = " + fmt("%.2e", worst)};
    });

    const std::vector<Sample> samples = random_piecewise(50);
    std::vector<EigenSolution> solutions;

    // 3 ---------------------------------------------------------------------------------------
    criterion(3, "phase-defect identity", 60.0, [&] {
        double worst = 0.0;
        for (const Sample& s : samples) {
            solutions.push_back(eigenvalue_dirichlet(s.q));
            const EigenSolution& e = solutions.back();
            worst = std::max(worst, std::abs(phase_defect(e) - (pi - std::sqrt(e.lambda0))));
        }
        return Outcome{worst <= 1e-6, "50 potentials, max residual = " + fmt("%.2e", worst)};
    });

    // 4 ---------------------------------------------------------------------------------------
    criterion(4, "change-of-variables identity", 60.0, [&] {
        if (solutions.size() != samples.size()) return Outcome{false, "no solutions from criterion 3"};
        double worst = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const ChainReport r = build_report(solutions[i], samples[i].g);
            worst = std::max(worst, std::abs(r.gamma_norm_via_phase - r.gamma_norm_direct));
            if (r.lambda0 > 4.0) reports_with_lambda_above_four.push_back(r);
        }
        return Outcome{worst <= 1e-5, "50 potentials, max |via_phase - direct| = " + fmt("%.2e", worst)};
    });

    // 5 ---------------------------------------------------------------------------------------
    criterion(5, "chain verification", 60.0, [] {
        std::vector<Potential> shapes;
        for (double w : {0.02, 0.05, 0.1, 0.2, 0.3}) shapes.push_back(edge_wells(w, 1.0));
        for (auto [c, w] : std::vector<std::pair<double, double>>{{0.5, 0.05}, {0.5, 0.2}, {0.3, 0.1},
                                                                  {0.7, 0.3}, {0.5, 0.6}}) {
            shapes.push_back(single_well(c, w, 1.0));
        }
        double worst = INFINITY;
        std::size_t applicable = 0, count = 0, nonempty_E = 0;
        for (double gamma : {0.40, 0.45}) {
            const GammaExponent g(gamma);
            for (const Potential& shape : shapes) {
                // gamma-norm 0.1
                const Potential q = normalize_to_admissible(shape, g).scaled(std::pow(0.1, 1.0 / gamma));
                const ChainReport r = build_report(eigenvalue_dirichlet(q), g);
                ++count;
                if (!r.preconditions_met.all()) continue;
                ++applicable;
                if (!r.E_intervals.empty()) ++nonempty_E;
                for (const auto& [name, slack] : r.slacks) worst = std::min(worst, slack);
                reports_with_lambda_above_four.push_back(r);
            }
        }
        std::ostringstream os;
        os << applicable << "/" << count << " with preconditions met, " << nonempty_E
           << " with nonempty E, min slack = " << fmt("%.3e", worst);
        return Outcome{count == 20 && applicable == 20 && worst >= -1e-6, os.str()};
    });

    // 6 ---------------------------------------------------------------------------------------
    criterion(6, "pointwise AM-GM", 1.0, [] {
        std::size_t violations = 0, nodes = 0;
        double worst = INFINITY;
        for (const ChainReport& r : reports_with_lambda_above_four) {
            violations += r.am_gm_violations;
            nodes += r.grid_nodes;
            worst = std::min(worst, r.am_gm_min_slack);
        }
        std::ostringstream os;
        os << reports_with_lambda_above_four.size() << " reports, " << nodes << " nodes, " << violations
           << " violations, min slack = " << fmt("%.3e", worst);
        return Outcome{!reports_with_lambda_above_four.empty() && violations == 0, os.str()};
    });

    // 7 ---------------------------------------------------------------------------------------
    criterion(7, "bound extraction", 1.0, [] {
        double worst_one = 0.0, worst_root = 0.0, min_gap = INFINITY;
        bool strict = true;
        for (int k = 1; k <= 9; ++k) {
            const GammaExponent g(0.05 * k);
            worst_one = std::max(worst_one, std::abs(final_bound_constant(g, epsilon_star(g)) - 1.0));
            worst_root = std::max(worst_root, std::abs(epsilon_star_by_root(g) / epsilon_star(g) - 1.0));
            const BoundResult b = upper_bound(g);
            strict = strict && b.upper < pi_squared_quad();
            min_gap = std::min(min_gap, static_cast<double>(pi_squared_quad() - b.upper));
        }
        std::ostringstream os;
        os << "|C(eps*) - 1| <= " << fmt("%.1e", worst_one) << ", root rel err <= " << fmt("%.1e", worst_root)
           << ", min pi^2 - U = " << fmt("%.2e", min_gap);
        return Outcome{worst_one <= 1e-9 && worst_root <= 1e-10 && strict, os.str()};
    });

    // 8 ---------------------------------------------------------------------------------------
    criterion(8, "bracket consistency", 600.0, [] {
        bool ok = true;
        std::ostringstream os;
        for (double gamma : {0.35, 0.40, 0.45}) {
            const GammaExponent g(gamma);
            const SearchResult r = lower_bound(g, 200, 8);
            const BoundResult b = upper_bound(g);
            ok = ok && quad(r.lower) <= b.upper && r.lower >= pi2 - 1.0;
            os << "L(" << gamma << ") = " << fmt("%.6f", r.lower) << " [" << r.strategy << "] ";
        }
        return Outcome{ok, os.str() + "<= U < pi^2"};
    });

    // 9 ---------------------------------------------------------------------------------------
    criterion(9, "gamma >= 1/2 edge-wells approach", 60.0, [] {
        const SearchResult r = family_scan(GammaExponent(0.6), Family::EdgeWells, FamilyGrid{{0.1, 0.05, 0.02, 0.01}, {}});
        bool increasing = r.trace.size() == 4;
        std::ostringstream os;
        for (std::size_t i = 0; i < r.trace.size(); ++i) {
            if (i > 0) increasing = increasing && r.trace[i].objective > r.trace[i - 1].objective;
            os << fmt("%.6f", r.trace[i].objective) << " ";
        }
        const double gap = pi2 - r.trace.back().objective;
        os << "pi^2 - last = " << fmt("%.4f", gap);
        return Outcome{increasing && gap <= 0.5, os.str()};
    });

    // 10 --------------------------------------------------------------------------------------
    criterion(10, "gradient vs finite differences", 30.0, [] {
        std::mt19937_64 rng(97);
        std::gamma_distribution<double> draw(1.0, 1.0);
        const std::size_t n = 16;
        std::vector<double> edges(n + 1);
        for (std::size_t i = 0; i <= n; ++i) edges[i] = static_cast<double>(i) / n;
        const GammaExponent g(0.45);
        const EigenOptions tight{1e-13};
        double worst = 0.0;
        for (int point = 0; point < 5; ++point) {
            std::vector<double> vals(n);
            for (double& v : vals) v = -draw(rng);
            const Potential q = normalize_to_admissible(piecewise_constant(edges, vals), g);
            const auto& depth = std::get<shape::PiecewiseConstant>(q.repr()).values;
            const auto grad = eigen_gradient(eigenvalue_dirichlet(q, tight), edges);
            const double h = 1e-3;
            for (std::size_t i = 0; i < n; ++i) {
                auto up = depth, down = depth;
                up[i] -= h;
                down[i] += h;
                const double fd = (ground_eigenvalue(piecewise_constant(edges, up), tight) -
                                   ground_eigenvalue(piecewise_constant(edges, down), tight)) /
                                  (2 * h);
                worst = std::max(worst, std::abs(fd - grad[i]) / std::abs(grad[i]));
            }
        }
        return Outcome{worst <= 1e-3, "5 points x 16 cells, max relative error = " + fmt("%.2e", worst)};
    });

    // 11 --------------------------------------------------------------------------------------
    criterion(11, "sweep determinism", 600.0, [] {
        namespace fs = std::filesystem;
        const fs::path base = fs::temp_directory_path() / "sl_majorant_acceptance";
        fs::remove_all(base);
        auto run = [&](const char* tag, const char* threads) {
            const fs::path dir = base / tag;
            const std::string cmd = std::string("SL_MAJORANT_THREADS=") + threads + " " + SLMAJ_CLI +
                                    " sweep --gamma-min 0.35 --gamma-max 0.45 --steps 3 --budget 50 --seeds 3"
                                    " --out " + dir.string() + " > /dev/null";
            if (std::system(cmd.c_str()) != 0) return std::string("<sweep failed>");
            std::ifstream in(dir / "bound_curve.csv", std::ios::binary);
            std::ostringstream os;
            os << in.rdbuf();
            return os.str();
        };
        const std::string a = run("a", "1"), b = run("b", "1"), c = run("c", "4");
        const bool same = a == b && b == c && a.rfind("gamma,", 0) == 0;
        return Outcome{same, std::to_string(a.size()) + " CSV bytes, identical across 3 runs (1, 1, 4 threads)"};
    });

    std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
    return failures == 0 ? 0 : 1;
}
