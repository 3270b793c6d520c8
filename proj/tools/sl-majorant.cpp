// sl-majorant: ground eigenvalues, estimate-chain certificates and majorant brackets for
// -y'' + q y = lambda y on [0, 1] with Dirichlet ends.
//
// Exit codes: 0 ok, 2 malformed input or domain error, 3 ground state outside the Pruefer
// solver's domain, 4 a chain inequality failed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "slmaj/bounds.hpp"
#include "slmaj/chain.hpp"
#include "slmaj/errors.hpp"
#include "slmaj/oracles.hpp"
#include "slmaj/potential.hpp"
#include "slmaj/prufer.hpp"
#include "slmaj/report.hpp"
#include "slmaj/search.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace slmaj;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_prufer_domain = 3;
constexpr int exit_violation = 4;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Potential read_potential(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open potential file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": not valid JSON: " + e.what());
    }
    try {
        return potential_from_json(j);
    } catch (const DomainError& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::string beside(const std::string& input, const std::string& suffix) {
    fs::path p(input);
    p.replace_extension(suffix);
    return p.string();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << text;
}

void write_record(const std::string& path, const RunRecord& r) {
    write_text(path, to_json(r).dump(2) + "\n");
}

int run_eig(const std::string& file, double tol, const std::string& oracle, std::string out) {
    const Potential q = read_potential(file);
    json result;
    double lambda0;
    if (oracle == "fd") {
        lambda0 = fd_ground_eigenvalue(q, FdConfig{10000, true});
        result = {{"lambda0", lambda0}, {"oracle", "fd"}, {"potential", to_json(q)}};
    } else {
        const EigenSolution e = eigenvalue_dirichlet(q, tol);
        lambda0 = e.lambda0;
        result = eigen_summary(e);
        result["oracle"] = "prufer";
    }
    std::cout << "lambda0 = " << format_double(lambda0) << "\n";
    if (out.empty()) out = beside(file, ".eig.json");
    write_record(out, make_record("eig", {{"potential_file", file}, {"tol", tol}, {"oracle", oracle}},
                                  std::move(result)));
    return exit_ok;
}

int run_verify_chain(const std::string& file, double gamma, std::optional<double> epsilon,
                     bool normalize, double tol, std::string out) {
    const GammaExponent g(gamma);
    if (!g.in_chain_range()) throw DomainError("verify-chain needs gamma in (0, 1/2)");
    Potential q = read_potential(file);
    if (normalize) q = normalize_to_admissible(q, g);
    const EigenSolution e = eigenvalue_dirichlet(q);
    const ChainReport r = epsilon ? build_report(e, g, *epsilon) : build_report(e, g);
    const ChainVerdict v = verify(r, tol);

    std::printf("gamma = %s  epsilon = %s  lambda0 = %s\n", format_double(r.gamma).c_str(),
                format_double(r.epsilon).c_str(), format_double(r.lambda0).c_str());
    std::printf("mu = %s  gamma_norm = %s  final_bound = %s\n", format_double(r.mu).c_str(),
                format_double(r.gamma_norm_direct).c_str(), format_double(r.final_bound).c_str());
    std::printf("preconditions: lambda0 > (pi - eps)^2 %s, lambda0 > 4 %s, mu < pi %s\n",
                r.preconditions_met.lambda_above_shifted ? "yes" : "no",
                r.preconditions_met.lambda_above_four ? "yes" : "no",
                r.preconditions_met.mu_below_pi ? "yes" : "no");
    if (v.status == ChainStatus::NotApplicable) {
        std::printf("NOT APPLICABLE: a precondition of the estimate chain fails\n");
    } else {
        std::printf("%-36s %26s  %s\n", "inequality", "slack", "result");
        for (const auto& c : v.checks) {
            std::printf("%-36s %26s  %s\n", c.name.c_str(), format_double(c.slack).c_str(),
                        c.passed ? "pass" : "FAIL");
        }
        std::printf("%s\n", std::string(to_string(v.status)).c_str());
        if (v.contradiction) {
            std::printf("CONTRADICTION: unit gamma-norm and final bound %s < 1; this potential is "
                        "incompatible with the assumption lambda0 >= (pi - eps)^2\n",
                        format_double(r.final_bound).c_str());
        }
    }
    if (out.empty()) out = beside(file, ".chain.json");
    json params{{"potential_file", file}, {"gamma", gamma}, {"normalize", normalize}, {"tol", tol}};
    params["epsilon"] = epsilon ? json(*epsilon) : json(nullptr);
    write_record(out, make_record("verify-chain", params, to_json(r)));
    return v.status == ChainStatus::Violations ? exit_violation : exit_ok;
}

int run_upper_bound(double gamma, const std::string& out) {
    const BoundResult b = upper_bound(GammaExponent(gamma));
    std::printf("gamma         = %s\n", format_double(b.gamma).c_str());
    std::printf("eps_star      = %s\n", format_double(b.eps_star).c_str());
    std::printf("eps_mu_cap    = %s\n", format_double(b.eps_mu_cap).c_str());
    std::printf("eps_headroom  = %s\n", format_double(b.eps_headroom_cap).c_str());
    std::printf("active cap    = %s\n", std::string(to_string(b.active)).c_str());
    std::printf("upper         = %s\n", to_decimal(b.upper).c_str());
    std::printf("pi^2          = %s\n", to_decimal(pi_squared_quad()).c_str());
    std::printf("pi^2 - upper  = %s\n", format_double(b.upper_deficit).c_str());
    if (!out.empty()) write_record(out, make_record("upper-bound", {{"gamma", gamma}}, to_json(b)));
    return exit_ok;
}

int run_search(double gamma, std::size_t budget, std::size_t seeds, const std::string& out) {
    if (budget < 1) throw DomainError("--budget must be at least 1");
    const SearchResult r = lower_bound(GammaExponent(gamma), budget, seeds);
    std::printf("gamma    = %s\n", format_double(r.gamma).c_str());
    std::printf("lower    = %s\n", format_double(r.lower).c_str());
    std::printf("strategy = %s\n", r.strategy.c_str());
    std::printf("seed     = %llu\n", static_cast<unsigned long long>(r.seed));
    std::printf("best     = %s\n", to_json(r.best_potential).dump().c_str());
    if (!out.empty()) {
        write_record(out, make_record("search", {{"gamma", gamma}, {"budget", budget}, {"seeds", seeds}},
                                      to_json(r)));
    }
    return exit_ok;
}

int run_sweep(const SweepOptions& opt, const std::string& dir, bool svg) {
    const BoundCurve c = sweep(opt);
    const fs::path base(dir);
    fs::create_directories(base);
    const std::string csv = to_csv(c);
    write_text(base / "bound_curve.csv", csv);
    write_text(base / "bound_curve.dat", plot_data(c));
    if (svg) write_text(base / "bound_curve.svg", to_svg(c));
    json params{{"gamma_min", opt.gamma_min}, {"gamma_max", opt.gamma_max}, {"steps", opt.steps},
                {"budget", opt.budget},       {"seeds", opt.seeds}};
    write_record((base / "bound_curve.json").string(), make_record("sweep", params, to_json(c)));
    std::cout << csv;
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ground eigenvalues and majorant brackets for Dirichlet problems with "
                 "nonpositive potentials"};
    app.set_version_flag("--version", std::string(tool_version));
    app.require_subcommand(1);

    std::string file, out, oracle = "prufer";
    double tol = 1e-10, gamma = 0.0, chain_tol = 1e-6;
    std::optional<double> epsilon;
    bool normalize = false, svg = false;
    std::size_t budget = 200, seeds = 8;
    SweepOptions sw;
    std::string dir = ".";

    auto* eig = app.add_subcommand("eig", "Ground eigenvalue of a potential file");
    eig->add_option("potential", file, "Potential JSON file")->required();
    eig->add_option("--tol", tol, "Bisection tolerance on lambda")->check(CLI::PositiveNumber);
    eig->add_option("--oracle", oracle, "Solver")->check(CLI::IsMember({"prufer", "fd"}));
    eig->add_option("--out", out, "Run record path (default: beside the input)");

    auto* vc = app.add_subcommand("verify-chain", "Evaluate and check the estimate chain");
    vc->add_option("potential", file, "Potential JSON file")->required();
    vc->add_option("--gamma", gamma, "Exponent in (0, 1/2)")->required();
    vc->add_option("--epsilon", epsilon, "Defect margin (default: 1.01 (pi - sqrt(lambda0)))");
    vc->add_flag("--normalize", normalize, "Rescale the potential to unit gamma-norm first");
    vc->add_option("--tol", chain_tol, "Slack tolerance")->check(CLI::NonNegativeNumber);
    vc->add_option("--out", out, "Chain report path (default: beside the input)");

    auto* ub = app.add_subcommand("upper-bound", "Explicit majorant U(gamma) < pi^2");
    ub->add_option("--gamma", gamma, "Exponent in (0, 1/2)")->required();
    ub->add_option("--out", out, "Run record path");

    auto* se = app.add_subcommand("search", "Lower bound L(gamma) by family scans and ascent");
    se->add_option("--gamma", gamma, "Exponent > 0")->required();
    se->add_option("--budget", budget, "Ascent iterations per seed");
    se->add_option("--seeds", seeds, "Ascent starts");
    se->add_option("--out", out, "Run record path");

    auto* sp = app.add_subcommand("sweep", "Tabulate L and U over a gamma grid");
    sp->add_option("--gamma-min", sw.gamma_min, "First gamma")->required();
    sp->add_option("--gamma-max", sw.gamma_max, "Last gamma")->required();
    sp->add_option("--steps", sw.steps, "Number of gammas (>= 2)");
    sp->add_option("--budget", sw.budget, "Ascent iterations per seed");
    sp->add_option("--seeds", sw.seeds, "Ascent starts");
    sp->add_option("--out", dir, "Output directory");
    sp->add_flag("--svg", svg, "Also write bound_curve.svg");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }

    try {
        if (eig->parsed()) return run_eig(file, tol, oracle, out);
        if (vc->parsed()) return run_verify_chain(file, gamma, epsilon, normalize, chain_tol, out);
        if (ub->parsed()) return run_upper_bound(gamma, out);
        if (se->parsed()) return run_search(gamma, budget, seeds, out);
        if (sp->parsed()) return run_sweep(sw, dir, svg);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const OutOfPruferDomain& e) {
        std::cerr << "error: " << e.what() << "; use --oracle fd\n";
        return exit_prufer_domain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_ok;
}
