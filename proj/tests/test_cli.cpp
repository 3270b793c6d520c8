#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(SLMAJ_CLI) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    while (std::fgets(buf.data(), buf.size(), p)) out += buf.data();
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path workdir() {
    const fs::path d = fs::temp_directory_path() / "sl_majorant_cli_test";
    fs::create_directories(d);
    return d;
}

std::string write(const std::string& name, const std::string& text) {
    const fs::path p = workdir() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

double value_after(const std::string& out, const std::string& key) {
    const auto pos = out.find(key);
    REQUIRE(pos != std::string::npos);
    return std::stod(out.substr(pos + key.size()));
}

} // namespace

TEST_CASE("eig") {
    const std::string zero = write("zero.json", R"({"type":"constant","value":0})");
    Run r = run("eig " + zero);
    CHECK(r.code == 0);
    CHECK(std::abs(value_after(r.out, "lambda0 = ") - pi * pi) <= 1e-8);
    CHECK(fs::exists(workdir() / "zero.eig.json"));

    const std::string one = write("one.json", R"({"type":"constant","value":-1})");
    const std::string rec = (workdir() / "one-record.json").string();
    r = run("eig " + one + " --tol 1e-11 --out " + rec);
    CHECK(r.code == 0);
    CHECK(std::abs(value_after(r.out, "lambda0 = ") - (pi * pi - 1)) <= 1e-8);
    const auto j = nlohmann::json::parse(slurp(rec));
    CHECK(j.at("command") == "eig");
    CHECK(j.at("parameters").at("tol") == 1e-11);
    CHECK(j.at("version") == "0.1.0");

    const std::string well = write("well.json", R"({"type":"well","center":0.5,"width":0.5,"depth":8})");
    const double prufer = value_after(run("eig " + well).out, "lambda0 = ");
    const double fd = value_after(run("eig " + well + " --oracle fd").out, "lambda0 = ");
    CHECK(std::abs(prufer - fd) <= 1e-5);
}

TEST_CASE("eig exit codes") {
    const std::string bad = write("bad.json", R"({"type":"well","center":0.5})");
    Run r = run("eig " + bad);
    CHECK(r.code == 2);
    CHECK(r.out.find("missing field") != std::string::npos);
    CHECK(run("eig " + write("junk.json", "{not json")).code == 2);
    CHECK(run("eig " + (workdir() / "missing.json").string()).code == 2);
    CHECK(run("eig").code == 2);
    CHECK(run("eig " + bad + " --oracle magic").code == 2);

    const std::string deep = write("deep.json", R"({"type":"constant","value":-30})");
    r = run("eig " + deep);
    CHECK(r.code == 3);
    CHECK(r.out.find("use --oracle fd") != std::string::npos);
    r = run("eig " + deep + " --oracle fd");
    CHECK(r.code == 0);
    CHECK(std::abs(value_after(r.out, "lambda0 = ") - (pi * pi - 30)) <= 1e-6);
}

TEST_CASE("verify-chain") {
    const std::string one = write("chain_one.json", R"({"type":"constant","value":-1})");
    Run r = run("verify-chain " + one + " --gamma 0.45 --normalize");
    CHECK(r.code == 0);
    CHECK((r.out.find("ALL PASS") != std::string::npos || r.out.find("NOT APPLICABLE") != std::string::npos));
    CHECK(fs::exists(workdir() / "chain_one.chain.json"));

    r = run("verify-chain " + one + " --gamma 0.1");
    CHECK(r.code == 0);
    CHECK(r.out.find("NOT APPLICABLE") != std::string::npos);

    // Edge wells of width 0.1 at gamma-norm 0.1 for gamma = 0.45: depth = (0.1 / 0.2)^(1/0.45).
    const double depth = std::pow(0.5, 1.0 / 0.45);
    const std::string edge =
        write("chain_edge.json", R"({"type":"edge_wells","width":0.1,"depth":)" + std::to_string(depth) + "}");
    r = run("verify-chain " + edge + " --gamma 0.45");
    CHECK(r.code == 0);
    CHECK(r.out.find("ALL PASS") != std::string::npos);
    const auto j = nlohmann::json::parse(slurp(workdir() / "chain_edge.chain.json"));
    CHECK(j.at("result").at("preconditions_met").at("mu_below_pi") == true);

    CHECK(run("verify-chain " + one + " --gamma 0.7").code == 2);
    CHECK(run("verify-chain " + one + " --gamma 0.3 --epsilon -1").code == 2);
}

TEST_CASE("upper-bound and search") {
    Run r = run("upper-bound --gamma 0.3333333");
    CHECK(r.code == 0);
    const double eps = value_after(r.out, "eps_star      = ");
    CHECK(eps == doctest::Approx(4.9e-10).epsilon(0.01));
    CHECK(value_after(r.out, "pi^2 - upper  = ") > 0.0);
    CHECK(run("upper-bound --gamma 0.5").code == 2);
    CHECK(run("upper-bound --gamma -1").code == 2);

    r = run("search --gamma 0.45 --budget 50 --seeds 2");
    CHECK(r.code == 0);
    CHECK(value_after(r.out, "lower    = ") >= pi * pi - 1);
    CHECK(run("search --gamma 0").code == 2);
}

TEST_CASE("sweep") {
    const fs::path a = workdir() / "sweep_a", b = workdir() / "sweep_b";
    const std::string args = " --gamma-min 0.35 --gamma-max 0.6 --steps 3 --budget 20 --seeds 2 --svg --out ";
    Run r = run("sweep" + args + a.string());
    CHECK(r.code == 0);
    CHECK(run("sweep" + args + b.string()).code == 0);
    const std::string csv = slurp(a / "bound_curve.csv");
    CHECK(csv == slurp(b / "bound_curve.csv"));
    CHECK(csv.rfind("gamma,lower,upper,eps_star,flags\n", 0) == 0);
    CHECK(csv.find("EQUALITY_PI2") != std::string::npos);
    CHECK(fs::exists(a / "bound_curve.dat"));
    CHECK(fs::exists(a / "bound_curve.svg"));
    CHECK(fs::exists(a / "bound_curve.json"));
    CHECK(run("sweep --gamma-min 0.4 --gamma-max 0.3 --out " + a.string()).code == 2);
    CHECK(run("sweep --gamma-min 0 --gamma-max 0.3 --out " + a.string()).code == 2);
}
