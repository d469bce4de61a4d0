#include "doctest.h"

#include "svev/cli.hpp"
#include "svev/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace svev;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run call(std::vector<std::string> args) {
    std::ostringstream o, e;
    const int code = cli::run(args, o, e);
    return {code, o.str(), e.str()};
}

fs::path fresh(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("svev_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

double trapezoid(const CsvTable& t) {
    double s = 0.0;
    for (size_t i = 1; i < t.rows.size(); ++i)
        s += 0.5 * (t.rows[i][1] + t.rows[i - 1][1]) * (t.rows[i][0] - t.rows[i - 1][0]);
    return s;
}

}  // namespace

TEST_CASE("density writes normalized tables") {
    const auto d = fresh("density");
    for (std::string fam : {"laguerre", "jacobi"}) {
        const auto r = call({"density", "--family", fam, "--n", "3", "--alpha", "0.5", "--out", d.string()});
        INFO(r.err);
        REQUIRE(r.code == cli::kOk);
        CHECK(std::abs(trapezoid(read_csv((d / "rho_ev.csv").string())) - 1.0) < 1e-3);
        CHECK(std::abs(trapezoid(read_csv((d / "rho_sv.csv").string())) - 1.0) < 1e-3);
        const auto meta = read_key_value_file((d / "density.meta").string());
        CHECK(meta.at("family") == fam);
    }
}

TEST_CASE("n = 1 eigenvalue and singular value tables coincide") {
    const auto d = fresh("n1");
    REQUIRE(call({"density", "--n", "1", "--alpha", "0.3", "--count", "50", "--out", d.string()}).code == cli::kOk);
    CHECK(slurp(d / "rho_ev.csv") == slurp(d / "rho_sv.csv"));
}

TEST_CASE("cov-grid") {
    const auto d = fresh("cov");
    const auto r = call({"cov-grid", "--n", "3", "--alpha", "0.5", "--r-count", "7", "--lambda-count", "5",
                         "--out", d.string()});
    INFO(r.err);
    REQUIRE(r.code == cli::kOk);
    const auto t = read_csv((d / "cov.csv").string());
    CHECK(t.header == std::vector<std::string>{"lambda", "r", "value"});
    CHECK(t.rows.size() == 35);
    CHECK(call({"cov-grid", "--n", "2", "--out", d.string()}).code == cli::kConfigError);
    // n = 25 needs the extended mode
    CHECK(call({"cov-grid", "--n", "25", "--r-count", "3", "--lambda-count", "3", "--out", d.string()}).code ==
          cli::kConfigError);
    CHECK(call({"cov-grid", "--n", "25", "--precision", "double-double", "--r-count", "3", "--lambda-count", "3",
                "--out", d.string()})
              .code == cli::kOk);
}

TEST_CASE("conditional flags coinciding values in the metadata") {
    const auto d = fresh("cond");
    REQUIRE(call({"conditional", "--a", "0.5,1,2", "--count", "41", "--out", d.string()}).code == cli::kOk);
    CHECK(read_csv((d / "conditional.csv").string()).rows.size() == 41);
    REQUIRE(call({"conditional", "--a", "0.5,1,1", "--count", "41", "--out", d.string()}).code == cli::kOk);
    CHECK(slurp(d / "conditional.meta").find("warning") != std::string::npos);
    CHECK(call({"conditional", "--a", "0.5,-1", "--out", d.string()}).code == cli::kConfigError);
}

TEST_CASE("sample output is identical across thread counts") {
    const auto d1 = fresh("s1"), d2 = fresh("s2");
    const std::vector<std::string> base{"sample", "--model", "ginibre", "--n", "3", "--draws", "4000", "--seed", "5"};
    auto a1 = base, a2 = base;
    a1.insert(a1.end(), {"--threads", "1", "--out", d1.string()});
    a2.insert(a2.end(), {"--threads", "2", "--out", d2.string()});
    REQUIRE(call(a1).code == cli::kOk);
    REQUIRE(call(a2).code == cli::kOk);
    for (const char* f : {"histogram.csv", "ev_hist.csv", "sv_hist.csv"}) CHECK(slurp(d1 / f) == slurp(d2 / f));
    const auto meta = read_key_value_file((d1 / "sample.meta").string());
    CHECK(meta.at("seed") == "5");
}

TEST_CASE("config files fill in options not given on the command line") {
    const auto d = fresh("config");
    const fs::path cfg = d / "run.conf";
    std::ofstream(cfg) << "n=2\nalpha=0.25\nlog=true\ncount=20\n";
    REQUIRE(call({"density", "--config", cfg.string(), "--n", "4", "--out", d.string()}).code == cli::kOk);
    const auto meta = read_key_value_file((d / "density.meta").string());
    CHECK(meta.at("n") == "4");
    CHECK(parse_double(meta.at("alpha"), "alpha") == 0.25);
    CHECK(read_csv((d / "rho_ev.csv").string()).rows.size() == 20);
    std::ofstream(d / "bad.conf") << "colour=blue\n";
    CHECK(call({"density", "--config", (d / "bad.conf").string(), "--out", d.string()}).code == cli::kConfigError);
}

TEST_CASE("malformed invocations exit with the configuration code") {
    CHECK(call({}).code == cli::kConfigError);
    CHECK(call({"density", "--bogus"}).code == cli::kConfigError);
    CHECK(call({"density", "--n", "0"}).code == cli::kConfigError);
    CHECK(call({"density", "--family", "hermite"}).code == cli::kConfigError);
    CHECK(call({"density", "--min", "2", "--max", "1"}).code == cli::kConfigError);
}

TEST_CASE("verify exits 0 on the quick suite and 1 with the sign mutation") {
    const auto ok = call({"verify", "--suite", "quick"});
    INFO(ok.out);
    CHECK(ok.code == cli::kOk);
    const auto bad = call({"verify", "--suite", "quick", "--psi0-flip"});
    CHECK(bad.code == cli::kVerificationFailed);
}

TEST_CASE("the installed executable reports exit codes") {
    const std::string tool = SVEV_TOOL_PATH;
    const auto d = fresh("proc");
    auto status = [&](const std::string& args) {
        const int s = std::system((tool + " " + args + " > " + (d / "log").string() + " 2>&1").c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    CHECK(status("--version") == 0);
    CHECK(status("density --n 0") == 2);
    CHECK(status("density --n 2 --count 10 --out " + d.string()) == 0);
}
