#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using dce::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch() {
    const auto dir = fs::temp_directory_path() / "dcelab_cli_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("exit codes") {
    CHECK(invoke({}).code == dce::cli::kExitUsage);
    CHECK(invoke({"bogus"}).code == dce::cli::kExitUsage);
    CHECK(invoke({"--help"}).code == dce::cli::kExitOk);
    CHECK(invoke({"stability", "--n", "3", "--eps", "1.5"}).code == dce::cli::kExitDomain);
    CHECK(invoke({"stability", "--n", "3", "--kappa", "1e-3", "--ratio", "10"}).code == dce::cli::kExitUsage);
    CHECK(invoke({"sweep", "--n", "3", "--eps", "0.1:0.2"}).code == dce::cli::kExitUsage);
    CHECK(invoke({"simulate", "--n", "6", "--eps", "0.02", "--mode", "full"}).code == dce::cli::kExitDomain);
}

TEST_CASE("grids and jobs") {
    const auto g = dce::cli::parse_grid("0.05:0.6:0.05");
    CHECK(g.size() == 12);
    CHECK(g.back() == doctest::Approx(0.6));
    CHECK(dce::cli::parse_grid("2") == std::vector<double>{2.0});
    CHECK_THROWS((void)dce::cli::parse_grid("1:0:0.1"));
    CHECK(dce::cli::resolve_jobs(3) == 3u);
    CHECK(dce::cli::resolve_jobs(0) >= 1u);
}

TEST_CASE("derive listings") {
    auto r = invoke({"derive", "--n", "3", "--eps", "0.45", "--rwa"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("+ eps^3 1/12 w1 exp(-3iWt) A1^+ exp(+2iw~1t)") != std::string::npos);
    CHECK(r.out.find("M =") != std::string::npos);

    r = invoke({"derive", "--n", "1", "--k", "1", "--eps", "0.1"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("A2") == std::string::npos);

    const auto path = scratch() / "terms.json";
    r = invoke({"derive", "--n", "3", "--eps", "0.45", "--emit-terms", path.string()});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(slurp(path));
    CHECK(doc.at("terms").size() > 50);
}

TEST_CASE("config file diagnostics reach stderr") {
    const auto path = scratch() / "bad.cfg";
    std::ofstream(path) << "n_order = 3\nepsilon = nope\n";
    const auto r = invoke({"stability", "--config", path.string()});
    CHECK(r.code == dce::cli::kExitDomain);
    CHECK(r.err.find(":2: key 'epsilon'") != std::string::npos);
}

TEST_CASE("stability json") {
    const auto r = invoke({"stability", "--n", "3", "--eps", "0.45", "--ratio", "1000", "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("lambda_max").get<double>() == doctest::Approx(7.09375e-3).epsilon(1e-12));
    CHECK(j.at("unstable").get<bool>());
    CHECK(j.at("resonance").at("omega1_shifted").get<double>() == doctest::Approx(1.106491111328125));
}

TEST_CASE("simulation output is deterministic and replayable") {
    const auto dir = scratch();
    const auto a = dir / "a.csv";
    const auto b = dir / "b.csv";
    const std::vector<std::string> base{"simulate", "--n", "3", "--eps", "0.45", "--ratio", "1000",
                                        "--mode", "full", "--t-end", "50", "--samples", "101"};
    auto args = base;
    args.insert(args.end(), {"--out", a.string()});
    REQUIRE(invoke(args).code == 0);
    args = base;
    args.insert(args.end(), {"--out", b.string()});
    REQUIRE(invoke(args).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(fs::exists(a.string() + ".manifest.json"));

    const auto replayed = dir / "replayed.csv";
    REQUIRE(invoke({"replay", a.string() + ".manifest.json", "--out", replayed.string()}).code == 0);
    CHECK(slurp(replayed) == slurp(a));

    const auto fit = invoke({"fit", "--in", a.string(), "--window", "10:50"});
    REQUIRE(fit.code == 0);
    CHECK(nlohmann::json::parse(fit.out).at("mode") == 1);
}

TEST_CASE("sweep output is deterministic and replayable") {
    const auto dir = scratch();
    const auto out = dir / "sweep.csv";
    REQUIRE(invoke({"sweep", "--n", "3", "--eps", "0.05:0.6:0.05", "--ratio-log", "1:6:0.5", "--jobs", "2", "--out",
                    out.string()})
                .code == 0);
    const auto first = slurp(out);
    CHECK(first.rfind("epsilon,ratio,lambda_max,unstable\n", 0) == 0);
    const auto manifest = nlohmann::json::parse(slurp(out.string() + ".manifest.json"));
    CHECK(manifest.at("options").at("epsilon_grid").size() == 12);
    CHECK(manifest.at("options").at("ratio_grid").size() == 11);

    const auto again = dir / "sweep2.csv";
    REQUIRE(invoke({"replay", out.string() + ".manifest.json", "--out", again.string()}).code == 0);
    CHECK(slurp(again) == first);
}

}
