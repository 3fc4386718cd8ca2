#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "app.hpp"
#include "reference_formulas.hpp"
#include "takiff/errors.hpp"

using namespace takiff;
using namespace takiff::app;
using nlohmann::json;
namespace fs = std::filesystem;

namespace
{

fs::path workdir()
{
    const char *env = std::getenv("TAKIFF_TEST_WORKDIR");
    fs::path dir = env ? fs::path(env) : fs::temp_directory_path() / "takiff_cli_tests";
    fs::create_directories(dir);
    return dir;
}

json sl2_rest_config()
{
    return json::parse(R"({
        "algebra": "A", "rank": 1, "N": 2, "chart": "sl2-rescaled",
        "initial": {"preset": "zero-velocity", "q": [[0.3, -0.4, 0.7]]},
        "integrator": {"scheme": "rk4", "dt": 0.001, "T": 2.0}
    })");
}

std::vector<std::vector<std::string>> read_csv(const std::string &text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(cells);
    }
    return rows;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run_cli(const std::string &command, const json &cfg, const std::string &name)
{
    const char *cli = std::getenv("TAKIFF_CLI");
    REQUIRE_MESSAGE(cli != nullptr, "TAKIFF_CLI not set");
    const fs::path path = workdir() / (name + ".json");
    std::ofstream(path) << cfg.dump(2);
    const std::string cmd = std::string(cli) + " " + command + " --config " + path.string() + " > "
                            + (workdir() / (name + ".stdout")).string() + " 2> " + (workdir() / (name + ".stderr")).string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("number formatting")
{
    CHECK(format_double(1.0) == "1.0000000000000000e+00");
    CHECK(format_double(-0.1) == "-1.0000000000000001e-01");
    const double x = 0.1 + 0.2;
    CHECK(std::stod(format_double(x)) == x);
    CHECK(dump_json(json{{"a", 0.5}}, 0) == "{\"a\":5.0000000000000000e-01}");
    CHECK(dump_json(json{{"n", 3}, {"ok", true}, {"v", json::array({1.0, "s"})}}, 0)
          == "{\"n\":3,\"ok\":true,\"v\":[1.0000000000000000e+00,\"s\"]}");
    CHECK(dump_json(json{{"x", std::nan("")}}, 0) == "{\"x\":null}");
}

TEST_CASE("config parsing")
{
    const RunConfig cfg = parse_config(sl2_rest_config());
    CHECK(cfg.order == 2);
    CHECK(cfg.root_data.name == "A1");
    CHECK(cfg.chart == Chart::sl2_rescaled);
    // stored in the generic chart
    CHECK(cfg.initial.q(0, 2) == doctest::Approx(0.7 * std::sqrt(2.0)));
    CHECK(cfg.initial.p.isZero());
    CHECK(cfg.scheme == Scheme::rk4);

    const auto rejects = [](const std::string &patch) {
        json j = sl2_rest_config();
        j.merge_patch(json::parse(patch));
        CHECK_THROWS_AS(parse_config(j), ConfigError);
    };
    rejects(R"({"integrator": {"dt": 0.1, "T": 0.05}})");
    rejects(R"({"integrator": {"dt": 0.0, "T": 1.0}})");
    rejects(R"({"integrator": {"dt": 0.1, "T": 1.0, "scheme": "euler"}})");
    rejects(R"({"initial": {"q": [[0.1, 0.2]]}})");
    rejects(R"({"initial": {"preset": "moving", "q": [[0.1, 0.2, 0.3]]}})");
    rejects(R"({"N": -1})");
    rejects(R"({"rank": 0})");
    rejects(R"({"algebra": "E8"})");
    rejects(R"({"chart": "polar"})");
    rejects(R"({"rank": 2, "initial": null, "chart": "sl2-rescaled"})");
    rejects(R"({"verify": ["nonsense"]})");
    rejects(R"({"solver": {"kind": "magic"}})");
    rejects(R"({"solver": {"kind": "soliton", "sign": 2}})");

    json lattice = json::parse(R"({"algebra": "lattice", "window": [-3, 3], "N": 1})");
    const RunConfig lc = parse_config(lattice);
    CHECK(lc.root_data.cartan_dim() == 7);
    CHECK(lc.initial.q.isZero());
    lattice["window"] = {2, 2};
    CHECK_THROWS_AS(parse_config(lattice), ConfigError);

    const json custom = json::parse(R"({"algebra": "custom", "pairing": [[2, -1], [-1, 2]], "N": 0,
        "rep": {"dim": 1, "cartan": [[[1]], [[0]]], "raising": [[[0]], [[0]]], "lowering": [[[0]], [[0]]]}})");
    CHECK(parse_config(custom).root_data.rep.has_value());
}

TEST_CASE("simulate writes the documented columns and matches the closed form")
{
    json j = sl2_rest_config();
    j["outputs"] = {{"trajectory_csv", (workdir() / "rest.csv").string()},
                    {"diagnostics_json", (workdir() / "rest.json").string()}};
    const RunConfig cfg = parse_config(j);
    std::ostringstream sink;
    REQUIRE(cmd_simulate(cfg, sink) == ok);
    const auto rows = read_csv(slurp(workdir() / "rest.csv"));
    const std::vector<std::string> header{"t", "q_1_0", "q_1_1", "q_1_2", "p_1_0", "p_1_1", "p_1_2", "H",
                                          "f_0_2", "f_1_2", "f_2_2"};
    CHECK(rows.front() == header);
    CHECK(rows.size() == 2002);
    double worst = 0.0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const double t = std::stod(rows[r][0]);
        const auto want = reference::sl2_rest_n2(t, 0.3, -0.4, 0.7);
        for (int n = 0; n < 3; ++n) {
            worst = std::max(worst, std::abs(std::stod(rows[r][1 + n]) - want[static_cast<std::size_t>(n)]));
        }
    }
    CHECK(worst < 1e-6);
    CHECK(rows[1][1] == "2.9999999999999999e-01");

    const json diag = json::parse(slurp(workdir() / "rest.json"));
    CHECK(diag.at("steps") == 2000);
    for (const auto &[name, drift] : diag.at("max_relative_conserved_drift").items()) {
        CAPTURE(name);
        CHECK(drift.get<double>() < 1e-6);
    }
    CHECK(diag.contains("final_H"));
}

TEST_CASE("simulate output is reproducible")
{
    const RunConfig cfg = parse_config(sl2_rest_config());
    std::ostringstream a, b;
    REQUIRE(cmd_simulate(cfg, a) == ok);
    REQUIRE(cmd_simulate(cfg, b) == ok);
    CHECK(a.str() == b.str());
}

TEST_CASE("solve: jet route agrees with simulation")
{
    for (const char *algebra : {R"({"algebra": "A", "rank": 1})", R"({"algebra": "A", "rank": 2})"}) {
        json j = json::parse(algebra);
        const int s = j["rank"];
        j["N"] = 1;
        json q = json::array(), p = json::array();
        for (int i = 0; i < s; ++i) {
            q.push_back({0.1 * (i + 1), -0.2});
            p.push_back({0.05, 0.1 * i});
        }
        j["initial"] = {{"q", q}, {"p", p}};
        j["integrator"] = {{"dt", 0.001}, {"T", 1.0}};
        j["solver"] = {{"kind", "jet"}};
        const RunConfig cfg = parse_config(j);
        std::ostringstream sim, sol;
        REQUIRE(cmd_simulate(cfg, sim) == ok);
        REQUIRE(cmd_solve(cfg, sol) == ok);
        const auto a = read_csv(sim.str());
        const auto b = read_csv(sol.str());
        REQUIRE(a.size() == b.size());
        CHECK(a.front() == b.front());
        double worst = 0.0;
        for (std::size_t r = 1; r < a.size(); ++r) {
            for (std::size_t c = 0; c < a[r].size(); ++c) {
                worst = std::max(worst, std::abs(std::stod(a[r][c]) - std::stod(b[r][c])));
            }
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("solve: factorized route")
{
    json j = sl2_rest_config();
    j["solver"] = {{"kind", "factorized"}, {"times", {0.0, 1.0, 2.0}}};
    std::ostringstream out;
    REQUIRE(cmd_solve(parse_config(j), out) == ok);
    const auto rows = read_csv(out.str());
    REQUIRE(rows.size() == 4);
    const auto want = reference::sl2_rest_n2(2.0, 0.3, -0.4, 0.7);
    for (int n = 0; n < 3; ++n) {
        CHECK(std::stod(rows[3][1 + n]) == doctest::Approx(want[static_cast<std::size_t>(n)]).epsilon(1e-10));
    }

    json sl3 = json::parse(R"({"algebra": "A", "rank": 2, "N": 1, "solver": {"kind": "factorized"}})");
    CHECK(cmd_solve(parse_config(sl3), out) == solver_unavailable);
    json lattice = json::parse(R"({"algebra": "lattice", "window": [0, 3], "N": 1, "solver": {"kind": "jet"}})");
    CHECK(cmd_solve(parse_config(lattice), out) == solver_unavailable);
    json missing = json::parse(R"({"algebra": "A", "rank": 1, "N": 1})");
    CHECK(cmd_solve(parse_config(missing), out) == config_error);
}

TEST_CASE("solve: soliton route")
{
    const json j = json::parse(R"({"algebra": "lattice", "window": [-4, 4], "N": 1,
        "solver": {"kind": "soliton", "x0": [1.2, 0.3], "x1": [0.0, -0.1], "sign": -1, "times": [0.0, 0.5]}})");
    std::ostringstream out;
    REQUIRE(cmd_solve(parse_config(j), out) == ok);
    const auto rows = read_csv(out.str());
    REQUIRE(rows.size() == 3);
    const auto &header = rows.front();
    const auto ref = reference::soliton_params(1.2, 0.3, 0.0, -0.1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const double t = std::stod(rows[r][0]);
        for (int site = -4; site < 4; ++site) {
            const std::string name = "r_" + std::to_string(site) + "_0";
            const auto col = static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
            REQUIRE(col < header.size());
            CHECK(std::stod(rows[r][col]) == doctest::Approx(reference::soliton_r0(ref, site, t, -1)).epsilon(1e-12));
        }
    }

    json bad = j;
    bad["solver"].erase("x1");
    CHECK(cmd_solve(parse_config(bad), out) == config_error);
    json sl2 = json::parse(R"({"algebra": "A", "rank": 1, "N": 1, "solver": {"kind": "soliton", "kappa": [1.0, 0.0]}})");
    CHECK(cmd_solve(parse_config(sl2), out) == solver_unavailable);
}

TEST_CASE("verify: default sl(2) configuration passes")
{
    json j = sl2_rest_config();
    j["verify_samples"] = 10;
    std::ostringstream out;
    REQUIRE(cmd_verify(parse_config(j), out) == ok);
    const json report = json::parse(out.str());
    for (const auto &name : verify_check_names()) {
        CAPTURE(name);
        REQUIRE(report.contains(name));
        CHECK(report[name]["pass"] == true);
        CHECK(report[name]["worst_value"].get<double>() <= report[name]["tolerance"].get<double>());
    }
    CHECK(report["bracket"]["worst_value"].get<double>() <= 1e-6);
}

TEST_CASE("verify: singular pairing surfaces the error")
{
    const json j = json::parse(R"({"algebra": "custom", "pairing": [[2, -1], [-4, 2]], "N": 1,
        "initial": {"q": [[0.1, 0.2], [0.3, -0.1]], "p": [[0.0, 0.1], [0.2, 0.0]]}})");
    std::ostringstream out;
    CHECK(cmd_verify(parse_config(j), out) == verify_failed);
    const json report = json::parse(out.str());
    CHECK(report["darboux_roundtrip"]["pass"] == false);
    CHECK(report["darboux_roundtrip"]["error"].get<std::string>().find("not square and invertible") != std::string::npos);
}

TEST_CASE("simulate: blowup maps to exit 3")
{
    const json j = json::parse(R"({"algebra": "A", "rank": 1, "N": 0,
        "initial": {"q": [[20.0]], "p": [[0.0]]}, "integrator": {"dt": 0.1, "T": 10.0}})");
    std::ostringstream out;
    CHECK(cmd_simulate(parse_config(j), out) == blowup);
}

TEST_CASE("executable exit codes")
{
    json good = sl2_rest_config();
    good["integrator"]["T"] = 0.01;
    CHECK(run_cli("simulate", good, "good") == 0);
    CHECK(slurp(workdir() / "good.stdout").rfind("t,q_1_0", 0) == 0);

    json short_horizon = good;
    short_horizon["integrator"]["T"] = 0.0001;
    CHECK(run_cli("simulate", short_horizon, "short") == 2);

    const char *cli = std::getenv("TAKIFF_CLI");
    const std::string missing = std::string(cli) + " simulate --config " + (workdir() / "absent.json").string() + " 2>/dev/null";
    int status = std::system(missing.c_str());
    CHECK(WEXITSTATUS(status) == 2);
    const std::string no_args = std::string(cli) + " >/dev/null 2>&1";
    status = std::system(no_args.c_str());
    CHECK(WEXITSTATUS(status) == 2);
    std::ofstream(workdir() / "broken.json") << "{ not json";
    const std::string broken = std::string(cli) + " verify --config " + (workdir() / "broken.json").string() + " 2>/dev/null";
    status = std::system(broken.c_str());
    CHECK(WEXITSTATUS(status) == 2);

    json blow = json::parse(R"({"algebra": "A", "rank": 1, "N": 0,
        "initial": {"q": [[20.0]], "p": [[0.0]]}, "integrator": {"dt": 0.1, "T": 10.0}})");
    CHECK(run_cli("simulate", blow, "blow") == 3);

    json fact = json::parse(R"({"algebra": "A", "rank": 2, "N": 1, "solver": {"kind": "factorized"}})");
    CHECK(run_cli("solve", fact, "fact") == 4);

    json singular = json::parse(R"({"algebra": "custom", "pairing": [[2, -1], [-4, 2]], "N": 1,
        "verify": ["darboux_roundtrip"]})");
    CHECK(run_cli("verify", singular, "singular") == 5);
}

TEST_CASE("shipped example configurations parse")
{
    const char *dir = std::getenv("TAKIFF_CONFIG_DIR");
    REQUIRE(dir != nullptr);
    int count = 0;
    for (const auto &entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") {
            CAPTURE(entry.path().string());
            CHECK_NOTHROW(load_config(entry.path()));
            ++count;
        }
    }
    CHECK(count >= 4);
}
