#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "ccrbudget/errors.hpp"
#include "ccrbudget_cli/commands.hpp"

using namespace ccrb;
using namespace ccrb::cli;

namespace {

const std::filesystem::path kData = CCRBUDGET_TEST_DATA_DIR;

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<double> fields(const std::string& line) {
    std::vector<double> out;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');) out.push_back(std::stod(f));
    return out;
}

}  // namespace

TEST_CASE("analyze single mode") {
    const AnalyzeResult r = cmd_analyze({kData / "single_mode.json", std::nullopt});
    CHECK(r.exit_code == exit_ok);
    CHECK(r.report["status"] == "ok");
    CHECK(r.report["budget"]["I"][0][0].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.report["covariance"]["modes"][0]["var_x"].get<double>() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("analyze beam splitter") {
    const AnalyzeResult r = cmd_analyze({kData / "beam_splitter.json", std::nullopt});
    REQUIRE(r.exit_code == exit_ok);
    const auto& i = r.report["budget"]["I"];
    CHECK(i[0][1].get<double>() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(i[1][0].get<double>() == doctest::Approx(0.25).epsilon(1e-12));
    // 0.75 * (0 + 1/2) + 0.25 * (2 + 1/2)
    CHECK(r.report["covariance"]["modes"][0]["var_x"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.report["budget"]["sum_rule_residual"].get<double>() < 1e-9);
}

TEST_CASE("analyze with explicit inputs") {
    const AnalyzeResult r = cmd_analyze({kData / "beam_splitter.json", kData / "squeezed_inputs.json"});
    CHECK(r.exit_code == exit_ok);
    CHECK(r.report["inputs"].is_object());
}

TEST_CASE("analyze failure exit codes") {
    const AnalyzeResult u = cmd_analyze({kData / "unstable_squeezer.json", std::nullopt});
    CHECK(u.exit_code == exit_instability);
    CHECK(u.report["status"] == "unstable");
    CHECK(u.report["leading_eigenvalue"]["re"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));

    const AnalyzeResult v = cmd_analyze({kData / "invalid_gamma.json", std::nullopt});
    CHECK(v.exit_code == exit_validation);
    CHECK(v.report["status"] == "invalid");

    const AnalyzeResult missing = cmd_analyze({kData / "does_not_exist.json", std::nullopt});
    CHECK(missing.exit_code == exit_validation);
}

TEST_CASE("fig1 sweep") {
    SweepConfig c;
    c.grids = {parse_grid("g_script:0.5:2:4"), parse_grid("xi:0:1:3")};
    c.workers = 3;
    const std::string csv = cmd_sweep(c);
    const auto ls = lines(csv);
    REQUIRE(ls.size() == 13);
    CHECK(ls[0] == sweep_header(SweepScenario::fig1));
    for (std::size_t k = 1; k < ls.size(); ++k) {
        const auto f = fields(ls[k]);
        REQUIRE(f.size() == 7);
        CHECK(f[6] >= 1.0 - 1e-9);
    }
    // First grid is outermost.
    CHECK(fields(ls[1])[0] == 0.5);
    CHECK(fields(ls[3])[0] == 0.5);
    CHECK(fields(ls[4])[0] == 1.0);
    CHECK(fields(ls[1])[6] == doctest::Approx(2.0).epsilon(1e-12));

    c.workers = 1;
    CHECK(cmd_sweep(c) == csv);
}

TEST_CASE("fig2 sweep") {
    SweepConfig c;
    c.scenario = SweepScenario::fig2;
    c.grids = {parse_grid("delta_eta:-2:2:41")};
    c.workers = 4;
    const auto ls = lines(cmd_sweep(c));
    REQUIRE(ls.size() == 42);
    CHECK(ls[0] == sweep_header(SweepScenario::fig2));
    double best = 1e9, best_d = 0.0;
    for (std::size_t k = 1; k < ls.size(); ++k) {
        const auto f = fields(ls[k]);
        if (std::isfinite(f[3]) && f[3] < best) {
            best = f[3];
            best_d = f[0];
        }
        if (std::isfinite(f[3]) && std::isfinite(f[4])) CHECK(f[4] >= f[3] - 1e-9);
    }
    CHECK(best_d == doctest::Approx(1.7).epsilon(1e-12));
    CHECK(best == doctest::Approx(0.9).epsilon(1e-3));
}

TEST_CASE("sweep rejects bad configuration") {
    SweepConfig c;
    CHECK_THROWS_AS(cmd_sweep(c), SpecError);
    c.grids = {parse_grid("bogus:0:1:3")};
    CHECK_THROWS_AS(cmd_sweep(c), SpecError);
    c.params["also_bogus"] = 1.0;
    c.grids = {parse_grid("xi:0:1:3")};
    CHECK_THROWS_AS(cmd_sweep(c), SpecError);
}

TEST_CASE("boundary output") {
    BoundaryConfig c;
    c.params.g_script = 1.0;
    c.params.xi = 0.5;
    c.n_o_grid = parse_grid("n_o:0:1:3");
    c.n_m_grid = parse_grid("n_m:0:0.5:3");
    c.workers = 2;
    const BoundaryResult r = cmd_boundary(c);
    CHECK(r.exit_code == exit_ok);
    const auto ls = lines(r.csv);
    REQUIRE(ls.size() == 10);
    CHECK(ls[0] == "n_o,n_m,duan_direct,duan_budget,entangled");
    const auto first = fields(ls[1]);
    CHECK(first[2] == doctest::Approx(0.386292165667).epsilon(1e-10));
    CHECK(first[4] == 1.0);
    CHECK(r.report["eta_e"].get<double>() > 0.0);

    c.use_optimal_coupling = true;
    const BoundaryResult o = cmd_boundary(c);
    CHECK(o.exit_code == exit_ok);
    CHECK(o.report["g_opt"]["formula"].get<double>() > 0.0);
}

TEST_CASE("verify is deterministic") {
    const VerifyResult a = cmd_verify({});
    const VerifyResult b = cmd_verify({});
    CHECK(a.report.dump() == b.report.dump());
    CHECK(a.exit_code == exit_ok);
    for (const auto& s : a.suites) {
        INFO(s.name);
        CHECK(s.pass);
    }
    VerifyConfig tight;
    tight.tolerance = 1e-300;
    CHECK(cmd_verify(tight).exit_code == exit_suite_failure);
}
