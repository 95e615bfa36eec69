#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccrbudget/csv.hpp"
#include "ccrbudget/scenarios.hpp"

namespace ccrb::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_error = 1,
    exit_instability = 2,
    exit_validation = 3,
    exit_suite_failure = 4,
};

struct AnalyzeConfig {
    std::filesystem::path spec;
    std::optional<std::filesystem::path> inputs;
};

struct AnalyzeResult {
    int exit_code = exit_ok;
    nlohmann::json report;
};

/// Never throws for spec or stability problems; those become exit codes with
/// an "error" entry in the report.
AnalyzeResult cmd_analyze(const AnalyzeConfig& config);

enum class SweepScenario { fig1, fig2 };

struct SweepConfig {
    SweepScenario scenario = SweepScenario::fig1;
    std::map<std::string, double> params;  // overrides of scenario defaults
    std::vector<GridSpec> grids;           // Cartesian product, first grid outermost
    unsigned workers = 1;
};

/// Parameter names accepted by a scenario (also valid grid variables).
std::vector<std::string> sweep_parameters(SweepScenario scenario);
std::string sweep_header(SweepScenario scenario);

/// CSV text with header; rows in grid order. Unstable or singular points keep
/// their input columns and print nan in computed columns. Throws SpecError on
/// unknown variables or an empty grid list.
std::string cmd_sweep(const SweepConfig& config);

struct BoundaryConfig {
    ThreeModeParams params;
    bool use_optimal_coupling = false;  // replace g_script by the numeric optimum
    GridSpec n_o_grid{"n_o", 0.0, 2.0, 21, false};
    GridSpec n_m_grid{"n_m", 0.0, 1.0, 21, false};
    unsigned workers = 1;
};

struct BoundaryResult {
    int exit_code = exit_ok;
    nlohmann::json report;
    std::string csv;  // n_o,n_m,duan_direct,duan_budget,entangled
};

BoundaryResult cmd_boundary(const BoundaryConfig& config);

struct VerifyConfig {
    std::uint64_t seed = 20240607;
    std::optional<double> tolerance;  // replaces every suite tolerance when set
};

struct SuiteResult {
    std::string name;
    double tolerance = 0.0;
    double max_residual = 0.0;
    std::size_t cases = 0;
    bool pass = false;
    nlohmann::json details;
};

struct VerifyResult {
    int exit_code = exit_ok;
    std::vector<SuiteResult> suites;
    nlohmann::json report;
};

VerifyResult cmd_verify(const VerifyConfig& config);

/// Runs fn(k) for k in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

}  // namespace ccrb::cli
