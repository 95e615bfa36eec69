#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ccrbudget/errors.hpp"
#include "ccrbudget_cli/commands.hpp"

namespace {

using namespace ccrb;
using namespace ccrb::cli;

int write_output(const std::optional<std::string>& path, const std::string& text) {
    if (!path || *path == "-") {
        std::cout << text;
        return exit_ok;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write '" << *path << "'\n";
        return exit_error;
    }
    out << text;
    return exit_ok;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Commutator budgets, squeezing bounds and separability boundaries of linear bosonic networks"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Analyze a network spec (JSON)");
    std::string spec_path;
    std::optional<std::string> inputs_path;
    std::optional<std::string> analyze_out;
    analyze->add_option("--spec", spec_path, "Network spec JSON")->required()->check(CLI::ExistingFile);
    analyze->add_option("--inputs", inputs_path, "Input moments JSON (default: bath moments of the spec)")
        ->check(CLI::ExistingFile);
    analyze->add_option("--out", analyze_out, "Report path (default: stdout)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Scenario parameter sweeps as CSV");
    std::string scenario_name;
    std::vector<std::string> sweep_grids;
    std::optional<std::string> sweep_out;
    unsigned sweep_workers = 1;
    std::map<std::string, double> sweep_params;
    sweep->add_option("--scenario", scenario_name, "fig1 or fig2")
        ->required()
        ->check(CLI::IsMember({"fig1", "fig2"}));
    sweep->add_option("--grid", sweep_grids, "VAR:START:STOP:COUNT[:log] (repeatable)")->required();
    sweep->add_option("--out", sweep_out, "CSV path (default: stdout)");
    sweep->add_option("--workers", sweep_workers, "Worker threads")->check(CLI::PositiveNumber);
    const std::vector<std::string> sweep_names = {"g_script", "xi",     "gamma1",  "gamma2", "n1",
                                                  "n2",       "delta_eta", "eta_mean", "g_minus", "g_plus"};
    std::map<std::string, std::optional<double>> sweep_flags;
    for (const auto& name : sweep_names) {
        std::string flag = "--" + name;
        std::replace(flag.begin(), flag.end(), '_', '-');
        sweep->add_option(flag, sweep_flags[name], "Scenario parameter " + name);
    }

    // boundary
    auto* boundary = app.add_subcommand("boundary", "Three-mode separability boundary");
    BoundaryConfig bcfg;
    bcfg.params.xi = 0.5;
    std::vector<std::string> boundary_grids;
    std::optional<std::string> boundary_out;
    std::optional<std::string> boundary_csv;
    boundary->add_option("--kappa", bcfg.params.kappa, "Cavity linewidth")->capture_default_str();
    boundary->add_option("--omega", bcfg.params.omega, "Mechanical frequency difference")->capture_default_str();
    boundary->add_option("--gamma-m", bcfg.params.gamma_m, "Mechanical damping")->capture_default_str();
    boundary->add_option("--xi", bcfg.params.xi, "Squeezing parameter")->capture_default_str();
    auto* g_script_opt =
        boundary->add_option("--g-script", bcfg.params.g_script, "Collective coupling")->capture_default_str();
    boundary->add_flag("--g-opt", bcfg.use_optimal_coupling, "Use the numerically optimal coupling")
        ->excludes(g_script_opt);
    boundary->add_option("--grid", boundary_grids, "n_o:START:STOP:COUNT and n_m:START:STOP:COUNT");
    boundary->add_option("--out", boundary_out, "JSON report path (default: stdout)");
    boundary->add_option("--csv", boundary_csv, "CSV path for the (n_o, n_m) grid");
    boundary->add_option("--workers", bcfg.workers, "Worker threads")->check(CLI::PositiveNumber);

    // verify
    auto* verify = app.add_subcommand("verify", "Run the seeded invariant suites");
    VerifyConfig vcfg;
    std::optional<std::string> verify_out;
    verify->add_option("--seed", vcfg.seed, "PRNG seed")->capture_default_str();
    verify->add_option("--tol", vcfg.tolerance, "Override every suite tolerance");
    verify->add_option("--out", verify_out, "JSON report path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_validation;
    }

    try {
        if (*analyze) {
            const AnalyzeResult r = cmd_analyze({spec_path, inputs_path ? std::optional<std::filesystem::path>(*inputs_path)
                                                                        : std::nullopt});
            if (r.exit_code != exit_ok && r.report.contains("error")) {
                std::cerr << "error: " << r.report["error"].get<std::string>() << "\n";
            }
            const int w = write_output(analyze_out, dump(r.report));
            return r.exit_code != exit_ok ? r.exit_code : w;
        }
        if (*sweep) {
            SweepConfig cfg;
            cfg.scenario = scenario_name == "fig1" ? SweepScenario::fig1 : SweepScenario::fig2;
            cfg.workers = sweep_workers;
            const auto allowed = sweep_parameters(cfg.scenario);
            for (const auto& [name, value] : sweep_flags) {
                if (!value) continue;
                if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
                    throw SpecError("sweep " + scenario_name + ": parameter '" + name + "' does not apply");
                }
                cfg.params[name] = *value;
            }
            for (const auto& g : sweep_grids) cfg.grids.push_back(parse_grid(g));
            return write_output(sweep_out, cmd_sweep(cfg));
        }
        if (*boundary) {
            for (const auto& text : boundary_grids) {
                const GridSpec g = parse_grid(text);
                if (g.variable == "n_o") {
                    bcfg.n_o_grid = g;
                } else if (g.variable == "n_m") {
                    bcfg.n_m_grid = g;
                } else {
                    throw SpecError("boundary: grid variable must be n_o or n_m, got '" + g.variable + "'");
                }
            }
            const BoundaryResult r = cmd_boundary(bcfg);
            if (r.exit_code != exit_ok) {
                std::cerr << "error: " << r.report["error"].get<std::string>() << "\n";
                write_output(boundary_out, dump(r.report));
                return r.exit_code;
            }
            int w = write_output(boundary_out, dump(r.report));
            if (boundary_csv && w == exit_ok) w = write_output(boundary_csv, r.csv);
            return w;
        }
        if (*verify) {
            const VerifyResult r = cmd_verify(vcfg);
            for (const auto& s : r.suites) {
                std::cerr << (s.pass ? "PASS " : "FAIL ") << s.name << " max_residual=" << s.max_residual
                          << " tol=" << s.tolerance << " cases=" << s.cases << "\n";
            }
            const int w = write_output(verify_out, dump(r.report));
            return r.exit_code != exit_ok ? r.exit_code : w;
        }
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const StabilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_instability;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_error;
    }
    return exit_ok;
}
