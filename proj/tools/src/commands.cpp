#include "ccrbudget_cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <mutex>
#include <sstream>
#include <thread>

#include "ccrbudget/budget.hpp"
#include "ccrbudget/errors.hpp"
#include "ccrbudget/io.hpp"
#include "ccrbudget/network.hpp"
#include "ccrbudget/steady_state.hpp"

namespace ccrb::cli {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json spectrum_json(const Spectrum& s) {
    json out = json::array();
    for (const auto& z : s.eigenvalues) out.push_back(complex_json(z));
    return out;
}

}  // namespace

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(count, 1)));
    if (n_threads <= 1) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < count; k = next++) {
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// analyze

AnalyzeResult cmd_analyze(const AnalyzeConfig& config) {
    AnalyzeResult result;
    json& r = result.report;
    r["convention"] = CovarianceState::convention;

    NetworkSpec spec;
    StateSpace ss;
    InputMoments inputs;
    try {
        spec = load_network_spec(config.spec);
        const ValidationReport v = validate(spec);
        r["warnings"] = v.warnings;
        ss = build_state_space(spec);
        inputs = config.inputs ? load_input_moments(*config.inputs, spec.n_modes()) : bath_moments(spec);
    } catch (const SpecError& e) {
        r["status"] = "invalid";
        r["error"] = e.what();
        result.exit_code = exit_validation;
        return result;
    }

    r["modes"] = spec.n_modes();
    r["spec"] = to_json(spec);
    const Spectrum spectrum = eigenvalues(ss.drift);
    r["spectrum"] = spectrum_json(spectrum);
    const RealizabilityReport pr = check_physical_realizability(ss);
    r["pr_residual"] = pr.residual;
    r["pr_pass"] = pr.pass;
    r["conjugation_residual"] = conjugation_symmetry_residual(ss.drift);
    r["passive"] = is_passive(ss);

    if (!is_stable(ss.drift)) {
        r["status"] = "unstable";
        r["stable"] = false;
        r["leading_eigenvalue"] = complex_json(spectrum.leading());
        std::ostringstream os;
        os << "drift matrix is unstable: eigenvalue " << spectrum.leading() << " is not in the open left half-plane";
        r["error"] = os.str();
        result.exit_code = exit_instability;
        return result;
    }
    r["stable"] = true;

    try {
        const CommutatorBudget b = compute_budget(ss);
        r["budget"] = budget_report(b);
        r["inputs"] = to_json(inputs);
        const CovarianceState cs = steady_covariance(ss, inputs);
        r["covariance"] = covariance_report(cs);
        try {
            json dec;
            dec["theta_0"] = variance_decomposition(ss, b, inputs, 0.0);
            dec["theta_pi_2"] = variance_decomposition(ss, b, inputs, 0.5 * std::numbers::pi);
            r["variance_decomposition"] = dec;
        } catch (const ApplicabilityError& e) {
            r["variance_decomposition"] = {{"applicable", false}, {"reason", e.what()}};
        }
        r["status"] = "ok";
    } catch (const StabilityError& e) {
        r["status"] = "unstable";
        r["error"] = e.what();
        result.exit_code = exit_instability;
    } catch (const Error& e) {
        r["status"] = "error";
        r["error"] = e.what();
        result.exit_code = exit_error;
    }
    return result;
}

// ---------------------------------------------------------------------------
// sweep

namespace {

struct ScenarioDefaults {
    std::vector<std::pair<std::string, double>> params;
};

ScenarioDefaults defaults(SweepScenario s) {
    switch (s) {
        case SweepScenario::fig1:
            return {{{"g_script", 1.0}, {"xi", 0.5}, {"gamma1", 1.0}, {"gamma2", 1.0}, {"n1", 0.0}, {"n2", 0.0}}};
        case SweepScenario::fig2:
            return {{{"delta_eta", 0.0},
                     {"gamma1", 4.0},
                     {"gamma2", 1.0},
                     {"eta_mean", 0.0},
                     {"g_minus", 1000.0},
                     {"g_plus", 990.0},
                     {"n1", 0.0},
                     {"n2", 0.0}}};
    }
    return {};
}

std::vector<double> fig1_row(const std::map<std::string, double>& p) {
    const double g = p.at("g_script");
    const double xi = p.at("xi");
    const double g1 = p.at("gamma1");
    const double g2 = p.at("gamma2");
    std::vector<double> row{g, xi, g1, g2, kNaN, kNaN, kNaN};
    try {
        const SqueezingPowerResult r =
            two_mode_squeezing_power(TwoModeParams::from_frame(g, xi, g1, g2, p.at("n1"), p.at("n2")));
        row[4] = r.normalized[0];
        row[5] = r.normalized[1];
        row[6] = r.sum;
    } catch (const StabilityError&) {
    } catch (const FrameError&) {
    }
    return row;
}

std::vector<double> fig2_row(const std::map<std::string, double>& p) {
    const double d = p.at("delta_eta");
    const double g1 = p.at("gamma1");
    const double g2 = p.at("gamma2");
    std::vector<double> row{d, g1, g2, kNaN, kNaN};
    try {
        row[3] = parametric_bound(g1, g2, d);
    } catch (const SingularityError&) {
    }
    ParametricParams pp;
    pp.base.gamma1 = g1;
    pp.base.gamma2 = g2;
    pp.base.g_minus = p.at("g_minus");
    pp.base.g_plus = p.at("g_plus");
    pp.base.n1 = p.at("n1");
    pp.base.n2 = p.at("n2");
    pp.eta1 = p.at("eta_mean") + 0.5 * d;
    pp.eta2 = p.at("eta_mean") - 0.5 * d;
    try {
        row[4] = parametric_variance_check(pp).x_sum;
    } catch (const StabilityError&) {
    } catch (const SingularityError&) {
    }
    return row;
}

}  // namespace

std::vector<std::string> sweep_parameters(SweepScenario scenario) {
    std::vector<std::string> names;
    for (const auto& [k, v] : defaults(scenario).params) names.push_back(k);
    return names;
}

std::string sweep_header(SweepScenario scenario) {
    switch (scenario) {
        case SweepScenario::fig1:
            return "g_script,xi,gamma1,gamma2,norm_var1,norm_var2,sum";
        case SweepScenario::fig2:
            return "delta_eta,gamma1,gamma2,bound,direct_sum";
    }
    return {};
}

std::string cmd_sweep(const SweepConfig& config) {
    std::map<std::string, double> base;
    for (const auto& [k, v] : defaults(config.scenario).params) base[k] = v;
    for (const auto& [k, v] : config.params) {
        if (!base.count(k)) throw SpecError("sweep: unknown parameter '" + k + "'");
        base[k] = v;
    }
    if (config.grids.empty()) throw SpecError("sweep: at least one --grid is required");

    std::vector<std::vector<double>> axes;
    std::size_t total = 1;
    for (const auto& g : config.grids) {
        if (!base.count(g.variable)) throw SpecError("sweep: unknown grid variable '" + g.variable + "'");
        if (g.count < 2) throw SpecError("sweep: grid '" + g.variable + "' needs at least 2 points");
        axes.push_back(g.values());
        total *= g.count;
    }

    std::vector<std::string> lines(total);
    parallel_for(total, config.workers, [&](std::size_t k) {
        std::map<std::string, double> p = base;
        std::size_t rem = k;
        for (std::size_t a = axes.size(); a-- > 0;) {
            const std::size_t n = axes[a].size();
            p[config.grids[a].variable] = axes[a][rem % n];
            rem /= n;
        }
        const std::vector<double> row =
            config.scenario == SweepScenario::fig1 ? fig1_row(p) : fig2_row(p);
        lines[k] = csv_row(row);
    });

    std::string out = sweep_header(config.scenario);
    out += '\n';
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// boundary

BoundaryResult cmd_boundary(const BoundaryConfig& config) {
    BoundaryResult result;
    json& r = result.report;
    r["convention"] = CovarianceState::convention;
    ThreeModeParams p = config.params;
    try {
        if (config.n_o_grid.count < 2 || config.n_m_grid.count < 2) {
            throw SpecError("boundary: grids need at least 2 points");
        }
        const OptimalCoupling opt = optimal_coupling(p.kappa, p.omega, p.gamma_m, p.xi);
        r["g_opt"] = {{"formula", opt.g_formula},
                      {"numeric", opt.g_numeric},
                      {"eta_e_formula", opt.eta_formula},
                      {"eta_e_numeric", opt.eta_numeric},
                      {"stable_scan_min", opt.stable_min},
                      {"stable_scan_max", opt.stable_max}};
        if (config.use_optimal_coupling) p.g_script = opt.g_numeric;
        r["params"] = {{"g_script", p.g_script}, {"omega", p.omega},     {"kappa", p.kappa},
                       {"gamma_m", p.gamma_m},   {"xi", p.xi}};

        const ThreeModeBudget tb = three_mode_budget(p);
        r["I"] = tb.i;
        r["eta_e"] = tb.eta_e;
        r["sum_rule_residual"] = tb.completeness_residual;
        r["gamma_rule_residual"] = tb.gamma_rule_residual;
        const BoundaryLine line = separability_boundary(tb.eta_e, p.xi);
        r["boundary"] = {{"slope", line.slope},
                         {"n_o_intercept", line.n_o_intercept},
                         {"n_m_intercept", line.n_m_intercept},
                         {"degenerate", line.degenerate}};

        const std::vector<double> n_o = config.n_o_grid.values();
        const std::vector<double> n_m = config.n_m_grid.values();
        std::vector<std::string> lines(n_o.size() * n_m.size());
        parallel_for(lines.size(), config.workers, [&](std::size_t k) {
            ThreeModeParams q = p;
            q.n_o = n_o[k / n_m.size()];
            q.n_m = n_m[k % n_m.size()];
            const DuanResult d = duan_quantity(q);
            const double row[] = {q.n_o, q.n_m, d.direct_value, d.budget_value, d.entangled ? 1.0 : 0.0};
            lines[k] = csv_row(row);
        });
        result.csv = "n_o,n_m,duan_direct,duan_budget,entangled\n";
        for (const auto& l : lines) result.csv += l + "\n";
        r["status"] = "ok";
    } catch (const StabilityError& e) {
        r["status"] = "unstable";
        r["error"] = e.what();
        result.exit_code = exit_instability;
    } catch (const SpecError& e) {
        r["status"] = "invalid";
        r["error"] = e.what();
        result.exit_code = exit_validation;
    } catch (const ApplicabilityError& e) {
        r["status"] = "invalid";
        r["error"] = e.what();
        result.exit_code = exit_validation;
    }
    return result;
}

}  // namespace ccrb::cli
