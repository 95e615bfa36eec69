#include <algorithm>
#include <cmath>
#include <numbers>

#include "ccrbudget/budget.hpp"
#include "ccrbudget/errors.hpp"
#include "ccrbudget/random_network.hpp"
#include "ccrbudget/scenarios.hpp"
#include "ccrbudget/steady_state.hpp"
#include "ccrbudget_cli/commands.hpp"

namespace ccrb::cli {

using nlohmann::json;

namespace {

class Suite {
public:
    Suite(std::string name, double default_tol, const VerifyConfig& cfg)
        : name_(std::move(name)), tol_(cfg.tolerance.value_or(default_tol)) {}

    double tol() const noexcept { return tol_; }
    void record(double residual) {
        ++cases_;
        if (std::isnan(residual)) {
            nan_ = true;
            return;
        }
        worst_ = std::max(worst_, residual);
    }
    SuiteResult finish(json details = json::object()) const {
        SuiteResult r;
        r.name = name_;
        r.tolerance = tol_;
        r.max_residual = worst_;
        r.cases = cases_;
        r.pass = !nan_ && worst_ <= tol_;
        r.details = std::move(details);
        return r;
    }

private:
    std::string name_;
    double tol_;
    double worst_ = 0.0;
    std::size_t cases_ = 0;
    bool nan_ = false;
};

double below(double floor, double value) { return std::max(0.0, floor - value); }

struct NetworkCase {
    NetworkSpec spec;
    StateSpace ss;
    CommutatorBudget budget;
};

std::vector<NetworkCase> random_networks(std::uint64_t seed, std::size_t count) {
    RandomNetworkGenerator gen(seed);
    std::vector<NetworkCase> out;
    for (std::size_t k = 0; k < count; ++k) {
        RandomNetworkOptions o;
        o.passive = k % 2 == 0;
        o.detuning_max = 1.0;
        NetworkCase c;
        c.spec = gen.network(o);
        c.ss = build_state_space(c.spec);
        c.budget = compute_budget(c.ss);
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace

VerifyResult cmd_verify(const VerifyConfig& cfg) {
    VerifyResult result;
    const std::vector<NetworkCase> nets = random_networks(cfg.seed, 100);

    {
        Suite ccr("ccr_sum_rule", 1e-9, cfg);
        Suite pr("physical_realizability", 1e-12, cfg);
        Suite gamma("gamma_sum_rule", 1e-9, cfg);
        Suite pos("budget_positivity", 1e-10, cfg);
        for (const auto& c : nets) {
            const SumRuleReport rules = verify_sum_rules(c.budget);
            ccr.record(rules.completeness_residual);
            pr.record(check_physical_realizability(c.ss).residual);
            if (rules.gamma_rule_applicable) gamma.record(rules.max_gamma_rule_residual());
            if (rules.positivity_applicable) pos.record(below(0.0, rules.min_positivity_eig()));
        }
        result.suites.push_back(ccr.finish());
        result.suites.push_back(pr.finish());
        result.suites.push_back(gamma.finish());
        result.suites.push_back(pos.finish());
    }

    {
        Suite routes("budget_route_agreement", 1e-6, cfg);
        for (const auto& c : nets) {
            const CommutatorBudget spec_route = budget_via_spectrum(c.ss, 1e-9);
            double worst = 0.0;
            for (std::size_t j = 0; j < c.budget.n_modes(); ++j) {
                worst = std::max(worst, (c.budget.per_channel_k[j] - spec_route.per_channel_k[j]).max_abs());
            }
            routes.record(worst);
        }
        result.suites.push_back(routes.finish());
    }

    {
        Suite rec("reciprocity", 1e-9, cfg);
        RandomNetworkGenerator gen(cfg.seed ^ 0x5eedULL);
        RandomNetworkOptions o;
        o.real_amplitudes = true;
        o.detuning_max = 1.0;
        for (int k = 0; k < 50; ++k) {
            const StateSpace ss = build_state_space(gen.network(o));
            rec.record(verify_reciprocity(compute_budget(ss)).max_residual());
        }
        result.suites.push_back(rec.finish());
    }

    {
        Suite bs("beam_splitter_closed_form", 1e-12, cfg);
        for (double g : {0.1, 0.5, 1.0, 2.0, 5.0})
            for (double g1 : {0.2, 1.0, 3.0})
                for (double g2 : {0.5, 2.0}) {
                    NetworkSpec s;
                    s.baths = {{g1, 0.0, 0.0}, {g2, 0.0, 0.0}};
                    s.couplings = {CouplingTerm::beam_splitter(0, 1, g)};
                    const CommutatorBudget b = compute_budget(build_state_space(s));
                    const double expected = 4 * g * g * g2 / ((g1 + g2) * (g1 * g2 + 4 * g * g));
                    bs.record(std::abs(b.transfer[0][1] - expected));
                }
        result.suites.push_back(bs.finish());
    }

    {
        Suite routes("variance_decomposition", 1e-10, cfg);
        Suite phys("covariance_physicality", 1e-10, cfg);
        RandomNetworkGenerator gen(cfg.seed + 1);
        for (std::size_t k = 0; k < 100; ++k) {
            RandomNetworkOptions o;
            o.passive = k < 50;
            o.detuning_max = 1.0;
            const StateSpace ss = build_state_space(gen.network(o));
            const InputMoments in = InputMoments::thermal(gen.occupancies(ss.n_modes(), 3.0));
            const CovarianceState cs = steady_covariance(ss, in);
            double worst_phys = below(0.0, cs.min_eigenvalue());
            for (std::size_t i = 0; i < ss.n_modes(); ++i) {
                worst_phys = std::max(worst_phys, below(0.25, cs.heisenberg_product(i)));
            }
            phys.record(worst_phys);
            if (!o.passive) continue;
            const CommutatorBudget b = compute_budget(ss);
            for (int a = 0; a < 8; ++a) {
                const double theta = std::numbers::pi * a / 8.0;
                const std::vector<double> dec = variance_decomposition(ss, b, in, theta);
                double worst = 0.0;
                for (std::size_t i = 0; i < ss.n_modes(); ++i)
                    worst = std::max(worst, std::abs(dec[i] - quadrature_variance(cs, i, theta)));
                routes.record(worst);
            }
        }
        result.suites.push_back(routes.finish());
        result.suites.push_back(phys.finish());
    }

    {
        Suite power("squeezing_power_bound", 1e-9, cfg);
        double min_sum = std::numeric_limits<double>::infinity();
        for (int a = 0; a < 20; ++a) {
            const double g = 0.1 * std::pow(500.0, a / 19.0);
            for (int x = 0; x < 20; ++x) {
                const double xi = 0.05 + 1.45 * x / 19.0;
                for (double n : {0.0, 1.5}) {
                    const SqueezingPowerResult r =
                        two_mode_squeezing_power(TwoModeParams::from_frame(g, xi, 1.0, 1.0, n, 0.5 * n));
                    min_sum = std::min(min_sum, r.sum);
                    power.record(below(1.0, r.sum));
                }
            }
        }
        result.suites.push_back(power.finish({{"min_sum", min_sum}}));
    }

    {
        Suite opt("parametric_optimum", 1e-9, cfg);
        for (auto [g1, g2] : {std::pair{4.0, 1.0}, {1.0, 1.0}, {1.0, 9.0}, {2.0, 0.5}}) {
            const ParametricOptimum o = parametric_optimum(g1, g2);
            opt.record(std::abs(o.numeric_min_value - o.min_value));
            opt.record(std::abs(parametric_bound(g1, g2, o.delta_eta_star) - o.min_value));
        }
        result.suites.push_back(opt.finish());

        Suite bound("parametric_bound", 1e-9, cfg);
        std::size_t unstable = 0;
        for (int k = 1; k < 40; ++k) {
            const double d = -5.0 + 10.0 * k / 40.0;
            for (double gm : {1.0, 10.0, 1000.0})
                for (double ratio : {0.0, 0.5, 0.99}) {
                    ParametricParams p;
                    p.base.gamma1 = 4.0;
                    p.base.gamma2 = 1.0;
                    p.base.g_minus = gm;
                    p.base.g_plus = ratio * gm;
                    p.eta1 = 0.5 * d;
                    p.eta2 = -0.5 * d;
                    try {
                        const ParametricVarianceReport r = parametric_variance_check(p);
                        bound.record(below(r.bound, r.x_sum));
                    } catch (const StabilityError&) {
                        ++unstable;
                    }
                }
        }
        result.suites.push_back(bound.finish({{"unstable_points_skipped", unstable}}));
    }

    {
        Suite duan("duan_routes", 1e-8, cfg);
        Suite line("separability_boundary", 0.0, VerifyConfig{cfg.seed, std::nullopt});
        RandomNetworkGenerator gen(cfg.seed + 2);
        for (int k = 0; k < 50; ++k) {
            const DuanResult d = duan_quantity(gen.three_mode());
            duan.record(std::abs(d.direct_value - d.budget_value));
        }
        std::size_t wrong = 0;
        for (int k = 0; k < 10; ++k) {
            ThreeModeParams p = gen.three_mode();
            p.xi = std::max(p.xi, 0.1);
            const BoundaryLine l = separability_boundary(p);
            // Foot of the perpendicular from the origin to the boundary line.
            const double c = -l.slope * l.n_o_intercept;  // n_m = slope n_o + c
            const double foot_o = -l.slope * c / (1.0 + l.slope * l.slope);
            const double foot_m = c / (1.0 + l.slope * l.slope);
            std::size_t set_wrong = 0;
            p.n_o = 0.95 * foot_o;
            p.n_m = 0.95 * foot_m;
            set_wrong += duan_quantity(p).entangled ? 0 : 1;
            p.n_o = 1.05 * foot_o;
            p.n_m = 1.05 * foot_m;
            set_wrong += duan_quantity(p).entangled ? 1 : 0;
            line.record(static_cast<double>(set_wrong));
            wrong += set_wrong;
        }
        result.suites.push_back(duan.finish());
        result.suites.push_back(line.finish({{"wrong_verdicts", wrong}}));
    }

    json& r = result.report;
    r["seed"] = cfg.seed;
    r["suites"] = json::array();
    bool all = true;
    for (const auto& s : result.suites) {
        all = all && s.pass;
        json j{{"name", s.name}, {"tolerance", s.tolerance}, {"max_residual", s.max_residual},
               {"cases", s.cases},  {"pass", s.pass}};
        if (!s.details.empty()) j["details"] = s.details;
        r["suites"].push_back(std::move(j));
    }
    r["pass"] = all;
    result.exit_code = all ? exit_ok : exit_suite_failure;
    return result;
}

}  // namespace ccrb::cli
