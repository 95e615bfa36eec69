#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ccrbudget/errors.hpp"
#include "ccrbudget/scenarios.hpp"
#include "ccrbudget/steady_state.hpp"

using namespace ccrb;

namespace {

double i12(double g, double g1, double g2) { return 4 * g * g * g2 / ((g1 + g2) * (g1 * g2 + 4 * g * g)); }

// Minimal normalized variances predicted by the Bogoliubov-frame transfer integrals.
std::array<double, 2> frame_prediction(const TwoModeParams& p) {
    const double g = p.g_script();
    const double e = std::exp(-2 * p.xi());
    const double in1 = p.n1 + 0.5, in2 = p.n2 + 0.5;
    const double t12 = i12(g, p.gamma1, p.gamma2);
    const double t21 = i12(g, p.gamma2, p.gamma1);
    return {((1 - t12) * in1 + t12 * in2 * e) / in1, ((1 - t21) * in2 + t21 * in1 * e) / in2};
}

ThreeModeParams three_mode(double g, double xi, double omega = 1.0) {
    ThreeModeParams p;
    p.g_script = g;
    p.xi = xi;
    p.omega = omega;
    p.kappa = 1.0;
    p.gamma_m = 0.01;
    return p;
}

}  // namespace

TEST_CASE("two-mode squeezing power without squeezing") {
    const SqueezingPowerResult r = two_mode_squeezing_power(TwoModeParams::from_frame(1.3, 0.0, 1.0, 1.0));
    CHECK(r.normalized[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(r.normalized[1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(r.sum == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(r.slack == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("two-mode squeezing power matches the frame prediction") {
    for (double g : {0.1, 0.7, 3.0, 50.0})
        for (double xi : {0.2, 0.5, 1.2})
            for (auto [g1, g2] : {std::pair{1.0, 1.0}, {4.0, 0.5}, {0.2, 3.0}})
                for (auto [n1, n2] : {std::pair{0.0, 0.0}, {1.0, 0.3}}) {
                    const TwoModeParams p = TwoModeParams::from_frame(g, xi, g1, g2, n1, n2);
                    const SqueezingPowerResult r = two_mode_squeezing_power(p);
                    const auto expected = frame_prediction(p);
                    CHECK(std::abs(r.normalized[0] - expected[0]) < 1e-11);
                    CHECK(std::abs(r.normalized[1] - expected[1]) < 1e-11);
                    CHECK(r.sum >= 1.0 - 1e-9);
                }
}

TEST_CASE("two-mode squeezing power at strong coupling") {
    // Equal damping: sum = 2 - 2 I12 (1 - e^{-2 xi}) with I12 -> 1/2.
    const TwoModeParams p = TwoModeParams::from_frame(50.0, 0.5, 1.0, 1.0);
    const double t = i12(50.0, 1.0, 1.0);
    CHECK(two_mode_squeezing_power(p).sum == doctest::Approx(2 - 2 * t * (1 - std::exp(-1.0))).epsilon(1e-12));

    TwoModeParams weak;
    weak.g_minus = 1.0;
    weak.g_plus = 0.5;
    weak.gamma1 = weak.gamma2 = 0.1;
    const SqueezingPowerResult r = two_mode_squeezing_power(weak);
    CHECK(r.sum > 1.0);
    CHECK(r.sum == doctest::Approx(frame_prediction(weak)[0] + frame_prediction(weak)[1]).epsilon(1e-12));
}

TEST_CASE("two-mode squeezing power parameter checks") {
    TwoModeParams p;
    p.g_minus = 0.5;
    p.g_plus = 1.0;
    CHECK_THROWS_AS(two_mode_squeezing_power(p), FrameError);
    p.g_plus = -0.1;
    CHECK_THROWS_AS(two_mode_squeezing_power(p), SpecError);
    const TwoModeParams q = TwoModeParams::from_frame(2.0, 0.3, 1.0, 1.0);
    CHECK(q.g_script() == doctest::Approx(2.0));
    CHECK(q.xi() == doctest::Approx(0.3));
}

TEST_CASE("parametric bound values") {
    CHECK(parametric_bound(1.0, 3.0, 0.0) == doctest::Approx(1.0));
    CHECK(parametric_bound(4.0, 1.0, 5.0 / 3.0) == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(parametric_bound(1.0, 1.0, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(parametric_bound(1.0, 1.0, 2.0), SingularityError);
    CHECK_THROWS_AS(parametric_bound(4.0, 1.0, -5.0), SingularityError);
}

TEST_CASE("parametric optimum") {
    const ParametricOptimum sym = parametric_optimum(1.0, 1.0);
    CHECK(sym.delta_eta_star == 0.0);
    CHECK(sym.min_value == doctest::Approx(1.0));
    CHECK(std::abs(sym.numeric_delta_eta) < 1e-6);

    const ParametricOptimum o = parametric_optimum(4.0, 1.0);
    CHECK(o.delta_eta_star == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(o.min_value == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(std::abs(o.numeric_min_value - o.min_value) < 1e-9);
    CHECK(std::abs(o.numeric_delta_eta - o.delta_eta_star) < 1e-6);

    const ParametricOptimum skew = parametric_optimum(1e4, 1.0);
    CHECK(skew.min_value == doctest::Approx(0.5 + 100.0 / 10001.0).epsilon(1e-14));
    CHECK(skew.min_value == doctest::Approx(0.51).epsilon(1e-4));
    CHECK(std::abs(skew.numeric_min_value - skew.min_value) < 1e-9);
}

TEST_CASE("parametric quadrature blocks agree with the full network") {
    for (double eta1 : {0.0, 0.6, -0.4})
        for (double eta2 : {0.0, 0.3}) {
            ParametricParams p;
            p.base.gamma1 = 1.5;
            p.base.gamma2 = 0.8;
            p.base.g_minus = 1.2;
            p.base.g_plus = 0.5;
            p.base.n1 = 0.4;
            p.base.n2 = 1.0;
            p.eta1 = eta1;
            p.eta2 = eta2;
            const ParametricVarianceReport r = parametric_variance_check(p);
            const NetworkSpec spec = parametric_network(p);
            const CovarianceState cs = steady_covariance(build_state_space(spec), bath_moments(spec));
            const double pi2 = std::numbers::pi / 2;
            CHECK(r.x1.ratio == doctest::Approx(quadrature_variance(cs, 0, 0.0) / 0.9).epsilon(1e-12));
            CHECK(r.x2.ratio == doctest::Approx(quadrature_variance(cs, 1, 0.0) / 1.5).epsilon(1e-12));
            CHECK(r.y1.ratio == doctest::Approx(quadrature_variance(cs, 0, pi2) / 0.9).epsilon(1e-12));
            CHECK(r.y2.ratio == doctest::Approx(quadrature_variance(cs, 1, pi2) / 1.5).epsilon(1e-12));
            CHECK(r.x1.slack >= -1e-12);
            CHECK(r.x2.slack >= -1e-12);
            CHECK(r.y1.slack >= -1e-12);
            CHECK(r.y2.slack >= -1e-12);
            CHECK(r.slack >= -1e-12);
            CHECK(r.y_sum >= r.y_bound - 1e-12);
        }
}

TEST_CASE("parametric reduction to the dissipative case") {
    ParametricParams p;
    p.base = TwoModeParams::from_frame(1.0, 0.4, 1.0, 1.0);
    const ParametricVarianceReport r = parametric_variance_check(p);
    CHECK(r.bound == doctest::Approx(1.0));
    const SqueezingPowerResult s = two_mode_squeezing_power(p.base);
    // In the dissipative case X and Y are the principal quadratures.
    CHECK(std::min(r.x1.ratio, r.y1.ratio) == doctest::Approx(s.normalized[0]).epsilon(1e-12));
    CHECK(std::min(r.x2.ratio, r.y2.ratio) == doctest::Approx(s.normalized[1]).epsilon(1e-12));
}

TEST_CASE("parametric sums approach the bound at strong coupling") {
    double previous = 10.0;
    for (double g : {10.0, 100.0, 1000.0, 10000.0}) {
        ParametricParams p;
        p.base.gamma1 = 4.0;
        p.base.gamma2 = 1.0;
        p.base.g_minus = g;
        p.base.g_plus = 0.999 * g;
        p.eta1 = 5.0 / 6.0;
        p.eta2 = -5.0 / 6.0;
        const ParametricVarianceReport r = parametric_variance_check(p);
        CHECK(r.x_sum >= 0.9 - 1e-9);
        CHECK(r.x_sum < previous);
        previous = r.x_sum;
    }
    CHECK(previous < 0.905);
}

TEST_CASE("parametric block instability names the block") {
    ParametricParams p;
    p.base.gamma1 = 1.0;
    p.base.gamma2 = 1.0;
    p.base.g_minus = 0.0;
    p.eta1 = 2.0;  // Y1 grows
    try {
        parametric_variance_check(p);
        FAIL("expected StabilityError");
    } catch (const StabilityError& e) {
        CHECK(std::string(e.what()).find("A2") != std::string::npos);
    }
}

TEST_CASE("three-mode budget limits") {
    const ThreeModeBudget off = three_mode_budget(three_mode(0.0, 0.3));
    CHECK(off.i[0][0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(off.eta_e == doctest::Approx(0.0).epsilon(1e-12));

    const ThreeModeBudget still = three_mode_budget(three_mode(1.0, 0.3, 0.0));
    CHECK(std::abs(still.i[2][0]) < 1e-14);
    CHECK(std::abs(still.i[2][1]) < 1e-14);
    CHECK(still.i[2][2] == doctest::Approx(1.0).epsilon(1e-14));

    const ThreeModeBudget b = three_mode_budget(three_mode(1.0, 0.5));
    CHECK(b.eta_e > 0.0);
    CHECK(b.eta_e < 2.0);
    CHECK(b.eta_e == doctest::Approx(1.94174299747516).epsilon(1e-10));
    CHECK(b.completeness_residual < 1e-9);
    CHECK(b.gamma_rule_residual < 1e-9);
    CHECK(b.budget.passive);
}

TEST_CASE("three-mode frame is a pure beam-splitter chain") {
    const ThreeModeParams p = three_mode(1.3, 0.7, 0.8);
    const StateSpace ss = three_mode_frame_state_space(p);
    CHECK(ss.anomalous_block().max_abs() < 1e-14);
    const CMatrix a = ss.normal_block();
    CHECK(std::abs(a(0, 1)) == doctest::Approx(1.3).epsilon(1e-14));
    CHECK(std::abs(a(0, 2)) < 1e-14);
    CHECK(std::abs(a(1, 2)) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(a(1, 1).real() == doctest::Approx(-0.005).epsilon(1e-14));
    CHECK(check_physical_realizability(ss).residual < 1e-12);
}

TEST_CASE("Duan quantity") {
    SUBCASE("decoupled vacuum saturates the separability threshold") {
        const DuanResult d = duan_quantity(three_mode(0.0, 0.0));
        CHECK(std::abs(d.direct_value - 1.0) < 1e-10);
        CHECK(std::abs(d.budget_value - 1.0) < 1e-10);
        CHECK_FALSE(d.entangled);
    }
    SUBCASE("no squeezing, no entanglement") {
        for (double g : {0.1, 1.0, 5.0}) CHECK(duan_quantity(three_mode(g, 0.0)).direct_value >= 1.0 - 1e-12);
    }
    SUBCASE("entangled reference point") {
        const DuanResult d = duan_quantity(three_mode(1.0, 0.5));
        CHECK(d.entangled);
        CHECK(std::abs(d.direct_value - d.budget_value) < 1e-8);
        CHECK(d.direct_value == doctest::Approx(0.386292165667283).epsilon(1e-10));
    }
    SUBCASE("linear in occupancies with slope set by eta_e") {
        ThreeModeParams p = three_mode(0.8, 0.6, 1.4);
        p.n_o = 0.7;
        p.n_m = 0.2;
        const DuanResult d = duan_quantity(p);
        const double expected = (2 - d.eta_e) * (p.n_m + 0.5) + d.eta_e * (p.n_o + 0.5) * std::exp(-2 * p.xi);
        CHECK(d.direct_value == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("separability boundary line") {
    const BoundaryLine l = separability_boundary(1.0, 0.5);
    CHECK(l.n_o_intercept == doctest::Approx((std::exp(1.0) - 1) / 2).epsilon(1e-15));
    CHECK(l.n_o_intercept == doctest::Approx(0.859141).epsilon(1e-6));
    CHECK(l.slope == doctest::Approx(-0.367879).epsilon(1e-6));
    CHECK(l.n_m_intercept == doctest::Approx(0.316060).epsilon(1e-6));
    CHECK(l.n_m_at(0.0) == doctest::Approx(l.n_m_intercept).epsilon(1e-14));

    const BoundaryLine z = separability_boundary(1.0, 0.0);
    CHECK(z.degenerate);
    CHECK(z.n_o_intercept == 0.0);
    CHECK(z.n_m_intercept == 0.0);

    const BoundaryLine flat = separability_boundary(0.0, 0.5);
    CHECK(flat.slope == 0.0);
    CHECK(flat.n_m_intercept == 0.0);

    CHECK_THROWS_AS(separability_boundary(2.0, 0.5), ApplicabilityError);
    CHECK_THROWS_AS(separability_boundary(-0.1, 0.5), ApplicabilityError);

    // Duan verdict flips across the line.
    ThreeModeParams p = three_mode(1.0, 0.5);
    const BoundaryLine b = separability_boundary(p);
    p.n_o = 0.5 * b.n_o_intercept;
    p.n_m = b.n_m_at(p.n_o);
    CHECK(duan_quantity(p).direct_value == doctest::Approx(1.0).epsilon(1e-10));
    p.n_m *= 0.9;
    CHECK(duan_quantity(p).entangled);
    p.n_m /= 0.81;
    CHECK_FALSE(duan_quantity(p).entangled);
}

TEST_CASE("optimal coupling") {
    const OptimalCoupling o = optimal_coupling(1.0, 1.0, 0.001, 0.5);
    CHECK(o.g_formula * o.g_formula == doctest::Approx(0.5 * std::sqrt(5.0)).epsilon(1e-14));
    CHECK(o.g_formula == doctest::Approx(1.057371).epsilon(1e-6));
    CHECK(o.eta_numeric >= o.eta_formula - 1e-12);
    CHECK(o.eta_formula >= 0.99 * o.eta_numeric);
    CHECK(optimal_coupling(1.0, 1e-6, 0.001, 0.5).g_formula < 1e-3);
    CHECK_THROWS_AS(optimal_coupling(1.0, 0.0, 0.001, 0.5), SpecError);
}
