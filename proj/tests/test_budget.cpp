#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ccrbudget/budget.hpp"
#include "ccrbudget/errors.hpp"
#include "ccrbudget/random_network.hpp"

using namespace ccrb;

namespace {

const cplx I{0.0, 1.0};

StateSpace beam_splitter(double g, double g1 = 1.0, double g2 = 1.0, cplx phase = 1.0) {
    NetworkSpec s;
    s.baths = {{g1, 0.0, 0.0}, {g2, 0.0, 0.0}};
    s.couplings = {CouplingTerm::beam_splitter(0, 1, g * phase)};
    return build_state_space(s);
}

StateSpace squeezer(double gm, double gp, double g1 = 1.0, double g2 = 1.0) {
    NetworkSpec s;
    s.baths = {{g1, 0.0, 0.0}, {g2, 0.0, 0.0}};
    s.couplings = {CouplingTerm::beam_splitter(0, 1, gm), CouplingTerm::two_mode_squeeze(0, 1, gp)};
    return build_state_space(s);
}

double closed_form_i12(double g, double g1, double g2) {
    return 4 * g * g * g2 / ((g1 + g2) * (g1 * g2 + 4 * g * g));
}

}  // namespace

TEST_CASE("single mode budget is one") {
    NetworkSpec s;
    s.baths = {{1.0, 0.0, 0.0}};
    const StateSpace ss = build_state_space(s);
    const CommutatorBudget b = compute_budget(ss);
    CHECK(b.transfer[0][0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(budget_via_spectrum(ss).transfer[0][0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(verify_reciprocity(b).entries.empty());
}

TEST_CASE("beam splitter budget") {
    const StateSpace ss = beam_splitter(0.5);
    const CommutatorBudget b = compute_budget(ss);
    const CMatrix k2{{0.25, -0.25 * I}, {0.25 * I, 0.75}};
    CHECK(approx_equal(b.per_channel_k[1], k2, 1e-14));
    CHECK(b.transfer[0][1] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(b.transfer[0][0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(b.passive);
    CHECK(b.diagonal_dissipation);

    const CommutatorBudget f = budget_via_spectrum(ss);
    CHECK(approx_equal(f.per_channel_k[1], k2, 1e-8));
    for (std::size_t j = 0; j < 2; ++j) CHECK(approx_equal(f.per_channel_w[j], b.per_channel_w[j], 1e-8));
}

TEST_CASE("beam splitter transfer integral matches the closed form") {
    for (double g : {0.05, 0.5, 1.7, 50.0})
        for (double g1 : {0.3, 1.0, 4.0})
            for (double g2 : {0.1, 1.0, 2.5}) {
                const CommutatorBudget b = compute_budget(beam_splitter(g, g1, g2));
                CHECK(std::abs(b.transfer[0][1] - closed_form_i12(g, g1, g2)) < 1e-12);
                CHECK(std::abs(b.transfer[1][0] - closed_form_i12(g, g2, g1)) < 1e-12);
            }
    CHECK(compute_budget(beam_splitter(50.0)).transfer[0][1] ==
          doctest::Approx(0.5 * 10000.0 / 10001.0).epsilon(1e-13));
}

TEST_CASE("sum rules") {
    SUBCASE("beam splitter, equal damping") {
        const SumRuleReport r = verify_sum_rules(compute_budget(beam_splitter(0.5)));
        CHECK(r.completeness_residual < 1e-14);
        CHECK(r.doubled_completeness_residual < 1e-14);
        REQUIRE(r.gamma_rule_applicable);
        CHECK(r.max_gamma_rule_residual() < 1e-14);
        CHECK(r.positivity_applicable);
        CHECK(r.min_positivity_eig() > -1e-14);
    }
    SUBCASE("beam splitter, unequal damping") {
        const SumRuleReport r = verify_sum_rules(compute_budget(beam_splitter(1.0, 4.0, 1.0)));
        CHECK(r.max_gamma_rule_residual() < 1e-10);
        for (double v : r.row_sum_residuals) CHECK(std::abs(v) < 1e-14);
    }
    SUBCASE("two-mode squeezer") {
        const StateSpace ss = squeezer(0.0, 0.3);
        const CommutatorBudget b = compute_budget(ss);
        const SumRuleReport r = verify_sum_rules(b);
        CHECK(r.completeness_residual < 1e-13);
        CHECK_FALSE(r.gamma_rule_applicable);
        CHECK_FALSE(r.positivity_applicable);
        // Amplification: one channel carries a negative budget component.
        CHECK(r.min_positivity_eig() < 0.0);
        const CommutatorBudget f = budget_via_spectrum(ss);
        CMatrix sum = f.per_channel_k[0] + f.per_channel_k[1];
        CHECK(approx_equal(sum, CMatrix::identity(2), 1e-6));
        for (std::size_t j = 0; j < 2; ++j) CHECK(approx_equal(f.per_channel_k[j], b.per_channel_k[j], 1e-8));
    }
}

TEST_CASE("random networks: both routes agree and sum rules hold") {
    RandomNetworkGenerator gen(2024);
    for (int k = 0; k < 20; ++k) {
        RandomNetworkOptions o;
        o.passive = k % 2 == 0;
        o.detuning_max = 1.0;
        const StateSpace ss = build_state_space(gen.network(o));
        const CommutatorBudget b = compute_budget(ss);
        const CommutatorBudget f = budget_via_spectrum(ss);
        for (std::size_t j = 0; j < b.n_modes(); ++j) {
            CHECK(approx_equal(b.per_channel_w[j], f.per_channel_w[j], 1e-7));
        }
        const SumRuleReport r = verify_sum_rules(b);
        CHECK(r.completeness_residual < 1e-9);
        CHECK(r.doubled_completeness_residual < 1e-9);
        if (r.gamma_rule_applicable) CHECK(r.max_gamma_rule_residual() < 1e-9);
        if (r.positivity_applicable) CHECK(r.min_positivity_eig() > -1e-10);
    }
}

TEST_CASE("reciprocity") {
    const CommutatorBudget b = compute_budget(beam_splitter(0.5));
    const ReciprocityReport r = verify_reciprocity(b);
    REQUIRE(r.entries.size() == 1);
    CHECK(r.max_residual() < 1e-15);
    CHECK(b.gammas[0] * b.transfer[0][1] == doctest::Approx(0.25));

    for (double phase : {0.3, 1.1, 2.9}) {
        const CommutatorBudget c = compute_budget(beam_splitter(0.8, 2.0, 0.5, std::polar(1.0, phase)));
        CHECK(verify_reciprocity(c).max_residual() < 1e-10);
    }

    // A three-mode loop threaded by a synthetic flux is non-reciprocal.
    NetworkSpec loop;
    loop.baths = {{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
    const cplx t = std::polar(0.5, std::numbers::pi / 2);
    loop.couplings = {CouplingTerm::beam_splitter(0, 1, t), CouplingTerm::beam_splitter(1, 2, t),
                      CouplingTerm::beam_splitter(2, 0, t)};
    CHECK(verify_reciprocity(compute_budget(build_state_space(loop))).max_residual() > 1e-3);
}

TEST_CASE("two-mode bound on the cross transfer integral") {
    const IxBoundReport weak = two_mode_ix_bound(compute_budget(beam_splitter(0.5)));
    CHECK(weak.ix == doctest::Approx(0.25));
    CHECK(weak.bound == doctest::Approx(0.5));
    CHECK(weak.diagonal_sum == doctest::Approx(1.5));
    CHECK(weak.pass);

    const IxBoundReport strong = two_mode_ix_bound(compute_budget(beam_splitter(50.0)));
    CHECK(strong.ix == doctest::Approx(0.5 * 10000.0 / 10001.0).epsilon(1e-13));
    CHECK(strong.bound_slack == doctest::Approx(0.5 / 10001.0).epsilon(1e-9));

    const IxBoundReport none = two_mode_ix_bound(compute_budget(beam_splitter(0.0)));
    CHECK(none.ix == 0.0);
    CHECK(none.diagonal_sum == doctest::Approx(2.0));

    NetworkSpec three;
    three.baths = {{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
    CHECK_THROWS_AS(two_mode_ix_bound(compute_budget(build_state_space(three))), ApplicabilityError);
    CHECK_THROWS_AS(two_mode_ix_bound(compute_budget(squeezer(1.0, 0.5))), ApplicabilityError);
}

TEST_CASE("unstable networks are rejected") {
    const StateSpace ss = squeezer(0.0, 1.0);
    CHECK_THROWS_AS(compute_budget(ss), StabilityError);
    CHECK_THROWS_AS(budget_via_spectrum(ss), StabilityError);
}
