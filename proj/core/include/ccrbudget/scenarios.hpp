#pragma once

// Parameterized two-mode, parametric and three-mode optomechanical networks.
//
// Two-mode:   H = G- a1^dagger a2 + G+ a1^dagger a2^dagger + h.c.; with
//             G- = g cosh(xi), G+ = g sinh(xi) the Bogoliubov frame of mode 2
//             is a pure beam splitter of strength g.
// Parametric: adds single-mode squeezing so that X_i relaxes at (gamma_i + eta_i)/2
//             and Y_i at (gamma_i - eta_i)/2.
// Three-mode: cavity a1 (kappa, n_o) couples with G- = g cosh(xi)/sqrt(2) and
//             G+ = g sinh(xi)/sqrt(2) to mechanical modes a2, a3 (gamma_m, n_m)
//             detuned by +Omega/2 and -Omega/2.

#include <array>
#include <cstddef>
#include <vector>

#include "ccrbudget/budget.hpp"
#include "ccrbudget/linalg.hpp"
#include "ccrbudget/moments.hpp"
#include "ccrbudget/network.hpp"

namespace ccrb {

struct TwoModeParams {
    double g_plus = 0.0;
    double g_minus = 1.0;
    double gamma1 = 1.0;
    double gamma2 = 1.0;
    double n1 = 0.0;
    double n2 = 0.0;

    static TwoModeParams from_frame(double g_script, double xi, double gamma1, double gamma2,
                                    double n1 = 0.0, double n2 = 0.0);
    double g_script() const;  // sqrt(G-^2 - G+^2)
    double xi() const;        // atanh(G+/G-)
};

NetworkSpec two_mode_network(const TwoModeParams& p);

struct SqueezingPowerResult {
    std::array<double, 2> normalized{};  // min variance / (n_i + 1/2)
    std::array<double, 2> theta{};       // minimizing angles
    double sum = 0.0;
    double bound = 1.0;
    double slack = 0.0;  // sum - bound
};

/// Steady state with thermal inputs; each mode's minimal quadrature variance
/// normalized to its input variance. Throws FrameError for G+ >= G-,
/// StabilityError for unstable parameters.
SqueezingPowerResult two_mode_squeezing_power(const TwoModeParams& p);

struct ParametricParams {
    TwoModeParams base;
    double eta1 = 0.0;
    double eta2 = 0.0;

    double delta_eta() const noexcept { return eta1 - eta2; }
};

/// Network with the parametric terms included (lambda_i = -i eta_i / 2).
NetworkSpec parametric_network(const ParametricParams& p);

/// ((g1 + g2)^2 - d (g1 - g2)) / ((g1 + g2)^2 - d^2), d = eta1 - eta2.
/// Throws SingularityError when the denominator vanishes.
double parametric_bound(double gamma1, double gamma2, double delta_eta);
double parametric_bound(const ParametricParams& p);

struct ParametricOptimum {
    double delta_eta_star = 0.0;  // closed form
    double min_value = 0.0;       // closed form
    double numeric_delta_eta = 0.0;
    double numeric_min_value = 0.0;
};

ParametricOptimum parametric_optimum(double gamma1, double gamma2);

struct QuadratureRatio {
    double ratio = 0.0;  // Delta X^2 / Delta X_in^2
    double bound = 0.0;
    double slack = 0.0;  // ratio - bound
};

struct ParametricVarianceReport {
    QuadratureRatio x1;
    QuadratureRatio x2;
    QuadratureRatio y1;
    QuadratureRatio y2;
    double x_sum = 0.0;         // X1 + X2, the pairing bounded by parametric_bound
    double y_sum = 0.0;         // Y1 + Y2
    double block1_sum = 0.0;    // X1 + Y2
    double block2_sum = 0.0;    // X2 + Y1
    double bound = 0.0;         // parametric_bound
    double y_bound = 0.0;       // parametric_bound with d -> -d
    double slack = 0.0;         // x_sum - bound
};

/// Solves the two commuting 2x2 quadrature blocks (X1, Y2) and (X2, Y1).
/// Throws StabilityError naming the block when either is unstable.
ParametricVarianceReport parametric_variance_check(const ParametricParams& p);

struct ThreeModeParams {
    double g_script = 1.0;
    double omega = 1.0;
    double kappa = 1.0;
    double gamma_m = 0.01;
    double xi = 0.0;
    double n_o = 0.0;
    double n_m = 0.0;

    static ThreeModeParams from_couplings(double g_plus, double g_minus, double omega,
                                          double kappa, double gamma_m, double n_o = 0.0,
                                          double n_m = 0.0);
};

/// Physical-frame network: modes (cavity, mechanical 2, mechanical 3).
NetworkSpec three_mode_network(const ThreeModeParams& p);

/// Doubled-space map from (a1, a2, a3) to (a1, alpha_Sigma, alpha_Delta):
/// alpha_2 = c a2 + s a3^dagger, alpha_3 = c a3 + s a2^dagger,
/// alpha_Sigma,Delta = (alpha_2 +- alpha_3)/sqrt(2).
CMatrix three_mode_frame(double xi);

/// Physical state space conjugated into the collective frame; the input
/// matrix is unchanged because both mechanical dampings are equal.
StateSpace three_mode_frame_state_space(const ThreeModeParams& p);

struct ThreeModeBudget {
    CommutatorBudget budget;             // channels (1, Sigma, Delta)
    std::vector<std::vector<double>> i;  // I_ij
    double eta_e = 0.0;                  // kappa / gamma_m (1 - I_11)
    double completeness_residual = 0.0;
    double gamma_rule_residual = 0.0;
};

ThreeModeBudget three_mode_budget(const ThreeModeParams& p);

struct DuanResult {
    double direct_value = 0.0;  // Delta X_Sigma^2 + Delta P_Delta^2 from the physical covariance
    double budget_value = 0.0;  // transfer-integral route
    double eta_e = 0.0;
    bool entangled = false;     // direct_value < 1
};

DuanResult duan_quantity(const ThreeModeParams& p);

struct BoundaryLine {
    double eta_e = 0.0;
    double xi = 0.0;
    double slope = 0.0;          // d n_m / d n_o
    double n_o_intercept = 0.0;  // (e^{2 xi} - 1)/2
    double n_m_intercept = 0.0;  // eta_e (1 - e^{-2 xi}) / (2 (2 - eta_e))
    bool degenerate = false;     // xi = 0: the line passes through the origin

    /// n_m on the boundary for a given n_o.
    double n_m_at(double n_o) const { return slope * (n_o - n_o_intercept); }
};

/// Throws ApplicabilityError unless 0 <= eta_e < 2.
BoundaryLine separability_boundary(double eta_e, double xi);
BoundaryLine separability_boundary(const ThreeModeParams& p);

struct OptimalCoupling {
    double g_formula = 0.0;
    double g_numeric = 0.0;
    double eta_formula = 0.0;
    double eta_numeric = 0.0;
    double stable_min = 0.0;  // scanned stability interval
    double stable_max = 0.0;
};

/// Approximate optimum sqrt((Omega/2) sqrt(kappa^2 + 4 Omega^2)) against a
/// bracketed golden-section maximization of eta_e over the coupling.
OptimalCoupling optimal_coupling(double kappa, double omega, double gamma_m, double xi);

}  // namespace ccrb
