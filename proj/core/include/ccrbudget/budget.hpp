#pragma once

#include <cstddef>
#include <vector>

#include "ccrbudget/linalg.hpp"
#include "ccrbudget/network.hpp"

namespace ccrb {

/// Per-input-channel commutator budgets of a stable network.
///
/// W_i solves  A W_i + W_i A^dagger + D_i S D_i^dagger = 0, where D_i keeps the
/// two doubled-space columns (i, N + i) of the input matrix and S is the
/// metric diag(I, -I). K_i is the annihilation-sector block of W_i and the
/// transfer integral I_ij = (K_j)_ii.
struct CommutatorBudget {
    std::vector<CMatrix> per_channel_w;
    std::vector<CMatrix> per_channel_k;
    std::vector<std::vector<double>> transfer;  // transfer[i][j] = I_ij
    std::vector<double> gammas;
    bool passive = false;
    bool diagonal_dissipation = false;

    std::size_t n_modes() const noexcept { return per_channel_k.size(); }
    double transfer_integral(std::size_t mode, std::size_t channel) const {
        return transfer.at(mode).at(channel);
    }
};

/// Budget from one Lyapunov solve per channel.
CommutatorBudget compute_budget(const StateSpace& ss);

/// Budget from the frequency-domain transfer functions,
/// W_j = (1/2pi) \int G(w) D_j S D_j^dagger G(w)^dagger dw with G(w) = (-i w - A)^{-1}.
/// The annihilation block equals \int (M M^dagger - L L^dagger) dw / 2pi.
CommutatorBudget budget_via_spectrum(const StateSpace& ss,
                                     double abs_tol = Tolerances::quadrature_abs);

struct SumRuleReport {
    double completeness_residual = 0.0;     // |sum_i K_i - I|_max
    double doubled_completeness_residual = 0.0;  // |sum_i W_i - S|_max
    std::vector<double> row_sum_residuals;  // sum_j I_ij - 1 per mode
    bool gamma_rule_applicable = false;     // passive with diagonal dissipation
    std::vector<double> gamma_rule_residuals;  // sum_j gamma_j (K_i)_jj - gamma_i per channel
    bool positivity_applicable = false;     // passive
    std::vector<double> positivity_min_eigs;   // min eigenvalue of each K_i

    double max_gamma_rule_residual() const;
    double min_positivity_eig() const;
};

SumRuleReport verify_sum_rules(const CommutatorBudget& b);

struct ReciprocityEntry {
    std::size_t i = 0;
    std::size_t j = 0;
    double residual = 0.0;  // gamma_j I_ji - gamma_i I_ij
};

struct ReciprocityReport {
    std::vector<ReciprocityEntry> entries;
    double max_residual() const;
};

/// Residuals of gamma_j (K_i)_jj = gamma_i (K_j)_ii for all pairs i < j. The
/// relation is expected for passive, reciprocal (real-coupling) networks and
/// for every passive two-mode network; callers decide applicability.
ReciprocityReport verify_reciprocity(const CommutatorBudget& b);

struct IxBoundReport {
    double ix = 0.0;           // I_12 / gamma_2
    double ix_reverse = 0.0;   // I_21 / gamma_1
    double bound = 0.0;        // 1 / (gamma_1 + gamma_2)
    double bound_slack = 0.0;  // bound - ix
    double diagonal_sum = 0.0;        // I_11 + I_22
    double diagonal_sum_slack = 0.0;  // diagonal_sum - 1
    bool pass = false;
};

/// Two-mode passive budget: I_x <= 1/(gamma_1 + gamma_2) and I_11 + I_22 >= 1.
/// Throws ApplicabilityError unless N = 2, passive and diagonally dissipative.
IxBoundReport two_mode_ix_bound(const CommutatorBudget& b, double tol = 1e-10);

}  // namespace ccrb
