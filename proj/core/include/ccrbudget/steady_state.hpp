#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ccrbudget/budget.hpp"
#include "ccrbudget/linalg.hpp"
#include "ccrbudget/moments.hpp"
#include "ccrbudget/network.hpp"

namespace ccrb {

/// 2x2 covariance of (X, P) for one mode, X = (a + a^dagger)/sqrt(2),
/// P = (a - a^dagger)/(i sqrt(2)).
struct QuadratureBlock {
    double xx = 0.0;
    double pp = 0.0;
    double xp = 0.0;  // symmetrized
};

/// Symmetrized steady-state second moments v = 1/2 <{xi, xi^dagger}> in the
/// doubled basis. Vacuum has quadrature variance 1/2.
struct CovarianceState {
    static constexpr const char* convention = "symmetrized; vacuum quadrature variance 1/2";

    CMatrix v;

    std::size_t n_modes() const noexcept { return v.rows() / 2; }
    QuadratureBlock quadrature_block(std::size_t mode) const;
    /// Smallest eigenvalue of the Hermitian matrix v.
    double min_eigenvalue() const;
    /// Product of the two eigenvalues of the mode's quadrature block.
    double heisenberg_product(std::size_t mode) const;
};

struct QuadratureVariance {
    std::size_t mode = 0;
    double theta = 0.0;  // in [0, pi)
    double value = 0.0;
};

/// Solves A v + v A^dagger + D N D^dagger = 0 with N the symmetrized input
/// noise matrix. Throws StabilityError for unstable drift.
CovarianceState steady_covariance(const StateSpace& ss, const InputMoments& inputs);

/// Variance of X_mode(theta) = (a e^{-i theta} + a^dagger e^{i theta}) / sqrt(2).
double quadrature_variance(const CovarianceState& cs, std::size_t mode, double theta);

QuadratureVariance min_quadrature_variance(const CovarianceState& cs, std::size_t mode);

/// Variance of the quadrature of the collective operator b = sum_k w_k a_k at angle theta.
double collective_quadrature_variance(const CovarianceState& cs, std::span<const cplx> weights,
                                      double theta);

/// Per-mode variances at angle theta as transfer-integral-weighted sums of
/// input variances. Requires a passive network with uncorrelated inputs.
/// Anomalous inputs are supported when the coupling graph is bipartite with
/// real amplitudes and no detunings (the input phase then flips between the
/// two partitions); otherwise ApplicabilityError.
std::vector<double> variance_decomposition(const StateSpace& ss, const CommutatorBudget& b,
                                           const InputMoments& inputs, double theta);

}  // namespace ccrb
