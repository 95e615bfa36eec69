#pragma once

#include <cstddef>
#include <span>

#include "ccrbudget/linalg.hpp"

namespace ccrb {

/// Stationary second moments of Gaussian white-noise inputs, one channel per mode.
///
/// normal(i, j)    = <a_in,i^dagger a_in,j>   (Hermitian; diagonal = occupancy n_i)
/// anomalous(i, j) = <a_in,i a_in,j>          (symmetric; diagonal = m_i)
///
/// Correlators are delta-correlated in time. Vacuum is all zeros; the
/// symmetrized quadrature variance of a vacuum channel is 1/2.
class InputMoments {
public:
    InputMoments() = default;
    InputMoments(CMatrix normal, CMatrix anomalous);

    static InputMoments vacuum(std::size_t n_channels);
    static InputMoments thermal(std::span<const double> occupancies);
    /// Uncorrelated channels with the given occupancies and anomalous amplitudes.
    static InputMoments uncorrelated(std::span<const double> occupancies,
                                     std::span<const cplx> anomalous);
    /// Inverse of noise_matrix().
    static InputMoments from_noise_matrix(const CMatrix& noise);

    std::size_t channels() const noexcept { return normal_.rows(); }
    const CMatrix& normal() const noexcept { return normal_; }
    const CMatrix& anomalous() const noexcept { return anomalous_; }

    double occupancy(std::size_t j) const { return normal_(j, j).real(); }
    cplx anomalous(std::size_t j) const { return anomalous_(j, j); }

    /// True when every off-diagonal correlator is below tol.
    bool is_uncorrelated(double tol = 1e-14) const;
    /// True when every anomalous correlator is below tol.
    bool is_phase_insensitive(double tol = 1e-14) const;

    /// Symmetrized noise matrix in the doubled basis [a_in; a_in^dagger]:
    /// N = 1/2 <{xi_in, xi_in^dagger}> (2N x 2N, Hermitian).
    CMatrix noise_matrix() const;

    /// n_j + 1/2 + Re(m_j e^{-2 i theta})
    double quadrature_variance(std::size_t j, double theta) const;
    /// n_j + 1/2 - |m_j|, the minimum over theta.
    double min_quadrature_variance(std::size_t j) const;

    /// max over channels of |m_j|^2 - n_j (n_j + 1); positive means the
    /// channel is not a physical single-mode Gaussian state.
    double physicality_excess() const;

private:
    CMatrix normal_;
    CMatrix anomalous_;
};

}  // namespace ccrb
