#include "ccrbudget/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "ccrbudget/errors.hpp"

namespace ccrb {

InputMoments::InputMoments(CMatrix normal, CMatrix anomalous)
    : normal_(std::move(normal)), anomalous_(std::move(anomalous)) {
    if (!normal_.is_square() || normal_.rows() != anomalous_.rows() ||
        normal_.cols() != anomalous_.cols()) {
        throw DimensionError("InputMoments: normal and anomalous must be square and equal size");
    }
    const double scale = std::max(1.0, std::max(normal_.max_abs(), anomalous_.max_abs()));
    if (hermiticity_residual(normal_) > Tolerances::hermitian * scale) {
        throw Error("InputMoments: normal correlator matrix is not Hermitian");
    }
    if ((anomalous_ - anomalous_.transpose()).max_abs() > Tolerances::hermitian * scale) {
        throw Error("InputMoments: anomalous correlator matrix is not symmetric");
    }
}

InputMoments InputMoments::vacuum(std::size_t n_channels) {
    return {CMatrix(n_channels, n_channels), CMatrix(n_channels, n_channels)};
}

InputMoments InputMoments::thermal(std::span<const double> occupancies) {
    return {CMatrix::diagonal(occupancies), CMatrix(occupancies.size(), occupancies.size())};
}

InputMoments InputMoments::uncorrelated(std::span<const double> occupancies,
                                        std::span<const cplx> anomalous) {
    if (occupancies.size() != anomalous.size()) {
        throw DimensionError("InputMoments::uncorrelated: size mismatch");
    }
    return {CMatrix::diagonal(occupancies), CMatrix::diagonal(anomalous)};
}

InputMoments InputMoments::from_noise_matrix(const CMatrix& noise) {
    if (!noise.is_square() || noise.rows() % 2 != 0) {
        throw DimensionError("InputMoments::from_noise_matrix: expected 2N x 2N matrix");
    }
    const std::size_t n = noise.rows() / 2;
    CMatrix normal = noise.block(n, n, n, n);
    for (std::size_t i = 0; i < n; ++i) normal(i, i) -= 0.5;
    return {hermitian_part(normal), noise.block(0, n, n, n)};
}

bool InputMoments::is_uncorrelated(double tol) const {
    for (std::size_t i = 0; i < channels(); ++i)
        for (std::size_t j = 0; j < channels(); ++j)
            if (i != j && (std::abs(normal_(i, j)) > tol || std::abs(anomalous_(i, j)) > tol))
                return false;
    return true;
}

bool InputMoments::is_phase_insensitive(double tol) const { return anomalous_.max_abs() <= tol; }

CMatrix InputMoments::noise_matrix() const {
    const std::size_t n = channels();
    CMatrix out(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double half = i == j ? 0.5 : 0.0;
            out(i, j) = normal_(j, i) + half;
            out(i, n + j) = anomalous_(i, j);
            out(n + i, j) = std::conj(anomalous_(i, j));
            out(n + i, n + j) = normal_(i, j) + half;
        }
    }
    return out;
}

double InputMoments::quadrature_variance(std::size_t j, double theta) const {
    return occupancy(j) + 0.5 + (anomalous(j) * std::polar(1.0, -2.0 * theta)).real();
}

double InputMoments::min_quadrature_variance(std::size_t j) const {
    return occupancy(j) + 0.5 - std::abs(anomalous(j));
}

double InputMoments::physicality_excess() const {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < channels(); ++j) {
        const double n = occupancy(j);
        worst = std::max(worst, std::norm(anomalous(j)) - n * (n + 1.0));
    }
    return worst;
}

}  // namespace ccrb
