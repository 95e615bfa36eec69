#include "ccrbudget/steady_state.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "ccrbudget/errors.hpp"

namespace ccrb {

namespace {

constexpr double kStructureTol = 1e-12;

void check_mode(const CovarianceState& cs, std::size_t mode) {
    if (mode >= cs.n_modes()) {
        std::ostringstream os;
        os << "mode index " << mode << " out of range for " << cs.n_modes() << " modes";
        throw DimensionError(os.str());
    }
}

double reduce_angle(double theta) {
    constexpr double pi = std::numbers::pi;
    double t = std::fmod(theta, pi);
    if (t < 0.0) t += pi;
    if (t >= pi) t -= pi;
    return t;
}

// Partition signs p_i = +-1 with A_ij != 0 only between partitions, or nothing
// if the coupling graph is not bipartite.
std::optional<std::vector<int>> bipartite_signs(const CMatrix& a) {
    const std::size_t n = a.rows();
    std::vector<int> sign(n, 0);
    for (std::size_t start = 0; start < n; ++start) {
        if (sign[start] != 0) continue;
        sign[start] = 1;
        std::vector<std::size_t> stack{start};
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || std::abs(a(i, j)) <= kStructureTol) continue;
                if (sign[j] == 0) {
                    sign[j] = -sign[i];
                    stack.push_back(j);
                } else if (sign[j] == sign[i]) {
                    return std::nullopt;
                }
            }
        }
    }
    return sign;
}

}  // namespace

QuadratureBlock CovarianceState::quadrature_block(std::size_t mode) const {
    check_mode(*this, mode);
    const std::size_t n = n_modes();
    const double vn = v(mode, mode).real();
    const cplx s = v(mode, n + mode);
    return {vn + s.real(), vn - s.real(), s.imag()};
}

double CovarianceState::min_eigenvalue() const { return hermitian_eigenvalues(v).front(); }

double CovarianceState::heisenberg_product(std::size_t mode) const {
    const QuadratureBlock q = quadrature_block(mode);
    return q.xx * q.pp - q.xp * q.xp;
}

CovarianceState steady_covariance(const StateSpace& ss, const InputMoments& inputs) {
    if (inputs.channels() != ss.n_modes()) {
        throw DimensionError("steady_covariance: input moments do not match the number of channels");
    }
    require_stable(ss.drift, "steady_covariance");
    const CMatrix q = ss.input * inputs.noise_matrix() * ss.input.adjoint();
    return {solve_lyapunov(ss.drift, hermitian_part(q))};
}

double quadrature_variance(const CovarianceState& cs, std::size_t mode, double theta) {
    const QuadratureBlock q = cs.quadrature_block(mode);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return c * c * q.xx + s * s * q.pp + 2.0 * s * c * q.xp;
}

QuadratureVariance min_quadrature_variance(const CovarianceState& cs, std::size_t mode) {
    const QuadratureBlock q = cs.quadrature_block(mode);
    const double mean = 0.5 * (q.xx + q.pp);
    const double half_diff = 0.5 * (q.xx - q.pp);
    const double radius = std::hypot(half_diff, q.xp);
    QuadratureVariance out;
    out.mode = mode;
    out.value = mean - radius;
    // X(theta) variance is mean + half_diff cos 2theta + xp sin 2theta.
    if (radius > 1e-15 * std::max(1.0, mean)) {
        out.theta = reduce_angle(0.5 * (std::atan2(q.xp, half_diff) + std::numbers::pi));
    }
    return out;
}

double collective_quadrature_variance(const CovarianceState& cs, std::span<const cplx> weights,
                                      double theta) {
    const std::size_t n = cs.n_modes();
    if (weights.size() != n) throw DimensionError("collective_quadrature_variance: weight size mismatch");
    const cplx phase = std::polar(1.0, -theta);
    std::vector<cplx> u(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        u[k] = weights[k] * phase * std::numbers::sqrt2 * 0.5;
        u[n + k] = std::conj(u[k]);
    }
    cplx acc = 0.0;
    for (std::size_t p = 0; p < 2 * n; ++p)
        for (std::size_t r = 0; r < 2 * n; ++r) acc += u[p] * cs.v(p, r) * std::conj(u[r]);
    return acc.real();
}

std::vector<double> variance_decomposition(const StateSpace& ss, const CommutatorBudget& b,
                                           const InputMoments& inputs, double theta) {
    const std::size_t n = ss.n_modes();
    if (b.n_modes() != n || inputs.channels() != n) {
        throw DimensionError("variance_decomposition: budget, inputs and network sizes differ");
    }
    if (!is_passive(ss)) throw ApplicabilityError("variance_decomposition: network is not passive");
    if (!inputs.is_uncorrelated()) {
        throw ApplicabilityError("variance_decomposition: input channels are correlated");
    }

    std::vector<int> sign(n, 1);
    if (!inputs.is_phase_insensitive()) {
        const CMatrix a = ss.normal_block();
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(a(i, i).imag()) > kStructureTol) {
                throw ApplicabilityError(
                    "variance_decomposition: anomalous inputs require a network without detunings");
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && std::abs(a(i, j).real()) > kStructureTol) {
                    throw ApplicabilityError(
                        "variance_decomposition: anomalous inputs require real coupling amplitudes");
                }
            }
        }
        auto p = bipartite_signs(a);
        if (!p) {
            throw ApplicabilityError(
                "variance_decomposition: anomalous inputs require a bipartite coupling graph");
        }
        sign = *p;
    }

    const cplx rot = std::polar(1.0, -2.0 * theta);
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double in_var = inputs.occupancy(j) + 0.5 +
                                  static_cast<double>(sign[i] * sign[j]) *
                                      (inputs.anomalous(j) * rot).real();
            out[i] += b.transfer[i][j] * in_var;
        }
    }
    return out;
}

}  // namespace ccrb
