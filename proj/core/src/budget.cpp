#include "ccrbudget/budget.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ccrbudget/errors.hpp"

namespace ccrb {

namespace {

constexpr double kImagTolerance = 1e-10;

// D_i S D_i^dagger for the two doubled-space columns of channel i.
CMatrix channel_source(const StateSpace& ss, std::size_t channel) {
    const std::size_t n = ss.n_modes();
    const std::size_t d = 2 * n;
    CMatrix q(d, d);
    for (std::size_t col : {channel, n + channel}) {
        const double sign = ss.sigma(col, col).real();
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                q(r, c) += sign * ss.input(r, col) * std::conj(ss.input(c, col));
    }
    return q;
}

std::vector<double> channel_gammas(const StateSpace& ss) {
    const std::size_t n = ss.n_modes();
    std::vector<double> g(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t r = 0; r < n; ++r) g[j] += std::norm(ss.input(r, j));
    return g;
}

CommutatorBudget assemble(const StateSpace& ss, std::vector<CMatrix> ws) {
    const std::size_t n = ss.n_modes();
    CommutatorBudget b;
    b.gammas = channel_gammas(ss);
    b.passive = is_passive(ss);
    b.diagonal_dissipation = has_diagonal_dissipation(ss);
    b.transfer.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        CMatrix k = ws[j].block(0, 0, n, n);
        for (std::size_t i = 0; i < n; ++i) {
            const cplx v = k(i, i);
            if (std::abs(v.imag()) > kImagTolerance) {
                std::ostringstream os;
                os << "commutator budget: (K_" << j << ")_" << i << i << " has imaginary part "
                   << v.imag();
                throw NumericError(os.str());
            }
            b.transfer[i][j] = v.real();
        }
        b.per_channel_k.push_back(std::move(k));
    }
    b.per_channel_w = std::move(ws);
    return b;
}

}  // namespace

CommutatorBudget compute_budget(const StateSpace& ss) {
    require_stable(ss.drift, "compute_budget");
    const LyapunovSolver solver(ss.drift);
    std::vector<CMatrix> ws;
    ws.reserve(ss.n_modes());
    for (std::size_t i = 0; i < ss.n_modes(); ++i) ws.push_back(solver.solve(channel_source(ss, i)));
    return assemble(ss, std::move(ws));
}

CommutatorBudget budget_via_spectrum(const StateSpace& ss, double abs_tol) {
    const Spectrum spec = eigenvalues(ss.drift);
    if (spec.max_real() >= 0.0) {
        require_stable(ss.drift, "budget_via_spectrum");
    }
    const std::size_t n = ss.n_modes();
    const std::size_t d = 2 * n;

    // Resonances of (-i w - A)^{-1} sit at w = -Im(lambda) with width |Re(lambda)|.
    SpectrumQuadrature opts;
    opts.abs_tol = abs_tol;
    double scale = 0.0;
    for (const auto& lam : spec.eigenvalues) {
        const double centre = -lam.imag();
        const double width = std::abs(lam.real());
        opts.breakpoints.push_back(centre);
        opts.breakpoints.push_back(centre - width);
        opts.breakpoints.push_back(centre + width);
        scale = std::max(scale, std::abs(lam));
    }
    opts.scale = scale > 0.0 ? scale : 1.0;

    const CMatrix& drift = ss.drift;
    const CMatrix& input = ss.input;
    const CMatrix& sigma = ss.sigma;
    auto integrand = [&](double omega) {
        CMatrix resolvent_arg = -1.0 * drift;
        for (std::size_t k = 0; k < d; ++k) resolvent_arg(k, k) += cplx{0.0, -omega};
        const CMatrix x = solve(resolvent_arg, input);  // G(w) D
        CMatrix packed(d, d * n);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t col : {j, n + j}) {
                const double sign = sigma(col, col).real();
                for (std::size_t r = 0; r < d; ++r) {
                    const cplx xr = sign * x(r, col);
                    for (std::size_t c = 0; c < d; ++c)
                        packed(r, j * d + c) += xr * std::conj(x(c, col));
                }
            }
        }
        return packed;
    };

    const SpectrumIntegral result = integrate_spectrum(integrand, opts);
    std::vector<CMatrix> ws;
    ws.reserve(n);
    for (std::size_t j = 0; j < n; ++j) ws.push_back(hermitian_part(result.value.block(0, j * d, d, d)));
    return assemble(ss, std::move(ws));
}

double SumRuleReport::max_gamma_rule_residual() const {
    double m = 0.0;
    for (double r : gamma_rule_residuals) m = std::max(m, std::abs(r));
    return m;
}

double SumRuleReport::min_positivity_eig() const {
    double m = std::numeric_limits<double>::infinity();
    for (double e : positivity_min_eigs) m = std::min(m, e);
    return m;
}

SumRuleReport verify_sum_rules(const CommutatorBudget& b) {
    const std::size_t n = b.n_modes();
    SumRuleReport rep;
    if (n == 0) return rep;

    CMatrix k_sum(n, n);
    for (const auto& k : b.per_channel_k) k_sum += k;
    rep.completeness_residual = (k_sum - CMatrix::identity(n)).max_abs();

    if (b.per_channel_w.size() == n) {
        CMatrix w_sum(2 * n, 2 * n);
        for (const auto& w : b.per_channel_w) w_sum += w;
        rep.doubled_completeness_residual = (w_sum - doubled_metric(n)).max_abs();
    }

    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += b.transfer[i][j];
        rep.row_sum_residuals.push_back(s - 1.0);
    }

    rep.gamma_rule_applicable = b.passive && b.diagonal_dissipation;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += b.gammas[j] * b.transfer[j][i];
        rep.gamma_rule_residuals.push_back(s - b.gammas[i]);
    }

    rep.positivity_applicable = b.passive;
    for (const auto& k : b.per_channel_k) rep.positivity_min_eigs.push_back(hermitian_eigenvalues(k).front());
    return rep;
}

double ReciprocityReport::max_residual() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, std::abs(e.residual));
    return m;
}

ReciprocityReport verify_reciprocity(const CommutatorBudget& b) {
    ReciprocityReport rep;
    const std::size_t n = b.n_modes();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            rep.entries.push_back(
                {i, j, b.gammas[j] * b.transfer[j][i] - b.gammas[i] * b.transfer[i][j]});
    return rep;
}

IxBoundReport two_mode_ix_bound(const CommutatorBudget& b, double tol) {
    if (b.n_modes() != 2) throw ApplicabilityError("two_mode_ix_bound: requires exactly two modes");
    if (!b.passive || !b.diagonal_dissipation) {
        throw ApplicabilityError(
            "two_mode_ix_bound: requires a passive, diagonally dissipative network");
    }
    const double g1 = b.gammas[0];
    const double g2 = b.gammas[1];
    IxBoundReport rep;
    rep.ix = b.transfer[0][1] / g2;
    rep.ix_reverse = b.transfer[1][0] / g1;
    rep.bound = 1.0 / (g1 + g2);
    rep.bound_slack = rep.bound - rep.ix;
    rep.diagonal_sum = b.transfer[0][0] + b.transfer[1][1];
    rep.diagonal_sum_slack = rep.diagonal_sum - 1.0;
    rep.pass = rep.bound_slack >= -tol && rep.diagonal_sum_slack >= -tol;
    return rep;
}

}  // namespace ccrb
