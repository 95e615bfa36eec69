#include "ccrbudget/network.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "ccrbudget/errors.hpp"

namespace ccrb {

namespace {

constexpr std::array<std::pair<CouplingKind, std::string_view>, 4> kKindNames = {{
    {CouplingKind::beam_splitter, "beam_splitter"},
    {CouplingKind::two_mode_squeeze, "two_mode_squeeze"},
    {CouplingKind::detuning, "detuning"},
    {CouplingKind::degenerate_parametric, "degenerate_parametric"},
}};

}  // namespace

std::string_view to_string(CouplingKind kind) {
    for (const auto& [k, name] : kKindNames)
        if (k == kind) return name;
    return "unknown";
}

std::optional<CouplingKind> parse_coupling_kind(std::string_view name) {
    for (const auto& [k, n] : kKindNames)
        if (n == name) return k;
    return std::nullopt;
}

std::size_t arity(CouplingKind kind) {
    switch (kind) {
        case CouplingKind::beam_splitter:
        case CouplingKind::two_mode_squeeze:
            return 2;
        case CouplingKind::detuning:
        case CouplingKind::degenerate_parametric:
            return 1;
    }
    return 0;
}

CouplingTerm CouplingTerm::beam_splitter(std::size_t i, std::size_t j, cplx g) {
    return {CouplingKind::beam_splitter, g, {i, j}};
}
CouplingTerm CouplingTerm::two_mode_squeeze(std::size_t i, std::size_t j, cplx g) {
    return {CouplingKind::two_mode_squeeze, g, {i, j}};
}
CouplingTerm CouplingTerm::detuning(std::size_t i, double delta) {
    return {CouplingKind::detuning, delta, {i}};
}
CouplingTerm CouplingTerm::degenerate_parametric(std::size_t i, cplx lambda) {
    return {CouplingKind::degenerate_parametric, lambda, {i}};
}

std::vector<double> NetworkSpec::gammas() const {
    std::vector<double> g;
    g.reserve(baths.size());
    for (const auto& b : baths) g.push_back(b.gamma);
    return g;
}

ValidationReport validate(const NetworkSpec& spec) {
    ValidationReport report;
    const std::size_t n = spec.n_modes();
    if (n == 0) throw SpecError("network has no modes");
    if (!spec.labels.empty() && spec.labels.size() != n) {
        throw SpecError("labels: expected one label per mode");
    }
    for (std::size_t j = 0; j < n; ++j) {
        const BathSpec& b = spec.baths[j];
        std::ostringstream where;
        where << "baths[" << j << "]";
        if (!(b.gamma > 0.0) || !std::isfinite(b.gamma)) {
            throw SpecError(where.str() + ".gamma must be positive and finite");
        }
        if (!(b.occupancy >= 0.0) || !std::isfinite(b.occupancy)) {
            throw SpecError(where.str() + ".n must be non-negative and finite");
        }
        if (!std::isfinite(b.anomalous.real()) || !std::isfinite(b.anomalous.imag())) {
            throw SpecError(where.str() + ".m must be finite");
        }
        const double bound = b.occupancy * (b.occupancy + 1.0);
        if (std::norm(b.anomalous) > bound * (1.0 + 1e-12) + 1e-15) {
            report.warnings.push_back(where.str() +
                                      ": |m|^2 exceeds n(n+1); accepted as an engineered input");
        }
    }
    for (std::size_t k = 0; k < spec.couplings.size(); ++k) {
        const CouplingTerm& c = spec.couplings[k];
        std::ostringstream where;
        where << "couplings[" << k << "]";
        if (c.modes.size() != arity(c.kind)) {
            throw SpecError(where.str() + ": " + std::string(to_string(c.kind)) + " takes " +
                            std::to_string(arity(c.kind)) + " mode index(es)");
        }
        for (std::size_t m : c.modes) {
            if (m >= n) throw SpecError(where.str() + ": mode index out of range");
        }
        if (c.modes.size() == 2 && c.modes[0] == c.modes[1]) {
            throw SpecError(where.str() + ": two-mode coupling needs distinct modes");
        }
        if (!std::isfinite(c.amplitude.real()) || !std::isfinite(c.amplitude.imag())) {
            throw SpecError(where.str() + ": amplitude must be finite");
        }
        if (c.kind == CouplingKind::detuning && c.amplitude.imag() != 0.0) {
            throw SpecError(where.str() + ": detuning amplitude must be real");
        }
    }
    return report;
}

InputMoments bath_moments(const NetworkSpec& spec) {
    std::vector<double> n;
    std::vector<cplx> m;
    for (const auto& b : spec.baths) {
        n.push_back(b.occupancy);
        m.push_back(b.anomalous);
    }
    return InputMoments::uncorrelated(n, m);
}

CMatrix doubled_metric(std::size_t n_modes) {
    CMatrix s(2 * n_modes, 2 * n_modes);
    for (std::size_t i = 0; i < n_modes; ++i) {
        s(i, i) = 1.0;
        s(n_modes + i, n_modes + i) = -1.0;
    }
    return s;
}

CMatrix doubled_drift(const CMatrix& normal, const CMatrix& anomalous) {
    const std::size_t n = normal.rows();
    if (!normal.is_square() || anomalous.rows() != n || anomalous.cols() != n) {
        throw DimensionError("doubled_drift: blocks must be square and equal size");
    }
    CMatrix a(2 * n, 2 * n);
    a.set_block(0, 0, normal);
    a.set_block(0, n, anomalous);
    a.set_block(n, 0, anomalous.conjugate());
    a.set_block(n, n, normal.conjugate());
    return a;
}

StateSpace build_state_space(const NetworkSpec& spec) {
    validate(spec);
    const std::size_t n = spec.n_modes();
    const cplx minus_i{0.0, -1.0};
    CMatrix normal(n, n);
    CMatrix anomalous(n, n);
    for (std::size_t j = 0; j < n; ++j) normal(j, j) = -0.5 * spec.baths[j].gamma;
    for (const auto& c : spec.couplings) {
        switch (c.kind) {
            case CouplingKind::beam_splitter: {
                const std::size_t i = c.modes[0], j = c.modes[1];
                normal(i, j) += minus_i * c.amplitude;
                normal(j, i) += minus_i * std::conj(c.amplitude);
                break;
            }
            case CouplingKind::two_mode_squeeze: {
                const std::size_t i = c.modes[0], j = c.modes[1];
                anomalous(i, j) += minus_i * c.amplitude;
                anomalous(j, i) += minus_i * c.amplitude;
                break;
            }
            case CouplingKind::detuning:
                normal(c.modes[0], c.modes[0]) += minus_i * c.amplitude.real();
                break;
            case CouplingKind::degenerate_parametric:
                anomalous(c.modes[0], c.modes[0]) += minus_i * c.amplitude;
                break;
        }
    }

    StateSpace ss;
    ss.drift = doubled_drift(normal, anomalous);
    std::vector<double> root(2 * n);
    for (std::size_t j = 0; j < n; ++j) root[j] = root[n + j] = std::sqrt(spec.baths[j].gamma);
    ss.input = CMatrix::diagonal(std::span<const double>(root));
    ss.sigma = doubled_metric(n);
    return ss;
}

double conjugation_symmetry_residual(const CMatrix& drift) {
    if (!drift.is_square() || drift.rows() % 2 != 0) {
        throw DimensionError("conjugation_symmetry_residual: expected 2N x 2N drift");
    }
    const std::size_t n = drift.rows() / 2;
    const CMatrix a = drift.block(0, 0, n, n);
    const CMatrix b = drift.block(0, n, n, n);
    return std::max((drift.block(n, n, n, n) - a.conjugate()).max_abs(),
                    (drift.block(n, 0, n, n) - b.conjugate()).max_abs());
}

RealizabilityReport check_physical_realizability(const StateSpace& ss, double tol) {
    const CMatrix r = ss.drift * ss.sigma + ss.sigma * ss.drift.adjoint() +
                      ss.input * ss.sigma * ss.input.adjoint();
    RealizabilityReport rep;
    rep.residual = r.max_abs();
    rep.pass = rep.residual <= tol;
    return rep;
}

bool is_passive(const NetworkSpec& spec) {
    return std::none_of(spec.couplings.begin(), spec.couplings.end(), [](const CouplingTerm& c) {
        return (c.kind == CouplingKind::two_mode_squeeze ||
                c.kind == CouplingKind::degenerate_parametric) &&
               c.amplitude != cplx{};
    });
}

bool is_passive(const StateSpace& ss, double tol) {
    return ss.anomalous_block().max_abs() <= tol;
}

bool has_diagonal_dissipation(const StateSpace& ss, double tol) {
    const std::size_t n = ss.n_modes();
    const CMatrix a = ss.normal_block();
    const CMatrix sum = a + a.adjoint();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double gamma = std::norm(ss.input(i, i));
            const cplx expected = i == j ? cplx{-gamma, 0.0} : cplx{};
            if (std::abs(sum(i, j) - expected) > tol) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Bogoliubov frames

CMatrix MomentTransform::matrix(std::size_t n_modes) const {
    if (mode >= n_modes) throw DimensionError("MomentTransform: mode out of range");
    CMatrix t = CMatrix::identity(2 * n_modes);
    const double c = std::cosh(xi);
    const double s = std::sinh(xi);
    t(mode, mode) = c;
    t(mode, n_modes + mode) = s;
    t(n_modes + mode, mode) = s;
    t(n_modes + mode, n_modes + mode) = c;
    return t;
}

InputMoments MomentTransform::apply(const InputMoments& moments) const {
    const CMatrix t = matrix(moments.channels());
    return InputMoments::from_noise_matrix(t * moments.noise_matrix() * t.adjoint());
}

namespace {

// Couplings between the target mode and one partner, written as
// g a_k^dagger a_m + G a_k^dagger a_m^dagger + h.c.
struct PartnerPair {
    std::size_t partner = 0;
    cplx bs = 0.0;
    cplx tms = 0.0;
};

std::vector<PartnerPair> collect_partners(const NetworkSpec& spec, std::size_t mode) {
    std::vector<PartnerPair> pairs;
    auto slot = [&](std::size_t k) -> PartnerPair& {
        for (auto& p : pairs)
            if (p.partner == k) return p;
        pairs.push_back({k, 0.0, 0.0});
        return pairs.back();
    };
    for (const auto& c : spec.couplings) {
        if (arity(c.kind) != 2) continue;
        const std::size_t i = c.modes[0], j = c.modes[1];
        if (i != mode && j != mode) continue;
        const std::size_t k = i == mode ? j : i;
        if (c.kind == CouplingKind::beam_splitter) {
            // g a_i^dagger a_j: coefficient of a_k^dagger a_m is g if k == i, else g*.
            slot(k).bs += k == i ? c.amplitude : std::conj(c.amplitude);
        } else {
            slot(k).tms += c.amplitude;
        }
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const PartnerPair& a, const PartnerPair& b) { return a.partner < b.partner; });
    return pairs;
}

}  // namespace

BogoliubovFrame bogoliubov_frame(const NetworkSpec& spec, std::size_t mode, double xi) {
    validate(spec);
    if (mode >= spec.n_modes()) throw DimensionError("bogoliubov_frame: mode out of range");
    if (!std::isfinite(xi)) throw FrameError("bogoliubov_frame: xi must be finite");

    const double c = std::cosh(xi);
    const double s = std::sinh(xi);
    const double c2 = std::cosh(2.0 * xi);
    const double s2 = std::sinh(2.0 * xi);

    NetworkSpec out;
    out.baths = spec.baths;
    out.labels = spec.labels;

    // Local terms on the target mode collapse into one detuning and one
    // parametric amplitude after a_m = c alpha - s alpha^dagger.
    double detuning = 0.0;
    cplx lambda = 0.0;
    bool has_local = false;
    for (const auto& term : spec.couplings) {
        const bool touches = std::find(term.modes.begin(), term.modes.end(), mode) != term.modes.end();
        if (!touches) {
            out.couplings.push_back(term);
            continue;
        }
        if (term.kind == CouplingKind::detuning) {
            const double d = term.amplitude.real();
            detuning += d * c2;
            lambda += -d * s2;
            has_local = true;
        } else if (term.kind == CouplingKind::degenerate_parametric) {
            const cplx l = term.amplitude;
            lambda += l * c * c + std::conj(l) * s * s;
            detuning += -s2 * l.real();
            has_local = true;
        }
    }
    for (const auto& p : collect_partners(spec, mode)) {
        const cplx bs = c * p.bs - s * p.tms;
        const cplx tms = c * p.tms - s * p.bs;
        const double scale = std::max(1.0, std::abs(p.bs) + std::abs(p.tms));
        if (std::abs(bs) > 1e-14 * scale) {
            out.couplings.push_back(CouplingTerm::beam_splitter(p.partner, mode, bs));
        }
        if (std::abs(tms) > 1e-14 * scale) {
            out.couplings.push_back(CouplingTerm::two_mode_squeeze(p.partner, mode, tms));
        }
    }
    if (has_local) {
        if (detuning != 0.0) out.couplings.push_back(CouplingTerm::detuning(mode, detuning));
        if (lambda != cplx{}) out.couplings.push_back(CouplingTerm::degenerate_parametric(mode, lambda));
    }

    BogoliubovFrame frame;
    frame.rule = MomentTransform{mode, xi};
    const InputMoments moved = frame.rule.apply(bath_moments(spec));
    out.baths[mode].occupancy = std::max(0.0, moved.occupancy(mode));
    out.baths[mode].anomalous = moved.anomalous(mode);
    frame.spec = std::move(out);
    return frame;
}

BogoliubovAngle bogoliubov_angle(const NetworkSpec& spec, std::size_t mode) {
    validate(spec);
    if (mode >= spec.n_modes()) throw DimensionError("bogoliubov_angle: mode out of range");
    const auto pairs = collect_partners(spec, mode);

    std::optional<double> ratio;
    for (const auto& p : pairs) {
        if (p.tms == cplx{}) {
            if (p.bs == cplx{}) continue;
            if (ratio && std::abs(*ratio) > 1e-15) {
                throw FrameError("bogoliubov_angle: partners need different squeezing angles");
            }
            ratio = 0.0;
            continue;
        }
        if (std::abs(p.tms) >= std::abs(p.bs)) {
            throw FrameError("bogoliubov_angle: |G+| >= |G-|, no hyperbolic frame (system potentially unstable)");
        }
        const cplx r = p.tms / p.bs;
        if (std::abs(r.imag()) > 1e-12 * std::max(1.0, std::abs(r))) {
            throw FrameError("bogoliubov_angle: G+/G- is not real");
        }
        if (ratio && std::abs(*ratio - r.real()) > 1e-12) {
            throw FrameError("bogoliubov_angle: partners need different squeezing angles");
        }
        ratio = r.real();
    }

    BogoliubovAngle out;
    out.xi = std::atanh(ratio.value_or(0.0));
    const double c = std::cosh(out.xi), s = std::sinh(out.xi);
    for (const auto& p : pairs) {
        out.partners.push_back(p.partner);
        out.effective_coupling.push_back(c * p.bs - s * p.tms);
    }
    return out;
}

BogoliubovFrame passive_bogoliubov_frame(const NetworkSpec& spec, std::size_t mode) {
    const BogoliubovAngle angle = bogoliubov_angle(spec, mode);
    BogoliubovFrame frame = bogoliubov_frame(spec, mode, angle.xi);
    // The transformed two-mode-squeeze amplitudes vanish analytically.
    std::erase_if(frame.spec.couplings, [&](const CouplingTerm& t) {
        return t.kind == CouplingKind::two_mode_squeeze &&
               std::find(t.modes.begin(), t.modes.end(), mode) != t.modes.end();
    });
    return frame;
}

}  // namespace ccrb
