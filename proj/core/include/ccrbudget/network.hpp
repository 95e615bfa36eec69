#pragma once

// Declarative description of a linear bosonic network and its translation to
// the doubled-space Langevin form  d xi/dt = A xi + D xi_in  with
// xi = [a_1 .. a_N; a_1^dagger .. a_N^dagger].
//
// Hamiltonian conventions (hbar = 1), each term plus its Hermitian conjugate:
//   beam_splitter         g a_i^dagger a_j          -> A_ij += -i g, A_ji += -i g*
//   two_mode_squeeze      G a_i^dagger a_j^dagger   -> B_ij = B_ji += -i G
//   detuning              Delta a_i^dagger a_i      -> A_ii += -i Delta   (Delta real)
//   degenerate_parametric (lambda/2) a_i^dagger^2   -> B_ii += -i lambda
// where the annihilation sector obeys da/dt = A a + B a^dagger + sqrt(gamma) a_in
// and A_ii also carries -gamma_i / 2.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccrbudget/linalg.hpp"
#include "ccrbudget/moments.hpp"

namespace ccrb {

enum class CouplingKind { beam_splitter, two_mode_squeeze, detuning, degenerate_parametric };

std::string_view to_string(CouplingKind kind);
std::optional<CouplingKind> parse_coupling_kind(std::string_view name);
/// Number of mode indices a coupling of this kind takes (1 or 2).
std::size_t arity(CouplingKind kind);

/// Markovian bath attached to one mode.
struct BathSpec {
    double gamma = 1.0;      // damping rate
    double occupancy = 0.0;  // thermal quanta n
    cplx anomalous = 0.0;    // <a_in a_in> amplitude m
};

struct CouplingTerm {
    CouplingKind kind = CouplingKind::beam_splitter;
    cplx amplitude = 0.0;
    std::vector<std::size_t> modes;

    static CouplingTerm beam_splitter(std::size_t i, std::size_t j, cplx g);
    static CouplingTerm two_mode_squeeze(std::size_t i, std::size_t j, cplx g);
    static CouplingTerm detuning(std::size_t i, double delta);
    static CouplingTerm degenerate_parametric(std::size_t i, cplx lambda);
};

/// One bath per mode; input channel j is the bath of mode j.
struct NetworkSpec {
    std::vector<BathSpec> baths;
    std::vector<CouplingTerm> couplings;
    std::vector<std::string> labels;

    std::size_t n_modes() const noexcept { return baths.size(); }
    std::vector<double> gammas() const;
};

struct ValidationReport {
    std::vector<std::string> warnings;
};

/// Throws SpecError on structural violations (gamma <= 0, bad indices, wrong
/// arity, complex detuning, negative occupancy). Bath moments outside the
/// single-mode physicality bound are reported as warnings only.
ValidationReport validate(const NetworkSpec& spec);

/// Bath moments of the spec as InputMoments.
InputMoments bath_moments(const NetworkSpec& spec);

struct StateSpace {
    CMatrix drift;  // 2N x 2N
    CMatrix input;  // 2N x 2N, diag(sqrt(gamma), sqrt(gamma))
    CMatrix sigma;  // diag(I_N, -I_N)

    std::size_t n_modes() const noexcept { return drift.rows() / 2; }
    /// Annihilation-sector blocks of the drift.
    CMatrix normal_block() const { return drift.block(0, 0, n_modes(), n_modes()); }
    CMatrix anomalous_block() const { return drift.block(0, n_modes(), n_modes(), n_modes()); }
};

CMatrix doubled_metric(std::size_t n_modes);

/// Doubled-space drift from annihilation-sector blocks: [[A, B], [B*, A*]].
CMatrix doubled_drift(const CMatrix& normal, const CMatrix& anomalous);

StateSpace build_state_space(const NetworkSpec& spec);

/// Largest violation of the doubled-space conjugation symmetry of the drift.
double conjugation_symmetry_residual(const CMatrix& drift);

struct RealizabilityReport {
    bool pass = false;
    double residual = 0.0;  // |A S + S A^dagger + D S D^dagger|_max
};

RealizabilityReport check_physical_realizability(const StateSpace& ss,
                                                 double tol = Tolerances::physical_realizability);

/// No two_mode_squeeze or degenerate_parametric term with nonzero amplitude.
bool is_passive(const NetworkSpec& spec);
/// Off-diagonal (a <-> a^dagger) drift blocks vanish within tol.
bool is_passive(const StateSpace& ss, double tol = 1e-12);
/// A + A^dagger = -diag(gamma) on the annihilation sector, within tol.
bool has_diagonal_dissipation(const StateSpace& ss, double tol = 1e-12);

/// Maps input moments into a frame where one mode is replaced by
/// alpha = cosh(xi) a + sinh(xi) a^dagger (applied to its input channel).
struct MomentTransform {
    std::size_t mode = 0;
    double xi = 0.0;

    /// Doubled-space transform T with xi' = T xi.
    CMatrix matrix(std::size_t n_modes) const;
    InputMoments apply(const InputMoments& moments) const;
};

struct BogoliubovFrame {
    NetworkSpec spec;
    MomentTransform rule;
};

/// Rewrites the network in terms of alpha = cosh(xi) a_m + sinh(xi) a_m^dagger.
/// Couplings touching mode m are transformed exactly; bath moments of mode m
/// are replaced by the transformed input moments (damping is unchanged).
BogoliubovFrame bogoliubov_frame(const NetworkSpec& spec, std::size_t mode, double xi);

struct BogoliubovAngle {
    double xi = 0.0;
    /// Partner modes coupled to `mode` and the beam-splitter amplitude of
    /// a_partner^dagger alpha after the transform.
    std::vector<std::size_t> partners;
    std::vector<cplx> effective_coupling;
};

/// Squeezing parameter that turns every (beam-splitter, two-mode-squeeze)
/// pair on `mode` into a pure beam splitter: tanh(xi) = G+/G-. Requires the
/// same real ratio for all partners and |G+| < |G-|; throws FrameError otherwise.
BogoliubovAngle bogoliubov_angle(const NetworkSpec& spec, std::size_t mode);

/// bogoliubov_frame with the angle from bogoliubov_angle; residual two-mode
/// squeeze amplitudes on the mode are removed exactly.
BogoliubovFrame passive_bogoliubov_frame(const NetworkSpec& spec, std::size_t mode);

}  // namespace ccrb
