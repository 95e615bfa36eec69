#include "ccrbudget/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ccrbudget/errors.hpp"
#include "ccrbudget/steady_state.hpp"

namespace ccrb {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << name << " must be positive and finite, got " << v;
        throw SpecError(os.str());
    }
}

void require_non_negative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << name << " must be non-negative and finite, got " << v;
        throw SpecError(os.str());
    }
}

// Golden-section minimization of a unimodal f on [a, b].
template <class F>
double golden_minimize(F&& f, double a, double b, double tol, int max_iter = 400) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < max_iter && std::abs(b - a) > tol; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

CMatrix real_matrix(double a00, double a01, double a10, double a11) {
    return CMatrix{{a00, a01}, {a10, a11}};
}

CMatrix quadrature_block_covariance(const CMatrix& a, double q0, double q1, const char* name) {
    const Spectrum s = eigenvalues(a);
    if (s.max_real() >= 0.0) {
        std::ostringstream os;
        os << "quadrature block " << name << " is unstable: eigenvalue " << s.leading();
        throw StabilityError(os.str(), s.leading());
    }
    return solve_lyapunov(a, real_matrix(q0, 0.0, 0.0, q1));
}

}  // namespace

// ---------------------------------------------------------------------------
// Two-mode dissipative squeezing

TwoModeParams TwoModeParams::from_frame(double g_script, double xi, double gamma1, double gamma2,
                                        double n1, double n2) {
    TwoModeParams p;
    p.g_minus = g_script * std::cosh(xi);
    p.g_plus = g_script * std::sinh(xi);
    p.gamma1 = gamma1;
    p.gamma2 = gamma2;
    p.n1 = n1;
    p.n2 = n2;
    return p;
}

double TwoModeParams::g_script() const {
    return std::sqrt(std::max(0.0, g_minus * g_minus - g_plus * g_plus));
}

double TwoModeParams::xi() const {
    if (g_minus == 0.0) return 0.0;
    return std::atanh(g_plus / g_minus);
}

NetworkSpec two_mode_network(const TwoModeParams& p) {
    NetworkSpec s;
    s.baths = {{p.gamma1, p.n1, 0.0}, {p.gamma2, p.n2, 0.0}};
    s.couplings.push_back(CouplingTerm::beam_splitter(0, 1, p.g_minus));
    if (p.g_plus != 0.0) s.couplings.push_back(CouplingTerm::two_mode_squeeze(0, 1, p.g_plus));
    s.labels = {"a1", "a2"};
    return s;
}

SqueezingPowerResult two_mode_squeezing_power(const TwoModeParams& p) {
    require_non_negative(p.g_plus, "g_plus");
    require_non_negative(p.g_minus, "g_minus");
    if (p.g_plus > 0.0 && p.g_plus >= p.g_minus) {
        throw FrameError("two_mode_squeezing_power: requires g_plus < g_minus");
    }
    const NetworkSpec spec = two_mode_network(p);
    const StateSpace ss = build_state_space(spec);
    const CovarianceState cs = steady_covariance(ss, bath_moments(spec));

    SqueezingPowerResult r;
    const double input_var[2] = {p.n1 + 0.5, p.n2 + 0.5};
    for (std::size_t i = 0; i < 2; ++i) {
        const QuadratureVariance q = min_quadrature_variance(cs, i);
        r.normalized[i] = q.value / input_var[i];
        r.theta[i] = q.theta;
    }
    r.sum = r.normalized[0] + r.normalized[1];
    r.bound = 1.0;
    r.slack = r.sum - r.bound;
    return r;
}

// ---------------------------------------------------------------------------
// Parametric-augmented two-mode system

NetworkSpec parametric_network(const ParametricParams& p) {
    NetworkSpec s = two_mode_network(p.base);
    if (p.eta1 != 0.0) s.couplings.push_back(CouplingTerm::degenerate_parametric(0, cplx{0.0, -0.5 * p.eta1}));
    if (p.eta2 != 0.0) s.couplings.push_back(CouplingTerm::degenerate_parametric(1, cplx{0.0, -0.5 * p.eta2}));
    return s;
}

double parametric_bound(double gamma1, double gamma2, double delta_eta) {
    const double s = gamma1 + gamma2;
    const double den = s * s - delta_eta * delta_eta;
    if (std::abs(den) <= 64.0 * std::numeric_limits<double>::epsilon() * s * s) {
        std::ostringstream os;
        os << "parametric_bound: singular at |eta1 - eta2| = gamma1 + gamma2 = " << s;
        throw SingularityError(os.str());
    }
    return (s * s - delta_eta * (gamma1 - gamma2)) / den;
}

double parametric_bound(const ParametricParams& p) {
    return parametric_bound(p.base.gamma1, p.base.gamma2, p.delta_eta());
}

ParametricOptimum parametric_optimum(double gamma1, double gamma2) {
    require_positive(gamma1, "gamma1");
    require_positive(gamma2, "gamma2");
    const double s = gamma1 + gamma2;
    const double r1 = std::sqrt(gamma1);
    const double r2 = std::sqrt(gamma2);

    ParametricOptimum o;
    o.delta_eta_star = s * (r1 - r2) / (r1 + r2);
    o.min_value = 0.5 + r1 * r2 / s;

    const double edge = s * (1.0 - 1e-9);
    auto f = [&](double d) { return parametric_bound(gamma1, gamma2, d); };
    o.numeric_delta_eta = golden_minimize(f, -edge, edge, 1e-13 * s);
    o.numeric_min_value = f(o.numeric_delta_eta);
    return o;
}

ParametricVarianceReport parametric_variance_check(const ParametricParams& p) {
    const TwoModeParams& b = p.base;
    require_positive(b.gamma1, "gamma1");
    require_positive(b.gamma2, "gamma2");
    const double g_sum = b.g_minus + b.g_plus;
    const double g_diff = b.g_minus - b.g_plus;
    const double in1 = b.n1 + 0.5;
    const double in2 = b.n2 + 0.5;

    const CMatrix a1 = real_matrix(-0.5 * (b.gamma1 + p.eta1), g_diff, -g_sum, -0.5 * (b.gamma2 - p.eta2));
    const CMatrix a2 = real_matrix(-0.5 * (b.gamma2 + p.eta2), g_diff, -g_sum, -0.5 * (b.gamma1 - p.eta1));
    const CMatrix v1 = quadrature_block_covariance(a1, b.gamma1 * in1, b.gamma2 * in2, "A1 (X1, Y2)");
    const CMatrix v2 = quadrature_block_covariance(a2, b.gamma2 * in2, b.gamma1 * in1, "A2 (X2, Y1)");

    const double s = b.gamma1 + b.gamma2;
    const double d = p.delta_eta();
    auto ratio = [](double value, double bound) { return QuadratureRatio{value, bound, value - bound}; };

    ParametricVarianceReport r;
    r.x1 = ratio(v1(0, 0).real() / in1, b.gamma1 / (s + d));
    r.y2 = ratio(v1(1, 1).real() / in2, b.gamma2 / (s + d));
    r.x2 = ratio(v2(0, 0).real() / in2, b.gamma2 / (s - d));
    r.y1 = ratio(v2(1, 1).real() / in1, b.gamma1 / (s - d));
    r.x_sum = r.x1.ratio + r.x2.ratio;
    r.y_sum = r.y1.ratio + r.y2.ratio;
    r.block1_sum = r.x1.ratio + r.y2.ratio;
    r.block2_sum = r.x2.ratio + r.y1.ratio;
    r.bound = parametric_bound(b.gamma1, b.gamma2, d);
    r.y_bound = parametric_bound(b.gamma1, b.gamma2, -d);
    r.slack = r.x_sum - r.bound;
    return r;
}

// ---------------------------------------------------------------------------
// Three-mode optomechanical entangler

ThreeModeParams ThreeModeParams::from_couplings(double g_plus, double g_minus, double omega,
                                                double kappa, double gamma_m, double n_o,
                                                double n_m) {
    if (!(std::abs(g_plus) < std::abs(g_minus))) {
        throw FrameError("ThreeModeParams: requires |g_plus| < |g_minus|");
    }
    ThreeModeParams p;
    p.g_script = std::sqrt(g_minus * g_minus - g_plus * g_plus);
    p.xi = std::atanh(g_plus / g_minus);
    p.omega = omega;
    p.kappa = kappa;
    p.gamma_m = gamma_m;
    p.n_o = n_o;
    p.n_m = n_m;
    return p;
}

NetworkSpec three_mode_network(const ThreeModeParams& p) {
    require_positive(p.kappa, "kappa");
    require_positive(p.gamma_m, "gamma_m");
    require_non_negative(p.n_o, "n_o");
    require_non_negative(p.n_m, "n_m");
    const double g_minus = p.g_script * std::cosh(p.xi) / std::numbers::sqrt2;
    const double g_plus = p.g_script * std::sinh(p.xi) / std::numbers::sqrt2;

    NetworkSpec s;
    s.baths = {{p.kappa, p.n_o, 0.0}, {p.gamma_m, p.n_m, 0.0}, {p.gamma_m, p.n_m, 0.0}};
    s.labels = {"cavity", "mech2", "mech3"};
    for (std::size_t m : {1u, 2u}) {
        s.couplings.push_back(CouplingTerm::beam_splitter(0, m, g_minus));
        if (g_plus != 0.0) s.couplings.push_back(CouplingTerm::two_mode_squeeze(0, m, g_plus));
    }
    if (p.omega != 0.0) {
        s.couplings.push_back(CouplingTerm::detuning(1, 0.5 * p.omega));
        s.couplings.push_back(CouplingTerm::detuning(2, -0.5 * p.omega));
    }
    return s;
}

CMatrix three_mode_frame(double xi) {
    const double c = std::cosh(xi);
    const double s = std::sinh(xi);
    CMatrix bog(6, 6);
    bog(0, 0) = 1.0;
    bog(3, 3) = 1.0;
    bog(1, 1) = c;
    bog(1, 5) = s;
    bog(2, 2) = c;
    bog(2, 4) = s;
    bog(4, 4) = c;
    bog(4, 2) = s;
    bog(5, 5) = c;
    bog(5, 1) = s;

    const double h = 1.0 / std::numbers::sqrt2;
    CMatrix rot(6, 6);
    rot(0, 0) = 1.0;
    rot(3, 3) = 1.0;
    for (std::size_t off : {0u, 3u}) {
        rot(off + 1, off + 1) = h;
        rot(off + 1, off + 2) = h;
        rot(off + 2, off + 1) = h;
        rot(off + 2, off + 2) = -h;
    }
    return rot * bog;
}

StateSpace three_mode_frame_state_space(const ThreeModeParams& p) {
    StateSpace ss = build_state_space(three_mode_network(p));
    const CMatrix t = three_mode_frame(p.xi);
    ss.drift = t * ss.drift * inverse(t);
    return ss;
}

ThreeModeBudget three_mode_budget(const ThreeModeParams& p) {
    const StateSpace ss = three_mode_frame_state_space(p);
    ThreeModeBudget r;
    r.budget = compute_budget(ss);
    r.i = r.budget.transfer;
    r.eta_e = p.kappa / p.gamma_m * (1.0 - r.i[0][0]);
    const SumRuleReport rules = verify_sum_rules(r.budget);
    r.completeness_residual = rules.completeness_residual;
    r.gamma_rule_residual = rules.max_gamma_rule_residual();
    return r;
}

DuanResult duan_quantity(const ThreeModeParams& p) {
    const NetworkSpec spec = three_mode_network(p);
    const StateSpace ss = build_state_space(spec);
    const CovarianceState cs = steady_covariance(ss, bath_moments(spec));
    const double h = 1.0 / std::numbers::sqrt2;
    const std::vector<cplx> sigma_mode{0.0, h, h};
    const std::vector<cplx> delta_mode{0.0, h, -h};

    DuanResult r;
    r.direct_value = collective_quadrature_variance(cs, sigma_mode, 0.0) +
                     collective_quadrature_variance(cs, delta_mode, 0.5 * std::numbers::pi);

    const ThreeModeBudget tb = three_mode_budget(p);
    const auto& i = tb.i;
    const double mech = i[1][1] + i[1][2] + i[2][1] + i[2][2];
    const double optical = i[1][0] + i[2][0];
    r.budget_value = mech * (p.n_m + 0.5) + optical * (p.n_o + 0.5) * std::exp(-2.0 * p.xi);
    r.eta_e = tb.eta_e;
    r.entangled = r.direct_value < 1.0;
    return r;
}

BoundaryLine separability_boundary(double eta_e, double xi) {
    if (!(eta_e >= 0.0 && eta_e < 2.0)) {
        std::ostringstream os;
        os << "separability_boundary: requires 0 <= eta_e < 2, got " << eta_e;
        throw ApplicabilityError(os.str());
    }
    BoundaryLine line;
    line.eta_e = eta_e;
    line.xi = xi;
    const double decay = std::exp(-2.0 * xi);
    line.slope = -eta_e * decay / (2.0 - eta_e);
    line.n_o_intercept = 0.5 * std::expm1(2.0 * xi);
    line.n_m_intercept = eta_e * (-std::expm1(-2.0 * xi)) / (2.0 * (2.0 - eta_e));
    line.degenerate = xi == 0.0;
    return line;
}

BoundaryLine separability_boundary(const ThreeModeParams& p) {
    return separability_boundary(three_mode_budget(p).eta_e, p.xi);
}

OptimalCoupling optimal_coupling(double kappa, double omega, double gamma_m, double xi) {
    require_positive(kappa, "kappa");
    require_positive(omega, "omega");
    require_positive(gamma_m, "gamma_m");

    auto eta_at = [&](double g) {
        ThreeModeParams p;
        p.g_script = g;
        p.omega = omega;
        p.kappa = kappa;
        p.gamma_m = gamma_m;
        p.xi = xi;
        try {
            return three_mode_budget(p).eta_e;
        } catch (const StabilityError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };

    OptimalCoupling out;
    out.g_formula = std::sqrt(0.5 * omega * std::sqrt(kappa * kappa + 4.0 * omega * omega));
    out.eta_formula = eta_at(out.g_formula);

    // Log-spaced scan over eight decades around the natural rate scale.
    const double scale = std::max({kappa, omega, gamma_m});
    const double lo = std::log(scale * 1e-4);
    const double hi = std::log(scale * 1e4);
    constexpr int kPoints = 161;
    std::vector<double> logs(kPoints);
    std::vector<double> etas(kPoints);
    int best = -1;
    out.stable_min = std::numeric_limits<double>::infinity();
    out.stable_max = 0.0;
    for (int k = 0; k < kPoints; ++k) {
        logs[k] = lo + (hi - lo) * k / (kPoints - 1);
        etas[k] = eta_at(std::exp(logs[k]));
        if (std::isnan(etas[k])) continue;
        out.stable_min = std::min(out.stable_min, std::exp(logs[k]));
        out.stable_max = std::max(out.stable_max, std::exp(logs[k]));
        if (best < 0 || etas[k] > etas[best]) best = k;
    }
    if (best < 0) throw StabilityError("optimal_coupling: no stable coupling found", cplx{});

    const double a = logs[std::max(best - 1, 0)];
    const double b = logs[std::min(best + 1, kPoints - 1)];
    auto neg_eta = [&](double lg) {
        const double e = eta_at(std::exp(lg));
        return std::isnan(e) ? std::numeric_limits<double>::infinity() : -e;
    };
    const double lg = golden_minimize(neg_eta, a, b, 1e-7);
    out.g_numeric = std::exp(lg);
    out.eta_numeric = eta_at(out.g_numeric);
    return out;
}

}  // namespace ccrb
