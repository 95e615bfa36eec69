#include "ccrbudget/random_network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ccrbudget/errors.hpp"

namespace ccrb {

double RandomNetworkGenerator::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomNetworkGenerator::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t RandomNetworkGenerator::uniform_index(std::size_t lo, std::size_t hi) {
    const std::size_t span = hi - lo + 1;
    return lo + std::min(span - 1, static_cast<std::size_t>(uniform() * static_cast<double>(span)));
}

std::vector<double> RandomNetworkGenerator::occupancies(std::size_t n, double n_max) {
    std::vector<double> out(n);
    for (auto& v : out) v = uniform(0.0, n_max);
    return out;
}

NetworkSpec RandomNetworkGenerator::network(const RandomNetworkOptions& o) {
    if (o.min_modes == 0 || o.min_modes > o.max_modes) {
        throw SpecError("random network: invalid mode range");
    }
    for (std::size_t attempt = 0; attempt < o.max_attempts; ++attempt) {
        NetworkSpec s;
        const std::size_t n = uniform_index(o.min_modes, o.max_modes);
        for (std::size_t i = 0; i < n; ++i) s.baths.push_back({uniform(o.gamma_min, o.gamma_max), 0.0, 0.0});
        double gamma_floor = s.baths.front().gamma;
        for (const auto& b : s.baths) gamma_floor = std::min(gamma_floor, b.gamma);

        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (uniform() >= o.edge_probability) continue;
                const double mod = uniform(0.0, o.amplitude_max);
                const cplx amp = o.real_amplitudes ? cplx{uniform() < 0.5 ? mod : -mod, 0.0}
                                                   : std::polar(mod, uniform(0.0, 2.0 * std::numbers::pi));
                s.couplings.push_back(CouplingTerm::beam_splitter(i, j, amp));
                if (!o.passive) {
                    const double sq = uniform(0.0, o.squeeze_fraction * gamma_floor);
                    const double sq_phase = uniform(0.0, 2.0 * std::numbers::pi);
                    s.couplings.push_back(CouplingTerm::two_mode_squeeze(i, j, std::polar(sq, sq_phase)));
                }
            }
            if (o.detuning_max > 0.0) {
                s.couplings.push_back(CouplingTerm::detuning(i, uniform(-o.detuning_max, o.detuning_max)));
            }
        }
        if (is_stable(build_state_space(s).drift)) return s;
    }
    std::ostringstream os;
    os << "random network: no stable draw in " << o.max_attempts << " attempts";
    throw NumericError(os.str(), o.max_attempts);
}

ThreeModeParams RandomNetworkGenerator::three_mode(double n_max) {
    constexpr std::size_t kAttempts = 1000;
    for (std::size_t attempt = 0; attempt < kAttempts; ++attempt) {
        ThreeModeParams p;
        p.kappa = uniform(0.5, 2.0);
        p.omega = uniform(0.2, 2.0);
        p.gamma_m = std::exp(uniform(std::log(1e-3), std::log(5e-2)));
        p.g_script = uniform(0.1, 3.0);
        p.xi = uniform(0.0, 1.0);
        p.n_o = uniform(0.0, n_max);
        p.n_m = uniform(0.0, n_max);
        if (is_stable(build_state_space(three_mode_network(p)).drift)) return p;
    }
    throw NumericError("random three-mode parameters: no stable draw", kAttempts);
}

}  // namespace ccrb
