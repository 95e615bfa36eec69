#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ccrbudget/network.hpp"
#include "ccrbudget/scenarios.hpp"

namespace ccrb {

/// Construction of random stable networks:
/// N uniform in [min_modes, max_modes], gamma_i uniform in [gamma_min, gamma_max],
/// each mode pair gets a beam splitter with probability edge_probability,
/// amplitude modulus uniform in [0, amplitude_max] and a uniform random phase.
/// With real_amplitudes the phase is 0 or pi with equal probability.
/// Detunings are uniform in [-detuning_max, detuning_max]. Non-passive draws
/// add a two-mode squeeze on each edge with modulus uniform in
/// [0, squeeze_fraction * min(gamma)] and reject unstable draws.
struct RandomNetworkOptions {
    std::size_t min_modes = 1;
    std::size_t max_modes = 5;
    double gamma_min = 0.1;
    double gamma_max = 10.0;
    double edge_probability = 0.5;
    double amplitude_max = 2.0;
    double detuning_max = 0.0;
    bool real_amplitudes = false;  // beam-splitter phases fixed to 0 or pi
    bool passive = true;
    double squeeze_fraction = 0.4;
    std::size_t max_attempts = 1000;
};

/// Deterministic across platforms: uses mt19937_64 with an explicit 53-bit
/// mapping to [0, 1) rather than the implementation-defined distributions.
class RandomNetworkGenerator {
public:
    explicit RandomNetworkGenerator(std::uint64_t seed) : engine_(seed) {}

    double uniform();                     // [0, 1)
    double uniform(double lo, double hi);  // [lo, hi)
    std::size_t uniform_index(std::size_t lo, std::size_t hi);  // [lo, hi]

    NetworkSpec network(const RandomNetworkOptions& options = {});
    /// Occupancies uniform in [0, n_max].
    std::vector<double> occupancies(std::size_t n, double n_max);

    /// Stable three-mode parameters: kappa in [0.5, 2], omega in [0.2, 2],
    /// log-uniform gamma_m in [1e-3, 5e-2], coupling in [0.1, 3], xi in [0, 1],
    /// occupancies in [0, n_max].
    ThreeModeParams three_mode(double n_max = 2.0);

private:
    std::mt19937_64 engine_;
};

}  // namespace ccrb
