#pragma once

// JSON forms of network specs, input moments and reports.
//
// Network spec:
//   { "modes": 2,                       (optional, must match baths)
//     "labels": ["a", "b"],             (optional)
//     "baths": [ {"gamma": 1, "n": 0, "m_re": 0, "m_im": 0}, ... ],
//     "couplings": [ {"kind": "beam_splitter", "modes": [0, 1],
//                     "amp_re": 0.5, "amp_im": 0}, ... ] }
// "amp" may replace amp_re/amp_im for real amplitudes.
//
// Input moments:
//   { "channels": [ {"n": 0, "m_re": 0, "m_im": 0}, ... ] }
// or the full matrices
//   { "normal": {"re": [[..]], "im": [[..]]}, "anomalous": {"re": .., "im": ..} }

#include <filesystem>
#include <string_view>

#include <nlohmann/json.hpp>

#include "ccrbudget/budget.hpp"
#include "ccrbudget/linalg.hpp"
#include "ccrbudget/moments.hpp"
#include "ccrbudget/network.hpp"
#include "ccrbudget/steady_state.hpp"

namespace ccrb {

/// Throws SpecError naming the line (syntax errors) or field path (schema errors).
NetworkSpec parse_network_spec(std::string_view text);
NetworkSpec load_network_spec(const std::filesystem::path& path);
nlohmann::json to_json(const NetworkSpec& spec);

InputMoments parse_input_moments(std::string_view text, std::size_t n_channels);
InputMoments load_input_moments(const std::filesystem::path& path, std::size_t n_channels);
nlohmann::json to_json(const InputMoments& moments);

/// {"re": [[...]], "im": [[...]]}
nlohmann::json to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j, std::string_view field);

/// {I, sum_rule_residual, gamma_rule_residuals, reciprocity_residuals, positivity_min_eigs, ...}
nlohmann::json budget_report(const CommutatorBudget& b);

/// Per-mode quadrature blocks, minimal variances and the covariance convention.
nlohmann::json covariance_report(const CovarianceState& cs);

}  // namespace ccrb
