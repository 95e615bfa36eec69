#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ccrb {

/// 12 significant digits, '.' separator, independent of the C locale.
/// Non-finite values print as nan, inf, -inf; negative zero prints as 0.
std::string format_number(double v);

/// Comma-joined formatted values.
std::string csv_row(std::span<const double> values);

/// VAR:START:STOP:COUNT[:log|:lin]
struct GridSpec {
    std::string variable;
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 0;
    bool log_scale = false;

    /// Grid values in order; endpoints are reproduced exactly.
    std::vector<double> values() const;
};

/// Throws SpecError on malformed text, count < 2 or non-positive log endpoints.
GridSpec parse_grid(std::string_view text);

}  // namespace ccrb
