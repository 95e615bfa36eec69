#include "ccrbudget/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "ccrbudget/errors.hpp"

namespace ccrb {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::string csv_row(std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_number(values[i]);
    }
    return out;
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        parts.push_back(s.substr(pos, next == std::string_view::npos ? next : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return parts;
}

template <class T>
T parse_field(std::string_view text, std::string_view field, std::string_view whole) {
    T value{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        std::ostringstream os;
        os << "grid '" << whole << "': invalid " << field << " '" << text << "'";
        throw SpecError(os.str());
    }
    return value;
}

}  // namespace

GridSpec parse_grid(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() != 4 && parts.size() != 5) {
        std::ostringstream os;
        os << "grid '" << text << "': expected VAR:START:STOP:COUNT[:log]";
        throw SpecError(os.str());
    }
    GridSpec g;
    g.variable = std::string(parts[0]);
    if (g.variable.empty()) throw SpecError("grid: empty variable name");
    g.start = parse_field<double>(parts[1], "start", text);
    g.stop = parse_field<double>(parts[2], "stop", text);
    g.count = parse_field<std::size_t>(parts[3], "count", text);
    if (parts.size() == 5) {
        if (parts[4] == "log") {
            g.log_scale = true;
        } else if (parts[4] != "lin" && parts[4] != "linear") {
            std::ostringstream os;
            os << "grid '" << text << "': unknown scale '" << parts[4] << "'";
            throw SpecError(os.str());
        }
    }
    if (g.count < 2) {
        std::ostringstream os;
        os << "grid '" << text << "': count must be at least 2";
        throw SpecError(os.str());
    }
    if (!std::isfinite(g.start) || !std::isfinite(g.stop)) {
        throw SpecError("grid: endpoints must be finite");
    }
    if (g.log_scale && !(g.start > 0.0 && g.stop > 0.0)) {
        std::ostringstream os;
        os << "grid '" << text << "': log scale requires positive endpoints";
        throw SpecError(os.str());
    }
    return g;
}

std::vector<double> GridSpec::values() const {
    std::vector<double> out(count);
    const double denom = static_cast<double>(count - 1);
    if (log_scale) {
        const double a = std::log(start);
        const double b = std::log(stop);
        for (std::size_t k = 0; k < count; ++k) out[k] = std::exp(a + (b - a) * static_cast<double>(k) / denom);
    } else {
        for (std::size_t k = 0; k < count; ++k) out[k] = start + (stop - start) * static_cast<double>(k) / denom;
    }
    out.front() = start;
    out.back() = stop;
    return out;
}

}  // namespace ccrb
