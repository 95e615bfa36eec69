#include "ccrbudget/io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "ccrbudget/errors.hpp"

namespace ccrb {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& msg) {
    throw SpecError("field '" + path + "': " + msg);
}

json parse_text(std::string_view text, const char* what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t col = 1;
        const std::size_t limit = std::min<std::size_t>(e.byte, text.size());
        for (std::size_t k = 0; k + 1 < limit; ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream os;
        os << what << ": JSON syntax error at line " << line << ", column " << col << ": "
           << e.what();
        throw SpecError(os.str());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double number_field(const json& obj, const std::string& key, const std::string& path,
                    std::optional<double> fallback = std::nullopt) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        if (fallback) return *fallback;
        field_error(path + "." + key, "missing");
    }
    if (!it->is_number()) field_error(path + "." + key, "expected a number");
    return it->get<double>();
}

const json& array_field(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) field_error(path + key, "missing");
    if (!it->is_array()) field_error(path + key, "expected an array");
    return *it;
}

std::string indexed(const std::string& key, std::size_t k) {
    return key + "[" + std::to_string(k) + "]";
}

}  // namespace

NetworkSpec parse_network_spec(std::string_view text) {
    const json root = parse_text(text, "network spec");
    if (!root.is_object()) field_error("(root)", "expected an object");

    NetworkSpec spec;
    const json& baths = array_field(root, "baths", "");
    for (std::size_t k = 0; k < baths.size(); ++k) {
        const std::string path = indexed("baths", k);
        if (!baths[k].is_object()) field_error(path, "expected an object");
        BathSpec b;
        b.gamma = number_field(baths[k], "gamma", path);
        b.occupancy = number_field(baths[k], "n", path, 0.0);
        b.anomalous = {number_field(baths[k], "m_re", path, 0.0),
                       number_field(baths[k], "m_im", path, 0.0)};
        spec.baths.push_back(b);
    }

    if (auto it = root.find("modes"); it != root.end()) {
        if (!it->is_number_unsigned()) field_error("modes", "expected a non-negative integer");
        if (it->get<std::size_t>() != spec.baths.size()) {
            field_error("modes", "does not match the number of baths (" +
                                     std::to_string(spec.baths.size()) + ")");
        }
    }

    if (root.contains("couplings")) {
        const json& couplings = array_field(root, "couplings", "");
        for (std::size_t k = 0; k < couplings.size(); ++k) {
            const std::string path = indexed("couplings", k);
            const json& c = couplings[k];
            if (!c.is_object()) field_error(path, "expected an object");
            CouplingTerm term;
            const auto kind = c.find("kind");
            if (kind == c.end() || !kind->is_string()) field_error(path + ".kind", "expected a string");
            const auto parsed = parse_coupling_kind(kind->get<std::string>());
            if (!parsed) field_error(path + ".kind", "unknown coupling kind '" + kind->get<std::string>() + "'");
            term.kind = *parsed;
            const json& modes = array_field(c, "modes", path + ".");
            for (std::size_t m = 0; m < modes.size(); ++m) {
                if (!modes[m].is_number_unsigned()) {
                    field_error(path + "." + indexed("modes", m), "expected a non-negative integer");
                }
                term.modes.push_back(modes[m].get<std::size_t>());
            }
            if (c.contains("amp")) {
                term.amplitude = number_field(c, "amp", path);
            } else {
                term.amplitude = {number_field(c, "amp_re", path), number_field(c, "amp_im", path, 0.0)};
            }
            spec.couplings.push_back(std::move(term));
        }
    }

    if (auto it = root.find("labels"); it != root.end()) {
        if (!it->is_array()) field_error("labels", "expected an array of strings");
        for (std::size_t k = 0; k < it->size(); ++k) {
            if (!(*it)[k].is_string()) field_error(indexed("labels", k), "expected a string");
            spec.labels.push_back((*it)[k].get<std::string>());
        }
        if (spec.labels.size() != spec.baths.size()) field_error("labels", "one label per mode required");
    }
    return spec;
}

NetworkSpec load_network_spec(const std::filesystem::path& path) {
    return parse_network_spec(read_file(path));
}

json to_json(const NetworkSpec& spec) {
    json j;
    j["modes"] = spec.n_modes();
    if (!spec.labels.empty()) j["labels"] = spec.labels;
    j["baths"] = json::array();
    for (const auto& b : spec.baths) {
        j["baths"].push_back(
            {{"gamma", b.gamma}, {"n", b.occupancy}, {"m_re", b.anomalous.real()}, {"m_im", b.anomalous.imag()}});
    }
    j["couplings"] = json::array();
    for (const auto& c : spec.couplings) {
        j["couplings"].push_back({{"kind", std::string(to_string(c.kind))},
                                  {"modes", c.modes},
                                  {"amp_re", c.amplitude.real()},
                                  {"amp_im", c.amplitude.imag()}});
    }
    return j;
}

json to_json(const CMatrix& m) {
    json re = json::array();
    json im = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json rr = json::array();
        json ir = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            rr.push_back(m(r, c).real());
            ir.push_back(m(r, c).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ir));
    }
    return {{"re", re}, {"im", im}};
}

CMatrix matrix_from_json(const json& j, std::string_view field) {
    const std::string path(field);
    if (!j.is_object()) field_error(path, "expected {\"re\": [[...]], \"im\": [[...]]}");
    const json& re = array_field(j, "re", path + ".");
    const std::size_t rows = re.size();
    const std::size_t cols = rows ? re[0].size() : 0;
    CMatrix m(rows, cols);
    auto fill = [&](const json& part, const std::string& name, bool imag) {
        if (part.size() != rows) field_error(path + "." + name, "row count mismatch");
        for (std::size_t r = 0; r < rows; ++r) {
            if (!part[r].is_array() || part[r].size() != cols) {
                field_error(path + "." + indexed(name, r), "expected a row of " + std::to_string(cols) + " numbers");
            }
            for (std::size_t c = 0; c < cols; ++c) {
                if (!part[r][c].is_number()) field_error(path + "." + indexed(name, r), "expected numbers");
                const double v = part[r][c].get<double>();
                m(r, c) += imag ? cplx{0.0, v} : cplx{v, 0.0};
            }
        }
    };
    fill(re, "re", false);
    if (j.contains("im")) fill(array_field(j, "im", path + "."), "im", true);
    return m;
}

InputMoments parse_input_moments(std::string_view text, std::size_t n_channels) {
    const json root = parse_text(text, "input moments");
    if (!root.is_object()) field_error("(root)", "expected an object");
    try {
        if (root.contains("channels")) {
            const json& ch = array_field(root, "channels", "");
            if (ch.size() != n_channels) {
                field_error("channels", "expected " + std::to_string(n_channels) + " entries");
            }
            std::vector<double> n(n_channels);
            std::vector<cplx> m(n_channels);
            for (std::size_t k = 0; k < n_channels; ++k) {
                const std::string path = indexed("channels", k);
                n[k] = number_field(ch[k], "n", path, 0.0);
                m[k] = {number_field(ch[k], "m_re", path, 0.0), number_field(ch[k], "m_im", path, 0.0)};
                if (n[k] < 0.0) field_error(path + ".n", "occupancy must be non-negative");
            }
            return InputMoments::uncorrelated(n, m);
        }
        if (root.contains("normal")) {
            CMatrix normal = matrix_from_json(root["normal"], "normal");
            CMatrix anomalous = root.contains("anomalous") ? matrix_from_json(root["anomalous"], "anomalous")
                                                           : CMatrix(n_channels, n_channels);
            if (normal.rows() != n_channels || !normal.is_square()) {
                field_error("normal", "expected a " + std::to_string(n_channels) + "x" +
                                          std::to_string(n_channels) + " matrix");
            }
            return InputMoments(std::move(normal), std::move(anomalous));
        }
    } catch (const SpecError&) {
        throw;
    } catch (const Error& e) {
        throw SpecError(std::string("input moments: ") + e.what());
    }
    field_error("(root)", "expected \"channels\" or \"normal\"");
}

InputMoments load_input_moments(const std::filesystem::path& path, std::size_t n_channels) {
    return parse_input_moments(read_file(path), n_channels);
}

json to_json(const InputMoments& moments) {
    return {{"normal", to_json(moments.normal())}, {"anomalous", to_json(moments.anomalous())}};
}

json budget_report(const CommutatorBudget& b) {
    const SumRuleReport rules = verify_sum_rules(b);
    const ReciprocityReport rec = verify_reciprocity(b);
    json j;
    j["I"] = b.transfer;
    j["gammas"] = b.gammas;
    j["passive"] = b.passive;
    j["diagonal_dissipation"] = b.diagonal_dissipation;
    j["sum_rule_residual"] = rules.completeness_residual;
    j["doubled_sum_rule_residual"] = rules.doubled_completeness_residual;
    j["row_sum_residuals"] = rules.row_sum_residuals;
    j["gamma_rule_applicable"] = rules.gamma_rule_applicable;
    j["gamma_rule_residuals"] = rules.gamma_rule_residuals;
    j["positivity_applicable"] = rules.positivity_applicable;
    j["positivity_min_eigs"] = rules.positivity_min_eigs;
    json r = json::array();
    for (const auto& e : rec.entries) r.push_back({{"i", e.i}, {"j", e.j}, {"residual", e.residual}});
    j["reciprocity_residuals"] = r;
    return j;
}

json covariance_report(const CovarianceState& cs) {
    json j;
    j["convention"] = CovarianceState::convention;
    j["min_eigenvalue"] = cs.min_eigenvalue();
    json modes = json::array();
    for (std::size_t i = 0; i < cs.n_modes(); ++i) {
        const QuadratureBlock q = cs.quadrature_block(i);
        const QuadratureVariance mv = min_quadrature_variance(cs, i);
        modes.push_back({{"mode", i},
                         {"var_x", q.xx},
                         {"var_p", q.pp},
                         {"cov_xp", q.xp},
                         {"min_variance", mv.value},
                         {"min_theta", mv.theta},
                         {"heisenberg_product", cs.heisenberg_product(i)}});
    }
    j["modes"] = modes;
    return j;
}

}  // namespace ccrb
