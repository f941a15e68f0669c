#include "optodistill/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "optodistill/errors.hpp"
#include "optodistill/table.hpp"

namespace optodistill {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& text) {
    const std::string v = trim(text);
    if (v.empty()) throw ConfigError("empty numeric value");
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size()) throw ConfigError("malformed number '" + v + "'");
    return x;
}

int parse_int(const std::string& text) {
    const std::string v = trim(text);
    if (v.empty()) throw ConfigError("empty integer value");
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size()) throw ConfigError("malformed integer '" + v + "'");
    return static_cast<int>(x);
}

bool parse_bool(const std::string& text) {
    const std::string v = trim(text);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("malformed boolean '" + v + "'");
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::string cell;
    std::istringstream is(trim(text));
    while (std::getline(is, cell, ',')) out.push_back(parse_double(cell));
    if (out.empty()) throw ConfigError("empty list value");
    return out;
}

std::string format_list(const std::vector<double>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_full(v[i]);
    return out;
}

}  // namespace

cplx parse_complex(const std::string& text) {
    const std::string v = trim(text);
    if (v.empty()) throw ConfigError("empty complex value");
    if (v.back() != 'i') return cplx(parse_double(v), 0.0);
    const std::string body = v.substr(0, v.size() - 1);
    if (body.empty()) throw ConfigError("malformed complex '" + v + "'");
    // Last '+' or '-' not belonging to an exponent splits real from imaginary.
    size_t split = std::string::npos;
    for (size_t i = 1; i < body.size(); ++i) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E')
            split = i;
    }
    if (split == std::string::npos) return cplx(0.0, parse_double(body));
    return cplx(parse_double(body.substr(0, split)), parse_double(body.substr(split)));
}

std::string format_complex(cplx v) {
    std::string out = format_full(v.real());
    if (v.imag() >= 0.0 || std::isnan(v.imag())) out += "+";
    out += format_full(v.imag()) + "i";
    return out;
}

ExperimentKind experiment_from_name(const std::string& name) {
    if (name == "pdf-scan") return ExperimentKind::pdf_scan;
    if (name == "ratio-scan") return ExperimentKind::ratio_scan;
    if (name == "sweep") return ExperimentKind::sweep;
    if (name == "success-prob") return ExperimentKind::success_prob;
    if (name == "teleport-map") return ExperimentKind::teleport_map;
    if (name == "diagnose-eq6") return ExperimentKind::diagnose_eq6;
    throw ConfigError("unknown experiment '" + name + "'");
}

const char* experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::pdf_scan: return "pdf-scan";
        case ExperimentKind::ratio_scan: return "ratio-scan";
        case ExperimentKind::sweep: return "sweep";
        case ExperimentKind::success_prob: return "success-prob";
        case ExperimentKind::teleport_map: return "teleport-map";
        case ExperimentKind::diagnose_eq6: return "diagnose-eq6";
    }
    throw ConfigError("unknown experiment kind");
}

std::vector<std::string> preset_names() {
    return {"fig2a", "fig2b", "fig2c", "fig3", "diagnose-eq6"};
}

RunConfig preset_config(const std::string& name) {
    RunConfig cfg;
    cfg.name = name;
    cfg.params = ProtocolParams{};  // headline point: lambda=0.3, g=0.2, kappa=0.01,
                                    // r=0.1, t=pi, delta_q=0.11, alpha=0, n_max=12
    if (name == "fig2a") {
        cfg.kind = ExperimentKind::ratio_scan;
        cfg.g_values = {0.01, 0.2, 1.0};
        cfg.q_min = -2.0;
        cfg.q_max = 6.0;
        cfg.q_count = 161;
        return cfg;
    }
    if (name == "fig2b" || name == "fig2c") {
        cfg.kind = ExperimentKind::sweep;
        cfg.g_values = linspace(0.01, 1.0, 8);
        cfg.lambda_values = linspace(0.05, 0.6, 6);
        cfg.q = 1.5;
        cfg.params.truncation_tol = 1e-5;  // lambda = 0.6 tail at n_max = 12 is 1.7e-6
        cfg.heat_column = (name == "fig2b") ? "success_prob" : "ratio_at_q";
        return cfg;
    }
    if (name == "fig3") {
        cfg.kind = ExperimentKind::teleport_map;
        cfg.params.alpha = cplx(M_SQRT2, M_SQRT2);  // 2 e^{i pi/4}
        cfg.q = 0.0;
        cfg.beta_mag_min = 0.0;
        cfg.beta_mag_max = 2.0;
        cfg.beta_mag_count = 12;
        cfg.beta_phase_min = 0.0;
        cfg.beta_phase_max = 2.0 * M_PI;
        cfg.beta_phase_count = 12;
        cfg.heat_column = "ratio";
        return cfg;
    }
    if (name == "diagnose-eq6") {
        cfg.kind = ExperimentKind::diagnose_eq6;
        cfg.params.theta = M_PI;  // lossless injection at the documented comparison point
        cfg.q = 0.0;
        cfg.beta = cplx(0.5, 0.0);
        cfg.eq6_grid = 5;
        cfg.eq6_half_range = 2.0;
        return cfg;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
    std::istringstream is(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = " (line " + std::to_string(line_no) + ")";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("unterminated section header" + where);
            section = trim(line.substr(1, line.size() - 2));
            if (section != "experiment" && section != "params" && section != "grid" &&
                section != "tolerances" && section != "output")
                throw ConfigError("unknown section '" + section + "'" + where);
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'" + where);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (section == "experiment") {
                if (key == "kind") cfg.kind = experiment_from_name(value);
                else if (key == "name") cfg.name = value;
                else throw ConfigError("unknown key '" + key + "' in [experiment]");
            } else if (section == "params") {
                if (key == "lambda") cfg.params.lambda = parse_double(value);
                else if (key == "g") cfg.params.g = parse_double(value);
                else if (key == "kappa") cfg.params.kappa = parse_double(value);
                else if (key == "theta") cfg.params.theta = parse_double(value);
                else if (key == "r") cfg.params.set_reflectivity(parse_double(value));
                else if (key == "t") cfg.params.t = parse_double(value);
                else if (key == "delta_q") cfg.params.delta_q = parse_double(value);
                else if (key == "alpha") cfg.params.alpha = parse_complex(value);
                else if (key == "n_max") cfg.params.n_max = parse_int(value);
                else throw ConfigError("unknown key '" + key + "' in [params]");
            } else if (section == "grid") {
                if (key == "q_min") cfg.q_min = parse_double(value);
                else if (key == "q_max") cfg.q_max = parse_double(value);
                else if (key == "q_count") cfg.q_count = parse_int(value);
                else if (key == "g_values") cfg.g_values = parse_list(value);
                else if (key == "lambda_values") cfg.lambda_values = parse_list(value);
                else if (key == "q") cfg.q = parse_double(value);
                else if (key == "beta") cfg.beta = parse_complex(value);
                else if (key == "beta_mag_min") cfg.beta_mag_min = parse_double(value);
                else if (key == "beta_mag_max") cfg.beta_mag_max = parse_double(value);
                else if (key == "beta_mag_count") cfg.beta_mag_count = parse_int(value);
                else if (key == "beta_phase_min") cfg.beta_phase_min = parse_double(value);
                else if (key == "beta_phase_max") cfg.beta_phase_max = parse_double(value);
                else if (key == "beta_phase_count") cfg.beta_phase_count = parse_int(value);
                else if (key == "eq6_grid") cfg.eq6_grid = parse_int(value);
                else if (key == "eq6_half_range") cfg.eq6_half_range = parse_double(value);
                else throw ConfigError("unknown key '" + key + "' in [grid]");
            } else if (section == "tolerances") {
                if (key == "truncation_tol") cfg.params.truncation_tol = parse_double(value);
                else if (key == "quad_rel_tol") cfg.quad_rel_tol = parse_double(value);
                else throw ConfigError("unknown key '" + key + "' in [tolerances]");
            } else if (section == "output") {
                if (key == "dir") cfg.out_dir = value;
                else if (key == "svg") cfg.svg = parse_bool(value);
                else if (key == "heat_column") cfg.heat_column = value;
                else throw ConfigError("unknown key '" + key + "' in [output]");
            } else {
                throw ConfigError("key '" + key + "' outside any section");
            }
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(e.what()) + where);
        }
    }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    apply_config_text(cfg, buf.str());
}

std::string config_to_string(const RunConfig& cfg) {
    std::ostringstream os;
    os << "[experiment]\n";
    os << "kind = " << experiment_name(cfg.kind) << "\n";
    os << "name = " << cfg.name << "\n";
    os << "\n[params]\n";
    os << "lambda = " << format_full(cfg.params.lambda) << "\n";
    os << "g = " << format_full(cfg.params.g) << "\n";
    os << "kappa = " << format_full(cfg.params.kappa) << "\n";
    os << "theta = " << format_full(cfg.params.theta) << "\n";
    os << "t = " << format_full(cfg.params.t) << "\n";
    os << "delta_q = " << format_full(cfg.params.delta_q) << "\n";
    os << "alpha = " << format_complex(cfg.params.alpha) << "\n";
    os << "n_max = " << cfg.params.n_max << "\n";
    os << "\n[grid]\n";
    os << "q_min = " << format_full(cfg.q_min) << "\n";
    os << "q_max = " << format_full(cfg.q_max) << "\n";
    os << "q_count = " << cfg.q_count << "\n";
    if (!cfg.g_values.empty()) os << "g_values = " << format_list(cfg.g_values) << "\n";
    if (!cfg.lambda_values.empty())
        os << "lambda_values = " << format_list(cfg.lambda_values) << "\n";
    os << "q = " << format_full(cfg.q) << "\n";
    os << "beta = " << format_complex(cfg.beta) << "\n";
    os << "beta_mag_min = " << format_full(cfg.beta_mag_min) << "\n";
    os << "beta_mag_max = " << format_full(cfg.beta_mag_max) << "\n";
    os << "beta_mag_count = " << cfg.beta_mag_count << "\n";
    os << "beta_phase_min = " << format_full(cfg.beta_phase_min) << "\n";
    os << "beta_phase_max = " << format_full(cfg.beta_phase_max) << "\n";
    os << "beta_phase_count = " << cfg.beta_phase_count << "\n";
    os << "eq6_grid = " << cfg.eq6_grid << "\n";
    os << "eq6_half_range = " << format_full(cfg.eq6_half_range) << "\n";
    os << "\n[tolerances]\n";
    os << "truncation_tol = " << format_full(cfg.params.truncation_tol) << "\n";
    os << "quad_rel_tol = " << format_full(cfg.quad_rel_tol) << "\n";
    os << "\n[output]\n";
    os << "dir = " << cfg.out_dir << "\n";
    os << "svg = " << (cfg.svg ? "true" : "false") << "\n";
    os << "heat_column = " << cfg.heat_column << "\n";
    return os.str();
}

void validate_config(const RunConfig& cfg) {
    cfg.params.validate();
    if (cfg.name.empty()) throw ConfigError("output name must not be empty");
    if (cfg.q_count < 1) throw ConfigError("q_count must be >= 1");
    if (cfg.q_count > 1 && !(cfg.q_max > cfg.q_min))
        throw ConfigError("degenerate q range: q_max must exceed q_min");
    if (cfg.beta_mag_count < 1 || cfg.beta_phase_count < 1)
        throw ConfigError("beta grid counts must be >= 1");
    if (cfg.beta_mag_count > 1 && !(cfg.beta_mag_max > cfg.beta_mag_min))
        throw ConfigError("degenerate |beta| range");
    if (cfg.beta_phase_count > 1 && !(cfg.beta_phase_max > cfg.beta_phase_min))
        throw ConfigError("degenerate beta phase range");
    if (cfg.beta_mag_min < 0.0) throw ConfigError("|beta| must be >= 0");
    if (cfg.eq6_grid < 2) throw ConfigError("eq6_grid must be >= 2");
    if (!(cfg.eq6_half_range > 0.0)) throw ConfigError("eq6_half_range must be positive");
    if (!(cfg.quad_rel_tol > 0.0)) throw ConfigError("quad_rel_tol must be positive");
    if (cfg.out_dir.empty()) throw ConfigError("output directory must not be empty");
}

std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 1) throw ConfigError("linspace needs count >= 1");
    std::vector<double> out;
    out.reserve(static_cast<size_t>(count));
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1));
    return out;
}

}  // namespace optodistill
