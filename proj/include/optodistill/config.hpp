#pragma once

#include <string>
#include <vector>

#include "optodistill/params.hpp"

namespace optodistill {

enum class ExperimentKind {
    pdf_scan,      // outcome density over a q range
    ratio_scan,    // density + conditional/initial negativities per g curve
    sweep,         // (g, lambda) grid of success probability and ratios
    success_prob,  // single success probability
    teleport_map,  // (|beta|, phase) grid of average-fidelity ratios
    diagnose_eq6,  // eq6-expansion vs oracle comparison report
};

ExperimentKind experiment_from_name(const std::string& name);  // ConfigError
const char* experiment_name(ExperimentKind kind);

// Complete description of one run.  Parsed from flat "key = value" text with
// [section] headers; every preset expands to one of these.
struct RunConfig {
    ExperimentKind kind = ExperimentKind::pdf_scan;
    std::string name = "run";  // output file stem
    ProtocolParams params;

    // [grid]
    double q_min = -2.0, q_max = 6.0;
    int q_count = 161;
    std::vector<double> g_values;       // empty: use {params.g}
    std::vector<double> lambda_values;  // empty: use {params.lambda}
    double q = 1.5;                     // designated single outcome
    cplx beta = cplx(0.5, 0.0);         // diagnose-eq6 input amplitude
    double beta_mag_min = 0.0, beta_mag_max = 2.0;
    int beta_mag_count = 12;
    double beta_phase_min = 0.0, beta_phase_max = 6.283185307179586;
    int beta_phase_count = 12;
    int eq6_grid = 5;
    double eq6_half_range = 2.0;

    // [tolerances] (Fock-tail tolerance lives in params.truncation_tol)
    double quad_rel_tol = 1e-5;

    // [output]
    std::string out_dir = ".";
    bool svg = false;
    std::string heat_column = "ratio";  // heatmap value column (sweep / teleport-map)
};

// Built-in presets: fig2a, fig2b, fig2c, fig3, diagnose-eq6.
RunConfig preset_config(const std::string& name);          // ConfigError if unknown
std::vector<std::string> preset_names();

// Applies "key = value" text on top of cfg; only keys present are touched.
// Unknown sections/keys, malformed values, and explicitly empty lists are
// ConfigErrors.
void apply_config_text(RunConfig& cfg, const std::string& text);
void apply_config_file(RunConfig& cfg, const std::string& path);  // IoError / ConfigError

// Full canonical serialization; parse(serialize(c)) reproduces c.
std::string config_to_string(const RunConfig& cfg);

// Grid/range sanity (counts >= 1, non-degenerate ranges, ...); parameter
// physics is checked separately by params.validate().
void validate_config(const RunConfig& cfg);

// count >= 1 evenly spaced points, inclusive; count == 1 yields {lo}.
std::vector<double> linspace(double lo, double hi, int count);

// "re", "imi", or "re+imi" (e.g. "1.4142+1.4142i"); ConfigError on anything else.
cplx parse_complex(const std::string& text);
std::string format_complex(cplx v);

}  // namespace optodistill
