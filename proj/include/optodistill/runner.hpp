#pragma once

#include <string>

#include "optodistill/config.hpp"
#include "optodistill/table.hpp"

namespace optodistill {

struct RunOutputs {
    ResultTable table;
    std::string csv_path;
    std::string svg_path;  // empty when SVG was not requested
    std::string echo_path;
};

// Pure computation half of a run: dispatches on cfg.kind and returns the
// table (provenance meta included except for the timestamp line).  Cell
// failures inside scans are rethrown with their grid coordinates.
ResultTable compute_table(const RunConfig& cfg);

// compute_table plus file emission: <name>.csv, <name>.config.echo, and
// <name>.svg when requested, all under cfg.out_dir (created if missing).
// Nothing is written when computation fails.  timestamp_override replaces the
// wall-clock provenance line (determinism tests); empty means "now".
RunOutputs run_experiment(const RunConfig& cfg, const std::string& timestamp_override = "");

}  // namespace optodistill
