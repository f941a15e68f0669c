#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "optodistill/config.hpp"
#include "optodistill/errors.hpp"
#include "optodistill/runner.hpp"
#include "optodistill/types.hpp"

namespace {

const char* error_label(const optodistill::Error& e) {
    using namespace optodistill;
    if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const NotHermitian*>(&e)) return "NotHermitian";
    if (dynamic_cast<const TruncationError*>(&e)) return "TruncationError";
    if (dynamic_cast<const DegenerateOutcome*>(&e)) return "DegenerateOutcome";
    if (dynamic_cast<const QuadratureNotConverged*>(&e)) return "QuadratureNotConverged";
    if (dynamic_cast<const SeriesNotConverged*>(&e)) return "SeriesNotConverged";
    if (dynamic_cast<const GridTooCoarse*>(&e)) return "GridTooCoarse";
    if (dynamic_cast<const ZeroBaseline*>(&e)) return "ZeroBaseline";
    if (dynamic_cast<const IndexError*>(&e)) return "IndexError";
    if (dynamic_cast<const SpecError*>(&e)) return "SpecError";
    if (dynamic_cast<const IoError*>(&e)) return "IoError";
    if (dynamic_cast<const ComputeError*>(&e)) return "ComputeError";
    return "Error";
}

int fail(const std::string& label, const std::string& message, int code) {
    nlohmann::json record = {{"error", label}, {"message", message}, {"exit_code", code}};
    std::cerr << record.dump() << "\n";
    return code;
}

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.rfind(prefix, 0) == 0;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace optodistill;

    CLI::App app{"optomechanical entanglement distillation experiments"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
    std::string command, config_file, out_dir;
    bool svg = false, show_config = false;
    int n_max_override = 0;
    std::string command_help = "run";
    for (const auto& p : preset_names()) command_help += " | " + p;
    app.add_option("command", command, command_help)->required();
    app.add_option("--config", config_file, "config file applied on top of the preset");
    app.add_option("--out", out_dir, "output directory (default from config)");
    app.add_flag("--svg", svg, "also render the SVG plot");
    app.add_option("--n-max", n_max_override, "override the Fock cutoff");
    app.add_flag("--show-config", show_config, "print the resolved config and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("ConfigError", e.what(), 2);
    }

    try {
        RunConfig cfg;
        if (command != "run") cfg = preset_config(command);
        if (!config_file.empty()) apply_config_file(cfg, config_file);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (svg) cfg.svg = true;
        if (n_max_override > 0) cfg.params.n_max = n_max_override;

        if (show_config) {
            validate_config(cfg);
            std::cout << config_to_string(cfg);
            return 0;
        }

        const RunOutputs out = run_experiment(cfg);
        std::cout << "rows: " << out.table.rows.size() << "\n";
        for (const auto& line : out.table.meta)
            if (!starts_with(line, "config: ") && !starts_with(line, kToolName) &&
                !starts_with(line, "generated "))
                std::cout << line << "\n";
        std::cout << "wrote " << out.csv_path << "\n";
        if (!out.svg_path.empty()) std::cout << "wrote " << out.svg_path << "\n";
        std::cout << "wrote " << out.echo_path << "\n";
        return 0;
    } catch (const ConfigError& e) {
        return fail("ConfigError", e.what(), 2);
    } catch (const Error& e) {
        return fail(error_label(e), e.what(), 3);
    } catch (const std::exception& e) {
        return fail("Error", e.what(), 3);
    }
}
