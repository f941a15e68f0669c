#include "optodistill/runner.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <sstream>

#include "optodistill/dynamics.hpp"
#include "optodistill/entanglement.hpp"
#include "optodistill/errors.hpp"
#include "optodistill/measurement.hpp"
#include "optodistill/svg.hpp"
#include "optodistill/teleportation.hpp"
#include "optodistill/types.hpp"

namespace optodistill {

namespace {

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<double> resolved_g_values(const RunConfig& cfg) {
    return cfg.g_values.empty() ? std::vector<double>{cfg.params.g} : cfg.g_values;
}

std::vector<double> resolved_lambda_values(const RunConfig& cfg) {
    return cfg.lambda_values.empty() ? std::vector<double>{cfg.params.lambda}
                                     : cfg.lambda_values;
}

ResultTable pdf_scan_table(const RunConfig& cfg) {
    cfg.params.validate();
    const JointStateCoefficients jc = joint_coefficients(cfg.params);
    ResultTable table;
    table.columns = {"q", "pdf"};
    for (double q : linspace(cfg.q_min, cfg.q_max, cfg.q_count))
        table.add_row({q, outcome_pdf(jc, q)});
    return table;
}

ResultTable ratio_scan_table(const RunConfig& cfg) {
    ResultTable table;
    table.columns = {"g", "q", "pdf", "n_d", "n_0", "ratio"};
    const std::vector<double> qs = linspace(cfg.q_min, cfg.q_max, cfg.q_count);
    for (double g : resolved_g_values(cfg)) {
        ProtocolParams p = cfg.params;
        p.g = g;
        p.validate();
        if (p.lambda == 0.0) throw ZeroBaseline("ratio-scan: lambda = 0 baseline is zero");
        const JointStateCoefficients jc = joint_coefficients(p);
        const double n0 = negativity(tmsv_state(p.lambda, p.n_max)).value;
        for (double q : qs) {
            try {
                const MeasurementRecord rec = conditional_state(jc, q);
                const double nd = negativity(rec.conditional_state).value;
                table.add_row({g, q, rec.pdf, nd, n0, nd / n0});
            } catch (const Error& e) {
                throw ComputeError("ratio-scan cell g=" + format_full(g) + " q=" +
                                   format_full(q) + ": " + e.what());
            }
        }
    }
    return table;
}

ResultTable sweep_table(const RunConfig& cfg) {
    const std::vector<SweepResultRow> rows =
        sweep(resolved_g_values(cfg), resolved_lambda_values(cfg), cfg.params, cfg.q);
    ResultTable table;
    table.columns = {"g",  "lambda",    "success_prob", "ratio_at_q",
                     "n0", "max_ratio", "argmax_q",     "status"};
    for (const auto& r : rows)
        table.add_row({r.g, r.lambda, r.success_prob, r.ratio_at_q, r.n0, r.max_ratio,
                       r.argmax_q, static_cast<double>(r.status)});
    return table;
}

ResultTable success_prob_table(const RunConfig& cfg) {
    cfg.params.validate();
    ResultTable table;
    table.columns = {"g", "lambda", "success_prob"};
    table.add_row({cfg.params.g, cfg.params.lambda, success_probability(cfg.params)});
    return table;
}

ResultTable teleport_map_table(const RunConfig& cfg) {
    const std::vector<FidelityMapRow> rows = fidelity_ratio_map(
        cfg.params, cfg.q, linspace(cfg.beta_mag_min, cfg.beta_mag_max, cfg.beta_mag_count),
        linspace(cfg.beta_phase_min, cfg.beta_phase_max, cfg.beta_phase_count),
        cfg.quad_rel_tol);
    ResultTable table;
    table.columns = {"beta_mag", "beta_phase", "f_d", "f_0", "ratio"};
    for (const auto& r : rows) {
        table.add_row({r.beta_mag, r.beta_phase, r.f_d, r.f_0, r.ratio});
        if (r.status != 0)
            table.meta.push_back("cell_status beta_mag=" + format_full(r.beta_mag) +
                                 " beta_phase=" + format_full(r.beta_phase) +
                                 " status=" + std::to_string(r.status));
    }
    return table;
}

ResultTable diagnose_table(const RunConfig& cfg) {
    const Eq6Diagnosis diag =
        diagnose_eq6(cfg.params, cfg.q, cfg.beta, cfg.eq6_grid, cfg.eq6_half_range);
    ResultTable table;
    table.columns = {"x_bar", "p_bar", "dev_verbatim", "dev_production"};
    for (const auto& pt : diag.points)
        table.add_row({pt.x_bar, pt.p_bar, pt.dev_verbatim, pt.dev_production});
    table.meta.push_back("max_dev_verbatim = " + format_full(diag.max_dev_verbatim));
    table.meta.push_back("max_dev_production = " + format_full(diag.max_dev_production));
    table.meta.push_back("first_diff_entry = (" + std::to_string(diag.first_diff_n) + "," +
                         std::to_string(diag.first_diff_m) + ")");
    table.meta.push_back(std::string("verbatim_agrees = ") +
                         (diag.verbatim_agrees ? "true" : "false"));
    return table;
}

std::string svg_for(const RunConfig& cfg, const ResultTable& table) {
    const std::string title =
        cfg.name + " (" + std::string(experiment_name(cfg.kind)) + ")";
    switch (cfg.kind) {
        case ExperimentKind::pdf_scan: {
            LineSeries s{"p(q)", table.column("q"), table.column("pdf"), false, 0};
            return render_line_plot(title, "q", "p(q)", "", {s});
        }
        case ExperimentKind::ratio_scan: {
            // One ratio curve per g plus the outcome density of the middle g.
            const std::vector<double> gs = resolved_g_values(cfg);
            const auto g_col = table.column("g");
            const auto q_col = table.column("q");
            const auto ratio_col = table.column("ratio");
            const auto pdf_col = table.column("pdf");
            std::vector<LineSeries> series;
            for (double g : gs) {
                LineSeries s;
                s.label = "ratio g=" + format_full(g);
                for (size_t i = 0; i < g_col.size(); ++i)
                    if (g_col[i] == g) {
                        s.x.push_back(q_col[i]);
                        s.y.push_back(ratio_col[i]);
                    }
                series.push_back(std::move(s));
            }
            const double g_pdf = gs[(gs.size() - 1) / 2];
            LineSeries s;
            s.label = "pdf g=" + format_full(g_pdf);
            s.dashed = true;
            s.axis = 1;
            for (size_t i = 0; i < g_col.size(); ++i)
                if (g_col[i] == g_pdf) {
                    s.x.push_back(q_col[i]);
                    s.y.push_back(pdf_col[i]);
                }
            series.push_back(std::move(s));
            return render_line_plot(title, "q", "N_D/N_0", "p(q)", series);
        }
        case ExperimentKind::sweep:
            return render_heatmap(title, "lambda", "g", cfg.heat_column,
                                  resolved_lambda_values(cfg), resolved_g_values(cfg),
                                  table.column(cfg.heat_column));
        case ExperimentKind::success_prob: {
            LineSeries s{"success_prob", table.column("g"), table.column("success_prob"),
                         false, 0};
            return render_line_plot(title, "g", "success probability", "", {s});
        }
        case ExperimentKind::teleport_map:
            return render_heatmap(
                title, "phi_beta", "|beta|", cfg.heat_column,
                linspace(cfg.beta_phase_min, cfg.beta_phase_max, cfg.beta_phase_count),
                linspace(cfg.beta_mag_min, cfg.beta_mag_max, cfg.beta_mag_count),
                table.column(cfg.heat_column));
        case ExperimentKind::diagnose_eq6:
            return render_heatmap(title, "p_bar", "x_bar", "dev_verbatim",
                                  linspace(-cfg.eq6_half_range, cfg.eq6_half_range,
                                           cfg.eq6_grid),
                                  linspace(-cfg.eq6_half_range, cfg.eq6_half_range,
                                           cfg.eq6_grid),
                                  table.column("dev_verbatim"));
    }
    throw ConfigError("unknown experiment kind");
}

}  // namespace

ResultTable compute_table(const RunConfig& cfg) {
    validate_config(cfg);
    ResultTable table;
    switch (cfg.kind) {
        case ExperimentKind::pdf_scan: table = pdf_scan_table(cfg); break;
        case ExperimentKind::ratio_scan: table = ratio_scan_table(cfg); break;
        case ExperimentKind::sweep: table = sweep_table(cfg); break;
        case ExperimentKind::success_prob: table = success_prob_table(cfg); break;
        case ExperimentKind::teleport_map: table = teleport_map_table(cfg); break;
        case ExperimentKind::diagnose_eq6: table = diagnose_table(cfg); break;
    }
    // Provenance header: tool id first, then the full resolved configuration
    // so every CSV is self-reproducing.
    std::vector<std::string> meta;
    meta.push_back(std::string(kToolName) + " " + kVersion);
    std::istringstream cfg_lines(config_to_string(cfg));
    std::string line;
    while (std::getline(cfg_lines, line))
        if (!line.empty()) meta.push_back("config: " + line);
    meta.insert(meta.end(), table.meta.begin(), table.meta.end());
    table.meta = std::move(meta);
    return table;
}

RunOutputs run_experiment(const RunConfig& cfg, const std::string& timestamp_override) {
    RunOutputs out;
    out.table = compute_table(cfg);
    out.table.meta.insert(
        out.table.meta.begin() + 1,
        "generated " + (timestamp_override.empty() ? utc_now() : timestamp_override));

    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "'");

    const std::string stem = cfg.out_dir + "/" + cfg.name;
    out.csv_path = stem + ".csv";
    out.echo_path = stem + ".config.echo";
    write_csv(out.table, out.csv_path);
    write_text_file(out.echo_path, config_to_string(cfg));
    if (cfg.svg) {
        out.svg_path = stem + ".svg";
        write_text_file(out.svg_path, svg_for(cfg, out.table));
    }
    return out;
}

}  // namespace optodistill
