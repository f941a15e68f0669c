#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace optodistill {

// Uniform numeric table with named columns; the exchange format between
// experiments, CSV files, and plots.  Integer-valued cells (status codes)
// travel as doubles and print without a decimal point.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> meta;  // provenance, one "# "-prefixed line each

    void add_row(std::vector<double> row);                   // SpecError on width mismatch
    size_t column_index(const std::string& name) const;      // SpecError if missing
    std::vector<double> column(const std::string& name) const;
};

// CSV layout: meta lines first ("# ..."), then the comma-joined header, then
// one row per line with every value printed as %.17g (round-trips doubles).
void emit_csv(const ResultTable& table, std::ostream& os);
std::string to_csv(const ResultTable& table);
void write_csv(const ResultTable& table, const std::string& path);  // IoError

// Inverse of emit_csv; meta lines are preserved verbatim (prefix stripped).
ResultTable read_csv(std::istream& is);
ResultTable read_csv_file(const std::string& path);  // IoError

// %.17g rendering of one value, shared with anything needing exact echoes.
std::string format_full(double v);

}  // namespace optodistill
