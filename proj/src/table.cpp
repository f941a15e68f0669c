#include "optodistill/table.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "optodistill/errors.hpp"

namespace optodistill {

void ResultTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw SpecError("table row has " + std::to_string(row.size()) + " cells, expected " +
                        std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

size_t ResultTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw SpecError("unknown column '" + name + "'");
}

std::vector<double> ResultTable::column(const std::string& name) const {
    const size_t i = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[i]);
    return out;
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void emit_csv(const ResultTable& table, std::ostream& os) {
    for (const auto& line : table.meta) os << "# " << line << "\n";
    for (size_t i = 0; i < table.columns.size(); ++i)
        os << (i ? "," : "") << table.columns[i];
    os << "\n";
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_full(row[i]);
        os << "\n";
    }
}

std::string to_csv(const ResultTable& table) {
    std::ostringstream os;
    emit_csv(table, os);
    return os.str();
}

void write_csv(const ResultTable& table, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    emit_csv(table, os);
    if (!os) throw IoError("write to '" + path + "' failed");
}

ResultTable read_csv(std::istream& is) {
    ResultTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            size_t start = 1;
            if (start < line.size() && line[start] == ' ') ++start;
            table.meta.push_back(line.substr(start));
            continue;
        }
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!have_header) {
            table.columns = std::move(cells);
            have_header = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(std::strtod(c.c_str(), nullptr));
        table.add_row(std::move(row));
    }
    return table;
}

ResultTable read_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path + "' for reading");
    return read_csv(is);
}

}  // namespace optodistill
