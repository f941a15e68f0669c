#pragma once

#include <string>
#include <vector>

namespace optodistill {

struct LineSeries {
    std::string label;
    std::vector<double> x, y;
    bool dashed = false;
    int axis = 0;  // 0 = left scale, 1 = right scale
};

// Standalone SVG line chart with an optional second y-axis (axis = 1 series).
// Non-finite points split a polyline; an isolated point renders as a marker.
std::string render_line_plot(const std::string& title, const std::string& x_label,
                             const std::string& left_label, const std::string& right_label,
                             const std::vector<LineSeries>& series);

// Standalone SVG heatmap with colorbar.  values has ys.size() rows of
// xs.size() cells, row-major with y the slow index; non-finite cells are grey.
std::string render_heatmap(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::string& value_label,
                           const std::vector<double>& xs, const std::vector<double>& ys,
                           const std::vector<double>& values);

void write_text_file(const std::string& path, const std::string& content);  // IoError

}  // namespace optodistill
