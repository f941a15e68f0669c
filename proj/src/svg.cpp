#include "optodistill/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "optodistill/errors.hpp"

namespace optodistill {

namespace {

constexpr double kWidth = 860.0, kHeight = 520.0;
constexpr double kLeft = 72.0, kTop = 46.0, kBottom = 60.0;

const char* kPalette[] = {"#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#e67e22", "#16a085"};
constexpr int kPaletteSize = 6;

std::string esc(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // Always returns a usable, strictly increasing interval.
    void finalize() {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (lo == hi) {
            const double pad = std::max(0.5, std::abs(lo) * 0.05);
            lo -= pad;
            hi += pad;
        }
    }
    double map(double v, double px_lo, double px_hi) const {
        return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
    }
};

void axis_ticks(std::ostringstream& os, const Range& r, bool vertical, double fixed_px,
                double px_lo, double px_hi, const char* anchor, double text_dx,
                double text_dy) {
    for (int i = 0; i <= 4; ++i) {
        const double v = r.lo + (r.hi - r.lo) * i / 4.0;
        const double p = r.map(v, px_lo, px_hi);
        if (vertical) {
            os << "<line x1=\"" << num(fixed_px - 4) << "\" y1=\"" << num(p) << "\" x2=\""
               << num(fixed_px) << "\" y2=\"" << num(p) << "\" stroke=\"#333\"/>\n";
            os << "<text x=\"" << num(fixed_px + text_dx) << "\" y=\"" << num(p + text_dy)
               << "\" font-size=\"11\" text-anchor=\"" << anchor << "\">" << num(v)
               << "</text>\n";
        } else {
            os << "<line x1=\"" << num(p) << "\" y1=\"" << num(fixed_px) << "\" x2=\"" << num(p)
               << "\" y2=\"" << num(fixed_px + 4) << "\" stroke=\"#333\"/>\n";
            os << "<text x=\"" << num(p + text_dx) << "\" y=\"" << num(fixed_px + text_dy)
               << "\" font-size=\"11\" text-anchor=\"" << anchor << "\">" << num(v)
               << "</text>\n";
        }
    }
}

// Five-anchor approximation of a perceptually uniform map; u in [0, 1].
std::string heat_color(double u) {
    static const double stops[5][3] = {{0x44, 0x01, 0x54},
                                       {0x3b, 0x52, 0x8b},
                                       {0x21, 0x91, 0x8c},
                                       {0x5e, 0xc9, 0x62},
                                       {0xfd, 0xe7, 0x25}};
    u = std::clamp(u, 0.0, 1.0);
    const double pos = u * 4.0;
    const int k = std::min(3, static_cast<int>(pos));
    const double f = pos - k;
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                  static_cast<int>(std::lround(stops[k][0] + f * (stops[k + 1][0] - stops[k][0]))),
                  static_cast<int>(std::lround(stops[k][1] + f * (stops[k + 1][1] - stops[k][1]))),
                  static_cast<int>(std::lround(stops[k][2] + f * (stops[k + 1][2] - stops[k][2]))));
    return buf;
}

void header(std::ostringstream& os, const std::string& title) {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
       << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << " " << num(kHeight) << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
       << "\" fill=\"#ffffff\"/>\n";
    os << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" font-size=\"15\" "
          "text-anchor=\"middle\" font-family=\"sans-serif\">"
       << esc(title) << "</text>\n";
}

}  // namespace

std::string render_line_plot(const std::string& title, const std::string& x_label,
                             const std::string& left_label, const std::string& right_label,
                             const std::vector<LineSeries>& series) {
    const bool has_right = std::any_of(series.begin(), series.end(),
                                       [](const LineSeries& s) { return s.axis == 1; });
    const double right_margin = has_right ? 72.0 : 28.0;
    const double x0 = kLeft, x1 = kWidth - right_margin;
    const double y0 = kHeight - kBottom, y1 = kTop;  // pixel y grows downward

    Range rx, rl, rr;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw SpecError("line series with mismatched x/y sizes");
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            rx.include(s.x[i]);
            (s.axis == 1 ? rr : rl).include(s.y[i]);
        }
    }
    rx.finalize();
    rl.finalize();
    rr.finalize();

    std::ostringstream os;
    header(os, title);
    os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0)
       << "\" height=\"" << num(y0 - y1) << "\" fill=\"none\" stroke=\"#333\"/>\n";
    os << "<g font-family=\"sans-serif\">\n";
    axis_ticks(os, rx, false, y0, x0, x1, "middle", 0.0, 16.0);
    axis_ticks(os, rl, true, x0, y0, y1, "end", -7.0, 4.0);
    if (has_right) {
        for (int i = 0; i <= 4; ++i) {
            const double v = rr.lo + (rr.hi - rr.lo) * i / 4.0;
            const double p = rr.map(v, y0, y1);
            os << "<line x1=\"" << num(x1) << "\" y1=\"" << num(p) << "\" x2=\"" << num(x1 + 4)
               << "\" y2=\"" << num(p) << "\" stroke=\"#333\"/>\n";
            os << "<text x=\"" << num(x1 + 7) << "\" y=\"" << num(p + 4)
               << "\" font-size=\"11\" text-anchor=\"start\">" << num(v) << "</text>\n";
        }
    }
    os << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 16)
       << "\" font-size=\"13\" text-anchor=\"middle\">" << esc(x_label) << "</text>\n";
    os << "<text x=\"18\" y=\"" << num((y0 + y1) / 2) << "\" font-size=\"13\" "
          "text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << num((y0 + y1) / 2) << ")\">" << esc(left_label) << "</text>\n";
    if (has_right)
        os << "<text x=\"" << num(kWidth - 14) << "\" y=\"" << num((y0 + y1) / 2)
           << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(90 "
           << num(kWidth - 14) << " " << num((y0 + y1) / 2) << ")\">" << esc(right_label)
           << "</text>\n";

    int color_idx = 0;
    double legend_y = y1 + 14.0;
    for (const auto& s : series) {
        const std::string color = kPalette[color_idx % kPaletteSize];
        ++color_idx;
        const Range& ry = (s.axis == 1) ? rr : rl;
        // Split at non-finite samples so every emitted coordinate is numeric.
        std::vector<std::pair<double, double>> seg;
        auto flush = [&]() {
            if (seg.size() == 1) {
                os << "<circle cx=\"" << num(seg[0].first) << "\" cy=\"" << num(seg[0].second)
                   << "\" r=\"3\" fill=\"" << color << "\"/>\n";
            } else if (seg.size() > 1) {
                os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\"";
                if (s.dashed) os << " stroke-dasharray=\"6 4\"";
                os << " points=\"";
                for (size_t i = 0; i < seg.size(); ++i)
                    os << (i ? " " : "") << num(seg[i].first) << "," << num(seg[i].second);
                os << "\"/>\n";
            }
            seg.clear();
        };
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                flush();
                continue;
            }
            seg.emplace_back(rx.map(s.x[i], x0, x1), ry.map(s.y[i], y0, y1));
        }
        flush();
        os << "<line x1=\"" << num(x1 - 150) << "\" y1=\"" << num(legend_y) << "\" x2=\""
           << num(x1 - 126) << "\" y2=\"" << num(legend_y) << "\" stroke=\"" << color
           << "\" stroke-width=\"1.8\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "")
           << "/>\n";
        os << "<text x=\"" << num(x1 - 120) << "\" y=\"" << num(legend_y + 4)
           << "\" font-size=\"11\">" << esc(s.label) << "</text>\n";
        legend_y += 16.0;
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

std::string render_heatmap(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::string& value_label,
                           const std::vector<double>& xs, const std::vector<double>& ys,
                           const std::vector<double>& values) {
    if (xs.empty() || ys.empty()) throw SpecError("heatmap with empty axis");
    if (values.size() != xs.size() * ys.size())
        throw SpecError("heatmap cell count does not match axes");
    const double x0 = kLeft, x1 = kWidth - 118.0;
    const double y0 = kHeight - kBottom, y1 = kTop;

    Range rv;
    for (double v : values) rv.include(v);
    rv.finalize();

    std::ostringstream os;
    header(os, title);
    os << "<g font-family=\"sans-serif\">\n";
    const double cw = (x1 - x0) / xs.size();
    const double ch = (y0 - y1) / ys.size();
    for (size_t iy = 0; iy < ys.size(); ++iy)
        for (size_t ix = 0; ix < xs.size(); ++ix) {
            const double v = values[iy * xs.size() + ix];
            const std::string fill =
                std::isfinite(v) ? heat_color((v - rv.lo) / (rv.hi - rv.lo)) : "#bbbbbb";
            // Row 0 at the bottom so the y axis increases upward.
            os << "<rect x=\"" << num(x0 + ix * cw) << "\" y=\""
               << num(y0 - (iy + 1) * ch) << "\" width=\"" << num(cw + 0.5) << "\" height=\""
               << num(ch + 0.5) << "\" fill=\"" << fill << "\"/>\n";
        }
    os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0)
       << "\" height=\"" << num(y0 - y1) << "\" fill=\"none\" stroke=\"#333\"/>\n";

    // Tick labels at cell centers (thinned to at most 8 per axis).
    const size_t x_stride = std::max<size_t>(1, xs.size() / 8);
    for (size_t ix = 0; ix < xs.size(); ix += x_stride)
        os << "<text x=\"" << num(x0 + (ix + 0.5) * cw) << "\" y=\"" << num(y0 + 16)
           << "\" font-size=\"11\" text-anchor=\"middle\">" << num(xs[ix]) << "</text>\n";
    const size_t y_stride = std::max<size_t>(1, ys.size() / 8);
    for (size_t iy = 0; iy < ys.size(); iy += y_stride)
        os << "<text x=\"" << num(x0 - 7) << "\" y=\"" << num(y0 - (iy + 0.5) * ch + 4)
           << "\" font-size=\"11\" text-anchor=\"end\">" << num(ys[iy]) << "</text>\n";
    os << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 16)
       << "\" font-size=\"13\" text-anchor=\"middle\">" << esc(x_label) << "</text>\n";
    os << "<text x=\"18\" y=\"" << num((y0 + y1) / 2) << "\" font-size=\"13\" "
          "text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << num((y0 + y1) / 2) << ")\">" << esc(y_label) << "</text>\n";

    // Colorbar.
    const double bx = x1 + 26.0, bw = 18.0;
    const int steps = 64;
    for (int i = 0; i < steps; ++i) {
        const double u0 = double(i) / steps;
        const double py = y0 - (y0 - y1) * (i + 1.0) / steps;
        os << "<rect x=\"" << num(bx) << "\" y=\"" << num(py) << "\" width=\"" << num(bw)
           << "\" height=\"" << num((y0 - y1) / steps + 0.5) << "\" fill=\"" << heat_color(u0)
           << "\"/>\n";
    }
    os << "<rect x=\"" << num(bx) << "\" y=\"" << num(y1) << "\" width=\"" << num(bw)
       << "\" height=\"" << num(y0 - y1) << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = rv.lo + (rv.hi - rv.lo) * i / 4.0;
        const double py = y0 - (y0 - y1) * i / 4.0;
        os << "<text x=\"" << num(bx + bw + 5) << "\" y=\"" << num(py + 4)
           << "\" font-size=\"11\">" << num(v) << "</text>\n";
    }
    os << "<text x=\"" << num(bx + bw / 2) << "\" y=\"" << num(y1 - 8)
       << "\" font-size=\"12\" text-anchor=\"middle\">" << esc(value_label) << "</text>\n";
    os << "</g>\n</svg>\n";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << content;
    if (!os) throw IoError("write to '" + path + "' failed");
}

}  // namespace optodistill
