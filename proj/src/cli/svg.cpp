#include "ncs/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace ncs::cli {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render_line_plot(const std::vector<Series>& series, const PlotOptions& opts) {
    const double left = 70;
    const double right = 20;
    const double top = 40;
    const double bottom = 50;
    const double pw = opts.width - left - right;
    const double ph = opts.height - top - bottom;

    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -x0;
    double y0 = x0;
    double y1 = -x0;
    double min_pos = x0;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            if (y > 0.0) {
                min_pos = std::min(min_pos, y);
            }
        }
    }
    auto ymap = [&](double y) {
        if (!opts.log_y) {
            return y;
        }
        return std::log10(std::max(y, std::isfinite(min_pos) ? min_pos : 1.0));
    };
    for (const auto& s : series) {
        for (const auto& pt : s.points) {
            const double y = ymap(pt.second);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (!std::isfinite(x0)) {
        x0 = 0.0;
        x1 = 1.0;
        y0 = 0.0;
        y1 = 1.0;
    }
    if (x1 <= x0) {
        x1 = x0 + 1.0;
    }
    if (y1 <= y0) {
        y1 = y0 + 1.0;
    }
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opts.width) +
           "\" height=\"" + std::to_string(opts.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + num(opts.width / 2.0) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
           escape(opts.title) + "</text>\n";
    out += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" +
           num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int k = 0; k <= 5; ++k) {
        const double xv = x0 + (x1 - x0) * k / 5.0;
        const double yv = y0 + (y1 - y0) * k / 5.0;
        out += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(top + ph + 18) +
               "\" text-anchor=\"middle\">" + tick(xv) + "</text>\n";
        const std::string ylab = opts.log_y ? "1e" + tick(yv) : tick(yv);
        out += "<text x=\"" + num(left - 6) + "\" y=\"" + num(py(yv) + 4) + "\" text-anchor=\"end\">" +
               ylab + "</text>\n";
    }
    out += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(opts.height - 10.0) +
           "\" text-anchor=\"middle\">" + escape(opts.x_label) + "</text>\n";
    out += "<text x=\"16\" y=\"" + num(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           num(top + ph / 2) + ")\">" + escape(opts.y_label) + (opts.log_y ? " (log)" : "") + "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        out += "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"";
        out += kPalette[i % std::size(kPalette)];
        out += "\" points=\"";
        for (const auto& [x, y] : s.points) {
            out += num(px(x)) + "," + num(py(ymap(y))) + " ";
        }
        out += "\"><title>" + escape(s.label) + "</title></polyline>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace ncs::cli
