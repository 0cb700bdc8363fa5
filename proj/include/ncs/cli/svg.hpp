#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ncs::cli {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct PlotOptions {
    std::string title;
    std::string x_label = "t";
    std::string y_label = "||x(t)||";
    bool log_y = false;
    int width = 800;
    int height = 480;
};

/// Line plot as a standalone SVG document. With log_y, non-positive values
/// are clipped to the smallest positive value present.
[[nodiscard]] std::string render_line_plot(const std::vector<Series>& series,
                                           const PlotOptions& opts);

} // namespace ncs::cli
