#pragma once

#include "dimred/data.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dimred::svg {

struct AxisRange {
    double lo = 0.0;
    double hi = 1.0;
};

/// Either `labels` (class coloring, 10-hue palette) or `values` (continuous
/// ramp) colors the points; with neither every point shares one color.
struct PlotSpec {
    Embedding coords;  // n x 2
    std::vector<int> labels;
    Eigen::VectorXd values;
    std::string title;
    std::optional<AxisRange> x_range;
    std::optional<AxisRange> y_range;
    std::filesystem::path path;
};

/// SVG text for the plot. Throws ParameterError unless coords is n x 2 with
/// n >= 1 and the coloring length matches.
std::string render(const PlotSpec& spec);

/// Renders and writes `spec.path`; nothing is written on error.
void emit_plot(const PlotSpec& spec);

/// "#rrggbb" for category index `i` (cycles after 10) and for t in [0, 1].
std::string category_color(std::size_t i);
std::string ramp_color(double t);

}  // namespace dimred::svg
