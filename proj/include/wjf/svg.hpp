#pragma once

#include <string>
#include <utility>
#include <vector>

namespace wjf {

struct ScatterSeries {
    std::string label;
    std::string color;  // any SVG colour
    bool filled = true;
    std::vector<std::pair<double, double>> points;
};

/// Minimal static scatter plot: frame, axis ticks, points, title and legend.
std::string scatter_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                        const std::vector<ScatterSeries>& series);

}  // namespace wjf
