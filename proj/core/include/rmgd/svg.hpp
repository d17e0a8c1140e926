#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rmgd {

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgChartOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = true;  // convergence curves live on a log10 axis
    int width = 960;
    int height = 560;
};

/// Self-contained polyline chart with axes, decade ticks on log axes and a
/// legend per series. Non-positive values are dropped on log axes.
void write_svg_chart(std::ostream& out, const std::vector<SvgSeries>& series,
                     const SvgChartOptions& options);
void write_svg_chart(const std::filesystem::path& path,
                     const std::vector<SvgSeries>& series,
                     const SvgChartOptions& options);

} // namespace rmgd
