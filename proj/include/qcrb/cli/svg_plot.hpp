#pragma once

#include <string>
#include <vector>

namespace qcrb::cli {

struct Curve {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

struct PointSeries {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> y_low;   // error bar ends
    std::vector<double> y_high;
};

struct LogLogPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Curve> curves;
    std::vector<PointSeries> points;
};

/// Standalone SVG document; non-positive values are dropped.
std::string render_svg(const LogLogPlot& plot);

}  // namespace qcrb::cli
