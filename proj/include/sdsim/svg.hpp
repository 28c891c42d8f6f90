#pragma once

#include <string>
#include <vector>

namespace sdsim {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Standalone SVG line chart: axes, gridlines, tick labels, legend, one
// polyline per series. Identical input renders identical bytes. Throws
// EmptySeries when there is no series or one has no points.
std::string render_chart(const std::vector<Series>& series, const std::string& title);

// render_chart to a file; throws IoError naming the path on failure.
void write_chart(const std::vector<Series>& series, const std::string& title,
                 const std::string& path);

}  // namespace sdsim
