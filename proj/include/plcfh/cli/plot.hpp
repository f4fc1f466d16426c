#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "plcfh/config.hpp"
#include "plcfh/simulator.hpp"

namespace plcfh::cli {

struct PlotSeries {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;
    bool si_y_ticks = false; ///< label y ticks as 1.5M, 200k, ...
    std::vector<PlotSeries> series;
};

/// Standalone SVG document: one <polyline> per series, plus axes, ticks
/// and a legend.
std::string render_svg(const LinePlot& plot);

/// bus -> blue, tree -> red, chain -> green.
std::string_view topology_color(Topology t);

/// 1234567 -> "1.23M"; 0 -> "0".
std::string si_label(double v);

/// Reachability (percent) against density, one series per topology.
LinePlot reachability_plot(const SweepResult& sweep);

enum class TrafficStat { average, maximum };

LinePlot traffic_plot(const SweepResult& sweep, TrafficStat stat);

} // namespace plcfh::cli
