#include "plcfh/cli/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace plcfh::cli {

namespace {

constexpr double width = 640.0;
constexpr double height = 420.0;
constexpr double left = 80.0;
constexpr double right = 150.0;
constexpr double top = 40.0;
constexpr double bottom = 60.0;

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_text(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string xml_escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

// 1, 2 or 5 times a power of ten, about `target` ticks over the range
double nice_step(double range, int target)
{
    const double raw = range / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

std::vector<double> ticks(double lo, double hi)
{
    std::vector<double> out;
    if (!(hi > lo))
        return {lo};
    const double step = nice_step(hi - lo, 5);
    for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + step * 1e-9; t += step)
        out.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
    return out;
}

double nice_ceiling(double v)
{
    if (!(v > 0))
        return 1.0;
    const double step = nice_step(v, 5);
    return std::ceil(v / step - 1e-9) * step;
}

} // namespace

std::string si_label(double v)
{
    if (v == 0.0)
        return "0";
    static constexpr std::pair<double, const char*> prefixes[] = {
        {1e12, "T"}, {1e9, "G"}, {1e6, "M"}, {1e3, "k"}};
    for (auto [scale, p] : prefixes) {
        if (std::abs(v) >= scale) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.3g%s", v / scale, p);
            return buf;
        }
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::string_view topology_color(Topology t)
{
    switch (t) {
    case Topology::bus:
        return "blue";
    case Topology::tree:
        return "red";
    case Topology::chain:
        return "green";
    }
    return "black";
}

std::string render_svg(const LinePlot& p)
{
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    const double xr = p.x_max > p.x_min ? p.x_max - p.x_min : 1.0;
    const double yr = p.y_max > p.y_min ? p.y_max - p.y_min : 1.0;
    auto sx = [&](double x) { return left + (x - p.x_min) / xr * pw; };
    auto sy = [&](double y) { return top + (1.0 - (y - p.y_min) / yr) * ph; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << num(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << xml_escape(p.title) << "</text>\n";

    svg << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    for (double t : ticks(p.x_min, p.x_max))
        svg << "<line x1=\"" << num(sx(t)) << "\" y1=\"" << num(top) << "\" x2=\"" << num(sx(t)) << "\" y2=\""
            << num(top + ph) << "\"/>\n";
    for (double t : ticks(p.y_min, p.y_max))
        svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(sy(t)) << "\" x2=\"" << num(left + pw) << "\" y2=\""
            << num(sy(t)) << "\"/>\n";
    svg << "</g>\n";

    svg << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\""
        << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t : ticks(p.x_min, p.x_max))
        svg << "<text x=\"" << num(sx(t)) << "\" y=\"" << num(top + ph + 16) << "\" text-anchor=\"middle\">"
            << tick_text(t) << "</text>\n";
    for (double t : ticks(p.y_min, p.y_max))
        svg << "<text x=\"" << num(left - 6) << "\" y=\"" << num(sy(t) + 4) << "\" text-anchor=\"end\">"
            << (p.si_y_ticks ? si_label(t) : tick_text(t)) << "</text>\n";

    svg << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(height - 18) << "\" text-anchor=\"middle\">"
        << xml_escape(p.x_label) << "</text>\n"
        << "<text x=\"18\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << num(top + ph / 2) << ")\">" << xml_escape(p.y_label) << "</text>\n";

    for (const auto& s : p.series) {
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < s.points.size(); ++i)
            svg << (i ? " " : "") << num(sx(s.points[i].first)) << ',' << num(sy(s.points[i].second));
        svg << "\"/>\n";
        for (const auto& [x, y] : s.points)
            svg << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\"3\" fill=\"" << s.color
                << "\"/>\n";
    }

    double ly = top + 10;
    for (const auto& s : p.series) {
        const double lx = left + pw + 15;
        svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 25) << "\" y2=\""
            << num(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << num(lx + 32) << "\" y=\"" << num(ly + 4) << "\">" << xml_escape(s.label)
            << "</text>\n";
        ly += 20;
    }
    svg << "</svg>\n";
    return svg.str();
}

namespace {

std::vector<PlotSeries> series_by_topology(const SweepResult& sweep, double (*value)(const SweepRow&),
                                           bool (*present)(const SweepRow&))
{
    std::map<std::size_t, PlotSeries> by_topo;
    for (const auto& row : sweep.rows) {
        auto& s = by_topo[row.topology_index];
        s.label = std::string(to_string(row.topology));
        s.color = std::string(topology_color(row.topology));
        if (present(row))
            s.points.emplace_back(row.density, value(row));
    }
    std::vector<PlotSeries> out;
    for (auto& [idx, s] : by_topo) {
        std::sort(s.points.begin(), s.points.end());
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace

LinePlot reachability_plot(const SweepResult& sweep)
{
    LinePlot p;
    p.title = "Reached cells vs. density";
    p.x_label = "density";
    p.y_label = "reached cells [%]";
    p.x_min = 0.0;
    p.x_max = 1.0;
    p.y_min = 0.0;
    p.y_max = 100.0;
    for (const auto& row : sweep.rows)
        p.x_max = std::max(p.x_max, row.density);
    p.series = series_by_topology(
        sweep, [](const SweepRow& r) { return 100.0 * r.reachability.mean; },
        [](const SweepRow& r) { return r.reachability.count > 0; });
    return p;
}

LinePlot traffic_plot(const SweepResult& sweep, TrafficStat stat)
{
    LinePlot p;
    const bool avg = stat == TrafficStat::average;
    p.title = avg ? "Average hub traffic vs. density" : "Maximum hub traffic vs. density";
    p.x_label = "density";
    p.y_label = avg ? "average traffic [bps]" : "maximum traffic [bps]";
    p.si_y_ticks = true;
    double peak = 0.0;
    for (const auto& row : sweep.rows) {
        p.x_max = std::max(p.x_max, row.density);
        peak = std::max(peak, avg ? row.avg_rate_bps.mean : row.max_rate_bps.mean);
    }
    p.y_max = nice_ceiling(peak);
    if (avg)
        p.series = series_by_topology(
            sweep, [](const SweepRow& r) { return r.avg_rate_bps.mean; }, [](const SweepRow&) { return true; });
    else
        p.series = series_by_topology(
            sweep, [](const SweepRow& r) { return r.max_rate_bps.mean; }, [](const SweepRow&) { return true; });
    return p;
}

} // namespace plcfh::cli
