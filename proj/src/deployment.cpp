#include "plcfh/deployment.hpp"

#include <cmath>
#include <numbers>

#include "plcfh/error.hpp"

namespace plcfh {

double distance(Point a, Point b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

std::size_t cell_count(double density, double side_m, double cell_area_m2)
{
    if (!(side_m > 0))
        throw ConfigError("side_m must be > 0");
    if (!(cell_area_m2 > 0))
        throw ConfigError("cell_area_m2 must be > 0");
    if (!(density >= 0))
        throw ConfigError("density must be >= 0");
    return static_cast<std::size_t>(std::floor(density * side_m * side_m / cell_area_m2));
}

CellDeployment place_cells(std::size_t count, double side_m, double cell_area_m2, Rng& rng)
{
    CellDeployment dep;
    dep.cells.reserve(count);
    const double radius = std::sqrt(cell_area_m2 / std::numbers::pi);
    for (std::size_t i = 0; i < count; ++i) {
        Cell c;
        c.id = static_cast<int>(i);
        c.pos.x = rng.uniform(0.0, side_m);
        c.pos.y = rng.uniform(0.0, side_m);
        c.radius_m = radius;
        dep.cells.push_back(c);
    }
    return dep;
}

Point place_hub(const SimulationConfig& cfg, Rng& rng)
{
    if (cfg.hub_mode == HubMode::center)
        return {cfg.side_m / 2, cfg.side_m / 2};
    const double x = rng.uniform(0.0, cfg.side_m);
    const double y = rng.uniform(0.0, cfg.side_m);
    return {x, y};
}

int sector_of(Point p, Point hub, int n_branches, double anchor_rad)
{
    const double dx = p.x - hub.x;
    const double dy = p.y - hub.y;
    if (dx == 0.0 && dy == 0.0)
        return 0;
    constexpr double two_pi = 2 * std::numbers::pi;
    double theta = std::fmod(std::atan2(dy, dx) - anchor_rad, two_pi);
    if (theta < 0)
        theta += two_pi;
    const auto s = static_cast<int>(std::floor(theta / (two_pi / n_branches)));
    // theta can round up to exactly 2*pi
    return s >= n_branches ? n_branches - 1 : s;
}

double sector_bisector(int sector, int n_branches, double anchor_rad)
{
    return anchor_rad + (sector + 0.5) * (2 * std::numbers::pi / n_branches);
}

void assign_sectors(CellDeployment& dep, int n_branches, double anchor_rad)
{
    if (n_branches < 1)
        throw ConfigError("n_branches must be >= 1");
    for (auto& c : dep.cells)
        c.sector = sector_of(c.pos, dep.hub, n_branches, anchor_rad);
}

CellDeployment deploy(const SimulationConfig& cfg, Rng& rng)
{
    const Point hub = place_hub(cfg, rng);
    auto dep = place_cells(cell_count(cfg.density, cfg.side_m, cfg.cell_area_m2), cfg.side_m,
                           cfg.cell_area_m2, rng);
    dep.hub = hub;
    assign_sectors(dep, cfg.n_branches, cfg.sector_anchor_rad);
    return dep;
}

} // namespace plcfh
