#pragma once

#include <cstddef>
#include <vector>

#include "plcfh/config.hpp"
#include "plcfh/random.hpp"

namespace plcfh {

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

double distance(Point a, Point b);

struct Cell {
    int id = 0;
    Point pos;
    double radius_m = 0.0;
    int sector = -1; ///< branch index, -1 until assign_sectors runs

    bool operator==(const Cell&) const = default;
};

struct CellDeployment {
    std::vector<Cell> cells; ///< cells[i].id == i
    Point hub;

    bool operator==(const CellDeployment&) const = default;
};

/// Number of cells whose coverage areas add up to `density` times the
/// territory area: floor(density * side^2 / cell_area).
std::size_t cell_count(double density, double side_m, double cell_area_m2);

/// Independent uniform positions on [0, side]^2. Sectors are left unset.
CellDeployment place_cells(std::size_t count, double side_m, double cell_area_m2, Rng& rng);

Point place_hub(const SimulationConfig& cfg, Rng& rng);

/// Sector of a point by its polar angle about the hub. Bins are half-open
/// wedges of width 2*pi/n starting at `anchor_rad`; a point on the hub
/// falls in sector 0.
int sector_of(Point p, Point hub, int n_branches, double anchor_rad = 0.0);

/// Angle of the bisector of a sector wedge.
double sector_bisector(int sector, int n_branches, double anchor_rad = 0.0);

void assign_sectors(CellDeployment& dep, int n_branches, double anchor_rad = 0.0);

/// Full deployment stage: hub, cells, sectors. Draws the hub first.
CellDeployment deploy(const SimulationConfig& cfg, Rng& rng);

} // namespace plcfh
