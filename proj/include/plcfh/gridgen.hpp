#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "plcfh/config.hpp"
#include "plcfh/deployment.hpp"

namespace plcfh {

enum class NodeKind { hub, cell_tap, junction };

struct GridNode {
    int id = 0;
    Point pos;
    NodeKind kind = NodeKind::junction;
    int cell_id = -1; ///< set for cell taps only
    int sector = -1;  ///< -1 for the hub, which is shared by every sector

    bool operator==(const GridNode&) const = default;
};

struct GridEdge {
    int a = 0;
    int b = 0;
    double length_m = 0.0;
    int sector = -1;

    bool operator==(const GridEdge&) const = default;
};

/// Power-line network rooted at the concentrator (node 0). Per-cell arrays
/// are indexed by cell id.
struct PowerGrid {
    std::vector<GridNode> nodes;
    std::vector<GridEdge> edges;

    std::vector<int> cell_node;          ///< node id of each cell, -1 if not wired
    std::vector<double> wire_distance_m; ///< NaN until computed
    std::vector<bool> served;
    std::vector<int> branch;

    int n_branches = 1;
    int forced_crossings = 0; ///< chain edges that could not avoid a crossing

    const GridNode& hub() const { return nodes.front(); }
    std::size_t cell_count() const { return cell_node.size(); }
    bool forced_crossing() const { return forced_crossings > 0; }

    /// Structural equality; NaN wire distances compare equal.
    bool operator==(const PowerGrid& o) const;
};

/// Grid with only the hub node and room for `n_cells` cells.
PowerGrid empty_grid(Point hub, std::size_t n_cells, int n_branches = 1);

/// True iff the closed segments p1-p2 and q1-q2 share a point other than
/// a common endpoint. Throws GeometryError on a zero-length segment.
bool segments_intersect(Point p1, Point p2, Point q1, Point q2);

/// Straight bus from the hub along `bisector_rad`, as long as the farthest
/// positive projection but capped at `max_wire_m`. Cells hang off it by
/// perpendicular drops; cells projecting past the end drop to the end
/// point, cells behind the hub connect to it directly.
void build_bus(PowerGrid& grid, std::span<const Cell> cells, double bisector_rad, double max_wire_m);

/// Nearest-connected accretion (Prim order from the hub). Ties go to the
/// lower cell id.
void build_tree(PowerGrid& grid, std::span<const Cell> cells);

/// Greedy chain from the hub: the tip extends to the nearest unwired cell.
/// When that edge would cross an existing one the cell branches off the
/// nearest node it can reach without crossing; if none exists it takes the
/// nearest node anyway and `forced_crossings` is incremented.
void build_chain(PowerGrid& grid, std::span<const Cell> cells);

/// Fill wire_distance_m by walking the tree from the hub.
void compute_wire_distances(PowerGrid& grid);

/// Throws NotFoundError for a cell that is not wired into the grid.
double wire_distance(const PowerGrid& grid, int cell_id);

/// Per branch, serve the `max_cells_per_branch` closest cells (by wire
/// distance, ties by id) among those within `max_wire_m`.
void mark_served(PowerGrid& grid, double max_wire_m, int max_cells_per_branch);

std::size_t served_count(const PowerGrid& grid);

/// served / total, or nullopt for an empty deployment.
std::optional<double> reachability_fraction(const PowerGrid& grid);

/// Every sector topology for the configured rule, then wire distances and
/// served flags.
PowerGrid build_grid(const CellDeployment& dep, const SimulationConfig& cfg);

/// Structural self-check: each sector subgraph plus the hub is a tree that
/// spans the sector's cells, and every edge length matches its endpoints.
/// Throws InvariantError describing the first violation.
void check_grid_invariants(const PowerGrid& grid);

} // namespace plcfh
