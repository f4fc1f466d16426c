#include "plcfh/gridgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "plcfh/error.hpp"

namespace plcfh {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

int add_node(PowerGrid& g, Point pos, NodeKind kind, int cell_id, int sector)
{
    const int id = static_cast<int>(g.nodes.size());
    g.nodes.push_back({id, pos, kind, cell_id, sector});
    if (cell_id >= 0) {
        g.cell_node.at(static_cast<std::size_t>(cell_id)) = id;
        g.branch[static_cast<std::size_t>(cell_id)] = sector;
    }
    return id;
}

int add_cell(PowerGrid& g, const Cell& c)
{
    return add_node(g, c.pos, NodeKind::cell_tap, c.id, c.sector);
}

void add_edge(PowerGrid& g, int a, int b, int sector)
{
    const auto& na = g.nodes[static_cast<std::size_t>(a)];
    const auto& nb = g.nodes[static_cast<std::size_t>(b)];
    g.edges.push_back({a, b, distance(na.pos, nb.pos), sector});
}

double cross(Point o, Point a, Point b)
{
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int orientation(Point o, Point a, Point b)
{
    const double v = cross(o, a, b);
    return (v > 0) - (v < 0);
}

// c is known to be collinear with a-b
bool within_box(Point a, Point b, Point c)
{
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
           c.y <= std::max(a.y, b.y);
}

} // namespace

bool PowerGrid::operator==(const PowerGrid& o) const
{
    const auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
    return nodes == o.nodes && edges == o.edges && cell_node == o.cell_node && served == o.served &&
           branch == o.branch && n_branches == o.n_branches && forced_crossings == o.forced_crossings &&
           std::ranges::equal(wire_distance_m, o.wire_distance_m, same);
}

PowerGrid empty_grid(Point hub, std::size_t n_cells, int n_branches)
{
    PowerGrid g;
    g.n_branches = n_branches;
    g.nodes.push_back({0, hub, NodeKind::hub, -1, -1});
    g.cell_node.assign(n_cells, -1);
    g.wire_distance_m.assign(n_cells, nan);
    g.served.assign(n_cells, false);
    g.branch.assign(n_cells, -1);
    return g;
}

bool segments_intersect(Point p1, Point p2, Point q1, Point q2)
{
    if (p1 == p2 || q1 == q2)
        throw GeometryError("segments_intersect: degenerate segment");

    const bool same_start = p1 == q1 || p1 == q2;
    const bool same_end = p2 == q1 || p2 == q2;
    if (same_start && same_end)
        return true; // identical segments

    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);

    if (same_start || same_end) {
        // Two segments leaving a common point meet elsewhere only when they
        // overlap along the same ray.
        if (o1 != 0 || o2 != 0)
            return false;
        const Point s = same_start ? p1 : p2;
        const Point a = same_start ? p2 : p1;
        const Point b = (q1 == s) ? q2 : q1;
        return (a.x - s.x) * (b.x - s.x) + (a.y - s.y) * (b.y - s.y) > 0;
    }

    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);
    if (o1 * o2 < 0 && o3 * o4 < 0)
        return true;
    if (o1 == 0 && within_box(p1, p2, q1))
        return true;
    if (o2 == 0 && within_box(p1, p2, q2))
        return true;
    if (o3 == 0 && within_box(q1, q2, p1))
        return true;
    if (o4 == 0 && within_box(q1, q2, p2))
        return true;
    return false;
}

void build_bus(PowerGrid& grid, std::span<const Cell> cells, double bisector_rad, double max_wire_m)
{
    if (cells.empty())
        return;
    const int sector = cells.front().sector;
    const Point hub = grid.hub().pos;
    const double ux = std::cos(bisector_rad);
    const double uy = std::sin(bisector_rad);

    std::vector<double> proj(cells.size());
    double farthest = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        proj[i] = (cells[i].pos.x - hub.x) * ux + (cells[i].pos.y - hub.y) * uy;
        farthest = std::max(farthest, proj[i]);
    }
    const double bus_len = std::min(max_wire_m, farthest);

    // attachment offset along the bus -> cells dropping there
    std::map<double, std::vector<std::size_t>> taps;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (proj[i] <= 0) {
            add_edge(grid, 0, add_cell(grid, cells[i]), sector);
            continue;
        }
        taps[std::min(proj[i], bus_len)].push_back(i);
    }

    int prev = 0;
    for (const auto& [offset, members] : taps) {
        const Point at{hub.x + offset * ux, hub.y + offset * uy};
        // A cell sitting on the bus itself is the tap point; no junction.
        auto on_bus = std::find_if(members.begin(), members.end(),
                                   [&](std::size_t i) { return cells[i].pos == at; });
        const int bus_node = on_bus != members.end() ? add_cell(grid, cells[*on_bus])
                                                     : add_node(grid, at, NodeKind::junction, -1, sector);
        add_edge(grid, prev, bus_node, sector);
        for (std::size_t i : members) {
            if (on_bus != members.end() && i == *on_bus)
                continue;
            add_edge(grid, bus_node, add_cell(grid, cells[i]), sector);
        }
        prev = bus_node;
    }
}

void build_tree(PowerGrid& grid, std::span<const Cell> cells)
{
    const std::size_t n = cells.size();
    if (n == 0)
        return;
    const int sector = cells.front().sector;
    const Point hub = grid.hub().pos;

    std::vector<double> best(n);
    std::vector<int> parent(n, 0);
    std::vector<bool> wired(n, false);
    for (std::size_t k = 0; k < n; ++k)
        best[k] = distance(cells[k].pos, hub);

    for (std::size_t step = 0; step < n; ++step) {
        std::size_t pick = n;
        for (std::size_t k = 0; k < n; ++k) {
            if (wired[k])
                continue;
            if (pick == n || best[k] < best[pick] || (best[k] == best[pick] && cells[k].id < cells[pick].id))
                pick = k;
        }
        wired[pick] = true;
        const int node = add_cell(grid, cells[pick]);
        add_edge(grid, parent[pick], node, sector);
        for (std::size_t k = 0; k < n; ++k) {
            if (wired[k])
                continue;
            const double d = distance(cells[k].pos, cells[pick].pos);
            if (d < best[k]) {
                best[k] = d;
                parent[k] = node;
            }
        }
    }
}

void build_chain(PowerGrid& grid, std::span<const Cell> cells)
{
    const std::size_t n = cells.size();
    if (n == 0)
        return;
    const int sector = cells.front().sector;

    std::vector<int> sector_nodes{0};
    std::vector<std::size_t> sector_edges;
    std::vector<bool> wired(n, false);

    auto crosses_existing = [&](int from, Point to) {
        const Point a = grid.nodes[static_cast<std::size_t>(from)].pos;
        if (a == to)
            return false;
        for (std::size_t e : sector_edges) {
            const auto& edge = grid.edges[e];
            if (segments_intersect(a, to, grid.nodes[static_cast<std::size_t>(edge.a)].pos,
                                   grid.nodes[static_cast<std::size_t>(edge.b)].pos))
                return true;
        }
        return false;
    };

    int tip = 0;
    for (std::size_t step = 0; step < n; ++step) {
        const Point tip_pos = grid.nodes[static_cast<std::size_t>(tip)].pos;
        std::size_t pick = n;
        double pick_d = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (wired[k])
                continue;
            const double d = distance(cells[k].pos, tip_pos);
            if (pick == n || d < pick_d || (d == pick_d && cells[k].id < cells[pick].id)) {
                pick = k;
                pick_d = d;
            }
        }
        const Point target = cells[pick].pos;

        int attach = tip;
        if (crosses_existing(tip, target)) {
            std::vector<int> order = sector_nodes;
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                const double da = distance(grid.nodes[static_cast<std::size_t>(a)].pos, target);
                const double db = distance(grid.nodes[static_cast<std::size_t>(b)].pos, target);
                return da != db ? da < db : a < b;
            });
            auto clear = std::find_if(order.begin(), order.end(),
                                      [&](int node) { return !crosses_existing(node, target); });
            if (clear != order.end()) {
                attach = *clear;
            } else {
                attach = order.front();
                ++grid.forced_crossings;
            }
        }

        wired[pick] = true;
        const int node = add_cell(grid, cells[pick]);
        add_edge(grid, attach, node, sector);
        sector_nodes.push_back(node);
        sector_edges.push_back(grid.edges.size() - 1);
        tip = node;
    }
}

void compute_wire_distances(PowerGrid& grid)
{
    const std::size_t n_nodes = grid.nodes.size();
    std::vector<std::vector<std::pair<int, double>>> adj(n_nodes);
    for (const auto& e : grid.edges) {
        adj[static_cast<std::size_t>(e.a)].emplace_back(e.b, e.length_m);
        adj[static_cast<std::size_t>(e.b)].emplace_back(e.a, e.length_m);
    }
    std::vector<double> dist(n_nodes, nan);
    std::vector<int> stack{0};
    dist[0] = 0.0;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (auto [v, len] : adj[static_cast<std::size_t>(u)]) {
            if (!std::isnan(dist[static_cast<std::size_t>(v)]))
                continue;
            dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + len;
            stack.push_back(v);
        }
    }
    for (std::size_t c = 0; c < grid.cell_node.size(); ++c) {
        const int node = grid.cell_node[c];
        grid.wire_distance_m[c] = node < 0 ? nan : dist[static_cast<std::size_t>(node)];
    }
}

double wire_distance(const PowerGrid& grid, int cell_id)
{
    if (cell_id < 0 || static_cast<std::size_t>(cell_id) >= grid.cell_node.size() ||
        grid.cell_node[static_cast<std::size_t>(cell_id)] < 0)
        throw NotFoundError("cell " + std::to_string(cell_id) + " is not wired into the grid");
    return grid.wire_distance_m[static_cast<std::size_t>(cell_id)];
}

void mark_served(PowerGrid& grid, double max_wire_m, int max_cells_per_branch)
{
    std::map<int, std::vector<int>> by_branch;
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
        grid.served[c] = false;
        if (grid.cell_node[c] >= 0)
            by_branch[grid.branch[c]].push_back(static_cast<int>(c));
    }
    for (auto& [branch, ids] : by_branch) {
        std::sort(ids.begin(), ids.end(), [&](int a, int b) {
            const double da = grid.wire_distance_m[static_cast<std::size_t>(a)];
            const double db = grid.wire_distance_m[static_cast<std::size_t>(b)];
            return da != db ? da < db : a < b;
        });
        int taken = 0;
        for (int id : ids) {
            if (taken >= max_cells_per_branch || !(grid.wire_distance_m[static_cast<std::size_t>(id)] <= max_wire_m))
                break;
            grid.served[static_cast<std::size_t>(id)] = true;
            ++taken;
        }
    }
}

std::size_t served_count(const PowerGrid& grid)
{
    return static_cast<std::size_t>(std::count(grid.served.begin(), grid.served.end(), true));
}

std::optional<double> reachability_fraction(const PowerGrid& grid)
{
    if (grid.cell_count() == 0)
        return std::nullopt;
    return static_cast<double>(served_count(grid)) / static_cast<double>(grid.cell_count());
}

PowerGrid build_grid(const CellDeployment& dep, const SimulationConfig& cfg)
{
    auto grid = empty_grid(dep.hub, dep.cells.size(), cfg.n_branches);
    std::vector<std::vector<Cell>> sectors(static_cast<std::size_t>(cfg.n_branches));
    for (const auto& c : dep.cells) {
        if (c.sector < 0 || c.sector >= cfg.n_branches)
            throw InvariantError("cell " + std::to_string(c.id) + " has no valid sector");
        sectors[static_cast<std::size_t>(c.sector)].push_back(c);
    }
    for (int s = 0; s < cfg.n_branches; ++s) {
        const auto& cells = sectors[static_cast<std::size_t>(s)];
        switch (cfg.topology) {
        case Topology::bus:
            build_bus(grid, cells, sector_bisector(s, cfg.n_branches, cfg.sector_anchor_rad), cfg.max_wire_m);
            break;
        case Topology::tree:
            build_tree(grid, cells);
            break;
        case Topology::chain:
            build_chain(grid, cells);
            break;
        }
    }
    compute_wire_distances(grid);
    mark_served(grid, cfg.max_wire_m, cfg.max_cells_per_branch);
    return grid;
}

void check_grid_invariants(const PowerGrid& grid)
{
    auto fail = [](const std::string& what) { throw InvariantError("grid invariant violated: " + what); };

    if (grid.nodes.empty() || grid.hub().kind != NodeKind::hub)
        fail("node 0 is not the hub");
    for (std::size_t i = 1; i < grid.nodes.size(); ++i)
        if (grid.nodes[i].kind == NodeKind::hub)
            fail("more than one hub");

    std::map<int, std::size_t> node_count, edge_count;
    for (std::size_t i = 1; i < grid.nodes.size(); ++i)
        ++node_count[grid.nodes[i].sector];
    for (const auto& e : grid.edges) {
        if (e.a == e.b)
            fail("self-loop at node " + std::to_string(e.a));
        const auto& na = grid.nodes[static_cast<std::size_t>(e.a)];
        const auto& nb = grid.nodes[static_cast<std::size_t>(e.b)];
        const double d = distance(na.pos, nb.pos);
        if (std::abs(e.length_m - d) > 1e-9 * std::max(1.0, d))
            fail("edge length does not match endpoints");
        if ((na.sector != -1 && na.sector != e.sector) || (nb.sector != -1 && nb.sector != e.sector))
            fail("edge joins different sectors");
        ++edge_count[e.sector];
    }
    // A sector with k non-hub nodes is a tree through the hub iff it has k
    // edges and every node is reachable from the hub.
    for (const auto& [sector, k] : node_count)
        if (edge_count[sector] != k)
            fail("sector " + std::to_string(sector) + " is not a tree");
    for (const auto& [sector, k] : edge_count)
        if (!node_count.contains(sector))
            fail("sector " + std::to_string(sector) + " has edges but no nodes");

    std::vector<std::vector<int>> adj(grid.nodes.size());
    for (const auto& e : grid.edges) {
        adj[static_cast<std::size_t>(e.a)].push_back(e.b);
        adj[static_cast<std::size_t>(e.b)].push_back(e.a);
    }
    std::vector<bool> seen(grid.nodes.size(), false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : adj[static_cast<std::size_t>(u)])
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = true;
                stack.push_back(v);
            }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        fail("grid is not connected");
    for (std::size_t c = 0; c < grid.cell_node.size(); ++c)
        if (grid.cell_node[c] < 0)
            fail("cell " + std::to_string(c) + " is not wired");
}

} // namespace plcfh
