#include "gridmc/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace gridmc {

const char* edge_name(Edge e) {
    switch (e) {
        case Edge::north: return "north";
        case Edge::south: return "south";
        case Edge::east: return "east";
        case Edge::west: return "west";
    }
    return "?";
}

double TzDistances::along(Edge e) const {
    switch (e) {
        case Edge::north: return north;
        case Edge::south: return south;
        case Edge::east: return east;
        case Edge::west: return west;
    }
    return 0.0;
}

GridMap::GridMap(int rows, int cols, double cell_width, double cell_height,
                 Vec2 origin, double tz_depth)
    : rows_(rows),
      cols_(cols),
      cell_width_(cell_width),
      cell_height_(cell_height),
      origin_(origin),
      tz_depth_(tz_depth) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("GridMap: rows and cols must be >= 1");
    if (!(cell_width > 0.0) || !(cell_height > 0.0))
        throw std::invalid_argument("GridMap: cell dimensions must be > 0");
    if (tz_depth < 0.0)
        throw std::invalid_argument("GridMap: tz_depth must be >= 0");
    if (tz_depth >= cell_height / 2.0)
        throw std::invalid_argument(
            "GridMap: tz_depth must be < cell_height/2, opposite TZ bands "
            "along the road may not overlap");
}

GridMap build_grid(int rows, int cols, double cell_width, double cell_height,
                   Vec2 origin, double tz_depth) {
    return GridMap(rows, cols, cell_width, cell_height, origin, tz_depth);
}

bool GridMap::contains(Vec2 p) const {
    const double lx = p.x - origin_.x;
    const double ly = p.y - origin_.y;
    return lx >= 0.0 && lx < width() && ly >= 0.0 && ly < height();
}

GridCoord GridMap::locate(Vec2 p) const {
    const int col = static_cast<int>(std::floor((p.x - origin_.x) / cell_width_));
    const int row = static_cast<int>(std::floor((p.y - origin_.y) / cell_height_));
    return {std::clamp(row, 0, rows_ - 1), std::clamp(col, 0, cols_ - 1)};
}

Vec2 GridMap::local_offset(Vec2 p, GridCoord cell) const {
    return {p.x - origin_.x - cell.col * cell_width_,
            p.y - origin_.y - cell.row * cell_height_};
}

Vec2 GridMap::cell_center(GridCoord cell) const {
    return {origin_.x + (cell.col + 0.5) * cell_width_,
            origin_.y + (cell.row + 0.5) * cell_height_};
}

TzStatus GridMap::transition_state(Vec2 p, Vec2 velocity) const {
    TzStatus st;
    if (velocity.x == 0.0 && velocity.y == 0.0) return st;

    const GridCoord cell = locate(p);
    // Off-footprint positions read as their boundary projection, like locate.
    const Vec2 raw = local_offset(p, cell);
    const Vec2 off{std::clamp(raw.x, 0.0, cell_width_),
                   std::clamp(raw.y, 0.0, cell_height_)};

    // Dominant velocity component picks the approached edge; ties go to x.
    Edge edge;
    double dist_to_edge;
    if (std::abs(velocity.x) >= std::abs(velocity.y)) {
        if (velocity.x > 0.0) {
            edge = Edge::east;
            dist_to_edge = cell_width_ - off.x;
        } else {
            edge = Edge::west;
            dist_to_edge = off.x;
        }
    } else {
        if (velocity.y > 0.0) {
            edge = Edge::north;
            dist_to_edge = cell_height_ - off.y;
        } else {
            edge = Edge::south;
            dist_to_edge = off.y;
        }
    }

    if (dist_to_edge >= tz_depth_) return st;

    GridCoord next = cell;
    switch (edge) {
        case Edge::north: next.row += 1; break;
        case Edge::south: next.row -= 1; break;
        case Edge::east: next.col += 1; break;
        case Edge::west: next.col -= 1; break;
    }
    next.row = std::clamp(next.row, 0, rows_ - 1);
    next.col = std::clamp(next.col, 0, cols_ - 1);

    st.in_tz = true;
    st.next_cell = next;
    st.exit_edge = edge;
    return st;
}

TzDistances GridMap::distances_to_tz(Vec2 p) const {
    const GridCoord cell = locate(p);
    const Vec2 raw = local_offset(p, cell);
    const Vec2 off{std::clamp(raw.x, 0.0, cell_width_),
                   std::clamp(raw.y, 0.0, cell_height_)};
    TzDistances d;
    d.north = (cell_height_ - tz_depth_) - off.y;
    d.south = off.y - tz_depth_;
    d.east = (cell_width_ - tz_depth_) - off.x;
    d.west = off.x - tz_depth_;
    return d;
}

} // namespace gridmc
