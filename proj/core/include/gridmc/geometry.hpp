#pragma once

#include <cmath>
#include <cstdint>

namespace gridmc {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
    friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

    double norm() const { return std::hypot(x, y); }
};

struct GridCoord {
    int row = 0;
    int col = 0;

    friend bool operator==(GridCoord a, GridCoord b) {
        return a.row == b.row && a.col == b.col;
    }
    friend bool operator!=(GridCoord a, GridCoord b) { return !(a == b); }
};

// Cell edges. North is +y (the right side's travel direction), east is +x.
enum class Edge { north, south, east, west };

const char* edge_name(Edge e);

// Distance from a position to the inner boundary of each of its cell's four
// transition-zone bands. Negative means the position lies inside that band.
struct TzDistances {
    double north = 0.0;
    double south = 0.0;
    double east = 0.0;
    double west = 0.0;

    double along(Edge e) const;
};

struct TzStatus {
    bool in_tz = false;
    GridCoord next_cell;  // meaningful only when in_tz
    Edge exit_edge = Edge::north;
};

// Rectangular road grid. Columns are lanes along x, rows are road segments
// along y. Cells are half-open boxes [low, high) so every point maps to
// exactly one cell; positions outside the footprint clamp to the nearest
// edge cell (the lane-extension rule).
class GridMap {
  public:
    // Throws std::invalid_argument on non-positive dimensions or when
    // tz_depth >= cell_height / 2 (TZ bands at opposite ends of a road
    // segment must not overlap; lanes may be narrower than 2x the depth
    // since nothing crosses them).
    GridMap(int rows, int cols, double cell_width, double cell_height,
            Vec2 origin, double tz_depth);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double cell_width() const { return cell_width_; }
    double cell_height() const { return cell_height_; }
    Vec2 origin() const { return origin_; }
    double tz_depth() const { return tz_depth_; }

    double width() const { return cols_ * cell_width_; }
    // Longitudinal extent; doubles as the torus road length in mobility.
    double height() const { return rows_ * cell_height_; }

    bool contains(Vec2 p) const;
    GridCoord locate(Vec2 p) const;

    // Offset of p within its (clamped) cell; may fall outside [0, cell)
    // for positions beyond the grid footprint.
    Vec2 local_offset(Vec2 p, GridCoord cell) const;

    Vec2 cell_center(GridCoord cell) const;

    // In-TZ test against the single edge the velocity is approaching
    // (dominant component, ties broken toward the x axis). Zero velocity is
    // never in a TZ. next_cell is the neighbor across the approached edge,
    // clamped at the grid boundary.
    TzStatus transition_state(Vec2 p, Vec2 velocity) const;

    TzDistances distances_to_tz(Vec2 p) const;

  private:
    int rows_;
    int cols_;
    double cell_width_;
    double cell_height_;
    Vec2 origin_;
    double tz_depth_;
};

// Free-function spellings used throughout the engine and tests.
GridMap build_grid(int rows, int cols, double cell_width, double cell_height,
                   Vec2 origin, double tz_depth);

inline GridCoord locate(const GridMap& g, Vec2 p) { return g.locate(p); }
inline TzStatus transition_state(const GridMap& g, Vec2 p, Vec2 v) {
    return g.transition_state(p, v);
}
inline TzDistances distances_to_tz(const GridMap& g, Vec2 p) {
    return g.distances_to_tz(p);
}

} // namespace gridmc
