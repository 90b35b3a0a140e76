#include "gridmc/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gridmc/rng.hpp"

namespace gridmc {

namespace {

double wrap_length(double y, double length) {
    double w = std::fmod(y, length);
    if (w < 0.0) w += length;
    return w;
}

double lane_center_x(const GridMap& grid, int col) {
    return grid.origin().x + (col + 0.5) * grid.cell_width();
}

} // namespace

std::vector<Vehicle> spawn_scenario(int n, const GridMap& grid,
                                    std::uint64_t seed, double speed_mps) {
    if (n < 0) throw std::invalid_argument("spawn_scenario: negative n");
    if (speed_mps <= 0.0)
        throw std::invalid_argument("spawn_scenario: speed must be positive");

    const int cols = grid.cols();
    const int split = cols / 2;
    const int n_right = (n + 1) / 2;

    std::vector<Vehicle> out;
    out.reserve(n);
    for (int id = 0; id < n; ++id) {
        const bool right = id < n_right;
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(id)));

        int lane_lo = right ? split : 0;
        int lane_hi = right ? cols : split;
        if (lane_lo == lane_hi) { // degenerate single-column grids
            lane_lo = 0;
            lane_hi = cols;
        }
        const int lane =
            lane_lo + static_cast<int>(rng.uniform_int(
                          static_cast<std::uint64_t>(lane_hi - lane_lo)));
        const double y = grid.origin().y + rng.uniform() * grid.height();

        Vehicle v;
        v.id = id;
        v.side = right ? Side::right : Side::left;
        v.position = {lane_center_x(grid, lane), y};
        v.velocity = {0.0, right ? speed_mps : -speed_mps};
        out.push_back(v);
    }
    return out;
}

void advance(Vehicle& v, double dt, const GridMap& grid) {
    v.position = position_at(v, dt, grid);
}

Vec2 position_at(const Vehicle& v, double t, const GridMap& grid) {
    const double x = v.position.x + v.velocity.x * t;
    const double rel = v.position.y - grid.origin().y + v.velocity.y * t;
    return {x, grid.origin().y + wrap_length(rel, grid.height())};
}

GridCoord predict_cell(const Vehicle& v, const GridMap& grid) {
    const GridCoord cur = grid.locate(v.position);
    if (v.velocity.x == 0.0 && v.velocity.y == 0.0) return cur;

    GridCoord next = cur;
    if (std::abs(v.velocity.x) >= std::abs(v.velocity.y)) {
        const int step = v.velocity.x > 0.0 ? 1 : -1;
        next.col = std::clamp(cur.col + step, 0, grid.cols() - 1);
    } else {
        const int step = v.velocity.y > 0.0 ? 1 : -1;
        next.row = (cur.row + step + grid.rows()) % grid.rows();
    }
    return next;
}

} // namespace gridmc
