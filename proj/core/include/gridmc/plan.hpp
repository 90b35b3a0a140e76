#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gridmc/channels.hpp"
#include "gridmc/geometry.hpp"

namespace gridmc {

// Immutable grid-to-SCH assignment. The 6x6 base block is a Latin square
// (each SCH once per row and per column) with no equal channels at Chebyshev
// distance 1, the adjacency constraint holding cyclically across rows so the
// block tiles vertically without seam violations.
struct ChannelPlan {
    int rows = 0;
    int cols = 0;
    std::vector<ChannelId> cells; // row-major rows x cols
    ChannelId cch = kCch;

    ChannelId at(int row, int col) const { return cells[row * cols + col]; }
    ChannelId& at(int row, int col) { return cells[row * cols + col]; }
};

struct PlanReport {
    bool latin_rows = false;
    bool latin_cols = false;
    std::map<int, int> per_channel_counts; // channel number -> cell count
    // Minimum Chebyshev distance over all same-channel cell pairs;
    // kNoSameChannelPair when the plan has no such pair.
    int min_same_channel_chebyshev = 0;
    bool seam_ok = false;

    static constexpr int kNoSameChannelPair = 1 << 20;

    bool giz_ok() const { return min_same_channel_chebyshev >= 2; }
};

// Deterministic backtracking construction of the 6x6 base block, tiled down
// to `rows`. The symbol try-order per row is rotated by the 6-queens first
// solution, seeding the search near a queens-shifted square. Requires
// cols == 6, rows a positive multiple of 6, and exactly six distinct SCHs.
// Throws std::invalid_argument on bad arguments and std::runtime_error if no
// assignment satisfies the constraints.
ChannelPlan build_plan(int rows, int cols, const std::set<ChannelId>& sch);

// Convenience: build_plan over the standard six SCHs.
ChannelPlan build_plan(int rows, int cols);

// Exhaustive scan of every report field. Never throws.
PlanReport verify_plan(const ChannelPlan& plan);

// Bounds-checked lookup; throws std::out_of_range.
ChannelId channel_of(const ChannelPlan& plan, GridCoord coord);

// Plain-text matrix exchange format: header "rows cols cch", then one line
// per row of whitespace-separated channel numbers. save_plan emits the
// canonical form (single spaces, trailing newline); load_plan accepts any
// whitespace and round-trips canonical input byte-exactly.
std::string save_plan(const ChannelPlan& plan);
void save_plan(const ChannelPlan& plan, std::ostream& out);
ChannelPlan load_plan(std::istream& in);
ChannelPlan load_plan_file(const std::string& path);
void save_plan_file(const ChannelPlan& plan, const std::string& path);

} // namespace gridmc
