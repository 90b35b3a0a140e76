#include "gridmc/plan.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gridmc/queens.hpp"

namespace gridmc {

namespace {

// Backtracking state for the 6x6 base block of symbol indices 0..5.
struct BlockSearch {
    static constexpr int kN = 6;
    std::array<std::array<int, kN>, kN> cell{}; // -1 = unfilled
    std::array<std::array<bool, kN>, kN> row_used{};
    std::array<std::array<bool, kN>, kN> col_used{};
    const std::vector<int>& try_shift; // per-row rotation of the value order

    explicit BlockSearch(const std::vector<int>& shifts) : try_shift(shifts) {
        for (auto& row : cell) row.fill(-1);
    }

    bool conflicts(int r, int c, int s) const {
        if (row_used[r][s] || col_used[c][s]) return true;
        // filled 8-neighbors in row-major fill order: left, up-left, up, up-right
        if (c > 0 && cell[r][c - 1] == s) return true;
        if (r > 0) {
            for (int dc = -1; dc <= 1; ++dc) {
                const int cc = c + dc;
                if (cc >= 0 && cc < kN && cell[r - 1][cc] == s) return true;
            }
        }
        // cyclic row adjacency: the last row must also clear row 0, so the
        // block tiles vertically without a seam violation
        if (r == kN - 1) {
            for (int dc = -1; dc <= 1; ++dc) {
                const int cc = c + dc;
                if (cc >= 0 && cc < kN && cell[0][cc] == s) return true;
            }
        }
        return false;
    }

    bool fill(int idx) {
        if (idx == kN * kN) return true;
        const int r = idx / kN;
        const int c = idx % kN;
        for (int j = 0; j < kN; ++j) {
            const int s = (c + try_shift[r] + j) % kN;
            if (conflicts(r, c, s)) continue;
            cell[r][c] = s;
            row_used[r][s] = col_used[c][s] = true;
            if (fill(idx + 1)) return true;
            cell[r][c] = -1;
            row_used[r][s] = col_used[c][s] = false;
        }
        return false;
    }
};

void check_distinct(const std::vector<ChannelId>& window, bool& flag) {
    for (size_t i = 0; i < window.size() && flag; ++i)
        for (size_t j = i + 1; j < window.size(); ++j)
            if (window[i] == window[j]) {
                flag = false;
                break;
            }
}

} // namespace

ChannelPlan build_plan(int rows, int cols, const std::set<ChannelId>& sch) {
    if (cols != 6)
        throw std::invalid_argument("build_plan: cols must be 6");
    if (rows < 6 || rows % 6 != 0)
        throw std::invalid_argument("build_plan: rows must be a positive multiple of 6");
    if (sch.size() != 6)
        throw std::invalid_argument("build_plan: exactly six SCH channels required");
    for (ChannelId ch : sch)
        if (!ch.is_sch())
            throw std::invalid_argument("build_plan: channel set must contain SCHs only");

    const std::vector<ChannelId> symbols(sch.begin(), sch.end()); // ascending

    // Seed the value ordering with the first 6-queens solution.
    const QueensPlacement q = solve_n_queens(6);
    BlockSearch search(q.cols);
    if (!search.fill(0))
        throw std::runtime_error("build_plan: no assignment satisfies the constraints");

    ChannelPlan plan;
    plan.rows = rows;
    plan.cols = cols;
    plan.cells.resize(static_cast<size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            plan.at(r, c) = symbols[static_cast<size_t>(search.cell[r % 6][c])];
    return plan;
}

ChannelPlan build_plan(int rows, int cols) {
    const auto& chans = sch_channels();
    return build_plan(rows, cols, std::set<ChannelId>(chans.begin(), chans.end()));
}

PlanReport verify_plan(const ChannelPlan& plan) {
    PlanReport rep;
    const int rows = plan.rows;
    const int cols = plan.cols;

    rep.latin_rows = true;
    for (int r = 0; r < rows && rep.latin_rows; ++r) {
        for (int c0 = 0; c0 < cols; c0 += 6) {
            std::vector<ChannelId> window;
            for (int c = c0; c < std::min(c0 + 6, cols); ++c)
                window.push_back(plan.at(r, c));
            check_distinct(window, rep.latin_rows);
        }
    }

    rep.latin_cols = true;
    for (int c = 0; c < cols && rep.latin_cols; ++c) {
        for (int r0 = 0; r0 < rows; r0 += 6) {
            std::vector<ChannelId> window;
            for (int r = r0; r < std::min(r0 + 6, rows); ++r)
                window.push_back(plan.at(r, c));
            check_distinct(window, rep.latin_cols);
        }
    }

    for (ChannelId ch : plan.cells) rep.per_channel_counts[ch.number()]++;

    rep.min_same_channel_chebyshev = PlanReport::kNoSameChannelPair;
    const int n = rows * cols;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (plan.cells[i] != plan.cells[j]) continue;
            const int dr = std::abs(i / cols - j / cols);
            const int dc = std::abs(i % cols - j % cols);
            rep.min_same_channel_chebyshev =
                std::min(rep.min_same_channel_chebyshev, std::max(dr, dc));
        }
    }

    // Seam check: would stacking another copy of this plan below keep the
    // 8-neighborhood reuse constraint across the joint?
    rep.seam_ok = true;
    for (int c = 0; c < cols && rep.seam_ok; ++c) {
        for (int dc = -1; dc <= 1; ++dc) {
            const int cc = c + dc;
            if (cc < 0 || cc >= cols) continue;
            if (plan.at(rows - 1, c) == plan.at(0, cc)) {
                rep.seam_ok = false;
                break;
            }
        }
    }
    return rep;
}

ChannelId channel_of(const ChannelPlan& plan, GridCoord coord) {
    if (coord.row < 0 || coord.row >= plan.rows || coord.col < 0 ||
        coord.col >= plan.cols)
        throw std::out_of_range("channel_of: coordinate outside the plan");
    return plan.at(coord.row, coord.col);
}

std::string save_plan(const ChannelPlan& plan) {
    std::ostringstream out;
    save_plan(plan, out);
    return out.str();
}

void save_plan(const ChannelPlan& plan, std::ostream& out) {
    out << plan.rows << ' ' << plan.cols << ' ' << plan.cch.number() << '\n';
    for (int r = 0; r < plan.rows; ++r) {
        for (int c = 0; c < plan.cols; ++c) {
            if (c > 0) out << ' ';
            out << plan.at(r, c).number();
        }
        out << '\n';
    }
}

ChannelPlan load_plan(std::istream& in) {
    ChannelPlan plan;
    int cch = 0;
    if (!(in >> plan.rows >> plan.cols >> cch))
        throw std::runtime_error("load_plan: malformed header");
    if (plan.rows < 1 || plan.cols < 1)
        throw std::runtime_error("load_plan: non-positive dimensions");
    if (cch != 178)
        throw std::runtime_error("load_plan: control channel must be 178");
    plan.cch = ChannelId(cch);
    plan.cells.resize(static_cast<size_t>(plan.rows) * plan.cols);
    for (auto& cell : plan.cells) {
        int num = 0;
        if (!(in >> num))
            throw std::runtime_error("load_plan: truncated cell matrix");
        if (!ChannelId::is_valid_number(num) || num == 178)
            throw std::runtime_error("load_plan: cell is not an SCH: " +
                                     std::to_string(num));
        cell = ChannelId(num);
    }
    return plan;
}

ChannelPlan load_plan_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_plan: cannot open " + path);
    return load_plan(in);
}

void save_plan_file(const ChannelPlan& plan, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_plan: cannot open " + path);
    save_plan(plan, out);
}

} // namespace gridmc
