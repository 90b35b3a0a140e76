#include "gridmc/queens.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace gridmc {

bool QueensPlacement::valid() const {
    if (static_cast<int>(cols.size()) != n) return false;
    for (int r = 0; r < n; ++r) {
        if (cols[r] < 0 || cols[r] >= n) return false;
        for (int s = r + 1; s < n; ++s) {
            const int dc = std::abs(cols[r] - cols[s]);
            if (dc == 0 || dc == s - r) return false;
        }
    }
    return true;
}

namespace {

bool safe(const std::vector<int>& cols, int row, int col) {
    for (int r = 0; r < row; ++r) {
        const int dc = std::abs(cols[r] - col);
        if (dc == 0 || dc == row - r) return false;
    }
    return true;
}

bool solve_first(std::vector<int>& cols, int row, int n) {
    if (row == n) return true;
    for (int c = 0; c < n; ++c) {
        if (!safe(cols, row, c)) continue;
        cols[row] = c;
        if (solve_first(cols, row + 1, n)) return true;
    }
    return false;
}

std::uint64_t count_all(std::vector<int>& cols, int row, int n) {
    if (row == n) return 1;
    std::uint64_t total = 0;
    for (int c = 0; c < n; ++c) {
        if (!safe(cols, row, c)) continue;
        cols[row] = c;
        total += count_all(cols, row + 1, n);
    }
    return total;
}

} // namespace

QueensPlacement solve_n_queens(int n) {
    if (n < 1) throw std::invalid_argument("solve_n_queens: n must be >= 1");
    QueensPlacement p;
    p.n = n;
    p.cols.assign(n, 0);
    if (!solve_first(p.cols, 0, n))
        throw std::runtime_error("solve_n_queens: no solution exists for n=" +
                                 std::to_string(n));
    return p;
}

std::uint64_t count_n_queens_solutions(int n) {
    if (n < 1) throw std::invalid_argument("count_n_queens_solutions: n must be >= 1");
    std::vector<int> cols(n, 0);
    return count_all(cols, 0, n);
}

} // namespace gridmc
