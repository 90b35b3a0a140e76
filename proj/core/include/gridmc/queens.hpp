#pragma once

#include <cstdint>
#include <vector>

namespace gridmc {

// One queen per row; cols[r] is the queen's column in row r.
struct QueensPlacement {
    int n = 0;
    std::vector<int> cols;

    // Pairwise predicate: permutation columns, no two on a diagonal.
    bool valid() const;
};

// First solution in lexicographic backtracking order (rows top-down, columns
// ascending). Throws std::invalid_argument for n < 1 and std::runtime_error
// for n in {2, 3}, which have no solution.
QueensPlacement solve_n_queens(int n);

// Number of distinct solutions by exhaustive backtracking.
std::uint64_t count_n_queens_solutions(int n);

} // namespace gridmc
