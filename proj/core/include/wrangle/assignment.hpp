#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace wrangle {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

using CostGrid = std::vector<std::vector<double>>;

struct Assignment {
  /// row_to_col[r] is the column assigned to row r.
  std::vector<std::size_t> row_to_col;
  double cost = 0.0;
};

/// Minimum-cost perfect matching on a square matrix of non-negative costs,
/// where +infinity marks a forbidden cell (Hungarian algorithm, O(n^3)).
/// The reported cost sums the chosen cells in row order. Throws
/// conflicting_constraints when every perfect matching uses a forbidden cell
/// and invalid_argument for a non-square or negative matrix.
Assignment solve_assignment(const CostGrid& cost);

}  // namespace wrangle
