#include "wrangle/assignment.hpp"

#include <cmath>

#include "wrangle/error.hpp"

namespace wrangle {

Assignment solve_assignment(const CostGrid& cost) {
  const std::size_t n = cost.size();
  Assignment result;
  if (n == 0) return result;

  double largest = 0.0;
  for (const auto& row : cost) {
    if (row.size() != n) throw Error(ErrorCode::invalid_argument, "cost matrix is not square");
    for (double c : row) {
      if (std::isnan(c) || c < 0.0)
        throw Error(ErrorCode::invalid_argument, "cost matrix entries must be non-negative");
      if (std::isfinite(c) && c > largest) largest = c;
    }
  }
  // Forbidden cells get a power-of-two stand-in larger than any feasible
  // total, so exact (dyadic) inputs stay exact through the potentials.
  const double bound = (largest + 1.0) * static_cast<double>(n + 1);
  const double big = std::exp2(std::ceil(std::log2(bound)) + 1.0);
  auto at = [&](std::size_t r, std::size_t c) {
    double v = cost[r][c];
    return std::isfinite(v) ? v : big;
  };

  // Potentials formulation with 1-based sentinel row/column 0.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_slack(n + 1);
  std::vector<std::size_t> col_owner(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t row = 1; row <= n; ++row) {
    col_owner[0] = row;
    std::size_t col0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), std::numeric_limits<double>::infinity());
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t r0 = col_owner[col0];
      double delta = std::numeric_limits<double>::infinity();
      std::size_t col1 = 0;
      for (std::size_t c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double slack = at(r0 - 1, c - 1) - u[r0] - v[c];
        if (slack < min_slack[c]) {
          min_slack[c] = slack;
          way[c] = col0;
        }
        if (min_slack[c] < delta) {
          delta = min_slack[c];
          col1 = c;
        }
      }
      for (std::size_t c = 0; c <= n; ++c) {
        if (used[c]) {
          u[col_owner[c]] += delta;
          v[c] -= delta;
        } else {
          min_slack[c] -= delta;
        }
      }
      col0 = col1;
    } while (col_owner[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      col_owner[col0] = col_owner[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  result.row_to_col.assign(n, 0);
  for (std::size_t c = 1; c <= n; ++c) result.row_to_col[col_owner[c] - 1] = c - 1;
  for (std::size_t r = 0; r < n; ++r) {
    const double c = cost[r][result.row_to_col[r]];
    if (!std::isfinite(c))
      throw Error(ErrorCode::conflicting_constraints,
                  "constraints leave no feasible column assignment");
    result.cost += c;
  }
  return result;
}

}  // namespace wrangle
