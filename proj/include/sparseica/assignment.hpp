#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "sparseica/types.hpp"

namespace sparseica {

/// Exact min-cost assignment on a dense square cost matrix (shortest
/// augmenting paths with potentials, O(n^3)). Returns the assigned column
/// for each row.
inline std::vector<int> min_cost_assignment(const Matrix& cost) {
  if (cost.rows() != cost.cols()) {
    throw std::invalid_argument("assignment: cost matrix must be square");
  }
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();

  // 1-based arrays with a sentinel column 0.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> col_of_row(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] > 0) col_of_row[p[j] - 1] = j - 1;
  }
  return col_of_row;
}

namespace detail {

inline bool matching_augment(const BoolGrid& adj, int row, std::vector<char>& visited,
                             std::vector<int>& row_of_col) {
  const int n = static_cast<int>(adj.cols());
  for (int j = 0; j < n; ++j) {
    if (!adj(row, j) || visited[j]) continue;
    visited[j] = 1;
    if (row_of_col[j] < 0 || matching_augment(adj, row_of_col[j], visited, row_of_col)) {
      row_of_col[j] = row;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Perfect matching of rows to columns over the true cells of adj, via
/// augmenting paths. Returns the matched column per row, or nullopt when no
/// perfect matching exists (the pattern is structurally singular).
inline std::optional<std::vector<int>> bipartite_perfect_matching(const BoolGrid& adj) {
  if (adj.rows() != adj.cols()) {
    throw std::invalid_argument("matching: adjacency must be square");
  }
  const int n = static_cast<int>(adj.rows());
  std::vector<int> row_of_col(n, -1);
  for (int i = 0; i < n; ++i) {
    std::vector<char> visited(n, 0);
    if (!detail::matching_augment(adj, i, visited, row_of_col)) return std::nullopt;
  }
  std::vector<int> col_of_row(n, -1);
  for (int j = 0; j < n; ++j) col_of_row[row_of_col[j]] = j;
  return col_of_row;
}

}  // namespace sparseica
