#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sparseica/assignment.hpp"
#include "sparseica/model.hpp"
#include "sparseica/types.hpp"

namespace sparseica {

/// Structural variability: every pair of columns of the support differs in
/// more than one entry (symmetric difference of their supports > 1).
inline bool check_structural_variability(const SupportPattern& xi) {
  const int n = xi.dim();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      int diff = 0;
      for (int r = 0; r < n; ++r) diff += (xi.at(r, i) != xi.at(r, j)) ? 1 : 0;
      if (diff <= 1) return false;
    }
  }
  return true;
}

/// No column support is a (possibly equal) subset of another column's.
inline bool check_column_subset(const SupportPattern& xi) {
  const int n = xi.dim();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      bool subset = true;
      for (int r = 0; r < n; ++r) {
        if (xi.at(r, i) && !xi.at(r, j)) {
          subset = false;
          break;
        }
      }
      if (subset) return false;
    }
  }
  return true;
}

namespace detail {

inline bool digraph_acyclic(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<int> color(n, 0);
  std::vector<std::pair<int, std::size_t>> stack;
  for (int start = 0; start < n; ++start) {
    if (color[start] != 0) continue;
    stack.push_back({start, 0});
    color[start] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < adj[v].size()) {
        const int w = adj[v][next++];
        if (color[w] == 1) return false;
        if (color[w] == 0) {
          color[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        color[v] = 2;
        stack.pop_back();
      }
    }
  }
  return true;
}

}  // namespace detail

/// Tests whether the support admits separate row and column permutations to
/// lower triangular form. A column permutation making the diagonal nonzero
/// is found by bipartite matching; the permuted support is then lower
/// triangularizable iff its off-diagonal digraph is acyclic. Any valid
/// matching gives the same answer. Throws std::invalid_argument when no
/// perfect matching exists (structurally singular pattern).
inline bool check_lower_triangularizable(const SupportPattern& xi) {
  const int n = xi.dim();
  auto match = bipartite_perfect_matching(xi.mask());
  if (!match) {
    throw std::invalid_argument(
        "check_lower_triangularizable: pattern is structurally singular");
  }
  const std::vector<int>& col_of_row = *match;
  // After permuting column col_of_row[j] into position j, an off-diagonal
  // nonzero at (i, j) is the edge v_j -> v_i.
  std::vector<std::vector<int>> adj(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i != j && xi.at(i, col_of_row[j])) adj[j].push_back(i);
    }
  }
  return detail::digraph_acyclic(adj);
}

inline bool check_lower_triangularizable(const MixingMatrix& a) {
  return check_lower_triangularizable(support_of(a, 0.0));
}

namespace detail {

inline int ones_matrix_rank(int rows, int cols, double rel_cutoff) {
  if (rows == 0 || cols == 0) return 0;
  Matrix ones = Matrix::Ones(rows, cols);
  Eigen::JacobiSVD<Matrix> svd(ones);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  if (smax <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_cutoff * smax) ++rank;
  }
  return rank;
}

}  // namespace detail

/// Union-vs-overlap rank condition over every column subset I with |I| > 1:
/// |union of supports in I| - rank(overlap(A_I)) > |supp(a_i)| for all i in I.
/// overlap(A_I) is read as the rows shared by every column of I, instantiated
/// with ones; its rank uses singular values above 1e-9 * sigma_max. The
/// enumeration is exponential and capped at n = 12.
inline bool check_union_overlap_dominance(const SupportPattern& xi) {
  const int n = xi.dim();
  if (n > 12) {
    throw std::invalid_argument(
        "check_union_overlap_dominance: exhaustive subset check capped at n = 12");
  }
  std::vector<std::uint32_t> col_rows(n, 0);
  std::vector<int> col_sizes(n, 0);
  for (int j = 0; j < n; ++j) {
    for (int r = 0; r < n; ++r) {
      if (xi.at(r, j)) {
        col_rows[j] |= (1u << r);
        ++col_sizes[j];
      }
    }
  }
  for (std::uint32_t subset = 1; subset < (1u << n); ++subset) {
    if (std::popcount(subset) <= 1) continue;
    std::uint32_t uni = 0;
    std::uint32_t shared = ~0u;
    int cols = 0;
    for (int j = 0; j < n; ++j) {
      if (subset & (1u << j)) {
        uni |= col_rows[j];
        shared &= col_rows[j];
        ++cols;
      }
    }
    const int union_size = std::popcount(uni);
    const int shared_rows = std::popcount(shared & ((1u << n) - 1));
    const int rank = detail::ones_matrix_rank(shared_rows, cols, 1e-9);
    for (int j = 0; j < n; ++j) {
      if ((subset & (1u << j)) && !(union_size - rank > col_sizes[j])) return false;
    }
  }
  return true;
}

/// For every column index i there is a set of rows whose supports intersect
/// exactly in {i}. The intersection over all rows containing i is the
/// smallest candidate, so only that one needs checking.
inline bool check_row_intersection_isolation(const SupportPattern& xi) {
  const int n = xi.dim();
  for (int i = 0; i < n; ++i) {
    bool any_row = false;
    std::vector<bool> inter(n, true);
    for (int r = 0; r < n; ++r) {
      if (!xi.at(r, i)) continue;
      any_row = true;
      for (int c = 0; c < n; ++c) inter[c] = inter[c] && xi.at(r, c);
    }
    if (!any_row) return false;
    for (int c = 0; c < n; ++c) {
      if (c != i && inter[c]) return false;
    }
  }
  return true;
}

enum class RotationKind { Reduction, ReversibleAcute, IrreversibleAcute, ColumnSwap, Inapplicable };

struct RotationOutcome {
  SupportPattern pattern;
  RotationKind kind;
};

/// Effect of the Givens-rotation-induced transformation R(i, j, k) on a
/// support pattern: zeroing cell (i, j) against pivot column k. The four
/// named cases depend on how columns j and k relate; a zero pivot row leaves
/// the pattern untouched.
inline RotationOutcome apply_support_rotation(const SupportPattern& xi, int i, int j, int k) {
  const int n = xi.dim();
  if (j == k) throw std::invalid_argument("support rotation: columns j and k must differ");
  if (i < 0 || i >= n || j < 0 || j >= n || k < 0 || k >= n) {
    throw std::invalid_argument("support rotation: index out of range");
  }
  BoolGrid m = xi.mask();
  if (m(i, j) && m(i, k)) {
    std::vector<int> differing;
    for (int r = 0; r < n; ++r) {
      if (m(r, j) != m(r, k)) differing.push_back(r);
    }
    if (differing.empty()) {
      m(i, j) = false;
      return {SupportPattern(std::move(m)), RotationKind::Reduction};
    }
    if (differing.size() == 1) {
      m(i, j) = false;
      m(differing[0], j) = true;
      m(differing[0], k) = true;
      return {SupportPattern(std::move(m)), RotationKind::ReversibleAcute};
    }
    m(i, j) = false;
    for (int r : differing) {
      m(r, j) = true;
      m(r, k) = true;
    }
    return {SupportPattern(std::move(m)), RotationKind::IrreversibleAcute};
  }
  if (m(i, j) && !m(i, k)) {
    for (int r = 0; r < n; ++r) std::swap(m(r, j), m(r, k));
    return {SupportPattern(std::move(m)), RotationKind::ColumnSwap};
  }
  return {xi, RotationKind::Inapplicable};
}

/// Right-multiplies A by the Givens rotation in the (j, k) plane that zeroes
/// entry (i, j). The Gram matrix A A^T is untouched (exact orthogonality up
/// to roundoff); the zeroed cell is clamped to exactly 0.
inline MixingMatrix givens_reduce(const MixingMatrix& a, int i, int j, int k) {
  const int n = a.dim();
  if (j == k) throw std::invalid_argument("givens_reduce: columns j and k must differ");
  if (i < 0 || i >= n || j < 0 || j >= n || k < 0 || k >= n) {
    throw std::invalid_argument("givens_reduce: index out of range");
  }
  const Matrix& m = a.entries();
  const double aij = m(i, j);
  const double aik = m(i, k);
  if (aij == 0.0 && aik == 0.0) {
    throw std::invalid_argument("givens_reduce: both pivot entries are zero");
  }
  const double r = std::hypot(aij, aik);
  const double c = aik / r;
  const double s = -aij / r;
  Matrix out = m;
  const Vector col_j = m.col(j);
  const Vector col_k = m.col(k);
  out.col(j) = c * col_j + s * col_k;
  out.col(k) = -s * col_j + c * col_k;
  out(i, j) = 0.0;
  return MixingMatrix(std::move(out));
}

/// Residual of the one-common-source equality constraint in three variables:
/// S11*S23 - S12*S13. Vanishes for every covariance generated by the star
/// support (one column feeding all rows, private sources elsewhere).
inline double star3_equality_residual(const CovarianceMatrix& sigma) {
  if (sigma.dim() != 3) throw std::invalid_argument("star3_equality_residual: n must be 3");
  const Matrix& s = sigma.sigma();
  return s(0, 0) * s(1, 2) - s(0, 1) * s(0, 2);
}

/// Discriminant of the quartic that recovers a free parameter of the 3-cycle
/// support from its covariance; nonnegative whenever the covariance is
/// generated by that support.
inline double ring3_inequality_value(const CovarianceMatrix& sigma) {
  if (sigma.dim() != 3) throw std::invalid_argument("ring3_inequality_value: n must be 3");
  const Matrix& s = sigma.sigma();
  const double t = s(0, 0) * s(1, 1) * s(2, 2) + s(0, 0) * s(1, 2) * s(1, 2) -
                   s(1, 1) * s(0, 2) * s(0, 2) - s(2, 2) * s(0, 1) * s(0, 1);
  const double q1 = s(0, 0) * s(1, 1) - s(0, 1) * s(0, 1);
  const double q2 = s(0, 0) * s(2, 2) * s(1, 2) * s(1, 2) - s(0, 2) * s(0, 2) * s(1, 2) * s(1, 2);
  return t * t - 4.0 * q1 * q2;
}

/// Jacobian of Sigma = A A^T with respect to the free parameters of A
/// (the cells of xi). Rows indexed by (i, j) in row-major order over [n]^2;
/// columns by the support cells (k, l) in row-major order.
struct JacobianMatrix {
  Matrix entries;
  std::vector<std::pair<int, int>> row_index;
  std::vector<std::pair<int, int>> col_index;

  int rank(double rel_cutoff = 1e-9) const {
    if (entries.rows() == 0 || entries.cols() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(entries);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    if (smax <= 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > rel_cutoff * smax) ++r;
    }
    return r;
  }
};

inline JacobianMatrix covariance_jacobian(const MixingMatrix& a, const SupportPattern& xi) {
  const int n = a.dim();
  if (xi.dim() != n) throw std::invalid_argument("covariance_jacobian: dimension mismatch");
  const Matrix& m = a.entries();
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (m(r, c) != 0.0 && !xi.at(r, c)) {
        throw std::invalid_argument(
            "covariance_jacobian: matrix support exceeds the given pattern");
      }
    }
  }

  JacobianMatrix jac;
  jac.row_index.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) jac.row_index.push_back({i, j});
  }
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      if (xi.at(k, l)) jac.col_index.push_back({k, l});
    }
  }

  jac.entries = Matrix::Zero(n * n, static_cast<Eigen::Index>(jac.col_index.size()));
  for (std::size_t col = 0; col < jac.col_index.size(); ++col) {
    const auto [k, l] = jac.col_index[col];
    for (std::size_t row = 0; row < jac.row_index.size(); ++row) {
      const auto [i, j] = jac.row_index[row];
      double v = 0.0;
      if (i == j) {
        v = (k == i) ? 2.0 * m(i, l) : 0.0;
      } else if (k == i) {
        v = m(j, l);
      } else if (k == j) {
        v = m(i, l);
      }
      jac.entries(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = v;
    }
  }
  return jac;
}

}  // namespace sparseica
