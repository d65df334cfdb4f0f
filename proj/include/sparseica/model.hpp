#pragma once

#include <cmath>
#include <optional>

#include "sparseica/assignment.hpp"
#include "sparseica/types.hpp"

namespace sparseica {

/// Support extraction with numeric thresholding. The 0.01 default matches
/// the post-hoc weight threshold used by the estimation methods.
inline SupportPattern support_of(const Matrix& a, double zero_tol = 0.01) {
  if (zero_tol < 0.0) throw std::invalid_argument("support_of: zero_tol must be >= 0");
  if (a.rows() != a.cols()) throw std::invalid_argument("support_of: matrix must be square");
  BoolGrid mask = a.cwiseAbs().array() > zero_tol;
  return SupportPattern(mask);
}

inline SupportPattern support_of(const MixingMatrix& a, double zero_tol = 0.01) {
  return support_of(a.entries(), zero_tol);
}

/// Tests whether a and b differ only by a column permutation and column sign
/// flips. Column matching solves an exact min-cost assignment on the
/// distance c(i,j) = min(|a_i - b_j|, |a_i + b_j|); a greedy match can pair
/// near-collinear columns wrongly. Returns the witness pi with
/// max|a - b*pi| <= tol, or nullopt.
inline std::optional<SignedPermutation> signed_perm_equivalent(const MixingMatrix& a,
                                                               const MixingMatrix& b,
                                                               double tol) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("signed_perm_equivalent: dimension mismatch");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("signed_perm_equivalent: tol must be > 0");
  const int n = a.dim();
  const Matrix& ma = a.entries();
  const Matrix& mb = b.entries();

  Matrix cost(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double dm = (ma.col(i) - mb.col(j)).norm();
      const double dp = (ma.col(i) + mb.col(j)).norm();
      cost(i, j) = std::min(dm, dp);
    }
  }

  std::vector<int> perm = min_cost_assignment(cost);
  std::vector<int> signs(n, 1);
  for (int i = 0; i < n; ++i) {
    const int j = perm[i];
    const double dm = (ma.col(i) - mb.col(j)).norm();
    const double dp = (ma.col(i) + mb.col(j)).norm();
    signs[i] = (dm <= dp) ? 1 : -1;
  }

  SignedPermutation pi(std::move(perm), std::move(signs));
  if ((ma - pi.apply(mb)).cwiseAbs().maxCoeff() > tol) return std::nullopt;
  return pi;
}

}  // namespace sparseica
