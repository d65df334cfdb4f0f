#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "sparseica/assignment.hpp"
#include "sparseica/model.hpp"
#include "sparseica/structure.hpp"
#include "sparseica/types.hpp"

namespace sparseica {

struct SemConversion {
  SemModel sem;
  SignedPermutation perm;
};

/// Converts a mixing matrix to linear-SEM form: a column permutation P with
/// nonzero diag(AP) is found by perfect matching, D flips columns so the
/// diagonal is positive, then Omega_ii = 1/(APD)_ii^2 and
/// B = I - (APD) Omega^{1/2}. The returned signed permutation pi satisfies
/// sem_to_a(B, Omega) = A * pi, so the round trip reproduces A up to
/// equivalence. When A admits separate row/column permutations to triangular
/// form, B represents a DAG and (B, Omega) is unique.
inline SemConversion a_to_sem(const MixingMatrix& a) {
  const int n = a.dim();
  const Matrix& m = a.entries();
  auto match = bipartite_perfect_matching(support_of(a, 0.0).mask());
  if (!match) throw NumericError("a_to_sem: matrix is structurally singular");
  const std::vector<int>& col_of_row = *match;

  std::vector<int> perm(n), signs(n);
  Matrix apd(n, n);
  for (int i = 0; i < n; ++i) {
    perm[i] = col_of_row[i];
    signs[i] = m(i, col_of_row[i]) > 0.0 ? 1 : -1;
    apd.col(i) = static_cast<double>(signs[i]) * m.col(col_of_row[i]);
  }

  Vector omega(n);
  Matrix b(n, n);
  for (int j = 0; j < n; ++j) {
    const double d = apd(j, j);
    omega(j) = 1.0 / (d * d);
    b.col(j) = -apd.col(j) / d;
  }
  b.diagonal().setZero();
  return SemConversion{SemModel(std::move(b), std::move(omega)),
                       SignedPermutation(std::move(perm), std::move(signs))};
}

/// A := (I - B) Omega^{-1/2}.
inline MixingMatrix sem_to_a(const SemModel& model) {
  const int n = model.dim();
  Matrix a = Matrix::Identity(n, n) - model.b;
  for (int j = 0; j < n; ++j) a.col(j) /= std::sqrt(model.omega(j));
  return MixingMatrix(std::move(a));
}

/// True iff the nonzero pattern of B (zero diagonal required) has no
/// directed cycle.
inline bool dag_check(const Matrix& b) {
  if (b.rows() != b.cols()) throw std::invalid_argument("dag_check: matrix must be square");
  const int n = static_cast<int>(b.rows());
  for (int i = 0; i < n; ++i) {
    if (b(i, i) != 0.0) throw std::invalid_argument("dag_check: diagonal must be zero");
  }
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && b(i, j) != 0.0) adj[i].push_back(j);
    }
  }
  return detail::digraph_acyclic(adj);
}

/// A DAG's Markov equivalence class is a singleton exactly when no vertex
/// pair is parent-exchangeable, i.e. every column pair of supp(I - B) has
/// symmetric difference greater than one.
inline bool mec_is_singleton(const Matrix& b) {
  if (!dag_check(b)) throw std::invalid_argument("mec_is_singleton: input graph is cyclic");
  const int n = static_cast<int>(b.rows());
  const Matrix ib = Matrix::Identity(n, n) - b;
  return check_structural_variability(support_of(ib, 0.0));
}

/// Unique lower Cholesky factor L of P1^T Sigma P1 with positive diagonal
/// (left-looking factorization; pivots at or below 1e-12 * trace fail).
/// Serves as the identifiability oracle: for a triangularizable truth with
/// row permutation P1, P1 L is equivalent to the truth.
inline MixingMatrix permuted_cholesky_factor(const CovarianceMatrix& sigma,
                                             const std::vector<int>& p1) {
  const int n = sigma.dim();
  if (static_cast<int>(p1.size()) != n) {
    throw std::invalid_argument("permuted_cholesky_factor: permutation size mismatch");
  }
  std::vector<bool> seen(n, false);
  for (int v : p1) {
    if (v < 0 || v >= n || seen[v]) {
      throw std::invalid_argument("permuted_cholesky_factor: not a permutation");
    }
    seen[v] = true;
  }
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = sigma.sigma()(p1[i], p1[j]);
  }
  const double pivot_floor = 1e-12 * m.trace();
  Matrix l = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double d = m(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= pivot_floor) {
      throw NumericError("permuted_cholesky_factor: matrix is not positive definite");
    }
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double v = m(i, j);
      for (int k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  return MixingMatrix(std::move(l));
}

}  // namespace sparseica
