#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include "sparseica/assignment.hpp"
#include "sparseica/simulate.hpp"
#include "sparseica/types.hpp"

namespace sparseica {

namespace detail {

inline Eigen::PartialPivLU<Matrix> guarded_lu(const Matrix& a, const char* who) {
  Eigen::PartialPivLU<Matrix> lu(a);
  const Vector pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double pmin = pivots.minCoeff();
  const double pmax = pivots.maxCoeff();
  if (!(pmin > 0.0) || pmax / pmin > 1e12) {
    throw NumericError(std::string(who) + ": matrix is singular or ill-conditioned");
  }
  return lu;
}

}  // namespace detail

/// s_hat rows solve a_hat * s_hat^T = x^T through a factorization; no
/// explicit inverse.
inline Matrix recover_sources(const MixingMatrix& a_hat, const Matrix& x) {
  if (x.cols() != a_hat.dim()) throw std::invalid_argument("recover_sources: shape mismatch");
  auto lu = detail::guarded_lu(a_hat.entries(), "recover_sources");
  return lu.solve(x.transpose()).transpose();
}

/// Mean correlation coefficient: absolute Pearson correlations between true
/// and estimated source columns, matched by an exact max-weight assignment.
/// Invariant under signed column permutations and positive rescaling of
/// either argument.
inline double mcc(const Matrix& s_true, const Matrix& s_hat) {
  if (s_true.rows() != s_hat.rows() || s_true.cols() != s_hat.cols()) {
    throw std::invalid_argument("mcc: shape mismatch");
  }
  const long t = s_true.rows();
  const int n = static_cast<int>(s_true.cols());
  if (t < 2) throw std::invalid_argument("mcc: need at least 2 samples");

  Matrix a = s_true.rowwise() - s_true.colwise().mean();
  Matrix b = s_hat.rowwise() - s_hat.colwise().mean();
  Vector na(n), nb(n);
  for (int j = 0; j < n; ++j) {
    na(j) = a.col(j).norm();
    nb(j) = b.col(j).norm();
    const double floor_a = 1e-12 * (1.0 + s_true.col(j).cwiseAbs().maxCoeff());
    const double floor_b = 1e-12 * (1.0 + s_hat.col(j).cwiseAbs().maxCoeff());
    if (na(j) <= floor_a || nb(j) <= floor_b) {
      throw std::invalid_argument("mcc: zero-variance column");
    }
  }
  Matrix corr = (a.transpose() * b).cwiseAbs();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) corr(i, j) /= na(i) * nb(j);
  }
  const std::vector<int> match = min_cost_assignment(-corr);
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += corr(i, match[i]);
  return total / n;
}

/// Permutation- and scale-invariant distance on P = a_hat^{-1} a_true;
/// zero exactly when P is a scaled signed permutation.
inline double amari_distance(const MixingMatrix& a_hat, const MixingMatrix& a_true) {
  if (a_hat.dim() != a_true.dim()) throw std::invalid_argument("amari_distance: shape mismatch");
  const int n = a_hat.dim();
  auto lu = detail::guarded_lu(a_hat.entries(), "amari_distance");
  if (!a_true.nonsingular()) throw NumericError("amari_distance: a_true is singular");
  const Matrix p = lu.solve(a_true.entries()).cwiseAbs();

  double row_term = 0.0;
  double col_term = 0.0;
  for (int i = 0; i < n; ++i) {
    row_term += p.row(i).sum() / p.row(i).maxCoeff() - 1.0;
    col_term += p.col(i).sum() / p.col(i).maxCoeff() - 1.0;
  }
  return (row_term + col_term) / (2.0 * n);
}

struct MetricsReport {
  double mcc = 0.0;
  double amari = 0.0;
  std::optional<SignedPermutation> matched_perm;
};

/// Evaluates an estimate against ground truth: source-space MCC on the
/// recovered sources, Amari distance on the matrices, and the matching
/// signed permutation when the estimate is equivalent to the truth.
inline MetricsReport evaluate_estimate(const MixingMatrix& a_hat, const Dataset& data,
                                       double equiv_tol = 5e-2) {
  if (!data.true_a || !data.true_s) {
    throw std::invalid_argument("evaluate_estimate: dataset lacks ground truth");
  }
  MetricsReport report;
  report.mcc = mcc(*data.true_s, recover_sources(a_hat, data.x));
  report.amari = amari_distance(a_hat, *data.true_a);
  report.matched_perm = signed_perm_equivalent(a_hat, *data.true_a, equiv_tol);
  return report;
}

struct FastIcaResult {
  MixingMatrix mixing;
  bool converged = false;
  int iterations = 0;
};

/// Symmetric fixed-point ICA with tanh contrast: whitening by
/// eigendecomposition of the empirical covariance, orthogonal W iteration
/// with symmetric decorrelation until the rotation change drops below tol,
/// then the mixing estimate is unwhitened. Non-convergence returns the last
/// iterate flagged.
inline FastIcaResult fastica_baseline(const Matrix& x, int n_components, std::uint64_t seed,
                                      int max_iters = 500, double tol = 1e-6) {
  const long t = x.rows();
  const int n = static_cast<int>(x.cols());
  if (n_components != n) {
    throw std::invalid_argument("fastica: only the square case n_components == n is supported");
  }
  if (t <= n) throw std::invalid_argument("fastica: need more samples than components");

  const Matrix centered = x.rowwise() - x.colwise().mean();
  const Matrix sigma = (centered.transpose() * centered) / static_cast<double>(t);
  Eigen::SelfAdjointEigenSolver<Matrix> es(((sigma + sigma.transpose()) * 0.5).eval());
  const Vector evals = es.eigenvalues();
  const Matrix evecs = es.eigenvectors();
  const double lam_max = evals.maxCoeff();
  if (!(evals.minCoeff() > 1e-12 * lam_max)) {
    throw NumericError("fastica: degenerate covariance, whitening failed");
  }
  const Vector dsqrt = evals.cwiseSqrt();
  const Matrix whiten = dsqrt.cwiseInverse().asDiagonal() * evecs.transpose();  // n x n
  const Matrix z = whiten * centered.transpose();                               // n x T

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix w(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w(i, j) = normal(rng);
  }
  w = Eigen::HouseholderQR<Matrix>(w).householderQ();

  auto decorrelate = [&](const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> sym(((m * m.transpose() + (m * m.transpose()).transpose()) * 0.5).eval());
    const Vector lam = sym.eigenvalues();
    if (!(lam.minCoeff() > 1e-14 * lam.maxCoeff())) {
      throw NumericError("fastica: degenerate iterate in symmetric decorrelation");
    }
    return Matrix(sym.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() *
                  sym.eigenvectors().transpose() * m);
  };
  w = decorrelate(w);

  bool converged = false;
  int iter = 0;
  for (iter = 1; iter <= max_iters; ++iter) {
    const Matrix u = w * z;              // n x T
    const Matrix g = u.array().tanh();   // contrast derivative
    const Vector gp_mean = (1.0 - g.array().square()).rowwise().mean();
    Matrix w_next = (g * z.transpose()) / static_cast<double>(t) - gp_mean.asDiagonal() * w;
    w_next = decorrelate(w_next);
    const double change = ((w_next * w.transpose()).diagonal().cwiseAbs().array() - 1.0)
                              .abs()
                              .maxCoeff();
    w = std::move(w_next);
    if (change < tol) {
      converged = true;
      break;
    }
  }
  const Matrix mixing = evecs * dsqrt.asDiagonal() * w.transpose();
  return FastIcaResult{MixingMatrix(mixing), converged, std::min(iter, max_iters)};
}

}  // namespace sparseica
