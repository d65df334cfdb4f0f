#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sparseica {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolGrid = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Numeric failure during an evaluation or solve (ill-conditioned matrix,
/// NaN/Inf iterate, failed factorization). Input errors use
/// std::invalid_argument instead.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Square mixing matrix of the model x = A s. Immutable after construction.
class MixingMatrix {
 public:
  explicit MixingMatrix(Matrix entries) : a_(std::move(entries)) {
    if (a_.rows() != a_.cols()) {
      throw std::invalid_argument("mixing matrix must be square");
    }
    if (!a_.allFinite()) {
      throw std::invalid_argument("mixing matrix entries must be finite");
    }
  }

  static MixingMatrix identity(int n) { return MixingMatrix(Matrix::Identity(n, n)); }

  const Matrix& entries() const { return a_; }
  int dim() const { return static_cast<int>(a_.rows()); }

  /// |det A| measured against the Hadamard bound (product of column norms).
  /// A matrix below the cutoff is treated as singular for estimation.
  bool nonsingular(double cutoff = 1e-10) const {
    double bound = 1.0;
    for (int j = 0; j < dim(); ++j) bound *= a_.col(j).norm();
    if (bound == 0.0) return false;
    double det = std::abs(a_.partialPivLu().determinant());
    return det > cutoff * bound;
  }

 private:
  Matrix a_;
};

/// Boolean support mask of a square matrix.
class SupportPattern {
 public:
  explicit SupportPattern(BoolGrid mask) : mask_(std::move(mask)) {
    if (mask_.rows() != mask_.cols()) {
      throw std::invalid_argument("support pattern must be square");
    }
  }

  static SupportPattern zero(int n) { return SupportPattern(BoolGrid::Constant(n, n, false)); }
  static SupportPattern identity(int n) {
    BoolGrid m = BoolGrid::Constant(n, n, false);
    for (int i = 0; i < n; ++i) m(i, i) = true;
    return SupportPattern(m);
  }

  const BoolGrid& mask() const { return mask_; }
  int dim() const { return static_cast<int>(mask_.rows()); }
  bool at(int i, int j) const { return mask_(i, j); }

  /// Number of set cells.
  int count() const { return static_cast<int>(mask_.count()); }

  friend bool operator==(const SupportPattern& a, const SupportPattern& b) {
    return a.dim() == b.dim() && (a.mask_ == b.mask_).all();
  }

 private:
  BoolGrid mask_;
};

/// Column permutation combined with per-column sign flips. Acting on a
/// matrix B produces the matrix whose column j equals signs[j] * B.col(perm[j]).
struct SignedPermutation {
  std::vector<int> perm;
  std::vector<int> signs;

  SignedPermutation(std::vector<int> p, std::vector<int> s)
      : perm(std::move(p)), signs(std::move(s)) {
    const int n = static_cast<int>(perm.size());
    if (signs.size() != perm.size()) {
      throw std::invalid_argument("signed permutation: size mismatch");
    }
    std::vector<bool> seen(n, false);
    for (int j = 0; j < n; ++j) {
      if (perm[j] < 0 || perm[j] >= n || seen[perm[j]]) {
        throw std::invalid_argument("signed permutation: not a bijection");
      }
      seen[perm[j]] = true;
      if (signs[j] != 1 && signs[j] != -1) {
        throw std::invalid_argument("signed permutation: signs must be +1 or -1");
      }
    }
  }

  static SignedPermutation identity(int n) {
    std::vector<int> p(n), s(n, 1);
    for (int i = 0; i < n; ++i) p[i] = i;
    return SignedPermutation(std::move(p), std::move(s));
  }

  int dim() const { return static_cast<int>(perm.size()); }

  bool is_identity() const {
    for (int j = 0; j < dim(); ++j) {
      if (perm[j] != j || signs[j] != 1) return false;
    }
    return true;
  }

  /// Matrix P with P(perm[j], j) = signs[j], so that (B * P).col(j) =
  /// signs[j] * B.col(perm[j]).
  Matrix matrix() const {
    const int n = dim();
    Matrix p = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) p(perm[j], j) = signs[j];
    return p;
  }

  Matrix apply(const Matrix& b) const {
    const int n = dim();
    if (b.cols() != n) throw std::invalid_argument("signed permutation: dimension mismatch");
    Matrix out(b.rows(), n);
    for (int j = 0; j < n; ++j) out.col(j) = signs[j] * b.col(perm[j]);
    return out;
  }

  SignedPermutation inverse() const {
    const int n = dim();
    std::vector<int> p(n), s(n);
    for (int j = 0; j < n; ++j) {
      p[perm[j]] = j;
      s[perm[j]] = signs[j];
    }
    return SignedPermutation(std::move(p), std::move(s));
  }
};

/// Symmetric positive semidefinite covariance matrix together with the
/// sample count it was estimated from (0 marks a population-level matrix).
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Matrix sigma, long sample_count = 0)
      : sigma_(std::move(sigma)), sample_count_(sample_count) {
    if (sigma_.rows() != sigma_.cols()) {
      throw std::invalid_argument("covariance matrix must be square");
    }
    if (!sigma_.allFinite()) {
      throw std::invalid_argument("covariance matrix entries must be finite");
    }
    if (sample_count_ < 0) {
      throw std::invalid_argument("covariance sample count must be >= 0");
    }
    const double scale = sigma_.cwiseAbs().maxCoeff();
    if ((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0)) {
      throw std::invalid_argument("covariance matrix must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(sigma_, Eigen::EigenvaluesOnly);
    const double lam_min = es.eigenvalues().minCoeff();
    const double lam_scale = es.eigenvalues().cwiseAbs().maxCoeff();
    if (lam_min < -1e-10 * std::max(lam_scale, 1.0)) {
      throw std::invalid_argument("covariance matrix must be positive semidefinite");
    }
  }

  const Matrix& sigma() const { return sigma_; }
  int dim() const { return static_cast<int>(sigma_.rows()); }
  long sample_count() const { return sample_count_; }

 private:
  Matrix sigma_;
  long sample_count_;
};

/// Linear SEM x = B^T x + e: off-diagonal weighted adjacency B (edge
/// x_i -> x_j iff b(i,j) != 0) and positive noise variances omega.
struct SemModel {
  Matrix b;
  Vector omega;

  SemModel(Matrix b_in, Vector omega_in) : b(std::move(b_in)), omega(std::move(omega_in)) {
    if (b.rows() != b.cols()) throw std::invalid_argument("sem model: B must be square");
    if (omega.size() != b.rows()) throw std::invalid_argument("sem model: omega size mismatch");
    for (int i = 0; i < b.rows(); ++i) {
      if (b(i, i) != 0.0) throw std::invalid_argument("sem model: B diagonal must be zero");
      if (!(omega(i) > 0.0)) throw std::invalid_argument("sem model: omega must be positive");
    }
  }

  int dim() const { return static_cast<int>(b.rows()); }
};

/// Sample matrix (rows = observations) with optional ground truth.
struct Dataset {
  Matrix x;  // T x n
  std::optional<MixingMatrix> true_a;
  std::optional<Matrix> true_s;  // T x n
  double gaussian_ratio = 1.0;

  long samples() const { return x.rows(); }
  int dim() const { return static_cast<int>(x.cols()); }
};

}  // namespace sparseica
