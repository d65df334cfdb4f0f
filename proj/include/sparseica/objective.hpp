#pragma once

#include <cmath>
#include <sstream>
#include <utility>

#include "sparseica/model.hpp"
#include "sparseica/types.hpp"

namespace sparseica {

struct ObjectiveEval {
  double value = 0.0;
  Matrix gradient;
};

enum class GMode { Naive, LogSquaring };

namespace detail {

/// (sum_{k=1}^t M^k, M^t) via repeated squaring; O(log t) multiplies.
inline std::pair<Matrix, Matrix> geometric_power_sum(const Matrix& m, int t) {
  if (t == 1) return {m, m};
  if (t % 2 == 0) {
    auto [s, p] = geometric_power_sum(m, t / 2);
    Matrix s2 = s + p * s;
    Matrix p2 = p * p;
    return {std::move(s2), std::move(p2)};
  }
  auto [s, p] = geometric_power_sum(m, t - 1);
  Matrix pt = p * m;
  Matrix st = s + pt;
  return {std::move(st), std::move(pt)};
}

}  // namespace detail

/// Weighted closed-walk count of the off-diagonal part:
/// value = tr(sum_{k=2}^n M^k) with M = off(A) o off(A). Zero exactly when A
/// is simultaneously permutable to lower triangular form. LogSquaring
/// accumulates the power sum by repeated squaring; Naive multiplies term by
/// term and serves as its oracle.
inline ObjectiveEval g_eval(const Matrix& a, GMode mode = GMode::LogSquaring) {
  if (a.rows() != a.cols()) throw std::invalid_argument("g_eval: matrix must be square");
  const int n = static_cast<int>(a.rows());
  Matrix off = a;
  off.diagonal().setZero();
  const Matrix m = off.cwiseProduct(off);

  double value = 0.0;
  Matrix weight = Matrix::Zero(n, n);  // sum_{k=2}^n k * (M^{k-1})^T
  if (n >= 2) {
    if (mode == GMode::Naive) {
      Matrix p = m;
      for (int k = 2; k <= n; ++k) {
        p = p * m;
        value += p.trace();
      }
    } else {
      auto [s, p] = detail::geometric_power_sum(m, n);
      value = s.trace() - m.trace();
    }
    Matrix p = m;
    weight += 2.0 * p.transpose();
    for (int k = 3; k <= n; ++k) {
      p = p * m;
      weight += static_cast<double>(k) * p.transpose();
    }
  }
  Matrix gradient = weight.cwiseProduct(2.0 * off);
  gradient.diagonal().setZero();
  return {value, std::move(gradient)};
}

/// Minimax concave penalty: lambda|a| - a^2/(2 alpha) inside |a| <= alpha *
/// lambda, constant alpha lambda^2 / 2 beyond the knee.
struct McpParams {
  double lambda = 1.0;
  double alpha = 40.0;
};

inline ObjectiveEval mcp_eval(const Matrix& a, const McpParams& p) {
  if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda) || !(p.alpha > 0.0) ||
      !std::isfinite(p.alpha)) {
    throw std::invalid_argument("mcp_eval: need lambda >= 0 and alpha > 0, both finite");
  }
  const double knee = p.alpha * p.lambda;
  double value = 0.0;
  Matrix gradient = Matrix::Zero(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double x = a(i, j);
      const double ax = std::abs(x);
      if (ax <= knee) {
        value += p.lambda * ax - x * x / (2.0 * p.alpha);
        // subgradient 0 at the origin keeps quasi-Newton steps well defined
        if (x != 0.0) gradient(i, j) = (x > 0.0 ? p.lambda : -p.lambda) - x / p.alpha;
      } else {
        value += p.alpha * p.lambda * p.lambda / 2.0;
      }
    }
  }
  return {value, std::move(gradient)};
}

/// Gaussian negative log-likelihood of x = A s with standardized sources:
///   L(A) = (T/2) tr((A A^T)^{-1} Sigma_bar) + T log|det A|.
/// averaged = true returns L/T, which no longer depends on T. The factor
/// (A A^T)^{-1} goes through a pivoted LU of A with a pivot-ratio condition
/// guard; gradient is T (A^{-T} - (A A^T)^{-1} Sigma_bar (A A^T)^{-1} A).
inline ObjectiveEval nll_eval(const Matrix& a, const CovarianceMatrix& sigma_bar, bool averaged) {
  const int n = static_cast<int>(a.rows());
  if (a.rows() != a.cols() || sigma_bar.dim() != n) {
    throw std::invalid_argument("nll_eval: dimension mismatch");
  }
  Eigen::PartialPivLU<Matrix> lu(a);
  const Vector pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double pmax = pivots.maxCoeff();
  const double pmin = pivots.minCoeff();
  if (!(pmin > 0.0) || pmax / pmin > 1e12) {
    std::ostringstream msg;
    msg << "nll_eval: mixing matrix is singular or ill-conditioned (pivot-ratio "
        << "condition estimate ";
    if (pmin > 0.0) {
      msg << pmax / pmin;
    } else {
      msg << "inf";
    }
    msg << ")";
    throw NumericError(msg.str());
  }

  const double logdet = pivots.array().log().sum();
  const Matrix ainv_sigma = lu.solve(sigma_bar.sigma());
  const Matrix y = lu.solve(ainv_sigma.transpose()).transpose();  // A^{-1} Sigma A^{-T}

  double value = 0.5 * y.trace() + logdet;
  Matrix gradient = lu.transpose().solve(Matrix(Matrix::Identity(n, n) - y));
  if (!averaged) {
    const long t = sigma_bar.sample_count();
    if (t < 1) {
      throw std::invalid_argument("nll_eval: unaveraged likelihood needs sample_count >= 1");
    }
    value *= static_cast<double>(t);
    gradient *= static_cast<double>(t);
  }
  return {value, std::move(gradient)};
}

inline ObjectiveEval nll_eval(const MixingMatrix& a, const CovarianceMatrix& sigma_bar,
                              bool averaged) {
  return nll_eval(a.entries(), sigma_bar, averaged);
}

/// ||A A^T - Sigma_bar||_F^2 with gradient 4 (A A^T - Sigma_bar) A.
inline ObjectiveEval decomposition_residual_eval(const Matrix& a, const Matrix& sigma_bar) {
  if (a.rows() != a.cols() || sigma_bar.rows() != a.rows() || sigma_bar.cols() != a.cols()) {
    throw std::invalid_argument("decomposition_residual_eval: dimension mismatch");
  }
  const Matrix r = a * a.transpose() - sigma_bar;
  return {r.squaredNorm(), 4.0 * r * a};
}

inline ObjectiveEval decomposition_residual_eval(const Matrix& a,
                                                 const CovarianceMatrix& sigma_bar) {
  return decomposition_residual_eval(a, sigma_bar.sigma());
}

/// Unaveraged likelihood plus the 0.5 ||A||_0 log T complexity penalty, with
/// the support counted above zero_tol.
inline double bic_score(const MixingMatrix& a, const CovarianceMatrix& sigma_bar,
                        double zero_tol) {
  const long t = sigma_bar.sample_count();
  if (t < 1) throw std::invalid_argument("bic_score: needs sample_count >= 1");
  const double nll = nll_eval(a.entries(), sigma_bar, false).value;
  const int nnz = support_of(a, zero_tol).count();
  return nll + 0.5 * static_cast<double>(nnz) * std::log(static_cast<double>(t));
}

}  // namespace sparseica
