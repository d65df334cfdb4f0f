#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "sparseica/model.hpp"
#include "sparseica/structure.hpp"
#include "sparseica/types.hpp"

namespace sparseica {

struct SimConfig {
  int n = 10;
  long t = 1000;
  double edge_prob = 0.4;  // keeps the variability acceptance rate usable at n = 10
  double gaussian_ratio = 1.0;
  double weight_lo = 0.2;
  double weight_hi = 0.8;
  std::uint64_t seed = 0;
  int max_rejections = 10000;

  void validate() const {
    if (n < 1) throw std::invalid_argument("sim: n must be >= 1");
    if (t < 2) throw std::invalid_argument("sim: sample count must be >= 2");
    if (!(edge_prob > 0.0) || !(edge_prob < 1.0)) {
      throw std::invalid_argument("sim: edge_prob must be in (0, 1)");
    }
    if (!(gaussian_ratio >= 0.0) || !(gaussian_ratio <= 1.0)) {
      throw std::invalid_argument("sim: gaussian_ratio must be in [0, 1]");
    }
    if (!(weight_lo > 0.0) || !(weight_lo < weight_hi)) {
      throw std::invalid_argument("sim: need 0 < weight_lo < weight_hi");
    }
    if (max_rejections < 1) throw std::invalid_argument("sim: max_rejections must be >= 1");
  }
};

namespace detail {

inline double draw_signed_weight(double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::bernoulli_distribution flip(0.5);
  const double m = mag(rng);
  return flip(rng) ? -m : m;
}

}  // namespace detail

/// Ground-truth mixing matrix: a random DAG support (unit-diagonal lower
/// triangular pattern with edge probability edge_prob, relabeled by a random
/// simultaneous permutation) is rejection-sampled until structural
/// variability holds; lower-triangularizability holds by construction. All
/// nonzero cells, including the diagonal, get magnitudes uniform on
/// +-[weight_lo, weight_hi], which keeps the matrix non-singular.
inline MixingMatrix sample_mixing(const SimConfig& cfg, std::mt19937_64& rng,
                                  int* attempts_out = nullptr) {
  cfg.validate();
  const int n = cfg.n;
  std::bernoulli_distribution edge(cfg.edge_prob);
  for (int attempt = 1; attempt <= cfg.max_rejections; ++attempt) {
    BoolGrid lower = BoolGrid::Constant(n, n, false);
    for (int i = 0; i < n; ++i) {
      lower(i, i) = true;
      for (int j = 0; j < i; ++j) lower(i, j) = edge(rng);
    }
    std::vector<int> relabel(n);
    std::iota(relabel.begin(), relabel.end(), 0);
    std::shuffle(relabel.begin(), relabel.end(), rng);
    BoolGrid mask = BoolGrid::Constant(n, n, false);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (lower(i, j)) mask(relabel[i], relabel[j]) = true;
      }
    }
    SupportPattern xi(mask);
    if (!check_structural_variability(xi)) continue;
    if (!check_lower_triangularizable(xi)) continue;  // guaranteed; cheap assertion

    Matrix a = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (mask(i, j)) a(i, j) = detail::draw_signed_weight(cfg.weight_lo, cfg.weight_hi, rng);
      }
    }
    if (attempts_out) *attempts_out = attempt;
    return MixingMatrix(std::move(a));
  }
  std::ostringstream msg;
  msg << "sample_mixing: no support accepted after " << cfg.max_rejections
      << " draws (acceptance rate below " << 100.0 / cfg.max_rejections
      << "%); lower edge_prob or n";
  throw NumericError(msg.str());
}

/// Ablation regime: supports violating both structural variability and
/// lower-triangularizability (two columns share a support; the matched
/// digraph has a cycle), still structurally non-singular. Used to reproduce
/// the baseline pairings of the simulation study.
inline MixingMatrix sample_mixing_violating(const SimConfig& cfg, std::mt19937_64& rng,
                                            int* attempts_out = nullptr) {
  cfg.validate();
  const int n = cfg.n;
  if (n < 3) throw std::invalid_argument("sample_mixing_violating: needs n >= 3");
  std::bernoulli_distribution edge(0.5);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int attempt = 1; attempt <= cfg.max_rejections; ++attempt) {
    BoolGrid mask = BoolGrid::Constant(n, n, false);
    for (int i = 0; i < n; ++i) {
      mask(i, i) = true;
      for (int j = 0; j < n; ++j) {
        if (i != j && edge(rng)) mask(i, j) = true;
      }
    }
    // Duplicate one column's support onto another to break variability.
    int c1 = pick(rng);
    int c2 = pick(rng);
    if (c1 == c2) c2 = (c2 + 1) % n;
    for (int r = 0; r < n; ++r) mask(r, c2) = mask(r, c1);
    SupportPattern xi(mask);
    if (check_structural_variability(xi)) continue;
    if (!bipartite_perfect_matching(mask)) continue;
    if (check_lower_triangularizable(xi)) continue;

    Matrix a = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (mask(i, j)) a(i, j) = detail::draw_signed_weight(cfg.weight_lo, cfg.weight_hi, rng);
      }
    }
    MixingMatrix m(std::move(a));
    if (!m.nonsingular()) continue;
    if (attempts_out) *attempts_out = attempt;
    return m;
  }
  throw NumericError("sample_mixing_violating: no support accepted");
}

/// Standardized sources, column by column: the first floor(ratio * n)
/// columns are standard normal, the rest are Exponential(1) shifted to mean
/// 0 and variance 1.
inline Matrix sample_sources(int n, long t, double gaussian_ratio, std::mt19937_64& rng) {
  if (n < 1 || t < 1) throw std::invalid_argument("sample_sources: need n >= 1 and t >= 1");
  if (!(gaussian_ratio >= 0.0) || !(gaussian_ratio <= 1.0)) {
    throw std::invalid_argument("sample_sources: gaussian_ratio must be in [0, 1]");
  }
  const int n_gauss = static_cast<int>(std::floor(gaussian_ratio * n + 1e-9));
  Matrix s(t, n);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  for (int j = 0; j < n; ++j) {
    if (j < n_gauss) {
      for (long i = 0; i < t; ++i) s(i, j) = normal(rng);
    } else {
      for (long i = 0; i < t; ++i) s(i, j) = expo(rng) - 1.0;
    }
  }
  return s;
}

struct SimulatedData {
  Dataset dataset;
  CovarianceMatrix covariance;
};

inline CovarianceMatrix empirical_covariance(const Matrix& x) {
  const long t = x.rows();
  if (t < 2) throw std::invalid_argument("empirical_covariance: need at least 2 samples");
  Matrix centered = x.rowwise() - x.colwise().mean();
  Matrix sigma = (centered.transpose() * centered) / static_cast<double>(t);
  sigma = ((sigma + sigma.transpose()) * 0.5).eval();
  return CovarianceMatrix(std::move(sigma), t);
}

/// x = s A^T row-wise, plus the mean-removed empirical covariance
/// (1/T) X^T X.
inline SimulatedData mix_and_covariance(const MixingMatrix& a, const Matrix& s,
                                        double gaussian_ratio = 1.0) {
  if (s.cols() != a.dim()) throw std::invalid_argument("mix_and_covariance: shape mismatch");
  if (s.rows() < 2) throw std::invalid_argument("mix_and_covariance: need at least 2 samples");
  Matrix x = s * a.entries().transpose();
  CovarianceMatrix cov = empirical_covariance(x);
  Dataset data{std::move(x), a, s, gaussian_ratio};
  return SimulatedData{std::move(data), std::move(cov)};
}

}  // namespace sparseica
