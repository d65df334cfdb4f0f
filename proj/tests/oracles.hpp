// Test-only oracles: brute-force searches, finite differences, and
// independent reimplementations used to freeze expected values. Nothing here
// may call the implementation path it is checking.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "sparseica/types.hpp"

namespace oracle {

using sparseica::BoolGrid;
using sparseica::Matrix;
using sparseica::SupportPattern;
using sparseica::Vector;

/// Central finite differences with per-entry step 1e-6 * (1 + |a_ij|).
template <typename F>
Matrix central_difference_gradient(F&& f, const Matrix& a) {
  Matrix g(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double h = 1e-6 * (1.0 + std::abs(a(i, j)));
      Matrix ap = a;
      Matrix am = a;
      ap(i, j) += h;
      am(i, j) -= h;
      g(i, j) = (f(ap) - f(am)) / (2.0 * h);
    }
  }
  return g;
}

inline double gradient_rel_error(const Matrix& analytic, const Matrix& numeric) {
  return (analytic - numeric).norm() / (1.0 + analytic.norm());
}

/// Exists sigma with pattern(sigma(i), sigma(j)) zero above the diagonal?
inline bool simultaneous_lower_triangularizable(const SupportPattern& xi) {
  const int n = xi.dim();
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = i + 1; j < n && ok; ++j) {
        if (xi.at(sigma[i], sigma[j])) ok = false;
      }
    }
    if (ok) return true;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return false;
}

/// Exists (row, col) permutation pair making the pattern lower triangular?
inline bool two_sided_lower_triangularizable(const SupportPattern& xi) {
  const int n = xi.dim();
  std::vector<int> rows(n), cols(n);
  std::iota(rows.begin(), rows.end(), 0);
  do {
    std::iota(cols.begin(), cols.end(), 0);
    do {
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        for (int j = i + 1; j < n && ok; ++j) {
          if (xi.at(rows[i], cols[j])) ok = false;
        }
      }
      if (ok) return true;
    } while (std::next_permutation(cols.begin(), cols.end()));
  } while (std::next_permutation(rows.begin(), rows.end()));
  return false;
}

/// Set-based transcription of the union-vs-overlap rank inequality, kept
/// independent of the bitmask implementation.
inline bool union_overlap_dominance_reference(const SupportPattern& xi) {
  const int n = xi.dim();
  std::vector<std::set<int>> cols(n);
  for (int j = 0; j < n; ++j) {
    for (int r = 0; r < n; ++r) {
      if (xi.at(r, j)) cols[j].insert(r);
    }
  }
  for (unsigned subset = 1; subset < (1u << n); ++subset) {
    std::vector<int> members;
    for (int j = 0; j < n; ++j) {
      if (subset & (1u << j)) members.push_back(j);
    }
    if (members.size() <= 1) continue;
    std::set<int> uni;
    std::set<int> shared = cols[members[0]];
    for (int j : members) {
      uni.insert(cols[j].begin(), cols[j].end());
      std::set<int> keep;
      for (int r : shared) {
        if (cols[j].count(r)) keep.insert(r);
      }
      shared = std::move(keep);
    }
    const int rank = shared.empty() ? 0 : 1;  // all-ones block has rank one
    for (int j : members) {
      if (!(static_cast<int>(uni.size()) - rank > static_cast<int>(cols[j].size()))) {
        return false;
      }
    }
  }
  return true;
}

/// Independent transcription of the permutation-invariant distance on
/// P = a_hat^{-1} a_true, written with plain loops.
inline double amari_reference(const Matrix& a_hat, const Matrix& a_true) {
  const int n = static_cast<int>(a_hat.rows());
  const Matrix p = a_hat.fullPivLu().solve(a_true);
  double rows = 0.0;
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
      const double v = std::abs(p(i, j));
      sum += v;
      if (v > best) best = v;
    }
    rows += sum / best - 1.0;
  }
  double cols = 0.0;
  for (int j = 0; j < n; ++j) {
    double sum = 0.0;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = std::abs(p(i, j));
      sum += v;
      if (v > best) best = v;
    }
    cols += sum / best - 1.0;
  }
  return (rows + cols) / (2.0 * n);
}

// ---- random generators ----

inline SupportPattern random_pattern(int n, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution cell(density);
  BoolGrid mask(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) mask(i, j) = cell(rng);
  }
  return SupportPattern(mask);
}

/// Random pattern with a random permutation diagonal forced on, so a perfect
/// matching always exists.
inline SupportPattern random_nonsingular_pattern(int n, double density, std::mt19937_64& rng) {
  SupportPattern base = random_pattern(n, density, rng);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  BoolGrid mask = base.mask();
  for (int i = 0; i < n; ++i) mask(i, perm[i]) = true;
  return SupportPattern(mask);
}

inline double signed_weight(std::mt19937_64& rng, double lo = 0.2, double hi = 0.8) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::bernoulli_distribution flip(0.5);
  const double m = mag(rng);
  return flip(rng) ? -m : m;
}

inline Matrix instantiate(const SupportPattern& xi, std::mt19937_64& rng) {
  const int n = xi.dim();
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (xi.at(i, j)) a(i, j) = signed_weight(rng);
    }
  }
  return a;
}

inline SupportPattern star3_pattern() {
  BoolGrid m(3, 3);
  m << true, false, false,
       true, true, false,
       true, false, true;
  return SupportPattern(m);
}

inline SupportPattern ring3_pattern() {
  BoolGrid m(3, 3);
  m << true, false, true,
       true, true, false,
       false, true, true;
  return SupportPattern(m);
}

/// Graphical example: four observations reading sources {1,3}, {2,3},
/// {3,4}, {4}; satisfies pairwise column variability.
inline SupportPattern chain_share_pattern() {
  BoolGrid m(4, 4);
  m << true, false, true, false,
       false, true, true, false,
       false, false, true, true,
       false, false, false, true;
  return SupportPattern(m);
}

/// Denser variability example: one global source plus three overlapping
/// triples.
inline SupportPattern dense_variability_pattern() {
  BoolGrid m(4, 4);
  m << true, false, false, false,
       true, true, false, true,
       true, true, true, false,
       true, false, true, true;
  return SupportPattern(m);
}

/// Random DAG weights: strictly lower triangular under a random relabeling,
/// edge weights +-[0.2, 0.8], noise variances in [0.5, 2].
inline std::pair<Matrix, Vector> random_dag_model(int n, double edge_prob,
                                                  std::mt19937_64& rng) {
  std::bernoulli_distribution edge(edge_prob);
  std::uniform_real_distribution<double> om(0.5, 2.0);
  std::vector<int> relabel(n);
  std::iota(relabel.begin(), relabel.end(), 0);
  std::shuffle(relabel.begin(), relabel.end(), rng);
  Matrix b = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      if (edge(rng)) b(relabel[i], relabel[j]) = signed_weight(rng);
    }
  }
  Vector omega(n);
  for (int i = 0; i < n; ++i) omega(i) = om(rng);
  return {std::move(b), std::move(omega)};
}

}  // namespace oracle
