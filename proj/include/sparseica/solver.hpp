#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "sparseica/lbfgs.hpp"
#include "sparseica/model.hpp"
#include "sparseica/objective.hpp"
#include "sparseica/types.hpp"

namespace sparseica {

enum class Method { Decomposition, Likelihood };

/// Knobs of the quadratic-penalty estimation loop. Decomposition defaults
/// use c1 = 1e-5 and MCP (1, 40); likelihood defaults use c1 = 1e-2 and
/// MCP (0.1, 10). beta = 1.5, 250 inner iterations, 125 outer iterations,
/// 30 restarts with entries drawn from [-0.1, 0.1], and a 0.01 weight
/// threshold are shared.
struct SolverConfig {
  Method method = Method::Decomposition;
  double c1 = 1e-5;
  double beta = 1.5;
  int k_max = 125;
  double eps1 = 1e-8;  // residual tolerance (decomposition)
  double eps2 = 1e-8;  // g tolerance (both methods)
  int inner_iters = 250;
  int restarts = 30;
  double init_scale = 0.1;
  McpParams mcp{1.0, 40.0};
  double threshold = 0.01;
  bool use_g_constraint = true;
  double ridge = 0.0;  // optional regularized covariance Sigma + ridge * I
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = hardware concurrency

  static SolverConfig decomposition_defaults() { return SolverConfig{}; }

  static SolverConfig likelihood_defaults() {
    SolverConfig cfg;
    cfg.method = Method::Likelihood;
    cfg.c1 = 1e-2;
    cfg.mcp = McpParams{0.1, 10.0};
    return cfg;
  }

  void validate() const {
    if (!(c1 > 0.0)) throw std::invalid_argument("solver: c1 must be > 0");
    if (!(beta > 1.0)) throw std::invalid_argument("solver: beta must be > 1");
    if (k_max < 1) throw std::invalid_argument("solver: k_max must be >= 1");
    if (!(eps1 > 0.0) || !(eps2 > 0.0)) {
      throw std::invalid_argument("solver: tolerances must be > 0");
    }
    if (inner_iters < 1) throw std::invalid_argument("solver: inner_iters must be >= 1");
    if (restarts < 1) throw std::invalid_argument("solver: restarts must be >= 1");
    if (!(init_scale > 0.0)) throw std::invalid_argument("solver: init_scale must be > 0");
    if (threshold < 0.0) throw std::invalid_argument("solver: threshold must be >= 0");
    if (ridge < 0.0) throw std::invalid_argument("solver: ridge must be >= 0");
  }
};

struct OuterTrace {
  int k = 0;
  double penalty_coeff = 0.0;
  double objective = 0.0;
  double residual = 0.0;  // ||A A^T - Sigma||_F^2
  double g_value = 0.0;
};

struct Feasibility {
  double residual = 0.0;
  double g_value = 0.0;
  bool feasible = false;
};

/// Estimate plus diagnostics of one solve. a_hat is thresholded; the
/// feasibility numbers refer to the unthresholded final iterate, which is
/// what the penalty loop's break test saw.
struct SolveResult {
  MixingMatrix a_hat;
  Feasibility feasibility;
  double objective = 0.0;
  double score = 0.0;
  int restarts_tried = 0;
  std::vector<OuterTrace> trace;
};

namespace detail {

inline Matrix threshold_entries(const Matrix& a, double threshold) {
  Matrix out = a;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      if (std::abs(out(i, j)) <= threshold) out(i, j) = 0.0;
    }
  }
  return out;
}

struct RestartOutcome {
  bool failed = true;  // NaN/Inf encountered; no usable iterate
  Matrix a_thresholded;
  Feasibility feasibility;
  double objective = 0.0;
  double score = 0.0;
  std::vector<OuterTrace> trace;
};

template <typename Objective>
RestartOutcome run_penalty_restart(Objective&& make_objective, const Matrix& sigma,
                                   const SolverConfig& cfg, std::uint64_t restart_seed) {
  const int n = static_cast<int>(sigma.rows());
  std::mt19937_64 rng(restart_seed);
  std::uniform_real_distribution<double> unif(-cfg.init_scale, cfg.init_scale);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = unif(rng);
  }

  RestartOutcome out;
  double c = cfg.c1;
  for (int k = 1; k <= cfg.k_max; ++k) {
    auto objective = make_objective(c);
    try {
      a = lbfgs_minimize(objective, a, cfg.inner_iters);
    } catch (const NumericError&) {
      out.failed = true;
      return out;
    }
    Matrix grad_unused(n, n);
    const double obj = objective(a, grad_unused);
    const double residual = (a * a.transpose() - sigma).squaredNorm();
    const double gval = g_eval(a).value;
    out.trace.push_back({k, c, obj, residual, gval});
    out.objective = obj;
    out.feasibility.residual = residual;
    out.feasibility.g_value = gval;
    const bool g_ok = !cfg.use_g_constraint || gval < cfg.eps2;
    const bool ok =
        (cfg.method == Method::Decomposition) ? (residual < cfg.eps1 && g_ok) : g_ok;
    if (ok) {
      out.feasibility.feasible = true;
      break;
    }
    c *= cfg.beta;
  }
  out.failed = false;
  out.a_thresholded = threshold_entries(a, cfg.threshold);
  return out;
}

/// Runs fn(r) for r in [0, count) on a small worker pool. Results land in an
/// index-stable vector, so the reduction order does not depend on
/// scheduling.
template <typename Fn>
void parallel_for_index(int count, int threads, Fn&& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (int r = 0; r < count; ++r) fn(r);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int r = next.fetch_add(1); r < count; r = next.fetch_add(1)) fn(r);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Picks the final estimate among restart candidates. Likelihood: smallest
/// score (BIC) among feasible candidates. Decomposition: among candidates
/// meeting both tolerances, fewest nonzeros after thresholding, ties broken
/// by smaller residual. When no candidate is feasible the least-violating
/// one is returned still flagged infeasible.
inline SolveResult select_model(const std::vector<SolveResult>& candidates,
                                const CovarianceMatrix& /*sigma_bar*/, Method method) {
  if (candidates.empty()) {
    throw std::invalid_argument("select_model: empty candidate list");
  }
  const SolveResult* best = nullptr;
  for (const auto& cand : candidates) {
    if (!cand.feasibility.feasible) continue;
    if (best == nullptr) {
      best = &cand;
      continue;
    }
    if (method == Method::Likelihood) {
      if (cand.score < best->score) best = &cand;
    } else {
      if (cand.score < best->score ||
          (cand.score == best->score &&
           cand.feasibility.residual < best->feasibility.residual)) {
        best = &cand;
      }
    }
  }
  if (best == nullptr) {
    // Least-violating fallback.
    for (const auto& cand : candidates) {
      if (best == nullptr ||
          cand.feasibility.residual + cand.feasibility.g_value <
              best->feasibility.residual + best->feasibility.g_value) {
        best = &cand;
      }
    }
  }
  return *best;
}

namespace detail {

inline SolveResult solve_impl(const CovarianceMatrix& sigma_bar, const SolverConfig& cfg) {
  cfg.validate();
  const int n = sigma_bar.dim();
  const Matrix sigma_eff_raw = sigma_bar.sigma() + cfg.ridge * Matrix::Identity(n, n);
  const CovarianceMatrix sigma_eff(sigma_eff_raw, sigma_bar.sample_count());
  if (cfg.method == Method::Likelihood && sigma_bar.sample_count() < n) {
    throw std::invalid_argument(
        "solve: likelihood method needs a covariance estimated from at least n samples");
  }

  auto make_objective = [&](double c) {
    return [&, c](const Matrix& x, Matrix& grad) -> double {
      ObjectiveEval pen = mcp_eval(x, cfg.mcp);
      double value = pen.value;
      grad = pen.gradient;
      if (cfg.method == Method::Decomposition) {
        ObjectiveEval res = decomposition_residual_eval(x, sigma_eff_raw);
        value += 0.5 * c * res.value;
        grad += (0.5 * c) * res.gradient;
      } else {
        try {
          ObjectiveEval nll = nll_eval(x, sigma_eff, /*averaged=*/true);
          value += nll.value;
          grad += nll.gradient;
        } catch (const NumericError&) {
          return std::numeric_limits<double>::infinity();
        }
      }
      if (cfg.use_g_constraint) {
        ObjectiveEval ge = g_eval(x);
        value += 0.5 * c * ge.value * ge.value;
        grad += (c * ge.value) * ge.gradient;
      }
      return value;
    };
  };

  std::vector<detail::RestartOutcome> outcomes(cfg.restarts);
  detail::parallel_for_index(cfg.restarts, cfg.threads, [&](int r) {
    outcomes[r] = detail::run_penalty_restart(make_objective, sigma_eff_raw, cfg,
                                              cfg.seed + static_cast<std::uint64_t>(r));
  });

  std::vector<SolveResult> candidates;
  candidates.reserve(outcomes.size());
  for (auto& oc : outcomes) {
    if (oc.failed) continue;
    double score;
    if (cfg.method == Method::Likelihood) {
      try {
        score = bic_score(MixingMatrix(oc.a_thresholded), sigma_eff, 0.0);
      } catch (const NumericError&) {
        score = std::numeric_limits<double>::infinity();
      }
    } else {
      score = static_cast<double>(support_of(oc.a_thresholded, 0.0).count());
    }
    candidates.push_back(SolveResult{MixingMatrix(oc.a_thresholded), oc.feasibility,
                                     oc.objective, score, cfg.restarts,
                                     std::move(oc.trace)});
  }
  if (candidates.empty()) {
    throw NumericError("solve: every restart failed with a non-finite iterate");
  }
  return select_model(candidates, sigma_bar, cfg.method);
}

}  // namespace detail

/// Quadratic-penalty loop on the decomposition program: minimize
/// rho(A) + (c_k/2) ||A A^T - Sigma||_F^2 + (c_k/2) g(A)^2, warm-started
/// across outer iterations, c_{k+1} = beta c_k, with seeded random restarts
/// and threshold + model selection at the end.
inline SolveResult solve_decomposition(const CovarianceMatrix& sigma_bar,
                                       const SolverConfig& cfg) {
  if (cfg.method != Method::Decomposition) {
    throw std::invalid_argument("solve_decomposition: config method mismatch");
  }
  return detail::solve_impl(sigma_bar, cfg);
}

/// Same loop on the averaged Gaussian likelihood: minimize
/// L(A)/T + rho(A) + (c_k/2) g(A)^2, breaking once g(A_k) < eps.
inline SolveResult solve_likelihood(const CovarianceMatrix& sigma_bar,
                                    const SolverConfig& cfg) {
  if (cfg.method != Method::Likelihood) {
    throw std::invalid_argument("solve_likelihood: config method mismatch");
  }
  return detail::solve_impl(sigma_bar, cfg);
}

}  // namespace sparseica
