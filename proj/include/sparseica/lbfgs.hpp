#pragma once

#include <cmath>
#include <deque>
#include <limits>
#include <utility>
#include <vector>

#include "sparseica/types.hpp"

namespace sparseica {

struct LbfgsOptions {
  int memory = 8;
  double grad_tol_abs = 1e-6;
  double grad_tol_rel = 1e-8;
  int max_line_search = 50;
  double armijo_c = 1e-4;
};

namespace detail {

inline double mat_dot(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b).sum(); }

}  // namespace detail

/// L-BFGS over matrix-valued variables with a backtracking Armijo line
/// search. F has signature double(const Matrix& x, Matrix& grad). Stops when
/// ||grad|| <= max(grad_tol_abs, grad_tol_rel * (1 + |f|)) or after
/// max_iters accepted iterations; accepted objective values are monotone
/// non-increasing. Non-finite trial values are rejected by the line search;
/// a non-finite value or gradient at an accepted point throws NumericError
/// so the caller can abandon the current restart.
template <typename F>
Matrix lbfgs_minimize(F&& f, Matrix x, int max_iters, const LbfgsOptions& opt = {}) {
  Matrix g(x.rows(), x.cols());
  double fx = f(x, g);
  if (!std::isfinite(fx) || !g.allFinite()) {
    throw NumericError("lbfgs: objective not finite at the initial point");
  }

  auto converged = [&]() {
    return g.norm() <= std::max(opt.grad_tol_abs, opt.grad_tol_rel * (1.0 + std::abs(fx)));
  };
  if (converged()) return x;

  std::deque<Matrix> s_hist;
  std::deque<Matrix> y_hist;
  std::deque<double> rho_hist;
  double gamma = 1.0;
  bool first_step = true;

  Matrix g_new(x.rows(), x.cols());
  for (int iter = 0; iter < max_iters; ++iter) {
    // Two-loop recursion for d = -H g.
    Matrix d = g;
    const int m = static_cast<int>(s_hist.size());
    std::vector<double> alpha(m, 0.0);
    for (int i = m - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * detail::mat_dot(s_hist[i], d);
      d -= alpha[i] * y_hist[i];
    }
    d *= gamma;
    for (int i = 0; i < m; ++i) {
      const double beta = rho_hist[i] * detail::mat_dot(y_hist[i], d);
      d += (alpha[i] - beta) * s_hist[i];
    }
    d = -d;

    double dg = detail::mat_dot(d, g);
    if (!(dg < 0.0) || !d.allFinite()) {
      // Degenerate direction: fall back to steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      gamma = 1.0;
      d = -g;
      dg = -g.squaredNorm();
    }

    double step = first_step ? std::min(1.0, 1.0 / g.norm()) : 1.0;
    bool accepted = false;
    double f_new = fx;
    Matrix x_new;
    for (int ls = 0; ls < opt.max_line_search; ++ls) {
      x_new = x + step * d;
      f_new = f(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= fx + opt.armijo_c * step * dg) {
        accepted = true;
        break;
      }
      double next = 0.5 * step;
      if (std::isfinite(f_new)) {
        // Minimizer of the quadratic through f(x), dg, f(x + step d).
        const double denom = 2.0 * (f_new - fx - step * dg);
        if (denom > 0.0) {
          const double t = -dg * step * step / denom;
          if (t > 0.05 * step && t < 0.95 * step) next = t;
        }
      }
      step = next;
      if (step < 1e-20) break;
    }

    if (!accepted) {
      if (!s_hist.empty()) {
        // Quasi-Newton direction unusable; retry from steepest descent.
        s_hist.clear();
        y_hist.clear();
        rho_hist.clear();
        gamma = 1.0;
        continue;
      }
      return x;  // no decrease along -g: numerically stationary
    }
    first_step = false;
    if (!g_new.allFinite()) {
      throw NumericError("lbfgs: gradient not finite at an accepted point");
    }

    Matrix s = x_new - x;
    Matrix y = g_new - g;
    const double sy = detail::mat_dot(s, y);
    if (sy > 1e-10 * s.norm() * y.norm()) {
      gamma = sy / y.squaredNorm();
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opt.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x = std::move(x_new);
    g.swap(g_new);
    fx = f_new;
    if (converged()) break;
  }
  return x;
}

}  // namespace sparseica
