#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "sparseica/model.hpp"
#include "sparseica/solver.hpp"

using namespace sparseica;

TEST_CASE("inner minimizer") {
  SECTION("convex quadratic lands on the target") {
    Matrix c(3, 3);
    c << 1, -2, 0.5, 3, 0, 1, -1, 2, 4;
    auto f = [&](const Matrix& x, Matrix& grad) {
      grad = 2.0 * (x - c);
      return (x - c).squaredNorm();
    };
    Matrix x = lbfgs_minimize(f, Matrix::Zero(3, 3), 200);
    REQUIRE((x - c).cwiseAbs().maxCoeff() < 1e-6);
  }

  SECTION("embedded Rosenbrock valley") {
    // a(0,0), a(1,1) are the Rosenbrock pair; the off-diagonal is quadratic.
    auto f = [](const Matrix& a, Matrix& grad) {
      const double x = a(0, 0);
      const double y = a(1, 1);
      grad = Matrix::Zero(2, 2);
      grad(0, 0) = -2.0 * (1.0 - x) - 400.0 * x * (y - x * x);
      grad(1, 1) = 200.0 * (y - x * x);
      grad(0, 1) = 2.0 * a(0, 1);
      grad(1, 0) = 2.0 * a(1, 0);
      const double r = (1.0 - x) * (1.0 - x) + 100.0 * (y - x * x) * (y - x * x);
      return r + a(0, 1) * a(0, 1) + a(1, 0) * a(1, 0);
    };
    Matrix x0(2, 2);
    x0 << -1.2, 0.3, -0.4, 1.0;
    Matrix x = lbfgs_minimize(f, x0, 250);
    REQUIRE(std::abs(x(0, 0) - 1.0) < 1e-5);
    REQUIRE(std::abs(x(1, 1) - 1.0) < 1e-5);
    REQUIRE(std::abs(x(0, 1)) < 1e-5);
  }

  SECTION("accepted values never increase") {
    std::mt19937_64 rng(3);
    Matrix a0 = Matrix::Random(4, 4);
    Matrix root = Matrix::Random(4, 4);
    const Matrix sigma = root * root.transpose();
    double last = std::numeric_limits<double>::infinity();
    auto f = [&](const Matrix& x, Matrix& grad) {
      ObjectiveEval e = decomposition_residual_eval(x, sigma);
      grad = e.gradient;
      return e.value;
    };
    Matrix x = a0;
    for (int chunk = 0; chunk < 5; ++chunk) {
      x = lbfgs_minimize(f, x, 10);
      Matrix g(4, 4);
      const double fx = f(x, g);
      REQUIRE(fx <= last + 1e-15);
      last = fx;
    }
  }

  SECTION("non-finite start is a restart-local failure") {
    auto f = [](const Matrix& x, Matrix& grad) {
      grad = Matrix::Zero(2, 2);
      return std::numeric_limits<double>::quiet_NaN();
    };
    REQUIRE_THROWS_AS(lbfgs_minimize(f, Matrix::Zero(2, 2), 10), NumericError);
  }
}

namespace {

SolverConfig quick_decomposition(std::uint64_t seed, int restarts = 8) {
  SolverConfig cfg = SolverConfig::decomposition_defaults();
  cfg.restarts = restarts;
  cfg.seed = seed;
  return cfg;
}

SolverConfig quick_likelihood(std::uint64_t seed, int restarts = 8) {
  SolverConfig cfg = SolverConfig::likelihood_defaults();
  cfg.restarts = restarts;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("decomposition solve") {
  SECTION("identity covariance recovers a signed permutation of the identity") {
    CovarianceMatrix sigma(Matrix::Identity(3, 3));
    SolveResult result = solve_decomposition(sigma, quick_decomposition(1));
    REQUIRE(result.feasibility.feasible);
    REQUIRE(signed_perm_equivalent(result.a_hat, MixingMatrix::identity(3), 5e-2).has_value());
  }

  SECTION("population covariance of the star support is recovered") {
    std::mt19937_64 rng(5);
    Matrix truth = oracle::instantiate(oracle::star3_pattern(), rng);
    CovarianceMatrix sigma(truth * truth.transpose());
    SolveResult result = solve_decomposition(sigma, quick_decomposition(2, 12));
    REQUIRE(result.feasibility.feasible);
    REQUIRE(result.feasibility.residual < 1e-6);
    REQUIRE(signed_perm_equivalent(result.a_hat, MixingMatrix(truth), 5e-2).has_value());
  }

  SECTION("penalty coefficients grow geometrically and violations trend down") {
    std::mt19937_64 rng(7);
    Matrix truth = oracle::instantiate(oracle::star3_pattern(), rng);
    CovarianceMatrix sigma(truth * truth.transpose());
    SolveResult result = solve_decomposition(sigma, quick_decomposition(3, 4));
    REQUIRE(result.trace.size() >= 2);
    for (std::size_t k = 1; k < result.trace.size(); ++k) {
      REQUIRE(result.trace[k].penalty_coeff == result.trace[k - 1].penalty_coeff * 1.5);
    }
    int down = 0;
    for (std::size_t k = 1; k < result.trace.size(); ++k) {
      if (result.trace[k].residual <= result.trace[k - 1].residual) ++down;
    }
    REQUIRE(down * 10 >= static_cast<int>(result.trace.size() - 1) * 9);
  }

  SECTION("method mismatch is an input error") {
    CovarianceMatrix sigma(Matrix::Identity(2, 2));
    REQUIRE_THROWS_AS(solve_decomposition(sigma, quick_likelihood(0)), std::invalid_argument);
  }
}

TEST_CASE("likelihood solve") {
  SECTION("identity covariance at large T") {
    CovarianceMatrix sigma(Matrix::Identity(3, 3), 10000);
    SolveResult result = solve_likelihood(sigma, quick_likelihood(1));
    REQUIRE(result.feasibility.feasible);
    REQUIRE(signed_perm_equivalent(result.a_hat, MixingMatrix::identity(3), 5e-2).has_value());
  }

  SECTION("population star support with synthetic count") {
    std::mt19937_64 rng(11);
    Matrix truth = oracle::instantiate(oracle::star3_pattern(), rng);
    CovarianceMatrix sigma(truth * truth.transpose(), 1000000);
    SolveResult result = solve_likelihood(sigma, quick_likelihood(2, 12));
    REQUIRE(result.feasibility.feasible);
    REQUIRE(result.feasibility.g_value < 1e-8);
    REQUIRE(signed_perm_equivalent(result.a_hat, MixingMatrix(truth), 5e-2).has_value());
  }

  SECTION("likelihood requires a sample count") {
    CovarianceMatrix population(Matrix::Identity(3, 3), 0);
    REQUIRE_THROWS_AS(solve_likelihood(population, quick_likelihood(0)),
                      std::invalid_argument);
  }

  SECTION("ablation without the g constraint still runs and fits the covariance") {
    std::mt19937_64 rng(13);
    Matrix truth = oracle::instantiate(oracle::star3_pattern(), rng);
    CovarianceMatrix sigma(truth * truth.transpose(), 1000000);
    SolverConfig cfg = quick_likelihood(3, 4);
    cfg.use_g_constraint = false;
    SolveResult result = solve_likelihood(sigma, cfg);
    // One outer iteration suffices: nothing is being tightened.
    REQUIRE(result.trace.size() == 1);
    const Matrix fit = result.a_hat.entries() * result.a_hat.entries().transpose();
    REQUIRE((fit - sigma.sigma()).norm() < 0.3 * sigma.sigma().norm());
  }
}

TEST_CASE("model selection") {
  CovarianceMatrix sigma(Matrix::Identity(3, 3), 100);
  auto candidate = [&](double score, double residual, double g, bool feasible) {
    return SolveResult{MixingMatrix::identity(3), Feasibility{residual, g, feasible},
                       0.0, score, 1, {}};
  };

  SECTION("single candidate returns itself") {
    std::vector<SolveResult> one{candidate(5.0, 1e-9, 1e-9, true)};
    REQUIRE(select_model(one, sigma, Method::Likelihood).score == 5.0);
  }

  SECTION("sparser feasible candidate wins the decomposition rule") {
    std::vector<SolveResult> list{candidate(7.0, 1e-9, 1e-9, true),
                                  candidate(5.0, 2e-9, 1e-9, true),
                                  candidate(5.0, 1e-10, 1e-9, true)};
    SolveResult chosen = select_model(list, sigma, Method::Decomposition);
    REQUIRE(chosen.score == 5.0);
    REQUIRE(chosen.feasibility.residual == 1e-10);  // tie on count -> smaller residual
  }

  SECTION("feasible beats infeasible regardless of score") {
    std::vector<SolveResult> list{candidate(1.0, 5.0, 3.0, false),
                                  candidate(9.0, 1e-9, 1e-9, true)};
    REQUIRE(select_model(list, sigma, Method::Likelihood).score == 9.0);
  }

  SECTION("infeasible-only list returns the least violating flagged result") {
    std::vector<SolveResult> list{candidate(1.0, 5.0, 3.0, false),
                                  candidate(1.0, 0.5, 0.2, false)};
    SolveResult chosen = select_model(list, sigma, Method::Likelihood);
    REQUIRE_FALSE(chosen.feasibility.feasible);
    REQUIRE(chosen.feasibility.residual == 0.5);
  }

  SECTION("empty list is an input error") {
    std::vector<SolveResult> none;
    REQUIRE_THROWS_AS(select_model(none, sigma, Method::Likelihood), std::invalid_argument);
  }

  SECTION("BIC prefers the truth-supported candidate over a rotated denser one") {
    std::mt19937_64 rng(17);
    Matrix truth = oracle::instantiate(oracle::star3_pattern(), rng);
    CovarianceMatrix pop(truth * truth.transpose(), 100000);
    const double theta = 0.4;
    Matrix q = Matrix::Identity(3, 3);
    q(1, 1) = std::cos(theta);
    q(1, 2) = -std::sin(theta);
    q(2, 1) = std::sin(theta);
    q(2, 2) = std::cos(theta);
    const Matrix denser = truth * q;
    std::vector<SolveResult> list{
        SolveResult{MixingMatrix(truth), Feasibility{0.0, 0.0, true}, 0.0,
                    bic_score(MixingMatrix(truth), pop, 1e-9), 1, {}},
        SolveResult{MixingMatrix(denser), Feasibility{0.0, 0.0, true}, 0.0,
                    bic_score(MixingMatrix(denser), pop, 1e-9), 1, {}}};
    SolveResult chosen = select_model(list, pop, Method::Likelihood);
    REQUIRE((chosen.a_hat.entries() - truth).norm() < 1e-12);
  }
}

TEST_CASE("solves are deterministic and permutation covariant") {
  std::mt19937_64 rng(19);
  Matrix truth = oracle::instantiate(oracle::star3_pattern(), rng);
  CovarianceMatrix sigma(truth * truth.transpose());

  SECTION("same seed reproduces the result bit for bit") {
    SolveResult r1 = solve_decomposition(sigma, quick_decomposition(4, 6));
    SolveResult r2 = solve_decomposition(sigma, quick_decomposition(4, 6));
    REQUIRE(r1.a_hat.entries() == r2.a_hat.entries());
    REQUIRE(r1.feasibility.residual == r2.feasibility.residual);
    REQUIRE(r1.score == r2.score);
  }

  SECTION("observation permutation with column sign flips carries through") {
    std::vector<int> perm{2, 0, 1};
    Matrix p = Matrix::Zero(3, 3);
    for (int j = 0; j < 3; ++j) p(perm[j], j) = 1.0;
    Matrix d = Matrix::Identity(3, 3);
    d(1, 1) = -1.0;
    const Matrix permuted_truth = p * truth * d;
    CovarianceMatrix sigma_perm(permuted_truth * permuted_truth.transpose());

    SolveResult base = solve_decomposition(sigma, quick_decomposition(5, 12));
    SolveResult perm_run = solve_decomposition(sigma_perm, quick_decomposition(5, 12));
    REQUIRE(base.feasibility.feasible);
    REQUIRE(perm_run.feasibility.feasible);
    REQUIRE(signed_perm_equivalent(perm_run.a_hat,
                                   MixingMatrix(Matrix(p * base.a_hat.entries())), 5e-2)
                .has_value());
  }
}
