#include <doctest.h>

#include <algorithm>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "oracles/coordinate_descent.hpp"
#include "sparsereg/experiments.hpp"
#include "sparsereg/solvers.hpp"

using namespace sparsereg;

namespace {

Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal;
  Matrix M(rows, cols);
  for (Index i = 0; i < M.size(); ++i) M.data()[i] = normal(rng);
  return M;
}

Matrix orthonormal_columns(std::mt19937_64& rng, Index rows, Index cols) {
  return Eigen::HouseholderQR<Matrix>(random_matrix(rng, rows, cols)).householderQ() *
         Matrix::Identity(rows, cols);
}

}  // namespace

TEST_CASE("lasso path on an orthonormal design is soft thresholding") {
  std::mt19937_64 rng(3);
  const Matrix Q = orthonormal_columns(rng, 30, 10);
  const Vector y = random_matrix(rng, 30, 1);
  const auto path = lars_lasso_path(y, Q, StopRule::full_path());
  CHECK(path.termination == Termination::path_end);
  REQUIRE(path.steps.size() >= 2);
  const Vector z = Q.transpose() * y;
  for (const auto& step : path.steps) {
    const Vector expected = soft_threshold(z, step.penalty / 2.0);
    CAPTURE(step.penalty);
    CHECK((step.coefficients.values() - expected).cwiseAbs().maxCoeff() < 1e-10);
  }
  // orthonormal path never drops a variable: one entry per step
  for (std::size_t s = 1; s < path.steps.size(); ++s) {
    CHECK(path.steps[s].support.size() == s);
  }
  CHECK(path.steps.back().penalty == 0.0);
}

TEST_CASE("single feature path") {
  Matrix X(3, 1);
  X << 1, 2, 2;
  const Vector y = 2.0 * X.col(0);
  const auto path = lars_lasso_path(y, X, StopRule::full_path());
  REQUIRE(path.steps.size() == 2);
  CHECK(path.steps[0].support.empty());
  // the entering penalty is twice the largest unit-norm correlation
  CHECK(path.steps[0].penalty == doctest::Approx(2.0 * 2.0 * X.col(0).norm()));
  CHECK(path.steps[1].penalty == 0.0);
  CHECK(path.steps[1].coefficients[0] == doctest::Approx(2.0));
  CHECK(path.steps[1].residual_norm2 < 1e-20);
}

TEST_CASE("lasso path matches coordinate descent at every knot") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix X = random_matrix(rng, 5, 8);
    const Vector y = random_matrix(rng, 5, 1);
    const auto path = lars_lasso_path(y, X, StopRule::full_path());
    for (const auto& step : path.steps) {
      if (step.penalty <= 0) continue;  // the minimiser is not unique at zero when p > n
      const Vector cd = oracle::lasso_coordinate_descent(y, X, step.penalty);
      CAPTURE(trial);
      CAPTURE(step.penalty);
      CHECK((step.coefficients.values() - cd).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("lasso path satisfies optimality conditions") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix X = random_matrix(rng, 20, 40);
    const Vector y = random_matrix(rng, 20, 1);
    const auto path = lars_lasso_path(y, X, StopRule::full_path());
    for (const auto& step : path.steps) CHECK(lasso_kkt_violation(y, X, step) < 1e-8);
    for (std::size_t s = 1; s < path.steps.size(); ++s) {
      CHECK(path.steps[s].penalty <= path.steps[s - 1].penalty);
      CHECK(path.steps[s].residual_norm2 <= path.steps[s - 1].residual_norm2 + 1e-12);
    }
  }
}

TEST_CASE("lasso path on degenerate exact-cover designs") {
  for (Index n : {9, 12}) {
    const auto inst = gen_exact_cover(n, CoverMode::all_triples, 4);
    const Matrix X = inst.design();
    const auto path = lars_lasso_path(inst.y, X, StopRule::residual(0.25));
    for (const auto& step : path.steps) CHECK(lasso_kkt_violation(inst.y, X, step) < 1e-8);
    CHECK(path.termination == Termination::residual_below);
  }
}

TEST_CASE("stop rules") {
  std::mt19937_64 rng(2);
  const Matrix X = random_matrix(rng, 30, 12);
  const Vector y = random_matrix(rng, 30, 1);
  const auto capped = lars_lasso_path(y, X, StopRule::steps(3));
  CHECK(capped.termination == Termination::max_steps);
  CHECK(capped.steps.size() == 4);  // the empty model plus three steps
  const auto full = lars_lasso_path(y, X, StopRule::full_path());
  const double target = std::sqrt(full.steps[3].residual_norm2) + 1e-9;
  const auto by_residual = lars_lasso_path(y, X, StopRule::residual(target));
  CHECK(by_residual.termination == Termination::residual_below);
  CHECK(std::sqrt(by_residual.steps.back().residual_norm2) < target);
  CHECK(design_fingerprint(X) == full.design_id);
  Matrix X2 = X;
  X2(0, 0) += 1e-9;
  CHECK(design_fingerprint(X2) != design_fingerprint(X));
}

TEST_CASE("forward stepwise on an orthonormal design enters by |x'y|") {
  std::mt19937_64 rng(13);
  const Matrix Q = orthonormal_columns(rng, 25, 8);
  const Vector y = random_matrix(rng, 25, 1);
  const auto path = forward_stepwise(y, Q, StopRule::full_path());
  const Vector z = (Q.transpose() * y).cwiseAbs();
  std::vector<Index> order(8);
  for (Index j = 0; j < 8; ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return z[a] > z[b]; });
  REQUIRE(path.steps.size() == 9);
  for (std::size_t s = 1; s < path.steps.size(); ++s) {
    const auto& sup = path.steps[s].support;
    CHECK(std::find(sup.begin(), sup.end(), order[s - 1]) != sup.end());
    CHECK(sup.size() == s);
  }
}

TEST_CASE("forward stepwise takes the largest one-step SSE reduction") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix X = random_matrix(rng, 20, 10);
    const Vector y = random_matrix(rng, 20, 1);
    const auto path = forward_stepwise(y, X, StopRule::steps(5));
    for (std::size_t s = 1; s < path.steps.size(); ++s) {
      const Support& prev = path.steps[s - 1].support;
      double best = std::numeric_limits<double>::infinity();
      for (Index j = 0; j < X.cols(); ++j) {
        if (std::find(prev.begin(), prev.end(), j) != prev.end()) continue;
        Support cand = prev;
        cand.push_back(j);
        std::sort(cand.begin(), cand.end());
        best = std::min(best, ls_refit(y, X, cand).rss);
      }
      CHECK(path.steps[s].residual_norm2 == doctest::Approx(best).epsilon(1e-9));
      CHECK(path.steps[s].penalty == 0.0);
    }
  }
}

TEST_CASE("forward stepwise finds the planted cover on a small instance") {
  const auto inst = gen_exact_cover(9, CoverMode::all_triples, 1);
  const auto path = forward_stepwise(inst.y, inst.design(), StopRule::residual(0.25));
  CHECK(path.termination == Termination::residual_below);
  CHECK(path.steps.back().support.size() == 3);
}

TEST_CASE("forward stepwise stops when nothing correlates with the residual") {
  Matrix X = Matrix::Identity(4, 3);
  Vector y(4);
  y << 1, 0, 0, 0;
  const auto path = forward_stepwise(y, X, StopRule::full_path());
  CHECK(path.termination == Termination::no_descent);
  CHECK(path.steps.back().support == Support{0});
  CHECK(path.steps.back().residual_norm2 < 1e-24);
}

TEST_CASE("solvers reject mismatched shapes and zero columns") {
  Matrix Z = Matrix::Identity(3, 2);
  Z.col(1).setZero();
  CHECK_THROWS_AS(lars_lasso_path(Vector::Ones(3), Z, StopRule::full_path()), std::invalid_argument);
  CHECK_THROWS_AS(forward_stepwise(Vector::Ones(3), Z, StopRule::full_path()), std::invalid_argument);
  CHECK_THROWS_AS(lars_lasso_path(Vector::Ones(3), Matrix::Ones(4, 2), StopRule::full_path()),
                  std::invalid_argument);
  CHECK_THROWS_AS(forward_stepwise(Vector::Ones(3), Matrix::Ones(4, 2), StopRule::full_path()),
                  std::invalid_argument);
}
