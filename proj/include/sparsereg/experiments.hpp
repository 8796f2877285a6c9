#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sparsereg/selection.hpp"
#include "sparsereg/solvers.hpp"

namespace sparsereg {

/// SplitMix64 finaliser; derives independent per-trial seeds from a master
/// seed and a counter so results do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter);

struct Dataset {
  Matrix X;
  Vector y;
};

struct SyntheticSpec {
  Index n = 100;  // rows in each of train and test
  Index p = 1000;
  Index k_true = 4;
  double rho = 0.0;  // pairwise feature correlation in [0, 1)
  CoefficientVector<double> beta_true;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on inconsistent fields.
  void validate() const;
};

/// Spec with k_true coefficients equal to `value` at seed-chosen positions.
SyntheticSpec make_synthetic_spec(Index n, Index p, Index k_true, double rho, double value,
                                  double noise_sd, std::uint64_t seed);

struct TrainTest {
  Dataset train;
  Dataset test;
};

/// Standard normal columns, equicorrelated through a shared factor
/// x_j = sqrt(rho) g + sqrt(1 - rho) e_j when rho > 0.
TrainTest gen_synthetic(const SyntheticSpec& spec);

/// x1 = z1 + eps z2, x2 = z1 - eps z2, spurious z_3.., y = (z1 + z2) / 2 + noise.
struct CollinearTrap {
  Dataset data;         // columns: x1, x2, then the spurious features
  Vector signal;        // y without noise
  double eps = 0;
  // Exact two-column representation of the signal on (x1, x2).
  std::array<double, 2> two_sparse{};
  // Coefficient on x2 of the one-column model y = x2 / eps as it is usually
  // quoted; recorded, not asserted (it does not reproduce the signal).
  double quoted_one_sparse_x2 = 0;
};

CollinearTrap gen_collinear_trap(Index p_spurious, double eps, Index n, std::uint64_t seed,
                                 double noise_sd = 1.0);

using Triple = std::array<Index, 3>;

enum class CoverMode { all_triples, random_p };

struct ExactCoverInstance {
  Index n = 0;
  std::vector<Triple> columns;  // rows covered by each column
  Support planted_cover;        // column indices of a disjoint cover
  Vector y;                     // all ones

  Matrix design() const;
};

/// all_triples enumerates every 3-subset of n rows (n <= 30); random_p plants
/// a disjoint cover and fills to p distinct triples. Column order is shuffled
/// by seed in both modes.
ExactCoverInstance gen_exact_cover(Index n, CoverMode mode, std::uint64_t seed, Index p = 0);

enum class ThresholdRule { hard, soft };

struct MonteCarloRisk {
  double mean;
  double std_error;
};

/// Mean of (T(beta + Z) - beta)^2 over n_draws standard normal draws.
MonteCarloRisk monte_carlo_risk(ThresholdRule rule, double beta, double gamma,
                                long n_draws, std::uint64_t seed);

struct McCheckRow {
  ThresholdRule rule;
  double beta;
  double gamma;
  MonteCarloRisk mc;
  double closed_form;
  double z_score;  // |mc.mean - closed_form| / mc.std_error
};

/// Monte Carlo against closed-form risk on gamma in {0.5, 1, 2, 3, 4} and
/// beta in {0, 0.5, gamma, 2 gamma, gamma + 5}, both threshold rules.
std::vector<McCheckRow> mc_check_grid(long n_draws, std::uint64_t seed);

enum class Method { lasso_oos_best, ric_refit, stepwise, lasso };
std::string to_string(Method method);

struct TrialResult {
  std::uint64_t seed = 0;
  Method method = Method::lasso;
  Index support_size = 0;
  double in_sample_criterion = 0;
  double oos_rmse = 0;
  double terminal_sse = 0;
};

/// Long-format curve sample: (series, x, y).
struct CurvePoint {
  std::string series;
  double x;
  double y;
};

enum class Figure { fig3_shrinkage, fig4_independent, fig5_correlated };
std::string to_string(Figure figure);

struct FigureResult {
  std::vector<TrialResult> trials;  // sorted by (seed, method)
  std::vector<CurvePoint> curves;   // trial means indexed by support size
  // fig3 only: mean lasso estimate of the true coefficient at support size s
  // (index s), NaN where no trial reached that size.
  std::vector<double> mean_true_coef_by_size;
};

FigureResult run_figure_experiment(Figure which, int trials, std::uint64_t seed);

struct NpBenchRow {
  Index n = 0;
  Index p = 0;
  TrialResult result;
  bool reached = false;  // residual fell below epsilon
};

std::vector<NpBenchRow> run_np_bench(const std::vector<Index>& sizes, CoverMode mode,
                                     double epsilon, std::uint64_t seed, int replicates = 1);

}  // namespace sparsereg
