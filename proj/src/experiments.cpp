#include "sparsereg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "sparsereg/risk.hpp"

namespace sparsereg {
namespace {

using Rng = std::mt19937_64;

Matrix normal_matrix(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal;
  Matrix M(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) M(i, j) = normal(rng);
  }
  return M;
}

Vector normal_vector(Rng& rng, Index n) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

Dataset draw_dataset(Rng& rng, const SyntheticSpec& spec) {
  Dataset d;
  d.X = normal_matrix(rng, spec.n, spec.p);
  if (spec.rho > 0.0) {
    const Vector g = normal_vector(rng, spec.n);
    d.X *= std::sqrt(1.0 - spec.rho);
    d.X.colwise() += std::sqrt(spec.rho) * g;
  }
  d.y = d.X * spec.beta_true.values() + spec.noise_sd * normal_vector(rng, spec.n);
  return d;
}

double rmse(const Vector& y, const Matrix& X, const Vector& beta) {
  return std::sqrt((y - X * beta).squaredNorm() / static_cast<double>(y.size()));
}

Index choose3(Index n) { return n * (n - 1) * (n - 2) / 6; }

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void SyntheticSpec::validate() const {
  if (n < 1 || p < 1) throw std::invalid_argument("synthetic spec: n and p must be positive");
  if (k_true < 0 || k_true > p) throw std::invalid_argument("synthetic spec: k_true exceeds p");
  if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("synthetic spec: rho must lie in [0, 1)");
  if (!(noise_sd >= 0.0)) throw std::invalid_argument("synthetic spec: noise_sd must be nonnegative");
  if (beta_true.size() != p || beta_true.l0_norm() != k_true) {
    throw std::invalid_argument("synthetic spec: beta_true must have k_true nonzeros of p");
  }
}

SyntheticSpec make_synthetic_spec(Index n, Index p, Index k_true, double rho, double value,
                                  double noise_sd, std::uint64_t seed) {
  if (k_true > p) throw std::invalid_argument("synthetic spec: k_true exceeds p");
  SyntheticSpec spec;
  spec.n = n;
  spec.p = p;
  spec.k_true = k_true;
  spec.rho = rho;
  spec.noise_sd = noise_sd;
  spec.seed = seed;
  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(derive_seed(seed, 0x5eed));
  std::shuffle(order.begin(), order.end(), rng);
  Vector beta = Vector::Zero(p);
  for (Index k = 0; k < k_true; ++k) beta[order[static_cast<std::size_t>(k)]] = value;
  spec.beta_true = CoefficientVector<double>(beta);
  spec.validate();
  return spec;
}

TrainTest gen_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng train_rng(derive_seed(spec.seed, 1));
  Rng test_rng(derive_seed(spec.seed, 2));
  return {draw_dataset(train_rng, spec), draw_dataset(test_rng, spec)};
}

CollinearTrap gen_collinear_trap(Index p_spurious, double eps, Index n, std::uint64_t seed,
                                 double noise_sd) {
  if (!(eps > 0.0)) throw std::invalid_argument("collinear trap: eps must be positive");
  if (n < 1 || p_spurious < 0) throw std::invalid_argument("collinear trap: bad dimensions");
  Rng rng(derive_seed(seed, 3));
  const Matrix Z = normal_matrix(rng, n, p_spurious + 2);
  CollinearTrap trap;
  trap.eps = eps;
  trap.data.X.resize(n, p_spurious + 2);
  trap.data.X.col(0) = Z.col(0) + eps * Z.col(1);
  trap.data.X.col(1) = Z.col(0) - eps * Z.col(1);
  trap.data.X.rightCols(p_spurious) = Z.rightCols(p_spurious);
  trap.signal = 0.5 * (Z.col(0) + Z.col(1));
  trap.data.y = trap.signal + noise_sd * normal_vector(rng, n);
  trap.two_sparse = {0.25 + 0.25 / eps, 0.25 - 0.25 / eps};
  trap.quoted_one_sparse_x2 = 1.0 / eps;
  return trap;
}

Matrix ExactCoverInstance::design() const {
  Matrix X = Matrix::Zero(n, static_cast<Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (const Index row : columns[j]) X(row, static_cast<Index>(j)) = 1.0;
  }
  return X;
}

ExactCoverInstance gen_exact_cover(Index n, CoverMode mode, std::uint64_t seed, Index p) {
  if (n < 3 || n % 3 != 0) throw std::invalid_argument("exact cover: n must be a positive multiple of 3");
  Rng rng(derive_seed(seed, 4));
  std::vector<Triple> triples;
  std::set<Triple> cover;

  if (mode == CoverMode::all_triples) {
    if (n > 30) throw std::invalid_argument("exact cover: all_triples is limited to n <= 30");
    for (Index a = 0; a < n; ++a)
      for (Index b = a + 1; b < n; ++b)
        for (Index c = b + 1; c < n; ++c) triples.push_back({a, b, c});
    for (Index a = 0; a < n; a += 3) cover.insert({a, a + 1, a + 2});
  } else {
    if (p == 0) p = 10 * n;
    if (p < n / 3 || p > choose3(n)) throw std::invalid_argument("exact cover: p out of range");
    std::vector<Index> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), Index{0});
    std::shuffle(rows.begin(), rows.end(), rng);
    std::set<Triple> used;
    for (Index a = 0; a < n; a += 3) {
      Triple t{rows[a], rows[a + 1], rows[a + 2]};
      std::sort(t.begin(), t.end());
      cover.insert(t);
      used.insert(t);
      triples.push_back(t);
    }
    std::uniform_int_distribution<Index> pick(0, n - 1);
    while (static_cast<Index>(triples.size()) < p) {
      Triple t{pick(rng), pick(rng), pick(rng)};
      std::sort(t.begin(), t.end());
      if (t[0] == t[1] || t[1] == t[2]) continue;
      if (used.insert(t).second) triples.push_back(t);
    }
  }

  std::shuffle(triples.begin(), triples.end(), rng);
  ExactCoverInstance inst;
  inst.n = n;
  inst.columns = std::move(triples);
  for (std::size_t j = 0; j < inst.columns.size(); ++j) {
    if (cover.count(inst.columns[j])) inst.planted_cover.push_back(static_cast<Index>(j));
  }
  inst.y = Vector::Ones(n);
  return inst;
}

MonteCarloRisk monte_carlo_risk(ThresholdRule rule, double beta, double gamma,
                                long n_draws, std::uint64_t seed) {
  if (n_draws < 1000) throw std::invalid_argument("monte_carlo_risk: need at least 1000 draws");
  if (!(gamma >= 0.0)) throw std::invalid_argument("monte_carlo_risk: gamma must be nonnegative");
  Rng rng(derive_seed(seed, 5));
  std::normal_distribution<double> normal;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (long i = 0; i < n_draws; ++i) {
    const double b = beta + normal(rng);
    double est = 0.0;
    if (rule == ThresholdRule::hard) {
      est = std::abs(b) > gamma ? b : 0.0;
    } else {
      const double shrunk = std::abs(b) - gamma;
      est = shrunk > 0.0 ? std::copysign(shrunk, b) : 0.0;
    }
    const double loss = (est - beta) * (est - beta);
    sum += loss;
    sum_sq += loss * loss;
  }
  const double m = sum / static_cast<double>(n_draws);
  const double var = std::max(0.0, sum_sq / static_cast<double>(n_draws) - m * m);
  return {m, std::sqrt(var * static_cast<double>(n_draws) / static_cast<double>(n_draws - 1)) /
                 std::sqrt(static_cast<double>(n_draws))};
}

std::vector<McCheckRow> mc_check_grid(long n_draws, std::uint64_t seed) {
  std::vector<McCheckRow> rows;
  std::uint64_t counter = 0;
  for (const double gamma : {0.5, 1.0, 2.0, 3.0, 4.0}) {
    for (const double beta : {0.0, 0.5, gamma, 2.0 * gamma, gamma + 5.0}) {
      for (const ThresholdRule rule : {ThresholdRule::hard, ThresholdRule::soft}) {
        McCheckRow row{rule, beta, gamma, {}, 0.0, 0.0};
        row.mc = monte_carlo_risk(rule, beta, gamma, n_draws, derive_seed(seed, counter++));
        row.closed_form = rule == ThresholdRule::hard ? risk_l0(beta, gamma) : risk_l1(beta, gamma);
        const double diff = std::abs(row.mc.mean - row.closed_form);
        row.z_score = row.mc.std_error > 0.0 ? diff / row.mc.std_error
                      : diff == 0.0          ? 0.0
                                             : std::numeric_limits<double>::infinity();
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string to_string(Method method) {
  switch (method) {
    case Method::lasso_oos_best: return "lasso_oos_best";
    case Method::ric_refit: return "ric_refit";
    case Method::stepwise: return "stepwise";
    case Method::lasso: return "lasso";
  }
  return "unknown";
}

std::string to_string(Figure figure) {
  switch (figure) {
    case Figure::fig3_shrinkage: return "fig3_shrinkage";
    case Figure::fig4_independent: return "fig4_independent";
    case Figure::fig5_correlated: return "fig5_correlated";
  }
  return "unknown";
}

FigureResult run_figure_experiment(Figure which, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("run_figure_experiment: trials must be >= 1");
  constexpr Index kN = 100;
  constexpr Index kP = 1000;
  const Index k_true = which == Figure::fig3_shrinkage ? 1 : 4;
  const double rho = which == Figure::fig5_correlated ? 0.64 : 0.0;

  struct Mean {
    double sum = 0;
    int count = 0;
    void add(double v) { sum += v, ++count; }
  };
  std::map<std::string, std::map<Index, Mean>> series;
  FigureResult out;

  for (int t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(seed, static_cast<std::uint64_t>(t));
    const SyntheticSpec spec = make_synthetic_spec(kN, kP, k_true, rho, 1.0, 1.0, trial_seed);
    const TrainTest data = gen_synthetic(spec);
    const Vector& y = data.train.y;
    const Matrix& X = data.train.X;
    const LassoPath path = lars_lasso_path(y, X, StopRule::steps(3 * kN));
    const SelectionResult sel = select_on_path(path, y, X, 1.0);

    std::map<Support, const SubsetModel*> by_support;
    for (const auto& m : sel.candidates) by_support.emplace(m.support, &m);

    TrialResult lasso_best{trial_seed, Method::lasso_oos_best, 0, 0,
                           std::numeric_limits<double>::infinity(), 0};
    std::set<Index> sizes_seen;
    const Index true_index = spec.beta_true.support().front();
    for (const auto& step : path.steps) {
      const double lasso_rmse = rmse(data.test.y, data.test.X, step.coefficients.values());
      const auto size = static_cast<Index>(step.support.size());
      if (lasso_rmse < lasso_best.oos_rmse) {
        lasso_best.oos_rmse = lasso_rmse;
        lasso_best.support_size = size;
        lasso_best.in_sample_criterion = step.residual_norm2;
        lasso_best.terminal_sse = step.residual_norm2;
      }
      if (!sizes_seen.insert(size).second) continue;
      series["lasso_oos_rmse"][size].add(lasso_rmse);
      if (auto it = by_support.find(step.support); it != by_support.end()) {
        const SubsetModel& m = *it->second;
        series["ls_oos_rmse"][size].add(
            rmse(data.test.y, data.test.X, m.refit_coefficients.values()));
        series["ric_criterion"][size].add(m.criterion);
      }
      if (which == Figure::fig3_shrinkage) {
        series["lasso_true_coef"][size].add(step.coefficients[true_index]);
      }
    }

    const SubsetModel& best = sel.best;
    TrialResult ric{trial_seed,
                    Method::ric_refit,
                    static_cast<Index>(best.support.size()),
                    best.criterion,
                    rmse(data.test.y, data.test.X, best.refit_coefficients.values()),
                    best.rss};
    out.trials.push_back(lasso_best);
    out.trials.push_back(ric);
  }

  std::sort(out.trials.begin(), out.trials.end(), [](const TrialResult& a, const TrialResult& b) {
    return a.seed != b.seed ? a.seed < b.seed : a.method < b.method;
  });
  for (const auto& [name, points] : series) {
    for (const auto& [size, mean] : points) {
      out.curves.push_back({name, static_cast<double>(size), mean.sum / mean.count});
    }
  }
  if (which == Figure::fig3_shrinkage) {
    const auto& coef = series["lasso_true_coef"];
    const Index max_size = coef.empty() ? 0 : coef.rbegin()->first;
    out.mean_true_coef_by_size.assign(static_cast<std::size_t>(max_size + 1),
                                      std::numeric_limits<double>::quiet_NaN());
    for (const auto& [size, mean] : coef) {
      out.mean_true_coef_by_size[static_cast<std::size_t>(size)] = mean.sum / mean.count;
    }
  }
  return out;
}

std::vector<NpBenchRow> run_np_bench(const std::vector<Index>& sizes, CoverMode mode,
                                     double epsilon, std::uint64_t seed, int replicates) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("run_np_bench: epsilon must be positive");
  if (replicates < 1) throw std::invalid_argument("run_np_bench: replicates must be >= 1");
  std::vector<NpBenchRow> rows;
  std::uint64_t counter = 0;
  for (const Index n : sizes) {
    for (int r = 0; r < replicates; ++r) {
      const std::uint64_t inst_seed = derive_seed(seed, counter++);
      const ExactCoverInstance inst = gen_exact_cover(n, mode, inst_seed);
      const Matrix X = inst.design();
      const StopRule stop = StopRule::residual(epsilon);
      const std::pair<Method, LassoPath> runs[] = {
          {Method::stepwise, forward_stepwise(inst.y, X, stop)},
          {Method::lasso, lars_lasso_path(inst.y, X, stop)},
      };
      for (const auto& [method, path] : runs) {
        const PathStep& last = path.steps.back();
        NpBenchRow row;
        row.n = n;
        row.p = X.cols();
        row.reached = path.termination == Termination::residual_below;
        row.result = {inst_seed, method, static_cast<Index>(last.support.size()),
                      std::sqrt(last.residual_norm2), 0.0, last.residual_norm2};
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace sparsereg
