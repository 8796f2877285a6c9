// Acceptance checks: one PASS/FAIL line per criterion, with indented detail
// lines for criteria that bundle several conditions. Exit status is nonzero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sparsereg/experiments.hpp"
#include "sparsereg/gaussian.hpp"
#include "sparsereg/risk.hpp"
#include "sparsereg/solvers.hpp"

using namespace sparsereg;

namespace {

int failures = 0;

class Criterion {
 public:
  Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}

  void check(bool ok, const std::string& detail) {
    ok_ = ok_ && ok;
    details_.push_back(std::string(ok ? "    ok   " : "    FAIL ") + detail);
  }

  ~Criterion() {
    std::printf("%s criterion %2d: %s\n", ok_ ? "PASS" : "FAIL", id_, title_.c_str());
    for (const auto& d : details_) std::printf("%s\n", d.c_str());
    std::fflush(stdout);
    if (!ok_) ++failures;
  }

 private:
  int id_;
  std::string title_;
  bool ok_ = true;
  std::vector<std::string> details_;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<double> grid(double start, double stop, double step) {
  std::vector<double> g;
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) g.push_back(start + static_cast<double>(i) * step);
  return g;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

void criterion_1() {
  Criterion c(1, "closed-form risks agree with Monte Carlo (N = 200000, 4 SE, < 60 s)");
  const auto start = std::chrono::steady_clock::now();
  const auto rows = mc_check_grid(200000, 20240101);
  const double elapsed = seconds_since(start);
  double worst = 0.0;
  int bad = 0;
  for (const auto& r : rows) {
    worst = std::max(worst, r.z_score);
    if (!(r.z_score < 4.0)) {
      ++bad;
      c.check(false, fmt("%s beta=%g gamma=%g: z=%.2f", r.rule == ThresholdRule::hard ? "hard" : "soft",
                         r.beta, r.gamma, r.z_score));
    }
  }
  c.check(bad == 0, fmt("%zu grid points, worst |z| = %.2f", rows.size(), worst));
  c.check(elapsed < 60.0, fmt("runtime %.1f s", elapsed));
}

void criterion_2() {
  Criterion c(2, "zero cutoff reproduces least squares risk 1 (1e-12)");
  for (double b : {0.0, 1.0, 5.0, 50.0}) {
    const double e0 = std::abs(risk_l0(b, 0.0) - 1.0);
    const double e1 = std::abs(risk_l1(b, 0.0) - 1.0);
    c.check(e0 <= 1e-12 && e1 <= 1e-12, fmt("beta=%g: |R0-1|=%.1e |R1-1|=%.1e", b, e0, e1));
  }
}

void criterion_3() {
  Criterion c(3, "large-beta asymptotes (1e-6)");
  for (double g : {1.0, 2.0, 4.0}) {
    const double e1 = std::abs(risk_l1(g + 40.0, g) - (g * g + 1.0));
    const double e0 = std::abs(risk_l0(g + 40.0, g) - 1.0);
    c.check(e1 < 1e-6 && e0 < 1e-6, fmt("gamma=%g: l1 err %.1e, l0 err %.1e", g, e1, e0));
  }
}

void criterion_4() {
  Criterion c(4, "zero-calibrated l0/l1 envelope on [0.05, 6]: max <= 1.85, ends <= 1.1");
  const auto pts = envelope(EnvelopeDirection::l0_over_l1, grid(0.05, 6.0, 0.05),
                            Calibration::equal_risk_at_zero);
  double worst = 0.0, at = 0.0;
  bool all_ok = true;
  for (const auto& p : pts) {
    all_ok = all_ok && !p.failure;
    if (p.sup_ratio > worst) worst = p.sup_ratio, at = p.gamma_free;
  }
  c.check(all_ok, "every grid point calibrated");
  c.check(worst <= 1.85, fmt("max sup ratio %.4f at gamma1=%.2f", worst, at));
  c.check(pts.front().sup_ratio <= 1.1, fmt("value at gamma1=0.05: %.4f", pts.front().sup_ratio));
  c.check(pts.back().sup_ratio <= 1.1, fmt("value at gamma1=6: %.4f", pts.back().sup_ratio));
}

void criterion_5() {
  Criterion c(5, "optimized l0/l1 envelope: <= 1.2 at gamma1 = 6, nonincreasing on [3, 6]");
  const auto pts = envelope(EnvelopeDirection::l0_over_l1, grid(3.0, 6.0, 0.05),
                            Calibration::infimum_optimized);
  c.check(pts.back().sup_ratio <= 1.2, fmt("value at gamma1=6: %.4f", pts.back().sup_ratio));
  double worst_rise = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    worst_rise = std::max(worst_rise, pts[i].sup_ratio - pts[i - 1].sup_ratio);
  }
  c.check(worst_rise <= 1e-3, fmt("largest step increase %.2e", worst_rise));
}

void criterion_6() {
  Criterion c(6, "min over gamma1 of sup R1/R0 exceeds gamma0 for gamma0 in {2, 3, 4}");
  const auto g1_grid = grid(0.05, 6.0, 0.05);
  for (double g0 : {2.0, 3.0, 4.0}) {
    double best = std::numeric_limits<double>::infinity(), at = 0.0;
    for (double g1 : g1_grid) {
      const double s = sup_ratio(Penalty::l1, g0, g1).sup;
      if (s < best) best = s, at = g1;
    }
    c.check(best > g0, fmt("gamma0=%g: min sup ratio %.4f at gamma1=%.2f", g0, best, at));
  }
}

void criterion_7() {
  Criterion c(7, "C1 objective: argmin 5.71 +- 0.05, |min| 5.161 +- 0.01");
  const auto k = c1_constant();
  c.check(std::abs(k.argmin_gamma0 - 5.71) <= 0.05, fmt("argmin gamma0 = %.5f", k.argmin_gamma0));
  c.check(std::abs(std::abs(k.c1) - 5.161) <= 0.01,
          fmt("minimum = %.6f (negative; compared by magnitude)", k.c1));
}

void criterion_8() {
  Criterion c(8, "50x50 orthonormal design: lasso path equals soft thresholding (1e-8)");
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  Matrix A(50, 50);
  for (Index i = 0; i < A.size(); ++i) A.data()[i] = normal(rng);
  const Matrix Q = Eigen::HouseholderQR<Matrix>(A).householderQ();
  Vector y(50);
  for (Index i = 0; i < 50; ++i) y[i] = normal(rng);
  const Vector z = Q.transpose() * y;
  const auto path = lars_lasso_path(y, Q, StopRule::full_path());
  double worst = 0.0;
  for (const auto& step : path.steps) {
    const Vector expected = soft_threshold(z, step.penalty / 2.0);
    worst = std::max(worst, (step.coefficients.values() - expected).cwiseAbs().maxCoeff());
  }
  c.check(path.steps.size() == 51, fmt("%zu path steps", path.steps.size()));
  c.check(worst <= 1e-8, fmt("max deviation %.2e", worst));
}

void criterion_9() {
  Criterion c(9, "all-triples exact cover, eps = 1/4: stepwise sizes {3,4,5,6}, lasso >= stepwise, < 30 s");
  const auto start = std::chrono::steady_clock::now();
  const auto rows = run_np_bench({9, 12, 15, 18}, CoverMode::all_triples, 0.25, 1);
  const double elapsed = seconds_since(start);
  for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
    const auto& sw = rows[i].result.method == Method::stepwise ? rows[i] : rows[i + 1];
    const auto& la = rows[i].result.method == Method::stepwise ? rows[i + 1] : rows[i];
    const Index want = sw.n / 3;
    c.check(sw.result.support_size == want && la.result.support_size >= sw.result.support_size,
            fmt("n=%ld: stepwise %ld (want %ld), lasso %ld", long(sw.n), long(sw.result.support_size),
                long(want), long(la.result.support_size)));
  }
  c.check(elapsed < 30.0, fmt("runtime %.1f s", elapsed));
}

void criterion_10() {
  Criterion c(10, "random exact cover n in {99, 240}: SSE < 1/16, stepwise smaller in >= 9/10 seeds");
  for (Index n : {99, 240}) {
    const auto rows = run_np_bench({n}, CoverMode::random_p, 0.25, 7, 10);
    int smaller = 0, terminated = 0;
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
      const auto& sw = rows[i].result.method == Method::stepwise ? rows[i] : rows[i + 1];
      const auto& la = rows[i].result.method == Method::stepwise ? rows[i + 1] : rows[i];
      terminated += (sw.reached && sw.result.terminal_sse < 1.0 / 16) &&
                    (la.reached && la.result.terminal_sse < 1.0 / 16);
      smaller += sw.result.support_size < la.result.support_size;
    }
    c.check(terminated == 10, fmt("n=%ld: both methods reached SSE < 1/16 in %d/10", long(n), terminated));
    c.check(smaller >= 9, fmt("n=%ld: stepwise smaller in %d/10", long(n), smaller));
  }
}

std::vector<const TrialResult*> of_method(const FigureResult& fig, Method m) {
  std::vector<const TrialResult*> out;
  for (const auto& t : fig.trials) {
    if (t.method == m) out.push_back(&t);
  }
  return out;
}

void criterion_11() {
  Criterion c(11, "independent design, 20 trials: median RIC size 4, RIC OOS <= best lasso in >= 70%");
  const auto fig = run_figure_experiment(Figure::fig4_independent, 20, 4);
  const auto ric = of_method(fig, Method::ric_refit);
  const auto lasso = of_method(fig, Method::lasso_oos_best);
  std::vector<double> sizes;
  int wins = 0;
  for (std::size_t i = 0; i < ric.size(); ++i) {
    sizes.push_back(static_cast<double>(ric[i]->support_size));
    wins += ric[i]->oos_rmse <= lasso[i]->oos_rmse;
  }
  const double med = median(sizes);
  c.check(med == 4.0, fmt("median RIC support size %.1f", med));
  c.check(wins >= 14, fmt("RIC beats best lasso OOS in %d/20", wins));
}

void criterion_12() {
  Criterion c(12, "correlated design, 20 trials: lasso OOS-best size > 50 in >= 60%, RIC size <= 10 in >= 60%");
  const auto fig = run_figure_experiment(Figure::fig5_correlated, 20, 5);
  int big = 0, small = 0;
  std::vector<double> lasso_sizes;
  for (const auto* t : of_method(fig, Method::lasso_oos_best)) {
    big += t->support_size > 50;
    lasso_sizes.push_back(static_cast<double>(t->support_size));
  }
  for (const auto* t : of_method(fig, Method::ric_refit)) small += t->support_size <= 10;
  c.check(big >= 12, fmt("lasso OOS-best size > 50 in %d/20 (median size %.1f)", big, median(lasso_sizes)));
  c.check(small >= 12, fmt("RIC size <= 10 in %d/20", small));
}

void criterion_13() {
  Criterion c(13, "lasso shrinkage: mean estimate of the true coefficient at size 4 is <= 0.9");
  const auto fig = run_figure_experiment(Figure::fig3_shrinkage, 20, 3);
  const double v = fig.mean_true_coef_by_size.size() > 4 ? fig.mean_true_coef_by_size[4]
                                                         : std::numeric_limits<double>::quiet_NaN();
  c.check(v <= 0.9, fmt("mean estimate %.4f", v));
}

void criterion_14() {
  Criterion c(14, "gaussian tail invariants on the log-spaced z grid (< 1 s)");
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> zs;
  for (int i = 0; i <= 200; ++i) zs.push_back(0.1 * std::pow(380.0, i / 200.0));
  int bracket_bad = 0, quoted_bad = 0;
  double first_quoted_violation = 0.0;
  for (double z : zs) {
    const double tail = normal_upper_tail(z);
    for (int k = 1; k <= 4; ++k) {
      const auto b = tail_bounds(z, k);
      const bool finite = std::isfinite(b.lower) && std::isfinite(b.upper) && b.lower >= 0 && b.upper >= 0;
      bracket_bad += !(finite && b.lower <= tail && tail <= b.upper);
    }
    if (!(tail <= quoted_square_exp_bound(z))) {
      if (quoted_bad++ == 0) first_quoted_violation = z;
    }
  }
  double symmetry = 0.0;
  for (double z = 0.0; z <= 10.0; z += 0.01) {
    symmetry = std::max(symmetry, std::abs(normal_cdf(-z) - normal_upper_tail(z)) / normal_upper_tail(z));
  }
  const double elapsed = seconds_since(start);
  c.check(bracket_bad == 0, fmt("series bounds bracket the tail for k=1..4 (%d violations)", bracket_bad));
  c.check(quoted_bad == 0, fmt("tail <= exp(-z^2)/2: %d/%zu violations, first at z=%.3f", quoted_bad,
                               zs.size(), first_quoted_violation));
  c.check(symmetry <= 1e-14, fmt("cdf(-z) vs upper_tail(z) max relative gap %.1e", symmetry));
  c.check(elapsed < 1.0, fmt("runtime %.3f s", elapsed));
}

}  // namespace

int main() {
  const std::function<void()> criteria[] = {criterion_1,  criterion_2,  criterion_3,  criterion_4,
                                            criterion_5,  criterion_6,  criterion_7,  criterion_8,
                                            criterion_9,  criterion_10, criterion_11, criterion_12,
                                            criterion_13, criterion_14};
  for (const auto& run : criteria) run();
  std::printf("%d of %zu criteria failed\n", failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
