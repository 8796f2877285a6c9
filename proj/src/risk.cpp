#include "sparsereg/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sparsereg/gaussian.hpp"
#include "sparsereg/numerics.hpp"

namespace sparsereg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCalibrationCeiling = 60.0;
constexpr double kBetaMargin = 12.0;

void require_cutoff(double gamma, const char* what) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument(std::string(what) +
                                " must be a finite nonnegative cutoff");
  }
}

double risk(Penalty penalty, double beta, double gamma) {
  return penalty == Penalty::l0 ? risk_l0(beta, gamma) : risk_l1(beta, gamma);
}

// R(beta -> inf) for each estimator: 1 for hard thresholding, gamma^2 + 1
// for soft thresholding.
double limit_risk(Penalty penalty, double gamma) {
  return penalty == Penalty::l0 ? 1.0 : gamma * gamma + 1.0;
}

// Root of R_target(g) = level over g >= 0 for a risk at zero that decreases
// from 1 to 0.
double solve_risk_at_zero(Penalty penalty, double level) {
  auto at_zero = [penalty](double g) {
    return penalty == Penalty::l0 ? risk_l0_at_zero(g) : risk_l1_at_zero(g);
  };
  if (!(level >= std::numeric_limits<double>::min())) {
    // A zero or subnormal target has no well-resolved root.
    throw NumericalError("calibration target risk underflows double precision");
  }
  auto residual = [&](double g) { return at_zero(g) - level; };
  double hi = 1.0;
  while (residual(hi) > 0.0) {
    if (hi >= kCalibrationCeiling) {
      throw NumericalError("calibration bracket exceeded gamma = 60");
    }
    hi = std::min(2.0 * hi, kCalibrationCeiling);
  }
  return bisect(residual, 0.0, hi, 1e-10 * level);
}

}  // namespace

ThresholdPair::ThresholdPair(double gamma0, double gamma1)
    : gamma0_(gamma0),
      gamma1_(gamma1),
      lambda0_(gamma0 * gamma0),
      lambda1_(2.0 * gamma1) {
  require_cutoff(gamma0, "gamma0");
  require_cutoff(gamma1, "gamma1");
}

ThresholdPair ThresholdPair::from_penalties(double lambda0, double lambda1) {
  require_cutoff(lambda0, "lambda0");
  require_cutoff(lambda1, "lambda1");
  ThresholdPair pair(std::sqrt(lambda0), 0.5 * lambda1);
  pair.lambda0_ = lambda0;
  pair.lambda1_ = lambda1;
  return pair;
}

double risk_l0(double beta, double gamma0) {
  require_cutoff(gamma0, "gamma0");
  const double b = std::abs(beta);
  const double g = gamma0;
  return (g - b) * normal_pdf(g - b) + (g + b) * normal_pdf(g + b) +
         normal_cdf(b - g) + b * b * normal_cdf(g - b) +
         (1.0 - b * b) * normal_upper_tail(g + b);
}

double risk_l1(double beta, double gamma1) {
  require_cutoff(gamma1, "gamma1");
  const double b = std::abs(beta);
  const double g = gamma1;
  const double g2p1 = g * g + 1.0;
  return (-g - b) * normal_pdf(g - b) + (b - g) * normal_pdf(g + b) +
         g2p1 * normal_cdf(b - g) + b * b * normal_cdf(g - b) +
         (g2p1 - b * b) * normal_upper_tail(g + b);
}

double risk_l0_at_zero(double gamma0) {
  require_cutoff(gamma0, "gamma0");
  return 2.0 * gamma0 * normal_pdf(gamma0) + 2.0 * normal_upper_tail(gamma0);
}

double risk_l1_at_zero(double gamma1) {
  require_cutoff(gamma1, "gamma1");
  return -2.0 * gamma1 * normal_pdf(gamma1) +
         2.0 * (gamma1 * gamma1 + 1.0) * normal_upper_tail(gamma1);
}

double risk_ratio(double numerator, double denominator) {
  if (denominator == 0.0) return numerator == 0.0 ? 1.0 : kInf;
  return numerator / denominator;
}

RiskCurve risk_curve(const ThresholdPair& gamma, const Eigen::ArrayXd& betas) {
  RiskCurve curve;
  curve.gamma = gamma;
  curve.betas = betas;
  curve.r_l0 = betas.unaryExpr([&](double b) { return risk_l0(b, gamma.gamma0()); });
  curve.r_l1 = betas.unaryExpr([&](double b) { return risk_l1(b, gamma.gamma1()); });
  curve.ratio_l1_over_l0 = curve.r_l1.binaryExpr(
      curve.r_l0, [](double n, double d) { return risk_ratio(n, d); });
  return curve;
}

double calibrate_gamma0(double gamma1) {
  require_cutoff(gamma1, "gamma1");
  if (gamma1 == 0.0) return 0.0;
  return solve_risk_at_zero(Penalty::l0, risk_l1_at_zero(gamma1));
}

double calibrate_gamma1(double gamma0) {
  require_cutoff(gamma0, "gamma0");
  if (gamma0 == 0.0) return 0.0;
  return solve_risk_at_zero(Penalty::l1, risk_l0_at_zero(gamma0));
}

double heuristic_gamma0(double gamma1) {
  if (!(gamma1 > 0.0) || !std::isfinite(gamma1)) {
    throw std::invalid_argument("heuristic_gamma0: gamma1 must be positive");
  }
  return std::max(0.0, gamma1 + 4.0 * std::log(gamma1) / gamma1);
}

SupRatio sup_ratio(Penalty numerator, double gamma0, double gamma1,
                   double grid_step) {
  require_cutoff(gamma0, "gamma0");
  require_cutoff(gamma1, "gamma1");
  const Penalty denominator = numerator == Penalty::l0 ? Penalty::l1 : Penalty::l0;
  const double g_num = numerator == Penalty::l0 ? gamma0 : gamma1;
  const double g_den = numerator == Penalty::l0 ? gamma1 : gamma0;
  auto ratio = [&](double beta) {
    return risk_ratio(risk(numerator, beta, g_num), risk(denominator, beta, g_den));
  };

  const double beta_max = std::max(gamma0, gamma1) + kBetaMargin;
  const auto cells = static_cast<int>(std::ceil(beta_max / grid_step));
  const double h = beta_max / cells;
  int best = 0;
  double best_value = ratio(0.0);
  for (int i = 1; i <= cells; ++i) {
    const double v = ratio(i * h);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  SupRatio out{best_value, best * h};
  const double lo = std::max(0, best - 1) * h;
  const double hi = std::min(cells, best + 1) * h;
  const auto refined = golden_section_minimize(
      [&](double b) { return -ratio(b); }, lo, hi, 1e-10);
  if (-refined.value > out.sup) out = {-refined.value, refined.x};

  const double limit =
      risk_ratio(limit_risk(numerator, g_num), limit_risk(denominator, g_den));
  // Ties (to a few ulps) go to the limit: a finite beta only matches it once
  // both risks have saturated to their asymptotes in double precision.
  constexpr double kUlps = 8 * std::numeric_limits<double>::epsilon();
  if (limit >= out.sup * (1.0 - kUlps)) out = {limit, kInf};
  return out;
}

std::string to_string(EnvelopeDirection direction) {
  return direction == EnvelopeDirection::l0_over_l1 ? "l0_over_l1" : "l1_over_l0";
}

std::string to_string(Calibration calibration) {
  return calibration == Calibration::equal_risk_at_zero ? "equal_risk_at_zero"
                                                        : "infimum_optimized";
}

std::vector<EnvelopePoint> envelope(EnvelopeDirection direction,
                                    const std::vector<double>& gamma_grid,
                                    Calibration calibration) {
  for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
    if (!(gamma_grid[i] > 0.0) || (i > 0 && !(gamma_grid[i] > gamma_grid[i - 1]))) {
      throw std::invalid_argument("envelope: grid must be positive and strictly increasing");
    }
  }
  const bool l0_num = direction == EnvelopeDirection::l0_over_l1;
  const Penalty numerator = l0_num ? Penalty::l0 : Penalty::l1;
  // sup ratio as a function of the opposing cutoff
  auto sup_at = [&](double free, double opposing, double step) {
    return l0_num ? sup_ratio(numerator, opposing, free, step)
                  : sup_ratio(numerator, free, opposing, step);
  };

  std::vector<EnvelopePoint> out;
  out.reserve(gamma_grid.size());
  for (const double free : gamma_grid) {
    EnvelopePoint point;
    point.gamma_free = free;
    point.calibration = calibration;
    try {
      if (calibration == Calibration::equal_risk_at_zero) {
        point.gamma_opposing = l0_num ? calibrate_gamma0(free) : calibrate_gamma1(free);
      } else {
        // Coarse scan with a cheap beta grid seeds the golden-section search.
        constexpr double kCoarse = 0.25;
        constexpr int kCells = static_cast<int>(kCalibrationCeiling / kCoarse);
        int best = 0;
        double best_value = kInf;
        for (int i = 0; i <= kCells; ++i) {
          const double v = sup_at(free, i * kCoarse, 0.1).sup;
          if (v < best_value) {
            best_value = v;
            best = i;
          }
        }
        const double lo = std::max(0, best - 1) * kCoarse;
        const double hi = std::min(kCells, best + 1) * kCoarse;
        point.gamma_opposing = golden_section_minimize(
            [&](double g) { return sup_at(free, g, 0.02).sup; }, lo, hi, 1e-8).x;
      }
      const SupRatio s = sup_at(free, point.gamma_opposing, 0.02);
      point.sup_ratio = s.sup;
      point.argmax_beta = s.argmax_beta;
    } catch (const NumericalError& e) {
      point.failure = e.what();
      point.sup_ratio = std::numeric_limits<double>::quiet_NaN();
      point.argmax_beta = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(point);
  }
  return out;
}

double c1_objective(double gamma0) {
  const double g2 = gamma0 * gamma0;
  return std::pow(2.0, 2.5) * std::exp(g2 / 4.0) / (g2 * g2 * g2 + g2 * g2) - gamma0;
}

C1Constant c1_constant() {
  constexpr double kStep = 0.01;
  constexpr int kCells = 2000;  // (0, 20]
  int best = 1;
  double best_value = c1_objective(kStep);
  for (int i = 2; i <= kCells; ++i) {
    const double v = c1_objective(i * kStep);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const auto m = golden_section_minimize(
      c1_objective, std::max(1, best - 1) * kStep, std::min(kCells, best + 1) * kStep, 1e-12);
  return {m.value, m.x};
}

}  // namespace sparsereg
