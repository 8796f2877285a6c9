#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace sparsereg {

// Exact predictive risk of hard (l0) and soft (l1) thresholding of a single
// least-squares coordinate beta_hat = beta + Z, Z ~ N(0, 1). With an
// orthonormal design the risk of the full estimator is the sum of these.

/// Cutoffs in noise units together with the penalties that produce them
/// under an orthonormal design: lambda0 = gamma0^2, lambda1 = 2 gamma1.
class ThresholdPair {
 public:
  ThresholdPair() = default;
  ThresholdPair(double gamma0, double gamma1);

  static ThresholdPair from_penalties(double lambda0, double lambda1);

  double gamma0() const { return gamma0_; }
  double gamma1() const { return gamma1_; }
  double lambda0() const { return lambda0_; }
  double lambda1() const { return lambda1_; }

 private:
  double gamma0_ = 0;
  double gamma1_ = 0;
  double lambda0_ = 0;
  double lambda1_ = 0;
};

enum class Penalty { l0, l1 };

double risk_l0(double beta, double gamma0);
double risk_l1(double beta, double gamma1);

/// Risks at beta = 0: R0 = 2 g phi(g) + 2 tail(g), R1 = -2 g phi(g) + 2 (g^2+1) tail(g).
double risk_l0_at_zero(double gamma0);
double risk_l1_at_zero(double gamma1);

/// Ratio with the 0/0 = 1 convention for doubly underflowed risks.
double risk_ratio(double numerator, double denominator);

struct RiskCurve {
  ThresholdPair gamma;
  Eigen::ArrayXd betas;
  Eigen::ArrayXd r_l0;
  Eigen::ArrayXd r_l1;
  Eigen::ArrayXd ratio_l1_over_l0;
};

RiskCurve risk_curve(const ThresholdPair& gamma, const Eigen::ArrayXd& betas);

/// The gamma0 whose hard-threshold risk at zero equals the soft-threshold
/// risk at zero for gamma1. Throws NumericalError if the root lies beyond
/// gamma0 = 60.
double calibrate_gamma0(double gamma1);

/// Inverse direction of calibrate_gamma0.
double calibrate_gamma1(double gamma0);

/// gamma1 + 4 log(gamma1) / gamma1, clamped at zero.
double heuristic_gamma0(double gamma1);

struct SupRatio {
  double sup = 1;
  double argmax_beta = 0;  // +inf when the supremum is the beta -> inf limit
};

/// sup over beta >= 0 of R(numerator) / R(other). Dense grid on
/// [0, max(gamma0, gamma1) + 12], golden refinement of the best cell, and
/// comparison with the analytic limit as beta -> inf.
SupRatio sup_ratio(Penalty numerator, double gamma0, double gamma1,
                   double grid_step = 0.02);

enum class EnvelopeDirection { l0_over_l1, l1_over_l0 };
enum class Calibration { equal_risk_at_zero, infimum_optimized };

std::string to_string(EnvelopeDirection direction);
std::string to_string(Calibration calibration);

struct EnvelopePoint {
  double gamma_free = 0;
  double gamma_opposing = 0;
  double sup_ratio = 0;
  double argmax_beta = 0;
  Calibration calibration = Calibration::equal_risk_at_zero;
  std::optional<std::string> failure;  // set when calibration failed
};

/// For l0_over_l1 the grid holds gamma1 and gamma0 is the opposing cutoff;
/// for l1_over_l0 it is the other way round.
std::vector<EnvelopePoint> envelope(EnvelopeDirection direction,
                                    const std::vector<double>& gamma_grid,
                                    Calibration calibration);

/// Minimum of 2^{5/2} e^{g^2/4} / (g^6 + g^4) - g over g in (0, 20].
struct C1Constant {
  double c1;
  double argmin_gamma0;
};
C1Constant c1_constant();
double c1_objective(double gamma0);

}  // namespace sparsereg
