#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace sparsereg {

// Standard normal density, cdf and upper tail. All of the risk algebra is
// written for unit noise; callers rescale.

template <typename Scalar>
Scalar normal_pdf(Scalar z) {
  constexpr Scalar inv_sqrt_2pi =
      std::numbers::inv_sqrtpi_v<Scalar> / std::numbers::sqrt2_v<Scalar>;
  if (!std::isfinite(z)) return Scalar(0);
  // z*z is split into its rounded value and the exact rounding error so the
  // exponent keeps full relative precision deep in the tail, where an error
  // of one ulp in z*z would otherwise be amplified by z*z/2.
  const Scalar z2 = z * z;
  if (std::isinf(z2)) return Scalar(0);
  const Scalar z2_err = std::fma(z, z, -z2);
  return inv_sqrt_2pi * std::exp(-Scalar(0.5) * z2) * std::exp(-Scalar(0.5) * z2_err);
}

/// P(Z > z). Below z = 5 this is erfc, which avoids cancelling against 1.
/// Beyond it the tail is pdf(z) times the Mills ratio, evaluated by a
/// continued fraction; this sidesteps the rounding of z / sqrt(2), which erfc
/// would amplify by z^2.
template <typename Scalar>
Scalar normal_upper_tail(Scalar z) {
  if (!(z >= Scalar(5)) || std::isinf(z)) {
    return Scalar(0.5) * std::erfc(z / std::numbers::sqrt2_v<Scalar>);
  }
  // Mills ratio 1 / (z + 1/(z + 2/(z + 3/(z + ...)))), modified Lentz.
  constexpr Scalar tiny = std::numeric_limits<Scalar>::min();
  constexpr Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar f = z;
  Scalar c = f;
  Scalar d = 0;
  for (int j = 1; j < 1000; ++j) {
    d = z + Scalar(j) * d;
    d = d == 0 ? tiny : d;
    c = z + Scalar(j) / c;
    c = c == 0 ? tiny : c;
    d = Scalar(1) / d;
    const Scalar delta = c * d;
    f *= delta;
    if (std::abs(delta - Scalar(1)) < eps) break;
  }
  return normal_pdf(z) / f;
}

template <typename Scalar>
Scalar normal_cdf(Scalar z) {
  return normal_upper_tail(-z);
}

/// Mills-ratio bracket of the upper tail at z > 0.
struct TailBoundReport {
  double z = 0;
  double lower = 0;
  double upper = 0;
  double phi_tilde = 0;
};

/// Partial sum phi(z) * sum_{j=0..k} (-1)^j (2j-1)!! z^{-2j-1}. Even k
/// overestimates the tail, odd k underestimates it.
double mills_series(double z, int k);

/// Brackets P(Z > z) with the alternating series truncated after term k and
/// its neighbour k+1. The upper side is also capped by the Chernoff bound
/// exp(-z^2/2)/2 and the lower side by 0. Throws std::invalid_argument for
/// z <= 0 or k < 1.
TailBoundReport tail_bounds(double z, int k);

/// exp(-z^2)/2, the tail bound in the form it is usually quoted alongside
/// the Mills series. It is only an upper bound for z below about 1.2; kept
/// so that the claim can be checked against normal_upper_tail.
inline double quoted_square_exp_bound(double z) {
  return 0.5 * std::exp(-z * z);
}

}  // namespace sparsereg
