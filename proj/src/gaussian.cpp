#include "sparsereg/gaussian.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sparsereg {

double mills_series(double z, int k) {
  const double inv_z2 = 1.0 / (z * z);
  double term = 1.0 / z;  // (2j-1)!! z^{-2j-1} with the sign folded in
  double sum = term;
  for (int j = 1; j <= k; ++j) {
    term *= -(2.0 * j - 1.0) * inv_z2;
    sum += term;
  }
  return normal_pdf(z) * sum;
}

TailBoundReport tail_bounds(double z, int k) {
  if (!(z > 0.0)) {
    throw std::invalid_argument("tail_bounds: z must be positive, got " +
                                std::to_string(z));
  }
  if (k < 1) {
    throw std::invalid_argument("tail_bounds: k must be at least 1");
  }
  const double at_k = mills_series(z, k);
  const double at_next = mills_series(z, k + 1);
  const bool k_even = (k % 2) == 0;

  TailBoundReport report;
  report.z = z;
  report.phi_tilde = normal_upper_tail(z);
  report.upper = k_even ? at_k : at_next;
  report.lower = k_even ? at_next : at_k;
  report.upper = std::min(report.upper, 0.5 * std::exp(-0.5 * z * z));
  report.lower = std::max(report.lower, 0.0);
  return report;
}

}  // namespace sparsereg
