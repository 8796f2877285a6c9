#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace sparsereg {

/// Thrown when a numerical procedure cannot deliver a result (bracket
/// exhausted, underflow, singular system).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Scalar>
struct Minimum {
  Scalar x;
  Scalar value;
};

/// Golden-section minimisation of a unimodal f on [a, b].
template <typename Scalar, typename F>
Minimum<Scalar> golden_section_minimize(F&& f, Scalar a, Scalar b,
                                        Scalar x_tol = Scalar(1e-10),
                                        int max_iter = 200) {
  const Scalar inv_phi = (std::sqrt(Scalar(5)) - Scalar(1)) / Scalar(2);
  Scalar c = b - inv_phi * (b - a);
  Scalar d = a + inv_phi * (b - a);
  Scalar fc = f(c);
  Scalar fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > x_tol; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? Minimum<Scalar>{c, fc} : Minimum<Scalar>{d, fd};
}

/// Root of g on [lo, hi] by bisection; g(lo) and g(hi) must differ in sign.
/// Stops once |g(mid)| <= f_tol or the bracket is narrower than x_tol.
template <typename Scalar, typename G>
Scalar bisect(G&& g, Scalar lo, Scalar hi, Scalar f_tol, Scalar x_tol = Scalar(0),
              int max_iter = 400) {
  Scalar g_lo = g(lo);
  const Scalar g_hi = g(hi);
  if (g_lo == Scalar(0)) return lo;
  if (g_hi == Scalar(0)) return hi;
  if (std::signbit(g_lo) == std::signbit(g_hi)) {
    throw NumericalError("bisect: root is not bracketed");
  }
  Scalar mid = lo;
  for (int i = 0; i < max_iter; ++i) {
    mid = lo + (hi - lo) / Scalar(2);
    const Scalar g_mid = g(mid);
    if (std::abs(g_mid) <= f_tol || (hi - lo) <= x_tol || mid == lo || mid == hi) {
      return mid;
    }
    if (std::signbit(g_mid) == std::signbit(g_lo)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

}  // namespace sparsereg
