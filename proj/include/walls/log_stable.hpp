#pragma once

// Log-domain helpers for closed-form profiles whose raw cosh/exp arguments
// overflow long before the tails become irrelevant.

#include <algorithm>
#include <cmath>

namespace walls {

/// ln(cosh t), safe for |t| up to the full double range.
inline double log_cosh(double t) {
  const double m = std::abs(t);
  return m + std::log1p(std::exp(-2.0 * m)) - std::log(2.0);
}

/// ln(e^a + e^b) without overflow.
inline double log_add_exp(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

/// ln(1 + a cosh t) for a > 0, safe for large |t|.
inline double log1p_a_cosh(double a, double t) {
  const double m = std::abs(t);
  return m + std::log(0.5 * a) + std::log1p((2.0 / a) * std::exp(-m) + std::exp(-2.0 * m));
}

/// sinh(t) / (1 + a cosh t) for a > 0, saturating at sign(t)/a.
inline double sinh_over_1p_a_cosh(double a, double t) {
  const double m = std::abs(t);
  const double em = std::exp(-m);
  const double s = (t >= 0.0) ? 1.0 : -1.0;
  return s * (1.0 - em * em) / (2.0 * em + a * (1.0 + em * em));
}

}  // namespace walls
