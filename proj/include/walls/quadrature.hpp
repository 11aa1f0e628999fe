#pragma once

// Composite quadrature on uniform grids. Trapezoid is exact for linear
// integrands, Simpson for cubics; Simpson needs an odd point count.

#include "walls/grid.hpp"

namespace walls {

enum class QuadRule { trapezoid, simpson };

namespace detail {

inline void require_finite(const Eigen::Ref<const Field>& f) {
  if (f.allFinite()) return;
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (!std::isfinite(f[i]))
      throw std::invalid_argument("integrate: non-finite sample at index " + std::to_string(i));
}

}  // namespace detail

inline double integrate(const Eigen::Ref<const Field>& f, double h,
                        QuadRule rule = QuadRule::trapezoid) {
  detail::require_finite(f);
  const Eigen::Index n = f.size();
  if (n < 2) throw std::invalid_argument("integrate: need at least 2 samples");
  if (rule == QuadRule::trapezoid) {
    return h * (f.sum() - 0.5 * (f[0] + f[n - 1]));
  }
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument("integrate: simpson needs an odd point count >= 3, got " +
                                std::to_string(n));
  double odd = 0.0, even = 0.0;
  for (Eigen::Index i = 1; i < n - 1; i += 2) odd += f[i];
  for (Eigen::Index i = 2; i < n - 1; i += 2) even += f[i];
  return (h / 3.0) * (f[0] + f[n - 1] + 4.0 * odd + 2.0 * even);
}

inline double integrate(const Grid& grid, const Eigen::Ref<const Field>& f,
                        QuadRule rule = QuadRule::trapezoid) {
  if (f.size() != grid.n()) throw std::invalid_argument("integrate: field/grid size mismatch");
  return integrate(f, grid.h(), rule);
}

/// Trapezoid weights with spacing folded in: weights.dot(f) == integrate(f, h).
inline Field trapezoid_weights(Eigen::Index n, double h) {
  Field w = Field::Constant(n, h);
  w[0] = 0.5 * h;
  w[n - 1] = 0.5 * h;
  return w;
}

/// Running trapezoid integral from the first sample; out[0] == 0.
inline Field cumulative_trapezoid(const Eigen::Ref<const Field>& f, double h) {
  detail::require_finite(f);
  Field out(f.size());
  out[0] = 0.0;
  for (Eigen::Index i = 1; i < f.size(); ++i)
    out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  return out;
}

}  // namespace walls
