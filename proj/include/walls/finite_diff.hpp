#pragma once

// Second-order finite differences on uniform grids: central stencils in the
// interior, one-sided second-order stencils at the two edge points.

#include "walls/grid.hpp"

namespace walls {

inline double deriv1(const Eigen::Ref<const Field>& f, Eigen::Index i, double h) {
  const Eigen::Index n = f.size();
  if (i < 0 || i >= n) throw std::out_of_range("deriv1: index out of range");
  if (i == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  if (i == n - 1) return (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return (f[i + 1] - f[i - 1]) / (2.0 * h);
}

inline double deriv2(const Eigen::Ref<const Field>& f, Eigen::Index i, double h) {
  const Eigen::Index n = f.size();
  if (i < 0 || i >= n) throw std::out_of_range("deriv2: index out of range");
  const double hh = h * h;
  if (i == 0) return (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / hh;
  if (i == n - 1) return (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / hh;
  return (f[i + 1] - 2.0 * f[i] + f[i - 1]) / hh;
}

inline Field deriv1_all(const Eigen::Ref<const Field>& f, double h) {
  const Eigen::Index n = f.size();
  Field d(n);
  d[0] = deriv1(f, 0, h);
  d.segment(1, n - 2) = (f.tail(n - 2) - f.head(n - 2)) / (2.0 * h);
  d[n - 1] = deriv1(f, n - 1, h);
  return d;
}

inline Field deriv2_all(const Eigen::Ref<const Field>& f, double h) {
  const Eigen::Index n = f.size();
  Field d(n);
  d[0] = deriv2(f, 0, h);
  d.segment(1, n - 2) =
      (f.tail(n - 2) - 2.0 * f.segment(1, n - 2) + f.head(n - 2)) / (h * h);
  d[n - 1] = deriv2(f, n - 1, h);
  return d;
}

}  // namespace walls
