#pragma once

#include "walls/grid.hpp"

namespace walls {

enum class TailModel { linear, linear_plus_quadratic };

/// Least-squares polynomial fit of a field over a coordinate window, used to
/// read asymptotic slopes and parabolic decay rates off solver output.
struct TailFit {
  double x_lo = 0.0;
  double x_hi = 0.0;
  TailModel model = TailModel::linear;
  Eigen::VectorXd coeffs;  // ascending powers: c0 + c1 x (+ c2 x^2)
  double residual_rms = 0.0;
  Eigen::Index n_points = 0;

  double intercept() const { return coeffs(0); }
  double slope() const { return coeffs(1); }
  double quadratic() const {
    if (model != TailModel::linear_plus_quadratic)
      throw std::logic_error("TailFit: no quadratic coefficient in a linear fit");
    return coeffs(2);
  }
};

TailFit fit_tail(const Grid& grid, const Eigen::Ref<const Field>& f, double x_lo, double x_hi,
                 TailModel model);

}  // namespace walls
