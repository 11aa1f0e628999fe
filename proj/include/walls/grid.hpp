#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace walls {

/// Sampled real field, one entry per grid point.
using Field = Eigen::ArrayXd;

/// Uniform sample grid on [x_min, x_max] with n points.
class Grid {
 public:
  Grid(double x_min, double x_max, Eigen::Index n) : x_min_(x_min), x_max_(x_max), n_(n) {
    if (n_ < 3) throw std::invalid_argument("Grid: need n >= 3, got " + std::to_string(n_));
    if (!(x_min_ < x_max_)) throw std::invalid_argument("Grid: x_min must be < x_max");
    if (!std::isfinite(x_min_) || !std::isfinite(x_max_))
      throw std::invalid_argument("Grid: bounds must be finite");
  }

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  Eigen::Index n() const { return n_; }
  double h() const { return (x_max_ - x_min_) / static_cast<double>(n_ - 1); }
  double x(Eigen::Index i) const { return x_min_ + static_cast<double>(i) * h(); }

  Field points() const {
    Field xs(n_);
    const double step = h();
    for (Eigen::Index i = 0; i < n_; ++i) xs[i] = x_min_ + static_cast<double>(i) * step;
    return xs;
  }

  /// Index of the grid point closest to x0 (clamped to the grid).
  Eigen::Index nearest_index(double x0) const {
    const auto i = static_cast<Eigen::Index>(std::llround((x0 - x_min_) / h()));
    return std::max<Eigen::Index>(0, std::min(n_ - 1, i));
  }

  bool contains(double x0) const { return x0 >= x_min_ && x0 <= x_max_; }

 private:
  double x_min_, x_max_;
  Eigen::Index n_;
};

}  // namespace walls
