#pragma once

#include "walls/grid.hpp"

#include <utility>

namespace walls::wspace {

/// Weight value h0(x): e^{-beta |x|} outside [-1,1], blended through
/// e^{-beta (x^2+1)/2} inside so value and first derivative match at +-1.
double h0_weight(double beta, double x);

/// Discrete measure d-mu = h0 dx on a grid: trapezoid weights folded with the
/// sampled h0, so constants integrate to mu_total exactly.
class WeightedMeasure {
 public:
  WeightedMeasure(const Grid& grid, double beta);

  const Grid& grid() const { return grid_; }
  double beta() const { return beta_; }
  const Field& h0() const { return h0_; }
  const Field& weights() const { return w_; }
  double mu_total() const { return mu_total_; }

  double integrate(const Eigen::Ref<const Field>& f) const {
    if (f.size() != w_.size()) throw std::invalid_argument("WeightedMeasure: size mismatch");
    return (w_ * f).sum();
  }
  double mean(const Eigen::Ref<const Field>& f) const { return integrate(f) / mu_total_; }

 private:
  Grid grid_;
  double beta_;
  Field h0_, w_;
  double mu_total_;
};

struct MeanSplit {
  double mean;
  Field dotted;  // weighted mean zero; mean + dotted reconstructs the input
};

MeanSplit split(const Eigen::Ref<const Field>& u, const WeightedMeasure& mu);

/// ||v||^2_{L2(dmu)} / ||v'||^2_{L2(dx)} for a mean-zero, nonconstant v.
double poincare_ratio(const Eigen::Ref<const Field>& dotted, const WeightedMeasure& mu);

struct TrudingerMoserSample {
  double lhs;         // integral of e^{a |v|} d-mu
  double exp_factor;  // exp(a^2/(4b) * ||v'||^2_{L2(dx)})
  double ratio() const { return lhs / exp_factor; }
};

TrudingerMoserSample trudinger_moser_check(const Eigen::Ref<const Field>& dotted, double a,
                                           double b, const WeightedMeasure& mu);

/// Discrete norm ||u||^2 = ||u'||^2_{L2(dx)} + ||u||^2_{L2(dmu)}.
double hnorm_sq(const Eigen::Ref<const Field>& u, const WeightedMeasure& mu);

/// Background with exact linear tails, u0(x) = alpha x for x >= 1 and
/// u0(x) = -beta x for x <= -1, joined by the degree-9 polynomial whose
/// derivatives through fourth order match the tails at +-1. u0'' is supported
/// in [-1,1]; the C^4 join keeps finite-difference residuals of reconstructed
/// fields at second order across the junctions.
class Background {
 public:
  Background(double alpha, double beta_slope);

  double value(double x) const;
  double slope(double x) const;
  double curvature(double x) const;

  double alpha() const { return alpha_; }
  double beta_slope() const { return beta_; }
  /// slope(1) - slope(-1), the exact value of the curvature integral.
  double curvature_integral() const { return alpha_ + beta_; }

  Field sample(const Grid& g) const;
  Field sample_curvature(const Grid& g) const;

 private:
  double alpha_, beta_;
  Eigen::Matrix<double, 10, 1> c_;  // polynomial coefficients, ascending powers
};

struct BackgroundPair {
  Background b1, b2;
  double lambda = 0.0;  // omega = lambda x^2
  Field u01, u02, u01_dd, u02_dd, omega;

  static BackgroundPair build(const Grid& grid, double alpha1, double alpha2, double beta1,
                              double beta2, double lambda);
};

}  // namespace walls::wspace
