#include "walls/weighted_space.hpp"

#include "walls/finite_diff.hpp"
#include "walls/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace walls::wspace {

double h0_weight(double beta, double x) {
  const double s = std::abs(x) >= 1.0 ? std::abs(x) : 0.5 * (x * x + 1.0);
  return std::exp(-beta * s);
}

WeightedMeasure::WeightedMeasure(const Grid& grid, double beta) : grid_(grid), beta_(beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("WeightedMeasure: beta must be > 0");
  h0_.resize(grid.n());
  for (Eigen::Index i = 0; i < grid.n(); ++i) h0_[i] = h0_weight(beta, grid.x(i));
  w_ = trapezoid_weights(grid.n(), grid.h()) * h0_;
  mu_total_ = w_.sum();
}

MeanSplit split(const Eigen::Ref<const Field>& u, const WeightedMeasure& mu) {
  if (!u.allFinite()) throw std::invalid_argument("split: non-finite samples");
  MeanSplit s;
  s.mean = mu.mean(u);
  s.dotted = u - s.mean;
  return s;
}

double poincare_ratio(const Eigen::Ref<const Field>& dotted, const WeightedMeasure& mu) {
  const double h = mu.grid().h();
  const Field d = deriv1_all(dotted, h);
  const double dirichlet = integrate(d.square(), h);
  if (dirichlet <= 0.0)
    throw std::invalid_argument("poincare_ratio: constant input, ratio undefined");
  return mu.integrate(dotted.square()) / dirichlet;
}

TrudingerMoserSample trudinger_moser_check(const Eigen::Ref<const Field>& dotted, double a,
                                           double b, const WeightedMeasure& mu) {
  if (!(b > 0.0 && b < mu.beta()))
    throw std::invalid_argument("trudinger_moser_check: need 0 < b < beta");
  const double h = mu.grid().h();
  const Field d = deriv1_all(dotted, h);
  TrudingerMoserSample out;
  out.lhs = mu.integrate((a * dotted.abs()).exp());
  out.exp_factor = std::exp(a * a / (4.0 * b) * integrate(d.square(), h));
  return out;
}

double hnorm_sq(const Eigen::Ref<const Field>& u, const WeightedMeasure& mu) {
  const double h = mu.grid().h();
  const Field d = deriv1_all(u, h);
  return integrate(d.square(), h) + mu.integrate(u.square());
}

Background::Background(double alpha, double beta_slope) : alpha_(alpha), beta_(beta_slope) {
  // degree-9 p matching value and slope of the tails at +-1 with vanishing
  // second through fourth derivatives there
  constexpr int kDeg = 10;
  Eigen::Matrix<double, kDeg, kDeg> M = Eigen::Matrix<double, kDeg, kDeg>::Zero();
  Eigen::Matrix<double, kDeg, 1> rhs = Eigen::Matrix<double, kDeg, 1>::Zero();
  const double xs[2] = {1.0, -1.0};
  const double vals[2] = {alpha_, beta_};  // u0(1) = alpha, u0(-1) = beta
  const double slopes[2] = {alpha_, -beta_};
  for (int side = 0; side < 2; ++side) {
    const double x = xs[side];
    for (int k = 0; k < kDeg; ++k) {
      double fac = 1.0;
      for (int d = 0; d < 5; ++d) {  // derivative orders 0..4
        if (k - d >= 0) M(5 * side + d, k) = fac * std::pow(x, k - d);
        fac *= (k - d);
      }
    }
    rhs(5 * side + 0) = vals[side];
    rhs(5 * side + 1) = slopes[side];
  }
  c_ = M.fullPivLu().solve(rhs);
}

double Background::value(double x) const {
  if (x >= 1.0) return alpha_ * x;
  if (x <= -1.0) return -beta_ * x;
  double p = 0.0;
  for (int k = 9; k >= 0; --k) p = p * x + c_(k);
  return p;
}

double Background::slope(double x) const {
  if (x >= 1.0) return alpha_;
  if (x <= -1.0) return -beta_;
  double p = 0.0;
  for (int k = 9; k >= 1; --k) p = p * x + k * c_(k);
  return p;
}

double Background::curvature(double x) const {
  if (std::abs(x) >= 1.0) return 0.0;
  double p = 0.0;
  for (int k = 9; k >= 2; --k) p = p * x + k * (k - 1) * c_(k);
  return p;
}

Field Background::sample(const Grid& g) const {
  Field f(g.n());
  for (Eigen::Index i = 0; i < g.n(); ++i) f[i] = value(g.x(i));
  return f;
}

Field Background::sample_curvature(const Grid& g) const {
  Field f(g.n());
  for (Eigen::Index i = 0; i < g.n(); ++i) f[i] = curvature(g.x(i));
  return f;
}

BackgroundPair BackgroundPair::build(const Grid& grid, double alpha1, double alpha2, double beta1,
                                     double beta2, double lambda) {
  Eigen::Index inside = 0;
  for (Eigen::Index i = 0; i < grid.n(); ++i)
    if (std::abs(grid.x(i)) <= 1.0) ++inside;
  if (inside < 20)
    throw std::invalid_argument("BackgroundPair: grid resolves [-1,1] with " +
                                std::to_string(inside) + " points, need at least 20");

  BackgroundPair bp{Background(alpha1, beta1), Background(alpha2, beta2), lambda,
                    {}, {}, {}, {}, {}};
  bp.u01 = bp.b1.sample(grid);
  bp.u02 = bp.b2.sample(grid);
  bp.u01_dd = bp.b1.sample_curvature(grid);
  bp.u02_dd = bp.b2.sample_curvature(grid);
  bp.omega = lambda * grid.points().square();
  return bp;
}

}  // namespace walls::wspace
