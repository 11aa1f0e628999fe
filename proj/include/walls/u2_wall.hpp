#pragma once

#include "walls/grid.hpp"
#include "walls/lbfgs.hpp"
#include "walls/profile.hpp"
#include "walls/tail_fit.hpp"
#include "walls/weighted_space.hpp"

#include <Eigen/SparseCore>

namespace walls::u2 {

/// U(2) wall couplings; lambda = e^2 xi / 2 and gamma = g^2/e^2.
struct U2Params {
  double e = 1.0;
  double gamma = 1.0;
  double xi = 1.0;
  double lambda() const { return 0.5 * e * e * xi; }
  void validate() const {
    if (!(e > 0.0 && gamma > 0.0 && xi > 0.0))
      throw std::invalid_argument("U2Params: e, gamma, xi must be > 0");
  }
};

/// Prescribed tail slopes of ln q_i^2: +alpha_i on the right, -beta_i on the
/// left (before the shared -lambda x^2 falloff).
struct U2Asymptotics {
  double alpha1 = 1.0, beta1 = 1.0, alpha2 = 1.0, beta2 = 1.0;
};

struct KappaPair {
  double k1, k2;
};

KappaPair kappa_constants(const U2Asymptotics& a, double gamma);
inline bool admissible(const U2Asymptotics& a, double gamma) {
  const KappaPair k = kappa_constants(a, gamma);
  return k.k1 > 0.0 && k.k2 > 0.0;
}

/// Discrete energy functional: forward-difference kinetic term with the
/// Gamma^{-1} quadratic form on cells, trapezoid-weighted exponential and
/// source terms, free boundary.
class U2Functional {
 public:
  U2Functional(const U2Params& params, const U2Asymptotics& asym, const Grid& grid);

  const Grid& grid() const { return grid_; }
  const U2Params& params() const { return params_; }
  const U2Asymptotics& asym() const { return asym_; }
  const wspace::BackgroundPair& backgrounds() const { return bg_; }
  const KappaPair& kappas() const { return kappas_; }

  /// Value of the discrete functional; throws on exponential overflow.
  double value(const Eigen::Ref<const Field>& eta1, const Eigen::Ref<const Field>& eta2) const;

  /// Partial derivatives of value() (the optimizer gradient).
  void gradient(const Eigen::Ref<const Field>& eta1, const Eigen::Ref<const Field>& eta2,
                Field& g1, Field& g2) const;

  /// Partials rescaled by the quadrature weights: the discrete L2 gradient,
  /// i.e. the Euler-Lagrange residual representation.
  void l2_gradient(const Eigen::Ref<const Field>& eta1, const Eigen::Ref<const Field>& eta2,
                   Field& g1, Field& g2) const;

  double exp_integral_1(const Eigen::Ref<const Field>& eta1) const;
  double exp_integral_2(const Eigen::Ref<const Field>& eta2) const;

  /// Packed objective over z = [eta1; eta2] for the optimizer; non-finite
  /// values signal a rejected trial point instead of throwing.
  ObjectiveFn objective() const;

  /// Exact sparse Hessian at (eta1, eta2): kinetic stiffness blocks plus the
  /// diagonal exponential terms. Symmetric positive definite.
  Eigen::SparseMatrix<double> hessian(const Eigen::Ref<const Field>& eta1,
                                      const Eigen::Ref<const Field>& eta2) const;

 private:
  double value_unchecked(const Eigen::Ref<const Field>& eta1,
                         const Eigen::Ref<const Field>& eta2) const;

  U2Params params_;
  U2Asymptotics asym_;
  Grid grid_;
  wspace::BackgroundPair bg_;
  KappaPair kappas_;
  Field w_;            // trapezoid weights
  Field s1_, s2_;      // source combinations, (1/4gamma) folded in
  Field ln_e1_, ln_e2_;  // u0i - omega
  double a_, b_;       // Gamma^{-1} entries (1+gamma)/(4gamma), (gamma-1)/(4gamma)
};

struct U2Result {
  Profile profile;  // eta1, eta2, u1, u2
  KappaPair kappas;
  double integral_q1_sq = 0.0, integral_q2_sq = 0.0;
  double expected_q1_sq = 0.0, expected_q2_sq = 0.0;  // kappa_i / e^2
  double identity_residual_1 = 0.0, identity_residual_2 = 0.0;  // relative
  double hnorm_eta1 = 0.0, hnorm_eta2 = 0.0;
  ConvergenceRecord convergence;
};

struct U2MinimizeOptions {
  double tol = 1e-8;
  int max_iterations = 50000;
  const Field* init1 = nullptr;
  const Field* init2 = nullptr;
};

/// Direct minimization over the discrete weighted space. Requires kappa_1,
/// kappa_2 > 0 (the existence condition); identity residuals are evaluated
/// post hoc against the analytic kappa targets.
U2Result minimize(const U2Params& params, const U2Asymptotics& asym, const Grid& grid,
                  const wspace::WeightedMeasure& measure, const U2MinimizeOptions& opts = {});

struct TailSummary {
  TailFit fit;
  double expected_quadratic = 0.0;
  double expected_linear = 0.0;
  bool flagged = false;  // window residual too large to trust the fit
};

struct U2DecayReport {
  TailSummary right1, right2, left1, left2;
  double eta1_flatness = 0.0, eta2_flatness = 0.0;  // |eta(x_max) - eta(x_max - 1)|
  double integral_q1_sq = 0.0, integral_q2_sq = 0.0;
  double expected_q1_sq = 0.0, expected_q2_sq = 0.0;
};

U2DecayReport decay_report(const U2Result& result, const U2Params& params,
                                 const U2Asymptotics& asym);

/// [-L, L] with lambda L^2 > 120 (and L >= 15), n points.
Grid default_grid(const U2Params& params, Eigen::Index n = 6001);

}  // namespace walls::u2
