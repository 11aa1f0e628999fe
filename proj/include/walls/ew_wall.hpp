#pragma once

#include "walls/grid.hpp"
#include "walls/lbfgs.hpp"
#include "walls/profile.hpp"
#include "walls/tail_fit.hpp"
#include "walls/weighted_space.hpp"

#include <utility>

namespace walls::ew {

/// Electroweak couplings. The mixing angle satisfies cos(theta) =
/// g / sqrt(g^2 + g'^2) and e = g sin(theta) = g' cos(theta).
struct EwParams {
  double g = 1.0;
  double g_prime = 1.0;
  double phi0 = 1.0;

  static EwParams from_angle(double g, double theta, double phi0) {
    return {g, g * std::tan(theta), phi0};
  }

  double theta() const { return std::atan2(g_prime, g); }
  double cos_sq() const { return g * g / (g * g + g_prime * g_prime); }
  double tan_sq() const { return (g_prime * g_prime) / (g * g); }
  double e_charge() const { return g * g_prime / std::sqrt(g * g + g_prime * g_prime); }
  double lambda() const { return g * g * phi0 * phi0 / (2.0 * cos_sq()); }
  double lambda_critical() const { return g * g / (8.0 * cos_sq()); }
  void validate() const {
    if (!(g > 0.0 && g_prime > 0.0 && phi0 > 0.0))
      throw std::invalid_argument("EwParams: g, g', phi0 must be > 0");
  }
};

/// Prescribed slopes: ln phi^2-related alpha1, beta1 free in sign with
/// alpha1 + beta1 > 0; the w^2 slopes alpha2, beta2 must be negative.
struct EwAsymptotics {
  double alpha1 = 1.5, beta1 = 1.5, alpha2 = -2.0, beta2 = -2.0;
};

/// Throws naming the violated existence inequality.
void validate(const EwAsymptotics& a, const EwParams& p);

/// Right-hand sides of the two constraints: (alpha1 + beta1,
/// |alpha2| + |beta2| - (alpha1 + beta1)/tan^2 theta).
std::pair<double, double> constraint_targets(const EwAsymptotics& a, const EwParams& p);

double gamma1(const EwAsymptotics& a, const EwParams& p);
double gamma2(const EwAsymptotics& a, const EwParams& p);

/// Largest admissible weight exponent is min{|alpha2|, |beta2|}; default half.
double default_measure_beta(const EwAsymptotics& a);

// change of variables u1 = v1 + 2 v2, u2 = v1 (bijective, linear)
std::pair<Field, Field> to_u_variables(const Field& v1, const Field& v2);
std::pair<Field, Field> to_v_variables(const Field& u1, const Field& u2);

/// Weight functions U = exp((u01 - u02 - omega)/2), V = exp(u02); requires the
/// alpha2, beta2 slopes negative so V decays.
std::pair<Field, Field> weights_UV(const wspace::BackgroundPair& bg);

/// Mean-eliminated constrained functional over mean-zero pairs. The value is
/// invariant under constant shifts followed by re-splitting, which is what
/// makes post-step mean projection exact.
class EwFunctional {
 public:
  EwFunctional(const EwParams& params, const EwAsymptotics& asym, const Grid& grid,
               const wspace::WeightedMeasure& measure);

  const Grid& grid() const { return grid_; }
  const EwParams& params() const { return params_; }
  const EwAsymptotics& asym() const { return asym_; }
  const wspace::BackgroundPair& backgrounds() const { return bg_; }
  const wspace::WeightedMeasure& measure() const { return measure_; }

  /// Reduced objective; throws if an input is not mean-zero for d-mu.
  double value(const Eigen::Ref<const Field>& eta1_dot,
               const Eigen::Ref<const Field>& eta2_dot) const;
  void gradient(const Eigen::Ref<const Field>& eta1_dot, const Eigen::Ref<const Field>& eta2_dot,
                Field& g1, Field& g2) const;

  /// Means recovered from the constraint resolution at the given dotted pair.
  std::pair<double, double> recover_means(const Eigen::Ref<const Field>& eta1_dot,
                                          const Eigen::Ref<const Field>& eta2_dot) const;

  /// Constraint values at full eta fields: (g^2 phi0^2 tan^2 int U e^{(eta1-eta2)/2},
  /// 4 g^2 int V e^{eta2}).
  std::pair<double, double> constraint_values(const Eigen::Ref<const Field>& eta1,
                                              const Eigen::Ref<const Field>& eta2) const;

  ObjectiveFn objective() const;                       // over z = [eta1_dot; eta2_dot]
  std::function<void(Eigen::VectorXd&)> projector() const;  // subtract weighted means

  // pieces exposed for the Newton polish
  double target_a() const { return target_a_; }
  double target_b() const { return target_b_; }
  const Field& ln_quad_weights() const { return ln_w_; }
  const Field& ln_weight_u() const { return ln_u_; }
  const Field& ln_weight_v() const { return ln_v_; }

  /// Least-squares multipliers of the discrete stationarity system at full
  /// eta fields; the governing equations correspond to (-1, 4).
  std::pair<double, double> multipliers(const Eigen::Ref<const Field>& eta1,
                                        const Eigen::Ref<const Field>& eta2) const;

 private:
  double value_unchecked(const Eigen::Ref<const Field>& e1, const Eigen::Ref<const Field>& e2,
                         double* ln_su, double* ln_sv) const;
  void require_mean_zero(const Eigen::Ref<const Field>& e, const char* which) const;

  EwParams params_;
  EwAsymptotics asym_;
  Grid grid_;
  wspace::WeightedMeasure measure_;
  wspace::BackgroundPair bg_;
  Field w_;               // plain trapezoid weights
  Field ln_w_;            // log of w_
  Field ln_u_, ln_v_;     // log weight functions
  Field p1_, p2_;         // source fields u0i'' (with 1/tan^2 on p1_)
  double t2_;             // tan^2 theta
  double target_a_, target_b_;
  double const_term_;
};

struct EwResult {
  Profile profile;  // eta1, eta2, v1, v2, w, phi, P, Z, dP, dZ
  double mean1 = 0.0, mean2 = 0.0;
  double xi1 = 0.0, xi2 = 0.0;  // recovered multipliers, expected (-1, 4)
  double constraint_residual_1 = 0.0, constraint_residual_2 = 0.0;  // relative
  double integral_w_sq = 0.0, integral_phi_sq = 0.0;
  double expected_w_sq = 0.0, expected_phi_sq = 0.0;
  double restart_spread = 0.0;  // max sup-norm disagreement across restarts
  ConvergenceRecord convergence;
};

struct EwMinimizeOptions {
  double tol = 1e-8;
  int max_iterations = 60000;
  int restarts = 1;            // total starts; first is eta_dot = 0
  double restart_scale = 0.5;  // amplitude of the random smooth starts
  unsigned seed = 12345;
};

/// Constrained minimization via the mean-elimination of the constraints, over
/// mean-zero pairs; the measure exponent must satisfy beta < min{|a2|,|b2|}.
EwResult minimize_constrained(const EwParams& params, const EwAsymptotics& asym, const Grid& grid,
                              const wspace::WeightedMeasure& measure,
                              const EwMinimizeOptions& opts = {});

/// Rebuilds (w, phi, P, Z) from converged eta fields.
Profile reconstruct_fields(const Field& eta1, const Field& eta2, const EwParams& params,
                           const EwAsymptotics& asym, const Grid& grid);

std::pair<double, double> recover_multipliers(const EwResult& result, const EwParams& params,
                                              const EwAsymptotics& asym,
                                              const wspace::WeightedMeasure& measure);

struct EwTailSummary {
  TailFit fit;
  double expected_quadratic = 0.0;  // 0 for the w^2 fits
  double expected_linear = 0.0;
  bool flagged = false;
};

struct EwDecayReport {
  EwTailSummary w_right, w_left;      // linear fits of ln w^2
  EwTailSummary phi_right, phi_left;  // quadratic fits of ln phi^2
  double integral_w_sq = 0.0, integral_phi_sq = 0.0;
  double expected_w_sq = 0.0, expected_phi_sq = 0.0;
};

EwDecayReport decay_report(const EwResult& result, const EwParams& params,
                                    const EwAsymptotics& asym);

/// [-L, L] with lambda L^2 / 2 > 60 and min{|a2|,|b2|} L > 30.
Grid default_grid(const EwParams& params, const EwAsymptotics& asym, Eigen::Index n = 6001);

}  // namespace walls::ew
