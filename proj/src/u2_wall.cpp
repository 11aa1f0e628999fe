#include "walls/u2_wall.hpp"

#include "walls/finite_diff.hpp"
#include "walls/quadrature.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>

namespace walls::u2 {

KappaPair kappa_constants(const U2Asymptotics& a, double gamma) {
  const double s1 = a.alpha1 + a.beta1;
  const double s2 = a.alpha2 + a.beta2;
  return {((1.0 + gamma) * s1 + (gamma - 1.0) * s2) / (2.0 * gamma),
          ((gamma - 1.0) * s1 + (1.0 + gamma) * s2) / (2.0 * gamma)};
}

U2Functional::U2Functional(const U2Params& params, const U2Asymptotics& asym, const Grid& grid)
    : params_(params),
      asym_(asym),
      grid_(grid),
      bg_(wspace::BackgroundPair::build(grid, asym.alpha1, asym.alpha2, asym.beta1, asym.beta2,
                                        params.lambda())),
      kappas_(kappa_constants(asym, params.gamma)) {
  params_.validate();
  const double g = params_.gamma;
  w_ = trapezoid_weights(grid.n(), grid.h());
  s1_ = ((1.0 + g) * bg_.u01_dd + (g - 1.0) * bg_.u02_dd) / (4.0 * g);
  s2_ = ((g - 1.0) * bg_.u01_dd + (1.0 + g) * bg_.u02_dd) / (4.0 * g);
  ln_e1_ = bg_.u01 - bg_.omega;
  ln_e2_ = bg_.u02 - bg_.omega;
  a_ = (1.0 + g) / (4.0 * g);
  b_ = (g - 1.0) / (4.0 * g);
}

double U2Functional::value_unchecked(const Eigen::Ref<const Field>& eta1,
                                     const Eigen::Ref<const Field>& eta2) const {
  const Eigen::Index n = grid_.n();
  const double h = grid_.h();
  const Field d1 = (eta1.tail(n - 1) - eta1.head(n - 1)) / h;
  const Field d2 = (eta2.tail(n - 1) - eta2.head(n - 1)) / h;
  const double kinetic =
      h * (0.5 * a_ * (d1.square().sum() + d2.square().sum()) + b_ * (d1 * d2).sum());
  const double pot =
      params_.lambda() * (w_ * ((eta1 + ln_e1_).exp() + (eta2 + ln_e2_).exp())).sum();
  const double source = (w_ * (s1_ * eta1 + s2_ * eta2)).sum();
  return kinetic + pot - source;
}

double U2Functional::value(const Eigen::Ref<const Field>& eta1,
                           const Eigen::Ref<const Field>& eta2) const {
  if (eta1.size() != grid_.n() || eta2.size() != grid_.n())
    throw std::invalid_argument("U2Functional: field size mismatch");
  const double f = value_unchecked(eta1, eta2);
  if (!std::isfinite(f)) {
    Eigen::Index i;
    (eta1 + ln_e1_).maxCoeff(&i);
    throw std::overflow_error("U2Functional: exponential overflow near x = " +
                              std::to_string(grid_.x(i)));
  }
  return f;
}

void U2Functional::gradient(const Eigen::Ref<const Field>& eta1,
                            const Eigen::Ref<const Field>& eta2, Field& g1, Field& g2) const {
  const Eigen::Index n = grid_.n();
  const double h = grid_.h();
  const Field d1 = (eta1.tail(n - 1) - eta1.head(n - 1)) / h;
  const Field d2 = (eta2.tail(n - 1) - eta2.head(n - 1)) / h;
  const Field q1 = a_ * d1 + b_ * d2;  // kinetic-form conjugate slopes
  const Field q2 = b_ * d1 + a_ * d2;

  g1.setZero(n);
  g2.setZero(n);
  g1.head(n - 1) -= q1;
  g1.tail(n - 1) += q1;
  g2.head(n - 1) -= q2;
  g2.tail(n - 1) += q2;

  g1 += w_ * (params_.lambda() * (eta1 + ln_e1_).exp() - s1_);
  g2 += w_ * (params_.lambda() * (eta2 + ln_e2_).exp() - s2_);
}

void U2Functional::l2_gradient(const Eigen::Ref<const Field>& eta1,
                               const Eigen::Ref<const Field>& eta2, Field& g1, Field& g2) const {
  gradient(eta1, eta2, g1, g2);
  g1 /= w_;
  g2 /= w_;
}

double U2Functional::exp_integral_1(const Eigen::Ref<const Field>& eta1) const {
  return (w_ * (eta1 + ln_e1_).exp()).sum();
}

double U2Functional::exp_integral_2(const Eigen::Ref<const Field>& eta2) const {
  return (w_ * (eta2 + ln_e2_).exp()).sum();
}

ObjectiveFn U2Functional::objective() const {
  const Eigen::Index n = grid_.n();
  return [this, n](const Eigen::VectorXd& z, Eigen::VectorXd& grad) {
    Eigen::Map<const Field> eta1(z.data(), n);
    Eigen::Map<const Field> eta2(z.data() + n, n);
    const double f = value_unchecked(eta1, eta2);
    if (!std::isfinite(f)) return std::numeric_limits<double>::infinity();
    Field g1, g2;
    gradient(eta1, eta2, g1, g2);
    grad.resize(2 * n);
    grad.head(n) = g1.matrix();
    grad.tail(n) = g2.matrix();
    return f;
  };
}

Eigen::SparseMatrix<double> U2Functional::hessian(const Eigen::Ref<const Field>& eta1,
                                                  const Eigen::Ref<const Field>& eta2) const {
  const Eigen::Index n = grid_.n();
  const double h = grid_.h();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(14 * n));

  // cell stiffness: for each cell the quadratic form (1/h) [a d^2 ... ]
  const double ka = a_ / h, kb = b_ / h;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    for (int s = 0; s < 2; ++s) {      // block row offset (eta1 / eta2)
      const Eigen::Index r0 = s * n;
      const Eigen::Index c_same = s * n, c_other = (1 - s) * n;
      trip.emplace_back(r0 + i, c_same + i, ka);
      trip.emplace_back(r0 + i + 1, c_same + i + 1, ka);
      trip.emplace_back(r0 + i, c_same + i + 1, -ka);
      trip.emplace_back(r0 + i + 1, c_same + i, -ka);
      trip.emplace_back(r0 + i, c_other + i, kb);
      trip.emplace_back(r0 + i + 1, c_other + i + 1, kb);
      trip.emplace_back(r0 + i, c_other + i + 1, -kb);
      trip.emplace_back(r0 + i + 1, c_other + i, -kb);
    }
  }
  const Field diag1 = w_ * params_.lambda() * (eta1 + ln_e1_).exp();
  const Field diag2 = w_ * params_.lambda() * (eta2 + ln_e2_).exp();
  for (Eigen::Index i = 0; i < n; ++i) {
    trip.emplace_back(i, i, diag1[i]);
    trip.emplace_back(n + i, n + i, diag2[i]);
  }

  Eigen::SparseMatrix<double> hess(2 * n, 2 * n);
  hess.setFromTriplets(trip.begin(), trip.end());
  return hess;
}

namespace {

// Quasi-Newton iterations floor a little above 1e-8 in the gradient infinity
// norm because objective differences fall below double rounding there; a few
// damped Newton steps with the exact sparse Hessian finish the job.
void newton_polish(const U2Functional& fn, const ObjectiveFn& obj, Eigen::VectorXd& z,
                   double tol, int max_steps, ConvergenceRecord& rec) {
  const Eigen::Index n = fn.grid().n();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  Eigen::VectorXd g(2 * n);
  double f = obj(z, g);
  for (int it = 0; it < max_steps; ++it) {
    const double gnorm = g.lpNorm<Eigen::Infinity>();
    rec.grad_inf_norm = gnorm;
    rec.value = f;
    if (gnorm <= tol) {
      rec.converged = true;
      rec.message += " + newton polish (" + std::to_string(it) + " steps)";
      return;
    }
    Eigen::Map<const Field> e1(z.data(), n), e2(z.data() + n, n);
    solver.compute(fn.hessian(e1, e2));
    if (solver.info() != Eigen::Success) return;
    const Eigen::VectorXd d = solver.solve(-g);
    if (!(g.dot(d) < 0.0)) return;

    double alpha = 1.0;
    bool accepted = false;
    Eigen::VectorXd zt, gt(2 * n);
    for (int ls = 0; ls < 20; ++ls, alpha *= 0.5) {
      zt = z + alpha * d;
      const double ft = obj(zt, gt);
      if (!std::isfinite(ft)) continue;
      if (ft < f || gt.norm() < g.norm()) {
        z.swap(zt);
        g.swap(gt);
        f = ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) return;
  }
  rec.grad_inf_norm = g.lpNorm<Eigen::Infinity>();
  rec.converged = rec.grad_inf_norm <= tol;
}

}  // namespace

U2Result minimize(const U2Params& params, const U2Asymptotics& asym, const Grid& grid,
                  const wspace::WeightedMeasure& measure, const U2MinimizeOptions& opts) {
  params.validate();
  const KappaPair kap = kappa_constants(asym, params.gamma);
  if (!(kap.k1 > 0.0 && kap.k2 > 0.0))
    throw std::invalid_argument(
        "u2::minimize: existence condition violated, needs kappa_1 > 0 and kappa_2 > 0 "
        "(kappa_1 = " +
        std::to_string(kap.k1) + ", kappa_2 = " + std::to_string(kap.k2) + ")");

  const U2Functional fn(params, asym, grid);
  const Eigen::Index n = grid.n();

  Eigen::VectorXd z0 = Eigen::VectorXd::Zero(2 * n);
  if (opts.init1) z0.head(n) = opts.init1->matrix();
  if (opts.init2) z0.tail(n) = opts.init2->matrix();

  LbfgsOptions lopts;
  lopts.grad_tol_inf = std::max(opts.tol, 1e-3);
  lopts.max_iterations = opts.max_iterations;
  LbfgsResult sol = minimize_lbfgs(fn.objective(), std::move(z0), lopts);
  if (sol.record.grad_inf_norm > opts.tol)
    newton_polish(fn, fn.objective(), sol.x, opts.tol, 50, sol.record);

  Field eta1 = Eigen::Map<const Field>(sol.x.data(), n);
  Field eta2 = Eigen::Map<const Field>(sol.x.data() + n, n);

  U2Result out{Profile(grid), kap};
  const double lambda = params.lambda();
  const double i1 = fn.exp_integral_1(eta1);
  const double i2 = fn.exp_integral_2(eta2);
  out.integral_q1_sq = params.xi * i1;
  out.integral_q2_sq = params.xi * i2;
  out.expected_q1_sq = kap.k1 / (params.e * params.e);
  out.expected_q2_sq = kap.k2 / (params.e * params.e);
  out.identity_residual_1 = std::abs(lambda * i1 - 0.5 * kap.k1) / (0.5 * kap.k1);
  out.identity_residual_2 = std::abs(lambda * i2 - 0.5 * kap.k2) / (0.5 * kap.k2);
  out.hnorm_eta1 = wspace::hnorm_sq(eta1, measure);
  out.hnorm_eta2 = wspace::hnorm_sq(eta2, measure);
  out.convergence = sol.record;

  const auto& bg = fn.backgrounds();
  out.profile.add("u1", eta1 + bg.u01 - bg.omega);
  out.profile.add("u2", eta2 + bg.u02 - bg.omega);
  out.profile.add("eta1", std::move(eta1));
  out.profile.add("eta2", std::move(eta2));
  if (!sol.record.converged)
    out.profile.warn("minimize did not reach tolerance: " + sol.record.message);
  return out;
}

namespace {

TailSummary fit_log_q_sq(const Grid& grid, const Field& u, double lnxi, double lo, double hi,
                         double expected_quad, double expected_lin) {
  TailSummary s;
  s.fit = fit_tail(grid, Field(u + lnxi), lo, hi, TailModel::linear_plus_quadratic);
  s.expected_quadratic = expected_quad;
  s.expected_linear = expected_lin;
  s.flagged = s.fit.residual_rms > 1e-3 * (1.0 + std::abs(s.fit.intercept()));
  return s;
}

}  // namespace

U2DecayReport decay_report(const U2Result& result, const U2Params& params,
                                 const U2Asymptotics& asym) {
  const Grid& grid = result.profile.grid;
  const double lambda = params.lambda();
  const double lnxi = std::log(params.xi);
  const double r_lo = std::max(2.0, 0.45 * grid.x_max());
  const double r_hi = 0.9 * grid.x_max();
  const double l_hi = std::min(-2.0, 0.45 * grid.x_min());
  const double l_lo = 0.9 * grid.x_min();

  U2DecayReport rep;
  rep.right1 = fit_log_q_sq(grid, result.profile.field("u1"), lnxi, r_lo, r_hi, -lambda,
                            asym.alpha1);
  rep.right2 = fit_log_q_sq(grid, result.profile.field("u2"), lnxi, r_lo, r_hi, -lambda,
                            asym.alpha2);
  rep.left1 = fit_log_q_sq(grid, result.profile.field("u1"), lnxi, l_lo, l_hi, -lambda,
                           -asym.beta1);
  rep.left2 = fit_log_q_sq(grid, result.profile.field("u2"), lnxi, l_lo, l_hi, -lambda,
                           -asym.beta2);

  const auto offset = static_cast<Eigen::Index>(std::llround(1.0 / grid.h()));
  const Field& e1 = result.profile.field("eta1");
  const Field& e2 = result.profile.field("eta2");
  rep.eta1_flatness = std::abs(e1[grid.n() - 1] - e1[grid.n() - 1 - offset]);
  rep.eta2_flatness = std::abs(e2[grid.n() - 1] - e2[grid.n() - 1 - offset]);

  rep.integral_q1_sq = result.integral_q1_sq;
  rep.integral_q2_sq = result.integral_q2_sq;
  rep.expected_q1_sq = result.expected_q1_sq;
  rep.expected_q2_sq = result.expected_q2_sq;
  return rep;
}

Grid default_grid(const U2Params& params, Eigen::Index n) {
  const double half = std::max(15.0, std::sqrt(125.0 / params.lambda()));
  return Grid(-half, half, n);
}

}  // namespace walls::u2
