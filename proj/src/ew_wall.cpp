#include "walls/ew_wall.hpp"

#include "walls/finite_diff.hpp"
#include "walls/quadrature.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <random>

namespace walls::ew {

namespace {

double log_sum_exp(const Field& arg) {
  const double m = arg.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((arg - m).exp().sum());
}

}  // namespace

void validate(const EwAsymptotics& a, const EwParams& p) {
  p.validate();
  const double t2 = p.tan_sq();
  const double sum1 = a.alpha1 + a.beta1;
  if (!(a.alpha2 < 0.0 && a.beta2 < 0.0))
    throw std::invalid_argument("existence condition violated: alpha2 < 0 and beta2 < 0 required");
  if (!(sum1 > 0.0))
    throw std::invalid_argument("existence condition violated: alpha1 + beta1 > 0 required");
  const double sum2 = std::abs(a.alpha2) + std::abs(a.beta2);
  if (!(sum2 > sum1 / t2))
    throw std::invalid_argument(
        "existence condition violated: |alpha2| + |beta2| > (alpha1 + beta1)/tan^2(theta) "
        "required");
  const double m = std::min(std::abs(a.alpha2), std::abs(a.beta2));
  if (!(m + sum1 / t2 > sum2))
    throw std::invalid_argument(
        "existence condition violated: min{|alpha2|, |beta2|} + (alpha1 + beta1)/tan^2(theta) > "
        "|alpha2| + |beta2| required");
}

std::pair<double, double> constraint_targets(const EwAsymptotics& a, const EwParams& p) {
  // only the sign conditions the targets themselves need; the coercivity
  // window is enforced by the minimizer
  p.validate();
  if (!(a.alpha2 < 0.0 && a.beta2 < 0.0))
    throw std::invalid_argument("existence condition violated: alpha2 < 0 and beta2 < 0 required");
  const double sum1 = a.alpha1 + a.beta1;
  if (!(sum1 > 0.0))
    throw std::invalid_argument("existence condition violated: alpha1 + beta1 > 0 required");
  const double sum2 = std::abs(a.alpha2) + std::abs(a.beta2);
  const double derived = sum2 - sum1 / p.tan_sq();
  if (!(derived > 0.0))
    throw std::invalid_argument(
        "existence condition violated: |alpha2| + |beta2| > (alpha1 + beta1)/tan^2(theta) "
        "required");
  return {sum1, derived};
}

double gamma1(const EwAsymptotics& a, const EwParams& p) {
  return (a.alpha1 + a.beta1) / (p.g * p.g * p.phi0 * p.phi0 * p.tan_sq());
}

double gamma2(const EwAsymptotics& a, const EwParams& p) {
  return constraint_targets(a, p).second / (4.0 * p.g * p.g);
}

double default_measure_beta(const EwAsymptotics& a) {
  return 0.5 * std::min(std::abs(a.alpha2), std::abs(a.beta2));
}

std::pair<Field, Field> to_u_variables(const Field& v1, const Field& v2) {
  return {v1 + 2.0 * v2, v1};
}

std::pair<Field, Field> to_v_variables(const Field& u1, const Field& u2) {
  return {u2, 0.5 * (u1 - u2)};
}

std::pair<Field, Field> weights_UV(const wspace::BackgroundPair& bg) {
  if (!(bg.b2.alpha() < 0.0 && bg.b2.beta_slope() < 0.0))
    throw std::invalid_argument("weights_UV: alpha2 and beta2 must be negative");
  return {(0.5 * (bg.u01 - bg.u02 - bg.omega)).exp(), bg.u02.exp()};
}

EwFunctional::EwFunctional(const EwParams& params, const EwAsymptotics& asym, const Grid& grid,
                           const wspace::WeightedMeasure& measure)
    : params_(params),
      asym_(asym),
      grid_(grid),
      measure_(measure),
      bg_(wspace::BackgroundPair::build(grid, asym.alpha1, asym.alpha2, asym.beta1, asym.beta2,
                                        params.lambda())) {
  validate(asym, params);
  if (measure.grid().n() != grid.n() || measure.grid().x_min() != grid.x_min() ||
      measure.grid().x_max() != grid.x_max())
    throw std::invalid_argument("EwFunctional: measure grid differs from the solve grid");
  const double min_slope = std::min(std::abs(asym.alpha2), std::abs(asym.beta2));
  if (!(measure.beta() < min_slope))
    throw std::invalid_argument(
        "EwFunctional: weight exponent beta must satisfy beta < min{|alpha2|, |beta2|}");

  t2_ = params.tan_sq();
  w_ = trapezoid_weights(grid.n(), grid.h());
  ln_w_ = w_.log();
  ln_u_ = 0.5 * (bg_.u01 - bg_.u02 - bg_.omega);
  ln_v_ = bg_.u02;
  p1_ = bg_.u01_dd / t2_;
  p2_ = bg_.u02_dd;

  const auto [a, b] = constraint_targets(asym, params);
  target_a_ = a;
  target_b_ = b;
  const double sum2 = std::abs(asym.alpha2) + std::abs(asym.beta2);
  const double g1c = ew::gamma1(asym, params);
  const double g2c = ew::gamma2(asym, params);
  const_term_ = -(a / t2_) * (2.0 * std::log(g1c) + std::log(g2c)) + sum2 * std::log(g2c);
}

void EwFunctional::require_mean_zero(const Eigen::Ref<const Field>& e, const char* which) const {
  const double m = measure_.integrate(e);
  const double scale = measure_.mu_total() * (1.0 + e.abs().maxCoeff());
  if (std::abs(m) > 1e-8 * scale)
    throw std::invalid_argument(std::string("EwFunctional: ") + which +
                                " is not mean-zero for d-mu");
}

double EwFunctional::value_unchecked(const Eigen::Ref<const Field>& e1,
                                     const Eigen::Ref<const Field>& e2, double* ln_su,
                                     double* ln_sv) const {
  const Eigen::Index n = grid_.n();
  const double h = grid_.h();
  const Field d1 = (e1.tail(n - 1) - e1.head(n - 1)) / h;
  const Field d2 = (e2.tail(n - 1) - e2.head(n - 1)) / h;
  const double kinetic = h * (0.5 / t2_ * d1.square().sum() + 0.5 * d2.square().sum());
  const double source = (w_ * (p1_ * e1 + p2_ * e2)).sum();
  const double lsu = log_sum_exp(ln_u_ + 0.5 * (e1 - e2) + ln_w_);
  const double lsv = log_sum_exp(ln_v_ + e2 + ln_w_);
  if (ln_su) *ln_su = lsu;
  if (ln_sv) *ln_sv = lsv;
  return kinetic - source + (2.0 * target_a_ / t2_) * lsu - target_b_ * lsv + const_term_;
}

double EwFunctional::value(const Eigen::Ref<const Field>& eta1_dot,
                           const Eigen::Ref<const Field>& eta2_dot) const {
  require_mean_zero(eta1_dot, "eta1_dot");
  require_mean_zero(eta2_dot, "eta2_dot");
  return value_unchecked(eta1_dot, eta2_dot, nullptr, nullptr);
}

void EwFunctional::gradient(const Eigen::Ref<const Field>& eta1_dot,
                            const Eigen::Ref<const Field>& eta2_dot, Field& g1, Field& g2) const {
  const Eigen::Index n = grid_.n();
  const double h = grid_.h();
  const Field d1 = (eta1_dot.tail(n - 1) - eta1_dot.head(n - 1)) / h;
  const Field d2 = (eta2_dot.tail(n - 1) - eta2_dot.head(n - 1)) / h;

  const Field arg_u = ln_u_ + 0.5 * (eta1_dot - eta2_dot) + ln_w_;
  const Field arg_v = ln_v_ + eta2_dot + ln_w_;
  const Field r_u = (arg_u - log_sum_exp(arg_u)).exp();  // w U e^{..} / S_U
  const Field r_v = (arg_v - log_sum_exp(arg_v)).exp();

  g1.setZero(n);
  g2.setZero(n);
  g1.head(n - 1) -= d1 / t2_;
  g1.tail(n - 1) += d1 / t2_;
  g2.head(n - 1) -= d2;
  g2.tail(n - 1) += d2;

  g1 += -w_ * p1_ + (target_a_ / t2_) * r_u;
  g2 += -w_ * p2_ - (target_a_ / t2_) * r_u - target_b_ * r_v;
}

std::pair<double, double> EwFunctional::recover_means(
    const Eigen::Ref<const Field>& eta1_dot, const Eigen::Ref<const Field>& eta2_dot) const {
  double lsu, lsv;
  value_unchecked(eta1_dot, eta2_dot, &lsu, &lsv);
  const double m2 = std::log(ew::gamma2(asym_, params_)) - lsv;
  const double m1 = m2 + 2.0 * std::log(ew::gamma1(asym_, params_)) - 2.0 * lsu;
  return {m1, m2};
}

std::pair<double, double> EwFunctional::constraint_values(
    const Eigen::Ref<const Field>& eta1, const Eigen::Ref<const Field>& eta2) const {
  const double g2 = params_.g * params_.g;
  const double c1 = g2 * params_.phi0 * params_.phi0 * t2_ *
                    std::exp(log_sum_exp(ln_u_ + 0.5 * (eta1 - eta2) + ln_w_));
  const double c2 = 4.0 * g2 * std::exp(log_sum_exp(ln_v_ + eta2 + ln_w_));
  return {c1, c2};
}

ObjectiveFn EwFunctional::objective() const {
  const Eigen::Index n = grid_.n();
  // minimize over the mean-zero subspace: evaluate at the projected point and
  // report the projected gradient, so the tiny constant component coming from
  // source-term quadrature cannot floor the convergence test
  return [this, n](const Eigen::VectorXd& z, Eigen::VectorXd& grad) {
    Field e1 = Eigen::Map<const Field>(z.data(), n);
    Field e2 = Eigen::Map<const Field>(z.data() + n, n);
    e1 -= measure_.mean(e1);
    e2 -= measure_.mean(e2);
    const double f = value_unchecked(e1, e2, nullptr, nullptr);
    if (!std::isfinite(f)) return std::numeric_limits<double>::infinity();
    Field g1, g2;
    gradient(e1, e2, g1, g2);
    const Field& wmu = measure_.weights();
    g1 -= (g1.sum() / measure_.mu_total()) * wmu;
    g2 -= (g2.sum() / measure_.mu_total()) * wmu;
    grad.resize(2 * n);
    grad.head(n) = g1.matrix();
    grad.tail(n) = g2.matrix();
    return f;
  };
}

std::function<void(Eigen::VectorXd&)> EwFunctional::projector() const {
  const Eigen::Index n = grid_.n();
  return [this, n](Eigen::VectorXd& z) {
    Eigen::Map<Field> e1(z.data(), n);
    Eigen::Map<Field> e2(z.data() + n, n);
    e1 -= measure_.mean(e1);
    e2 -= measure_.mean(e2);
  };
}

std::pair<double, double> EwFunctional::multipliers(const Eigen::Ref<const Field>& eta1,
                                                    const Eigen::Ref<const Field>& eta2) const {
  const Eigen::Index n = grid_.n();
  const double h = grid_.h();
  const Field d1 = (eta1.tail(n - 1) - eta1.head(n - 1)) / h;
  const Field d2 = (eta2.tail(n - 1) - eta2.head(n - 1)) / h;

  Field r1 = -(w_ * p1_);
  Field r2 = -(w_ * p2_);
  r1.head(n - 1) -= d1 / t2_;
  r1.tail(n - 1) += d1 / t2_;
  r2.head(n - 1) -= d2;
  r2.tail(n - 1) += d2;

  const double g2 = params_.g * params_.g;
  const Field cu = g2 * params_.phi0 * params_.phi0 *
                   (ln_w_ + ln_u_ + 0.5 * (eta1 - eta2)).exp();  // w g^2 phi0^2 U e^{..}
  const Field cv = g2 * (ln_w_ + ln_v_ + eta2).exp();            // w g^2 V e^{eta2}

  Eigen::Matrix2d ata;
  ata(0, 0) = 2.0 * cu.square().sum();
  ata(0, 1) = ata(1, 0) = -(cu * cv).sum();
  ata(1, 1) = cv.square().sum();
  Eigen::Vector2d atb((cu * r1).sum() - (cu * r2).sum(), (cv * r2).sum());

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(ata);
  if (es.eigenvalues()(0) < 1e-12 * es.eigenvalues()(1))
    throw std::runtime_error("recover_multipliers: constraint gradients numerically dependent");
  const Eigen::Vector2d xi = ata.ldlt().solve(atb);
  return {xi(0), xi(1)};
}

Profile reconstruct_fields(const Field& eta1, const Field& eta2, const EwParams& params,
                           const EwAsymptotics& asym, const Grid& grid) {
  const auto bg = wspace::BackgroundPair::build(grid, asym.alpha1, asym.alpha2, asym.beta1,
                                                asym.beta2, params.lambda());
  const Field u1 = eta1 + bg.u01 - bg.omega;
  const Field u2 = eta2 + bg.u02;
  const auto [v1, v2] = to_v_variables(u1, u2);

  const double h = grid.h();
  const double ct = std::sqrt(params.cos_sq());
  const double st = std::sqrt(1.0 - params.cos_sq());
  const Field dv1 = deriv1_all(v1, h);
  const Field dv2 = deriv1_all(v2, h);
  const Field z_field = (ct / params.g) * dv2;
  const Field p_field = -(0.5 * dv1 / params.g + ct * z_field) / st;

  Profile out(grid);
  out.add("eta1", eta1);
  out.add("eta2", eta2);
  out.add("v1", v1);
  out.add("v2", v2);
  out.add("w", (0.5 * v1).exp());
  out.add("phi", params.phi0 * (0.5 * v2).exp());
  out.add("P", p_field);
  out.add("Z", z_field);
  out.add("dP", deriv1_all(p_field, h));
  out.add("dZ", deriv1_all(z_field, h));
  return out;
}

namespace {

// Newton polish for the reduced functional. The Hessian splits into a sparse
// part (kinetic stiffness plus the diagonal pieces of the two log-sum terms)
// and rank corrections handled with the Woodbury identity; two extra rank-one
// terms regularize the exact constant-shift null space.
class EwNewton {
 public:
  EwNewton(const EwFunctional& fn, const wspace::WeightedMeasure& measure, double target_a,
           double target_b, double t2, const Field& ln_w, const Field& ln_u, const Field& ln_v)
      : fn_(fn), measure_(measure), a_(target_a), b_(target_b), t2_(t2), ln_w_(ln_w),
        ln_u_(ln_u), ln_v_(ln_v) {}

  bool polish(const ObjectiveFn& obj, Eigen::VectorXd& z, double tol, int max_steps,
              ConvergenceRecord& rec) const {
    const Eigen::Index n = fn_.grid().n();
    Eigen::VectorXd g(2 * n);
    double f = obj(z, g);
    for (int it = 0; it < max_steps; ++it) {
      const double gnorm = g.lpNorm<Eigen::Infinity>();
      rec.grad_inf_norm = gnorm;
      rec.value = f;
      if (gnorm <= tol) {
        rec.converged = true;
        rec.message += " + newton polish (" + std::to_string(it) + " steps)";
        return true;
      }
      Eigen::VectorXd d;
      if (!direction(z, g, d)) return false;
      if (!(g.dot(d) < 0.0)) return false;

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
      if (!accepted) return false;
    }
    rec.grad_inf_norm = g.lpNorm<Eigen::Infinity>();
    rec.converged = rec.grad_inf_norm <= tol;
    return rec.converged;
  }

 private:
  bool direction(const Eigen::VectorXd& z, const Eigen::VectorXd& g, Eigen::VectorXd& d) const {
    const Eigen::Index n = fn_.grid().n();
    const double h = fn_.grid().h();
    Field e1 = Eigen::Map<const Field>(z.data(), n);
    Field e2 = Eigen::Map<const Field>(z.data() + n, n);
    e1 -= measure_.mean(e1);
    e2 -= measure_.mean(e2);

    const Field arg_u = ln_u_ + 0.5 * (e1 - e2) + ln_w_;
    const Field arg_v = ln_v_ + e2 + ln_w_;
    const double mu = arg_u.maxCoeff(), mv = arg_v.maxCoeff();
    Field sigma = (arg_u - mu).exp();
    sigma /= sigma.sum();
    Field rv = (arg_v - mv).exp();
    rv /= rv.sum();

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(12 * n));
    const double k1 = 1.0 / (t2_ * h), k2 = 1.0 / h;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      trip.emplace_back(i, i, k1);
      trip.emplace_back(i + 1, i + 1, k1);
      trip.emplace_back(i, i + 1, -k1);
      trip.emplace_back(i + 1, i, -k1);
      trip.emplace_back(n + i, n + i, k2);
      trip.emplace_back(n + i + 1, n + i + 1, k2);
      trip.emplace_back(n + i, n + i + 1, -k2);
      trip.emplace_back(n + i + 1, n + i, -k2);
    }
    const double cu_diag = 0.5 * a_ / t2_;  // (2A/t2) * 0.25
    for (Eigen::Index i = 0; i < n; ++i) {
      const double du = cu_diag * sigma[i];
      trip.emplace_back(i, i, du);
      trip.emplace_back(n + i, n + i, du - b_ * rv[i]);
      trip.emplace_back(i, n + i, -du);
      trip.emplace_back(n + i, i, -du);
    }
    Eigen::SparseMatrix<double> s_mat(2 * n, 2 * n);
    s_mat.setFromTriplets(trip.begin(), trip.end());

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(s_mat);
    if (lu.info() != Eigen::Success) return false;

    Eigen::MatrixXd u_cols = Eigen::MatrixXd::Zero(2 * n, 4);
    u_cols.col(0).head(n) = (0.5 * sigma).matrix();
    u_cols.col(0).tail(n) = (-0.5 * sigma).matrix();
    u_cols.col(1).tail(n) = rv.matrix();
    u_cols.col(2).head(n).setOnes();
    u_cols.col(3).tail(n).setOnes();
    Eigen::Vector4d c_diag(-2.0 * a_ / t2_, b_, 1.0 / static_cast<double>(n),
                           1.0 / static_cast<double>(n));

    const Eigen::VectorXd sr = lu.solve(-g);
    Eigen::MatrixXd su(2 * n, 4);
    for (int c = 0; c < 4; ++c) su.col(c) = lu.solve(u_cols.col(c));
    Eigen::Matrix4d inner = c_diag.cwiseInverse().asDiagonal();
    inner += u_cols.transpose() * su;
    d = sr - su * inner.fullPivLu().solve(u_cols.transpose() * sr);

    // keep the step in the mean-zero subspace
    Eigen::Map<Field> d1(d.data(), n), d2(d.data() + n, n);
    d1 -= measure_.mean(d1);
    d2 -= measure_.mean(d2);
    return d.allFinite();
  }

  const EwFunctional& fn_;
  const wspace::WeightedMeasure& measure_;
  double a_, b_, t2_;
  Field ln_w_, ln_u_, ln_v_;
};

}  // namespace

EwResult minimize_constrained(const EwParams& params, const EwAsymptotics& asym, const Grid& grid,
                              const wspace::WeightedMeasure& measure,
                              const EwMinimizeOptions& opts) {
  const EwFunctional fn(params, asym, grid, measure);
  const Eigen::Index n = grid.n();

  LbfgsOptions lopts;
  lopts.grad_tol_inf = opts.tol;
  lopts.max_iterations = opts.max_iterations;
  lopts.project = fn.projector();

  std::mt19937 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Field xs = grid.points();
  const double span = grid.x_max() - grid.x_min();

  const EwNewton newton(fn, measure, fn.target_a(), fn.target_b(), params.tan_sq(),
                        fn.ln_quad_weights(), fn.ln_weight_u(), fn.ln_weight_v());
  lopts.grad_tol_inf = std::max(opts.tol, 1e-3);

  std::vector<LbfgsResult> runs;
  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    Eigen::VectorXd z0 = Eigen::VectorXd::Zero(2 * n);
    if (r > 0) {  // smooth random start: a few low Fourier modes
      for (int block = 0; block < 2; ++block) {
        Field e = Field::Zero(n);
        for (int m = 1; m <= 4; ++m) {
          const double am = opts.restart_scale * gauss(rng) / m;
          const double bm = opts.restart_scale * gauss(rng) / m;
          e += am * (2.0 * M_PI * m * (xs - grid.x_min()) / span).cos() +
               bm * (2.0 * M_PI * m * (xs - grid.x_min()) / span).sin();
        }
        z0.segment(block * n, n) = e.matrix();
      }
    }
    LbfgsResult run = minimize_lbfgs(fn.objective(), std::move(z0), lopts);
    if (run.record.grad_inf_norm > opts.tol)
      newton.polish(fn.objective(), run.x, opts.tol, 50, run.record);
    runs.push_back(std::move(run));
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].record.value < runs[best].record.value) best = r;
  double spread = 0.0;
  for (const auto& r : runs) spread = std::max(spread, (r.x - runs[best].x).lpNorm<Eigen::Infinity>());

  Field e1dot = Eigen::Map<const Field>(runs[best].x.data(), n);
  Field e2dot = Eigen::Map<const Field>(runs[best].x.data() + n, n);
  const auto [m1, m2] = fn.recover_means(e1dot, e2dot);
  const Field eta1 = e1dot + m1;
  const Field eta2 = e2dot + m2;

  const auto [c1, c2] = fn.constraint_values(eta1, eta2);
  const auto [ta, tb] = constraint_targets(asym, params);
  const auto [xi1, xi2] = fn.multipliers(eta1, eta2);

  EwResult out{reconstruct_fields(eta1, eta2, params, asym, grid)};
  out.mean1 = m1;
  out.mean2 = m2;
  out.xi1 = xi1;
  out.xi2 = xi2;
  out.constraint_residual_1 = std::abs(c1 - ta) / std::abs(ta);
  out.constraint_residual_2 = std::abs(c2 - tb) / std::abs(tb);
  const double gsq = params.g * params.g;
  out.integral_w_sq = c2 / (4.0 * gsq);
  out.integral_phi_sq = c1 / (gsq * params.tan_sq());
  out.expected_w_sq = tb / (4.0 * gsq);
  out.expected_phi_sq = ta / (gsq * params.tan_sq());
  out.restart_spread = spread;
  out.convergence = runs[best].record;
  if (!out.convergence.converged)
    out.profile.warn("minimize did not reach tolerance: " + out.convergence.message);
  return out;
}

std::pair<double, double> recover_multipliers(const EwResult& result, const EwParams& params,
                                              const EwAsymptotics& asym,
                                              const wspace::WeightedMeasure& measure) {
  const EwFunctional fn(params, asym, result.profile.grid, measure);
  return fn.multipliers(result.profile.field("eta1"), result.profile.field("eta2"));
}

EwDecayReport decay_report(const EwResult& result, const EwParams& params,
                                    const EwAsymptotics& asym) {
  const Grid& grid = result.profile.grid;
  const double lambda = params.lambda();
  const Field& v1 = result.profile.field("v1");
  const Field ln_phi_sq = 2.0 * std::log(params.phi0) + result.profile.field("v2");

  const double r_lo = std::max(2.0, 0.45 * grid.x_max());
  const double r_hi = 0.9 * grid.x_max();
  const double l_hi = std::min(-2.0, 0.45 * grid.x_min());
  const double l_lo = 0.9 * grid.x_min();

  EwDecayReport rep;
  rep.w_right.fit = fit_tail(grid, v1, r_lo, r_hi, TailModel::linear);
  rep.w_right.expected_linear = asym.alpha2;
  rep.w_left.fit = fit_tail(grid, v1, l_lo, l_hi, TailModel::linear);
  rep.w_left.expected_linear = -asym.beta2;
  rep.phi_right.fit = fit_tail(grid, ln_phi_sq, r_lo, r_hi, TailModel::linear_plus_quadratic);
  rep.phi_right.expected_quadratic = -0.5 * lambda;
  rep.phi_right.expected_linear = 0.5 * (asym.alpha1 + std::abs(asym.alpha2));
  rep.phi_left.fit = fit_tail(grid, ln_phi_sq, l_lo, l_hi, TailModel::linear_plus_quadratic);
  rep.phi_left.expected_quadratic = -0.5 * lambda;
  rep.phi_left.expected_linear = -0.5 * (asym.beta1 + std::abs(asym.beta2));

  for (EwTailSummary* s : {&rep.w_right, &rep.w_left, &rep.phi_right, &rep.phi_left})
    s->flagged = s->fit.residual_rms > 1e-3 * (1.0 + std::abs(s->fit.intercept()));

  rep.integral_w_sq = result.integral_w_sq;
  rep.integral_phi_sq = result.integral_phi_sq;
  rep.expected_w_sq = result.expected_w_sq;
  rep.expected_phi_sq = result.expected_phi_sq;
  return rep;
}

Grid default_grid(const EwParams& params, const EwAsymptotics& asym, Eigen::Index n) {
  const double min_slope = std::min(std::abs(asym.alpha2), std::abs(asym.beta2));
  const double half =
      std::ceil(std::max(std::sqrt(120.0 / params.lambda()), 30.0 / min_slope)) + 1.0;
  return Grid(-half, half, n);
}

}  // namespace walls::ew
