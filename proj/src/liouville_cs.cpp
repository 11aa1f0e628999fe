#include "walls/liouville_cs.hpp"

#include "walls/log_stable.hpp"
#include "walls/quadrature.hpp"

#include <cmath>

namespace walls::cs {

namespace {

void require_pos_kappa(double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("jp_exact: kappa must be > 0");
}

void require_neg_kappa(double kappa) {
  if (!(kappa < 0.0)) throw std::invalid_argument("jp_exact_negk: kappa must be < 0");
}

void require_lump_u0(double u0) {
  if (!(u0 < 0.0)) throw std::invalid_argument("rel_lump: u0 must be < 0");
}

}  // namespace

std::string SolutionFamily::label() const {
  switch (kind) {
    case Kind::jp_pos_kappa: return "jp_pos_kappa";
    case Kind::jp_neg_kappa: return "jp_neg_kappa";
    case Kind::rel_topological: return "rel_topological";
    case Kind::rel_lump: return "rel_lump";
  }
  return "unknown";
}

double jp_exact(double kappa, double x0, double u0, double x) {
  require_pos_kappa(kappa);
  const double t = std::exp(0.5 * u0) * (x - x0) / std::sqrt(kappa);
  return u0 - 2.0 * log_cosh(t);
}

double jp_exact_du(double kappa, double x0, double u0, double x) {
  require_pos_kappa(kappa);
  const double r = std::exp(0.5 * u0) / std::sqrt(kappa);
  return -2.0 * r * std::tanh(r * (x - x0));
}

Field jp_exact(double kappa, double x0, double u0, const Field& xs) {
  Field out(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) out[i] = jp_exact(kappa, x0, u0, xs[i]);
  return out;
}

namespace {

double negk_rate(double kappa, double u0) { return std::exp(0.5 * u0) / std::sqrt(-kappa); }

void require_negk_domain(double kappa, double x0, double u0, double x) {
  if (std::abs(x - x0) >= jp_negk_halfwidth(kappa, u0))
    throw std::domain_error("jp_exact_negk: x outside the maximal existence interval");
}

}  // namespace

double jp_negk_halfwidth(double kappa, double u0) {
  require_neg_kappa(kappa);
  return 0.5 * M_PI / negk_rate(kappa, u0);
}

double jp_exact_negk(double kappa, double x0, double u0, double x) {
  require_neg_kappa(kappa);
  require_negk_domain(kappa, x0, u0, x);
  return u0 - 2.0 * std::log(std::cos(negk_rate(kappa, u0) * (x - x0)));
}

double jp_exact_negk_du(double kappa, double x0, double u0, double x) {
  require_neg_kappa(kappa);
  require_negk_domain(kappa, x0, u0, x);
  const double r = negk_rate(kappa, u0);
  return 2.0 * r * std::tan(r * (x - x0));
}

Field jp_exact_negk(double kappa, double x0, double u0, const Field& xs) {
  Field out(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) out[i] = jp_exact_negk(kappa, x0, u0, xs[i]);
  return out;
}

double rel_topwall_u(double lambda, double x0, double u0, double x) {
  if (!(u0 < 0.0)) throw std::invalid_argument("rel_topwall: u0 must be < 0");
  const double s = u0 - std::sqrt(lambda) * (x - x0);
  return s - log_add_exp(std::log1p(-std::exp(u0)), s);
}

double rel_topwall_du(double lambda, double x0, double u0, double x) {
  return -std::sqrt(lambda) * (1.0 - std::exp(rel_topwall_u(lambda, x0, u0, x)));
}

Field rel_topwall_u(double lambda, double x0, double u0, const Field& xs) {
  Field out(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) out[i] = rel_topwall_u(lambda, x0, u0, xs[i]);
  return out;
}

double rel_topwall_phi(double lambda, double x0, double phi0, double x) {
  if (!(phi0 > 0.0 && phi0 < 1.0))
    throw std::invalid_argument("rel_topwall_phi: phi0 must lie in (0,1)");
  return std::exp(0.5 * rel_topwall_u(lambda, x0, 2.0 * std::log(phi0), x));
}

Field rel_topwall_phi(double lambda, double x0, double phi0, const Field& xs) {
  Field out(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) out[i] = rel_topwall_phi(lambda, x0, phi0, xs[i]);
  return out;
}

double lump_tail_rate(double lambda, double u0) {
  const double e0 = std::exp(u0);
  return std::sqrt(lambda * e0 * (2.0 - e0));
}

double rel_lump_u(double lambda, double x0, double u0, double x) {
  require_lump_u0(u0);
  const double e0 = std::exp(u0);
  const double a = -std::expm1(u0);  // 1 - e^{u0} > 0
  const double t = lump_tail_rate(lambda, u0) * (x - x0);
  return u0 + std::log(2.0 - e0) - log1p_a_cosh(a, t);
}

double rel_lump_du(double lambda, double x0, double u0, double x) {
  require_lump_u0(u0);
  const double a = -std::expm1(u0);
  const double rate = lump_tail_rate(lambda, u0);
  return -rate * a * sinh_over_1p_a_cosh(a, rate * (x - x0));
}

Field rel_lump_u(double lambda, double x0, double u0, const Field& xs) {
  Field out(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) out[i] = rel_lump_u(lambda, x0, u0, xs[i]);
  return out;
}

double rel_lump_phi(double lambda, double x0, double u0, double x) {
  return std::exp(0.5 * rel_lump_u(lambda, x0, u0, x));
}

double u0_from_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("u0_from_epsilon: eps must lie in (0,1)");
  const double root = std::sqrt((1.0 - eps) * (1.0 + eps));
  // 1 - sqrt(1 - eps^2) rewritten to avoid cancellation at small eps
  return std::log(eps * eps / (1.0 + root));
}

double rel_energy_density(const RelCSParams& p, double phi, double dphi) {
  const double v = phi * (1.0 - phi * phi);
  return 2.0 * dphi * dphi + 2.0 / (p.kappa * p.kappa) * v * v;
}

namespace {

// phi and phi' of the topological wall; phi' = phi u'/2 with the first-order
// relation u' = -sqrt(lambda)(1 - e^u).
struct TopWallEval {
  double lambda, x0, u0;
  void operator()(double x, double& phi, double& dphi) const {
    const double u = rel_topwall_u(lambda, x0, u0, x);
    phi = std::exp(0.5 * u);
    dphi = -0.5 * std::sqrt(lambda) * (1.0 - std::exp(u)) * phi;
  }
};

}  // namespace

WallEnergy wall_energy(const RelCSParams& p, double x0, double phi0, const Grid& grid) {
  const TopWallEval eval{p.lambda(), x0, 2.0 * std::log(phi0)};
  Field density(grid.n());
  for (Eigen::Index i = 0; i < grid.n(); ++i) {
    double phi, dphi;
    eval(grid.x(i), phi, dphi);
    density[i] = rel_energy_density(p, phi, dphi);
  }
  const QuadRule rule = grid.n() % 2 == 1 ? QuadRule::simpson : QuadRule::trapezoid;
  return {integrate(grid, density, rule), 1.0 / p.kappa};
}

double wall_energy_truncated(const RelCSParams& p, double x0, double phi0, double lo, double hi,
                             Eigen::Index n) {
  if (n % 2 == 0) ++n;
  return wall_energy(p, x0, phi0, Grid(lo, hi, n)).quadrature;
}

namespace {

void require_curve_phi0(double phi0) {
  if (!(phi0 > 0.0 && phi0 < 1.0))
    throw std::invalid_argument("lump energy: phi0 must lie in (0,1)");
}

double lump_curve_rate(double lambda, double phi0) {
  return std::sqrt(lambda * phi0 * (2.0 - phi0));
}

}  // namespace

double lump_curve_phi(double lambda, double phi0, double x) {
  require_curve_phi0(phi0);
  const double a = 1.0 - phi0;
  const double t = lump_curve_rate(lambda, phi0) * x;
  // phi^2 = phi0^2 (2 - phi0) / (1 + (1 - phi0) cosh t), in log form for the tails
  const double log_phi2 =
      2.0 * std::log(phi0) + std::log(2.0 - phi0) - log1p_a_cosh(a, t);
  return std::exp(0.5 * log_phi2);
}

double lump_curve_dphi(double lambda, double phi0, double x) {
  require_curve_phi0(phi0);
  const double a = 1.0 - phi0;
  const double rate = lump_curve_rate(lambda, phi0);
  const double dlog = -rate * a * sinh_over_1p_a_cosh(a, rate * x);
  return 0.5 * lump_curve_phi(lambda, phi0, x) * dlog;
}

double lump_halfline_integral(const RelCSParams& p, double phi0, double lo, double hi,
                              Eigen::Index n) {
  require_curve_phi0(phi0);
  if (n % 2 == 0) ++n;
  const double lambda = p.lambda();
  const Grid grid(lo, hi, n);
  Field f(grid.n());
  for (Eigen::Index i = 0; i < grid.n(); ++i) {
    const double x = grid.x(i);
    const double phi = lump_curve_phi(lambda, phi0, x);
    const double dphi = lump_curve_dphi(lambda, phi0, x);
    const double q = dphi + phi * (1.0 - phi * phi) / p.kappa;
    f[i] = q * q;
  }
  return integrate(grid, f, QuadRule::simpson);
}

LumpEnergy lump_energy(const RelCSParams& p, double phi0) {
  require_curve_phi0(phi0);
  const double rate = lump_curve_rate(p.lambda(), phi0);
  const double t_max = 50.0 / rate + 10.0;
  const double s = 1.0 - phi0 * phi0;
  LumpEnergy e;
  e.halfline_integral = lump_halfline_integral(p, phi0, 0.0, t_max);
  e.boundary_term = (2.0 / p.kappa) * (1.0 - s * s);
  e.split_total = 4.0 * e.halfline_integral + e.boundary_term;
  return e;
}

double lump_energy_truncated(const RelCSParams& p, double phi0, double half, Eigen::Index n) {
  require_curve_phi0(phi0);
  if (n % 2 == 0) ++n;
  const double lambda = p.lambda();
  const Grid grid(-half, half, n);
  Field f(grid.n());
  for (Eigen::Index i = 0; i < grid.n(); ++i) {
    const double x = grid.x(i);
    f[i] = rel_energy_density(p, lump_curve_phi(lambda, phi0, x), lump_curve_dphi(lambda, phi0, x));
  }
  return integrate(grid, f, QuadRule::simpson);
}

double lump_exact_energy(const RelCSParams& p, double u0) {
  require_lump_u0(u0);
  const double e0 = std::exp(u0);
  return (2.0 / p.kappa) * std::sqrt(e0 * (2.0 - e0));
}

Charges charges(const RelCSParams& p, double x0, double phi0, const Grid& grid) {
  Field f(grid.n());
  for (Eigen::Index i = 0; i < grid.n(); ++i) {
    const double phi = rel_topwall_phi(p.lambda(), x0, phi0, grid.x(i));
    const double phi2 = phi * phi;
    f[i] = 2.0 / (p.kappa * p.kappa) * phi2 * (1.0 - phi2);
  }
  const QuadRule rule = grid.n() % 2 == 1 ? QuadRule::simpson : QuadRule::trapezoid;
  Charges q;
  q.q_magnetic = integrate(grid, f, rule);
  q.q_electric = p.kappa * q.q_magnetic;
  return q;
}

Grid quadrature_grid(const RelCSParams& p, double x0) {
  const double half = 45.0 / std::sqrt(p.lambda()) + 5.0;
  return Grid(x0 - half, x0 + half, 100001);
}

}  // namespace walls::cs
