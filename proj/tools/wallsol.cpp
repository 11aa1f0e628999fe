// wallsol: command-line driver for the domain-wall soliton solvers. Every
// subcommand writes a profile CSV and a summary JSON embedding the fully
// resolved configuration, so runs reproduce byte for byte.

#include "emit.hpp"

#include "walls/abelian_wall.hpp"
#include "walls/ew_wall.hpp"
#include "walls/finite_diff.hpp"
#include "walls/gradient_check.hpp"
#include "walls/liouville_cs.hpp"
#include "walls/quadrature.hpp"
#include "walls/residual_check.hpp"
#include "walls/u2_wall.hpp"
#include "walls/weighted_space.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <memory>

namespace wallsol {

using namespace walls;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConvergence = 2;
constexpr int kExitIo = 3;

// ---------------------------------------------------------------------------
// option binding shared by the CLI parser, --config files, and sweep
// ---------------------------------------------------------------------------

struct FieldMap {
  std::map<std::string, std::function<void(const Json&)>> setters;

  void apply(const Json& j, const std::string& context) const {
    if (!j.is_object()) throw std::invalid_argument(context + ": config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      auto it = setters.find(key);
      if (it == setters.end())
        throw std::invalid_argument(context + ": unknown config key '" + key + "'");
      it->second(value);
    }
  }
};

template <class T>
void bind_opt(CLI::App* app, FieldMap& fm, const std::string& name, T& var,
              const std::string& desc) {
  if (app) app->add_option("--" + name, var, desc);
  fm.setters[name] = [&var](const Json& v) { var = v.get<T>(); };
}

// ---------------------------------------------------------------------------
// shared pieces
// ---------------------------------------------------------------------------

struct GridCfg {
  double l = 0.0;  // 0 = per-model default
  long n = 0;      // 0 = per-model default
};

void bind_grid(CLI::App* app, FieldMap& fm, GridCfg& g) {
  bind_opt(app, fm, "grid-l", g.l, "grid half-width (0 = model default)");
  bind_opt(app, fm, "grid-n", g.n, "grid point count (0 = model default)");
}

Grid resolve_grid(const GridCfg& cfg, const Grid& fallback) {
  if (cfg.l <= 0.0 && cfg.n <= 0) return fallback;
  const double l = cfg.l > 0.0 ? cfg.l : std::max(std::abs(fallback.x_min()), fallback.x_max());
  const long n = cfg.n > 0 ? cfg.n : fallback.n();
  return Grid(-l, l, n);
}

Json convergence_json(const ConvergenceRecord& r) {
  Json j;
  j["iterations"] = r.iterations;
  j["grad_inf_norm"] = r.grad_inf_norm;
  j["value"] = r.value;
  j["converged"] = r.converged;
  j["message"] = r.message;
  return j;
}

Json residuals_json(const std::vector<verify::ResidualReport>& reports) {
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(residual_json(r));
  return arr;
}

void finish(const std::string& base, const CsvTable& csv, Json& summary,
            const std::vector<std::string>& warnings) {
  summary["warnings"] = warnings;
  csv.write(base + ".csv");
  write_json(base + ".json", summary);
}

// energy density of the Abelian Higgs wall from (u, u') samples
Field ah_energy_density(const abelian::AbelianHiggsParams& p, const Grid& grid, const Field& u,
                        const Field& du) {
  const Field phi = std::sqrt(p.xi) * (0.5 * u).exp();
  const Field dphi = 0.5 * phi * du;
  const Field a = -du / (2.0 * p.e);
  const Field da = deriv1_all(a, grid.h());
  return 0.5 * da.square() + dphi.square() + p.e * p.e * a.square() * phi.square() +
         0.5 * p.e * p.e * (phi.square() - p.xi).square();
}

// window of the left Higgs tail where |u| lies in [1e-8, 1e-3]
bool left_tail_window(const Grid& grid, const Field& u, double& lo, double& hi) {
  lo = hi = grid.x_min();
  bool found_hi = false, found_lo = false;
  for (Eigen::Index i = 0; i < grid.n() && grid.x(i) < 0.0; ++i) {
    const double a = std::abs(u[i]);
    if (!found_lo && a > 1e-8) {
      lo = grid.x(i);
      found_lo = true;
    }
    if (a > 1e-3) {
      hi = grid.x(i > 0 ? i - 1 : 0);
      found_hi = true;
      break;
    }
  }
  return found_lo && found_hi && hi > lo;
}

// ---------------------------------------------------------------------------
// ah-wall
// ---------------------------------------------------------------------------

struct AhWallCfg {
  double e = 1.0, xi = 1.0;
  double x_ref = 0.0, u_ref = -1.0;
  GridCfg grid;
};

void bind_ah_wall(CLI::App* app, FieldMap& fm, AhWallCfg& c) {
  bind_opt(app, fm, "e", c.e, "gauge coupling e > 0");
  bind_opt(app, fm, "xi", c.xi, "vacuum scale xi > 0");
  bind_opt(app, fm, "x-ref", c.x_ref, "normalization point");
  bind_opt(app, fm, "u-ref", c.u_ref, "u(x_ref), must be < 0");
  bind_grid(app, fm, c.grid);
}

int run_ah_wall(const AhWallCfg& c, const std::string& base) {
  abelian::AbelianHiggsParams p{c.e, c.xi};
  p.validate();
  const Grid grid = resolve_grid(c.grid, abelian::default_grid(p));
  const Profile prof = abelian::solve_higgs_to_magnetic(p, grid, {c.x_ref, c.u_ref});
  const Field& u = prof.field("u");
  const Field& du = prof.field("du");
  const double lambda = p.lambda();

  CsvTable csv;
  csv.add("x", grid.points());
  csv.add("u", u);
  csv.add("du", du);
  csv.add("phi", std::sqrt(p.xi) * (0.5 * u).exp());
  csv.add("A", -du / (2.0 * p.e));
  csv.add("energy_density", ah_energy_density(p, grid, u, du));

  Json summary;
  summary["subcommand"] = "ah-wall";
  summary["config"] = {{"e", c.e},         {"xi", c.xi},
                       {"x_ref", c.x_ref}, {"u_ref", c.u_ref},
                       {"grid", grid_json(grid)}};
  summary["lambda"] = lambda;

  const auto right = fit_tail(grid, u, 0.45 * grid.x_max(), 0.9 * grid.x_max(),
                              TailModel::linear_plus_quadratic);
  summary["right_tail"] = tail_fit_json(right);
  summary["right_tail"]["expected_quadratic"] = -0.5 * lambda;

  double lo, hi;
  if (left_tail_window(grid, u, lo, hi)) {
    Field ln_abs_u(grid.n());
    for (Eigen::Index i = 0; i < grid.n(); ++i)
      ln_abs_u[i] = std::log(std::max(std::abs(u[i]), 1e-300));
    const auto left = fit_tail(grid, ln_abs_u, lo, hi, TailModel::linear);
    summary["left_tail"] = tail_fit_json(left);
    summary["left_tail"]["expected_slope"] = std::sqrt(lambda);
  }

  const abelian::GeneralLiouvilleParams gp{lambda, 1.0};
  summary["first_integral_drift"] = abelian::first_integral_drift(prof, gp);
  const auto ric = abelian::riccati_first_integral_check(prof, gp);
  summary["riccati"] = {{"deviation", ric.deviation}, {"excluded", ric.excluded}};
  summary["residuals"] = residuals_json(verify::check_ah_second_order(prof, p));

  finish(base, csv, summary, prof.warnings);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// ah-lump
// ---------------------------------------------------------------------------

struct AhLumpCfg {
  double e = 1.0, xi = 1.0;
  double x0 = 0.0, u0 = -1.0;
  GridCfg grid;
};

void bind_ah_lump(CLI::App* app, FieldMap& fm, AhLumpCfg& c) {
  bind_opt(app, fm, "e", c.e, "gauge coupling e > 0");
  bind_opt(app, fm, "xi", c.xi, "vacuum scale xi > 0");
  bind_opt(app, fm, "x0", c.x0, "location of the maximum");
  bind_opt(app, fm, "u0", c.u0, "maximum value, u0 <= 0");
  bind_grid(app, fm, c.grid);
}

int run_ah_lump(const AhLumpCfg& c, const std::string& base) {
  abelian::AbelianHiggsParams p{c.e, c.xi};
  p.validate();
  const Grid grid = resolve_grid(c.grid, abelian::default_grid(p));
  const Profile prof = abelian::solve_magnetic_to_magnetic(p, c.x0, c.u0, grid);
  const Field& u = prof.field("u");
  const Field& du = prof.field("du");
  const double lambda = p.lambda();

  CsvTable csv;
  csv.add("x", grid.points());
  csv.add("u", u);
  csv.add("du", du);
  csv.add("phi", std::sqrt(p.xi) * (0.5 * u).exp());
  csv.add("A", -du / (2.0 * p.e));
  csv.add("energy_density", ah_energy_density(p, grid, u, du));

  Json summary;
  summary["subcommand"] = "ah-lump";
  summary["config"] = {{"e", c.e}, {"xi", c.xi}, {"x0", c.x0}, {"u0", c.u0},
                       {"grid", grid_json(grid)}};
  summary["lambda"] = lambda;
  if (c.u0 < 0.0) {
    const auto right = fit_tail(grid, u, c.x0 + 0.45 * (grid.x_max() - c.x0),
                                c.x0 + 0.9 * (grid.x_max() - c.x0),
                                TailModel::linear_plus_quadratic);
    summary["right_tail"] = tail_fit_json(right);
    summary["right_tail"]["expected_quadratic"] = -0.5 * lambda;
  }
  const abelian::GeneralLiouvilleParams gp{lambda, 1.0};
  summary["first_integral_drift"] = abelian::first_integral_drift(prof, gp);
  summary["residuals"] = residuals_json(verify::check_ah_second_order(prof, p));

  finish(base, csv, summary, prof.warnings);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// w-condensate
// ---------------------------------------------------------------------------

struct WCondCfg {
  double e = 1.0, m_w = 1.0;
  double x0 = 0.0, u0 = 0.0, du0 = 0.0;
  GridCfg grid;
};

void bind_w_condensate(CLI::App* app, FieldMap& fm, WCondCfg& c) {
  bind_opt(app, fm, "e", c.e, "charge parameter e > 0");
  bind_opt(app, fm, "m-w", c.m_w, "condensate mass m_W > 0");
  bind_opt(app, fm, "x0", c.x0, "normalization point");
  bind_opt(app, fm, "u0", c.u0, "u(x0)");
  bind_opt(app, fm, "du0", c.du0, "u'(x0)");
  bind_grid(app, fm, c.grid);
}

int run_w_condensate(const WCondCfg& c, const std::string& base) {
  if (!(c.e > 0.0 && c.m_w > 0.0))
    throw std::invalid_argument("w-condensate: e and m_W must be > 0");
  const auto gp = abelian::w_condensate_params(c.e, c.m_w);
  const double half = std::ceil(std::sqrt(40.0) / c.m_w + std::abs(c.x0)) + 2.0;
  const Grid grid = resolve_grid(c.grid, Grid(-half, half, 8001));
  const Profile prof = abelian::solve_general(gp, {c.x0, c.u0, c.du0}, grid);
  const Field& u = prof.field("u");
  const Field& du = prof.field("du");

  CsvTable csv;
  csv.add("x", grid.points());
  csv.add("u", u);
  csv.add("du", du);
  csv.add("W", (0.5 * u).exp());
  csv.add("P", -du / (2.0 * c.e));
  csv.add("first_integral", 0.5 * du.square() - gp.lambda * (u.exp() - gp.epsilon * u));

  Json summary;
  summary["subcommand"] = "w-condensate";
  summary["config"] = {{"e", c.e},   {"m_w", c.m_w}, {"x0", c.x0},
                       {"u0", c.u0}, {"du0", c.du0}, {"grid", grid_json(grid)}};
  summary["lambda"] = gp.lambda;
  summary["epsilon"] = gp.epsilon;
  summary["first_integral_drift"] = abelian::first_integral_drift(prof, gp);
  summary["residuals"] = residuals_json(verify::check_w_second_order(prof, c.e, c.m_w));

  finish(base, csv, summary, prof.warnings);
  for (const auto& w : prof.warnings)
    if (w.rfind("blow-up", 0) == 0) return kExitConvergence;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// general-liouville
// ---------------------------------------------------------------------------

struct GeneralCfg {
  double lambda = 1.0, epsilon = 0.0;
  double x0 = 0.0, u0 = 0.0, du0 = 0.0;
  GridCfg grid;
};

void bind_general(CLI::App* app, FieldMap& fm, GeneralCfg& c) {
  bind_opt(app, fm, "lambda", c.lambda, "coefficient lambda != 0");
  bind_opt(app, fm, "epsilon", c.epsilon, "offset epsilon");
  bind_opt(app, fm, "x0", c.x0, "normalization point");
  bind_opt(app, fm, "u0", c.u0, "u(x0)");
  bind_opt(app, fm, "du0", c.du0, "u'(x0)");
  bind_grid(app, fm, c.grid);
}

int run_general(const GeneralCfg& c, const std::string& base) {
  const abelian::GeneralLiouvilleParams gp{c.lambda, c.epsilon};
  gp.validate();
  const Grid grid = resolve_grid(c.grid, Grid(-10.0, 10.0, 8001));
  const Profile prof = abelian::solve_general(gp, {c.x0, c.u0, c.du0}, grid);
  const Field& u = prof.field("u");
  const Field& du = prof.field("du");

  CsvTable csv;
  csv.add("x", grid.points());
  csv.add("u", u);
  csv.add("du", du);
  csv.add("first_integral", 0.5 * du.square() - gp.lambda * (u.exp() - gp.epsilon * u));

  Json summary;
  summary["subcommand"] = "general-liouville";
  summary["config"] = {{"lambda", c.lambda}, {"epsilon", c.epsilon}, {"x0", c.x0},
                       {"u0", c.u0},         {"du0", c.du0},         {"grid", grid_json(grid)}};
  summary["first_integral_drift"] = abelian::first_integral_drift(prof, gp);
  const auto ric = abelian::riccati_first_integral_check(prof, gp);
  summary["riccati"] = {{"deviation", ric.deviation}, {"excluded", ric.excluded}};

  finish(base, csv, summary, prof.warnings);
  for (const auto& w : prof.warnings)
    if (w.rfind("blow-up", 0) == 0) return kExitConvergence;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// jp
// ---------------------------------------------------------------------------

struct JpCfg {
  double kappa = 1.0, m = 1.0;
  double x0 = 0.0, u0 = 0.0;
  GridCfg grid;
};

void bind_jp(CLI::App* app, FieldMap& fm, JpCfg& c) {
  bind_opt(app, fm, "kappa", c.kappa, "coupling, nonzero; its sign selects the family");
  bind_opt(app, fm, "m", c.m, "mass m > 0");
  bind_opt(app, fm, "x0", c.x0, "extremum location");
  bind_opt(app, fm, "u0", c.u0, "extremum value of u = ln psi^2");
  bind_grid(app, fm, c.grid);
}

int run_jp(const JpCfg& c, const std::string& base) {
  if (c.kappa == 0.0) throw std::invalid_argument("jp: kappa must be nonzero");
  if (!(c.m > 0.0)) throw std::invalid_argument("jp: m must be > 0");
  const double rate = std::exp(0.5 * c.u0) / std::sqrt(std::abs(c.kappa));
  // the negative-kappa family only exists on a finite interval about x0
  const double half = c.kappa > 0.0
                          ? std::ceil(20.0 / rate + std::abs(c.x0)) + 2.0
                          : 0.75 * cs::jp_negk_halfwidth(c.kappa, c.u0) + std::abs(c.x0);
  const Grid grid = resolve_grid(c.grid, Grid(-half, half, 8001));
  if (c.kappa < 0.0) {
    const double hw = cs::jp_negk_halfwidth(c.kappa, c.u0);
    if (grid.x_min() <= c.x0 - hw || grid.x_max() >= c.x0 + hw)
      throw std::invalid_argument("jp: grid exceeds the existence interval |x - x0| < " +
                                  std::to_string(hw));
  }
  const Field xs = grid.points();

  Field u(grid.n()), du(grid.n());
  const bool positive = c.kappa > 0.0;
  for (Eigen::Index i = 0; i < grid.n(); ++i) {
    u[i] = positive ? cs::jp_exact(c.kappa, c.x0, c.u0, xs[i])
                    : cs::jp_exact_negk(c.kappa, c.x0, c.u0, xs[i]);
    du[i] = positive ? cs::jp_exact_du(c.kappa, c.x0, c.u0, xs[i])
                     : cs::jp_exact_negk_du(c.kappa, c.x0, c.u0, xs[i]);
  }
  const Field psi = (0.5 * u).exp();

  CsvTable csv;
  csv.add("x", xs);
  csv.add("u", u);
  csv.add("psi", psi);
  csv.add("A", -0.5 * du);
  csv.add("A0", -psi.square() / (2.0 * c.m * c.kappa));

  Json summary;
  summary["subcommand"] = "jp";
  summary["config"] = {{"kappa", c.kappa}, {"m", c.m}, {"x0", c.x0}, {"u0", c.u0},
                       {"grid", grid_json(grid)}};
  summary["critical_quartic"] = 1.0 / (c.m * c.kappa);
  const cs::SolutionFamily fam{positive ? cs::SolutionFamily::Kind::jp_pos_kappa
                                        : cs::SolutionFamily::Kind::jp_neg_kappa,
                               c.x0, c.u0};
  summary["residuals"] = residuals_json(verify::check_cs_second_order(fam, c.kappa, grid, c.m));

  finish(base, csv, summary, {});
  return kExitOk;
}

// ---------------------------------------------------------------------------
// cs-wall
// ---------------------------------------------------------------------------

struct CsWallCfg {
  double kappa = 1.0 / 3.0, phi0 = 0.5, x0 = 0.0;
  double trunc_lo = -1.2, trunc_hi = 1.2;
  GridCfg grid;
};

void bind_cs_wall(CLI::App* app, FieldMap& fm, CsWallCfg& c) {
  bind_opt(app, fm, "kappa", c.kappa, "coupling kappa > 0");
  bind_opt(app, fm, "phi0", c.phi0, "phi(x0) in (0,1)");
  bind_opt(app, fm, "x0", c.x0, "normalization point");
  bind_opt(app, fm, "trunc-lo", c.trunc_lo, "lower end of the truncated energy interval");
  bind_opt(app, fm, "trunc-hi", c.trunc_hi, "upper end of the truncated energy interval");
  bind_grid(app, fm, c.grid);
}

int run_cs_wall(const CsWallCfg& c, const std::string& base) {
  if (!(c.kappa > 0.0)) throw std::invalid_argument("cs-wall: kappa must be > 0");
  if (!(c.phi0 > 0.0 && c.phi0 < 1.0))
    throw std::invalid_argument("cs-wall: phi0 must lie in (0,1)");
  const cs::RelCSParams p{c.kappa};
  const double lambda = p.lambda();
  const double u0 = 2.0 * std::log(c.phi0);
  const Grid grid = resolve_grid(c.grid, cs::quadrature_grid(p, c.x0));
  const Field xs = grid.points();

  Field u(grid.n()), du(grid.n());
  for (Eigen::Index i = 0; i < grid.n(); ++i) {
    u[i] = cs::rel_topwall_u(lambda, c.x0, u0, xs[i]);
    du[i] = cs::rel_topwall_du(lambda, c.x0, u0, xs[i]);
  }
  const Field phi = (0.5 * u).exp();
  const Field dphi = 0.5 * phi * du;
  Field density(grid.n());
  for (Eigen::Index i = 0; i < grid.n(); ++i)
    density[i] = cs::rel_energy_density(p, phi[i], dphi[i]);

  CsvTable csv;
  csv.add("x", xs);
  csv.add("u", u);
  csv.add("phi", phi);
  csv.add("dphi", dphi);
  csv.add("A", -0.5 * du);
  // A0 from the Gauss-law constraint kappa A' = 2 A0 phi^2, with A' = -u''/2
  csv.add("A0", -0.25 * c.kappa * lambda * (u.exp() - 1.0));
  csv.add("energy_density", density);

  const auto energy = cs::wall_energy(p, c.x0, c.phi0, grid);
  const double trunc = cs::wall_energy_truncated(p, c.x0, c.phi0, c.trunc_lo, c.trunc_hi);
  const auto charge = cs::charges(p, c.x0, c.phi0, grid);

  Json summary;
  summary["subcommand"] = "cs-wall";
  summary["config"] = {{"kappa", c.kappa},       {"phi0", c.phi0},
                       {"x0", c.x0},             {"trunc_lo", c.trunc_lo},
                       {"trunc_hi", c.trunc_hi}, {"grid", grid_json(grid)}};
  summary["lambda"] = lambda;
  summary["energy_quadrature"] = energy.quadrature;
  summary["energy_analytic"] = energy.analytic;
  summary["truncated_energy"] = trunc;
  summary["charges"] = {{"q_magnetic", charge.q_magnetic},
                        {"q_magnetic_analytic", 1.0 / c.kappa},
                        {"q_electric", charge.q_electric}};
  const auto right =
      fit_tail(grid, u, c.x0 + 0.45 * (grid.x_max() - c.x0), c.x0 + 0.9 * (grid.x_max() - c.x0),
               TailModel::linear);
  summary["right_tail"] = tail_fit_json(right);
  summary["right_tail"]["expected_slope"] = -std::sqrt(lambda);
  const cs::SolutionFamily fam{cs::SolutionFamily::Kind::rel_topological, c.x0, u0};
  // moderate spacing for the finite-difference check; the quadrature grid is
  // finer than difference-chain roundoff allows
  const Grid check_grid(c.x0 - 8.0, c.x0 + 8.0, 8001);
  summary["residuals"] = residuals_json(verify::check_cs_second_order(fam, c.kappa, check_grid));

  finish(base, csv, summary, {});
  return kExitOk;
}

// ---------------------------------------------------------------------------
// cs-lump
// ---------------------------------------------------------------------------

struct CsLumpCfg {
  double kappa = 1.0, phi0 = 0.5, x0 = 0.0;
  double trunc_half = 6.0;
  GridCfg grid;
};

void bind_cs_lump(CLI::App* app, FieldMap& fm, CsLumpCfg& c) {
  bind_opt(app, fm, "kappa", c.kappa, "coupling kappa > 0");
  bind_opt(app, fm, "phi0", c.phi0, "peak value phi(x0) in (0,1)");
  bind_opt(app, fm, "x0", c.x0, "peak location");
  bind_opt(app, fm, "trunc-half", c.trunc_half, "half-width of the truncated energy interval");
  bind_grid(app, fm, c.grid);
}

int run_cs_lump(const CsLumpCfg& c, const std::string& base) {
  if (!(c.kappa > 0.0)) throw std::invalid_argument("cs-lump: kappa must be > 0");
  if (!(c.phi0 > 0.0 && c.phi0 < 1.0))
    throw std::invalid_argument("cs-lump: phi0 must lie in (0,1)");
  const cs::RelCSParams p{c.kappa};
  const double lambda = p.lambda();
  const double u0 = 2.0 * std::log(c.phi0);
  const double rate = cs::lump_tail_rate(lambda, u0);
  const double half = std::ceil(35.0 / rate + std::abs(c.x0)) + 2.0;
  const Grid grid = resolve_grid(c.grid, Grid(-half, half, 48001));
  const Field xs = grid.points();

  Field u(grid.n()), du(grid.n()), curve_phi(grid.n()), curve_dphi(grid.n());
  for (Eigen::Index i = 0; i < grid.n(); ++i) {
    u[i] = cs::rel_lump_u(lambda, c.x0, u0, xs[i]);
    du[i] = cs::rel_lump_du(lambda, c.x0, u0, xs[i]);
    curve_phi[i] = cs::lump_curve_phi(lambda, c.phi0, xs[i] - c.x0);
    curve_dphi[i] = cs::lump_curve_dphi(lambda, c.phi0, xs[i] - c.x0);
  }
  const Field phi = (0.5 * u).exp();
  const Field dphi = 0.5 * phi * du;
  Field density(grid.n()), curve_density(grid.n());
  for (Eigen::Index i = 0; i < grid.n(); ++i) {
    density[i] = cs::rel_energy_density(p, phi[i], dphi[i]);
    curve_density[i] = cs::rel_energy_density(p, curve_phi[i], curve_dphi[i]);
  }

  CsvTable csv;
  csv.add("x", xs);
  csv.add("u", u);
  csv.add("phi", phi);
  csv.add("energy_density", density);
  csv.add("curve_phi", curve_phi);
  csv.add("curve_energy_density", curve_density);

  const auto e_curve = cs::lump_energy(p, c.phi0);
  Json summary;
  summary["subcommand"] = "cs-lump";
  summary["config"] = {{"kappa", c.kappa},
                       {"phi0", c.phi0},
                       {"x0", c.x0},
                       {"trunc_half", c.trunc_half},
                       {"grid", grid_json(grid)}};
  summary["lambda"] = lambda;
  summary["u0"] = u0;
  summary["tail_rate_analytic"] = rate;
  summary["exact_solution"] = {
      {"energy_quadrature",
       integrate(grid, density, grid.n() % 2 ? QuadRule::simpson : QuadRule::trapezoid)},
      {"energy_closed_form", cs::lump_exact_energy(p, u0)}};
  summary["curve_energy"] = {
      {"split_total", e_curve.split_total},
      {"halfline_integral", e_curve.halfline_integral},
      {"boundary_term", e_curve.boundary_term},
      {"density_truncated", cs::lump_energy_truncated(p, c.phi0, c.trunc_half)}};
  const auto right =
      fit_tail(grid, u, c.x0 + 0.45 * (grid.x_max() - c.x0), c.x0 + 0.9 * (grid.x_max() - c.x0),
               TailModel::linear);
  summary["right_tail"] = tail_fit_json(right);
  summary["right_tail"]["expected_slope"] = -rate;
  const cs::SolutionFamily fam{cs::SolutionFamily::Kind::rel_lump, c.x0, u0};
  const Grid check_grid(c.x0 - 8.0, c.x0 + 8.0, 8001);
  summary["residuals"] = residuals_json(verify::check_cs_second_order(fam, c.kappa, check_grid));

  finish(base, csv, summary, {});
  return kExitOk;
}

// ---------------------------------------------------------------------------
// cs-energy-curve
// ---------------------------------------------------------------------------

struct CsCurveCfg {
  std::vector<double> kappas{1.0, 2.0, 4.0};
  double phi0_min = 0.01, phi0_max = 0.99;
  long phi0_count = 99;
};

void bind_cs_curve(CLI::App* app, FieldMap& fm, CsCurveCfg& c) {
  if (app) {
    app->add_option("--kappa", c.kappas, "couplings, one curve per value")->expected(-1);
  }
  fm.setters["kappa"] = [&c](const Json& v) {
    if (v.is_array())
      c.kappas = v.get<std::vector<double>>();
    else
      c.kappas = {v.get<double>()};
  };
  bind_opt(app, fm, "phi0-min", c.phi0_min, "first phi0 sample");
  bind_opt(app, fm, "phi0-max", c.phi0_max, "last phi0 sample");
  bind_opt(app, fm, "phi0-count", c.phi0_count, "number of phi0 samples");
}

int run_cs_curve(const CsCurveCfg& c, const std::string& base) {
  if (c.kappas.empty()) throw std::invalid_argument("cs-energy-curve: need at least one kappa");
  for (double k : c.kappas)
    if (!(k > 0.0)) throw std::invalid_argument("cs-energy-curve: kappa must be > 0");
  if (!(c.phi0_min > 0.0 && c.phi0_max < 1.0 && c.phi0_min < c.phi0_max))
    throw std::invalid_argument("cs-energy-curve: need 0 < phi0-min < phi0-max < 1");
  if (c.phi0_count < 2) throw std::invalid_argument("cs-energy-curve: need at least 2 samples");

  Field phi0s(c.phi0_count);
  for (long i = 0; i < c.phi0_count; ++i)
    phi0s[i] = c.phi0_min + (c.phi0_max - c.phi0_min) * static_cast<double>(i) /
                                static_cast<double>(c.phi0_count - 1);

  CsvTable csv;
  csv.add("phi0", phi0s);
  Json monotone = Json::object();
  for (double k : c.kappas) {
    const cs::RelCSParams p{k};
    Field e(c.phi0_count), e_exact(c.phi0_count);
    for (long i = 0; i < c.phi0_count; ++i) {
      e[i] = cs::lump_energy(p, phi0s[i]).split_total;
      e_exact[i] = cs::lump_exact_energy(p, 2.0 * std::log(phi0s[i]));
    }
    bool increasing = true, increasing_exact = true;
    for (long i = 1; i < c.phi0_count; ++i) {
      increasing = increasing && e[i] > e[i - 1];
      increasing_exact = increasing_exact && e_exact[i] > e_exact[i - 1];
    }
    char name[48], name_exact[56];
    std::snprintf(name, sizeof(name), "E_kappa_%g", k);
    std::snprintf(name_exact, sizeof(name_exact), "E_exact_kappa_%g", k);
    csv.add(name, e);
    csv.add(name_exact, e_exact);
    monotone[name] = increasing;
    monotone[name_exact] = increasing_exact;
  }

  Json summary;
  summary["subcommand"] = "cs-energy-curve";
  summary["config"] = {{"kappa", c.kappas},
                       {"phi0_min", c.phi0_min},
                       {"phi0_max", c.phi0_max},
                       {"phi0_count", c.phi0_count}};
  summary["increasing_in_phi0"] = monotone;

  finish(base, csv, summary, {});
  return kExitOk;
}

// ---------------------------------------------------------------------------
// u2-wall
// ---------------------------------------------------------------------------

struct U2Cfg {
  double e = 1.0, gamma = 1.0, xi = 1.0;
  double alpha1 = 1.0, beta1 = 1.0, alpha2 = 1.0, beta2 = 1.0;
  double beta_weight = 1.0;
  double tol = 1e-8;
  GridCfg grid;
};

void bind_u2(CLI::App* app, FieldMap& fm, U2Cfg& c) {
  bind_opt(app, fm, "e", c.e, "abelian coupling e > 0");
  bind_opt(app, fm, "gamma", c.gamma, "coupling ratio g^2/e^2 > 0");
  bind_opt(app, fm, "xi", c.xi, "scale xi > 0");
  bind_opt(app, fm, "alpha1", c.alpha1, "right slope of ln q1^2");
  bind_opt(app, fm, "beta1", c.beta1, "left slope parameter of ln q1^2");
  bind_opt(app, fm, "alpha2", c.alpha2, "right slope of ln q2^2");
  bind_opt(app, fm, "beta2", c.beta2, "left slope parameter of ln q2^2");
  bind_opt(app, fm, "beta-weight", c.beta_weight, "weight exponent of the measure");
  bind_opt(app, fm, "tol", c.tol, "gradient infinity-norm tolerance");
  bind_grid(app, fm, c.grid);
}

int run_u2(const U2Cfg& c, const std::string& base) {
  const u2::U2Params p{c.e, c.gamma, c.xi};
  const u2::U2Asymptotics a{c.alpha1, c.beta1, c.alpha2, c.beta2};
  const Grid grid = resolve_grid(c.grid, u2::default_grid(p));
  const wspace::WeightedMeasure mu(grid, c.beta_weight);
  u2::U2MinimizeOptions opts;
  opts.tol = c.tol;
  const auto res = u2::minimize(p, a, grid, mu, opts);

  CsvTable csv;
  csv.add("x", grid.points());
  csv.add("eta1", res.profile.field("eta1"));
  csv.add("eta2", res.profile.field("eta2"));
  csv.add("u1", res.profile.field("u1"));
  csv.add("u2", res.profile.field("u2"));
  csv.add("q1_sq", c.xi * res.profile.field("u1").exp());
  csv.add("q2_sq", c.xi * res.profile.field("u2").exp());

  const auto rep = u2::decay_report(res, p, a);
  Json summary;
  summary["subcommand"] = "u2-wall";
  summary["config"] = {{"e", c.e},
                       {"gamma", c.gamma},
                       {"xi", c.xi},
                       {"alpha1", c.alpha1},
                       {"beta1", c.beta1},
                       {"alpha2", c.alpha2},
                       {"beta2", c.beta2},
                       {"beta_weight", c.beta_weight},
                       {"tol", c.tol},
                       {"grid", grid_json(grid)}};
  summary["lambda"] = p.lambda();
  summary["kappa1"] = res.kappas.k1;
  summary["kappa2"] = res.kappas.k2;
  summary["integral_q1_sq"] = res.integral_q1_sq;
  summary["integral_q2_sq"] = res.integral_q2_sq;
  summary["expected_q1_sq"] = res.expected_q1_sq;
  summary["expected_q2_sq"] = res.expected_q2_sq;
  summary["identity_residual_1"] = res.identity_residual_1;
  summary["identity_residual_2"] = res.identity_residual_2;
  summary["tails"] = {{"right1", tail_fit_json(rep.right1.fit)},
                      {"right2", tail_fit_json(rep.right2.fit)},
                      {"left1", tail_fit_json(rep.left1.fit)},
                      {"left2", tail_fit_json(rep.left2.fit)},
                      {"expected_quadratic", -p.lambda()}};
  summary["eta_flatness"] = {rep.eta1_flatness, rep.eta2_flatness};
  summary["residuals"] = residuals_json(verify::check_u2_system(res, p));
  summary["convergence"] = convergence_json(res.convergence);

  finish(base, csv, summary, res.profile.warnings);
  return res.convergence.converged ? kExitOk : kExitConvergence;
}

// ---------------------------------------------------------------------------
// ew-wall
// ---------------------------------------------------------------------------

struct EwCfg {
  double g = 1.0, g_prime = 1.0, theta = 0.0;  // theta > 0 overrides gprime
  double phi0 = 1.0;
  double alpha1 = 1.5, beta1 = 1.5, alpha2 = -2.0, beta2 = -2.0;
  double beta_weight = 0.0;  // 0 = default
  double tol = 1e-8;
  long restarts = 1;
  unsigned long seed = 12345;
  GridCfg grid;
};

void bind_ew(CLI::App* app, FieldMap& fm, EwCfg& c) {
  bind_opt(app, fm, "g", c.g, "SU(2) coupling g > 0");
  bind_opt(app, fm, "gprime", c.g_prime, "U(1) coupling g' > 0");
  bind_opt(app, fm, "theta", c.theta, "mixing angle; > 0 overrides gprime");
  bind_opt(app, fm, "phi0", c.phi0, "symmetry-breaking scale");
  bind_opt(app, fm, "alpha1", c.alpha1, "slope parameter alpha1");
  bind_opt(app, fm, "beta1", c.beta1, "slope parameter beta1");
  bind_opt(app, fm, "alpha2", c.alpha2, "slope parameter alpha2 < 0");
  bind_opt(app, fm, "beta2", c.beta2, "slope parameter beta2 < 0");
  bind_opt(app, fm, "beta-weight", c.beta_weight,
           "weight exponent (0 = half of min{|alpha2|,|beta2|})");
  bind_opt(app, fm, "tol", c.tol, "gradient infinity-norm tolerance");
  bind_opt(app, fm, "restarts", c.restarts, "number of starts (first is zero)");
  bind_opt(app, fm, "seed", c.seed, "seed for the random restarts");
  bind_grid(app, fm, c.grid);
}

int run_ew(const EwCfg& c, const std::string& base) {
  const ew::EwParams p = c.theta > 0.0 ? ew::EwParams::from_angle(c.g, c.theta, c.phi0)
                                       : ew::EwParams{c.g, c.g_prime, c.phi0};
  const ew::EwAsymptotics a{c.alpha1, c.beta1, c.alpha2, c.beta2};
  ew::validate(a, p);
  const Grid grid = resolve_grid(c.grid, ew::default_grid(p, a));
  const double beta = c.beta_weight > 0.0 ? c.beta_weight : ew::default_measure_beta(a);
  const wspace::WeightedMeasure mu(grid, beta);
  ew::EwMinimizeOptions opts;
  opts.tol = c.tol;
  opts.restarts = static_cast<int>(c.restarts);
  opts.seed = static_cast<unsigned>(c.seed);
  const auto res = ew::minimize_constrained(p, a, grid, mu, opts);

  CsvTable csv;
  csv.add("x", grid.points());
  for (const char* name : {"eta1", "eta2", "v1", "v2", "w", "phi", "P", "Z", "dP", "dZ"})
    csv.add(name, res.profile.field(name));

  const auto rep = ew::decay_report(res, p, a);
  Json summary;
  summary["subcommand"] = "ew-wall";
  summary["config"] = {{"g", p.g},
                       {"gprime", p.g_prime},
                       {"phi0", p.phi0},
                       {"alpha1", c.alpha1},
                       {"beta1", c.beta1},
                       {"alpha2", c.alpha2},
                       {"beta2", c.beta2},
                       {"beta_weight", beta},
                       {"tol", c.tol},
                       {"restarts", c.restarts},
                       {"seed", c.seed},
                       {"grid", grid_json(grid)}};
  summary["theta"] = p.theta();
  summary["lambda"] = p.lambda();
  summary["lambda_critical"] = p.lambda_critical();
  summary["multipliers"] = {{"xi1", res.xi1}, {"xi2", res.xi2}};
  summary["constraint_residuals"] = {res.constraint_residual_1, res.constraint_residual_2};
  summary["means"] = {res.mean1, res.mean2};
  summary["integral_w_sq"] = res.integral_w_sq;
  summary["integral_phi_sq"] = res.integral_phi_sq;
  summary["expected_w_sq"] = res.expected_w_sq;
  summary["expected_phi_sq"] = res.expected_phi_sq;
  summary["restart_spread"] = res.restart_spread;
  summary["tails"] = {{"w_right", tail_fit_json(rep.w_right.fit)},
                      {"w_left", tail_fit_json(rep.w_left.fit)},
                      {"phi_right", tail_fit_json(rep.phi_right.fit)},
                      {"phi_left", tail_fit_json(rep.phi_left.fit)},
                      {"expected",
                       {{"w_right_slope", rep.w_right.expected_linear},
                        {"w_left_slope", rep.w_left.expected_linear},
                        {"phi_quadratic", rep.phi_right.expected_quadratic},
                        {"phi_right_linear", rep.phi_right.expected_linear},
                        {"phi_left_linear", rep.phi_left.expected_linear}}}};
  summary["residuals"] = residuals_json(verify::check_ew_system(res, p));
  summary["convergence"] = convergence_json(res.convergence);

  finish(base, csv, summary, res.profile.warnings);
  return res.convergence.converged ? kExitOk : kExitConvergence;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyCfg {
  bool full = false;
  unsigned long seed = 12345;
};

void bind_verify(CLI::App* app, FieldMap& fm, VerifyCfg& c) {
  if (app) app->add_flag("--full", c.full, "run at production resolution");
  fm.setters["full"] = [&c](const Json& v) { c.full = v.get<bool>(); };
  bind_opt(app, fm, "seed", c.seed, "seed for random directions");
}

int run_verify(const VerifyCfg& c, const std::string& base) {
  Json summary;
  summary["subcommand"] = "verify";
  summary["config"] = {{"full", c.full}, {"seed", c.seed}};
  Json checks = Json::array();
  bool all_pass = true;

  const auto record = [&](const std::string& group,
                          const std::vector<verify::ResidualReport>& coarse,
                          const std::vector<verify::ResidualReport>& fine) {
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      const bool ok = verify::refinement_stable(coarse[i], fine[i]);
      all_pass = all_pass && ok;
      Json j;
      j["group"] = group;
      j["coarse"] = residual_json(coarse[i]);
      j["fine"] = residual_json(fine[i]);
      j["pass"] = ok;
      checks.push_back(j);
      std::cout << (ok ? "PASS " : "FAIL ") << group << " | " << coarse[i].equation << " | sup "
                << coarse[i].sup_norm << " -> " << fine[i].sup_norm << "\n";
    }
  };

  const Eigen::Index n_cf = c.full ? 16001 : 8001;  // closed-form grids
  {
    const cs::SolutionFamily fams[] = {
        {cs::SolutionFamily::Kind::jp_pos_kappa, 0.3, -0.2},
        {cs::SolutionFamily::Kind::jp_neg_kappa, 0.0, 0.1},
        {cs::SolutionFamily::Kind::rel_topological, 0.0, 2.0 * std::log(0.5)},
        {cs::SolutionFamily::Kind::rel_lump, 0.0, std::log(0.25)}};
    const double kappas[] = {1.0, -1.0, 1.0, 1.0};
    const bool rel[] = {false, false, true, true};
    for (int i = 0; i < 4; ++i) {
      const bool neg = fams[i].kind == cs::SolutionFamily::Kind::jp_neg_kappa;
      // the negative-kappa family lives on a short finite interval (its pair
      // sizes stay fixed so spacing does not fall to the roundoff floor); the
      // relativistic reconstruction chain divides by phi^2 and needs coarser
      // spacing before difference roundoff catches up with the h^2 term
      const double half = neg ? 0.65 * cs::jp_negk_halfwidth(kappas[i], fams[i].u0) : 8.0;
      const Eigen::Index n0 = neg ? 2001 : (rel[i] ? (n_cf - 1) / 4 + 1 : n_cf);
      const Grid coarse(-half, half, n0), fine(-half, half, 2 * (n0 - 1) + 1);
      record(fams[i].label(), verify::check_cs_second_order(fams[i], kappas[i], coarse),
             verify::check_cs_second_order(fams[i], kappas[i], fine));
    }
  }
  {
    abelian::AbelianHiggsParams p{1.0, 1.0};
    const Grid coarse = abelian::default_grid(p, c.full ? 8001 : 4001);
    const Grid fine = abelian::default_grid(p, c.full ? 16001 : 8001);
    record("abelian wall",
           verify::check_ah_second_order(abelian::solve_higgs_to_magnetic(p, coarse), p),
           verify::check_ah_second_order(abelian::solve_higgs_to_magnetic(p, fine), p));
    record(
        "abelian lump",
        verify::check_ah_second_order(abelian::solve_magnetic_to_magnetic(p, 0.0, -1.0, coarse), p),
        verify::check_ah_second_order(abelian::solve_magnetic_to_magnetic(p, 0.0, -1.0, fine), p));
  }
  {
    const auto gp = abelian::w_condensate_params(1.0, 1.0);
    const Grid coarse(-7.0, 7.0, c.full ? 8001 : 4001), fine(-7.0, 7.0, c.full ? 16001 : 8001);
    record(
        "w condensate",
        verify::check_w_second_order(abelian::solve_general(gp, {0.0, 0.0, 0.0}, coarse), 1.0, 1.0),
        verify::check_w_second_order(abelian::solve_general(gp, {0.0, 0.0, 0.0}, fine), 1.0, 1.0));
  }
  {
    const u2::U2Params p{1.0, 1.5, 1.0};
    const u2::U2Asymptotics a{1.2, 1.0, 0.8, 1.1};
    const Eigen::Index n0 = c.full ? 6001 : 1501;
    const Grid coarse(-12.0, 12.0, n0), fine(-12.0, 12.0, 2 * (n0 - 1) + 1);
    const wspace::WeightedMeasure mu_c(coarse, 1.0), mu_f(fine, 1.0);
    record("u2 wall", verify::check_u2_system(u2::minimize(p, a, coarse, mu_c), p),
           verify::check_u2_system(u2::minimize(p, a, fine, mu_f), p));

    // directional finite differences against white-noise directions lose
    // about 1/sqrt(n) of relative accuracy, so the harness keeps a fixed size
    const Grid hgrid(-12.0, 12.0, 1501);
    const u2::U2Functional fn(p, a, hgrid);
    const Eigen::VectorXd point = Eigen::VectorXd::Zero(2 * hgrid.n());
    const double worst =
        verify::gradient_fd_harness(fn.objective(), point, 20, 1e-5, static_cast<unsigned>(c.seed));
    const bool ok = worst < 1e-6;
    all_pass = all_pass && ok;
    checks.push_back({{"group", "u2 gradient"}, {"worst_rel_error", worst}, {"pass", ok}});
    std::cout << (ok ? "PASS " : "FAIL ") << "u2 gradient | worst rel error " << worst << "\n";
  }
  {
    const ew::EwParams p = ew::EwParams::from_angle(1.0, M_PI / 4.0, 1.0);
    const ew::EwAsymptotics a{1.5, 1.5, -2.0, -2.0};
    const Eigen::Index n0 = c.full ? 6001 : 1501;
    const Grid coarse(-16.0, 16.0, n0), fine(-16.0, 16.0, 2 * (n0 - 1) + 1);
    const wspace::WeightedMeasure mu_c(coarse, 1.0), mu_f(fine, 1.0);
    record("ew wall", verify::check_ew_system(ew::minimize_constrained(p, a, coarse, mu_c), p),
           verify::check_ew_system(ew::minimize_constrained(p, a, fine, mu_f), p));

    const Grid hgrid(-16.0, 16.0, 1501);
    const wspace::WeightedMeasure hmu(hgrid, 1.0);
    const ew::EwFunctional fn(p, a, hgrid, hmu);
    const Eigen::VectorXd point = Eigen::VectorXd::Zero(2 * hgrid.n());
    const double worst = verify::gradient_fd_harness(fn.objective(), point, 20, 1e-5,
                                                     static_cast<unsigned>(c.seed) + 1);
    const bool ok = worst < 1e-6;
    all_pass = all_pass && ok;
    checks.push_back({{"group", "ew gradient"}, {"worst_rel_error", worst}, {"pass", ok}});
    std::cout << (ok ? "PASS " : "FAIL ") << "ew gradient | worst rel error " << worst << "\n";
  }

  summary["checks"] = checks;
  summary["all_pass"] = all_pass;
  write_json(base + ".json", summary);
  std::cout << (all_pass ? "verify: all checks passed\n" : "verify: FAILURES present\n");
  return all_pass ? kExitOk : kExitConvergence;
}

// ---------------------------------------------------------------------------
// registry + sweep
// ---------------------------------------------------------------------------

using JsonRunner = std::function<int(const Json& overrides, const std::string& out_base)>;

template <class Cfg>
JsonRunner make_json_runner(void (*binder)(CLI::App*, FieldMap&, Cfg&),
                            int (*runner)(const Cfg&, const std::string&)) {
  return [binder, runner](const Json& overrides, const std::string& out_base) {
    Cfg cfg;
    FieldMap fm;
    binder(nullptr, fm, cfg);
    fm.apply(overrides, "sweep");
    return runner(cfg, out_base);
  };
}

std::map<std::string, JsonRunner> json_registry() {
  return {
      {"ah-wall", make_json_runner(bind_ah_wall, run_ah_wall)},
      {"ah-lump", make_json_runner(bind_ah_lump, run_ah_lump)},
      {"w-condensate", make_json_runner(bind_w_condensate, run_w_condensate)},
      {"general-liouville", make_json_runner(bind_general, run_general)},
      {"jp", make_json_runner(bind_jp, run_jp)},
      {"cs-wall", make_json_runner(bind_cs_wall, run_cs_wall)},
      {"cs-lump", make_json_runner(bind_cs_lump, run_cs_lump)},
      {"cs-energy-curve", make_json_runner(bind_cs_curve, run_cs_curve)},
      {"u2-wall", make_json_runner(bind_u2, run_u2)},
      {"ew-wall", make_json_runner(bind_ew, run_ew)},
  };
}

struct SweepCfg {
  std::string sub;
  std::vector<std::string> sets;
  std::string out_dir = "sweep_out";
  long jobs = 1;
};

Json parse_scalar(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end && *end == '\0' && end != text.c_str()) return Json(v);
  if (text == "true") return Json(true);
  if (text == "false") return Json(false);
  return Json(text);
}

int run_sweep(const SweepCfg& c) {
  const auto registry = json_registry();
  const auto it = registry.find(c.sub);
  if (it == registry.end())
    throw std::invalid_argument("sweep: unknown subcommand '" + c.sub + "'");
  if (c.sets.empty()) throw std::invalid_argument("sweep: need at least one --set key=v1,v2,...");

  std::vector<std::pair<std::string, std::vector<Json>>> axes;
  for (const auto& s : c.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("sweep: --set expects key=v1,v2,..., got '" + s + "'");
    const std::string key = s.substr(0, eq);
    std::vector<Json> values;
    const std::string rest = s.substr(eq + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      const auto comma = rest.find(',', pos);
      const std::string tok =
          rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (tok.empty()) throw std::invalid_argument("sweep: empty value in --set " + s);
      values.push_back(parse_scalar(tok));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    axes.emplace_back(key, values);
  }

  std::filesystem::create_directories(c.out_dir);

  // cartesian product, row-major over the axes
  std::vector<Json> combos{Json::object()};
  std::vector<std::string> names{c.sub};
  for (const auto& [key, values] : axes) {
    std::vector<Json> next;
    std::vector<std::string> next_names;
    for (std::size_t i = 0; i < combos.size(); ++i) {
      for (const auto& v : values) {
        Json j = combos[i];
        j[key] = v;
        next.push_back(std::move(j));
        std::string tag = v.is_string() ? v.get<std::string>() : v.dump();
        for (auto& ch : tag)
          if (ch == '/' || ch == ' ') ch = '_';
        next_names.push_back(names[i] + "__" + key + "=" + tag);
      }
    }
    combos = std::move(next);
    names = std::move(next_names);
  }

  const JsonRunner& runner = it->second;
  std::vector<int> codes(combos.size(), 0);
  const long jobs = std::max(1L, c.jobs);
  std::vector<std::future<void>> pending;
  for (std::size_t i = 0; i < combos.size(); ++i) {
    const auto work = [&runner, &codes, &combos, &names, &c, i]() {
      try {
        codes[i] = runner(combos[i], c.out_dir + "/" + names[i]);
      } catch (const std::invalid_argument&) {
        codes[i] = kExitValidation;
      } catch (const std::ios_base::failure&) {
        codes[i] = kExitIo;
      } catch (const std::exception&) {
        codes[i] = kExitConvergence;
      }
    };
    if (jobs == 1) {
      work();
    } else {
      if (pending.size() >= static_cast<std::size_t>(jobs)) {
        pending.front().wait();
        pending.erase(pending.begin());
      }
      pending.push_back(std::async(std::launch::async, work));
    }
  }
  for (auto& f : pending) f.wait();

  int worst = 0;
  for (std::size_t i = 0; i < combos.size(); ++i) {
    std::cout << "sweep " << names[i] << " -> exit " << codes[i] << "\n";
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// main
// ---------------------------------------------------------------------------

std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

std::string find_subcommand(int argc, char** argv) {
  for (int i = 1; i < argc; ++i)
    if (argv[i][0] != '-') return argv[i];
  return {};
}

template <class Cfg>
void add_subcommand(CLI::App& app, const std::string& name, const std::string& desc,
                    void (*binder)(CLI::App*, FieldMap&, Cfg&),
                    int (*runner)(const Cfg&, const std::string&), const std::string& config_path,
                    const std::string& selected, int& exit_code) {
  auto cfg = std::make_shared<Cfg>();
  auto fm = std::make_shared<FieldMap>();
  auto out = std::make_shared<std::string>(name);
  CLI::App* sub = app.add_subcommand(name, desc);
  binder(sub, *fm, *cfg);
  sub->add_option("--output", *out, "output base path (writes <base>.csv and <base>.json)");
  sub->add_option("--config", "JSON config file; command-line flags override file values");
  if (!config_path.empty() && selected == name) {
    std::ifstream is(config_path);
    if (!is) throw std::ios_base::failure("cannot read config file '" + config_path + "'");
    fm->apply(Json::parse(is), name);
  }
  sub->callback([cfg, fm, out, runner, &exit_code]() { exit_code = runner(*cfg, *out); });
}

int run_main(int argc, char** argv) {
  CLI::App app{"domain-wall soliton solvers: exact families, first-integral walls, and "
               "variational minimizers, with CSV/JSON emission"};
  app.require_subcommand(1);
  int exit_code = 0;
  const std::string config_path = find_config_path(argc, argv);
  const std::string selected = find_subcommand(argc, argv);

  try {
    add_subcommand<AhWallCfg>(app, "ah-wall", "Higgs-to-magnetic wall of the Abelian Higgs model",
                              bind_ah_wall, run_ah_wall, config_path, selected, exit_code);
    add_subcommand<AhLumpCfg>(app, "ah-lump", "magnetic-to-magnetic solution, even about x0",
                              bind_ah_lump, run_ah_lump, config_path, selected, exit_code);
    add_subcommand<WCondCfg>(app, "w-condensate", "W-condensate profile by direct integration",
                             bind_w_condensate, run_w_condensate, config_path, selected,
                             exit_code);
    add_subcommand<GeneralCfg>(app, "general-liouville",
                               "general family u'' = lambda (e^u - eps) from a normalization",
                               bind_general, run_general, config_path, selected, exit_code);
    add_subcommand<JpCfg>(app, "jp", "gauged Schroedinger closed forms, either sign of kappa",
                          bind_jp, run_jp, config_path, selected, exit_code);
    add_subcommand<CsWallCfg>(app, "cs-wall",
                              "topological Chern-Simons wall: profile, energy, charges",
                              bind_cs_wall, run_cs_wall, config_path, selected, exit_code);
    add_subcommand<CsLumpCfg>(app, "cs-lump", "instanton-like Chern-Simons lump and its energies",
                              bind_cs_lump, run_cs_lump, config_path, selected, exit_code);
    add_subcommand<CsCurveCfg>(app, "cs-energy-curve", "lump energy curve E(phi0) per kappa",
                               bind_cs_curve, run_cs_curve, config_path, selected, exit_code);
    add_subcommand<U2Cfg>(app, "u2-wall", "U(2) wall by direct minimization", bind_u2, run_u2,
                          config_path, selected, exit_code);
    add_subcommand<EwCfg>(app, "ew-wall", "electroweak wall by constrained minimization", bind_ew,
                          run_ew, config_path, selected, exit_code);
    add_subcommand<VerifyCfg>(app, "verify", "residual and gradient verification suite",
                              bind_verify, run_verify, config_path, selected, exit_code);

    auto sweep_cfg = std::make_shared<SweepCfg>();
    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter lattice over a subcommand");
    sweep->add_option("--sub", sweep_cfg->sub, "subcommand to sweep")->required();
    sweep->add_option("--set", sweep_cfg->sets, "axis as key=v1,v2,... (repeatable)")
        ->required()
        ->expected(-1);
    sweep->add_option("--out-dir", sweep_cfg->out_dir, "output directory");
    sweep->add_option("--jobs", sweep_cfg->jobs, "concurrent runs");
    sweep->callback([sweep_cfg, &exit_code]() { exit_code = run_sweep(*sweep_cfg); });

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? kExitOk : kExitValidation;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConvergence;
  }
  return exit_code;
}

}  // namespace wallsol

int main(int argc, char** argv) { return wallsol::run_main(argc, argv); }
