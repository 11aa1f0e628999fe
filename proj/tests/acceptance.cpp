// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not configurable.

#include "walls/abelian_wall.hpp"
#include "walls/ew_wall.hpp"
#include "walls/finite_diff.hpp"
#include "walls/gradient_check.hpp"
#include "walls/liouville_cs.hpp"
#include "walls/residual_check.hpp"
#include "walls/tail_fit.hpp"
#include "walls/u2_wall.hpp"
#include "walls/weighted_space.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace walls;

namespace {

int g_failures = 0;
int g_index = 0;

void report(bool pass, const std::string& title, const std::string& detail, double seconds) {
  ++g_index;
  if (!pass) ++g_failures;
  std::printf("[%2d/11] %s %s (%s; %.2fs)\n", g_index, pass ? "PASS" : "FAIL", title.c_str(),
              detail.c_str(), seconds);
  std::fflush(stdout);
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Eigen::VectorXd smooth_point(const Grid& g, unsigned seed, double scale) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  const double span = g.x_max() - g.x_min();
  Eigen::VectorXd z(2 * g.n());
  for (int block = 0; block < 2; ++block) {
    Field f = Field::Zero(g.n());
    for (int m = 1; m <= 4; ++m)
      f += scale * gauss(rng) / m * (2.0 * M_PI * m * (g.points() - g.x_min()) / span).cos();
    z.segment(block * g.n(), g.n()) = f.matrix();
  }
  return z;
}

struct EwCase {
  ew::EwParams params;
  ew::EwAsymptotics asym;
};

std::vector<EwCase> ew_lattice() {
  return {
      {ew::EwParams::from_angle(1.0, M_PI / 4.0, 1.0), {1.5, 1.5, -2.0, -2.0}},
      {ew::EwParams::from_angle(1.0, M_PI / 4.0, 1.0), {2.0, 1.0, -1.5, -2.5}},
      {ew::EwParams::from_angle(1.2, M_PI / 4.0, 0.9), {1.5, 1.5, -2.0, -2.0}},
      {ew::EwParams::from_angle(1.0, M_PI / 3.0, 1.0), {2.25, 2.25, -1.0, -1.0}},
      {ew::EwParams::from_angle(0.8, 1.0, 1.1), {2.4, 2.4, -1.5, -1.6}},
      {ew::EwParams::from_angle(1.0, 0.9, 1.0), {2.0, 2.0, -1.4, -1.8}},
  };
}

ew::EwResult run_ew(const EwCase& c, Eigen::Index n = 6001) {
  const Grid grid = ew::default_grid(c.params, c.asym, n);
  const wspace::WeightedMeasure mu(grid, ew::default_measure_beta(c.asym));
  return ew::minimize_constrained(c.params, c.asym, grid, mu);
}

u2::U2Result run_u2(const u2::U2Params& p, const u2::U2Asymptotics& a, Eigen::Index n = 6001) {
  const Grid grid = u2::default_grid(p, n);
  const wspace::WeightedMeasure mu(grid, 1.0);
  return u2::minimize(p, a, grid, mu);
}

// 1. wall energy identity and the truncated-interval value
void criterion_wall_energy() {
  Timer t;
  double worst_rel = 0.0;
  for (double kappa : {0.25, 1.0 / 3.0, 0.5, 1.0, 2.0}) {
    const cs::RelCSParams p{kappa};
    const auto e = cs::wall_energy(p, 0.0, 0.5, cs::quadrature_grid(p, 0.0));
    worst_rel = std::max(worst_rel, std::abs(e.quadrature - e.analytic) / e.analytic);
  }
  const double trunc = cs::wall_energy_truncated({1.0 / 3.0}, 0.0, 0.5, -1.2, 1.2);
  const double trunc_err = std::abs(trunc - 2.998492403);
  std::ostringstream d;
  d << "max rel err " << worst_rel << ", truncated err " << trunc_err;
  report(worst_rel <= 1e-6 && trunc_err <= 1e-6 && t.seconds() < 1.0, "wall energy E = 1/kappa",
         d.str(), t.seconds());
}

// 2. lump energy values
void criterion_lump_energy() {
  Timer t;
  const cs::RelCSParams p{1.0};
  const double full = cs::lump_energy(p, 0.5).split_total;
  const double trunc = cs::lump_energy_truncated(p, 0.5, 6.0);
  const double e1 = std::abs(full - 1.180053251), e2 = std::abs(trunc - 1.179867364);
  std::ostringstream d;
  d << "errs " << e1 << ", " << e2;
  report(e1 <= 1e-6 && e2 <= 1e-6 && t.seconds() < 1.0, "lump energy values", d.str(),
         t.seconds());
}

// 3. charges
void criterion_charges() {
  Timer t;
  double worst_m = 0.0, worst_e = 0.0;
  for (double kappa : {1.0 / 3.0, 1.0, 2.0}) {
    const cs::RelCSParams p{kappa};
    const Grid grid = cs::quadrature_grid(p, 0.0);
    for (double phi0 : {0.1, 0.5, 0.9}) {
      const auto q = cs::charges(p, 0.0, phi0, grid);
      worst_m = std::max(worst_m, std::abs(q.q_magnetic - 1.0 / kappa) * kappa);
      worst_e = std::max(worst_e, std::abs(q.q_electric - 1.0));
    }
  }
  std::ostringstream d;
  d << "Qm rel " << worst_m << ", Qe abs " << worst_e;
  report(worst_m <= 1e-6 && worst_e <= 1e-6, "magnetic and electric charges", d.str(),
         t.seconds());
}

// 4. multipliers across the lattice
void criterion_multipliers() {
  Timer t;
  double worst1 = 0.0, worst2 = 0.0;
  bool all_converged = true;
  for (const auto& c : ew_lattice()) {
    const auto res = run_ew(c);
    all_converged = all_converged && res.convergence.converged;
    worst1 = std::max(worst1, std::abs(res.xi1 + 1.0));
    worst2 = std::max(worst2, std::abs(res.xi2 - 4.0));
  }
  std::ostringstream d;
  d << "worst |xi1+1| " << worst1 << ", |xi2-4| " << worst2;
  report(all_converged && worst1 <= 1e-3 && worst2 <= 1e-3,
         "multipliers (-1, 4) on a 6-point lattice", d.str(), t.seconds());
}

// 5. U(2) integrals
void criterion_u2_integrals() {
  Timer t;
  const auto sym = run_u2({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0, 1.0});
  const auto asym = run_u2({1.0, 2.0, 1.0}, {2.0, 1.0, 1.0, 1.0});
  const double e11 = std::abs(sym.integral_q1_sq - 2.0) / 2.0;
  const double e12 = std::abs(sym.integral_q2_sq - 2.0) / 2.0;
  const double e21 = std::abs(asym.integral_q1_sq - 2.75) / 2.75;
  const double e22 = std::abs(asym.integral_q2_sq - 2.25) / 2.25;
  const double worst = std::max({e11, e12, e21, e22});
  std::ostringstream d;
  d << "worst rel err " << worst;
  report(sym.convergence.converged && asym.convergence.converged && worst <= 1e-3,
         "U(2) total integrals", d.str(), t.seconds());
}

// 6. electroweak integrals
void criterion_ew_integrals() {
  Timer t;
  const auto res = run_ew(ew_lattice().front());
  const double e1 = std::abs(res.integral_w_sq - 0.25) / 0.25;
  const double e2 = std::abs(res.integral_phi_sq - 3.0) / 3.0;
  std::ostringstream d;
  d << "rel errs " << e1 << ", " << e2;
  report(res.convergence.converged && e1 <= 1e-3 && e2 <= 1e-3, "electroweak total integrals",
         d.str(), t.seconds());
}

// 7. decay-rate suite
void criterion_decay() {
  Timer t;
  bool ok = true;
  std::ostringstream d;

  {
    const u2::U2Params p{1.0, 2.0, 1.0};
    const u2::U2Asymptotics a{2.0, 1.0, 1.0, 1.0};
    const auto rep = u2::decay_report(run_u2(p, a), p, a);
    const double lambda = p.lambda();
    const auto rel = [](double got, double want) { return std::abs(got - want) / std::abs(want); };
    ok = ok && rel(rep.right1.fit.quadratic(), -lambda) <= 0.02 &&
         rel(rep.right2.fit.quadratic(), -lambda) <= 0.02 &&
         rel(rep.left1.fit.quadratic(), -lambda) <= 0.02 &&
         rel(rep.left2.fit.quadratic(), -lambda) <= 0.02 &&
         rel(rep.right1.fit.slope(), a.alpha1) <= 0.05 &&
         rel(rep.right2.fit.slope(), a.alpha2) <= 0.05 &&
         rel(rep.left1.fit.slope(), -a.beta1) <= 0.05 &&
         rel(rep.left2.fit.slope(), -a.beta2) <= 0.05;
    d << "u2 quad " << rep.right1.fit.quadratic() << " (want " << -lambda << ")";
  }
  {
    const auto c = ew_lattice().front();
    const auto rep = ew::decay_report(run_ew(c), c.params, c.asym);
    const auto rel = [](double got, double want) { return std::abs(got - want) / std::abs(want); };
    ok = ok && rel(rep.w_right.fit.slope(), c.asym.alpha2) <= 0.02 &&
         rel(rep.w_left.fit.slope(), -c.asym.beta2) <= 0.02 &&
         rel(rep.phi_right.fit.quadratic(), -0.5 * c.params.lambda()) <= 0.02 &&
         rel(rep.phi_left.fit.quadratic(), -0.5 * c.params.lambda()) <= 0.02;
    d << "; ew w-slope " << rep.w_right.fit.slope();
  }
  {
    const abelian::AbelianHiggsParams p{1.0, 1.0};
    const Grid grid = abelian::default_grid(p);
    const Profile wall = abelian::solve_higgs_to_magnetic(p, grid);
    const Field& u = wall.field("u");
    const TailFit right = fit_tail(grid, u, 0.45 * grid.x_max(), 0.9 * grid.x_max(),
                                   TailModel::linear_plus_quadratic);
    double lo = grid.x_min(), hi = grid.x_min();
    Field ln_abs_u = Field::Zero(grid.n());
    for (Eigen::Index i = 0; i < grid.n() && grid.x(i) < 0.0; ++i) {
      ln_abs_u[i] = std::log(std::max(std::abs(u[i]), 1e-300));
      if (std::abs(u[i]) < 1e-8) lo = grid.x(i);
      if (std::abs(u[i]) < 1e-3) hi = grid.x(i);
    }
    const TailFit left = fit_tail(grid, ln_abs_u, lo, hi, TailModel::linear);
    ok = ok &&
         std::abs(right.quadratic() + 0.5 * p.lambda()) / (0.5 * p.lambda()) <= 0.02 &&
         std::abs(left.slope() - std::sqrt(p.lambda())) / std::sqrt(p.lambda()) <= 0.02;
    d << "; abelian quad " << right.quadratic();
  }
  report(ok, "decay-rate fits", d.str(), t.seconds());
}

// 8. second-order residual suite with refinement-stable constants
void criterion_residual_suite() {
  Timer t;
  bool ok = true;
  std::ostringstream d;
  const auto stable = [&ok](const std::vector<verify::ResidualReport>& coarse,
                            const std::vector<verify::ResidualReport>& fine) {
    for (std::size_t i = 0; i < coarse.size(); ++i)
      ok = ok && verify::refinement_stable(coarse[i], fine[i]);
  };

  {
    const abelian::AbelianHiggsParams p{1.0, 1.0};
    const Grid c = abelian::default_grid(p, 4001), f = abelian::default_grid(p, 8001);
    stable(verify::check_ah_second_order(abelian::solve_higgs_to_magnetic(p, c), p),
           verify::check_ah_second_order(abelian::solve_higgs_to_magnetic(p, f), p));
    stable(verify::check_ah_second_order(abelian::solve_magnetic_to_magnetic(p, 0.0, -1.0, c), p),
           verify::check_ah_second_order(abelian::solve_magnetic_to_magnetic(p, 0.0, -1.0, f), p));
  }
  {
    const auto gp = abelian::w_condensate_params(1.0, 1.0);
    const Grid c(-7.0, 7.0, 4001), f(-7.0, 7.0, 8001);
    stable(verify::check_w_second_order(abelian::solve_general(gp, {0, 0, 0}, c), 1.0, 1.0),
           verify::check_w_second_order(abelian::solve_general(gp, {0, 0, 0}, f), 1.0, 1.0));
  }
  {
    const cs::SolutionFamily top{cs::SolutionFamily::Kind::rel_topological, 0.0,
                                 2.0 * std::log(0.5)};
    const cs::SolutionFamily lump{cs::SolutionFamily::Kind::rel_lump, 0.0, std::log(0.25)};
    for (const auto& fam : {top, lump})
      stable(verify::check_cs_second_order(fam, 1.0, Grid(-8.0, 8.0, 2001)),
             verify::check_cs_second_order(fam, 1.0, Grid(-8.0, 8.0, 4001)));
    const cs::SolutionFamily jp{cs::SolutionFamily::Kind::jp_pos_kappa, 0.3, -0.2};
    stable(verify::check_cs_second_order(jp, 1.0, Grid(-8.0, 8.0, 8001)),
           verify::check_cs_second_order(jp, 1.0, Grid(-8.0, 8.0, 16001)));
    const double hw = 0.65 * cs::jp_negk_halfwidth(-1.0, 0.1);
    const cs::SolutionFamily neg{cs::SolutionFamily::Kind::jp_neg_kappa, 0.0, 0.1};
    stable(verify::check_cs_second_order(neg, -1.0, Grid(-hw, hw, 2001)),
           verify::check_cs_second_order(neg, -1.0, Grid(-hw, hw, 4001)));
  }
  {
    const u2::U2Params p{1.0, 2.0, 1.0};
    const u2::U2Asymptotics a{2.0, 1.0, 1.0, 1.0};
    stable(verify::check_u2_system(run_u2(p, a, 3001), p),
           verify::check_u2_system(run_u2(p, a, 6001), p));
  }
  {
    const auto c = ew_lattice().front();
    stable(verify::check_ew_system(run_ew(c, 3001), c.params),
           verify::check_ew_system(run_ew(c, 6001), c.params));
  }
  report(ok, "first-order solutions satisfy the second-order systems at O(h^2)",
         "refinement-stable constants over all six systems", t.seconds());
}

// 9. gradient correctness of both functionals
void criterion_gradients() {
  Timer t;
  const Grid ug(-12.0, 12.0, 2001);
  const u2::U2Functional ufn({1.0, 1.5, 1.0}, {1.2, 1.0, 0.8, 1.1}, ug);
  const double u_err = verify::gradient_fd_harness(ufn.objective(), smooth_point(ug, 101, 0.4),
                                                   20, 1e-5, 2021);

  const auto c = ew_lattice().front();
  const Grid eg(-16.0, 16.0, 2001);
  const wspace::WeightedMeasure mu(eg, 1.0);
  const ew::EwFunctional efn(c.params, c.asym, eg, mu);
  const double e_err = verify::gradient_fd_harness(efn.objective(), smooth_point(eg, 103, 0.4),
                                                   20, 1e-5, 2022);
  std::ostringstream d;
  d << "worst rel errs " << u_err << ", " << e_err;
  report(u_err < 1e-6 && e_err < 1e-6, "gradients match finite differences", d.str(),
         t.seconds());
}

// 10. convexity and uniqueness of the U(2) minimization
void criterion_uniqueness() {
  Timer t;
  const u2::U2Params p{1.0, 1.5, 1.0};
  const u2::U2Asymptotics a{1.2, 1.0, 0.8, 1.1};
  const Grid grid(-10.0, 10.0, 2001);
  const wspace::WeightedMeasure mu(grid, 1.0);

  u2::U2MinimizeOptions opts;
  opts.tol = 1e-10;
  const auto base = u2::minimize(p, a, grid, mu, opts);
  const Eigen::VectorXd z = smooth_point(grid, 301, 0.5);
  const Field init1 = Eigen::Map<const Field>(z.data(), grid.n());
  const Field init2 = Eigen::Map<const Field>(z.data() + grid.n(), grid.n());
  u2::U2MinimizeOptions opts2 = opts;
  opts2.init1 = &init1;
  opts2.init2 = &init2;
  const auto other = u2::minimize(p, a, grid, mu, opts2);
  const double spread =
      std::max((base.profile.field("eta1") - other.profile.field("eta1")).abs().maxCoeff(),
               (base.profile.field("eta2") - other.profile.field("eta2")).abs().maxCoeff());

  // the center-value discretization error feeds the tail comparison through
  // the matched normalization, so this sub-check runs at doubled resolution
  const auto sym = run_u2({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0, 1.0}, 12001);
  const double swap_gap =
      (sym.profile.field("eta1") - sym.profile.field("eta2")).abs().maxCoeff();

  const Field& u = sym.profile.field("u1");
  const Grid sgrid = u2::default_grid({1.0, 1.0, 1.0}, 12001);
  const Eigen::Index ic = sgrid.nearest_index(0.0);
  const abelian::AbelianHiggsParams single{std::sqrt(0.5), 1.0};  // 2 e^2 xi = 2 lambda = 1
  const Profile wall = abelian::solve_magnetic_to_magnetic(single, 0.0, u[ic], sgrid);
  const double match = (u - wall.field("u")).abs().maxCoeff();

  std::ostringstream d;
  d << "restart spread " << spread << ", eta gap " << swap_gap << ", single-equation match "
    << match;
  report(spread <= 1e-6 && swap_gap <= 1e-6 && match <= 1e-4,
         "U(2) minimizer is start-independent and symmetric", d.str(), t.seconds());
}

// 11. closed-form exactness
void criterion_closed_forms() {
  Timer t;
  double worst = 0.0;
  const auto track = [&worst](const std::vector<verify::ResidualReport>& reports) {
    for (const auto& r : reports) worst = std::max(worst, r.sup_norm);
  };
  track(verify::check_cs_second_order({cs::SolutionFamily::Kind::jp_pos_kappa, 0.3, -0.2}, 1.0,
                                      Grid(-8.0, 8.0, 16001)));
  const double hw = 0.65 * cs::jp_negk_halfwidth(-1.0, 0.1);
  track(verify::check_cs_second_order({cs::SolutionFamily::Kind::jp_neg_kappa, 0.0, 0.1}, -1.0,
                                      Grid(-hw, hw, 2001)));
  track(verify::check_cs_second_order(
      {cs::SolutionFamily::Kind::rel_topological, 0.0, 2.0 * std::log(0.5)}, 1.0,
      Grid(-8.0, 8.0, 16001)));
  track(verify::check_cs_second_order({cs::SolutionFamily::Kind::rel_lump, 0.0, std::log(0.25)},
                                      1.0, Grid(-8.0, 8.0, 16001)));

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(1e-6, 1.0 - 1e-6);
  double round_trip = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double eps = dist(rng);
    const double e0 = std::exp(cs::u0_from_epsilon(eps));
    round_trip = std::max(round_trip, std::abs(e0 * (2.0 - e0) - eps * eps));
  }
  std::ostringstream d;
  d << "worst residual " << worst << ", round trip " << round_trip;
  report(worst < 1e-4 && round_trip <= 1e-14, "closed forms satisfy their equations", d.str(),
         t.seconds());
}

}  // namespace

int main() {
  criterion_wall_energy();
  criterion_lump_energy();
  criterion_charges();
  criterion_multipliers();
  criterion_u2_integrals();
  criterion_ew_integrals();
  criterion_decay();
  criterion_residual_suite();
  criterion_gradients();
  criterion_uniqueness();
  criterion_closed_forms();
  if (g_failures == 0) {
    std::printf("acceptance: all 11 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  return 1;
}
