#include "walls/finite_diff.hpp"
#include "walls/liouville_cs.hpp"
#include "walls/quadrature.hpp"
#include "walls/tail_fit.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace walls;

namespace {

// finite-difference residual of u'' = rhs(u) for a sampled closed form
double ode_residual_sup(const Field& u, double h, const std::function<double(double)>& rhs) {
  double worst = 0.0;
  for (Eigen::Index i = 1; i + 1 < u.size(); ++i)
    worst = std::max(worst, std::abs(deriv2(u, i, h) - rhs(u[i])));
  return worst;
}

}  // namespace

TEST_CASE("jp family, positive kappa") {
  CHECK(cs::jp_exact(1.0, 0.5, -0.3, 0.5) == -0.3);  // cosh 0 = 1
  // long-double evaluation oracle at kappa=1, u0=0, x=1
  const long double ref = -2.0L * std::log(std::cosh(1.0L));
  CHECK(cs::jp_exact(1.0, 0.0, 0.0, 1.0) == doctest::Approx((double)ref).epsilon(1e-14));
  CHECK(cs::jp_exact(1.0, 0.0, 0.0, 1.0) == doctest::Approx(-0.8675616609660544));

  // even about x0
  for (double t : {0.3, 1.7, 12.0})
    CHECK(cs::jp_exact(2.0, 0.4, -1.0, 0.4 + t) ==
          doctest::Approx(cs::jp_exact(2.0, 0.4, -1.0, 0.4 - t)).epsilon(1e-14));

  // log-stabilized tails: huge arguments stay finite and linear
  const double far = cs::jp_exact(1.0, 0.0, 0.0, 2000.0);
  CHECK(std::isfinite(far));
  CHECK(far == doctest::Approx(-2.0 * 2000.0 + 2.0 * std::log(2.0)).epsilon(1e-12));

  // satisfies u'' = -(2/kappa) e^u
  const Grid g(-4.0, 4.0, 8001);  // h = 1e-3
  const Field u = cs::jp_exact(1.0, 0.0, 0.0, g.points());
  CHECK(ode_residual_sup(u, g.h(), [](double v) { return -2.0 * std::exp(v); }) < 1e-6);
  CHECK_THROWS_AS(cs::jp_exact(-1.0, 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("jp family, negative kappa: trigonometric branch on its maximal interval") {
  // global minimum at x0
  CHECK(cs::jp_exact_negk(-1.0, 0.2, 0.1, 0.2) == doctest::Approx(0.1).epsilon(1e-15));
  const double hw = cs::jp_negk_halfwidth(-1.0, 0.1);
  CHECK(hw == doctest::Approx(0.5 * M_PI / std::exp(0.05)).epsilon(1e-14));
  CHECK_THROWS_AS(cs::jp_exact_negk(-1.0, 0.0, 0.1, 2.0 * hw), std::domain_error);

  // first-integral identity (u')^2 = (4/|kappa|)(e^u - e^{u0}) of the family
  for (double x : {0.1, 0.4, 0.9}) {
    const double u = cs::jp_exact_negk(-1.0, 0.0, 0.1, x);
    const double du = cs::jp_exact_negk_du(-1.0, 0.0, 0.1, x);
    CHECK(du * du ==
          doctest::Approx(4.0 * (std::exp(u) - std::exp(0.1))).epsilon(1e-12));
  }

  // satisfies u'' = -(2/kappa) e^u = +2 e^u inside the interval
  const double half = 0.75 * hw;
  const Grid g(-half, half, 4001);
  const Field u = cs::jp_exact_negk(-1.0, 0.0, 0.1, g.points());
  CHECK(ode_residual_sup(u, g.h(), [](double v) { return 2.0 * std::exp(v); }) < 1e-4);
  CHECK_THROWS_AS(cs::jp_exact_negk(1.0, 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("relativistic topological wall") {
  const double lambda = 4.0;  // kappa = 1
  // phi(x0) = phi0
  CHECK(cs::rel_topwall_phi(lambda, 0.0, 0.5, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  // long-double direct-formula oracle at x = 1
  const long double pref = 0.5L * std::exp(-1.0L) / std::sqrt(0.75L + 0.25L * std::exp(-2.0L));
  CHECK(cs::rel_topwall_phi(lambda, 0.0, 0.5, 1.0) ==
        doctest::Approx((double)pref).epsilon(1e-14));
  CHECK(cs::rel_topwall_phi(lambda, 0.0, 0.5, 1.0) == doctest::Approx(0.20776075899937471));

  // boundary values
  CHECK(cs::rel_topwall_u(lambda, 0.0, -1.0, -400.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cs::rel_topwall_u(lambda, 0.0, -1.0, 400.0) < -700.0);

  // first-order relation checked by finite differences, h = 1e-4
  const Grid g(-2.0, 2.0, 40001);
  const Field u = cs::rel_topwall_u(lambda, 0.0, 2.0 * std::log(0.5), g.points());
  double worst = 0.0;
  for (Eigen::Index i = 1; i + 1 < g.n(); ++i)
    worst = std::max(worst,
                     std::abs(deriv1(u, i, g.h()) + std::sqrt(lambda) * (1.0 - std::exp(u[i]))));
  CHECK(worst < 5e-8);

  CHECK_THROWS_AS(cs::rel_topwall_phi(lambda, 0.0, 1.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(cs::rel_topwall_u(lambda, 0.0, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("relativistic lump") {
  const double lambda = 4.0;
  const double u0 = std::log(0.25);  // phi0 = 1/2
  CHECK(cs::rel_lump_u(lambda, 0.0, u0, 0.0) == doctest::Approx(u0).epsilon(1e-14));
  CHECK(cs::rel_lump_phi(lambda, 0.0, u0, 0.0) == doctest::Approx(0.5).epsilon(1e-14));

  // exact evenness of the evaluation
  for (double t : {0.7, 3.0, 40.0})
    CHECK(cs::rel_lump_u(lambda, 1.3, u0, 1.3 + t) == cs::rel_lump_u(lambda, 1.3, u0, 1.3 - t));

  // linear tail slope -sqrt(lambda e^{u0} (2 - e^{u0})) = -sqrt(1.75)
  const Grid g(-40.0, 40.0, 8001);
  const Field u = cs::rel_lump_u(lambda, 0.0, u0, g.points());
  const TailFit fit = fit_tail(g, u, 18.0, 36.0, TailModel::linear);
  CHECK(fit.slope() == doctest::Approx(-std::sqrt(1.75)).epsilon(1e-4));
  CHECK(cs::lump_tail_rate(lambda, u0) == doctest::Approx(std::sqrt(1.75)).epsilon(1e-15));

  // rate grows with the maximum (faster decay for higher peaks)
  double prev = 0.0;
  for (double m : {-3.0, -2.0, -1.0, -0.3}) {
    const double r = cs::lump_tail_rate(lambda, m);
    CHECK(r > prev);
    prev = r;
  }
  CHECK_THROWS_AS(cs::rel_lump_u(lambda, 0.0, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("maximum from the prescribed tail rate") {
  CHECK(cs::u0_from_epsilon(std::sqrt(3.0) / 2.0) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
  CHECK(cs::u0_from_epsilon(1.0 - 1e-12) < 0.0);
  CHECK(cs::u0_from_epsilon(1.0 - 1e-12) > -1e-5);
  CHECK_THROWS_AS(cs::u0_from_epsilon(0.0), std::invalid_argument);
  CHECK_THROWS_AS(cs::u0_from_epsilon(1.0), std::invalid_argument);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(1e-6, 1.0 - 1e-6);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double eps = dist(rng);
    const double e0 = std::exp(cs::u0_from_epsilon(eps));
    worst = std::max(worst, std::abs(e0 * (2.0 - e0) - eps * eps));
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("wall energy identity E = 1/kappa") {
  for (double kappa : {0.25, 0.5, 1.0, 2.0}) {
    const cs::RelCSParams p{kappa};
    const auto e = cs::wall_energy(p, 0.0, 0.5, cs::quadrature_grid(p, 0.0));
    CHECK(e.analytic == doctest::Approx(1.0 / kappa).epsilon(1e-15));
    CHECK(e.quadrature * kappa == doctest::Approx(1.0).epsilon(1e-8));
  }
  // independent of the family parameters
  const cs::RelCSParams p{1.0};
  for (double phi0 : {0.2, 0.8})
    for (double x0 : {-1.0, 2.5})
      CHECK(cs::wall_energy(p, x0, phi0, cs::quadrature_grid(p, x0)).quadrature ==
            doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("wall energy concentrates in the transition region") {
  const cs::RelCSParams p{1.0 / 3.0};
  const double trunc = cs::wall_energy_truncated(p, 0.0, 0.5, -1.2, 1.2);
  CHECK(std::abs(trunc - 2.998492403) < 1e-6);
}

TEST_CASE("lump energies match the reported values") {
  const cs::RelCSParams p{1.0};
  const auto e = cs::lump_energy(p, 0.5);
  CHECK(std::abs(e.split_total - 1.180053251) < 1e-6);
  CHECK(std::abs(cs::lump_energy_truncated(p, 0.5, 6.0) - 1.179867364) < 1e-6);
  CHECK(e.split_total == doctest::Approx(4.0 * e.halfline_integral + e.boundary_term));

  // monotone in phi0 at the sampled points, decreasing in kappa
  CHECK(cs::lump_energy(p, 0.3).split_total < cs::lump_energy(p, 0.5).split_total);
  CHECK(cs::lump_energy(p, 0.5).split_total < cs::lump_energy(p, 0.7).split_total);
  const cs::RelCSParams p2{2.0};
  CHECK(cs::lump_energy(p2, 0.5).split_total < cs::lump_energy(p, 0.5).split_total);
}

TEST_CASE("exact lump energy closed form vs density quadrature") {
  // derived via the split identity: E = (2/kappa) sqrt(e^{u0} (2 - e^{u0}))
  for (double u0 : {std::log(0.25), std::log(0.5), -2.5}) {
    const cs::RelCSParams p{1.0};
    const double rate = cs::lump_tail_rate(p.lambda(), u0);
    const Grid g(-40.0 / rate - 5.0, 40.0 / rate + 5.0, 100001);
    Field dens(g.n());
    for (Eigen::Index i = 0; i < g.n(); ++i) {
      const double phi = cs::rel_lump_phi(p.lambda(), 0.0, u0, g.x(i));
      const double dphi = 0.5 * phi * cs::rel_lump_du(p.lambda(), 0.0, u0, g.x(i));
      dens[i] = cs::rel_energy_density(p, phi, dphi);
    }
    CHECK(integrate(g, dens, QuadRule::simpson) ==
          doctest::Approx(cs::lump_exact_energy(p, u0)).epsilon(1e-9));
  }
}

TEST_CASE("charges of the topological wall") {
  for (double kappa : {1.0 / 3.0, 1.0, 2.0}) {
    const cs::RelCSParams p{kappa};
    for (double phi0 : {0.1, 0.5, 0.9}) {
      const auto q = cs::charges(p, 0.0, phi0, cs::quadrature_grid(p, 0.0));
      CHECK(std::abs(q.q_magnetic - 1.0 / kappa) * kappa < 1e-6);
      CHECK(std::abs(q.q_electric - 1.0) < 1e-6);
    }
  }
}
