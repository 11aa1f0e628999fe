#include "walls/ew_wall.hpp"
#include "walls/gradient_check.hpp"
#include "walls/tail_fit.hpp"
#include "walls/residual_check.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace walls;
using ew::EwAsymptotics;
using ew::EwParams;

namespace {

const EwParams kParams = EwParams::from_angle(1.0, M_PI / 4.0, 1.0);
const EwAsymptotics kAsym{1.5, 1.5, -2.0, -2.0};

Eigen::VectorXd smooth_random(const Grid& g, unsigned seed, double scale) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  const double span = g.x_max() - g.x_min();
  Eigen::VectorXd z(2 * g.n());
  for (int block = 0; block < 2; ++block) {
    Field f = Field::Zero(g.n());
    for (int m = 1; m <= 4; ++m)
      f += scale * gauss(rng) / m *
           (2.0 * M_PI * m * (g.points() - g.x_min()) / span).sin();
    z.segment(block * g.n(), g.n()) = f.matrix();
  }
  return z;
}

}  // namespace

TEST_CASE("parameters and the mixing angle") {
  const EwParams p{1.0, 1.0, 2.0};
  CHECK(p.theta() == doctest::Approx(M_PI / 4.0).epsilon(1e-14));
  CHECK(p.cos_sq() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p.e_charge() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(p.lambda() == doctest::Approx(4.0).epsilon(1e-13));            // g^2 phi0^2 / (2 cos^2)
  CHECK(p.lambda_critical() == doctest::Approx(0.25).epsilon(1e-13));  // g^2 / (8 cos^2)
  const EwParams q = EwParams::from_angle(2.0, 0.6, 1.0);
  CHECK(q.theta() == doctest::Approx(0.6).epsilon(1e-13));
}

TEST_CASE("change of variables is the stated bijection") {
  Field v1(3), v2(3);
  v1 << 0.0, 1.0, -2.0;
  v2 << 0.0, 2.0, 0.5;
  const auto [u1, u2] = ew::to_u_variables(v1, v2);
  CHECK(u1[0] == 0.0);
  CHECK(u2[0] == 0.0);
  CHECK(u1[1] == doctest::Approx(5.0));
  CHECK(u2[1] == doctest::Approx(1.0));
  const auto [w1, w2] = ew::to_v_variables(u1, u2);
  CHECK((w1 - v1).abs().maxCoeff() < 1e-15);
  CHECK((w2 - v2).abs().maxCoeff() < 1e-15);

  std::mt19937 rng(2);
  std::normal_distribution<double> gauss;
  Field a(50), b(50);
  for (int i = 0; i < 50; ++i) {
    a[i] = gauss(rng);
    b[i] = gauss(rng);
  }
  const auto [ua, ub] = ew::to_u_variables(a, b);
  const auto [ra, rb] = ew::to_v_variables(ua, ub);
  CHECK((ra - a).abs().maxCoeff() < 1e-15);
  CHECK((rb - b).abs().maxCoeff() < 1e-15);
}

TEST_CASE("existence conditions are validated one by one") {
  CHECK_NOTHROW(ew::validate(kAsym, kParams));
  CHECK_THROWS_WITH_AS(ew::validate({1.5, 1.5, 2.0, -2.0}, kParams),
                       doctest::Contains("alpha2 < 0"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(ew::validate({-2.0, 0.5, -2.0, -2.0}, kParams),
                       doctest::Contains("alpha1 + beta1 > 0"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(ew::validate({3.0, 3.0, -2.0, -2.0}, kParams),
                       doctest::Contains("|alpha2| + |beta2| >"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(ew::validate({0.5, 0.5, -2.0, -2.0}, kParams),
                       doctest::Contains("min{|alpha2|, |beta2|}"), std::invalid_argument);
}

TEST_CASE("constraint targets") {
  // tan^2 = 1: alpha1 + beta1 = 1, |alpha2| + |beta2| = 3 -> (1, 2)
  const auto t1 = ew::constraint_targets({0.5, 0.5, -1.5, -1.5}, kParams);
  CHECK(t1.first == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(t1.second == doctest::Approx(2.0).epsilon(1e-14));

  // tan^2 = 3: alpha1 + beta1 = 3, |alpha2| + |beta2| = 2 -> (3, 1)
  const EwParams p3 = EwParams::from_angle(1.0, M_PI / 3.0, 1.0);
  const auto t2 = ew::constraint_targets({1.5, 1.5, -1.0, -1.0}, p3);
  CHECK(t2.first == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(t2.second == doctest::Approx(1.0).epsilon(1e-13));

  // equality case: derived target vanishes
  CHECK_THROWS_AS(ew::constraint_targets({1.5, 1.5, -1.5, -1.5}, kParams), std::invalid_argument);
}

TEST_CASE("weight functions") {
  const Grid grid(-10.0, 10.0, 2001);
  const auto bg = wspace::BackgroundPair::build(grid, kAsym.alpha1, kAsym.alpha2, kAsym.beta1,
                                                kAsym.beta2, kParams.lambda());
  const auto [u_w, v_w] = ew::weights_UV(bg);
  CHECK((u_w > 0.0).all());
  CHECK((v_w > 0.0).all());
  // V tail is exactly exponential with slope alpha2
  const Eigen::Index i = grid.nearest_index(6.0);
  CHECK(std::log(v_w[i]) == doctest::Approx(kAsym.alpha2 * 6.0).epsilon(1e-12));

  // ln U falls like -lambda x^2 / 2 once omega dominates
  const TailFit ufit =
      fit_tail(grid, Field(u_w.log()), 4.0, 9.0, TailModel::linear_plus_quadratic);
  CHECK(ufit.quadratic() == doctest::Approx(-0.5 * kParams.lambda()).epsilon(1e-10));

  const auto bad = wspace::BackgroundPair::build(grid, 1.5, 2.0, 1.5, -2.0, kParams.lambda());
  CHECK_THROWS_AS(ew::weights_UV(bad), std::invalid_argument);
}

TEST_CASE("reduced functional: mean-zero gate, shift invariance, coercivity") {
  const Grid grid(-16.0, 16.0, 801);
  const wspace::WeightedMeasure mu(grid, 1.0);
  const ew::EwFunctional fn(kParams, kAsym, grid, mu);

  CHECK_THROWS_AS(fn.value(Field(Field::Constant(grid.n(), 0.3)), Field(Field::Zero(grid.n()))),
                  std::invalid_argument);

  const Field zero = Field::Zero(grid.n());
  const double at_zero = fn.value(zero, zero);
  CHECK(std::isfinite(at_zero));

  // objective is invariant under constant shifts (projection inside)
  const auto obj = fn.objective();
  Eigen::VectorXd z = smooth_random(grid, 9, 0.4), g(z.size());
  const double f0 = obj(z, g);
  Eigen::VectorXd shifted = z;
  shifted.head(grid.n()).array() += 1.3;
  shifted.tail(grid.n()).array() -= 0.7;
  CHECK(obj(shifted, g) == doctest::Approx(f0).epsilon(1e-10));

  // growth along a fixed mean-zero bump in the second slot
  Field bump = (-(grid.points() - 1.0).square()).exp();
  bump = wspace::split(bump, mu).dotted;
  const auto value_at = [&](double t) {
    Eigen::VectorXd zz = Eigen::VectorXd::Zero(2 * grid.n());
    zz.tail(grid.n()) = (t * bump).matrix();
    Eigen::VectorXd gg(zz.size());
    return obj(zz, gg);
  };
  const double i0 = value_at(0.0), i2 = value_at(2.0), i4 = value_at(4.0);
  CHECK(i2 > i0);
  CHECK(i4 - i2 > i2 - i0);  // superlinear growth
}

TEST_CASE("reduced gradient matches finite differences") {
  const Grid grid(-16.0, 16.0, 601);
  const wspace::WeightedMeasure mu(grid, 1.0);
  const ew::EwFunctional fn(kParams, kAsym, grid, mu);
  const double worst =
      verify::gradient_fd_harness(fn.objective(), smooth_random(grid, 31, 0.4), 20, 1e-5, 99);
  CHECK(worst < 1e-6);
}

TEST_CASE("measure window is enforced") {
  const Grid grid(-16.0, 16.0, 801);
  const wspace::WeightedMeasure too_wide(grid, 2.5);  // beta >= min{|a2|,|b2|} = 2
  CHECK_THROWS_AS(ew::EwFunctional(kParams, kAsym, grid, too_wide), std::invalid_argument);
  CHECK(ew::default_measure_beta(kAsym) == doctest::Approx(1.0));
}

TEST_CASE("constrained minimization: constraints, multipliers, integrals") {
  const Grid grid(-16.0, 16.0, 1601);
  const wspace::WeightedMeasure mu(grid, 1.0);
  const auto res = ew::minimize_constrained(kParams, kAsym, grid, mu);
  REQUIRE(res.convergence.converged);

  CHECK(res.constraint_residual_1 < 1e-12);
  CHECK(res.constraint_residual_2 < 1e-12);
  CHECK(res.xi1 == doctest::Approx(-1.0).epsilon(2e-3));
  CHECK(res.xi2 == doctest::Approx(4.0).epsilon(2e-3));
  CHECK(res.integral_w_sq == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(res.integral_phi_sq == doctest::Approx(3.0).epsilon(1e-6));
  CHECK((res.profile.field("w") > 0.0).all());
  CHECK((res.profile.field("phi") > 0.0).all());

  // recover_multipliers reproduces the stored values
  const auto [x1, x2] = ew::recover_multipliers(res, kParams, kAsym, mu);
  CHECK(x1 == doctest::Approx(res.xi1).epsilon(1e-12));
  CHECK(x2 == doctest::Approx(res.xi2).epsilon(1e-12));

  // reconstruction satisfies the first-order system away from the tails
  for (const auto& rep : verify::check_ew_system(res, kParams))
    CHECK(rep.sup_norm < 60.0 * grid.h() * grid.h());
}

TEST_CASE("restarts agree and the result is measure-blend insensitive") {
  const Grid grid(-16.0, 16.0, 801);
  const wspace::WeightedMeasure mu(grid, 1.0);
  ew::EwMinimizeOptions opts;
  opts.restarts = 3;
  opts.tol = 1e-9;
  const auto multi = ew::minimize_constrained(kParams, kAsym, grid, mu, opts);
  CHECK(multi.restart_spread < 1e-5);

  // the reconstructed fields do not depend on the weight exponent
  const wspace::WeightedMeasure mu2(grid, 0.6);
  const auto res_a = ew::minimize_constrained(kParams, kAsym, grid, mu);
  const auto res_b = ew::minimize_constrained(kParams, kAsym, grid, mu2);
  CHECK((res_a.profile.field("w") - res_b.profile.field("w")).abs().maxCoeff() < 1e-6);
  CHECK((res_a.profile.field("phi") - res_b.profile.field("phi")).abs().maxCoeff() < 1e-6);
}

TEST_CASE("tail report matches the prescribed decay") {
  const Grid grid = ew::default_grid(kParams, kAsym, 3001);
  const wspace::WeightedMeasure mu(grid, 1.0);
  const auto res = ew::minimize_constrained(kParams, kAsym, grid, mu);
  const auto rep = ew::decay_report(res, kParams, kAsym);
  CHECK(rep.w_right.fit.slope() == doctest::Approx(kAsym.alpha2).epsilon(0.02));
  CHECK(rep.w_left.fit.slope() == doctest::Approx(-kAsym.beta2).epsilon(0.02));
  CHECK(rep.phi_right.fit.quadratic() == doctest::Approx(-0.5 * kParams.lambda()).epsilon(0.02));
  CHECK(rep.phi_right.fit.slope() ==
        doctest::Approx(0.5 * (kAsym.alpha1 + std::abs(kAsym.alpha2))).epsilon(0.05));
  CHECK(rep.phi_left.fit.slope() ==
        doctest::Approx(-0.5 * (kAsym.beta1 + std::abs(kAsym.beta2))).epsilon(0.05));
}
