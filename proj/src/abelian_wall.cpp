#include "walls/abelian_wall.hpp"

#include "walls/quadrature.hpp"
#include "walls/finite_diff.hpp"
#include "walls/rk4.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace walls::abelian {

namespace {

using Eigen::Vector2d;

// e^u - u - 1 without cancellation near u = 0.
double htm_radicand(double u) { return std::expm1(u) - u; }

}  // namespace

double first_integral_htm(double u, double lambda) {
  if (u > 0.0) throw std::invalid_argument("first_integral_htm: u must be <= 0");
  const double r = std::max(0.0, htm_radicand(u));
  return -std::sqrt(2.0 * lambda) * std::sqrt(r);
}

Profile solve_higgs_to_magnetic(const AbelianHiggsParams& p, const Grid& grid,
                                const HtmOptions& opt) {
  p.validate();
  if (!(opt.u_ref < 0.0))
    throw std::invalid_argument("solve_higgs_to_magnetic: u_ref must be < 0");
  if (!grid.contains(opt.x_ref))
    throw std::invalid_argument("solve_higgs_to_magnetic: x_ref outside the grid");

  const double lambda = p.lambda();
  const double h = grid.h();
  const Eigen::Index n = grid.n();
  const Eigen::Index i0 = grid.nearest_index(opt.x_ref);

  Field u(n), du(n);
  u[i0] = opt.u_ref;
  du[i0] = first_integral_htm(opt.u_ref, lambda);

  const auto slope = [lambda](double, double v) { return first_integral_htm(std::min(v, 0.0), lambda); };

  // right side: u stays below u_ref, the first-order branch is regular
  for (Eigen::Index i = i0; i + 1 < n; ++i) {
    u[i + 1] = rk4_step(slope, grid.x(i), u[i], h);
    du[i + 1] = first_integral_htm(u[i + 1], lambda);
  }

  // left side: first-order until u crosses the switch level, then the
  // second-order system to avoid the square-root degeneracy at u = 0
  const auto system = [lambda](double, const Vector2d& y) {
    return Vector2d(y[1], lambda * std::expm1(y[0]));
  };
  bool second_order = false;
  Vector2d state;
  for (Eigen::Index i = i0; i > 0; --i) {
    if (!second_order && u[i] > -opt.switch_level) {
      second_order = true;
      state = Vector2d(u[i], first_integral_htm(std::min(u[i], 0.0), lambda));
    }
    if (second_order) {
      state = rk4_step(system, grid.x(i), state, -h);
      u[i - 1] = state[0];
      du[i - 1] = state[1];
    } else {
      u[i - 1] = rk4_step(slope, grid.x(i), u[i], -h);
      du[i - 1] = first_integral_htm(std::min(u[i - 1], 0.0), lambda);
    }
  }

  Profile out(grid);
  out.add("u", u);
  out.add("du", du);
  if (u[n - 1] > -30.0)
    out.warn("right tail unresolved: u(x_max) = " + std::to_string(u[n - 1]));
  if (std::abs(u[0]) > 1e-8)
    out.warn("left tail unresolved: u(x_min) = " + std::to_string(u[0]));
  return out;
}

Profile solve_magnetic_to_magnetic(const AbelianHiggsParams& p, double x0, double u0,
                                   const Grid& grid) {
  p.validate();
  if (u0 > 0.0) throw std::invalid_argument("solve_magnetic_to_magnetic: u0 must be <= 0");
  if (!grid.contains(x0))
    throw std::invalid_argument("solve_magnetic_to_magnetic: x0 outside the grid");

  const Eigen::Index n = grid.n();
  Profile out(grid);

  if (u0 == 0.0) {
    // double root of the first integral: the constant Higgs-phase solution
    out.add("u", Field::Zero(n));
    out.add("du", Field::Zero(n));
    out.warn("u0 = 0 is degenerate: returned the trivial solution u = 0");
    return out;
  }

  const double lambda = p.lambda();
  const double h = grid.h();
  const Eigen::Index i0 = grid.nearest_index(x0);
  if (std::abs(grid.x(i0) - x0) > 1e-9 * (grid.x_max() - grid.x_min()))
    out.warn("x0 snapped to nearest grid point " + std::to_string(grid.x(i0)));

  const double c0 = htm_radicand(u0);
  const auto slope = [lambda, c0](double, double v) {
    return -std::sqrt(2.0 * lambda) * std::sqrt(std::max(0.0, htm_radicand(v) - c0));
  };
  const auto system = [lambda](double, const Vector2d& y) {
    return Vector2d(y[1], lambda * std::expm1(y[0]));
  };
  constexpr double kSwitchDelta = 1e-3;

  // march the right half once; the solution is even about x0 by construction
  const Eigen::Index steps = std::max(i0, n - 1 - i0);
  Field traj_u(steps + 1), traj_du(steps + 1);
  traj_u[0] = u0;
  traj_du[0] = 0.0;
  bool first_order = false;
  Vector2d state(u0, 0.0);
  for (Eigen::Index k = 0; k < steps; ++k) {
    const double x = grid.x(i0) + static_cast<double>(k) * h;
    if (!first_order && traj_u[k] < u0 - kSwitchDelta) first_order = true;
    if (first_order) {
      traj_u[k + 1] = rk4_step(slope, x, traj_u[k], h);
      traj_du[k + 1] = slope(0.0, traj_u[k + 1]);
    } else {
      state = rk4_step(system, x, state, h);
      traj_u[k + 1] = state[0];
      traj_du[k + 1] = state[1];
    }
  }

  Field u(n), du(n);
  for (Eigen::Index k = 0; i0 + k < n; ++k) {
    u[i0 + k] = traj_u[k];
    du[i0 + k] = traj_du[k];
  }
  for (Eigen::Index k = 1; i0 - k >= 0; ++k) {
    u[i0 - k] = traj_u[k];
    du[i0 - k] = -traj_du[k];
  }

  out.add("u", u);
  out.add("du", du);
  return out;
}

Profile solve(const AbelianHiggsParams& p, const WallBC& bc, const Grid& grid) {
  if (bc.kind == WallBC::Kind::magnetic_to_magnetic)
    return solve_magnetic_to_magnetic(p, bc.x0, bc.u0, grid);
  HtmOptions opt;
  opt.x_ref = bc.x0;
  opt.u_ref = bc.u0;
  return solve_higgs_to_magnetic(p, grid, opt);
}

Profile solve_general(const GeneralLiouvilleParams& p, const GeneralNormalization& bc,
                      const Grid& grid, const GeneralOptions& opt) {
  p.validate();
  if (!grid.contains(bc.x0)) throw std::invalid_argument("solve_general: x0 outside the grid");
  if (std::abs(bc.u0) > opt.blow_up_cap)
    throw std::invalid_argument("solve_general: |u0| already beyond the blow-up cap");

  const double lambda = p.lambda;
  const double eps = p.epsilon;
  const double h = grid.h();
  const Eigen::Index n = grid.n();
  const Eigen::Index i0 = grid.nearest_index(bc.x0);

  const auto system = [lambda, eps](double, const Vector2d& y) {
    return Vector2d(y[1], lambda * (std::expm1(y[0]) + 1.0 - eps));
  };

  Field u(n), du(n);
  u[i0] = bc.u0;
  du[i0] = bc.du0;
  Profile out(grid);

  const auto sweep = [&](Eigen::Index from, Eigen::Index to, double step) {
    Vector2d state(u[from], du[from]);
    Eigen::Index i = from;
    while (i != to) {
      state = rk4_step(system, grid.x(i), state, step);
      i += step > 0 ? 1 : -1;
      if (!state.allFinite() || std::abs(state[0]) > opt.blow_up_cap) {
        const double held = std::isfinite(state[0])
                                ? std::clamp(state[0], -opt.blow_up_cap, opt.blow_up_cap)
                                : (step > 0 ? u[i - 1] : u[i + 1]);
        for (Eigen::Index j = i;; j += step > 0 ? 1 : -1) {
          u[j] = held;
          du[j] = 0.0;
          if (j == to) break;
        }
        out.warn("blow-up at x = " + std::to_string(grid.x(i)) +
                 ": samples beyond are held constant");
        return;
      }
      u[i] = state[0];
      du[i] = state[1];
    }
  };

  if (i0 < n - 1) sweep(i0, n - 1, h);
  if (i0 > 0) sweep(i0, 0, -h);

  out.add("u", u);
  out.add("du", du);
  return out;
}

RiccatiCheck riccati_first_integral_check(const Profile& profile,
                                          const GeneralLiouvilleParams& p) {
  p.validate();
  const Grid& grid = profile.grid;
  const Field& u = profile.field("u");
  const double h = grid.h();

  const Field f = u.exp();
  const Field g = cumulative_trapezoid(f, h);
  // f'/f = (ln f)' is differenced in the log variable, which stays conditioned
  // where f itself is many orders of magnitude below 1
  const Field dlogf = deriv1_all(u, h);

  constexpr double kUnderflow = 1e-290;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  Eigen::Index excluded = 0;
  for (Eigen::Index i = 1; i + 1 < grid.n(); ++i) {
    if (f[i] < kUnderflow) {
      ++excluded;
      continue;
    }
    const double q = dlogf[i] + p.lambda * p.epsilon * grid.x(i) - p.lambda * g[i];
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  if (!(lo <= hi)) throw std::runtime_error("riccati check: every interior point underflowed");
  return {hi - lo, excluded};
}

double first_integral_drift(const Profile& profile, const GeneralLiouvilleParams& p) {
  const Grid& grid = profile.grid;
  const Field& u = profile.field("u");
  const Field v = deriv1_all(u, grid.h());
  const Field energy = 0.5 * v.square() - p.lambda * (u.exp() - p.epsilon * u);
  return energy.maxCoeff() - energy.minCoeff();
}

Grid default_grid(const AbelianHiggsParams& p, Eigen::Index n) {
  const double lambda = p.lambda();
  const double right = std::sqrt(120.0 / lambda);           // -lambda L^2/2 < -60
  const double left = -std::log(1e-12) / std::sqrt(lambda); // e^{-sqrt(lambda) L} < 1e-12
  const double half = std::ceil(std::max(right, left)) + 1.0;
  return Grid(-half, half, n);
}

}  // namespace walls::abelian
