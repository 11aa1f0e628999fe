#pragma once

// Classical fourth-order one-step integrator with a fixed step. State can be
// double or any Eigen fixed-size vector.

namespace walls {

template <class State, class Rhs>
State rk4_step(const Rhs& rhs, double x, const State& y, double step) {
  const State k1 = rhs(x, y);
  const State k2 = rhs(x + 0.5 * step, State(y + (0.5 * step) * k1));
  const State k3 = rhs(x + 0.5 * step, State(y + (0.5 * step) * k2));
  const State k4 = rhs(x + step, State(y + step * k3));
  return y + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace walls
