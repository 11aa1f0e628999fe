#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace walls {

struct ConvergenceRecord {
  int iterations = 0;
  double grad_inf_norm = 0.0;
  double value = 0.0;
  bool converged = false;
  std::string message;
};

/// Evaluates f(x), fills grad, returns the value. A non-finite return rejects
/// the trial point inside the line search.
using ObjectiveFn = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct LbfgsOptions {
  double grad_tol_inf = 1e-8;
  int max_iterations = 20000;
  int history = 10;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  int max_line_search = 50;
  // optional post-step projection; must leave the objective value unchanged
  // along the projected direction (used for weighted mean-zero constraints)
  std::function<void(Eigen::VectorXd&)> project;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  Eigen::VectorXd grad;
  ConvergenceRecord record;
};

/// Limited-memory quasi-Newton minimization with a strong-Wolfe line search;
/// falls back to steepest descent with backtracking when curvature pairs
/// degenerate or the quasi-Newton direction stops making progress.
LbfgsResult minimize_lbfgs(const ObjectiveFn& fn, Eigen::VectorXd x0,
                           const LbfgsOptions& opts = {});

}  // namespace walls
