#include "walls/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace walls {

namespace {

using Eigen::VectorXd;

struct Pair {
  VectorXd s, y;
  double rho;
};

// two-loop recursion; H0 = gamma * I from the newest pair
VectorXd lbfgs_direction(const std::deque<Pair>& mem, const VectorXd& g) {
  VectorXd q = -g;
  if (mem.empty()) return q;
  std::vector<double> alpha(mem.size());
  for (std::size_t i = mem.size(); i-- > 0;) {
    alpha[i] = mem[i].rho * mem[i].s.dot(q);
    q -= alpha[i] * mem[i].y;
  }
  const Pair& last = mem.back();
  q *= last.s.dot(last.y) / last.y.squaredNorm();
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const double beta = mem[i].rho * mem[i].y.dot(q);
    q += (alpha[i] - beta) * mem[i].s;
  }
  return q;
}

struct LineSearchResult {
  double alpha = 0.0;
  double f = 0.0;
  bool ok = false;
};

// strong Wolfe line search (bracket + bisection zoom); phi(a) = f(x + a d)
class LineSearch {
 public:
  LineSearch(const ObjectiveFn& fn, const VectorXd& x, const VectorXd& d, double f0, double dphi0,
             const LbfgsOptions& opts)
      : fn_(fn), x_(x), d_(d), f0_(f0), dphi0_(dphi0), opts_(opts) {}

  LineSearchResult run(double alpha_init) {
    double a_prev = 0.0, f_prev = f0_;
    double a = alpha_init;
    for (int it = 0; it < opts_.max_line_search; ++it) {
      double dphi;
      const double f = eval(a, dphi);
      if (!std::isfinite(f)) {
        a = 0.5 * (a_prev + a);
        continue;
      }
      if (f > f0_ + opts_.wolfe_c1 * a * dphi0_ || (it > 0 && f >= f_prev))
        return zoom(a_prev, f_prev, a);
      if (std::abs(dphi) <= -opts_.wolfe_c2 * dphi0_) return {a, f, true};
      if (dphi >= 0.0) return zoom(a, f, a_prev);
      a_prev = a;
      f_prev = f;
      a = std::min(2.0 * a, 1e10);
    }
    return {};
  }

 private:
  double eval(double a, double& dphi) {
    xt_ = x_ + a * d_;
    gt_.resizeLike(xt_);
    const double f = fn_(xt_, gt_);
    dphi = std::isfinite(f) ? gt_.dot(d_) : std::numeric_limits<double>::quiet_NaN();
    return f;
  }

  LineSearchResult zoom(double a_lo, double f_lo, double a_hi) {
    for (int it = 0; it < opts_.max_line_search; ++it) {
      const double a = 0.5 * (a_lo + a_hi);
      double dphi;
      const double f = eval(a, dphi);
      if (!std::isfinite(f) || f > f0_ + opts_.wolfe_c1 * a * dphi0_ || f >= f_lo) {
        a_hi = a;
      } else {
        if (std::abs(dphi) <= -opts_.wolfe_c2 * dphi0_) return {a, f, true};
        if (dphi * (a_hi - a_lo) >= 0.0) a_hi = a_lo;
        a_lo = a;
        f_lo = f;
      }
      if (std::abs(a_hi - a_lo) <= 1e-16 * std::max(1.0, std::abs(a_lo))) break;
    }
    // accept the best bracketed point if it made any progress
    if (a_lo > 0.0 && f_lo < f0_) return {a_lo, f_lo, true};
    return {};
  }

  const ObjectiveFn& fn_;
  const VectorXd& x_;
  const VectorXd& d_;
  double f0_, dphi0_;
  const LbfgsOptions& opts_;
  VectorXd xt_, gt_;
};

}  // namespace

LbfgsResult minimize_lbfgs(const ObjectiveFn& fn, Eigen::VectorXd x0, const LbfgsOptions& opts) {
  LbfgsResult out;
  if (opts.project) opts.project(x0);
  VectorXd x = std::move(x0);
  VectorXd g(x.size());
  double f = fn(x, g);
  if (!std::isfinite(f)) throw std::invalid_argument("minimize_lbfgs: non-finite start value");

  std::deque<Pair> mem;
  int fallback_resets = 0;

  for (int it = 0; it < opts.max_iterations; ++it) {
    const double gnorm = g.lpNorm<Eigen::Infinity>();
    if (gnorm <= opts.grad_tol_inf) {
      out.x = std::move(x);
      out.grad = std::move(g);
      out.record = {it, gnorm, f, true, "gradient tolerance reached"};
      return out;
    }

    VectorXd d = lbfgs_direction(mem, g);
    double dphi0 = g.dot(d);
    if (!(dphi0 < 0.0)) {  // not a descent direction: drop memory
      mem.clear();
      d = -g;
      dphi0 = g.dot(d);
    }

    LineSearch search(fn, x, d, f, dphi0, opts);
    LineSearchResult ls = search.run(mem.empty() ? std::min(1.0, 1.0 / g.norm()) : 1.0);
    if (!ls.ok && !mem.empty()) {  // retry as steepest descent
      mem.clear();
      d = -g;
      dphi0 = g.dot(d);
      LineSearch retry(fn, x, d, f, dphi0, opts);
      ls = retry.run(std::min(1.0, 1.0 / g.norm()));
      ++fallback_resets;
    }
    if (!ls.ok) {
      out.x = std::move(x);
      out.grad = std::move(g);
      out.record = {it, gnorm, f,
                    gnorm <= opts.grad_tol_inf,
                    "line search stalled (rounding floor) after " + std::to_string(it) +
                        " iterations"};
      return out;
    }

    VectorXd x_new = x + ls.alpha * d;
    if (opts.project) opts.project(x_new);
    VectorXd g_new(x.size());
    const double f_new = fn(x_new, g_new);

    VectorXd s = x_new - x;
    VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      mem.push_back({std::move(s), std::move(y), 1.0 / sy});
      if (static_cast<int>(mem.size()) > opts.history) mem.pop_front();
    }
    x = std::move(x_new);
    g = std::move(g_new);
    f = f_new;
  }

  out.record = {opts.max_iterations, g.lpNorm<Eigen::Infinity>(), f, false, "iteration cap reached"};
  out.x = std::move(x);
  out.grad = std::move(g);
  return out;
}

}  // namespace walls
