#include "walls/tail_fit.hpp"

namespace walls {

TailFit fit_tail(const Grid& grid, const Eigen::Ref<const Field>& f, double x_lo, double x_hi,
                 TailModel model) {
  if (f.size() != grid.n()) throw std::invalid_argument("fit_tail: field/grid size mismatch");
  if (!(x_lo < x_hi)) throw std::invalid_argument("fit_tail: degenerate window");
  if (x_lo < grid.x_min() - 0.5 * grid.h() || x_hi > grid.x_max() + 0.5 * grid.h())
    throw std::invalid_argument("fit_tail: window outside the grid");

  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < grid.n(); ++i) {
    const double x = grid.x(i);
    if (x >= x_lo && x <= x_hi) idx.push_back(i);
  }
  if (idx.size() < 10)
    throw std::invalid_argument("fit_tail: window holds " + std::to_string(idx.size()) +
                                " points, need at least 10");

  const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
  const Eigen::Index cols = model == TailModel::linear ? 2 : 3;
  Eigen::MatrixXd V(m, cols);
  Eigen::VectorXd y(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const double x = grid.x(idx[static_cast<std::size_t>(r)]);
    V(r, 0) = 1.0;
    V(r, 1) = x;
    if (cols == 3) V(r, 2) = x * x;
    y(r) = f[idx[static_cast<std::size_t>(r)]];
  }
  if (!y.allFinite()) throw std::invalid_argument("fit_tail: non-finite samples in window");

  TailFit fit;
  fit.x_lo = x_lo;
  fit.x_hi = x_hi;
  fit.model = model;
  fit.n_points = m;
  fit.coeffs = V.colPivHouseholderQr().solve(y);
  fit.residual_rms = std::sqrt((V * fit.coeffs - y).squaredNorm() / static_cast<double>(m));
  return fit;
}

}  // namespace walls
