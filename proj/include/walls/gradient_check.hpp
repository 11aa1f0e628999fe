#pragma once

#include "walls/lbfgs.hpp"

namespace walls::verify {

/// Worst relative error over random unit directions between the central
/// finite difference of the objective and the inner product with its
/// analytic gradient.
double gradient_fd_harness(const ObjectiveFn& fn, const Eigen::VectorXd& point, int n_directions,
                           double h_fd, unsigned seed);

}  // namespace walls::verify
