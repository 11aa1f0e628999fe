#pragma once

#include "walls/abelian_wall.hpp"
#include "walls/ew_wall.hpp"
#include "walls/grid.hpp"
#include "walls/liouville_cs.hpp"
#include "walls/profile.hpp"
#include "walls/u2_wall.hpp"

#include <string>
#include <vector>

namespace walls::verify {

/// Sup-norm of a finite-difference equation residual over the kept interior
/// points, with the measured h^2 constant. Points where a log-variable field
/// underflows (below 1e-12 of its scale) are excluded and counted.
struct ResidualReport {
  std::string equation;
  double sup_norm = 0.0;
  double h = 0.0;
  Eigen::Index excluded = 0;
  double c_measured = 0.0;  // sup_norm / h^2

  std::string line() const;
};

/// Pass policy between two grids: C is measured at the coarse grid and the
/// fine run must satisfy sup <= 4 C h_fine^2.
bool refinement_stable(const ResidualReport& coarse, const ResidualReport& fine);

ResidualReport make_report(std::string equation, const Grid& grid, const Field& residual,
                           const std::vector<bool>& keep);

inline constexpr double kUnderflowExclusion = 1e-12;

/// Second-order pair phi'' - e^2 A^2 phi = e^2 (phi^2 - xi) phi and
/// A'' = 2 e^2 phi^2 A, with phi = sqrt(xi) e^{u/2} and A = -u'/(2e)
/// reconstructed from the wall profile.
std::vector<ResidualReport> check_ah_second_order(const Profile& profile,
                                                  const abelian::AbelianHiggsParams& p);

/// W-condensate pair W'' - e^2 P^2 W = 2 m_W^2 W - 3 e P' W + 4 e^2 W^3 and
/// P'' = 2 e^2 W^2 P + 6 e W W', with W = e^{u/2}, P = -u'/(2e).
std::vector<ResidualReport> check_w_second_order(const Profile& profile, double e, double m_w);

/// Relativistic pair and constraint (kind rel_topological / rel_lump), or the
/// gauged Schroedinger system at critical quartic coupling (jp kinds).
std::vector<ResidualReport> check_cs_second_order(const cs::SolutionFamily& family, double kappa,
                                                  const Grid& grid, double mass = 1.0);

/// Reconstruction residuals of the U(2) first-order system plus the coupled
/// second-order equations, on minimizer output.
std::vector<ResidualReport> check_u2_system(const u2::U2Result& result, const u2::U2Params& p);

/// All four first-order electroweak equations plus the second-order pair on
/// the reconstructed (w, phi, P, Z).
std::vector<ResidualReport> check_ew_system(const ew::EwResult& result, const ew::EwParams& p);

}  // namespace walls::verify
