#pragma once

#include "walls/grid.hpp"
#include "walls/profile.hpp"

namespace walls::abelian {

/// Abelian Higgs wall couplings; the reduced equation is u'' = lambda (e^u - 1)
/// with lambda = 2 e^2 xi. The Higgs field is phi = sqrt(xi) e^{u/2} and the
/// gauge component A = -u'/(2e).
struct AbelianHiggsParams {
  double e = 1.0;
  double xi = 1.0;
  double lambda() const { return 2.0 * e * e * xi; }
  void validate() const {
    if (!(e > 0.0) || !(xi > 0.0))
      throw std::invalid_argument("AbelianHiggsParams: e and xi must be > 0");
  }
};

/// General family u'' = lambda (e^u - eps).
struct GeneralLiouvilleParams {
  double lambda = 1.0;  // nonzero
  double epsilon = 0.0;
  void validate() const {
    if (lambda == 0.0) throw std::invalid_argument("GeneralLiouvilleParams: lambda must be nonzero");
  }
};

/// W-condensate equation u'' = -4 e^2 e^u - 2 m_W^2 cast into the general family.
inline GeneralLiouvilleParams w_condensate_params(double e, double m_w) {
  return {-4.0 * e * e, -m_w * m_w / (2.0 * e * e)};
}

struct WallBC {
  enum class Kind { higgs_to_magnetic, magnetic_to_magnetic };
  Kind kind = Kind::higgs_to_magnetic;
  double x0 = 0.0;   // m2m: location of the maximum; htm: normalization point
  double u0 = -1.0;  // m2m: maximum value (<= 0); htm: u(x0) < 0
};

/// u' on the lower branch of the first integral (u')^2 = 2 lambda (e^u - u - 1).
/// Defined for u <= 0; vanishes at u = 0.
double first_integral_htm(double u, double lambda);

struct HtmOptions {
  double x_ref = 0.0;
  double u_ref = -1.0;
  // below this |u| the first-order form degenerates; march the second-order
  // system instead
  double switch_level = 1e-3;
};

/// Wall between the Higgs phase (u -> 0 on the left) and the magnetic phase
/// (u -> -inf on the right), normalized by u(x_ref) = u_ref.
Profile solve_higgs_to_magnetic(const AbelianHiggsParams& p, const Grid& grid,
                                const HtmOptions& opt = {});

/// Even solution about x0 with global maximum u(x0) = u0 <= 0 and both tails
/// falling like -lambda x^2 / 2.
Profile solve_magnetic_to_magnetic(const AbelianHiggsParams& p, double x0, double u0,
                                   const Grid& grid);

Profile solve(const AbelianHiggsParams& p, const WallBC& bc, const Grid& grid);

struct GeneralNormalization {
  double x0 = 0.0;
  double u0 = 0.0;
  double du0 = 0.0;
};

struct GeneralOptions {
  double blow_up_cap = 100.0;  // |u| beyond this aborts the sweep
};

/// Integrates u'' = lambda (e^u - eps) outward from the normalization point.
/// A blow-up inside the grid clamps the remaining samples and sets a warning.
Profile solve_general(const GeneralLiouvilleParams& p, const GeneralNormalization& bc,
                      const Grid& grid, const GeneralOptions& opt = {});

struct RiccatiCheck {
  double deviation;       // max - min of f'/f + lambda eps x - lambda g over kept points
  Eigen::Index excluded;  // points dropped because f = e^u underflowed
};

/// Constancy check of the first Riccati integration constant, with
/// g(x) = int_{x_min}^x e^u and g(x_min) = 0.
RiccatiCheck riccati_first_integral_check(const Profile& profile, const GeneralLiouvilleParams& p);

/// max - min of (u')^2/2 - lambda (e^u - eps u) along the profile, u' by
/// central differences.
double first_integral_drift(const Profile& profile, const GeneralLiouvilleParams& p);

/// [-L, L] with L sized so the right tail reaches u < -60 and the left tail
/// decays below 1e-12.
Grid default_grid(const AbelianHiggsParams& p, Eigen::Index n = 8001);

}  // namespace walls::abelian
