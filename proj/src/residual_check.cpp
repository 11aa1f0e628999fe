#include "walls/residual_check.hpp"

#include "walls/finite_diff.hpp"
#include "walls/gradient_check.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace walls::verify {

std::string ResidualReport::line() const {
  std::ostringstream os;
  os << equation << ": sup-residual " << sup_norm << " at h = " << h << " (C = " << c_measured
     << ", excluded " << excluded << ")";
  return os.str();
}

bool refinement_stable(const ResidualReport& coarse, const ResidualReport& fine) {
  return fine.sup_norm <= 4.0 * coarse.c_measured * fine.h * fine.h + 1e-14;
}

ResidualReport make_report(std::string equation, const Grid& grid, const Field& residual,
                           const std::vector<bool>& keep) {
  ResidualReport rep;
  rep.equation = std::move(equation);
  rep.h = grid.h();
  for (Eigen::Index i = 2; i + 2 < grid.n(); ++i) {
    if (!keep.empty() && !keep[static_cast<std::size_t>(i)]) {
      ++rep.excluded;
      continue;
    }
    rep.sup_norm = std::max(rep.sup_norm, std::abs(residual[i]));
  }
  rep.c_measured = rep.sup_norm / (rep.h * rep.h);
  return rep;
}

namespace {

std::vector<bool> keep_above(const Field& f, double floor_rel) {
  const double floor_abs = floor_rel * f.abs().maxCoeff();
  std::vector<bool> keep(static_cast<std::size_t>(f.size()), true);
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (std::abs(f[i]) < floor_abs) keep[static_cast<std::size_t>(i)] = false;
  return keep;
}

std::vector<bool> keep_and(std::vector<bool> a, const std::vector<bool>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] && b[i];
  return a;
}

// widen the excluded set so no kept point has an excluded one inside its
// reconstruction stencil
std::vector<bool> erode(const std::vector<bool>& keep, int radius) {
  std::vector<bool> out = keep;
  const auto n = static_cast<std::ptrdiff_t>(keep.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (keep[static_cast<std::size_t>(i)]) continue;
    for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - radius);
         j <= std::min(n - 1, i + radius); ++j)
      out[static_cast<std::size_t>(j)] = false;
  }
  return out;
}

}  // namespace

std::vector<ResidualReport> check_ah_second_order(const Profile& profile,
                                                  const abelian::AbelianHiggsParams& p) {
  const Grid& grid = profile.grid;
  const double h = grid.h();
  const double e2 = p.e * p.e;
  const Field& u = profile.field("u");
  const Field phi = std::sqrt(p.xi) * (0.5 * u).exp();
  const Field a_field = -deriv1_all(u, h) / (2.0 * p.e);

  const Field res_phi =
      deriv2_all(phi, h) - e2 * a_field.square() * phi - e2 * (phi.square() - p.xi) * phi;
  const Field res_a = deriv2_all(a_field, h) - 2.0 * e2 * phi.square() * a_field;

  const auto keep = keep_above(phi, kUnderflowExclusion);
  return {make_report("higgs field equation", grid, res_phi, keep),
          make_report("gauge field equation", grid, res_a, keep)};
}

std::vector<ResidualReport> check_w_second_order(const Profile& profile, double e, double m_w) {
  const Grid& grid = profile.grid;
  const double h = grid.h();
  const Field& u = profile.field("u");
  const Field w = (0.5 * u).exp();
  const Field p_field = -deriv1_all(u, h) / (2.0 * e);
  const Field dp = deriv1_all(p_field, h);
  const Field dw = deriv1_all(w, h);

  const Field res_w = deriv2_all(w, h) - e * e * p_field.square() * w - 2.0 * m_w * m_w * w +
                      3.0 * e * dp * w - 4.0 * e * e * w.cube();
  const Field res_p =
      deriv2_all(p_field, h) - 2.0 * e * e * w.square() * p_field - 6.0 * e * w * dw;

  const auto keep = keep_above(w, kUnderflowExclusion);
  return {make_report("condensate equation", grid, res_w, keep),
          make_report("photon equation", grid, res_p, keep)};
}

std::vector<ResidualReport> check_cs_second_order(const cs::SolutionFamily& family, double kappa,
                                                  const Grid& grid, double mass) {
  const double h = grid.h();
  const Field xs = grid.points();
  using Kind = cs::SolutionFamily::Kind;

  if (family.kind == Kind::rel_topological || family.kind == Kind::rel_lump) {
    const double lambda = 4.0 / (kappa * kappa);
    const Field u = family.kind == Kind::rel_topological
                        ? cs::rel_topwall_u(lambda, family.x0, family.u0, xs)
                        : cs::rel_lump_u(lambda, family.x0, family.u0, xs);
    const Field phi = (0.5 * u).exp();
    const Field a_field = -deriv1_all(phi, h) / phi;
    const Field a0 = kappa * deriv1_all(a_field, h) / (2.0 * phi.square());

    const Field phi2 = phi.square();
    const Field res_phi = deriv2_all(phi, h) - a_field.square() * phi + a0.square() * phi -
                          (phi2 - 1.0) * (3.0 * phi2 - 1.0) * phi / (kappa * kappa);
    const Field res_a0 = kappa * deriv1_all(a0, h) - 2.0 * a_field * phi2;
    const Field res_a = kappa * deriv1_all(a_field, h) - 2.0 * a0 * phi2;

    // the a0 reconstruction divides twice-differenced data by phi^2, which
    // runs out of significant digits long before phi underflows; keep only
    // points where phi holds a substantial fraction of its peak
    const auto keep = erode(keep_above(phi, 0.15), 3);
    return {make_report(family.label() + " scalar equation", grid, res_phi, keep),
            make_report(family.label() + " gauss law", grid, res_a0, keep),
            make_report(family.label() + " field constraint", grid, res_a, keep)};
  }

  // gauged Schroedinger system at critical quartic coupling g = 1/(m kappa)
  const Field u = family.kind == Kind::jp_pos_kappa
                      ? cs::jp_exact(kappa, family.x0, family.u0, xs)
                      : cs::jp_exact_negk(kappa, family.x0, family.u0, xs);
  const Field psi = (0.5 * u).exp();
  const Field psi2 = psi.square();
  const Field a_field = -deriv1_all(psi, h) / psi;
  const Field a0 = -psi2 / (2.0 * mass * kappa);
  const double g_c = 1.0 / (mass * kappa);

  const Field res_schrod = a0 * psi + deriv2_all(psi, h) / (2.0 * mass) -
                           a_field.square() * psi / (2.0 * mass) + g_c * psi2 * psi;
  const Field res_gauss = deriv1_all(a_field, h) - psi2 / kappa;
  const Field res_a0 = deriv1_all(a0, h) - psi2 * a_field / (mass * kappa);

  const auto keep = erode(keep_above(psi, 1e-4), 3);
  return {make_report(family.label() + " schroedinger equation", grid, res_schrod, keep),
          make_report(family.label() + " gauss law", grid, res_gauss, keep),
          make_report(family.label() + " temporal constraint", grid, res_a0, keep)};
}

std::vector<ResidualReport> check_u2_system(const u2::U2Result& result, const u2::U2Params& p) {
  const Grid& grid = result.profile.grid;
  const double h = grid.h();
  const double lambda = p.lambda();
  const double gamma = p.gamma;
  const Field& u1 = result.profile.field("u1");
  const Field& u2f = result.profile.field("u2");
  const Field q1sq = p.xi * u1.exp();
  const Field q2sq = p.xi * u2f.exp();
  const Field du1 = deriv1_all(u1, h);
  const Field du2 = deriv1_all(u2f, h);

  // ea = e a and ga = g A reconstructed from the first-order system
  const Field ea = -0.5 * (du1 + du2);
  const Field ga = -0.5 * (du1 - du2);
  const double e2 = p.e * p.e;
  const double g2 = gamma * e2;

  const Field res_a = deriv1_all(ea, h) + 0.5 * e2 * (q1sq + q2sq - 2.0 * p.xi);
  const Field res_gauge = deriv1_all(ga, h) + 0.5 * g2 * (q1sq - q2sq);
  const Field res_u1 =
      deriv2_all(u1, h) -
      lambda * ((1.0 + gamma) * u1.exp() + (1.0 - gamma) * u2f.exp() - 2.0);
  const Field res_u2 =
      deriv2_all(u2f, h) -
      lambda * ((1.0 - gamma) * u1.exp() + (1.0 + gamma) * u2f.exp() - 2.0);

  const std::vector<bool> keep;  // no divisions by fields anywhere
  return {make_report("abelian gauge slope equation", grid, res_a, keep),
          make_report("nonabelian gauge slope equation", grid, res_gauge, keep),
          make_report("u1 second-order equation", grid, res_u1, keep),
          make_report("u2 second-order equation", grid, res_u2, keep)};
}

std::vector<ResidualReport> check_ew_system(const ew::EwResult& result, const ew::EwParams& p) {
  const Grid& grid = result.profile.grid;
  const double h = grid.h();
  const double g = p.g;
  const double ct = std::sqrt(p.cos_sq());
  const double st = std::sqrt(1.0 - p.cos_sq());
  const Field& w = result.profile.field("w");
  const Field& phi = result.profile.field("phi");
  const Field& pf = result.profile.field("P");
  const Field& zf = result.profile.field("Z");
  const Field& v1 = result.profile.field("v1");
  const Field& v2 = result.profile.field("v2");

  const Field res_w = deriv1_all(w, h) + g * (st * pf + ct * zf) * w;
  const Field res_phi = deriv1_all(phi, h) - (0.5 * g / ct) * zf * phi;
  const Field res_p =
      deriv1_all(pf, h) - 0.5 * g / st * p.phi0 * p.phi0 - 2.0 * g * st * w.square();
  const Field res_z = deriv1_all(zf, h) - 0.5 * g / ct * (phi.square() - p.phi0 * p.phi0) -
                      2.0 * g * ct * w.square();
  const Field res_lnw =
      0.5 * deriv2_all(v1, h) + 0.5 * g * g * phi.square() + 2.0 * g * g * w.square();
  const Field res_lnphi = 0.5 * deriv2_all(v2, h) -
                          0.25 * g * g / (ct * ct) * (phi.square() - p.phi0 * p.phi0) -
                          g * g * w.square();

  const auto keep =
      keep_and(keep_above(w, kUnderflowExclusion), keep_above(phi, kUnderflowExclusion));
  return {make_report("w slope equation", grid, res_w, keep),
          make_report("phi slope equation", grid, res_phi, keep),
          make_report("photon slope equation", grid, res_p, keep),
          make_report("z slope equation", grid, res_z, keep),
          make_report("log-w second-order equation", grid, res_lnw, keep),
          make_report("log-phi second-order equation", grid, res_lnphi, keep)};
}

double gradient_fd_harness(const ObjectiveFn& fn, const Eigen::VectorXd& point, int n_directions,
                           double h_fd, unsigned seed) {
  Eigen::VectorXd g0(point.size());
  fn(point, g0);

  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd d(point.size()), scratch(point.size());
  double worst = 0.0;
  for (int k = 0; k < n_directions; ++k) {
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = gauss(rng);
    d /= d.norm();
    const double f_plus = fn(point + h_fd * d, scratch);
    const double f_minus = fn(point - h_fd * d, scratch);
    const double fd = (f_plus - f_minus) / (2.0 * h_fd);
    const double an = g0.dot(d);
    const double err = std::abs(fd - an) /
                       (std::max(std::abs(fd), std::abs(an)) + std::numeric_limits<double>::epsilon());
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace walls::verify
