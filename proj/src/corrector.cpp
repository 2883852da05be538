#include "striphomog/corrector.hpp"

#include <algorithm>
#include <cmath>

#include "striphomog/errors.hpp"

namespace striphomog {

namespace {

// Principal square root of a symmetric positive definite 2x2 matrix:
// S = (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M)).
Mat2 spd_sqrt(const Mat2& m) {
  const double d = m.det();
  const double sd = std::sqrt(d);
  const double den = std::sqrt(m.a11 + m.a22 + 2.0 * sd);
  Mat2 s;
  s.a11 = (m.a11 + sd) / den;
  s.a12 = m.a12 / den;
  s.a21 = m.a21 / den;
  s.a22 = (m.a22 + sd) / den;
  return s;
}

double sym_lambda_max(const Mat2& m) {
  const double tr = m.a11 + m.a22;
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * m.det()));
  return 0.5 * (tr + disc);
}

}  // namespace

double EllipseFamily::evaluate_W(Vec2 x) const {
  const double r_out = r5 * eps;        // |q zeta| at the outer boundary
  const double r_in = r5 * eps * eta;   // ... at the inner boundary
  double w = 0.0;
  for (const EllipseEntry& e : holes) {
    const Vec2 zeta = x - e.center;
    // cheap reject: |q zeta| >= |zeta| / sig_qinv
    if (zeta.norm2() >= r_out * r_out * e.sig_qinv * e.sig_qinv) continue;
    const double rho = e.q.apply(zeta).norm();
    if (rho >= r_out) continue;
    if (rho <= r_in) return 1.0;
    w = std::max(w, std::log(rho / r_out) / std::log(eta));
  }
  return w;
}

EllipseFamily q_matrices(const Coefficients& c, const PerforatedDomain& dom) {
  if (dom.eta >= 1.0)
    fail(ErrKind::config, "corrector requires eta < 1 (log profile)");
  EllipseFamily fam;
  fam.eps = dom.eps;
  fam.eta = dom.eta;
  const double r2 = dom.family.R2;
  double r5_cap = std::numeric_limits<double>::infinity();
  double outer = std::numeric_limits<double>::infinity();
  double inner = std::numeric_limits<double>::infinity();
  for (const Hole& h : dom.holes) {
    if (h.bc != HoleBC::dirichlet) continue;
    const Mat2 a = c.A(h.y);
    const double scale = std::abs(a.a11) + std::abs(a.a22) + 1.0;
    if (std::abs(a.a12 - a.a21) > 1e-12 * scale)
      fail(ErrKind::numerical, "diffusion matrix not symmetric at hole center");
    if (a.a11 <= 0.0 || a.det() <= 0.0)
      fail(ErrKind::numerical, "diffusion matrix not positive definite at hole center");
    const double det = a.det();
    Mat2 ainv{a.a22 / det, -a.a12 / det, -a.a21 / det, a.a11 / det};
    EllipseEntry e;
    e.center = h.y;
    e.q = spd_sqrt(ainv);
    e.sig_qinv = std::sqrt(sym_lambda_max(a));      // q^{-2} = a
    e.sig_q = std::sqrt(sym_lambda_max(ainv));
    fam.holes.push_back(e);
    r5_cap = std::min(r5_cap, 0.5 * r2 / e.sig_qinv);
  }
  if (fam.holes.empty())
    fail(ErrKind::config, "corrector needs at least one Dirichlet hole");
  fam.r5 = 0.99 * r5_cap;
  const double shape_out = dom.family.shape.outradius();
  for (const EllipseEntry& e : fam.holes) {
    outer = std::min(outer, 0.5 * r2 - fam.r5 * e.sig_qinv);
    inner = std::min(inner, fam.r5 - e.sig_q * shape_out);
  }
  fam.outer_margin = outer;
  fam.hole_margin = inner;
  return fam;
}

Field corrected_field(const Field& u0, const EllipseFamily& fam,
                      const TriMesh& target) {
  Field out = interpolate(u0, target);
  for (int i = 0; i < target.n_nodes(); ++i)
    out.v[i] *= 1.0 - fam.evaluate_W(target.xy[i]);
  return out;
}

}  // namespace striphomog
