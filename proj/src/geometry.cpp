#include "striphomog/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace striphomog {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

// ---- CurveSpec -------------------------------------------------------------

Vec2 CurveSpec::point(double s) const {
  switch (kind) {
    case Kind::straight:
      return {s, y0};
    case Kind::circle: {
      const double phi = s / radius;
      return {center.x + radius * std::cos(phi), center.y + radius * std::sin(phi)};
    }
    case Kind::sampled: {
      if (samples.size() < 2) fail(ErrKind::config, "sampled curve needs >= 2 points");
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const double seg = (samples[i + 1] - samples[i]).norm();
        if (s <= acc + seg || i + 2 == samples.size()) {
          const double t = seg > 0 ? std::clamp((s - acc) / seg, 0.0, 1.0) : 0.0;
          return samples[i] + t * (samples[i + 1] - samples[i]);
        }
        acc += seg;
      }
      return samples.back();
    }
  }
  fail(ErrKind::config, "bad curve kind");
}

Vec2 CurveSpec::tangent(double s) const {
  switch (kind) {
    case Kind::straight:
      return {1.0, 0.0};
    case Kind::circle: {
      const double phi = s / radius;
      return {-std::sin(phi), std::cos(phi)};
    }
    case Kind::sampled: {
      if (samples.size() < 2) fail(ErrKind::config, "sampled curve needs >= 2 points");
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const double seg = (samples[i + 1] - samples[i]).norm();
        if (s <= acc + seg || i + 2 == samples.size()) {
          Vec2 t = samples[i + 1] - samples[i];
          const double n = t.norm();
          if (n == 0) fail(ErrKind::config, "degenerate curve segment");
          return t / n;
        }
        acc += seg;
      }
      return {1.0, 0.0};
    }
  }
  fail(ErrKind::config, "bad curve kind");
}

Vec2 CurveSpec::normal(double s) const {
  const Vec2 t = tangent(s);
  return {-t.y, t.x};
}

double CurveSpec::length() const {
  switch (kind) {
    case Kind::straight:
      return std::numeric_limits<double>::infinity();
    case Kind::circle:
      return 2.0 * kPi * radius;
    case Kind::sampled: {
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < samples.size(); ++i)
        acc += (samples[i + 1] - samples[i]).norm();
      return acc;
    }
  }
  return 0.0;
}

// ---- HoleShape -------------------------------------------------------------

double HoleShape::boundary_length() const {
  if (is_circle) return 2.0 * kPi * circle_radius;
  if (polygon.size() < 3) fail(ErrKind::config, "hole polygon needs >= 3 vertices");
  double acc = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i)
    acc += (polygon[(i + 1) % polygon.size()] - polygon[i]).norm();
  return acc;
}

double HoleShape::outradius() const {
  if (is_circle) return circle_radius;
  double m = 0.0;
  for (const Vec2& v : polygon) m = std::max(m, v.norm());
  return m;
}

// ---- EtaLaw ----------------------------------------------------------------

double EtaLaw::eta(double eps) const {
  if (eps <= 0) fail(ErrKind::config, "eps must be positive");
  double e = 0.0;
  switch (kind) {
    case Kind::constant:
      e = c;
      break;
    case Kind::power:
      e = std::pow(eps, alpha);
      break;
    case Kind::exponential: {
      const double denom = eps * (rho + mu0);
      if (denom <= 0) fail(ErrKind::config, "eta law exp needs rho+mu > 0");
      e = std::exp(-1.0 / denom);
      break;
    }
  }
  if (!(e > 0.0) || e > 1.0)
    fail(ErrKind::config, "eta must lie in (0, 1], got " + std::to_string(e));
  return e;
}

EtaLaw EtaLaw::parse(const std::string& text) {
  EtaLaw law;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (head == "const") {
      law.kind = Kind::constant;
      law.c = std::stod(rest);
    } else if (head == "pow") {
      law.kind = Kind::power;
      law.alpha = std::stod(rest);
    } else if (head == "exp") {
      law.kind = Kind::exponential;
      const auto comma = rest.find(',');
      if (comma == std::string::npos)
        fail(ErrKind::config, "eta law needs both parameters: exp:<rho>,<mu>");
      law.rho = std::stod(rest.substr(0, comma));
      law.mu0 = std::stod(rest.substr(comma + 1));
    } else {
      fail(ErrKind::config, "unknown eta law '" + text + "'");
    }
  } catch (const std::invalid_argument&) {
    fail(ErrKind::config, "cannot parse eta law '" + text + "'");
  }
  return law;
}

std::string EtaLaw::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::constant: os << "const:" << c; break;
    case Kind::power: os << "pow:" << alpha; break;
    case Kind::exponential: os << "exp:" << rho << "," << mu0; break;
  }
  return os.str();
}

// ---- PerforatedDomain -------------------------------------------------------

bool PerforatedDomain::any_dirichlet() const {
  return std::any_of(holes.begin(), holes.end(),
                     [](const Hole& h) { return h.bc == HoleBC::dirichlet; });
}

bool PerforatedDomain::any_robin() const {
  return std::any_of(holes.begin(), holes.end(),
                     [](const Hole& h) { return h.bc == HoleBC::robin; });
}

double PerforatedDomain::hole_outradius(const Hole& h) const {
  return h.r * family.shape.outradius();
}

PerforatedDomain build_perforated_domain(const StripGeometry& strip,
                                         const CurveSpec& curve,
                                         const HoleFamily& family,
                                         const PerforationConfig& cfg) {
  if (strip.d <= 0 || strip.X <= 0) fail(ErrKind::config, "strip needs d > 0, X > 0");
  if (cfg.eps <= 0) fail(ErrKind::config, "eps must be positive");
  if (family.R1 <= 0 || family.R2 <= family.R1 || family.b <= 1.0)
    fail(ErrKind::config, "hole family needs 0 < R1 < R2 and b > 1");

  PerforatedDomain dom;
  dom.strip = strip;
  dom.curve = curve;
  dom.family = family;
  dom.cfg = cfg;
  dom.eps = cfg.eps;
  dom.eta = cfg.eta_law.eta(cfg.eps);
  if (!(dom.eta > 0.0) || dom.eta > 1.0)
    fail(ErrKind::config,
         "eta = " + std::to_string(dom.eta) + " outside (0, 1]");

  const double step = cfg.spacing_factor * cfg.eps;
  const double r = cfg.eps * dom.eta;

  auto add_hole = [&](int k, double s) {
    Hole h;
    h.k = k;
    h.s = s;
    h.y = curve.point(s);
    h.r = r;
    switch (cfg.partition) {
      case HolePartition::all_dirichlet: h.bc = HoleBC::dirichlet; break;
      case HolePartition::all_robin: h.bc = HoleBC::robin; break;
      case HolePartition::alternating:
        h.bc = (((k % 2) + 2) % 2 == 0) ? HoleBC::dirichlet : HoleBC::robin;
        break;
    }
    h.a = (h.bc == HoleBC::robin) ? cfg.robin_a : 0.0;
    dom.holes.push_back(h);
  };

  const double tol = 1e-12 * std::max(1.0, strip.X);
  if (curve.closed()) {
    const double len = curve.length();
    const int n = static_cast<int>(std::floor(len / step + tol));
    if (n < 1) fail(ErrKind::config, "curve too short for hole spacing");
    const double real_step = len / n;  // equal spacing around the closed curve
    for (int k = 0; k < n; ++k) add_hole(k, real_step * k);
  } else {
    double window = strip.X - cfg.lateral_margin;
    double s_mid = 0.0;
    if (curve.kind == CurveSpec::Kind::sampled) {
      const double len = curve.length();
      s_mid = 0.5 * len;
      window = std::min(window, 0.5 * len);
    }
    const int kmax = static_cast<int>(std::floor(window / step + tol));
    for (int k = -kmax; k <= kmax; ++k) add_hole(k, s_mid + step * k);
  }

  // the analysis dilates every ball by b; the dilated balls must stay inside
  const double dil_r = family.b * family.R2 * cfg.eps;
  for (const Hole& h : dom.holes) {
    const double wall = std::min(h.y.y, strip.d - h.y.y);
    if (wall <= dil_r)
      fail(ErrKind::geometry, "dilated ball of hole at s=" + std::to_string(h.s) +
                                  " touches the strip boundary");
  }

  const double dil = 2.0 * dil_r;
  for (std::size_t i = 0; i < dom.holes.size(); ++i)
    for (std::size_t j = i + 1; j < dom.holes.size(); ++j) {
      const double dist = (dom.holes[i].y - dom.holes[j].y).norm();
      if (dist - dil < -tol)
        fail(ErrKind::geometry, "dilated balls of holes " + std::to_string(i) +
                                    " and " + std::to_string(j) + " overlap");
    }

  return dom;
}

// ---- check_assumptions -------------------------------------------------------

namespace {

bool point_in_polygon(const std::vector<Vec2>& poly, Vec2 p) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    if ((poly[i].y > p.y) != (poly[j].y > p.y)) {
      const double xs = poly[j].x + (p.y - poly[j].y) / (poly[i].y - poly[j].y) *
                                        (poly[i].x - poly[j].x);
      if (p.x < xs) in = !in;
    }
  }
  return in;
}

double dist_point_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / std::max(ab.norm2(), 1e-300), 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

}  // namespace

AssumptionReport check_assumptions(const PerforatedDomain& dom, double pitch_factor) {
  AssumptionReport rep;
  const HoleFamily& fam = dom.family;
  const double eps = dom.eps;
  std::ostringstream detail;

  // Shape admissibility: B_{R1}(xk) inside shape, shape inside B_{R2},
  // boundary length within L.
  const HoleShape& sh = fam.shape;
  bool shape_ok = sh.outradius() <= fam.R2 * (1 + 1e-12);
  if (sh.is_circle) {
    shape_ok = shape_ok && (fam.xk.norm() + fam.R1 <= sh.circle_radius * (1 + 1e-12));
  } else {
    shape_ok = shape_ok && point_in_polygon(sh.polygon, fam.xk);
    for (std::size_t i = 0; i < sh.polygon.size() && shape_ok; ++i) {
      const Vec2 a = sh.polygon[i];
      const Vec2 b = sh.polygon[(i + 1) % sh.polygon.size()];
      if (dist_point_segment(fam.xk, a, b) < fam.R1 * (1 - 1e-12)) shape_ok = false;
    }
  }
  if (sh.boundary_length() > fam.L * (1 + 1e-12)) {
    shape_ok = false;
    detail << "boundary length " << sh.boundary_length() << " exceeds L=" << fam.L
           << "; ";
  }
  rep.shape_ok = shape_ok;

  // A1: pairwise dilated-ball margins and wall clearance.  The reference
  // model has exactly touching dilated balls (margin 0), so the pass
  // condition is margin >= -rounding slack.
  const double dil = fam.b * fam.R2 * eps;
  double pair_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dom.holes.size(); ++i)
    for (std::size_t j = i + 1; j < dom.holes.size(); ++j)
      pair_margin = std::min(
          pair_margin, (dom.holes[i].y - dom.holes[j].y).norm() - 2.0 * dil);
  if (dom.holes.size() < 2) pair_margin = 0.0;
  rep.a1_pair_margin = pair_margin;

  double wall = std::numeric_limits<double>::infinity();
  for (const Hole& h : dom.holes)
    wall = std::min(wall, std::min(h.y.y, dom.strip.d - h.y.y) - dil);
  if (dom.holes.empty()) wall = std::min(dom.curve.point(0).y,
                                         dom.strip.d - dom.curve.point(0).y);
  rep.wall_clearance = wall;

  const double tol = 1e-12 * std::max(1.0, dom.strip.X);
  rep.a1_ok = rep.shape_ok && pair_margin >= -tol && wall > 0;

  // A3: the tube {|tau| < eps b R2} along the materialized window must be
  // covered by B_{R3 eps} around Dirichlet holes; sampled densely.
  std::vector<const Hole*> dhole;
  for (const Hole& h : dom.holes)
    if (h.bc == HoleBC::dirichlet) dhole.push_back(&h);

  if (dhole.empty()) {
    rep.a3_ok = true;  // vacuous: no Dirichlet part, covering not required
    rep.a3_worst_gap = 0.0;
    detail << "no Dirichlet holes, covering vacuous; ";
  } else {
    double s_lo = dom.holes.front().s, s_hi = dom.holes.front().s;
    for (const Hole& h : dom.holes) {
      s_lo = std::min(s_lo, h.s);
      s_hi = std::max(s_hi, h.s);
    }
    const double half = dil;  // tube half-width eps*b*R2
    s_lo -= half;
    s_hi += half;
    const double pitch = std::max(1e-12, pitch_factor * dil);
    const int ns = static_cast<int>(std::ceil((s_hi - s_lo) / pitch));
    const int nt = std::max(2, static_cast<int>(std::ceil(2 * half / pitch)));
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= ns; ++i) {
      const double s = s_lo + (s_hi - s_lo) * i / ns;
      const Vec2 c = dom.curve.point(s);
      const Vec2 nrm = dom.curve.normal(s);
      for (int j = 0; j <= nt; ++j) {
        const double tau = -half + 2 * half * j / nt;
        const Vec2 p = c + tau * nrm;
        double best = std::numeric_limits<double>::infinity();
        for (const Hole* h : dhole) best = std::min(best, (p - h->y).norm());
        worst = std::max(worst, best - fam.R3 * eps);
      }
    }
    rep.a3_worst_gap = worst;
    const bool holes_inside = dom.eta * sh.outradius() <= fam.R3 * (1 + 1e-12);
    rep.a3_ok = worst <= tol && holes_inside && fam.R3 > fam.b * fam.R2;
    if (!holes_inside) detail << "hole exceeds covering ball; ";
    if (!(fam.R3 > fam.b * fam.R2)) detail << "R3 must exceed b*R2; ";
  }

  rep.detail = detail.str();
  return rep;
}

// ---- flux field ---------------------------------------------------------------

Vec2 hole_flux_field_circle(Vec2 z) {
  const double n2 = z.norm2();
  if (n2 < 1.0 - 1e-9)
    fail(ErrKind::geometry, "flux field evaluated inside the unit hole");
  return z / n2;
}

// ---- PiecewiseConst -----------------------------------------------------------

double PiecewiseConst::operator()(double s) const {
  if (brk.size() < 2 || s <= brk.front() || s >= brk.back()) return 0.0;
  const auto it = std::upper_bound(brk.begin(), brk.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - brk.begin()) - 1;
  return i < val.size() ? val[i] : 0.0;
}

double PiecewiseConst::integral() const {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < brk.size(); ++i)
    acc += val[i] * (brk[i + 1] - brk[i]);
  return acc;
}

void PiecewiseConst::fourier_integral(double a, double b, double w, double shift,
                                      double* re, double* im) const {
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
    const double p = std::max(a, brk[i]);
    const double q = std::min(b, brk[i + 1]);
    if (q <= p || val[i] == 0.0) continue;
    if (w == 0.0) {
      sr += val[i] * (q - p);
    } else {
      // integral of exp(-i w (s - shift)) over [p, q] = (i/w) * (E(q) - E(p))
      const double aq = -w * (q - shift), ap = -w * (p - shift);
      const double dre = std::cos(aq) - std::cos(ap);
      const double dim = std::sin(aq) - std::sin(ap);
      sr += val[i] * (-dim / w);
      si += val[i] * (dre / w);
    }
  }
  *re = sr;
  *im = si;
}

// ---- alpha windows -------------------------------------------------------------

PiecewiseConst compute_alpha_eps(const PerforatedDomain& dom, AlphaRegime regime) {
  struct Win {
    double lo, hi, v;
  };
  std::vector<Win> wins;
  const double half = dom.family.b * dom.family.R2 * dom.eps;
  for (const Hole& h : dom.holes) {
    double v = 0.0;
    if (regime == AlphaRegime::dirichlet_delta) {
      if (h.bc != HoleBC::dirichlet) continue;
      v = kPi / (dom.family.b * dom.family.R2);
    } else {
      v = dom.family.shape.boundary_length() * dom.eta /
          (2.0 * dom.family.b * dom.family.R2);
    }
    wins.push_back({h.s - half, h.s + half, v});
  }
  std::sort(wins.begin(), wins.end(),
            [](const Win& a, const Win& b) { return a.lo < b.lo; });

  PiecewiseConst f;
  const double tol = 1e-12 * std::max(1.0, half);
  // adjacent intervals with the same value coalesce, so an exactly tiling
  // family collapses to a single constant piece
  const auto push = [&f](double v, double hi) {
    if (!f.val.empty() && f.val.back() == v) {
      f.brk.back() = std::max(hi, f.brk.back());
    } else {
      f.val.push_back(v);
      f.brk.push_back(std::max(hi, f.brk.back()));
    }
  };
  double cursor = -std::numeric_limits<double>::infinity();
  for (const Win& w : wins) {
    if (w.lo < cursor - tol)
      fail(ErrKind::geometry, "alpha windows overlap; domain violates spacing");
    if (f.brk.empty()) {
      f.brk.push_back(w.lo);
      f.val.push_back(w.v);
      f.brk.push_back(w.hi);
    } else {
      if (w.lo > f.brk.back() + tol) push(0.0, w.lo);  // gap between windows
      push(w.v, w.hi);
    }
    cursor = w.hi;
  }
  return f;
}

// ---- kappa ---------------------------------------------------------------------

KappaResult estimate_kappa(const PiecewiseConst& alpha_eps,
                           const PiecewiseConst& alpha, double n, double ell,
                           double rel_tail_tol, int q_cap) {
  if (ell <= 0) fail(ErrKind::config, "kappa window length must be positive");
  KappaResult res;

  // ||alpha_eps - alpha||^2 over [n, n+ell] via merged breakpoints.
  std::vector<double> cuts{n, n + ell};
  for (double b : alpha_eps.brk)
    if (b > n && b < n + ell) cuts.push_back(b);
  for (double b : alpha.brk)
    if (b > n && b < n + ell) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double g_l2sq = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const double g = alpha_eps(mid) - alpha(mid);
    g_l2sq += g * g * (cuts[i + 1] - cuts[i]);
  }

  auto coeff_sq = [&](int q) {
    const double w = 2.0 * kPi * q / ell;
    double re1, im1, re2, im2;
    alpha_eps.fourier_integral(n, n + ell, w, n, &re1, &im1);
    alpha.fourier_integral(n, n + ell, w, n, &re2, &im2);
    const double re = re1 - re2, im = im1 - im2;
    return re * re + im * im;
  };

  double weighted = 0.0, raw = 0.0;
  int q = 0;
  while (true) {
    if (q == 0) {
      const double c = coeff_sq(0);
      weighted += c;
      raw += c;
    } else {
      const double cp = coeff_sq(q), cm = coeff_sq(-q);
      weighted += (cp + cm) / (q + 1.0);
      raw += cp + cm;
    }
    const double tail = std::max(0.0, ell * g_l2sq - raw) / (q + 2.0);
    if (tail <= rel_tail_tol * weighted || (weighted == 0.0 && tail == 0.0)) {
      res.kappa = std::sqrt(weighted);
      res.q_used = q;
      res.tail_bound = tail;
      res.sum = weighted;
      res.converged = true;
      return res;
    }
    if (++q > q_cap)
      fail(ErrKind::numerical,
           "kappa estimate did not meet the tail tolerance by q=" +
               std::to_string(q_cap));
  }
}

// ---- beta ----------------------------------------------------------------------

std::function<double(double)> compute_beta(const PiecewiseConst& alpha,
                                           double factor,
                                           const std::function<Mat2(Vec2)>& A,
                                           const CurveSpec& curve) {
  auto Af = A ? A : [](Vec2) { return Mat2{}; };
  // validate determinant on a coarse sweep of the covered range
  if (!alpha.brk.empty()) {
    const double lo = alpha.brk.front(), hi = alpha.brk.back();
    for (int i = 0; i <= 32; ++i) {
      const double s = lo + (hi - lo) * i / 32.0;
      const Mat2 m = Af(curve.point(s));
      if (m.a11 * m.a22 - m.a12 * m.a12 <= 1e-14)
        fail(ErrKind::numerical, "A11*A22 - A12^2 must be positive on the curve");
    }
  }
  return [alpha, factor, Af, curve](double s) {
    const Mat2 m = Af(curve.point(s));
    const double det = m.a11 * m.a22 - m.a12 * m.a12;
    return alpha(s) * factor / det;
  };
}

std::function<double(double)> compute_beta_robin(
    const PiecewiseConst& alpha, const std::function<double(double)>& a) {
  auto af = a ? a : [](double) { return 1.0; };
  return [alpha, af](double s) { return alpha(s) * af(s); };
}

double mu_of_eps(double eps, double eta, double rho) {
  if (!(eta > 0.0) || eta >= 1.0)
    fail(ErrKind::config, "mu(eps) needs eta in (0,1)");
  return -1.0 / (eps * std::log(eta)) - rho;
}

}  // namespace striphomog
