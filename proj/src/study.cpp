#include "striphomog/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <utility>

#include "json.hpp"
#include "striphomog/corrector.hpp"
#include "striphomog/errors.hpp"
#include "striphomog/meshgen.hpp"

namespace striphomog {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---- transverse profile -------------------------------------------------------

// Quintic on [a, a+L] interpolating value/slope/curvature at both ends.
struct Quintic {
  double a = 0.0, L = 1.0;
  double c[6] = {0, 0, 0, 0, 0, 0};  // va, L sa, L^2 ca, vb, L sb, L^2 cb

  static Quintic fit(double a, double b, double va, double sa, double ca,
                     double vb, double sb, double cb) {
    Quintic q;
    q.a = a;
    q.L = b - a;
    q.c[0] = va;
    q.c[1] = q.L * sa;
    q.c[2] = q.L * q.L * ca;
    q.c[3] = vb;
    q.c[4] = q.L * sb;
    q.c[5] = q.L * q.L * cb;
    return q;
  }

  double eval(double y, int d) const {
    const double t = (y - a) / L;
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    double B[6];
    switch (d) {
      case 0:
        B[0] = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        B[1] = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        B[2] = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
        B[3] = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        B[4] = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        B[5] = 0.5 * (t3 - 2.0 * t4 + t5);
        break;
      case 1:
        B[0] = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
        B[1] = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
        B[2] = 0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4);
        B[3] = 30.0 * t2 - 60.0 * t3 + 30.0 * t4;
        B[4] = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
        B[5] = 0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4);
        break;
      default:
        B[0] = -60.0 * t + 180.0 * t2 - 120.0 * t3;
        B[1] = -36.0 * t + 96.0 * t2 - 60.0 * t3;
        B[2] = 1.0 - 9.0 * t + 18.0 * t2 - 10.0 * t3;
        B[3] = 60.0 * t - 180.0 * t2 + 120.0 * t3;
        B[4] = -24.0 * t + 84.0 * t2 - 60.0 * t3;
        B[5] = 3.0 * t - 12.0 * t2 + 10.0 * t3;
        break;
    }
    double s = 0.0;
    for (int i = 0; i < 6; ++i) s += c[i] * B[i];
    for (int k = 0; k < d; ++k) s /= L;
    return s;
  }
};

// profile value/slope/curvature at x2 = y for the given slopes and center
// value; linear on |y - pi/2| <= pi/4, quintic blends to (0,0,0) at the walls
double profile(const ManufacturedReference& r, double y, int d) {
  const double qa = 0.25 * kPi, qb = 0.75 * kPi, mid = 0.5 * kPi;
  if (y <= 0.0 || y >= kPi) return 0.0;
  if (y < qa) {
    const Quintic q = Quintic::fit(0.0, qa, 0.0, 0.0, 0.0,
                                   r.h0 - r.h1m * qa, r.h1m, 0.0);
    return q.eval(y, d);
  }
  if (y > qb) {
    const Quintic q = Quintic::fit(qb, kPi, r.h0 + r.h1p * qa, r.h1p, 0.0,
                                   0.0, 0.0, 0.0);
    return q.eval(y, d);
  }
  const double h1 = y >= mid ? r.h1p : r.h1m;
  if (d == 0) return r.h0 + h1 * (y - mid);
  if (d == 1) return h1;
  return 0.0;
}

// smooth step built from g(t) = exp(-1/t): 0 for t <= 0, 1 for t >= 1.
// Outside (tol, 1-tol) the true values are below any representable
// difference, so exact constants are returned (also keeps 1/t^4 finite).
void moll_step(double t, double* s0, double* s1, double* s2) {
  const double tol = 1e-6;
  if (t <= tol) {
    *s0 = 0.0; *s1 = 0.0; *s2 = 0.0;
    return;
  }
  if (t >= 1.0 - tol) {
    *s0 = 1.0; *s1 = 0.0; *s2 = 0.0;
    return;
  }
  const double r = 1.0 - t;
  const double u = std::exp(-1.0 / t), w = std::exp(-1.0 / r);
  const double up = u / (t * t);
  const double upp = u * (1.0 / (t * t * t * t) - 2.0 / (t * t * t));
  const double wp = -w / (r * r);
  const double wpp = w * (1.0 / (r * r * r * r) - 2.0 / (r * r * r));
  const double D = u + w;
  const double N = up * w - u * wp;
  *s0 = u / D;
  *s1 = N / (D * D);
  *s2 = ((upp * w - u * wpp) * D - 2.0 * N * (up + wp)) / (D * D * D);
}

// cutoff in x1: 1 on |x| <= 1, 0 on |x| >= 2, with two derivatives
void cutoff(double x, double* c0, double* c1, double* c2) {
  const double ax = std::abs(x);
  if (ax <= 1.0) {
    *c0 = 1.0; *c1 = 0.0; *c2 = 0.0;
    return;
  }
  if (ax >= 2.0) {
    *c0 = 0.0; *c1 = 0.0; *c2 = 0.0;
    return;
  }
  double s0, s1, s2;
  moll_step(2.0 - ax, &s0, &s1, &s2);  // t = 2 - |x|, dt/dx = -sign(x)
  *c0 = s0;
  *c1 = x > 0.0 ? -s1 : s1;
  *c2 = s2;
}

}  // namespace

// ---- manufactured reference ---------------------------------------------------

double ManufacturedReference::U(double y) const { return profile(*this, y, 0); }
double ManufacturedReference::dU(double y) const { return profile(*this, y, 1); }
double ManufacturedReference::d2U(double y) const { return profile(*this, y, 2); }

double ManufacturedReference::chi(double t) const {
  double c0, c1, c2;
  cutoff(t, &c0, &c1, &c2);
  return c0;
}
double ManufacturedReference::dchi(double t) const {
  double c0, c1, c2;
  cutoff(t, &c0, &c1, &c2);
  return c1;
}
double ManufacturedReference::d2chi(double t) const {
  double c0, c1, c2;
  cutoff(t, &c0, &c1, &c2);
  return c2;
}

double ManufacturedReference::u0(Vec2 x) const {
  double c0, c1, c2;
  cutoff(x.x, &c0, &c1, &c2);
  if (c0 == 0.0) return 0.0;
  return c0 * profile(*this, x.y, 0);
}

Vec2 ManufacturedReference::grad_u0(Vec2 x) const {
  double c0, c1, c2;
  cutoff(x.x, &c0, &c1, &c2);
  if (c0 == 0.0 && c1 == 0.0) return {0.0, 0.0};
  return {c1 * profile(*this, x.y, 0), c0 * profile(*this, x.y, 1)};
}

cplx ManufacturedReference::f(Vec2 x) const {
  double c0, c1, c2;
  cutoff(x.x, &c0, &c1, &c2);
  if (c0 == 0.0 && c2 == 0.0) return 0.0;
  const double v = profile(*this, x.y, 0);
  const double vpp = profile(*this, x.y, 2);
  return {-(c2 * v + c0 * vpp), -c0 * v};
}

ManufacturedReference section8_reference(StudyCase c, double rho, double mu,
                                         double a, double eta) {
  ManufacturedReference r;
  r.which = c;
  switch (c) {
    case StudyCase::dirichlet:
      r.h0 = 0.0;
      r.h1p = 1.0;
      break;
    case StudyCase::delta:
      if (rho + mu <= 0.0)
        fail(ErrKind::config, "delta reference needs rho + mu > 0");
      r.h0 = 1.0;
      r.h1p = kPi / 3.0 * (rho + mu);
      break;
    case StudyCase::robin:
      if (!(eta > 0.0 && eta <= 1.0))
        fail(ErrKind::config, "robin reference needs eta in (0, 1]");
      r.h0 = 1.0;
      r.h1p = kPi * a * eta / 3.0;
      break;
    case StudyCase::none:
      r.h0 = 1.0;
      r.h1p = 0.0;
      break;
  }
  r.h1m = -r.h1p;
  // slope jump over interface value; exact by construction so the jump
  // identity (h1p - h1m) = beta h0 holds without rounding
  r.beta = r.h0 != 0.0 ? 2.0 * r.h1p / r.h0 : 0.0;
  return r;
}

StudyCase parse_study_case(const std::string& name) {
  if (name == "dirichlet") return StudyCase::dirichlet;
  if (name == "delta") return StudyCase::delta;
  if (name == "robin") return StudyCase::robin;
  if (name == "none") return StudyCase::none;
  fail(ErrKind::config, "unknown case '" + name +
                            "' (expected dirichlet|delta|robin|none)");
}

const char* study_case_name(StudyCase c) {
  switch (c) {
    case StudyCase::dirichlet: return "dirichlet";
    case StudyCase::delta: return "delta";
    case StudyCase::robin: return "robin";
    case StudyCase::none: return "none";
  }
  return "?";
}

// ---- sweep --------------------------------------------------------------------

namespace {

struct CaseSetup {
  HolePartition partition = HolePartition::all_dirichlet;
  HomogBC bc = HomogBC::dirichlet_gamma;
  double window_lo = 0.0, window_hi = 0.0;  // fitted-slope acceptance window
};

CaseSetup case_setup(StudyCase c) {
  switch (c) {
    case StudyCase::dirichlet:
      return {HolePartition::all_dirichlet, HomogBC::dirichlet_gamma, 0.4, 0.7};
    case StudyCase::delta:
      return {HolePartition::all_dirichlet, HomogBC::delta, 0.4, 10.0};
    case StudyCase::robin:
      return {HolePartition::all_robin, HomogBC::delta, 0.35, 0.75};
    case StudyCase::none:
      return {HolePartition::all_robin, HomogBC::none, 1.3, 10.0};
  }
  fail(ErrKind::config, "bad case");
}

double case_bound(StudyCase c, double eps, double eta, double kappa) {
  const double lg = std::sqrt(std::abs(std::log(eta))) + 1.0;
  switch (c) {
    case StudyCase::dirichlet: return std::sqrt(eps) * lg;
    case StudyCase::none: return std::sqrt(eps) * eta * lg;
    case StudyCase::robin:
    case StudyCase::delta: return std::sqrt(eps) + kappa;
  }
  return 0.0;
}

// Deviation of the window function from its limit.  When the windows tile
// their span the two coincide identically there, so the limit is passed in
// the same piecewise representation and every deviation integral vanishes
// without rounding; otherwise the limit is the constant window value over
// the span.
double section8_kappa(const PerforatedDomain& dom, AlphaRegime regime) {
  const PiecewiseConst ae = compute_alpha_eps(dom, regime);
  if (ae.brk.size() < 2) return 0.0;
  const double lo = ae.brk.front(), hi = ae.brk.back();
  bool tiled = true;
  for (double v : ae.val)
    if (v == 0.0) tiled = false;
  if (tiled) return estimate_kappa(ae, ae, lo, hi - lo).kappa;
  double vmax = 0.0;
  for (double v : ae.val) vmax = std::max(vmax, v);
  PiecewiseConst limit;
  limit.brk = {lo, hi};
  limit.val = {vmax};
  return estimate_kappa(ae, limit, lo, hi - lo).kappa;
}

EpsRecord run_row(const StudyConfig& cfg, const CaseSetup& cs, double eps) {
  EpsRecord rec;
  rec.eps = eps;

  const double rho =
      cfg.eta_law.kind == EtaLaw::Kind::exponential ? cfg.eta_law.rho : 0.0;
  const double a = cfg.which == StudyCase::robin ? cfg.robin_a : 0.0;

  StripGeometry strip{kPi, cfg.X};
  CurveSpec curve;
  curve.kind = CurveSpec::Kind::straight;
  curve.y0 = 0.5 * kPi;

  PerforationConfig pc;
  pc.eps = eps;
  pc.eta_law = cfg.eta_law;
  pc.partition = cs.partition;
  pc.robin_a = a;
  // keep the last patch block (half the center gap wide) inside the cut
  pc.lateral_margin = 0.5 * pc.spacing_factor * eps;
  const PerforatedDomain dom =
      build_perforated_domain(strip, curve, HoleFamily{}, pc);
  rec.eta = dom.eta;
  rec.mu = cfg.which == StudyCase::delta ? mu_of_eps(eps, dom.eta, rho) : 0.0;
  if (cs.bc == HomogBC::delta)
    rec.kappa = section8_kappa(dom, cfg.which == StudyCase::delta
                                        ? AlphaRegime::dirichlet_delta
                                        : AlphaRegime::robin);
  rec.bound = case_bound(cfg.which, eps, dom.eta, rec.kappa);

  const ManufacturedReference ref =
      section8_reference(cfg.which, rho, rec.mu, a, dom.eta);

  Coefficients co = Coefficients::laplace();
  if (cs.partition == HolePartition::all_robin)
    co.robin_a = [a](Vec2) { return a; };  // empty would mean coefficient 1

  MeshOptions mo;
  mo.h_far = cfg.h_far;
  const TriMesh mesh = generate_mesh(dom, mo);
  rec.n_nodes = mesh.n_nodes();

  const AssembledSystem sys = assemble_perturbed(mesh, co);
  const Field fv =
      project_function(mesh, [&ref](Vec2 x) { return ref.f(x); });
  const Field u = solve_resolvent(sys, fv, cplx(0.0, 1.0));

  const auto g0 = [&ref](Vec2 x) { return ref.u0(x); };
  const auto dg0 = [&ref](Vec2 x) { return ref.grad_u0(x); };
  rec.l2 = error_vs_real_function(mesh, u.v, g0, dg0, NormKind::l2);
  rec.h1 = error_vs_real_function(mesh, u.v, g0, dg0, NormKind::h1);
  rec.sharp_ratio =
      rec.h1 * rec.h1 / (eps * (std::abs(std::log(dom.eta)) + 1.0));

  if (cfg.corrected) {
    const EllipseFamily fam = q_matrices(co, dom);
    std::vector<cplx> plain(u.v.size()), corr(u.v.size());
    for (size_t i = 0; i < mesh.xy.size(); ++i) {
      const double v = ref.u0(mesh.xy[i]);
      plain[i] = v;
      corr[i] = v * (1.0 - fam.evaluate_W(mesh.xy[i]));
    }
    rec.h1_plain = difference_norm(mesh, u.v, plain, NormKind::h1);
    rec.h1_corr = difference_norm(mesh, u.v, corr, NormKind::h1);
    rec.l2_corr = difference_norm(mesh, u.v, corr, NormKind::l2);
  }

  if (cfg.fem_comparator) {
    // homogenized solve on the filled variant of the same mesh; node
    // coordinates shared bit-exactly, so restriction is a coordinate lookup
    // and the common far-field discretization error cancels in the
    // difference
    MeshOptions fm = mo;
    fm.fill_holes = true;
    const TriMesh filled = generate_mesh(dom, fm);
    const Coefficients ch = Coefficients::laplace();
    const double beta = ref.beta;
    const AssembledSystem hs = assemble_homogenized(
        filled, ch, cs.bc, [beta](Vec2) { return beta; });
    const Field fh =
        project_function(filled, [&ref](Vec2 x) { return ref.f(x); });
    const Field u0h = solve_resolvent(hs, fh, cplx(0.0, 1.0));

    std::map<std::pair<double, double>, int> pos;
    for (size_t j = 0; j < filled.xy.size(); ++j)
      pos[{filled.xy[j].x, filled.xy[j].y}] = static_cast<int>(j);
    std::vector<cplx> w(mesh.xy.size());
    for (size_t i = 0; i < mesh.xy.size(); ++i) {
      const auto it = pos.find({mesh.xy[i].x, mesh.xy[i].y});
      if (it == pos.end())
        fail(ErrKind::mesh, "filled mesh does not reproduce a perforated node");
      w[i] = u0h.v[static_cast<size_t>(it->second)];
    }
    rec.l2_fem = difference_norm(mesh, u.v, w, NormKind::l2);
    rec.h1_fem = difference_norm(mesh, u.v, w, NormKind::h1);
  }

  rec.ok = true;
  return rec;
}

EpsRecord guarded_row(const StudyConfig& cfg, const CaseSetup& cs, double eps) {
  try {
    return run_row(cfg, cs, eps);
  } catch (const std::exception& e) {
    EpsRecord rec;
    rec.eps = eps;
    rec.error = e.what();
    return rec;
  }
}

void validate_config(const StudyConfig& cfg) {
  if (cfg.eps_list.size() < 3)
    fail(ErrKind::config, "eps list needs at least 3 entries");
  for (size_t i = 0; i < cfg.eps_list.size(); ++i) {
    if (!(cfg.eps_list[i] > 0.0))
      fail(ErrKind::config, "eps values must be positive");
    if (i > 0 && !(cfg.eps_list[i] < cfg.eps_list[i - 1]))
      fail(ErrKind::config, "eps list must be strictly decreasing");
  }
  if (cfg.which == StudyCase::delta &&
      cfg.eta_law.kind != EtaLaw::Kind::exponential)
    fail(ErrKind::config,
         "delta case needs the exponential eta law (" + cfg.eta_law.describe() +
             " given)");
  if (cfg.which == StudyCase::robin &&
      cfg.eta_law.kind != EtaLaw::Kind::constant)
    fail(ErrKind::config, "robin case needs a constant eta law");
  if (cfg.corrected && cfg.which != StudyCase::delta &&
      cfg.which != StudyCase::dirichlet)
    fail(ErrKind::config, "corrected comparator needs Dirichlet holes");
}

}  // namespace

ConvergenceReport run_convergence_study(const StudyConfig& cfg) {
  validate_config(cfg);
  const CaseSetup cs = case_setup(cfg.which);

  ConvergenceReport rep;
  rep.which = cfg.which;
  rep.window_lo = cs.window_lo;
  rep.window_hi = cs.window_hi;
  {
    const double rho =
        cfg.eta_law.kind == EtaLaw::Kind::exponential ? cfg.eta_law.rho : 0.0;
    const double eps0 = cfg.eps_list.front();
    const double eta0 = cfg.eta_law.eta(eps0);
    const double mu0 = cfg.which == StudyCase::delta
                           ? mu_of_eps(eps0, eta0, rho)
                           : 0.0;
    rep.beta = section8_reference(cfg.which, rho, mu0,
                                  cfg.which == StudyCase::robin ? cfg.robin_a
                                                                : 0.0,
                                  eta0)
                   .beta;
  }

  const size_t n = cfg.eps_list.size();
  rep.records.resize(n);
  unsigned workers = cfg.deterministic
                         ? 1u
                         : (cfg.threads > 0
                                ? static_cast<unsigned>(cfg.threads)
                                : std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<unsigned>(workers, static_cast<unsigned>(n));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i)
      rep.records[i] = guarded_row(cfg, cs, cfg.eps_list[i]);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
          rep.records[i] = guarded_row(cfg, cs, cfg.eps_list[i]);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<double> es;
  std::vector<const EpsRecord*> ok;
  for (const EpsRecord& r : rep.records)
    if (r.ok) {
      es.push_back(r.eps);
      ok.push_back(&r);
    }
  if (es.size() >= 3) {
    const auto fit_of = [&](double EpsRecord::* col) {
      std::vector<double> v;
      for (const EpsRecord* r : ok) v.push_back(r->*col);
      for (double x : v)
        if (!(x > 0.0) || !std::isfinite(x)) return RateFit{};
      return fit_rate(es, v);
    };
    rep.l2_fit = fit_of(&EpsRecord::l2);
    rep.h1_fit = fit_of(&EpsRecord::h1);
    if (cfg.corrected) {
      rep.l2_corr_fit = fit_of(&EpsRecord::l2_corr);
      rep.h1_corr_fit = fit_of(&EpsRecord::h1_corr);
    }
    if (cfg.fem_comparator) {
      rep.l2_fem_fit = fit_of(&EpsRecord::l2_fem);
      rep.h1_fem_fit = fit_of(&EpsRecord::h1_fem);
    }
  }

  // headline: the case's estimate norm; the none case prefers the
  // matched-mesh column, whose shared discretization error cancels
  const RateFit* head = &rep.h1_fit;
  if (cfg.which == StudyCase::delta) head = &rep.l2_fit;
  if (cfg.which == StudyCase::none && rep.h1_fem_fit.valid)
    head = &rep.h1_fem_fit;
  rep.headline_pass = head->valid && head->slope >= rep.window_lo &&
                      head->slope <= rep.window_hi;
  return rep;
}

RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& err) {
  if (eps.size() != err.size())
    fail(ErrKind::config, "rate fit needs matching eps/error lists");
  const size_t n = eps.size();
  if (n < 3) fail(ErrKind::config, "rate fit needs at least 3 records");
  std::vector<double> x(n), y(n);
  for (size_t i = 0; i < n; ++i) {
    if (!(eps[i] > 0.0) || !std::isfinite(eps[i]))
      fail(ErrKind::numerical, "rate fit needs positive finite eps");
    if (!(err[i] > 0.0) || !std::isfinite(err[i]))
      fail(ErrKind::numerical, "rate fit needs positive finite errors");
    x[i] = std::log(eps[i]);
    y[i] = std::log(err[i]);
  }
  double xb = 0.0, yb = 0.0;
  for (size_t i = 0; i < n; ++i) {
    xb += x[i];
    yb += y[i];
  }
  xb /= static_cast<double>(n);
  yb /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xb) * (x[i] - xb);
    sxy += (x[i] - xb) * (y[i] - yb);
  }
  if (sxx <= 0.0) fail(ErrKind::numerical, "rate fit abscissae are degenerate");
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = yb - f.slope * xb;
  double ssr = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - f.slope * x[i] - f.intercept;
    ssr += r * r;
  }
  f.band = 1.96 * std::sqrt(std::max(0.0, ssr / (static_cast<double>(n) - 2.0)) / sxx);
  f.valid = true;
  return f;
}

// ---- reports --------------------------------------------------------------------

namespace {

std::string fmt(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.12g", v);
  return b;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

using nlohmann::json;

json fit_json(const RateFit& f) {
  if (!f.valid) return nullptr;
  return json{{"slope", f.slope}, {"intercept", f.intercept}, {"band", f.band}};
}

RateFit fit_from_json(const json& j) {
  RateFit f;
  if (j.is_null()) return f;
  f.slope = j.at("slope").get<double>();
  f.intercept = j.at("intercept").get<double>();
  f.band = j.at("band").get<double>();
  f.valid = true;
  return f;
}

}  // namespace

std::string report_csv(const ConvergenceReport& rep) {
  std::ostringstream o;
  o << "# strip-homog convergence report v1\n";
  o << "# case=" << study_case_name(rep.which) << ",beta=" << fmt(rep.beta)
    << ",window=[" << fmt(rep.window_lo) << ";" << fmt(rep.window_hi)
    << "],headline=" << (rep.headline_pass ? "pass" : "fail") << "\n";
  o << "eps,eta,mu,kappa,l2,h1,l2_corr,h1_corr,h1_plain,l2_fem,h1_fem,bound,"
       "sharp_ratio,n_nodes,status,error\n";
  for (const EpsRecord& r : rep.records) {
    o << fmt(r.eps) << ',' << fmt(r.eta) << ',' << fmt(r.mu) << ','
      << fmt(r.kappa) << ',' << fmt(r.l2) << ',' << fmt(r.h1) << ','
      << fmt(r.l2_corr) << ',' << fmt(r.h1_corr) << ',' << fmt(r.h1_plain)
      << ',' << fmt(r.l2_fem) << ',' << fmt(r.h1_fem) << ',' << fmt(r.bound)
      << ',' << fmt(r.sharp_ratio) << ',' << r.n_nodes << ','
      << (r.ok ? "ok" : "failed") << ',' << csv_escape(r.error) << "\n";
  }
  const std::pair<const char*, const RateFit*> fits[] = {
      {"l2", &rep.l2_fit},           {"h1", &rep.h1_fit},
      {"l2_corr", &rep.l2_corr_fit}, {"h1_corr", &rep.h1_corr_fit},
      {"l2_fem", &rep.l2_fem_fit},   {"h1_fem", &rep.h1_fem_fit}};
  for (const auto& [name, f] : fits)
    if (f->valid)
      o << "fit," << name << ',' << fmt(f->slope) << ',' << fmt(f->intercept)
        << ',' << fmt(f->band) << "\n";
  return o.str();
}

std::string report_json(const ConvergenceReport& rep) {
  json j;
  j["version"] = 1;
  j["case"] = study_case_name(rep.which);
  j["beta"] = rep.beta;
  j["window_lo"] = rep.window_lo;
  j["window_hi"] = rep.window_hi;
  j["headline_pass"] = rep.headline_pass;
  j["records"] = json::array();
  for (const EpsRecord& r : rep.records)
    j["records"].push_back(json{{"eps", r.eps},
                                {"eta", r.eta},
                                {"mu", r.mu},
                                {"kappa", r.kappa},
                                {"l2", r.l2},
                                {"h1", r.h1},
                                {"l2_corr", r.l2_corr},
                                {"h1_corr", r.h1_corr},
                                {"h1_plain", r.h1_plain},
                                {"l2_fem", r.l2_fem},
                                {"h1_fem", r.h1_fem},
                                {"bound", r.bound},
                                {"sharp_ratio", r.sharp_ratio},
                                {"n_nodes", r.n_nodes},
                                {"ok", r.ok},
                                {"error", r.error}});
  j["fits"] = json{{"l2", fit_json(rep.l2_fit)},
                   {"h1", fit_json(rep.h1_fit)},
                   {"l2_corr", fit_json(rep.l2_corr_fit)},
                   {"h1_corr", fit_json(rep.h1_corr_fit)},
                   {"l2_fem", fit_json(rep.l2_fem_fit)},
                   {"h1_fem", fit_json(rep.h1_fem_fit)}};
  return j.dump(2) + "\n";
}

ConvergenceReport parse_report_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrKind::io, std::string("bad report json: ") + e.what());
  }
  ConvergenceReport rep;
  try {
    rep.which = parse_study_case(j.at("case").get<std::string>());
    rep.beta = j.at("beta").get<double>();
    rep.window_lo = j.at("window_lo").get<double>();
    rep.window_hi = j.at("window_hi").get<double>();
    rep.headline_pass = j.at("headline_pass").get<bool>();
    for (const json& rj : j.at("records")) {
      EpsRecord r;
      r.eps = rj.at("eps").get<double>();
      r.eta = rj.at("eta").get<double>();
      r.mu = rj.at("mu").get<double>();
      r.kappa = rj.at("kappa").get<double>();
      r.l2 = rj.at("l2").get<double>();
      r.h1 = rj.at("h1").get<double>();
      r.l2_corr = rj.at("l2_corr").get<double>();
      r.h1_corr = rj.at("h1_corr").get<double>();
      r.h1_plain = rj.at("h1_plain").get<double>();
      r.l2_fem = rj.at("l2_fem").get<double>();
      r.h1_fem = rj.at("h1_fem").get<double>();
      r.bound = rj.at("bound").get<double>();
      r.sharp_ratio = rj.at("sharp_ratio").get<double>();
      r.n_nodes = rj.at("n_nodes").get<int>();
      r.ok = rj.at("ok").get<bool>();
      r.error = rj.at("error").get<std::string>();
      rep.records.push_back(std::move(r));
    }
    const json& fits = j.at("fits");
    rep.l2_fit = fit_from_json(fits.at("l2"));
    rep.h1_fit = fit_from_json(fits.at("h1"));
    rep.l2_corr_fit = fit_from_json(fits.at("l2_corr"));
    rep.h1_corr_fit = fit_from_json(fits.at("h1_corr"));
    rep.l2_fem_fit = fit_from_json(fits.at("l2_fem"));
    rep.h1_fem_fit = fit_from_json(fits.at("h1_fem"));
  } catch (const json::exception& e) {
    fail(ErrKind::io, std::string("report json missing fields: ") + e.what());
  }
  return rep;
}

void emit_report(const ConvergenceReport& rep, const std::string& format,
                 const std::string& path) {
  std::string body;
  if (format == "csv") body = report_csv(rep);
  else if (format == "json") body = report_json(rep);
  else fail(ErrKind::config, "report format must be csv or json");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrKind::io, "cannot open '" + path + "' for writing");
  out << body;
  out.flush();
  if (!out) fail(ErrKind::io, "write to '" + path + "' failed");
}

// ---- homogenized refinement study ----------------------------------------------

MmsResult mms_study(StudyCase c, const std::vector<double>& h_list, double X) {
  if (h_list.size() < 2)
    fail(ErrKind::config, "refinement study needs at least 2 mesh sizes");
  // fixed model parameters that exercise the case's interface condition
  const ManufacturedReference ref = section8_reference(c, 1.0, 0.0, 1.0, 0.3);
  const CaseSetup cs = case_setup(c);
  StripGeometry strip{kPi, X};
  CurveSpec curve;
  curve.kind = CurveSpec::Kind::straight;
  curve.y0 = 0.5 * kPi;
  const Coefficients co = Coefficients::laplace();
  const double beta = ref.beta;

  MmsResult res;
  for (double h : h_list) {
    const TriMesh mesh = generate_homogenized_mesh(strip, curve, h, MeshOptions{});
    const AssembledSystem sys =
        assemble_homogenized(mesh, co, cs.bc, [beta](Vec2) { return beta; });
    const Field fv =
        project_function(mesh, [&ref](Vec2 x) { return ref.f(x); });
    const Field u = solve_resolvent(sys, fv, cplx(0.0, 1.0));
    const double l2 = error_vs_real_function(
        mesh, u.v, [&ref](Vec2 x) { return ref.u0(x); },
        [&ref](Vec2 x) { return ref.grad_u0(x); }, NormKind::l2);
    res.h.push_back(h);
    res.l2.push_back(l2);
  }
  for (size_t i = 1; i < res.l2.size(); ++i)
    res.ratio.push_back(res.l2[i - 1] / res.l2[i]);
  return res;
}

}  // namespace striphomog
