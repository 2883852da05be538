// Acceptance gate: one line per criterion, PASS/FAIL with wall time and the
// measured quantities.  Returns the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "striphomog/assembly.hpp"
#include "striphomog/cell.hpp"
#include "striphomog/corrector.hpp"
#include "striphomog/geometry.hpp"
#include "striphomog/meshgen.hpp"
#include "striphomog/spectral.hpp"
#include "striphomog/study.hpp"

using namespace striphomog;

namespace {

constexpr double kPi = 3.14159265358979323846;

void expect(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

std::string fmt(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

PerforatedDomain model_domain(double eps, const char* law,
                              HolePartition part = HolePartition::all_dirichlet) {
  StripGeometry strip{kPi, 2.5};
  CurveSpec curve;
  curve.kind = CurveSpec::Kind::straight;
  curve.y0 = kPi / 2;
  PerforationConfig pc;
  pc.eps = eps;
  pc.eta_law = EtaLaw::parse(law);
  pc.partition = part;
  pc.lateral_margin = 0.5 * pc.spacing_factor * eps;
  return build_perforated_domain(strip, curve, HoleFamily{}, pc);
}

// ---- criteria -----------------------------------------------------------

void cell_dirichlet(std::string& note) {
  double worst = 0;
  for (const double eta : {0.2, 0.1, 0.05}) {
    const CellSolution cs = solve_cell_problem(eta, CellKind::D, 4.0, 0.075);
    const double ref = -(3 / kPi) * std::log(2 * kPi * eta / 3);
    const double rel = std::abs(cs.c.c_plus - ref) / std::abs(ref);
    worst = std::max(worst, rel);
    expect(rel <= 0.02, "eta=" + fmt(eta) + ": c+=" + fmt(cs.c.c_plus) +
                            " vs " + fmt(ref) + " off by " + fmt(rel));
  }
  note = "worst rel " + fmt(worst);
}

void cell_neumann(std::string& note) {
  double worst = 0;
  for (const double eta : {0.3, 0.2}) {
    const CellSolution cs = solve_cell_problem(eta, CellKind::N, 4.0, 0.075);
    const double ref = eta * eta / (1 - kPi * kPi * eta * eta / 28);
    const double rel = std::abs(cs.c.c_plus - ref) / std::abs(ref);
    worst = std::max(worst, rel);
    expect(rel <= 0.05, "eta=" + fmt(eta) + ": c+=" + fmt(cs.c.c_plus) +
                            " vs " + fmt(ref) + " off by " + fmt(rel));
  }
  note = "worst rel " + fmt(worst);
}

void hole_flux(std::string& note) {
  const FluxSolution fs =
      solve_hole_flux_problem(HoleShape{}, [](double) { return 1.0 / 1.375; }, 0.02);
  double worst = 0;
  for (int i = 0; i < fs.mesh.n_nodes(); ++i) {
    const Vec2 ref = hole_flux_field_circle(fs.mesh.xy[i]);
    worst = std::max(worst, std::hypot(fs.x[i].x - ref.x, fs.x[i].y - ref.y));
  }
  expect(worst <= 0.01, "recovered flux field off by " + fmt(worst) +
                            " in L-inf (limit 0.01)");
  bool rejected = false;
  try {
    solve_hole_flux_problem(HoleShape{}, [](double) { return 0.0; }, 0.1);
  } catch (const Error&) {
    rejected = true;
  }
  expect(rejected, "incompatible flux data was not rejected");
  note = "L-inf " + fmt(worst) + ", incompatibility rejected";
}

void manufactured_refinement(std::string& note) {
  const MmsResult r = mms_study(StudyCase::delta, {0.2, 0.1, 0.05, 0.025}, 2.5);
  std::string seen;
  for (const double q : r.ratio) {
    seen += (seen.empty() ? "" : ", ") + fmt(q);
    expect(q >= 3.2 && q <= 4.8,
           "L2 ratio per halving " + fmt(q) + " outside [3.2, 4.8]");
  }
  note = "ratios " + seen;
}

void dirichlet_rate(std::string& note) {
  StudyConfig cfg;
  cfg.which = StudyCase::dirichlet;
  cfg.eta_law = EtaLaw::parse("const:1");
  cfg.eps_list = {0.2, 0.1, 0.05, 0.025};
  cfg.deterministic = true;
  const ConvergenceReport rep = run_convergence_study(cfg);
  for (const EpsRecord& r : rep.records)
    expect(r.ok, "eps=" + fmt(r.eps) + " failed: " + r.error);
  expect(rep.h1_fit.valid, "H1 fit invalid");
  const double s = rep.h1_fit.slope;
  expect(s >= 0.4 && s <= 0.7,
         "H1 slope " + fmt(s) + " outside [0.4, 0.7]");
  // lower-bound sharpness: error^2/(eps(|ln eta|+1)) never drops below
  // half its coarsest value
  const double base = rep.records.front().sharp_ratio;
  for (const EpsRecord& r : rep.records)
    expect(r.sharp_ratio >= 0.5 * base,
           "sharpness ratio decayed: " + fmt(r.sharp_ratio) + " < half of " +
               fmt(base));
  note = "H1 slope " + fmt(s) + " +- " + fmt(rep.h1_fit.band);
}

void vanishing_rate(std::string& note) {
  StudyConfig cfg;
  cfg.which = StudyCase::none;
  cfg.eta_law = EtaLaw::parse("pow:1");
  cfg.eps_list = {0.2, 0.1, 0.05, 0.025};
  cfg.fem_comparator = true;
  cfg.deterministic = true;
  const ConvergenceReport rep = run_convergence_study(cfg);
  for (const EpsRecord& r : rep.records)
    expect(r.ok, "eps=" + fmt(r.eps) + " failed: " + r.error);
  expect(rep.h1_fem_fit.valid, "matched-mesh H1 fit invalid");
  const double s = rep.h1_fem_fit.slope;
  expect(s >= 1.3, "H1 slope " + fmt(s) + " below 1.3");
  note = "H1 slope " + fmt(s) + " +- " + fmt(rep.h1_fem_fit.band);
}

void delta_rate(std::string& note) {
  StudyConfig cfg;
  cfg.which = StudyCase::delta;
  cfg.eta_law = EtaLaw::parse("exp:1,0");
  cfg.eps_list = {0.2, 0.1, 0.05};
  cfg.corrected = true;
  cfg.deterministic = true;
  const ConvergenceReport rep = run_convergence_study(cfg);
  for (const EpsRecord& r : rep.records)
    expect(r.ok, "eps=" + fmt(r.eps) + " failed: " + r.error);
  expect(rep.l2_fit.valid, "L2 fit invalid");
  const double s = rep.l2_fit.slope;
  expect(s >= 0.4, "L2 slope " + fmt(s) + " below 0.4");
  const EpsRecord& fine = rep.records.back();
  expect(fine.h1_corr < fine.h1_plain,
         "corrected H1 " + fmt(fine.h1_corr) + " not below uncorrected " +
             fmt(fine.h1_plain));
  note = "L2 slope " + fmt(s) + ", corrected H1 " + fmt(fine.h1_corr) +
         " < " + fmt(fine.h1_plain);
}

void spectral_trend(std::string& note) {
  SpectralConfig dir;
  dir.regime = SpectralRegime::dirichlet;
  dir.eps_list = {0.2, 0.1, 0.05, 0.025};
  const SpectrumReport rd = compare_spectra(dir);
  expect(rd.gap_monotone, "dirichlet-regime lambda1 gap is not monotone");

  SpectralConfig del;
  del.regime = SpectralRegime::delta;
  del.eps_list = {0.4, 0.2, 0.1, 0.05};
  del.rho = 1.0;
  const SpectrumReport rl = compare_spectra(del);
  expect(rl.gap_monotone, "delta-regime lambda1 gap is not monotone");

  const double nu0 = transverse_oracle(TransverseBC::delta, 0.0, 1)[0];
  expect(std::abs(nu0 - 1.0) <= 1e-8, "nu1(0) = " + fmt(nu0) + " != 1");
  double prev = nu0;
  double nu = 0;
  for (const double beta : {1.0, 10.0, 100.0}) {
    nu = transverse_oracle(TransverseBC::delta, beta, 1)[0];
    expect(nu > prev && nu < 4.0,
           "nu1(" + fmt(beta) + ") = " + fmt(nu) + " breaks the trend to 4");
    prev = nu;
  }
  expect(nu > 3.5, "nu1(100) = " + fmt(nu) + " still far from 4");
  note = "gaps " + fmt(rd.rows.front().gap1) + "->" + fmt(rd.rows.back().gap1) +
         " (D), " + fmt(rl.rows.front().gap1) + "->" + fmt(rl.rows.back().gap1) +
         " (delta); nu1(100) " + fmt(nu);
}

void invariants(std::string& note) {
  // form symmetry
  const PerforatedDomain dom =
      model_domain(0.25, "const:0.5", HolePartition::alternating);
  MeshOptions opt;
  opt.h_far = 0.15;
  const TriMesh m = generate_mesh(dom, opt);
  Coefficients co = Coefficients::laplace();
  co.robin_a = [](Vec2) { return 1.0; };
  const AssembledSystem sys = assemble_perturbed(m, co);
  std::map<std::pair<int, int>, cplx> ent;
  for (int i = 0; i < sys.n; ++i)
    for (int p = sys.K.ptr[i]; p < sys.K.ptr[i + 1]; ++p)
      ent[{i, sys.K.idx[p]}] += sys.K.val[p];
  double asym = 0;
  for (const auto& [ij, v] : ent) {
    const auto it = ent.find({ij.second, ij.first});
    asym = std::max(asym,
                    std::abs(v - (it == ent.end() ? cplx(0) : it->second)));
  }
  expect(asym <= 1e-12, "form asymmetry " + fmt(asym));

  // resolvent contraction over 100 random data vectors
  std::mt19937 rng(12345u);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double worst_ratio = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Field f;
    f.mesh = &m;
    f.v.resize(m.xy.size());
    for (std::size_t i = 0; i < m.xy.size(); ++i)
      f.v[i] = sys.constrained[i] ? cplx(0) : cplx(dist(rng), dist(rng));
    const Field u = solve_resolvent(sys, f, cplx(0, 1));
    const double ratio = field_norm(m, u.v, NormKind::l2) /
                         field_norm(m, f.v, NormKind::l2);
    worst_ratio = std::max(worst_ratio, ratio);
    expect(ratio <= 1 + 1e-10, "||u|| = " + fmt(ratio) + " ||f|| exceeds 1");
  }

  // corrector range and continuity
  const double eps = 0.25, eta = 0.5;
  const EllipseFamily fam =
      q_matrices(Coefficients::laplace(), model_domain(eps, "const:0.5"));
  const double r_out = fam.r5 * eps, r_in = r_out * eta;
  expect(fam.evaluate_W({0.0, kPi / 2}) == 1.0, "W != 1 at a hole center");
  expect(fam.evaluate_W({2 * r_out, kPi / 2}) == 0.0, "W != 0 off support");
  double prev_w = 1.0, worst_jump = 0;
  const int n = 8000;
  for (int i = 0; i <= n; ++i) {
    const double w = fam.evaluate_W({2.0 * r_out * i / n, kPi / 2});
    expect(w >= 0 && w <= 1, "W out of range: " + fmt(w));
    if (i) worst_jump = std::max(worst_jump, std::abs(w - prev_w));
    prev_w = w;
  }
  const double lip_step =
      2.0 / (r_in * std::abs(std::log(eta))) * (2.0 * r_out / n);
  expect(worst_jump <= lip_step, "W jump " + fmt(worst_jump) + " vs Lipschitz");

  // deviation kappa of the reference model window: exactly zero
  const PiecewiseConst alpha =
      compute_alpha_eps(model_domain(0.1, "const:0.5"), AlphaRegime::dirichlet_delta);
  const KappaResult kr = estimate_kappa(alpha, alpha, alpha.brk.front(),
                                        alpha.brk.back() - alpha.brk.front());
  expect(kr.kappa == 0.0, "kappa = " + fmt(kr.kappa) + " != 0");

  // mesh persistence round-trip
  const std::string path = "acceptance_roundtrip_mesh.txt";
  write_mesh(m, path);
  const TriMesh r = read_mesh(path);
  std::remove(path.c_str());
  bool same = r.n_nodes() == m.n_nodes() && r.n_tri() == m.n_tri() &&
              r.bedge.size() == m.bedge.size();
  for (int i = 0; same && i < m.n_nodes(); ++i)
    same = r.xy[i].x == m.xy[i].x && r.xy[i].y == m.xy[i].y &&
           r.node_tag[i] == m.node_tag[i];
  for (int t = 0; same && t < m.n_tri(); ++t) same = r.tri[t] == m.tri[t];
  expect(same, "mesh round-trip differs");

  note = "asym " + fmt(asym) + ", max ||u||/||f|| " + fmt(worst_ratio) +
         ", kappa 0, round-trip ok";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    void (*fn)(std::string&);
  };
  const Criterion list[] = {
      {"1 cell constant, Dirichlet log law", cell_dirichlet},
      {"2 cell constant, Neumann rational law", cell_neumann},
      {"3 hole flux field vs closed form", hole_flux},
      {"4 manufactured homogenized refinement", manufactured_refinement},
      {"5 Dirichlet-regime H1 rate and sharpness", dirichlet_rate},
      {"6 vanishing-interaction H1 rate", vanishing_rate},
      {"7 delta-regime L2 rate and corrector gain", delta_rate},
      {"8 spectral gap trend and delta oracle", spectral_trend},
      {"9 invariant suite", invariants},
  };
  int failures = 0;
  for (const Criterion& c : list) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string note;
    bool ok = true;
    std::string why;
    try {
      c.fn(note);
    } catch (const std::exception& e) {
      ok = false;
      why = e.what();
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("%s  %-42s %7.1fs  %s\n", ok ? "PASS" : "FAIL", c.name, dt,
                ok ? note.c_str() : why.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
  }
  std::printf("acceptance: %d/9 criteria passed\n",
              9 - failures);
  return failures;
}
