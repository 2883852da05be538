// strip-homog: meshes, resolvent solves, cell problems, convergence studies
// and spectral sweeps for elliptic operators on a strip perforated along a
// line.  Exit codes: 0 ok, 2 configuration/input error, 3 numerical or mesh
// failure, 4 assertion requested via --assert failed.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "striphomog/assembly.hpp"
#include "striphomog/cell.hpp"
#include "striphomog/corrector.hpp"
#include "striphomog/errors.hpp"
#include "striphomog/geometry.hpp"
#include "striphomog/meshgen.hpp"
#include "striphomog/spectral.hpp"
#include "striphomog/study.hpp"

using namespace striphomog;

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---- key=value config ---------------------------------------------------------

// Documented schema (all keys optional, # starts a comment):
//   d, X            strip height and lateral half-width
//   y0              interface line height
//   eps             perforation scale
//   eta_law         const:<c> | pow:<alpha> | exp:<rho>,<mu>
//   partition       all_dirichlet | all_robin | alternating
//   robin_a         Robin coefficient on the robin holes
//   spacing         hole spacing factor (s_k = spacing * eps * k)
//   lateral_margin  keep |s_k| <= X - margin (default: half a center gap)
//   case            dirichlet | delta | robin | none (manufactured data)
//   h_far           far-field mesh pitch
struct DomainSpec {
  StripGeometry strip{kPi, 2.5};
  CurveSpec curve;
  PerforationConfig pc;
  StudyCase which = StudyCase::dirichlet;
  double h_far = 0.05;
};

double to_double(const std::string& key, const std::string& val) {
  try {
    size_t pos = 0;
    const double x = std::stod(val, &pos);
    if (pos != val.size()) throw std::invalid_argument(val);
    return x;
  } catch (const std::exception&) {
    fail(ErrKind::config, "bad numeric value for '" + key + "': " + val);
  }
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

DomainSpec parse_domain_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrKind::io, "cannot read config '" + path + "'");
  DomainSpec ds;
  ds.curve.kind = CurveSpec::Kind::straight;
  ds.curve.y0 = 0.5 * kPi;
  bool margin_set = false;
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrKind::config,
           path + ":" + std::to_string(ln) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "d") ds.strip.d = to_double(key, val);
    else if (key == "X") ds.strip.X = to_double(key, val);
    else if (key == "y0") ds.curve.y0 = to_double(key, val);
    else if (key == "eps") ds.pc.eps = to_double(key, val);
    else if (key == "eta_law") ds.pc.eta_law = EtaLaw::parse(val);
    else if (key == "partition") {
      if (val == "all_dirichlet") ds.pc.partition = HolePartition::all_dirichlet;
      else if (val == "all_robin") ds.pc.partition = HolePartition::all_robin;
      else if (val == "alternating") ds.pc.partition = HolePartition::alternating;
      else fail(ErrKind::config, "unknown partition '" + val + "'");
    } else if (key == "robin_a") ds.pc.robin_a = to_double(key, val);
    else if (key == "spacing") ds.pc.spacing_factor = to_double(key, val);
    else if (key == "lateral_margin") {
      ds.pc.lateral_margin = to_double(key, val);
      margin_set = true;
    } else if (key == "case") ds.which = parse_study_case(val);
    else if (key == "h_far") ds.h_far = to_double(key, val);
    else
      fail(ErrKind::config,
           path + ":" + std::to_string(ln) + ": unknown key '" + key + "'");
  }
  if (!margin_set)
    ds.pc.lateral_margin = 0.5 * ds.pc.spacing_factor * ds.pc.eps;
  return ds;
}

ManufacturedReference reference_of(const DomainSpec& ds) {
  const double eta = ds.pc.eta_law.eta(ds.pc.eps);
  const double rho = ds.pc.eta_law.kind == EtaLaw::Kind::exponential
                         ? ds.pc.eta_law.rho
                         : 0.0;
  const double mu = ds.which == StudyCase::delta
                        ? mu_of_eps(ds.pc.eps, eta, rho)
                        : 0.0;
  return section8_reference(ds.which, rho, mu, ds.pc.robin_a, eta);
}

// ---- exports ------------------------------------------------------------------

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrKind::io, "cannot create directory '" + dir + "'");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream o(path, std::ios::binary);
  if (!o) fail(ErrKind::io, "cannot open '" + path + "' for writing");
  return o;
}

void write_field_csv(const std::string& path, const TriMesh& m,
                     const std::vector<cplx>& v) {
  std::ofstream o = open_out(path);
  o << "node_id,x,y,re,im\n";
  char buf[160];
  for (size_t i = 0; i < m.xy.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", i,
                  m.xy[i].x, m.xy[i].y, v[i].real(), v[i].imag());
    o << buf;
  }
  if (!o) fail(ErrKind::io, "write to '" + path + "' failed");
}

void write_real_field_csv(const std::string& path, const TriMesh& m,
                          const std::vector<double>& v) {
  std::vector<cplx> c(v.begin(), v.end());
  write_field_csv(path, m, c);
}

void write_system_coo(const std::string& path, const SparseCsr& a) {
  std::ofstream o = open_out(path);
  char buf[128];
  for (int r = 0; r < a.n; ++r)
    for (int p = a.ptr[static_cast<size_t>(r)];
         p < a.ptr[static_cast<size_t>(r) + 1]; ++p) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g %.17g\n", r,
                    a.idx[static_cast<size_t>(p)],
                    a.val[static_cast<size_t>(p)].real(),
                    a.val[static_cast<size_t>(p)].imag());
      o << buf;
    }
  if (!o) fail(ErrKind::io, "write to '" + path + "' failed");
}

void write_holes_csv(const std::string& path, const PerforatedDomain& dom) {
  std::ofstream o = open_out(path);
  o << "s,bc_flag,shape_id\n";
  char buf[96];
  for (const Hole& h : dom.holes) {
    std::snprintf(buf, sizeof buf, "%.17g,%s,%s\n", h.s,
                  h.bc == HoleBC::dirichlet ? "dirichlet" : "robin",
                  dom.family.shape.is_circle ? "circle" : "polygon");
    o << buf;
  }
  if (!o) fail(ErrKind::io, "write to '" + path + "' failed");
}

std::string fmt(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.12g", v);
  return b;
}

// ---- subcommand bodies ----------------------------------------------------------

int cmd_mesh(const std::string& cfg_path, const std::string& out_dir) {
  const DomainSpec ds = parse_domain_config(cfg_path);
  const PerforatedDomain dom =
      build_perforated_domain(ds.strip, ds.curve, HoleFamily{}, ds.pc);
  MeshOptions mo;
  mo.h_far = ds.h_far;
  const TriMesh mesh = generate_mesh(dom, mo);
  const MeshQuality q = mesh_quality(mesh);
  ensure_dir(out_dir);
  write_mesh(mesh, join(out_dir, "mesh.txt"));
  write_holes_csv(join(out_dir, "holes.csv"), dom);
  std::printf("mesh: %d nodes, %d triangles, %zu holes, min angle %.2f deg\n",
              mesh.n_nodes(), mesh.n_tri(), dom.holes.size(), q.min_angle_deg);
  return 0;
}

int cmd_solve(const std::string& cfg_path, const std::string& out_dir,
              bool with_corrector, bool export_system) {
  const DomainSpec ds = parse_domain_config(cfg_path);
  const PerforatedDomain dom =
      build_perforated_domain(ds.strip, ds.curve, HoleFamily{}, ds.pc);
  const ManufacturedReference ref = reference_of(ds);
  Coefficients co = Coefficients::laplace();
  if (dom.any_robin()) {
    const double a = ds.pc.robin_a;
    co.robin_a = [a](Vec2) { return a; };
  }
  MeshOptions mo;
  mo.h_far = ds.h_far;
  const TriMesh mesh = generate_mesh(dom, mo);
  const AssembledSystem sys = assemble_perturbed(mesh, co);
  const Field fv = project_function(mesh, [&ref](Vec2 x) { return ref.f(x); });
  SolveInfo info;
  const Field u = solve_resolvent(sys, fv, cplx(0.0, 1.0), &info);
  const double l2 = error_vs_real_function(
      mesh, u.v, [&ref](Vec2 x) { return ref.u0(x); },
      [&ref](Vec2 x) { return ref.grad_u0(x); }, NormKind::l2);
  const double h1 = error_vs_real_function(
      mesh, u.v, [&ref](Vec2 x) { return ref.u0(x); },
      [&ref](Vec2 x) { return ref.grad_u0(x); }, NormKind::h1);
  ensure_dir(out_dir);
  write_field_csv(join(out_dir, "field.csv"), mesh, u.v);
  if (with_corrector) {
    const EllipseFamily fam = q_matrices(co, dom);
    std::vector<double> w(mesh.xy.size());
    for (size_t i = 0; i < mesh.xy.size(); ++i)
      w[i] = fam.evaluate_W(mesh.xy[i]);
    write_real_field_csv(join(out_dir, "corrector.csv"), mesh, w);
  }
  if (export_system) {
    write_system_coo(join(out_dir, "K.coo"), sys.K);
    write_system_coo(join(out_dir, "M.coo"), sys.M);
  }
  std::printf(
      "solve: %d dofs free, residual %.3e; error vs closed form: L2 %s, H1 %s\n",
      info.n_free, info.residual, fmt(l2).c_str(), fmt(h1).c_str());
  return 0;
}

int cmd_cell(const std::string& kind_name, double eta, double H, double h,
             bool flux, const std::string& out_dir) {
  ensure_dir(out_dir);
  if (flux) {
    HoleShape shape;  // unit circle
    const FluxSolution fs = solve_hole_flux_problem(
        shape, [](double) { return 1.0 / 1.375; }, h);
    write_real_field_csv(join(out_dir, "flux_potential.csv"), fs.mesh, fs.v);
    std::printf("flux: %d nodes, max |X| = %s\n", fs.mesh.n_nodes(),
                fmt(fs.linf).c_str());
    return 0;
  }
  CellKind kind;
  if (kind_name == "D") kind = CellKind::D;
  else if (kind_name == "R") kind = CellKind::R;
  else if (kind_name == "N") kind = CellKind::N;
  else fail(ErrKind::config, "cell kind must be D, R or N");
  const CellSolution cs = solve_cell_problem(eta, kind, H, h);
  write_real_field_csv(join(out_dir, "cell.csv"), cs.cm.mesh, cs.z);
  std::printf(
      "cell %s eta=%s: c+ = %s (spread %s), c- = %s (spread %s), "
      "flux balance %s\n",
      kind_name.c_str(), fmt(eta).c_str(), fmt(cs.c.c_plus).c_str(),
      fmt(cs.c.std_plus).c_str(), fmt(cs.c.c_minus).c_str(),
      fmt(cs.c.std_minus).c_str(), fmt(cs.flux_balance).c_str());
  return 0;
}

int cmd_study(StudyConfig cfg, const std::vector<std::string>& norms,
              const std::string& out_dir, bool do_assert) {
  for (const std::string& n : norms)
    if (n != "l2" && n != "h1")
      fail(ErrKind::config, "norm list accepts l2 and h1, got '" + n + "'");
  const ConvergenceReport rep = run_convergence_study(cfg);
  ensure_dir(out_dir);
  emit_report(rep, "csv", join(out_dir, "report.csv"));
  emit_report(rep, "json", join(out_dir, "report.json"));
  int n_ok = 0;
  for (const EpsRecord& r : rep.records) n_ok += r.ok ? 1 : 0;
  std::printf("study case=%s rows=%zu ok=%d beta=%s\n",
              study_case_name(rep.which), rep.records.size(), n_ok,
              fmt(rep.beta).c_str());
  for (const EpsRecord& r : rep.records) {
    if (!r.ok) {
      std::printf("  eps=%s failed: %s\n", fmt(r.eps).c_str(),
                  r.error.c_str());
      continue;
    }
    std::printf("  eps=%s eta=%s l2=%s h1=%s bound=%s\n", fmt(r.eps).c_str(),
                fmt(r.eta).c_str(), fmt(r.l2).c_str(), fmt(r.h1).c_str(),
                fmt(r.bound).c_str());
  }
  const auto show = [&](const char* name, const RateFit& f) {
    if (f.valid)
      std::printf("fit %s: slope %s +- %s, intercept %s\n", name,
                  fmt(f.slope).c_str(), fmt(f.band).c_str(),
                  fmt(f.intercept).c_str());
  };
  for (const std::string& n : norms) {
    if (n == "l2") {
      show("l2", rep.l2_fit);
      show("l2_corr", rep.l2_corr_fit);
      show("l2_fem", rep.l2_fem_fit);
    } else {
      show("h1", rep.h1_fit);
      show("h1_corr", rep.h1_corr_fit);
      show("h1_fem", rep.h1_fem_fit);
    }
  }
  std::printf("headline: %s (window [%s, %s])\n",
              rep.headline_pass ? "pass" : "fail", fmt(rep.window_lo).c_str(),
              fmt(rep.window_hi).c_str());
  if (do_assert && !rep.headline_pass) return 4;
  return 0;
}

void write_spectrum_csv(const std::string& path, const SpectrumReport& rep) {
  std::ofstream o = open_out(path);
  o << "# strip-homog spectrum report v1\n";
  o << "# regime="
    << (rep.regime == SpectralRegime::dirichlet ? "dirichlet" : "delta")
    << ",beta=" << fmt(rep.beta)
    << ",gap_monotone=" << (rep.gap_monotone ? "true" : "false") << "\n";
  o << "eps,eta,i,perturbed,oracle,fem,gap1\n";
  for (const SpectrumRow& r : rep.rows)
    for (size_t i = 0; i < r.perturbed.size(); ++i) {
      o << fmt(r.eps) << ',' << fmt(r.eta) << ',' << i << ','
        << fmt(r.perturbed[i]) << ',' << fmt(r.oracle[i]) << ',';
      if (i < r.fem_homogenized.size()) o << fmt(r.fem_homogenized[i]);
      o << ',' << (i == 0 ? fmt(r.gap1) : std::string()) << "\n";
    }
  if (!o) fail(ErrKind::io, "write to '" + path + "' failed");
}

int cmd_spectrum(SpectralConfig cfg, const std::string& out_dir,
                 bool do_assert) {
  const SpectrumReport rep = compare_spectra(cfg);
  ensure_dir(out_dir);
  write_spectrum_csv(join(out_dir, "spectrum.csv"), rep);
  std::printf("spectrum regime=%s beta=%s rows=%zu gap_monotone=%s\n",
              rep.regime == SpectralRegime::dirichlet ? "dirichlet" : "delta",
              fmt(rep.beta).c_str(), rep.rows.size(),
              rep.gap_monotone ? "true" : "false");
  for (const SpectrumRow& r : rep.rows)
    std::printf("  eps=%s eta=%s lambda1=%s oracle1=%s gap=%s\n",
                fmt(r.eps).c_str(), fmt(r.eta).c_str(),
                fmt(r.perturbed[0]).c_str(), fmt(r.oracle[0]).c_str(),
                fmt(r.gap1).c_str());
  if (do_assert && !rep.gap_monotone) return 4;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perforated-strip homogenization toolkit"};
  app.require_subcommand(1);

  std::string cfg_path, out_dir = ".";
  bool with_corrector = false, export_system = false, do_assert = false;

  CLI::App* c_mesh = app.add_subcommand("mesh", "generate and export a mesh");
  c_mesh->add_option("--config", cfg_path, "key=value geometry file")
      ->required();
  c_mesh->add_option("--out", out_dir, "output directory");

  CLI::App* c_solve =
      app.add_subcommand("solve", "perturbed resolvent solve at shift i");
  c_solve->add_option("--config", cfg_path, "key=value geometry file")
      ->required();
  c_solve->add_option("--out", out_dir, "output directory");
  c_solve->add_flag("--corrected", with_corrector,
                    "also export the boundary corrector W");
  c_solve->add_flag("--export-system", export_system,
                    "export K and M in coordinate format");

  std::string cell_kind = "D";
  double cell_eta = 0.1, cell_H = 4.0, cell_h = 0.075;
  bool cell_flux = false;
  CLI::App* c_cell =
      app.add_subcommand("cell", "periodic cell problem / hole flux problem");
  c_cell->add_option("--kind", cell_kind, "cell condition: D, R or N");
  c_cell->add_option("--eta", cell_eta, "hole radius in cell coordinates");
  c_cell->add_option("--H", cell_H, "cell half-height");
  c_cell->add_option("--pitch", cell_h, "mesh pitch");
  c_cell->add_flag("--flux", cell_flux, "solve the unit-circle flux problem");
  c_cell->add_option("--out", out_dir, "output directory");

  StudyConfig scfg;
  std::string case_name = "dirichlet", law_text;
  std::vector<std::string> norms = {"l2", "h1"};
  CLI::App* c_study = app.add_subcommand("study", "eps convergence study");
  c_study->add_option("--case", case_name, "dirichlet|delta|robin|none")
      ->required();
  c_study->add_option("--eps", scfg.eps_list, "eps values, decreasing")
      ->delimiter(',');
  c_study->add_option("--eta-law", law_text,
                      "const:<c> | pow:<alpha> | exp:<rho>,<mu>");
  c_study->add_option("--norm", norms, "norms to report")->delimiter(',');
  c_study->add_flag("--corrected", scfg.corrected,
                    "record the (1 - W) u0 comparator");
  c_study->add_flag("--fem-comparator", scfg.fem_comparator,
                    "record the matched-mesh FEM homogenized comparator");
  c_study->add_option("--h-far", scfg.h_far, "far-field mesh pitch");
  c_study->add_option("--X", scfg.X, "lateral half-width");
  c_study->add_option("--robin-a", scfg.robin_a, "Robin coefficient");
  c_study->add_flag("--deterministic", scfg.deterministic,
                    "serial row execution");
  c_study->add_option("--threads", scfg.threads, "worker count (0 = auto)");
  c_study->add_option("--out", out_dir, "output directory");
  c_study->add_flag("--assert", do_assert,
                    "exit 4 unless the headline fit passes");

  SpectralConfig pcfg;
  std::string regime_name = "dirichlet";
  CLI::App* c_spec = app.add_subcommand("spectrum", "eigenvalue sweep");
  c_spec->add_option("--regime", regime_name, "dirichlet|delta");
  c_spec->add_option("--eps", pcfg.eps_list, "eps values, decreasing")
      ->delimiter(',');
  c_spec->add_option("--k", pcfg.k, "eigenvalue count");
  c_spec->add_option("--eta", pcfg.eta_const, "hole scale (dirichlet regime)");
  c_spec->add_option("--rho", pcfg.rho, "exp law rho (delta regime)");
  c_spec->add_option("--mu0", pcfg.mu0, "exp law mu (delta regime)");
  c_spec->add_option("--h-far", pcfg.h_far, "far-field mesh pitch");
  c_spec->add_option("--X", pcfg.X, "lateral half-width");
  c_spec->add_flag("--fem-homogenized", pcfg.fem_homogenized,
                   "add the 2D homogenized eigensolve column");
  c_spec->add_option("--out", out_dir, "output directory");
  c_spec->add_flag("--assert", do_assert,
                   "exit 4 unless the lowest gap decreases monotonically");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_mesh->parsed()) return cmd_mesh(cfg_path, out_dir);
    if (c_solve->parsed())
      return cmd_solve(cfg_path, out_dir, with_corrector, export_system);
    if (c_cell->parsed())
      return cmd_cell(cell_kind, cell_eta, cell_H, cell_h, cell_flux, out_dir);
    if (c_study->parsed()) {
      scfg.which = parse_study_case(case_name);
      if (!law_text.empty()) scfg.eta_law = EtaLaw::parse(law_text);
      else if (scfg.which == StudyCase::delta)
        scfg.eta_law = EtaLaw::parse("exp:1,0");
      else if (scfg.which == StudyCase::dirichlet)
        scfg.eta_law = EtaLaw::parse("const:1");
      else if (scfg.which == StudyCase::robin)
        scfg.eta_law = EtaLaw::parse("const:0.3");
      else
        scfg.eta_law = EtaLaw::parse("pow:1");
      return cmd_study(scfg, norms, out_dir, do_assert);
    }
    if (c_spec->parsed()) {
      if (regime_name == "dirichlet") pcfg.regime = SpectralRegime::dirichlet;
      else if (regime_name == "delta") pcfg.regime = SpectralRegime::delta;
      else fail(ErrKind::config, "regime must be dirichlet or delta");
      return cmd_spectrum(pcfg, out_dir, do_assert);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return Error::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
