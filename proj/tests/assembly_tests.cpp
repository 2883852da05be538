#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <map>
#include <random>

#include "striphomog/assembly.hpp"
#include "striphomog/geometry.hpp"
#include "striphomog/meshgen.hpp"

using namespace striphomog;

namespace {

constexpr double kPi = 3.14159265358979323846;

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

TriMesh square_strip_mesh(double h) {
  StripGeometry strip{kPi, 2.5};
  CurveSpec curve;
  curve.kind = CurveSpec::Kind::straight;
  curve.y0 = kPi / 2;
  return generate_homogenized_mesh(strip, curve, h);
}

// max |A - A^T| entrywise over the sparsity pattern
double asymmetry(const SparseCsr& a) {
  std::map<std::pair<int, int>, cplx> ent;
  for (int i = 0; i < a.n; ++i)
    for (int p = a.ptr[i]; p < a.ptr[i + 1]; ++p)
      ent[{i, a.idx[p]}] += a.val[p];
  double worst = 0;
  for (const auto& [ij, v] : ent) {
    const auto it = ent.find({ij.second, ij.first});
    const cplx vt = it == ent.end() ? cplx(0) : it->second;
    worst = std::max(worst, std::abs(v - vt));
  }
  return worst;
}

cplx entry_sum(const SparseCsr& a) {
  cplx s = 0;
  for (const cplx& v : a.val) s += v;
  return s;
}

}  // namespace

TEST_CASE("perturbed form and mass matrices are symmetric") {
  const PerforatedDomain dom =
      model_domain(0.2, "const:0.5", HolePartition::alternating);
  MeshOptions opt;
  opt.h_far = 0.12;
  const TriMesh m = generate_mesh(dom, opt);
  Coefficients co = Coefficients::laplace();
  co.robin_a = [](Vec2) { return 1.0; };
  const AssembledSystem sys = assemble_perturbed(m, co);
  CHECK(asymmetry(sys.K) <= 1e-12);
  CHECK(asymmetry(sys.M) <= 1e-12);
  CHECK(sys.n == m.n_nodes());
  // walls, cuts and Dirichlet holes are constrained; Robin holes are not
  int n_con = 0;
  for (char c : sys.constrained) n_con += c;
  CHECK(n_con > 0);
  for (const BoundaryEdge& e : m.bedge)
    if (e.tag == kTagHoleRobin) {
      CHECK(!sys.constrained[e.a]);
      CHECK(!sys.constrained[e.b]);
    }
}

TEST_CASE("resolvent at shift i is an L2 contraction") {
  const PerforatedDomain dom = model_domain(0.25, "const:0.5");
  MeshOptions opt;
  opt.h_far = 0.12;
  const TriMesh m = generate_mesh(dom, opt);
  const AssembledSystem sys = assemble_perturbed(m, Coefficients::laplace());
  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Field f;
    f.mesh = &m;
    f.v.resize(m.n_nodes());
    for (int i = 0; i < m.n_nodes(); ++i)
      f.v[i] = sys.constrained[i] ? cplx(0) : cplx(d(rng), d(rng));
    SolveInfo info;
    const Field u = solve_resolvent(sys, f, cplx(0, 1), &info);
    CHECK(info.residual <= 1e-10 * std::max(1.0, info.rhs_norm));
    const double nu = field_norm(m, u.v, NormKind::l2);
    const double nf = field_norm(m, f.v, NormKind::l2);
    CHECK(nu <= nf * (1 + 1e-10));
  }
}

TEST_CASE("linear fields are reproduced exactly") {
  const TriMesh m = square_strip_mesh(0.2);
  const auto g = [](Vec2 p) { return 0.3 + 0.7 * p.x - 1.2 * p.y; };
  const auto dg = [](Vec2) { return Vec2{0.7, -1.2}; };
  const Field u = project_function(m, [&](Vec2 p) { return cplx(g(p), 0); });
  CHECK(error_vs_real_function(m, u.v, g, dg, NormKind::l2) <= 1e-12);
  CHECK(error_vs_real_function(m, u.v, g, dg, NormKind::h1) <= 1e-12);

  // interpolation between meshes is exact on P1-reproducible data
  const TriMesh fine = square_strip_mesh(0.11);
  const Field uf = interpolate(u, fine);
  const Field ref = project_function(fine, [&](Vec2 p) { return cplx(g(p), 0); });
  CHECK(difference_norm(fine, uf.v, ref.v, NormKind::h1) <= 1e-11);

  const std::vector<Vec2> pts = {{0.13, 0.7}, {-1.9, 2.9}, {2.2, 0.41}};
  const auto vals = values_at(u, pts);
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK(std::abs(vals[i] - cplx(g(pts[i]), 0)) <= 1e-12);

  const double n0 = field_norm(m, u.v, NormKind::h1);
  const std::vector<cplx> zero(m.xy.size(), cplx(0));
  CHECK(difference_norm(m, u.v, zero, NormKind::h1) == doctest::Approx(n0));
}

TEST_CASE("delta interface adds exactly the curve mass") {
  const TriMesh m = square_strip_mesh(0.15);
  const double b0 = 1.7;
  const AssembledSystem none =
      assemble_homogenized(m, Coefficients::laplace(), HomogBC::none);
  const AssembledSystem delta = assemble_homogenized(
      m, Coefficients::laplace(), HomogBC::delta, [&](Vec2) { return b0; });
  CHECK(asymmetry(delta.K) <= 1e-12);
  // sum over all entries of the difference = b0 * integral over gamma of
  // (sum of hats)^2 = b0 * 2X by partition of unity
  const cplx diff = entry_sum(delta.K) - entry_sum(none.K);
  CHECK(diff.real() == doctest::Approx(b0 * 5.0).epsilon(1e-12));
  CHECK(std::abs(diff.imag()) <= 1e-12);

  // dirichlet_gamma constrains the curve nodes instead
  const AssembledSystem dg =
      assemble_homogenized(m, Coefficients::laplace(), HomogBC::dirichlet_gamma);
  for (int i = 0; i < m.n_nodes(); ++i)
    if (m.node_tag[i] == kTagCurve) CHECK(dg.constrained[i]);
}

TEST_CASE("resolvent and plain linear solve agree") {
  const TriMesh m = square_strip_mesh(0.25);
  const AssembledSystem sys =
      assemble_homogenized(m, Coefficients::laplace(), HomogBC::none);
  Field f;
  f.mesh = &m;
  f.v.assign(m.xy.size(), cplx(0));
  for (std::size_t i = 0; i < m.xy.size(); ++i)
    if (!sys.constrained[i]) f.v[i] = cplx(std::sin(m.xy[i].x), m.xy[i].y);
  const Field u1 = solve_resolvent(sys, f, cplx(0, 1));
  std::vector<cplx> b(m.xy.size());
  sys.M.spmv(f.v.data(), b.data());
  const Field u2 = solve_linear(sys, b, cplx(0, 1));
  double worst = 0;
  for (std::size_t i = 0; i < b.size(); ++i)
    worst = std::max(worst, std::abs(u1.v[i] - u2.v[i]));
  CHECK(worst <= 1e-12);
}

TEST_CASE("quadratic error decays at second order in L2") {
  const auto g = [](Vec2 p) { return p.x * p.x + 0.5 * p.y * p.y; };
  const auto dg = [](Vec2 p) { return Vec2{2 * p.x, p.y}; };
  double e_prev = 0;
  int level = 0;
  for (const double h : {0.4, 0.2, 0.1}) {
    const TriMesh m = square_strip_mesh(h);
    const Field u = project_function(m, [&](Vec2 p) { return cplx(g(p), 0); });
    const double e = error_vs_real_function(m, u.v, g, dg, NormKind::l2);
    if (level++) CHECK(e_prev / e > 3.0);
    e_prev = e;
  }
}
