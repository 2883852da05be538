#include "striphomog/cell.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "striphomog/errors.hpp"
#include "striphomog/mesh.hpp"

namespace striphomog {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double z0(Vec2 xi) {
  const double a = kPi * xi.x / 3.0;
  const double b = kPi * xi.y / 3.0;
  const double s = std::sin(a), sh = std::sinh(b);
  // |2 sin(a+ib)|^2 = 4 (sin^2 a + sinh^2 b)
  const double v = 4.0 * (s * s + sh * sh);
  if (v < 1e-280)
    fail(ErrKind::numerical, "z0 evaluated at a lattice singularity");
  return 3.0 / (2.0 * kPi) * std::log(v);
}

namespace {

// P1 Laplace stiffness with optional node identification (periodic fold)
// and Dirichlet elimination.  dof[i] == -1 marks a constrained node.
struct RealLaplace {
  std::vector<int> dof;
  int ndof = 0;
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd rhs;

  void number(const TriMesh& m, const std::vector<int>& alias,
              const std::vector<char>& fixed) {
    const int n = m.n_nodes();
    dof.assign(n, -1);
    ndof = 0;
    for (int i = 0; i < n; ++i)
      if (alias[i] == i && !fixed[i]) dof[i] = ndof++;
    for (int i = 0; i < n; ++i)
      if (alias[i] != i && !fixed[i]) dof[i] = dof[alias[i]];
    rhs = Eigen::VectorXd::Zero(ndof);
  }

  void assemble(const TriMesh& m) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(9 * m.tri.size());
    for (const auto& t : m.tri) {
      const Vec2 p0 = m.xy[t[0]], p1 = m.xy[t[1]], p2 = m.xy[t[2]];
      const double area = 0.5 * (p1 - p0).cross(p2 - p0);
      const Vec2 g[3] = {{(p1.y - p2.y) / (2 * area), (p2.x - p1.x) / (2 * area)},
                         {(p2.y - p0.y) / (2 * area), (p0.x - p2.x) / (2 * area)},
                         {(p0.y - p1.y) / (2 * area), (p1.x - p0.x) / (2 * area)}};
      for (int a = 0; a < 3; ++a) {
        const int da = dof[t[a]];
        if (da < 0) continue;
        for (int b = 0; b < 3; ++b) {
          const int db = dof[t[b]];
          if (db < 0) continue;  // Dirichlet value is 0 everywhere we use this
          trip.emplace_back(da, db, area * g[a].dot(g[b]));
        }
      }
    }
    K.resize(ndof, ndof);
    K.setFromTriplets(trip.begin(), trip.end());
  }

  void add_edge_load(int a, int b, const TriMesh& m, double g) {
    const double len = (m.xy[b] - m.xy[a]).norm();
    if (dof[a] >= 0) rhs[dof[a]] += 0.5 * g * len;
    if (dof[b] >= 0) rhs[dof[b]] += 0.5 * g * len;
  }

  Eigen::VectorXd solve() const {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
    if (ldlt.info() != Eigen::Success)
      fail(ErrKind::numerical, "cell stiffness factorization failed");
    Eigen::VectorXd z = ldlt.solve(rhs);
    const double rn = (K * z - rhs).norm();
    if (rn > 1e-9 * (rhs.norm() + 1e-30))
      fail(ErrKind::numerical, "cell solve residual too large");
    return z;
  }
};

double mesh_mean(const TriMesh& m, const std::vector<double>& z) {
  double num = 0.0, den = 0.0;
  for (int t = 0; t < m.n_tri(); ++t) {
    const double area = m.tri_area(t);
    num += area / 3.0 * (z[m.tri[t][0]] + z[m.tri[t][1]] + z[m.tri[t][2]]);
    den += area;
  }
  return num / den;
}

}  // namespace

CellConstants extract_cell_constant(const CellMesh& cm,
                                    const std::vector<double>& z,
                                    CellKind kind) {
  const TriMesh& m = cm.mesh;
  std::vector<char> dup(m.n_nodes(), 0);
  for (auto& pr : cm.periodic_pairs) dup[pr.second] = 1;

  auto band = [&](int side) {  // +1 top, -1 bottom -> (mean, std)
    double s1 = 0.0, s2 = 0.0;
    int cnt = 0;
    for (int i = 0; i < m.n_nodes(); ++i) {
      if (dup[i]) continue;
      const double y = side * m.xy[i].y;
      if (y <= 0.8 * cm.H || y >= 0.9 * cm.H) continue;
      double v = z[i] - side * m.xy[i].y;          // Z -+ xi2
      if (kind == CellKind::N) v = side * (z[i] - m.xy[i].y);
      s1 += v;
      s2 += v * v;
      ++cnt;
    }
    if (cnt < 8)
      fail(ErrKind::mesh, "extraction band contains too few nodes");
    const double mean = s1 / cnt;
    const double var = std::max(0.0, s2 / cnt - mean * mean);
    return std::pair<double, double>(mean, std::sqrt(var));
  };

  CellConstants c;
  auto top = band(+1);
  auto bot = band(-1);
  c.c_plus = top.first;
  c.std_plus = top.second;
  c.c_minus = bot.first;
  c.std_minus = bot.second;
  if (c.std_plus > 0.01 * (std::abs(c.c_plus) + 1.0) ||
      c.std_minus > 0.01 * (std::abs(c.c_minus) + 1.0))
    fail(ErrKind::quality, "far-field band is not constant to 1%; increase H or refine");
  return c;
}

CellSolution solve_cell_problem(double eta, CellKind kind, double H, double h) {
  if (!(eta > 0.0 && eta < 0.5))
    fail(ErrKind::config, "cell problems require 0 < eta < 1/2");
  if (!(H >= 4.0))
    fail(ErrKind::config, "cell half-height must be >= 4 (far-field truncation)");

  CellSolution sol;
  sol.kind = kind;
  sol.eta = eta;
  sol.H = H;
  CellMeshOptions opt;
  opt.h = h;
  opt.H = H;
  sol.cm = generate_cell_mesh(eta, opt);
  const TriMesh& m = sol.cm.mesh;
  const int n = m.n_nodes();

  std::vector<int> alias(n);
  std::iota(alias.begin(), alias.end(), 0);
  for (auto& pr : sol.cm.periodic_pairs) alias[pr.second] = pr.first;

  std::vector<char> fixed(n, 0);
  if (kind == CellKind::D) {
    for (int i = 0; i < n; ++i)
      if (m.node_tag[i] == kTagHoleDirichlet) fixed[i] = 1;
  } else {
    // pure Neumann: pin one node; the load is balanced exactly below, so
    // the pinned solve reproduces the solution with Z(pin) = 0.
    for (int i = 0; i < n; ++i)
      if (alias[i] == i) { fixed[i] = 1; break; }
  }

  RealLaplace sys;
  sys.number(m, alias, fixed);
  sys.assemble(m);

  // wall data: dZ/dxi2 = +-1 (D/R) or +1 at both ends (N), expressed with
  // the outward normal
  double wall_sum = 0.0;
  double hole_per = 0.0;
  for (const BoundaryEdge& e : m.bedge) {
    const Vec2 mid = 0.5 * (m.xy[e.a] + m.xy[e.b]);
    const double len = (m.xy[e.b] - m.xy[e.a]).norm();
    if (e.tag == kTagWall) {
      const bool top = mid.y > 0.0;
      double g = 1.0;
      if (kind == CellKind::N && !top) g = -1.0;
      sys.add_edge_load(e.a, e.b, m, g);
      wall_sum += g * len;
    } else if (e.tag == kTagHoleDirichlet) {
      hole_per += len;
    }
  }
  if (kind == CellKind::R) {
    // hole absorbs exactly what the walls inject (discrete perimeter keeps
    // the balance exact; the continuum value is -3/(pi eta))
    const double g = -wall_sum / hole_per;
    for (const BoundaryEdge& e : m.bedge)
      if (e.tag == kTagHoleDirichlet) sys.add_edge_load(e.a, e.b, m, g);
  }

  if (kind != CellKind::D) {
    const double net = sys.rhs.sum();
    const double scale = sys.rhs.cwiseAbs().sum() + 1e-30;
    sol.flux_balance = net;
    if (std::abs(net) > 1e-8 * scale)
      fail(ErrKind::numerical, "imposed fluxes violate net-flux balance");
  }

  const Eigen::VectorXd zf = sys.solve();
  sol.z.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
    if (sys.dof[i] >= 0) sol.z[i] = zf[sys.dof[i]];

  if (kind != CellKind::D) {
    const double mean = mesh_mean(m, sol.z);
    for (double& v : sol.z) v -= mean;
  }

  sol.c = extract_cell_constant(sol.cm, sol.z, kind);
  return sol;
}

FluxSolution solve_hole_flux_problem(const HoleShape& shape,
                                     const std::function<double(double)>& phi,
                                     double h, double outer_radius) {
  const double per = shape.boundary_length();
  const int nq = 1 << 14;
  double iphi = 0.0;
  for (int k = 0; k < nq; ++k) iphi += phi(2.0 * kPi * (k + 0.5) / nq);
  iphi *= 2.0 * kPi * outer_radius / nq;
  if (std::abs(iphi - per) > 1e-8 * per)
    fail(ErrKind::config, "outer flux violates the solvability condition");

  FluxSolution fs;
  fs.mesh = generate_flux_mesh(shape, outer_radius, h);
  const TriMesh& m = fs.mesh;
  const int n = m.n_nodes();

  std::vector<int> alias(n);
  std::iota(alias.begin(), alias.end(), 0);
  std::vector<char> fixed(n, 0);
  fixed[0] = 1;  // pure Neumann pin

  RealLaplace sys;
  sys.number(m, alias, fixed);
  sys.assemble(m);

  // -1 on the hole; phi on the outer circle rescaled by O(h^2) so the
  // discrete loads balance exactly (polygonal perimeters differ from the
  // continuum ones the solvability condition was checked against)
  double inner_sum = 0.0, outer_raw = 0.0;
  for (const BoundaryEdge& e : m.bedge) {
    const double len = (m.xy[e.b] - m.xy[e.a]).norm();
    const Vec2 mid = 0.5 * (m.xy[e.a] + m.xy[e.b]);
    if (e.tag == kTagHoleDirichlet) {
      sys.add_edge_load(e.a, e.b, m, -1.0);
      inner_sum += len;
    } else {
      outer_raw += phi(std::atan2(mid.y, mid.x)) * len;
    }
  }
  const double scale = inner_sum / outer_raw;
  for (const BoundaryEdge& e : m.bedge) {
    if (e.tag == kTagHoleDirichlet) continue;
    const Vec2 mid = 0.5 * (m.xy[e.a] + m.xy[e.b]);
    sys.add_edge_load(e.a, e.b, m, scale * phi(std::atan2(mid.y, mid.x)));
  }

  const Eigen::VectorXd vf = sys.solve();
  fs.v.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
    if (sys.dof[i] >= 0) fs.v[i] = vf[sys.dof[i]];
  const double mean = mesh_mean(m, fs.v);
  for (double& v : fs.v) v -= mean;

  // area-weighted nodal gradient recovery
  std::vector<Vec2> gsum(n, Vec2{0.0, 0.0});
  std::vector<double> asum(n, 0.0);
  for (const auto& t : m.tri) {
    const Vec2 p0 = m.xy[t[0]], p1 = m.xy[t[1]], p2 = m.xy[t[2]];
    const double area = 0.5 * (p1 - p0).cross(p2 - p0);
    Vec2 grad{0.0, 0.0};
    const Vec2 g[3] = {{(p1.y - p2.y) / (2 * area), (p2.x - p1.x) / (2 * area)},
                       {(p2.y - p0.y) / (2 * area), (p0.x - p2.x) / (2 * area)},
                       {(p0.y - p1.y) / (2 * area), (p1.x - p0.x) / (2 * area)}};
    for (int a = 0; a < 3; ++a) grad += fs.v[t[a]] * g[a];
    for (int a = 0; a < 3; ++a) {
      gsum[t[a]] += area * grad;
      asum[t[a]] += area;
    }
  }
  fs.x.assign(n, Vec2{0.0, 0.0});
  for (int i = 0; i < n; ++i) {
    fs.x[i] = gsum[i] / asum[i];
    fs.linf = std::max(fs.linf, fs.x[i].norm());
  }
  return fs;
}

}  // namespace striphomog
