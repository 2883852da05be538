// P1 assembly and solves.  Volume terms use the 3-point edge-midpoint rule
// (exact through degree 2), boundary terms 2-point Gauss.  Solves go through
// Eigen's sparse LU on the free dofs; residuals are re-checked with the
// project's own CSR kernels so a factorization gone wrong cannot pass
// silently.

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "striphomog/assembly.hpp"
#include "striphomog/errors.hpp"
#include "striphomog/kernels.hpp"

namespace striphomog {

Coefficients Coefficients::laplace() {
  Coefficients c;
  c.A = [](Vec2) { return Mat2{1.0, 0.0, 0.0, 1.0}; };
  return c;
}

void SparseCsr::spmv(const cplx* x, cplx* y) const {
  kern::csr_spmv(ptr.data(), idx.data(), val.data(), x, y, n);
}

namespace {

struct Accum {
  int n = 0;
  std::vector<Eigen::Triplet<cplx>> trip;

  void add(int a, int b, cplx v) {
    if (v != 0.0) trip.emplace_back(a, b, v);
  }

  SparseCsr compress() {
    Eigen::SparseMatrix<cplx, Eigen::RowMajor> S(n, n);
    S.setFromTriplets(trip.begin(), trip.end());
    S.makeCompressed();
    SparseCsr out;
    out.n = n;
    out.ptr.assign(S.outerIndexPtr(), S.outerIndexPtr() + n + 1);
    out.idx.assign(S.innerIndexPtr(), S.innerIndexPtr() + S.nonZeros());
    out.val.assign(S.valuePtr(), S.valuePtr() + S.nonZeros());
    return out;
  }
};

struct TriGeom {
  Vec2 p[3];
  double area;
  Vec2 grad[3];  // constant P1 gradients
  Vec2 mid[3];   // edge midpoints (quadrature nodes of the 3-point rule)
};

TriGeom tri_geom(const TriMesh& m, size_t t) {
  TriGeom g;
  for (int i = 0; i < 3; ++i) g.p[i] = m.xy[static_cast<size_t>(m.tri[t][i])];
  double det = (g.p[1].x - g.p[0].x) * (g.p[2].y - g.p[0].y) -
               (g.p[1].y - g.p[0].y) * (g.p[2].x - g.p[0].x);
  g.area = 0.5 * det;
  // grad phi_i is the inward-scaled normal of the opposite edge
  for (int i = 0; i < 3; ++i) {
    Vec2 a = g.p[(i + 1) % 3], b = g.p[(i + 2) % 3];
    g.grad[i] = Vec2{a.y - b.y, b.x - a.x} / det;
    g.mid[i] = (a + b) / 2.0;
  }
  return g;
}

// values of phi_j at the midpoint opposite vertex i: phi_j(mid_i) = 1/2 for
// j != i, 0 for j == i.
inline double phi_at_mid(int j, int i) { return j == i ? 0.0 : 0.5; }

void add_volume_terms(Accum& acc, const TriMesh& m, const Coefficients& c) {
  const bool has_conv = static_cast<bool>(c.A1) || static_cast<bool>(c.A2);
  for (size_t t = 0; t < m.tri.size(); ++t) {
    TriGeom g = tri_geom(m, t);
    const double wq = g.area / 3.0;
    Mat2 Aq[3];
    cplx A1q[3], A2q[3];
    double A0q[3];
    for (int q = 0; q < 3; ++q) {
      Aq[q] = c.A ? c.A(g.mid[q]) : Mat2{1, 0, 0, 1};
      A1q[q] = c.A1 ? c.A1(g.mid[q]) : cplx(0.0);
      A2q[q] = c.A2 ? c.A2(g.mid[q]) : cplx(0.0);
      A0q[q] = c.A0 ? c.A0(g.mid[q]) : 0.0;
    }
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        cplx v = 0.0;
        for (int q = 0; q < 3; ++q) {
          // (A grad u, grad v): row a = test, column b = trial
          Vec2 Agb = Aq[q].apply(g.grad[b]);
          v += wq * (Agb.x * g.grad[a].x + Agb.y * g.grad[a].y);
          if (has_conv) {
            cplx du = A1q[q] * g.grad[b].x + A2q[q] * g.grad[b].y;
            cplx dv = std::conj(A1q[q]) * g.grad[a].x + std::conj(A2q[q]) * g.grad[a].y;
            v += wq * (du * phi_at_mid(a, q) + phi_at_mid(b, q) * dv);
          }
          if (A0q[q] != 0.0) v += wq * A0q[q] * phi_at_mid(a, q) * phi_at_mid(b, q);
        }
        acc.add(m.tri[t][a], m.tri[t][b], v);
      }
  }
}

void add_mass(Accum& acc, const TriMesh& m) {
  for (size_t t = 0; t < m.tri.size(); ++t) {
    TriGeom g = tri_geom(m, t);
    const double wq = g.area / 3.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double v = 0.0;
        for (int q = 0; q < 3; ++q) v += wq * phi_at_mid(a, q) * phi_at_mid(b, q);
        acc.add(m.tri[t][a], m.tri[t][b], v);
      }
  }
}

// line term coef(x) * u * v over the given boundary edges (2-point Gauss)
void add_edge_mass(Accum& acc, const TriMesh& m, int tag,
                   const std::function<double(Vec2)>& coef) {
  const double gp = 1.0 / std::sqrt(3.0);
  for (auto& be : m.bedge) {
    if (be.tag != tag) continue;
    Vec2 pa = m.xy[static_cast<size_t>(be.a)], pb = m.xy[static_cast<size_t>(be.b)];
    double len = (pb - pa).norm();
    for (double s : {-gp, gp}) {
      double t01 = 0.5 * (1.0 + s);
      Vec2 x = pa + (pb - pa) * t01;
      double cvl = coef ? coef(x) : 1.0;
      double w = 0.5 * len * cvl;
      double sh[2] = {1.0 - t01, t01};
      int id[2] = {be.a, be.b};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) acc.add(id[a], id[b], w * sh[a] * sh[b]);
    }
  }
}

void apply_tags(std::vector<char>& constrained, const TriMesh& m,
                std::initializer_list<int> tags) {
  for (size_t i = 0; i < m.node_tag.size(); ++i)
    for (int tg : tags)
      if (m.node_tag[i] == tg) constrained[i] = 1;
}

}  // namespace

AssembledSystem assemble_perturbed(const TriMesh& mesh, const Coefficients& c) {
  AssembledSystem sys;
  sys.n = static_cast<int>(mesh.xy.size());
  sys.mesh = &mesh;
  Accum k, mm;
  k.n = mm.n = sys.n;
  add_volume_terms(k, mesh, c);
  add_edge_mass(k, mesh, kTagHoleRobin, c.robin_a);
  add_mass(mm, mesh);
  sys.K = k.compress();
  sys.M = mm.compress();
  sys.constrained.assign(static_cast<size_t>(sys.n), 0);
  apply_tags(sys.constrained, mesh, {kTagWall, kTagHoleDirichlet, kTagLateral});
  return sys;
}

AssembledSystem assemble_homogenized(const TriMesh& mesh, const Coefficients& c,
                                     HomogBC bc,
                                     const std::function<double(Vec2)>& beta) {
  AssembledSystem sys;
  sys.n = static_cast<int>(mesh.xy.size());
  sys.mesh = &mesh;
  Accum k, mm;
  k.n = mm.n = sys.n;
  add_volume_terms(k, mesh, c);
  if (bc == HomogBC::delta) {
    if (!beta) fail(ErrKind::config, "delta interface requires a beta coefficient");
    add_edge_mass(k, mesh, kTagCurve, beta);
  }
  add_mass(mm, mesh);
  sys.K = k.compress();
  sys.M = mm.compress();
  sys.constrained.assign(static_cast<size_t>(sys.n), 0);
  apply_tags(sys.constrained, mesh, {kTagWall, kTagLateral});
  if (bc == HomogBC::dirichlet_gamma)
    apply_tags(sys.constrained, mesh, {kTagCurve});
  return sys;
}

namespace {

// Free-dof compression of K - shift*M.
struct FreeSystem {
  std::vector<int> free_of_node;  // -1 when constrained
  std::vector<int> node_of_free;
  SparseCsr A;
};

FreeSystem build_free(const AssembledSystem& sys, cplx shift) {
  FreeSystem fs;
  fs.free_of_node.assign(static_cast<size_t>(sys.n), -1);
  for (int i = 0; i < sys.n; ++i)
    if (!sys.constrained[static_cast<size_t>(i)]) {
      fs.free_of_node[static_cast<size_t>(i)] = static_cast<int>(fs.node_of_free.size());
      fs.node_of_free.push_back(i);
    }
  int nf = static_cast<int>(fs.node_of_free.size());
  if (nf == 0) fail(ErrKind::numerical, "all dofs constrained");

  fs.A.n = nf;
  fs.A.ptr.assign(static_cast<size_t>(nf) + 1, 0);
  auto count_row = [&](int node, int fi) {
    for (int p = sys.K.ptr[static_cast<size_t>(node)];
         p < sys.K.ptr[static_cast<size_t>(node) + 1]; ++p)
      if (fs.free_of_node[static_cast<size_t>(sys.K.idx[static_cast<size_t>(p)])] >= 0)
        fs.A.ptr[static_cast<size_t>(fi) + 1]++;
    for (int p = sys.M.ptr[static_cast<size_t>(node)];
         p < sys.M.ptr[static_cast<size_t>(node) + 1]; ++p)
      if (fs.free_of_node[static_cast<size_t>(sys.M.idx[static_cast<size_t>(p)])] >= 0)
        fs.A.ptr[static_cast<size_t>(fi) + 1]++;
  };
  for (int fi = 0; fi < nf; ++fi) count_row(fs.node_of_free[static_cast<size_t>(fi)], fi);
  for (int i = 0; i < nf; ++i) fs.A.ptr[static_cast<size_t>(i) + 1] += fs.A.ptr[static_cast<size_t>(i)];
  fs.A.idx.resize(static_cast<size_t>(fs.A.ptr[static_cast<size_t>(nf)]));
  fs.A.val.resize(fs.A.idx.size());

  std::vector<int> cursor(fs.A.ptr.begin(), fs.A.ptr.end() - 1);
  std::vector<int> seen(static_cast<size_t>(nf), -1);
  std::vector<int> slot(static_cast<size_t>(nf), 0);
  for (int fi = 0; fi < nf; ++fi) {
    int node = fs.node_of_free[static_cast<size_t>(fi)];
    int begin = cursor[static_cast<size_t>(fi)];
    auto push = [&](int col_node, cplx v) {
      int fj = fs.free_of_node[static_cast<size_t>(col_node)];
      if (fj < 0) return;
      if (seen[static_cast<size_t>(fj)] == fi) {
        fs.A.val[static_cast<size_t>(slot[static_cast<size_t>(fj)])] += v;
      } else {
        seen[static_cast<size_t>(fj)] = fi;
        int at = cursor[static_cast<size_t>(fi)]++;
        slot[static_cast<size_t>(fj)] = at;
        fs.A.idx[static_cast<size_t>(at)] = fj;
        fs.A.val[static_cast<size_t>(at)] = v;
      }
    };
    for (int p = sys.K.ptr[static_cast<size_t>(node)];
         p < sys.K.ptr[static_cast<size_t>(node) + 1]; ++p)
      push(sys.K.idx[static_cast<size_t>(p)], sys.K.val[static_cast<size_t>(p)]);
    for (int p = sys.M.ptr[static_cast<size_t>(node)];
         p < sys.M.ptr[static_cast<size_t>(node) + 1]; ++p)
      push(sys.M.idx[static_cast<size_t>(p)], -shift * sys.M.val[static_cast<size_t>(p)]);
    (void)begin;
  }
  // rows may have trailing unused slots when K and M sparsity overlap: pack
  std::vector<int> nptr(static_cast<size_t>(nf) + 1, 0);
  for (int i = 0; i < nf; ++i)
    nptr[static_cast<size_t>(i) + 1] =
        nptr[static_cast<size_t>(i)] + (cursor[static_cast<size_t>(i)] -
                                        fs.A.ptr[static_cast<size_t>(i)]);
  std::vector<int> nidx(static_cast<size_t>(nptr[static_cast<size_t>(nf)]));
  std::vector<cplx> nval(nidx.size());
  for (int i = 0; i < nf; ++i) {
    int src = fs.A.ptr[static_cast<size_t>(i)], dst = nptr[static_cast<size_t>(i)];
    int cnt = cursor[static_cast<size_t>(i)] - src;
    std::copy(fs.A.idx.begin() + src, fs.A.idx.begin() + src + cnt, nidx.begin() + dst);
    std::copy(fs.A.val.begin() + src, fs.A.val.begin() + src + cnt, nval.begin() + dst);
  }
  fs.A.ptr = std::move(nptr);
  fs.A.idx = std::move(nidx);
  fs.A.val = std::move(nval);
  return fs;
}

Field solve_free(const AssembledSystem& sys, const std::vector<cplx>& rhs_full,
                 cplx shift, SolveInfo* info) {
  FreeSystem fs = build_free(sys, shift);
  const int nf = fs.A.n;

  std::vector<cplx> b(static_cast<size_t>(nf));
  for (int i = 0; i < nf; ++i)
    b[static_cast<size_t>(i)] = rhs_full[static_cast<size_t>(fs.node_of_free[static_cast<size_t>(i)])];

  Eigen::SparseMatrix<cplx> A(nf, nf);
  {
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(fs.A.val.size());
    for (int i = 0; i < nf; ++i)
      for (int p = fs.A.ptr[static_cast<size_t>(i)]; p < fs.A.ptr[static_cast<size_t>(i) + 1]; ++p)
        trip.emplace_back(i, fs.A.idx[static_cast<size_t>(p)], fs.A.val[static_cast<size_t>(p)]);
    A.setFromTriplets(trip.begin(), trip.end());
  }
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success)
    fail(ErrKind::numerical, "sparse factorization failed");
  Eigen::Map<const Eigen::VectorXcd> bv(b.data(), nf);
  Eigen::VectorXcd xv = lu.solve(bv);
  if (lu.info() != Eigen::Success) fail(ErrKind::numerical, "sparse solve failed");

  // residual via own kernels
  std::vector<cplx> r(static_cast<size_t>(nf));
  fs.A.spmv(xv.data(), r.data());
  kern::axpy(cplx(-1.0), b.data(), r.data(), static_cast<size_t>(nf));
  double rn = std::sqrt(kern::nrm2sq(r.data(), static_cast<size_t>(nf)));
  double bn = std::sqrt(kern::nrm2sq(b.data(), static_cast<size_t>(nf)));
  if (info) {
    info->residual = rn;
    info->rhs_norm = bn;
    info->n_free = nf;
  }
  if (rn > 1e-10 * std::max(bn, 1e-300))
    fail(ErrKind::numerical, "resolvent solve residual " + std::to_string(rn) +
                                 " exceeds tolerance (rhs " + std::to_string(bn) + ")");

  Field u;
  u.mesh = sys.mesh;
  u.v.assign(static_cast<size_t>(sys.n), cplx(0.0));
  for (int i = 0; i < nf; ++i)
    u.v[static_cast<size_t>(fs.node_of_free[static_cast<size_t>(i)])] = xv[i];
  return u;
}

}  // namespace

Field solve_resolvent(const AssembledSystem& sys, const Field& f, cplx shift,
                      SolveInfo* info) {
  if (f.mesh != sys.mesh || static_cast<int>(f.v.size()) != sys.n)
    fail(ErrKind::config, "rhs field lives on a different mesh");
  std::vector<cplx> mf(static_cast<size_t>(sys.n));
  sys.M.spmv(f.v.data(), mf.data());
  return solve_free(sys, mf, shift, info);
}

Field solve_linear(const AssembledSystem& sys, const std::vector<cplx>& b,
                   cplx shift, SolveInfo* info) {
  if (static_cast<int>(b.size()) != sys.n)
    fail(ErrKind::config, "rhs vector size mismatch");
  return solve_free(sys, b, shift, info);
}

namespace {

struct BinGrid {
  const TriMesh* m;
  Vec2 lo, hi;
  int nx = 1, ny = 1;
  std::vector<std::vector<int>> bins;

  explicit BinGrid(const TriMesh& mesh) : m(&mesh) {
    lo = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    hi = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    for (auto& p : mesh.xy) {
      lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y);
      hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y);
    }
    double side = std::sqrt((hi.x - lo.x) * (hi.y - lo.y) /
                            std::max<size_t>(1, mesh.tri.size()));
    side = std::max(side, 1e-12);
    nx = std::max(1, static_cast<int>((hi.x - lo.x) / side));
    ny = std::max(1, static_cast<int>((hi.y - lo.y) / side));
    bins.assign(static_cast<size_t>(nx) * static_cast<size_t>(ny), {});
    for (size_t t = 0; t < mesh.tri.size(); ++t) {
      Vec2 tlo = mesh.xy[static_cast<size_t>(mesh.tri[t][0])], thi = tlo;
      for (int k = 1; k < 3; ++k) {
        Vec2 p = mesh.xy[static_cast<size_t>(mesh.tri[t][k])];
        tlo.x = std::min(tlo.x, p.x); tlo.y = std::min(tlo.y, p.y);
        thi.x = std::max(thi.x, p.x); thi.y = std::max(thi.y, p.y);
      }
      int i0 = cell_x(tlo.x), i1 = cell_x(thi.x);
      int j0 = cell_y(tlo.y), j1 = cell_y(thi.y);
      for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i)
          bins[static_cast<size_t>(j) * nx + static_cast<size_t>(i)].push_back(
              static_cast<int>(t));
    }
  }
  int cell_x(double x) const {
    int i = static_cast<int>((x - lo.x) / std::max(hi.x - lo.x, 1e-300) * nx);
    return std::clamp(i, 0, nx - 1);
  }
  int cell_y(double y) const {
    int j = static_cast<int>((y - lo.y) / std::max(hi.y - lo.y, 1e-300) * ny);
    return std::clamp(j, 0, ny - 1);
  }

  // triangle + barycentric coordinates; slack widens acceptance
  bool find(Vec2 q, double slack, int* tri, double l[3]) const {
    for (int ring = 0; ring <= std::max(nx, ny); ++ring) {
      int ci = cell_x(q.x), cj = cell_y(q.y);
      bool any = false;
      for (int j = cj - ring; j <= cj + ring; ++j) {
        if (j < 0 || j >= ny) continue;
        for (int i = ci - ring; i <= ci + ring; ++i) {
          if (i < 0 || i >= nx) continue;
          if (ring > 0 && std::abs(i - ci) != ring && std::abs(j - cj) != ring) continue;
          any = true;
          for (int t : bins[static_cast<size_t>(j) * nx + static_cast<size_t>(i)]) {
            Vec2 a = m->xy[static_cast<size_t>(m->tri[static_cast<size_t>(t)][0])];
            Vec2 bb = m->xy[static_cast<size_t>(m->tri[static_cast<size_t>(t)][1])];
            Vec2 cc = m->xy[static_cast<size_t>(m->tri[static_cast<size_t>(t)][2])];
            double det = (bb.x - a.x) * (cc.y - a.y) - (bb.y - a.y) * (cc.x - a.x);
            if (det == 0.0) continue;
            double l1 = ((q.x - a.x) * (cc.y - a.y) - (q.y - a.y) * (cc.x - a.x)) / det;
            double l2 = ((bb.x - a.x) * (q.y - a.y) - (bb.y - a.y) * (q.x - a.x)) / det;
            double l0 = 1.0 - l1 - l2;
            if (l0 >= -slack && l1 >= -slack && l2 >= -slack) {
              *tri = t;
              l[0] = l0; l[1] = l1; l[2] = l2;
              return true;
            }
          }
        }
      }
      if (ring > 2 && !any) break;
    }
    return false;
  }
};

}  // namespace

Field interpolate(const Field& u, const TriMesh& target) {
  if (u.mesh == nullptr) fail(ErrKind::config, "interpolate: source field unbound");
  if (u.mesh == &target) return u;
  BinGrid grid(*u.mesh);
  Field out;
  out.mesh = &target;
  out.v.resize(target.xy.size());
  for (size_t i = 0; i < target.xy.size(); ++i) {
    int t = -1;
    double l[3];
    if (!grid.find(target.xy[i], 1e-9, &t, l))
      fail(ErrKind::numerical, "interpolation point outside the source mesh");
    cplx val = 0.0;
    for (int k = 0; k < 3; ++k)
      val += l[k] * u.v[static_cast<size_t>(u.mesh->tri[static_cast<size_t>(t)][k])];
    out.v[i] = val;
  }
  return out;
}

namespace {

double quad_form_norm(const TriMesh& mesh, const std::vector<cplx>& e, NormKind kind) {
  // L2^2 = e^H M e; H1^2 adds e^H S e with unit stiffness S, both evaluated
  // triangle-by-triangle (no global matrix needed).
  double acc = 0.0;
  for (size_t t = 0; t < mesh.tri.size(); ++t) {
    TriGeom g = tri_geom(mesh, t);
    cplx ev[3] = {e[static_cast<size_t>(mesh.tri[t][0])],
                  e[static_cast<size_t>(mesh.tri[t][1])],
                  e[static_cast<size_t>(mesh.tri[t][2])]};
    const double wq = g.area / 3.0;
    for (int q = 0; q < 3; ++q) {
      cplx v = 0.0;
      for (int j = 0; j < 3; ++j) v += phi_at_mid(j, q) * ev[j];
      acc += wq * std::norm(v);
    }
    if (kind == NormKind::h1) {
      cplx gx = 0.0, gy = 0.0;
      for (int j = 0; j < 3; ++j) {
        gx += ev[j] * g.grad[j].x;
        gy += ev[j] * g.grad[j].y;
      }
      acc += g.area * (std::norm(gx) + std::norm(gy));
    }
  }
  return std::sqrt(acc);
}

}  // namespace

double field_norm(const TriMesh& mesh, const std::vector<cplx>& u, NormKind kind) {
  if (u.size() != mesh.xy.size()) fail(ErrKind::config, "field size mismatch");
  return quad_form_norm(mesh, u, kind);
}

double difference_norm(const TriMesh& mesh, const std::vector<cplx>& u,
                       const std::vector<cplx>& v, NormKind kind) {
  if (u.size() != mesh.xy.size() || v.size() != mesh.xy.size())
    fail(ErrKind::config, "field size mismatch");
  std::vector<cplx> e(u.size());
  for (size_t i = 0; i < u.size(); ++i) e[i] = u[i] - v[i];
  return quad_form_norm(mesh, e, kind);
}

Field project_function(const TriMesh& mesh, const std::function<cplx(Vec2)>& f) {
  Field out;
  out.mesh = &mesh;
  out.v.resize(mesh.xy.size());
  for (size_t i = 0; i < mesh.xy.size(); ++i) out.v[i] = f(mesh.xy[i]);
  return out;
}

double error_vs_real_function(const TriMesh& mesh, const std::vector<cplx>& u,
                              const std::function<double(Vec2)>& g,
                              const std::function<Vec2(Vec2)>& grad_g,
                              NormKind kind) {
  if (u.size() != mesh.xy.size()) fail(ErrKind::config, "field size mismatch");
  double acc = 0.0;
  for (size_t t = 0; t < mesh.tri.size(); ++t) {
    TriGeom ge = tri_geom(mesh, t);
    const cplx uv[3] = {u[static_cast<size_t>(mesh.tri[t][0])],
                        u[static_cast<size_t>(mesh.tri[t][1])],
                        u[static_cast<size_t>(mesh.tri[t][2])]};
    const double wq = ge.area / 3.0;
    cplx gx = 0.0, gy = 0.0;  // constant P1 gradient of u on this triangle
    for (int i = 0; i < 3; ++i) {
      gx += uv[i] * ge.grad[i].x;
      gy += uv[i] * ge.grad[i].y;
    }
    for (int q = 0; q < 3; ++q) {
      const cplx e = 0.5 * (uv[(q + 1) % 3] + uv[(q + 2) % 3]) - g(ge.mid[q]);
      acc += wq * std::norm(e);
    }
    if (kind == NormKind::h1) {
      // gradient sampled at the centroid: edge midpoints can sit exactly on
      // an interface line where grad_g is one-sided
      const Vec2 cen = (ge.p[0] + ge.p[1] + ge.p[2]) / 3.0;
      const Vec2 dg = grad_g(cen);
      acc += ge.area * (std::norm(gx - dg.x) + std::norm(gy - dg.y));
    }
  }
  return std::sqrt(acc);
}

std::vector<cplx> values_at(const Field& u, const std::vector<Vec2>& pts) {
  if (u.mesh == nullptr) fail(ErrKind::config, "values_at: field unbound");
  BinGrid grid(*u.mesh);
  std::vector<cplx> out(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    int t = -1;
    double l[3];
    if (!grid.find(pts[i], 1e-9, &t, l))
      fail(ErrKind::numerical, "evaluation point outside the mesh");
    cplx val = 0.0;
    for (int k = 0; k < 3; ++k)
      val += l[k] * u.v[static_cast<size_t>(u.mesh->tri[static_cast<size_t>(t)][k])];
    out[i] = val;
  }
  return out;
}

}  // namespace striphomog
