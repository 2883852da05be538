// Periodicity-cell mesh (one hole at the origin of a tall rectangle with
// matched lateral boundaries) and the annular mesh for the boundary-flux
// problem. Both are built quadrant-symmetric so even/odd structure of the
// solutions is inherited by the discretization.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mesh_builder.hpp"
#include "mesh_internal.hpp"
#include "striphomog/errors.hpp"
#include "striphomog/meshgen.hpp"

namespace striphomog {

namespace {

// Symmetric subdivision: endpoints exact, interior mirrored about the center.
std::vector<double> linspace_sym(double lo, double hi, int n) {
  std::vector<double> xs(static_cast<size_t>(n) + 1);
  xs[0] = lo;
  xs[static_cast<size_t>(n)] = hi;
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (int i = 1; i < n; ++i) {
    double t = (2.0 * i - n) / n;
    xs[static_cast<size_t>(i)] = mid + half * t;
    xs[static_cast<size_t>(n - i)] = mid - half * t;
    if (2 * i == n) xs[static_cast<size_t>(i)] = mid;
  }
  return xs;
}

void grid_region(MeshBuilder& b, const std::vector<double>& xs,
                 const std::vector<double>& ys) {
  std::vector<int> bot(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) bot[i] = b.node(xs[i], ys[0]);
  for (size_t j = 1; j < ys.size(); ++j) {
    std::vector<int> top(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) top[i] = b.node(xs[i], ys[j]);
    for (size_t i = 0; i + 1 < xs.size(); ++i)
      split_quad(b, bot[i], bot[i + 1], top[i + 1], top[i], DiagMode::quadrant, 0,
                 {0.0, 0.0});
    bot = std::move(top);
  }
}

}  // namespace

CellMesh generate_cell_mesh(double eta, const CellMeshOptions& opt) {
  if (!(eta > 0.0))
    fail(ErrKind::config, "cell hole radius must be positive");
  const double a = 1.2, W = 1.5, H = opt.H;
  if (!(H > a + 0.2))
    fail(ErrKind::config, "cell half-height must exceed the central square");
  if (eta > 0.8 * a)
    fail(ErrKind::geometry, "cell hole radius too large for the central square");
  int n_sq = opt.square_intervals;
  if (n_sq == 0) {
    if (!(opt.h > 0.0)) fail(ErrKind::config, "cell pitch must be positive");
    n_sq = 4 * std::max(2, static_cast<int>(std::lround(0.5 * a / opt.h)));
  }
  if (n_sq < 8 || n_sq % 4 != 0)
    fail(ErrKind::config, "square_intervals must be a multiple of 4, >= 8");
  const double p = 2.0 * a / n_sq;

  MeshBuilder b;
  std::vector<double> xs_sq = linspace_sym(-a, a, n_sq);
  std::vector<double> ys_sq = xs_sq;  // same array: square is centered
  int cf = std::max(1, static_cast<int>(std::lround((W - a) / p)));
  std::vector<double> xs_left = linspace_sym(-W, -a, cf);
  std::vector<double> xs_right(xs_left.size());
  for (size_t i = 0; i < xs_left.size(); ++i)
    xs_right[i] = -xs_left[xs_left.size() - 1 - i];

  std::vector<double> xs_full = xs_left;
  xs_full.insert(xs_full.end(), xs_sq.begin() + 1, xs_sq.end());
  xs_full.insert(xs_full.end(), xs_right.begin() + 1, xs_right.end());

  int rt = std::max(2, static_cast<int>(std::lround((H - a) / p)));
  std::vector<double> ys_top = linspace_sym(a, H, rt);
  std::vector<double> ys_bot(ys_top.size());
  for (size_t i = 0; i < ys_top.size(); ++i)
    ys_bot[i] = -ys_top[ys_top.size() - 1 - i];

  grid_region(b, xs_left, ys_sq);
  grid_region(b, xs_right, ys_sq);
  grid_region(b, xs_full, ys_top);
  grid_region(b, xs_full, ys_bot);

  // Central square boundary loop, ccw from the bottom-left corner.
  std::vector<int> loop;
  loop.reserve(static_cast<size_t>(4 * n_sq));
  for (int i = 0; i < n_sq; ++i) loop.push_back(b.node(xs_sq[static_cast<size_t>(i)], -a));
  for (int j = 0; j < n_sq; ++j) loop.push_back(b.node(a, ys_sq[static_cast<size_t>(j)]));
  for (int i = n_sq; i > 0; --i) loop.push_back(b.node(xs_sq[static_cast<size_t>(i)], a));
  for (int j = n_sq; j > 0; --j) loop.push_back(b.node(-a, ys_sq[static_cast<size_t>(j)]));

  ogrid_patch(b, {0.0, 0.0}, a, loop, eta, kTagHoleDirichlet, opt.min_hole_segments,
              opt.ring_growth, DiagMode::quadrant);

  CellMesh cm;
  cm.mesh = std::move(b.m);
  cm.H = H;
  cm.eta = eta;

  ClassifyOptions co;
  co.x_lo = -W; co.x_hi = W; co.y_lo = -H; co.y_hi = H;
  classify_and_tag(cm.mesh, co);
  validate_mesh(cm.mesh);

  // Lateral pairing: identical y-arrays on both sides by construction.
  std::vector<std::pair<double, int>> left, right;
  for (size_t i = 0; i < cm.mesh.xy.size(); ++i) {
    if (cm.mesh.xy[i].x == -W) left.push_back({cm.mesh.xy[i].y, static_cast<int>(i)});
    if (cm.mesh.xy[i].x == W) right.push_back({cm.mesh.xy[i].y, static_cast<int>(i)});
  }
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  if (left.size() != right.size())
    fail(ErrKind::mesh, "cell mesh lateral boundaries do not match");
  for (size_t i = 0; i < left.size(); ++i) {
    if (left[i].first != right[i].first)
      fail(ErrKind::mesh, "cell mesh lateral boundaries are not aligned");
    cm.periodic_pairs.push_back({left[i].second, right[i].second});
  }

  MeshQuality mq = mesh_quality(cm.mesh);
  if (mq.min_angle_deg < 18.0)
    fail(ErrKind::quality, "cell mesh min angle below threshold");
  return cm;
}

TriMesh generate_flux_mesh(const HoleShape& shape, double outer_radius, double h) {
  if (!(outer_radius > shape.outradius()))
    fail(ErrKind::geometry, "flux annulus outer radius must enclose the hole");
  if (shape.is_circle) {
    // Structured polar annulus between the hole circle and the outer circle.
    const double r0 = shape.circle_radius, r1 = outer_radius;
    int nt = std::max(16, static_cast<int>(std::ceil(2.0 * M_PI * r0 / h)));
    nt = ((nt + 3) / 4) * 4;
    int nr = std::max(2, static_cast<int>(std::ceil((r1 - r0) / h)));
    MeshBuilder b;
    std::vector<std::vector<int>> ring(static_cast<size_t>(nr) + 1);
    for (int j = 0; j <= nr; ++j) {
      double r = r0 + (r1 - r0) * j / nr;
      if (j == nr) r = r1;
      int tag = j == 0 ? kTagHoleDirichlet : (j == nr ? kTagWall : kTagInterior);
      auto& rg = ring[static_cast<size_t>(j)];
      rg.resize(static_cast<size_t>(nt));
      for (int i = 0; i < nt; ++i) {
        double th = 2.0 * M_PI * i / nt;
        rg[static_cast<size_t>(i)] = b.node(r * std::cos(th), r * std::sin(th), tag);
      }
    }
    for (int j = 0; j < nr; ++j)
      for (int i = 0; i < nt; ++i) {
        int i2 = (i + 1) % nt;
        split_quad(b, ring[static_cast<size_t>(j)][static_cast<size_t>(i)],
                   ring[static_cast<size_t>(j)][static_cast<size_t>(i2)],
                   ring[static_cast<size_t>(j) + 1][static_cast<size_t>(i2)],
                   ring[static_cast<size_t>(j) + 1][static_cast<size_t>(i)],
                   DiagMode::shorter, 0, {});
      }
    for (int i = 0; i < nt; ++i) {
      int i2 = (i + 1) % nt;
      b.bedge(ring[0][static_cast<size_t>(i2)], ring[0][static_cast<size_t>(i)],
              kTagHoleDirichlet);
      b.bedge(ring[static_cast<size_t>(nr)][static_cast<size_t>(i)],
              ring[static_cast<size_t>(nr)][static_cast<size_t>(i2)], kTagWall);
    }
    TriMesh m = std::move(b.m);
    validate_mesh(m);
    return m;
  }

  // Polygonal hole: constrained Delaunay between the polygon and the circle.
  DelaunayInput in;
  const auto& poly = shape.polygon;
  int np = static_cast<int>(poly.size());
  for (int i = 0; i < np; ++i) in.points.push_back(poly[static_cast<size_t>(i)]);
  for (int i = 0; i < np; ++i)
    in.segments.push_back({i, (i + 1) % np, kTagHoleDirichlet, -1});
  int nt = std::max(24, static_cast<int>(std::ceil(2.0 * M_PI * outer_radius / h)));
  in.circles.push_back({{0.0, 0.0}, outer_radius});
  int base = np;
  for (int i = 0; i < nt; ++i) {
    double th = 2.0 * M_PI * i / nt;
    in.points.push_back({outer_radius * std::cos(th), outer_radius * std::sin(th)});
  }
  for (int i = 0; i < nt; ++i)
    in.segments.push_back({base + i, base + (i + 1) % nt, kTagWall, 0});

  // A seed strictly inside the polygon marks the hole region for removal.
  Vec2 seed{0.0, 0.0};
  auto inside = [&](Vec2 pt) {
    bool in_poly = false;
    for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
      if ((poly[i].y > pt.y) != (poly[j].y > pt.y) &&
          pt.x < (poly[j].x - poly[i].x) * (pt.y - poly[i].y) / (poly[j].y - poly[i].y) +
                     poly[i].x)
        in_poly = !in_poly;
    }
    return in_poly;
  };
  if (!inside(seed)) {
    bool found = false;
    for (size_t i = 0; i < poly.size() && !found; ++i) {
      Vec2 c = (poly[i] + poly[(i + 1) % poly.size()] + poly[(i + 2) % poly.size()]) / 3.0;
      if (inside(c)) { seed = c; found = true; }
    }
    if (!found) fail(ErrKind::geometry, "could not seed the hole interior");
  }
  in.hole_seeds.push_back(seed);
  in.size = [h](Vec2) { return h; };
  TriMesh m = delaunay_mesh(in);
  validate_mesh(m);
  return m;
}

}  // namespace striphomog
