// Structured triangulations: the perforated strip with a straight curve
// (O-grid patches around each hole inside a uniform band, column-coarsening
// cascade towards the walls), plain rectangle grids for the homogenized
// operators, and the shared boundary classifier.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "mesh_builder.hpp"
#include "mesh_internal.hpp"
#include "striphomog/errors.hpp"
#include "striphomog/meshgen.hpp"

namespace striphomog {

namespace {

// Symmetric subdivision of [lo, hi] into n intervals; endpoints are kept
// bit-exact and interior nodes mirror around the midpoint so that meshes meant
// to be reflection-symmetric really are.
std::vector<double> linspace_sym(double lo, double hi, int n) {
  std::vector<double> xs(static_cast<size_t>(n) + 1);
  xs[0] = lo;
  xs[static_cast<size_t>(n)] = hi;
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (int i = 1; i < n; ++i) {
    double t = (2.0 * i - n) / n;  // in (-1,1), antisymmetric in i <-> n-i
    xs[static_cast<size_t>(i)] = mid + half * t;
    xs[static_cast<size_t>(n - i)] = mid - half * t;
    if (2 * i == n) xs[static_cast<size_t>(i)] = mid;
  }
  return xs;
}

}  // namespace

void split_quad(MeshBuilder& b, int n00, int n10, int n11, int n01, DiagMode mode,
                int parity, Vec2 sym_center) {
  bool diag00_11;  // true: split along (n00,n11)
  switch (mode) {
    case DiagMode::parity:
      diag00_11 = (parity % 2) == 0;
      break;
    case DiagMode::quadrant: {
      // Prefer the strictly shorter diagonal (a geometric rule mirrors
      // exactly, since mirrored quads carry bitwise-mirrored coordinates);
      // the quadrant sign only settles ties, where both splits are congruent.
      double d1 = (b.m.xy[n00] - b.m.xy[n11]).norm2();
      double d2 = (b.m.xy[n10] - b.m.xy[n01]).norm2();
      if (d1 < d2 * (1.0 - 1e-9)) {
        diag00_11 = true;
      } else if (d2 < d1 * (1.0 - 1e-9)) {
        diag00_11 = false;
      } else {
        Vec2 c = (b.m.xy[n00] + b.m.xy[n10] + b.m.xy[n11] + b.m.xy[n01]) / 4.0 -
                 sym_center;
        diag00_11 = c.x * c.y > 0.0;
      }
      break;
    }
    case DiagMode::shorter:
    default: {
      double d1 = (b.m.xy[n00] - b.m.xy[n11]).norm2();
      double d2 = (b.m.xy[n10] - b.m.xy[n01]).norm2();
      diag00_11 = d1 <= d2 * (1.0 + 1e-12);
      break;
    }
  }
  if (diag00_11) {
    b.tri(n00, n10, n11);
    b.tri(n00, n11, n01);
  } else {
    b.tri(n00, n10, n01);
    b.tri(n10, n11, n01);
  }
}

void uniform_row(MeshBuilder& b, std::vector<int>& ids, const std::vector<double>& xs,
                 double y_top, DiagMode mode, Vec2 sym_center) {
  std::vector<int> top(ids.size());
  for (size_t i = 0; i < xs.size(); ++i) top[i] = b.node(xs[i], y_top);
  for (size_t i = 0; i + 1 < xs.size(); ++i)
    split_quad(b, ids[i], ids[i + 1], top[i + 1], top[i], mode,
               static_cast<int>(i), sym_center);
  ids = std::move(top);
}

void transition_row(MeshBuilder& b, std::vector<int>& ids, std::vector<double>& xs,
                    double y_top) {
  const size_t m = xs.size() - 1;  // bottom column count, >= 2
  std::vector<int> top;
  std::vector<double> txs;
  top.reserve(m / 2 + 2);
  txs.reserve(m / 2 + 2);
  top.push_back(b.node(xs[0], y_top));
  txs.push_back(xs[0]);
  size_t i = 0;
  while (i < m) {
    int t0 = top.back();
    if (m - i == 1) {  // odd tail: carry the last column 1:1
      int t1 = b.node(xs[i + 1], y_top);
      split_quad(b, ids[i], ids[i + 1], t1, t0, DiagMode::shorter, 0, {});
      top.push_back(t1);
      txs.push_back(xs[i + 1]);
      break;
    }
    int t1 = b.node(xs[i + 2], y_top);
    b.tri(ids[i], ids[i + 1], t0);
    b.tri(ids[i + 1], t1, t0);
    b.tri(ids[i + 1], ids[i + 2], t1);
    top.push_back(t1);
    txs.push_back(xs[i + 2]);
    i += 2;
  }
  ids = std::move(top);
  xs = std::move(txs);
}

void ogrid_patch(MeshBuilder& b, Vec2 center, double w, const std::vector<int>& loop,
                 double r_hole, int hole_tag, int n_min, double growth,
                 DiagMode mode, bool fill) {
  const int n4 = static_cast<int>(loop.size());
  if (r_hole > 0.8 * w)
    fail(ErrKind::mesh, "hole radius exceeds 0.8 of its patch half-width; refine the "
                        "band or shrink the hole");
  // Ray directions per node; filled with the uniform circle distribution
  // below, after the blend rings have relaxed the square boundary onto it.
  std::vector<Vec2> dir;
  const double r_attach = std::max(0.72 * w, std::min(0.85 * w, 1.2 * r_hole));

  std::vector<int> cur = loop;
  int n_cur = n4;
  auto connect = [&](const std::vector<int>& inner) {
    for (size_t i = 0; i < cur.size(); ++i) {
      size_t j = (i + 1) % cur.size();
      split_quad(b, inner[i], inner[j], cur[j], cur[i], mode, static_cast<int>(i),
                 center);
    }
    cur = inner;
  };
  auto halve_to = [&](double r_next) {
    std::vector<int> inner(static_cast<size_t>(n_cur / 2));
    std::vector<Vec2> ndir(static_cast<size_t>(n_cur / 2));
    for (int i = 0; i < n_cur / 2; ++i) {
      Vec2 u = dir[static_cast<size_t>(2 * i)];
      ndir[static_cast<size_t>(i)] = u;
      inner[static_cast<size_t>(i)] =
          b.node(center.x + r_next * u.x, center.y + r_next * u.y);
    }
    for (int i = 0; i < n_cur / 2; ++i) {
      int o0 = cur[static_cast<size_t>(2 * i)];
      int o1 = cur[static_cast<size_t>(2 * i + 1)];
      int o2 = cur[static_cast<size_t>((2 * i + 2) % n_cur)];
      int i0 = inner[static_cast<size_t>(i)];
      int i1 = inner[static_cast<size_t>((i + 1) % (n_cur / 2))];
      b.tri(o0, o1, i0);
      b.tri(o1, i1, i0);
      b.tri(o1, o2, i1);
    }
    cur = std::move(inner);
    dir = std::move(ndir);
    n_cur /= 2;
  };

  // Uniform unit directions with the exact dihedral symmetry of the loop:
  // one half-side from trig (axis and corner entries pinned so mirrors are
  // bitwise), the rest by sign flips and coordinate swaps only.
  const int ns = n4 / 4;
  std::vector<Vec2> uni(static_cast<size_t>(n4));
  const double c0 = std::sqrt(0.5);
  uni[0] = {-c0, -c0};  // loop starts at the bottom-left corner
  uni[static_cast<size_t>(ns / 2)] = {0.0, -1.0};
  for (int i = 1; i < ns / 2; ++i) {
    const double a = 2.0 * M_PI * i / n4 - 0.75 * M_PI;
    uni[static_cast<size_t>(i)] = {std::cos(a), std::sin(a)};
    uni[static_cast<size_t>(ns - i)] = {-uni[static_cast<size_t>(i)].x,
                                        uni[static_cast<size_t>(i)].y};
  }
  for (int i = ns; i < n4; ++i) {
    const Vec2 p = uni[static_cast<size_t>(i - ns)];
    uni[static_cast<size_t>(i)] = {-p.y, p.x};
  }

  // Square-to-circle blend: each node walks its own ray with geometric radii
  // while the ray itself relaxes to the uniform direction, so the corner
  // crowding of the square boundary never reaches the attach circle.  The
  // layer count balances corner aspect (favours more layers) against the
  // mid-side aspect (favours fewer).
  {
    const double dth_c = 0.5 * (M_PI / 4 - std::atan2(double(ns - 2), double(ns)) +
                                2.0 * M_PI / n4);
    const double dth_m = 0.5 * (std::atan2(2.0, double(ns)) + 2.0 * M_PI / n4);
    const double lc = std::log(std::sqrt(2.0) * w / r_attach);
    const double lm = std::log(w / r_attach);
    int n_b = 3;
    double best = 0.0;
    // the balanced layer count grows like n4 (corner pitch ~ 1/n4), so the
    // search range must scale with the loop resolution
    for (int n = 2; n <= std::max(12, n4 / 8); ++n) {
      const double corner = std::atan2(dth_c, 1.0 - std::exp(-lc / n));
      const double mid = std::atan2(1.0 - std::exp(-lm / n), dth_m);
      if (std::min(corner, mid) > best) {
        best = std::min(corner, mid);
        n_b = n;
      }
    }
    for (int l = 1; l <= n_b; ++l) {
      std::vector<int> ring(static_cast<size_t>(n4));
      for (int i = 0; i < n4; ++i) {
        if (l == n_b) {
          const Vec2 u = uni[static_cast<size_t>(i)];
          ring[static_cast<size_t>(i)] =
              b.node(center.x + r_attach * u.x, center.y + r_attach * u.y);
          continue;
        }
        const Vec2 p0 = b.m.xy[loop[static_cast<size_t>(i)]] - center;
        const double r0 = p0.norm();
        const double rl = r0 * std::pow(r_attach / r0, double(l) / n_b);
        const double s = double(l) / n_b;
        Vec2 v = (1.0 - s) * (p0 / r0) + s * uni[static_cast<size_t>(i)];
        v = v / v.norm();
        ring[static_cast<size_t>(i)] =
            b.node(center.x + rl * v.x, center.y + rl * v.y);
      }
      connect(ring);
    }
    dir = uni;  // all deeper rings ride the uniform rays
  }

  // Ring cascade from r_attach to the hole.  Radial steps track the local
  // angular pitch (capped by the grading ratio), which keeps both the quad
  // rings and the halving fans near unit aspect at every count; the count
  // halves whenever the pitch allows, never below n_min (kept a multiple of 4
  // so the quadrant symmetry of the cell mesh survives).
  int floor_n = std::max(8, n_min);
  floor_n = ((floor_n + 3) / 4) * 4;
  const double grade = 1.0 - 1.0 / std::max(growth, 1.1);
  double r_cur = r_attach;
  bool done = false;
  while (!done) {
    const double pitch = 2.0 * M_PI * r_cur / n_cur;
    const bool can_halve =
        n_cur / 2 >= floor_n && n_cur % 2 == 0 && (n_cur / 4) % 2 == 0;
    const double dr = std::min((can_halve ? 1.25 : 0.9) * pitch, grade * r_cur);
    double r_next = r_cur - dr;
    if (r_next <= r_hole + 0.55 * dr) {
      r_next = r_hole;
      done = true;
    }
    if (can_halve && !done && dr >= pitch) {
      halve_to(r_next);
    } else {
      std::vector<int> inner(static_cast<size_t>(n_cur));
      for (int i = 0; i < n_cur; ++i) {
        Vec2 u = dir[static_cast<size_t>(i)];
        inner[static_cast<size_t>(i)] =
            b.node(center.x + r_next * u.x, center.y + r_next * u.y,
                   done && !fill ? hole_tag : kTagInterior);
      }
      connect(inner);
    }
    r_cur = r_next;
  }
  if (fill) {
    // continue inward so the hole interior is meshed too; the triangles
    // outside the hole circle are identical to the non-fill run
    double r_c = r_hole;
    while (n_cur > 12) {
      if (!(n_cur % 2 == 0 && (n_cur / 4) % 2 == 0 && n_cur / 2 >= 8))
        fail(ErrKind::mesh,
             "hole fill needs a boundary segment count of 8*2^k or 12*2^k");
      const double r_next = 0.55 * r_c;
      halve_to(r_next);
      r_c = r_next;
    }
    const int cn = b.node(center.x, center.y);
    for (size_t i = 0; i < cur.size(); ++i)
      b.tri(cur[i], cur[(i + 1) % cur.size()], cn);
    return;
  }
  for (size_t i = 0; i < cur.size(); ++i) {
    size_t j = (i + 1) % cur.size();
    b.m.node_tag[static_cast<size_t>(cur[i])] = hole_tag;
    b.bedge(cur[j], cur[i], hole_tag);  // hole loop runs cw seen from the domain
  }
}

void classify_and_tag(TriMesh& m, const ClassifyOptions& opt) {
  std::map<std::pair<int, int>, int> edge_count;
  auto key = [](int a, int bb) {
    return std::make_pair(std::min(a, bb), std::max(a, bb));
  };
  for (auto& t : m.tri)
    for (int e = 0; e < 3; ++e) edge_count[key(t[e], t[(e + 1) % 3])]++;

  std::map<std::pair<int, int>, int> existing;  // tags set by the generator
  for (auto& be : m.bedge) existing[key(be.a, be.b)] = be.tag;

  const double tol = 1e-12 * std::max({1.0, std::abs(opt.x_hi), std::abs(opt.y_hi)});
  auto on = [&](double v, double ref) { return std::abs(v - ref) <= tol; };

  for (auto& [k, c] : edge_count) {
    if (c != 1) continue;
    if (existing.count(k)) continue;
    Vec2 pa = m.xy[static_cast<size_t>(k.first)], pb = m.xy[static_cast<size_t>(k.second)];
    int tag;
    if (on(pa.y, opt.y_lo) && on(pb.y, opt.y_lo)) tag = kTagWall;
    else if (on(pa.y, opt.y_hi) && on(pb.y, opt.y_hi)) tag = kTagWall;
    else if ((on(pa.x, opt.x_lo) && on(pb.x, opt.x_lo)) ||
             (on(pa.x, opt.x_hi) && on(pb.x, opt.x_hi)))
      tag = kTagLateral;
    else if (opt.dom != nullptr) {
      Vec2 mid = (pa + pb) / 2.0;
      const Hole* best = nullptr;
      double bd = std::numeric_limits<double>::max();
      for (auto& h : opt.dom->holes) {
        double dd = (mid - h.y).norm();
        if (dd < bd) { bd = dd; best = &h; }
      }
      if (best == nullptr ||
          bd > opt.hole_radius_scale * opt.dom->hole_outradius(*best))
        fail(ErrKind::mesh, "unclassifiable boundary edge in generated mesh");
      tag = best->bc == HoleBC::dirichlet ? kTagHoleDirichlet : kTagHoleRobin;
    } else {
      fail(ErrKind::mesh, "unclassifiable boundary edge in generated mesh");
    }
    m.bedge.push_back({k.first, k.second, tag});
  }

  auto rank_of = [](int t) {
    switch (t) {
      case kTagHoleDirichlet:
      case kTagHoleRobin: return 4;
      case kTagWall: return 3;
      case kTagLateral: return 2;
      case kTagCurve: return 1;
      default: return 0;
    }
  };
  for (auto& be : m.bedge) {
    for (int idx : {be.a, be.b}) {
      int& nt = m.node_tag[static_cast<size_t>(idx)];
      if (rank_of(be.tag) > rank_of(nt)) nt = be.tag;
    }
  }
  if (!std::isnan(opt.y_curve)) {
    for (size_t i = 0; i < m.xy.size(); ++i)
      if (m.xy[i].y == opt.y_curve && m.node_tag[i] == kTagInterior)
        m.node_tag[i] = kTagCurve;
    if (opt.curve_edges) {
      for (auto& [k, c] : edge_count) {
        if (c != 2) continue;
        if (m.xy[static_cast<size_t>(k.first)].y == opt.y_curve &&
            m.xy[static_cast<size_t>(k.second)].y == opt.y_curve)
          m.bedge.push_back({k.first, k.second, kTagCurve});
      }
    }
  }
}

namespace {

// Global column layout of the hole band: per hole a patch block of n_s
// columns spanning [s_k - w, s_k + w]; fillers between/around subdivided at
// pitch ~q. Returns the full sorted x-array plus the index range of each
// patch block.
struct BandLayout {
  std::vector<double> xs;
  std::vector<std::pair<int, int>> patch_cols;  // [first,last] column-node indices
};

BandLayout band_layout(const PerforatedDomain& dom, double w, int n_s) {
  BandLayout L;
  const double X = dom.strip.X;
  const double q = 2.0 * w / n_s;
  double xcur = -X;
  L.xs.push_back(xcur);
  auto filler = [&](double to) {
    double W = to - xcur;
    if (W <= 1e-12 * std::max(1.0, X)) {
      if (!L.xs.empty()) L.xs.back() = to;  // snap: blocks touch exactly
      xcur = to;
      return;
    }
    if (W < 0.66 * q)
      fail(ErrKind::mesh,
           "sliver between hole patches is below the band pitch; adjust the "
           "lateral margin or spacing");
    int n = std::max(1, static_cast<int>(std::lround(W / q)));
    for (int i = 1; i <= n; ++i) L.xs.push_back(xcur + W * i / n);
    L.xs.back() = to;
    xcur = to;
  };
  for (auto& h : dom.holes) {
    double lo = h.s - w, hi = h.s + w;
    if (lo < -X - 1e-12 || hi > X + 1e-12)
      fail(ErrKind::mesh, "hole patch crosses the lateral cut; enlarge the lateral "
                          "margin used when placing holes");
    filler(lo);
    int first = static_cast<int>(L.xs.size()) - 1;
    for (int i = 1; i <= n_s; ++i) L.xs.push_back(lo + 2.0 * w * i / n_s);
    L.xs.back() = hi;
    xcur = hi;
    L.patch_cols.push_back({first, first + n_s});
  }
  filler(X);
  return L;
}

// Rows marching from the band edge to the target wall, coarsening columns on
// the way. dir = +1 towards y = d, -1 towards y = 0.
void cascade(MeshBuilder& b, std::vector<int> ids, std::vector<double> xs,
             double y_start, double y_wall, int dir, double h_far) {
  double y = y_start;
  double room = std::abs(y_wall - y_start);
  auto max_pitch = [&]() {
    double p = 0;
    for (size_t i = 0; i + 1 < xs.size(); ++i) p = std::max(p, xs[i + 1] - xs[i]);
    return p;
  };
  double p = max_pitch();
  while (xs.size() > 2 && 2.0 * p <= 1.001 * h_far && room > 2.5 * p) {
    y += dir * p;
    room -= p;
    transition_row(b, ids, xs, y);
    p = max_pitch();
  }
  int rows = std::max(1, static_cast<int>(std::lround(room / p)));
  for (int r = 1; r <= rows; ++r) {
    double yt = r == rows ? y_wall : y + dir * room * r / rows;
    std::vector<int> top(ids.size());
    for (size_t i = 0; i < xs.size(); ++i) top[i] = b.node(xs[i], yt);
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
      if (dir > 0)
        split_quad(b, ids[i], ids[i + 1], top[i + 1], top[i], DiagMode::parity,
                   static_cast<int>(i) + r, {});
      else
        split_quad(b, top[i], top[i + 1], ids[i + 1], ids[i], DiagMode::parity,
                   static_cast<int>(i) + r, {});
    }
    ids = std::move(top);
  }
}

TriMesh structured_perforated(const PerforatedDomain& dom, const MeshOptions& opt) {
  const double X = dom.strip.X, d = dom.strip.d, y0 = dom.curve.y0;
  // Band half-width: half the inter-hole gap, clamped away from the walls.
  if (!dom.family.shape.is_circle)
    fail(ErrKind::config,
         "strip meshers only support circular holes; import a mesh otherwise");
  double gap = std::numeric_limits<double>::max();
  for (size_t i = 0; i + 1 < dom.holes.size(); ++i)
    gap = std::min(gap, dom.holes[i + 1].s - dom.holes[i].s);
  if (dom.holes.size() == 1) gap = 2.0 * dom.cfg.spacing_factor * dom.eps;
  double w = std::min(0.5 * gap, 0.92 * std::min(y0, d - y0));
  double r = dom.hole_outradius(dom.holes[0]);
  if (r > 0.8 * w)
    fail(ErrKind::mesh, "holes too large for the structured band (radius vs half-gap); "
                        "geometry needs a general mesher");
  int n_s = opt.band_columns;
  if (n_s < 8 || (n_s & (n_s - 1)) != 0)
    fail(ErrKind::config, "band_columns must be a power of two >= 8");

  double h_hole = opt.h_hole > 0 ? opt.h_hole : M_PI * r / 8.0;
  int n_req = std::max(opt.min_hole_segments,
                       static_cast<int>(std::ceil(2.0 * M_PI * r / h_hole)));

  BandLayout L = band_layout(dom, w, n_s);
  MeshBuilder b;

  // Band rows: n_s + 1 lines, y0 exactly in the middle.  Nodes strictly
  // inside a patch block are never created: the block interior belongs to the
  // O-grid, and unused grid nodes would be left orphaned.
  const double q = 2.0 * w / n_s;
  auto inside_block = [&L](int col) {
    for (auto& [f, l] : L.patch_cols)
      if (col > f && col < l) return true;
    return false;
  };
  std::vector<std::vector<int>> row_ids(static_cast<size_t>(n_s) + 1);
  std::vector<double> ys(static_cast<size_t>(n_s) + 1);
  for (int j = 0; j <= n_s; ++j) {
    ys[static_cast<size_t>(j)] = j == n_s / 2 ? y0 : y0 + (j - n_s / 2) * q;
    auto& row = row_ids[static_cast<size_t>(j)];
    row.assign(L.xs.size(), -1);
    for (size_t i = 0; i < L.xs.size(); ++i)
      if (j == 0 || j == n_s || !inside_block(static_cast<int>(i)))
        row[i] = b.node(L.xs[i], ys[static_cast<size_t>(j)]);
  }

  // Fill band cells, skipping patch interiors.
  std::vector<std::pair<int, int>> patch_span = L.patch_cols;
  auto in_patch = [&](int col) {
    for (auto& [f, l] : patch_span)
      if (col >= f && col < l) return true;
    return false;
  };
  for (int j = 0; j < n_s; ++j)
    for (size_t i = 0; i + 1 < L.xs.size(); ++i) {
      if (in_patch(static_cast<int>(i))) continue;
      split_quad(b, row_ids[static_cast<size_t>(j)][i],
                 row_ids[static_cast<size_t>(j)][i + 1],
                 row_ids[static_cast<size_t>(j) + 1][i + 1],
                 row_ids[static_cast<size_t>(j) + 1][i], DiagMode::parity,
                 static_cast<int>(i) + j, {});
    }

  // O-grid patches: boundary loop ccw from bottom-left corner of each block.
  for (size_t k = 0; k < dom.holes.size(); ++k) {
    auto [f, l] = patch_span[k];
    std::vector<int> loop;
    loop.reserve(static_cast<size_t>(4 * n_s));
    for (int i = f; i < l; ++i) loop.push_back(row_ids[0][static_cast<size_t>(i)]);
    for (int j = 0; j < n_s; ++j)
      loop.push_back(row_ids[static_cast<size_t>(j)][static_cast<size_t>(l)]);
    for (int i = l; i > f; --i)
      loop.push_back(row_ids[static_cast<size_t>(n_s)][static_cast<size_t>(i)]);
    for (int j = n_s; j > 0; --j)
      loop.push_back(row_ids[static_cast<size_t>(j)][static_cast<size_t>(f)]);
    const Hole& h = dom.holes[k];
    ogrid_patch(b, h.y, w, loop, dom.hole_outradius(h),
                h.bc == HoleBC::dirichlet ? kTagHoleDirichlet : kTagHoleRobin, n_req,
                opt.ring_growth, DiagMode::shorter, opt.fill_holes);
  }

  cascade(b, row_ids[static_cast<size_t>(n_s)], L.xs, ys[static_cast<size_t>(n_s)], d,
          +1, opt.h_far);
  cascade(b, row_ids[0], L.xs, ys[0], 0.0, -1, opt.h_far);

  TriMesh m = std::move(b.m);
  ClassifyOptions co;
  co.x_lo = -X; co.x_hi = X; co.y_lo = 0.0; co.y_hi = d;
  co.y_curve = y0;
  co.dom = &dom;
  co.curve_edges = opt.fill_holes;  // filled meshes carry the interface
  classify_and_tag(m, co);
  return m;
}

}  // namespace

TriMesh generate_mesh(const PerforatedDomain& dom, const MeshOptions& opt) {
  if (dom.holes.empty())
    return generate_homogenized_mesh(dom.strip, dom.curve, opt.h_far, opt);
  TriMesh m;
  if (dom.curve.kind == CurveSpec::Kind::straight) {
    m = structured_perforated(dom, opt);
  } else {
    if (opt.fill_holes)
      fail(ErrKind::config, "fill_holes is only supported on the structured path");
    m = delaunay_strip_mesh(dom, opt);
  }
  validate_mesh(m);
  if (opt.check_quality) {
    MeshQuality mq = mesh_quality(m);
    if (mq.min_angle_deg < opt.min_angle_deg)
      fail(ErrKind::quality,
           "mesh min angle " + std::to_string(mq.min_angle_deg) +
               " deg below the requested " + std::to_string(opt.min_angle_deg));
  }
  return m;
}

TriMesh generate_homogenized_mesh(const StripGeometry& strip, const CurveSpec& curve,
                                  double h, const MeshOptions& opt) {
  if (curve.kind != CurveSpec::Kind::straight) {
    PerforatedDomain dom;
    dom.strip = strip;
    dom.curve = curve;
    dom.eps = 1.0;
    MeshOptions o2 = opt;
    o2.h_far = h;
    return delaunay_strip_mesh(dom, o2);
  }
  const double X = strip.X, d = strip.d, y0 = curve.y0;
  if (!(y0 > 0.0 && y0 < d))
    fail(ErrKind::geometry, "curve line must lie strictly inside the strip");
  MeshBuilder b;
  int nc = std::max(2, 2 * static_cast<int>(std::lround(X / h)));
  std::vector<double> xs = linspace_sym(-X, X, nc);
  // Two even-count vertical runs so the curve line (and its midpoints) are
  // mesh lines.
  auto vrun = [&](double lo, double hi) {
    int n = std::max(2, 2 * static_cast<int>(std::lround((hi - lo) / (2.0 * h))));
    return linspace_sym(lo, hi, n);
  };
  std::vector<double> ys = vrun(0.0, y0);
  std::vector<double> up = vrun(y0, d);
  ys.insert(ys.end(), up.begin() + 1, up.end());

  std::vector<int> ids(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) ids[i] = b.node(xs[i], ys[0]);
  for (size_t jr = 1; jr < ys.size(); ++jr) {
    std::vector<int> top(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) top[i] = b.node(xs[i], ys[jr]);
    for (size_t i = 0; i + 1 < xs.size(); ++i)
      split_quad(b, ids[i], ids[i + 1], top[i + 1], top[i], DiagMode::parity,
                 static_cast<int>(i + jr), {});
    ids = std::move(top);
  }
  TriMesh m = std::move(b.m);
  ClassifyOptions co;
  co.x_lo = -X; co.x_hi = X; co.y_lo = 0.0; co.y_hi = d;
  co.y_curve = y0;
  co.curve_edges = true;
  classify_and_tag(m, co);
  validate_mesh(m);
  if (opt.check_quality) {
    MeshQuality mq = mesh_quality(m);
    if (mq.min_angle_deg < opt.min_angle_deg)
      fail(ErrKind::quality, "homogenized mesh min angle below threshold");
  }
  return m;
}

}  // namespace striphomog
