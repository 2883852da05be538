// Conforming Delaunay mesher: incremental Bowyer-Watson insertion whose
// cavities never cross recovered input segments, midpoint segment recovery
// (with snapping onto owning circles), region labeling by flood fill, and
// Ruppert-style refinement (encroached-segment splits + circumcenter
// insertion) down to the requested angle and size field.
//
// Input segments are expected to form closed loops (rectangle outline, hole
// circles, interface circles), which rules out cavity wrap-around at free
// segment ends; a simple-loop check guards the assumption.

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <unordered_map>
#include <vector>

#include "mesh_internal.hpp"
#include "striphomog/errors.hpp"
#include "striphomog/meshgen.hpp"

namespace striphomog {

namespace {

long double orient2d(Vec2 a, Vec2 b, Vec2 c) {
  return (static_cast<long double>(b.x) - a.x) * (static_cast<long double>(c.y) - a.y) -
         (static_cast<long double>(b.y) - a.y) * (static_cast<long double>(c.x) - a.x);
}

// d strictly inside the circumcircle of ccw triangle (a,b,c)
bool in_circle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  long double adx = a.x - d.x, ady = a.y - d.y;
  long double bdx = b.x - d.x, bdy = b.y - d.y;
  long double cdx = c.x - d.x, cdy = c.y - d.y;
  long double al = adx * adx + ady * ady;
  long double bl = bdx * bdx + bdy * bdy;
  long double cl = cdx * cdx + cdy * cdy;
  long double det = adx * (bdy * cl - cdy * bl) - ady * (bdx * cl - cdx * bl) +
                    al * (bdx * cdy - cdx * bdy);
  return det > 0.0L;
}

Vec2 circumcenter(Vec2 a, Vec2 b, Vec2 c) {
  double bx = b.x - a.x, by = b.y - a.y, cx = c.x - a.x, cy = c.y - a.y;
  double bl = bx * bx + by * by, cl = cx * cx + cy * cy;
  double den = 2.0 * (bx * cy - by * cx);
  if (den == 0.0) return {0.5 * (a.x + c.x), 0.5 * (a.y + c.y)};
  return {a.x + (cy * bl - by * cl) / den, a.y + (bx * cl - cx * bl) / den};
}

double tri_min_angle(Vec2 a, Vec2 b, Vec2 c) {
  double la = (b - c).norm(), lb = (c - a).norm(), lc = (a - b).norm();
  double lmax = std::max({la, lb, lc});
  double smin = std::min({la, lb, lc});
  double lmid = la + lb + lc - lmax - smin;
  if (smin <= 0.0 || lmid <= 0.0 || lmax <= 0.0) return 0.0;
  double area2 = std::abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
  return std::asin(std::min(1.0, area2 / (lmid * lmax))) * 180.0 / M_PI;
}

struct DT {
  struct Tri {
    int v[3];
    int adj[3];  // neighbor across edge (v[e], v[(e+1)%3]); -1 at the hull
    char alive = 1;
    char label = 0;  // 0 interior (kept), 1 outside, 2 hole cavity
  };
  struct Wall {
    int tag = 0;
    int circle = -1;
  };

  std::vector<Vec2> p;
  std::vector<int> vtri;  // one alive incident triangle per vertex
  std::vector<Tri> t;
  std::vector<int> mark;  // cavity membership epochs
  int epoch = 0;
  std::map<std::pair<int, int>, Wall> walls;
  double scale = 1.0, merge_tol = 0.0;
  int last_tri = 0;
  long long inserted = 0;

  static std::pair<int, int> ekey(int a, int b) {
    return {std::min(a, b), std::max(a, b)};
  }
  bool is_wall(int a, int b) const { return walls.count(ekey(a, b)) != 0; }

  int new_tri(int a, int b, int c, char label) {
    t.push_back({{a, b, c}, {-1, -1, -1}, 1, label});
    mark.push_back(0);
    int id = static_cast<int>(t.size()) - 1;
    vtri[static_cast<size_t>(a)] = vtri[static_cast<size_t>(b)] =
        vtri[static_cast<size_t>(c)] = id;
    return id;
  }

  void init(Vec2 lo, Vec2 hi) {
    double D = std::max({hi.x - lo.x, hi.y - lo.y, 1e-30});
    scale = D;
    merge_tol = 1e-11 * D;
    p = {{lo.x - 4 * D, lo.y - 4 * D},
         {hi.x + 4 * D, lo.y - 4 * D},
         {hi.x + 4 * D, hi.y + 4 * D},
         {lo.x - 4 * D, hi.y + 4 * D}};
    vtri.assign(4, 0);
    // two ccw triangles sharing the diagonal (0,2)
    new_tri(0, 1, 2, 0);
    new_tri(0, 2, 3, 0);
    t[0].adj[2] = 1;  // edge (2,0)
    t[1].adj[0] = 0;  // edge (0,2)
  }

  int edge_index(int ti, int a, int b) const {
    for (int e = 0; e < 3; ++e)
      if (t[static_cast<size_t>(ti)].v[e] == a &&
          t[static_cast<size_t>(ti)].v[(e + 1) % 3] == b)
        return e;
    return -1;
  }

  bool contains(int ti, Vec2 q) const {
    const Tri& tr = t[static_cast<size_t>(ti)];
    for (int e = 0; e < 3; ++e)
      if (orient2d(p[static_cast<size_t>(tr.v[e])],
                   p[static_cast<size_t>(tr.v[(e + 1) % 3])], q) < 0.0L)
        return false;
    return true;
  }

  int locate(Vec2 q, int hint) const {
    int cur = hint;
    if (cur < 0 || cur >= static_cast<int>(t.size()) ||
        !t[static_cast<size_t>(cur)].alive) {
      cur = -1;
      for (int i = static_cast<int>(t.size()) - 1; i >= 0; --i)
        if (t[static_cast<size_t>(i)].alive) { cur = i; break; }
      if (cur < 0) fail(ErrKind::mesh, "empty triangulation");
    }
    size_t steps = 0, cap = 4 * t.size() + 64;
    while (steps++ < cap) {
      const Tri& tr = t[static_cast<size_t>(cur)];
      int go = -2;
      for (int e = 0; e < 3; ++e) {
        if (orient2d(p[static_cast<size_t>(tr.v[e])],
                     p[static_cast<size_t>(tr.v[(e + 1) % 3])], q) < 0.0L) {
          go = tr.adj[e];
          break;
        }
      }
      if (go == -2) return cur;  // no separating edge: inside
      if (go < 0) break;         // stepped out of the hull
      cur = go;
    }
    for (int i = static_cast<int>(t.size()) - 1; i >= 0; --i)
      if (t[static_cast<size_t>(i)].alive && contains(i, q)) return i;
    fail(ErrKind::mesh, "point location failed in Delaunay mesher");
  }

  // Insert q; returns its vertex index (an existing one if q coincides with a
  // vertex of the containing triangle).  Cavity growth stops at wall edges.
  int insert(Vec2 q, std::vector<int>* created) {
    int ti = locate(q, last_tri);
    {
      const Tri& tr0 = t[static_cast<size_t>(ti)];
      for (int e = 0; e < 3; ++e) {
        Vec2 dv = p[static_cast<size_t>(tr0.v[e])] - q;
        if (dv.norm2() <= merge_tol * merge_tol) return tr0.v[e];
      }
    }
    ++inserted;
    ++epoch;

    std::vector<int> cav = {ti};
    mark[static_cast<size_t>(ti)] = epoch;
    struct BEdge {
      int a, b, outer;
      char label;
    };
    std::vector<BEdge> bound;
    for (size_t k = 0; k < cav.size(); ++k) {
      const Tri tr = t[static_cast<size_t>(cav[k])];
      for (int e = 0; e < 3; ++e) {
        int a = tr.v[e], b = tr.v[(e + 1) % 3];
        int nb = tr.adj[e];
        if (nb >= 0 && mark[static_cast<size_t>(nb)] == epoch) continue;  // interior
        bool grow = false;
        if (nb >= 0 && !is_wall(a, b)) {
          const Tri& nt = t[static_cast<size_t>(nb)];
          grow = in_circle(p[static_cast<size_t>(nt.v[0])], p[static_cast<size_t>(nt.v[1])],
                           p[static_cast<size_t>(nt.v[2])], q);
        }
        if (grow) {
          mark[static_cast<size_t>(nb)] = epoch;
          cav.push_back(nb);
        } else {
          bound.push_back({a, b, nb, tr.label});
        }
      }
    }

    int qi = static_cast<int>(p.size());
    p.push_back(q);
    vtri.push_back(-1);
    for (int ci : cav) t[static_cast<size_t>(ci)].alive = 0;

    std::unordered_map<int, int> by_a, by_b;
    std::vector<int> fresh;
    fresh.reserve(bound.size());
    for (auto& be : bound) {
      if (by_a.count(be.a) || by_b.count(be.b))
        fail(ErrKind::mesh, "cavity boundary is not a simple loop (degenerate input)");
      int id = new_tri(be.a, be.b, qi, be.label);
      t[static_cast<size_t>(id)].adj[0] = be.outer;
      if (be.outer >= 0) {
        int oe = edge_index(be.outer, be.b, be.a);
        if (oe >= 0) t[static_cast<size_t>(be.outer)].adj[oe] = id;
      }
      by_a.emplace(be.a, id);
      by_b.emplace(be.b, id);
      fresh.push_back(id);
    }
    for (int id : fresh) {
      const Tri& nt = t[static_cast<size_t>(id)];
      t[static_cast<size_t>(id)].adj[1] = by_a.at(nt.v[1]);  // edge (b, q)
      t[static_cast<size_t>(id)].adj[2] = by_b.at(nt.v[0]);  // edge (q, a)
    }
    if (!fresh.empty()) last_tri = fresh.back();
    if (created) *created = std::move(fresh);
    return qi;
  }

  // Rotate around vertex a; calls fn(tri_id) for each alive incident triangle.
  template <class F>
  void around_vertex(int a, F&& fn) const {
    int start = vtri[static_cast<size_t>(a)];
    int cur = start, guard = 0;
    while (cur >= 0 && ++guard < 100000) {
      const Tri& tr = t[static_cast<size_t>(cur)];
      fn(cur);
      int e = tr.v[0] == a ? 0 : (tr.v[1] == a ? 1 : 2);
      cur = tr.adj[e];
      if (cur == start) return;
    }
    if (cur >= 0) fail(ErrKind::mesh, "vertex circulation did not close");
    // hit the hull: rotate the other way from start
    cur = start;
    guard = 0;
    while (cur >= 0 && ++guard < 100000) {
      const Tri& tr = t[static_cast<size_t>(cur)];
      int e = tr.v[0] == a ? 0 : (tr.v[1] == a ? 1 : 2);
      int prev = tr.adj[(e + 2) % 3];
      if (prev < 0) return;
      fn(prev);
      cur = prev;
    }
  }

  bool edge_exists(int a, int b) const {
    bool found = false;
    around_vertex(a, [&](int ti) {
      const Tri& tr = t[static_cast<size_t>(ti)];
      if (tr.v[0] == b || tr.v[1] == b || tr.v[2] == b) found = true;
    });
    return found;
  }

  void tris_of_edge(int a, int b, int out[2]) const {
    out[0] = out[1] = -1;
    int n = 0;
    around_vertex(a, [&](int ti) {
      const Tri& tr = t[static_cast<size_t>(ti)];
      if ((tr.v[0] == b || tr.v[1] == b || tr.v[2] == b) && n < 2) {
        if (n == 0 || out[0] != ti) out[n++] = ti;
      }
    });
  }
};

}  // namespace

TriMesh delaunay_mesh(const DelaunayInput& input) {
  if (input.points.size() < 3)
    fail(ErrKind::mesh, "Delaunay input needs at least 3 points");

  Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Vec2 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  for (auto& q : input.points) {
    lo.x = std::min(lo.x, q.x); lo.y = std::min(lo.y, q.y);
    hi.x = std::max(hi.x, q.x); hi.y = std::max(hi.y, q.y);
  }
  DT dt;
  dt.init(lo, hi);

  std::vector<int> idx_of(input.points.size());
  for (size_t i = 0; i < input.points.size(); ++i)
    idx_of[i] = dt.insert(input.points[i], nullptr);

  // ---- segment recovery ----------------------------------------------------
  auto snap = [&](Vec2 m, int circ) {
    if (circ < 0) return m;
    const auto& c = input.circles[static_cast<size_t>(circ)];
    Vec2 d = m - c.c;
    double n = d.norm();
    if (n == 0.0) return m;
    return c.c + d * (c.r / n);
  };
  std::deque<std::array<int, 4>> segq;  // a, b, tag, circle
  for (auto& s : input.segments)
    segq.push_back({idx_of[static_cast<size_t>(s.a)], idx_of[static_cast<size_t>(s.b)],
                    s.tag, s.circle});
  long long seg_guard = 0;
  while (!segq.empty()) {
    auto [a, b, tag, circ] = segq.front();
    segq.pop_front();
    if (a == b) fail(ErrKind::mesh, "segment collapsed during recovery");
    if (dt.edge_exists(a, b)) {
      dt.walls[DT::ekey(a, b)] = {tag, circ};
      continue;
    }
    if ((dt.p[static_cast<size_t>(a)] - dt.p[static_cast<size_t>(b)]).norm() <
        1e-6 * dt.scale)
      fail(ErrKind::mesh, "segment recovery stalled (crossing or duplicate input?)");
    Vec2 m = snap((dt.p[static_cast<size_t>(a)] + dt.p[static_cast<size_t>(b)]) / 2.0,
                  circ);
    int mi = dt.insert(m, nullptr);
    segq.push_back({a, mi, tag, circ});
    segq.push_back({mi, b, tag, circ});
    if (++seg_guard > 200000)
      fail(ErrKind::mesh, "segment recovery did not converge");
  }

  // ---- region labels ---------------------------------------------------
  {
    std::vector<int> stack;
    auto flood = [&](int seed_tri, char label) {
      if (seed_tri < 0) return;
      stack.push_back(seed_tri);
      while (!stack.empty()) {
        int ti = stack.back();
        stack.pop_back();
        DT::Tri& tr = dt.t[static_cast<size_t>(ti)];
        if (!tr.alive || tr.label == label) continue;
        tr.label = label;
        for (int e = 0; e < 3; ++e) {
          if (tr.adj[e] < 0) continue;
          if (dt.is_wall(tr.v[e], tr.v[(e + 1) % 3])) continue;
          if (dt.t[static_cast<size_t>(tr.adj[e])].label != label)
            stack.push_back(tr.adj[e]);
        }
      }
    };
    for (size_t i = 0; i < dt.t.size(); ++i) {
      auto& tr = dt.t[i];
      if (tr.alive && tr.label == 0 && (tr.v[0] < 4 || tr.v[1] < 4 || tr.v[2] < 4))
        flood(static_cast<int>(i), 1);
    }
    for (auto& seed : input.hole_seeds) flood(dt.locate(seed, dt.last_tri), 2);
  }

  // ---- refinement --------------------------------------------------------
  const double min_angle = input.min_angle_deg;
  auto bad = [&](int ti) {
    const DT::Tri& tr = dt.t[static_cast<size_t>(ti)];
    if (!tr.alive || tr.label != 0) return false;
    Vec2 a = dt.p[static_cast<size_t>(tr.v[0])], b = dt.p[static_cast<size_t>(tr.v[1])],
         c = dt.p[static_cast<size_t>(tr.v[2])];
    if (tri_min_angle(a, b, c) < min_angle) return true;
    if (input.size) {
      double lmax = std::max({(a - b).norm(), (b - c).norm(), (c - a).norm()});
      if (lmax > 1.34 * input.size((a + b + c) / 3.0)) return true;
    }
    return false;
  };

  std::deque<int> queue;
  for (size_t i = 0; i < dt.t.size(); ++i)
    if (bad(static_cast<int>(i))) queue.push_back(static_cast<int>(i));

  auto split_wall = [&](std::pair<int, int> key) {
    DT::Wall w = dt.walls.at(key);
    dt.walls.erase(key);
    int a = key.first, b = key.second;
    Vec2 m = snap((dt.p[static_cast<size_t>(a)] + dt.p[static_cast<size_t>(b)]) / 2.0,
                  w.circle);
    std::vector<int> fresh;
    int mi = dt.insert(m, &fresh);
    dt.walls[DT::ekey(a, mi)] = w;
    dt.walls[DT::ekey(mi, b)] = w;
    for (int id : fresh)
      if (bad(id)) queue.push_back(id);
  };

  // q strictly inside the diametral circle of (a,b)?
  auto encroaches = [&](Vec2 q, int a, int b) {
    Vec2 pa = dt.p[static_cast<size_t>(a)] - q, pb = dt.p[static_cast<size_t>(b)] - q;
    return pa.x * pb.x + pa.y * pb.y < 0.0;
  };

  const long long budget = input.max_insertions;
  while (!queue.empty()) {
    if (dt.inserted > budget)
      fail(ErrKind::mesh, "mesh refinement exceeded the insertion budget");
    int ti = queue.front();
    queue.pop_front();
    if (!bad(ti)) continue;
    const DT::Tri tr = dt.t[static_cast<size_t>(ti)];
    Vec2 cc = circumcenter(dt.p[static_cast<size_t>(tr.v[0])],
                           dt.p[static_cast<size_t>(tr.v[1])],
                           dt.p[static_cast<size_t>(tr.v[2])]);
    // prefer splitting a wall the circumcenter encroaches
    std::pair<int, int> hit{-1, -1};
    double best = std::numeric_limits<double>::max();
    for (auto& kv : dt.walls) {
      if (!encroaches(cc, kv.first.first, kv.first.second)) continue;
      Vec2 mid = (dt.p[static_cast<size_t>(kv.first.first)] +
                  dt.p[static_cast<size_t>(kv.first.second)]) /
                 2.0;
      double dd = (mid - cc).norm2();
      if (dd < best) { best = dd; hit = kv.first; }
    }
    if (hit.first >= 0) {
      split_wall(hit);
      if (dt.t[static_cast<size_t>(ti)].alive) queue.push_back(ti);
      continue;
    }
    int loc = dt.locate(cc, ti);
    if (dt.t[static_cast<size_t>(loc)].label != 0) {
      // circumcenter escaped the region: split one of the triangle's own
      // wall edges, or bisect its longest edge as a last resort
      bool done = false;
      for (int e = 0; e < 3 && !done; ++e) {
        auto key = DT::ekey(tr.v[e], tr.v[(e + 1) % 3]);
        if (dt.walls.count(key)) {
          split_wall(key);
          done = true;
        }
      }
      if (!done) {
        Vec2 a = dt.p[static_cast<size_t>(tr.v[0])], b = dt.p[static_cast<size_t>(tr.v[1])],
             c = dt.p[static_cast<size_t>(tr.v[2])];
        Vec2 m = (a + b) / 2.0;
        double l = (a - b).norm2();
        if ((b - c).norm2() > l) { m = (b + c) / 2.0; l = (b - c).norm2(); }
        if ((c - a).norm2() > l) m = (c + a) / 2.0;
        std::vector<int> fresh;
        dt.insert(m, &fresh);
        for (int id : fresh)
          if (bad(id)) queue.push_back(id);
      }
      continue;
    }
    std::vector<int> fresh;
    dt.insert(cc, &fresh);
    // local encroachment pass over walls appearing on the new triangles
    std::vector<std::pair<int, int>> to_split;
    for (int id : fresh) {
      const DT::Tri& nt = dt.t[static_cast<size_t>(id)];
      if (!nt.alive) continue;
      for (int e = 0; e < 3; ++e) {
        auto key = DT::ekey(nt.v[e], nt.v[(e + 1) % 3]);
        if (!dt.walls.count(key)) continue;
        int opp = nt.v[(e + 2) % 3];
        if (encroaches(dt.p[static_cast<size_t>(opp)], key.first, key.second))
          to_split.push_back(key);
      }
    }
    std::sort(to_split.begin(), to_split.end());
    to_split.erase(std::unique(to_split.begin(), to_split.end()), to_split.end());
    for (auto& key : to_split)
      if (dt.walls.count(key)) split_wall(key);
    for (int id : fresh)
      if (bad(id)) queue.push_back(id);
  }

  // ---- extraction ---------------------------------------------------------
  TriMesh m;
  std::vector<int> remap(dt.p.size(), -1);
  auto use_node = [&](int v) {
    int& r = remap[static_cast<size_t>(v)];
    if (r < 0) {
      r = static_cast<int>(m.xy.size());
      m.xy.push_back(dt.p[static_cast<size_t>(v)]);
      m.node_tag.push_back(kTagInterior);
    }
    return r;
  };
  for (auto& tr : dt.t) {
    if (!tr.alive || tr.label != 0) continue;
    m.tri.push_back({use_node(tr.v[0]), use_node(tr.v[1]), use_node(tr.v[2])});
  }
  if (m.tri.empty())
    fail(ErrKind::mesh, "Delaunay mesher produced no interior region (open boundary?)");

  auto rank_of = [](int tg) {
    switch (tg) {
      case kTagHoleDirichlet:
      case kTagHoleRobin: return 4;
      case kTagWall: return 3;
      case kTagLateral: return 2;
      case kTagCurve: return 1;
      default: return 0;
    }
  };
  for (auto& kv : dt.walls) {
    int tt[2];
    dt.tris_of_edge(kv.first.first, kv.first.second, tt);
    int live = 0;
    for (int s = 0; s < 2; ++s)
      if (tt[s] >= 0 && dt.t[static_cast<size_t>(tt[s])].alive &&
          dt.t[static_cast<size_t>(tt[s])].label == 0)
        ++live;
    if (live == 0) continue;
    int a = remap[static_cast<size_t>(kv.first.first)];
    int b = remap[static_cast<size_t>(kv.first.second)];
    if (a < 0 || b < 0) continue;
    m.bedge.push_back({a, b, kv.second.tag});
    for (int v : {a, b})
      if (rank_of(kv.second.tag) > rank_of(m.node_tag[static_cast<size_t>(v)]))
        m.node_tag[static_cast<size_t>(v)] = kv.second.tag;
  }
  return m;
}

// ---- perforated strip via the Delaunay path --------------------------------

TriMesh delaunay_strip_mesh(const PerforatedDomain& dom, const MeshOptions& opt) {
  const double X = dom.strip.X, d = dom.strip.d;
  DelaunayInput in;
  const double h = opt.h_far;
  if (!(h > 0.0)) fail(ErrKind::config, "target edge length must be positive");

  if (!dom.holes.empty() && !dom.family.shape.is_circle)
    fail(ErrKind::config,
         "strip meshers only support circular holes; import a mesh otherwise");
  const double r_hole =
      dom.holes.empty() ? 0.0 : dom.hole_outradius(dom.holes[0]);
  const double h_hole =
      opt.h_hole > 0 ? opt.h_hole : (r_hole > 0 ? M_PI * r_hole / 8.0 : h);
  if (!dom.holes.empty()) {
    double per_hole = 2.0 * M_PI * r_hole / h_hole;
    if (per_hole * static_cast<double>(dom.holes.size()) > 400000.0)
      fail(ErrKind::mesh,
           "hole resolution infeasible at this (eps, eta); use the structured path "
           "or coarser targets");
  }

  auto add_side = [&](Vec2 a, Vec2 b, int tag) {
    int n = std::max(1, static_cast<int>(std::lround((b - a).norm() / h)));
    int first = static_cast<int>(in.points.size());
    for (int i = 0; i <= n; ++i)
      in.points.push_back(a + (b - a) * (static_cast<double>(i) / n));
    for (int i = 0; i < n; ++i)
      in.segments.push_back({first + i, first + i + 1, tag, -1});
  };
  add_side({-X, 0}, {X, 0}, kTagWall);
  add_side({X, 0}, {X, d}, kTagLateral);
  add_side({X, d}, {-X, d}, kTagWall);
  add_side({-X, d}, {-X, 0}, kTagLateral);

  for (auto& hole : dom.holes) {
    double rr = dom.hole_outradius(hole);
    int nc = std::max(opt.min_hole_segments,
                      static_cast<int>(std::ceil(2.0 * M_PI * rr / h_hole)));
    int ci = static_cast<int>(in.circles.size());
    in.circles.push_back({hole.y, rr});
    int first = static_cast<int>(in.points.size());
    for (int i = 0; i < nc; ++i) {
      double th = 2.0 * M_PI * i / nc;
      in.points.push_back({hole.y.x + rr * std::cos(th), hole.y.y + rr * std::sin(th)});
    }
    int tag = hole.bc == HoleBC::dirichlet ? kTagHoleDirichlet : kTagHoleRobin;
    for (int i = 0; i < nc; ++i)
      in.segments.push_back({first + i, first + (i + 1) % nc, tag, ci});
    in.hole_seeds.push_back(hole.y);
  }

  // The curve becomes an internal interface only in the unperforated strip;
  // with holes present it would thread through them.
  if (dom.holes.empty() && dom.curve.kind == CurveSpec::Kind::circle) {
    const Vec2 c = dom.curve.center;
    const double r = dom.curve.radius;
    if (!(c.y - r > 0.0 && c.y + r < d && std::abs(c.x) + r < X))
      fail(ErrKind::geometry, "curve circle must lie strictly inside the strip");
    int nc = std::max(24, static_cast<int>(std::ceil(2.0 * M_PI * r / h)));
    int ci = static_cast<int>(in.circles.size());
    in.circles.push_back({c, r});
    int first = static_cast<int>(in.points.size());
    for (int i = 0; i < nc; ++i) {
      double th = 2.0 * M_PI * i / nc;
      in.points.push_back({c.x + r * std::cos(th), c.y + r * std::sin(th)});
    }
    for (int i = 0; i < nc; ++i)
      in.segments.push_back({first + i, first + (i + 1) % nc, kTagCurve, ci});
  } else if (dom.holes.empty() && dom.curve.kind == CurveSpec::Kind::sampled) {
    fail(ErrKind::config, "interface meshing of sampled curves is not supported");
  }

  std::vector<Vec2> centers;
  centers.reserve(dom.holes.size());
  for (auto& hole : dom.holes) centers.push_back(hole.y);
  in.size = [h, h_hole, r_hole, centers](Vec2 q) {
    double s = h;
    for (auto& c : centers) {
      double dd = (q - c).norm() - r_hole;
      s = std::min(s, std::max(h_hole, h_hole + 0.4 * dd));
    }
    return s;
  };
  in.min_angle_deg = opt.min_angle_deg;
  in.max_insertions = 2000000;

  TriMesh m = delaunay_mesh(in);
  validate_mesh(m);
  return m;
}

}  // namespace striphomog
