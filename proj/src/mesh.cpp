#include "striphomog/mesh.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "striphomog/errors.hpp"

namespace striphomog {

double TriMesh::total_area() const {
  double acc = 0.0;
  for (int t = 0; t < n_tri(); ++t) acc += tri_area(t);
  return acc;
}

MeshQuality mesh_quality(const TriMesh& m) {
  MeshQuality q;
  q.n_nodes = m.n_nodes();
  q.n_tri = m.n_tri();
  q.min_angle_deg = 180.0;
  q.max_angle_deg = 0.0;
  q.min_area = std::numeric_limits<double>::infinity();
  q.min_edge = std::numeric_limits<double>::infinity();
  q.max_edge = 0.0;
  for (int t = 0; t < m.n_tri(); ++t) {
    const Vec2 p[3] = {m.xy[m.tri[t][0]], m.xy[m.tri[t][1]], m.xy[m.tri[t][2]]};
    const double area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]);
    q.min_area = std::min(q.min_area, area);
    q.total_area += area;
    for (int i = 0; i < 3; ++i) {
      const Vec2 e1 = p[(i + 1) % 3] - p[i];
      const Vec2 e2 = p[(i + 2) % 3] - p[i];
      const double len = e1.norm();
      q.min_edge = std::min(q.min_edge, len);
      q.max_edge = std::max(q.max_edge, len);
      const double ang =
          std::atan2(std::abs(e1.cross(e2)), e1.dot(e2)) * 180.0 / 3.14159265358979323846;
      q.min_angle_deg = std::min(q.min_angle_deg, ang);
      q.max_angle_deg = std::max(q.max_angle_deg, ang);
    }
  }
  if (m.n_tri() == 0) {
    q.min_angle_deg = q.max_angle_deg = 0.0;
    q.min_area = q.min_edge = 0.0;
  }
  return q;
}

void validate_mesh(const TriMesh& m) {
  const int nn = m.n_nodes();
  if (static_cast<int>(m.node_tag.size()) != nn)
    fail(ErrKind::mesh, "node tag array size mismatch");

  std::vector<char> used(nn, 0);
  std::map<std::pair<int, int>, int> edge_count;
  for (int t = 0; t < m.n_tri(); ++t) {
    for (int i = 0; i < 3; ++i) {
      const int v = m.tri[t][i];
      if (v < 0 || v >= nn)
        fail(ErrKind::mesh, "triangle " + std::to_string(t) + " references node " +
                                std::to_string(v) + " out of range");
      used[v] = 1;
    }
    if (m.tri_area(t) <= 0.0)
      fail(ErrKind::mesh, "triangle " + std::to_string(t) + " is degenerate or flipped");
    for (int i = 0; i < 3; ++i) {
      int a = m.tri[t][i], b = m.tri[t][(i + 1) % 3];
      if (a > b) std::swap(a, b);
      ++edge_count[{a, b}];
    }
  }
  for (const auto& [e, c] : edge_count)
    if (c > 2)
      fail(ErrKind::mesh, "edge (" + std::to_string(e.first) + "," +
                              std::to_string(e.second) + ") shared by " +
                              std::to_string(c) + " triangles");

  for (const BoundaryEdge& be : m.bedge) {
    if (be.a < 0 || be.a >= nn || be.b < 0 || be.b >= nn)
      fail(ErrKind::mesh, "boundary edge references node out of range");
    int a = be.a, b = be.b;
    if (a > b) std::swap(a, b);
    const auto it = edge_count.find({a, b});
    if (it == edge_count.end())
      fail(ErrKind::mesh, "tagged edge (" + std::to_string(a) + "," +
                              std::to_string(b) + ") is not a mesh edge");
    const int want = (be.tag == kTagCurve) ? 2 : 1;
    if (it->second != want)
      fail(ErrKind::mesh, "tagged edge (" + std::to_string(a) + "," +
                              std::to_string(b) + ") has " +
                              std::to_string(it->second) + " adjacent triangles, want " +
                              std::to_string(want));
  }

  for (int v = 0; v < nn; ++v)
    if (!used[v] && m.n_tri() > 0)
      fail(ErrKind::mesh, "orphan node " + std::to_string(v));
}

void write_mesh(const TriMesh& m, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) fail(ErrKind::io, "cannot open '" + path + "' for writing");
  std::fprintf(f, "strip-homog-mesh v1\n");
  std::fprintf(f, "nodes %d\n", m.n_nodes());
  for (int i = 0; i < m.n_nodes(); ++i)
    std::fprintf(f, "%.17g %.17g %d\n", m.xy[i].x, m.xy[i].y, m.node_tag[i]);
  std::fprintf(f, "triangles %d\n", m.n_tri());
  for (const auto& t : m.tri) std::fprintf(f, "%d %d %d\n", t[0], t[1], t[2]);
  std::fprintf(f, "bedges %zu\n", m.bedge.size());
  for (const BoundaryEdge& e : m.bedge)
    std::fprintf(f, "%d %d %d\n", e.a, e.b, e.tag);
  if (std::fclose(f) != 0) fail(ErrKind::io, "write to '" + path + "' failed");
}

TriMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrKind::io, "cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);
  if (header != "strip-homog-mesh v1")
    fail(ErrKind::io, "'" + path + "': bad header '" + header + "'");

  TriMesh m;
  std::string word;
  int n = 0;
  if (!(in >> word >> n) || word != "nodes" || n < 0)
    fail(ErrKind::io, "'" + path + "': expected 'nodes N'");
  m.xy.resize(n);
  m.node_tag.resize(n);
  for (int i = 0; i < n; ++i)
    if (!(in >> m.xy[i].x >> m.xy[i].y >> m.node_tag[i]))
      fail(ErrKind::io, "'" + path + "': truncated node list");

  if (!(in >> word >> n) || word != "triangles" || n < 0)
    fail(ErrKind::io, "'" + path + "': expected 'triangles M'");
  m.tri.resize(n);
  for (int i = 0; i < n; ++i)
    if (!(in >> m.tri[i][0] >> m.tri[i][1] >> m.tri[i][2]))
      fail(ErrKind::io, "'" + path + "': truncated triangle list");

  if (!(in >> word >> n) || word != "bedges" || n < 0)
    fail(ErrKind::io, "'" + path + "': expected 'bedges B'");
  m.bedge.resize(n);
  for (int i = 0; i < n; ++i)
    if (!(in >> m.bedge[i].a >> m.bedge[i].b >> m.bedge[i].tag))
      fail(ErrKind::io, "'" + path + "': truncated edge list");

  validate_mesh(m);
  return m;
}

}  // namespace striphomog
