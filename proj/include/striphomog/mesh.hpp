#pragma once

// Triangle mesh container, tagging conventions, ASCII persistence, and
// quality/topology reporting.
//
// Tags (nodes and boundary/interface edges):
//   0 interior, 1 outer strip boundary (walls x2=0,d), 2 curve gamma,
//   3 hole boundary with Dirichlet condition, 4 hole boundary with Robin
//   condition, 5 lateral truncation cut x1=+-X.
// Edges tagged 2 are interface edges (two adjacent triangles); all other
// tagged edges are true boundary edges (one adjacent triangle).

#include <array>
#include <string>
#include <vector>

#include "striphomog/vec2.hpp"

namespace striphomog {

inline constexpr int kTagInterior = 0;
inline constexpr int kTagWall = 1;
inline constexpr int kTagCurve = 2;
inline constexpr int kTagHoleDirichlet = 3;
inline constexpr int kTagHoleRobin = 4;
inline constexpr int kTagLateral = 5;

struct BoundaryEdge {
  int a = 0, b = 0;
  int tag = 0;
};

struct TriMesh {
  std::vector<Vec2> xy;
  std::vector<int> node_tag;
  std::vector<std::array<int, 3>> tri;  // ccw
  std::vector<BoundaryEdge> bedge;

  int n_nodes() const { return static_cast<int>(xy.size()); }
  int n_tri() const { return static_cast<int>(tri.size()); }

  double tri_area(int t) const {
    const Vec2 a = xy[tri[t][0]], b = xy[tri[t][1]], c = xy[tri[t][2]];
    return 0.5 * (b - a).cross(c - a);
  }
  double total_area() const;
};

struct MeshQuality {
  double min_angle_deg = 0.0;
  double max_angle_deg = 0.0;
  double min_area = 0.0;
  double total_area = 0.0;
  double min_edge = 0.0;
  double max_edge = 0.0;
  int n_nodes = 0;
  int n_tri = 0;
};

MeshQuality mesh_quality(const TriMesh& m);

// Structural checks: positive areas, valid indices, edge-manifoldness
// (every edge in 1 or 2 triangles; tag-2 interface edges in exactly 2,
// other tagged edges in exactly 1), no orphan nodes.  Throws mesh errors.
void validate_mesh(const TriMesh& m);

// ASCII format "strip-homog-mesh v1", 17 significant digits; bitwise
// round-trip for finite doubles.
void write_mesh(const TriMesh& m, const std::string& path);
TriMesh read_mesh(const std::string& path);

}  // namespace striphomog
