#pragma once

// Internals shared between the structured generators and the dispatchers.

#include <cmath>
#include <vector>

#include "striphomog/geometry.hpp"
#include "striphomog/mesh.hpp"
#include "striphomog/meshgen.hpp"

namespace striphomog {

struct MeshBuilder;

enum class DiagMode { shorter, parity, quadrant };

// Split quad (n00,n10,n11,n01) given in ccw order into two triangles.
// parity uses (i+j); quadrant picks the diagonal by the sign of the
// centroid product relative to sym_center (mirror-symmetric rule).
void split_quad(MeshBuilder& b, int n00, int n10, int n11, int n01, DiagMode mode,
                int parity, Vec2 sym_center);

// One column-coarsening row from (bottom_ids, bottom_xs) at height y_top.
// Pairs columns 2:1 (trailing group of 3 if the count is odd) and returns
// the top boundary ids/xs.
void transition_row(MeshBuilder& b, std::vector<int>& ids, std::vector<double>& xs,
                    double y_top);

// Plain 1:1 row at y_top.
void uniform_row(MeshBuilder& b, std::vector<int>& ids, const std::vector<double>& xs,
                 double y_top, DiagMode mode, Vec2 sym_center);

// O-grid filling of the square |x-c| <= w with a circular hole of radius
// r_hole: blended square-to-circle contours, geometric ring cascade with
// angular halving down to n_min, polygonized hole boundary tagged hole_tag.
// loop: 4*n_side boundary node ids, ccw starting at the bottom-left corner.
// fill: mesh the hole interior too (no boundary tags); node positions of the
// non-fill variant are reproduced bit-exactly.
void ogrid_patch(MeshBuilder& b, Vec2 center, double w, const std::vector<int>& loop,
                 double r_hole, int hole_tag, int n_min, double growth,
                 DiagMode mode, bool fill = false);

struct ClassifyOptions {
  double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
  double y_curve = std::nan("");   // tag nodes on this line with kTagCurve
  bool curve_edges = false;        // also emit tag-2 interface edges
  const PerforatedDomain* dom = nullptr;  // classify hole boundary loops
  double hole_radius_scale = 1.25;        // search radius multiplier
};

// Derives boundary edges from triangle adjacency, tags them (walls, lateral
// cuts, hole loops) and propagates tags to nodes.
void classify_and_tag(TriMesh& m, const ClassifyOptions& opt);

TriMesh delaunay_strip_mesh(const PerforatedDomain& dom, const MeshOptions& opt);

}  // namespace striphomog
