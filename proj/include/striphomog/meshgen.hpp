#pragma once

// Mesh generators.
//
// Perforated strips with a straight curve and circular holes use a fully
// structured layout: per-hole O-grid square patches in a band around the
// curve, filler columns between patches, and 2:1 column-coarsening rows up
// to the far-field size.  This path is deterministic, keeps a 20+ degree
// angle floor by construction, and resolves exponentially small holes via
// geometric ring cascades with angular halving.
//
// Non-straight curves, polygonal hole shapes, and the homogenized mesh for
// a circle curve go through a constrained-Delaunay + refinement path.

#include <functional>
#include <utility>
#include <vector>

#include "striphomog/geometry.hpp"
#include "striphomog/mesh.hpp"

namespace striphomog {

struct MeshOptions {
  double h_far = 0.05;     // target far-field edge length
  double h_hole = 0.0;     // near-hole target; 0 means eps*eta*R2/4
  int band_columns = 16;   // structured path: columns per hole patch (power of 2)
  int min_hole_segments = 16;
  double ring_growth = 1.35;  // radial ratio of the O-grid ring cascade
  double min_angle_deg = 20.0;
  bool check_quality = true;
  // Mesh the hole interiors too (no hole boundary tags; curve interface
  // edges tagged).  All nodes of the non-filled mesh recur at identical
  // coordinates, so fields on the two meshes are comparable nodewise; used
  // for homogenized solves whose discretization error matches the
  // perforated solve far from the holes.  Structured (straight-curve)
  // path only.
  bool fill_holes = false;
};

// Mesh of the perforated strip.  Dirichlet/Robin hole boundaries are tagged
// 3/4, walls 1, lateral cuts 5; nodes exactly on a straight curve get tag 2.
TriMesh generate_mesh(const PerforatedDomain& dom, const MeshOptions& opt = {});

// Mesh of the unperforated strip with the curve as a tagged interface
// (edges and nodes tagged 2).  Straight curves produce a structured grid
// whose rows hit the curve height exactly.
TriMesh generate_homogenized_mesh(const StripGeometry& strip, const CurveSpec& curve,
                                  double h, const MeshOptions& opt = {});

// ---- periodic cell -----------------------------------------------------

struct CellMeshOptions {
  double h = 0.075;          // background pitch of the cell grid
  double H = 4.0;            // half-height of the truncated cell
  int square_intervals = 0;  // O-grid square side intervals (multiple of 4);
                             // 0 derives the count from h
  double ring_growth = 1.3;
  int min_hole_segments = 16;
};

struct CellMesh {
  TriMesh mesh;
  std::vector<std::pair<int, int>> periodic_pairs;  // (left id, right id)
  double H = 0.0;
  double eta = 0.0;
};

// Periodic cell {|xi1| < 3/2, |xi2| < H} with the circular hole of radius
// eta at the origin; lateral node pairs are matched exactly.  The mesh is
// symmetric under both coordinate reflections.
CellMesh generate_cell_mesh(double eta, const CellMeshOptions& opt = {});

// ---- flux cell -----------------------------------------------------------

// Annulus between the reference hole shape (boundary tag 3) and the circle
// of the given outer radius (tag 1).  Circle shapes are meshed with a
// structured polar grid; polygon shapes via the Delaunay path.
TriMesh generate_flux_mesh(const HoleShape& shape, double outer_radius, double h);

// ---- general Delaunay entry (also used directly by tests) ----------------

struct DelaunayInput {
  std::vector<Vec2> points;
  struct Seg {
    int a = 0, b = 0;
    int tag = 0;
    int circle = -1;  // index into circles: split nodes snap onto it
  };
  std::vector<Seg> segments;
  struct Circle {
    Vec2 c;
    double r = 0.0;
  };
  std::vector<Circle> circles;
  std::vector<Vec2> hole_seeds;              // one interior point per cavity
  std::function<double(Vec2)> size;          // target edge length field
  double min_angle_deg = 20.0;
  int max_insertions = 2000000;
};

TriMesh delaunay_mesh(const DelaunayInput& input);

}  // namespace striphomog
