#pragma once

// P1 finite elements: assembly of the perturbed/homogenized forms, resolvent
// solves at complex shifts, inter-mesh interpolation, and discrete norms.

#include <complex>
#include <functional>
#include <vector>

#include "striphomog/mesh.hpp"

namespace striphomog {

using cplx = std::complex<double>;

// Coefficients of the form
//   h[u,v] = (A grad u, grad v) + (A1 du/dx1 + A2 du/dx2, v)
//          + (u, A1 dv/dx1 + A2 dv/dx2) + (A0 u, v),
// all position-dependent; A symmetric real, A1/A2 complex, A0 real.
struct Coefficients {
  std::function<Mat2(Vec2)> A;
  std::function<cplx(Vec2)> A1, A2;
  std::function<double(Vec2)> A0;
  std::function<double(Vec2)> robin_a;  // Robin coefficient on hole boundaries

  static Coefficients laplace();  // A = I, everything else 0
};

struct SparseCsr {
  int n = 0;
  std::vector<int> ptr, idx;
  std::vector<cplx> val;

  void spmv(const cplx* x, cplx* y) const;  // y = A x (dispatched kernels)
};

enum class HomogBC { dirichlet_gamma, delta, none };

struct AssembledSystem {
  SparseCsr K;                     // form matrix over all nodes
  SparseCsr M;                     // mass matrix
  std::vector<char> constrained;   // per-node Dirichlet flag
  int n = 0;
  const TriMesh* mesh = nullptr;
};

struct Field {
  const TriMesh* mesh = nullptr;
  std::vector<cplx> v;
};

// Perturbed operator: Dirichlet on walls (1), lateral cuts (5) and
// Dirichlet-holes (3); Robin term robin_a integrated over tag-4 edges.
AssembledSystem assemble_perturbed(const TriMesh& mesh, const Coefficients& c);

// Homogenized operator on the unperforated strip; gamma (tag 2) is either a
// Dirichlet line, a delta interface with coefficient beta(x), or absent.
AssembledSystem assemble_homogenized(const TriMesh& mesh, const Coefficients& c,
                                     HomogBC bc,
                                     const std::function<double(Vec2)>& beta = {});

struct SolveInfo {
  double residual = 0.0;      // ||(K - shift M)u - M f||_2 over free dofs
  double rhs_norm = 0.0;      // ||M f||_2 over free dofs
  int n_free = 0;
};

// Solves (K - shift M) u = M f with the Dirichlet constraints eliminated;
// verifies the residual to 1e-10 relative.
Field solve_resolvent(const AssembledSystem& sys, const Field& f, cplx shift,
                      SolveInfo* info = nullptr);

// Same, but the right-hand side vector b is used as-is (no mass application).
Field solve_linear(const AssembledSystem& sys, const std::vector<cplx>& b,
                   cplx shift, SolveInfo* info = nullptr);

// Evaluate u (P1 on its own mesh) at the nodes of target.  Target nodes must
// lie inside u's mesh domain (within a small slack).
Field interpolate(const Field& u, const TriMesh& target);

enum class NormKind { l2, h1 };

double field_norm(const TriMesh& mesh, const std::vector<cplx>& u, NormKind kind);
double difference_norm(const TriMesh& mesh, const std::vector<cplx>& u,
                       const std::vector<cplx>& v, NormKind kind);

// Nodal evaluation helper for closed-form comparators.
Field project_function(const TriMesh& mesh, const std::function<cplx(Vec2)>& f);

// Error norm against a real-valued closed form evaluated at the quadrature
// points (no P1 interpolation of g, so g contributes no projection error).
// Values use the edge-midpoint rule; grad_g is sampled at centroids, so a
// piecewise gradient with jumps along mesh lines is always evaluated
// one-sidedly.  The imaginary part of u is measured against 0.
double error_vs_real_function(const TriMesh& mesh, const std::vector<cplx>& u,
                              const std::function<double(Vec2)>& g,
                              const std::function<Vec2(Vec2)>& grad_g,
                              NormKind kind);

// Evaluate u at arbitrary interior points (single point-location pass).
std::vector<cplx> values_at(const Field& u, const std::vector<Vec2>& pts);

}  // namespace striphomog
