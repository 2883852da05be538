#pragma once

// Periodic cell problems around a single hole: closed-form lattice potential
// z0, the D/R/N cell solves with far-field constant extraction, and the
// Neumann potential problem defining the hole flux field X.

#include <functional>
#include <vector>

#include "striphomog/geometry.hpp"
#include "striphomog/meshgen.hpp"

namespace striphomog {

enum class CellKind { D, R, N };

// (3/pi) Re ln 2 sin((pi/3)(xi1 + i xi2)): 3-periodic in xi1, harmonic off
// the lattice points (3k, 0) where it is log-singular, ~ |xi2| at infinity.
double z0(Vec2 xi);

struct CellConstants {
  double c_plus = 0.0, c_minus = 0.0;
  double std_plus = 0.0, std_minus = 0.0;  // sample spread in the bands
};

struct CellSolution {
  CellKind kind = CellKind::D;
  double eta = 0.0;
  double H = 0.0;
  CellMesh cm;
  std::vector<double> z;  // nodal values; zero-mean gauge for R/N
  CellConstants c;
  double flux_balance = 0.0;  // discrete net Neumann load (R/N), 0 for D
};

// Laplace on the periodic cell {|xi1| < 3/2, |xi2| < H}, hole = circle of
// radius eta at the origin.  Hole condition per kind (D: Z = 0; R: inward
// flux balancing the walls; N: zero flux); dZ/dxi2 = +-1 at xi2 = +-H for
// D/R and +1 at both walls for N.
CellSolution solve_cell_problem(double eta, CellKind kind, double H, double h);

// c^+ = mean of Z - xi2 over 0.8H < xi2 < 0.9H and the mirror band for c^-
// (Z + xi2 for the |xi2|-type far fields of D/R; for N the far field is
// xi2 +- c so the bottom constant flips sign).  Quality error if the band
// spread exceeds 1% of |c| + 1.
CellConstants extract_cell_constant(const CellMesh& cm,
                                    const std::vector<double>& z,
                                    CellKind kind);

struct FluxSolution {
  TriMesh mesh;
  std::vector<double> v;   // potential, zero-mean gauge
  std::vector<Vec2> x;     // recovered nodal gradient
  double linf = 0.0;       // max |x| over nodes
};

// Delta V = 0 between the hole boundary and the circle of radius
// outer_radius, dV/dnu = -1 on the hole, = phi(angle) on the outer circle.
// Rejects data violating the solvability condition |integral of phi -
// hole perimeter| > 1e-8 relative.
FluxSolution solve_hole_flux_problem(const HoleShape& shape,
                                     const std::function<double(double)>& phi,
                                     double h, double outer_radius = 1.375);

}  // namespace striphomog
