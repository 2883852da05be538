#pragma once

// Perforated-strip geometry: the strip, the perforation curve, the hole
// family with its admissibility constants, window functions along the curve,
// and the derived interface coefficients.

#include <functional>
#include <string>
#include <vector>

#include "striphomog/errors.hpp"
#include "striphomog/vec2.hpp"

namespace striphomog {

// Strip {0 < x2 < d}, computational window |x1| <= X.
struct StripGeometry {
  double d = 0.0;
  double X = 0.0;
};

struct CurveSpec {
  enum class Kind { straight, circle, sampled };
  Kind kind = Kind::straight;

  double y0 = 0.0;  // straight: curve {x2 == y0}, arclength s == x1

  Vec2 center;        // circle: arclength measured ccw from angle 0
  double radius = 0;

  std::vector<Vec2> samples;  // sampled: open polyline, s from samples[0]

  Vec2 point(double s) const;
  Vec2 tangent(double s) const;
  Vec2 normal(double s) const;  // tangent rotated +90 degrees
  bool closed() const { return kind == Kind::circle; }
  double length() const;  // circle/sampled; infinity-like for straight
};

enum class HoleBC { dirichlet, robin };

// Reference hole shape in scaled coordinates (fits inside B_{R2}(0),
// contains B_{R1}(xk)).  Circle of radius 1 unless a polygon is given.
struct HoleShape {
  bool is_circle = true;
  double circle_radius = 1.0;
  std::vector<Vec2> polygon;  // ccw when used

  double boundary_length() const;
  double outradius() const;  // max |z| over the shape
};

struct HoleFamily {
  HoleShape shape;
  // admissibility constants: B_{R1}(xk) inside the shape, shape inside
  // B_{R2}(0), boundary length at most L, dilated balls B_{b R2 eps} disjoint
  double R1 = 0.5;
  double R2 = 1.25;
  double b = 1.2;
  double L = 6.2832;
  double R3 = 2.5;  // covering radius for the Dirichlet-tube assumption
  Vec2 xk;          // center of the inscribed ball
};

struct EtaLaw {
  enum class Kind { constant, power, exponential };
  Kind kind = Kind::constant;
  double c = 0.5;                 // constant: eta == c
  double alpha = 1.0;             // power: eta == eps^alpha
  double rho = 1.0, mu0 = 0.0;    // exponential: eta == exp(-1/(eps(rho+mu0)))

  double eta(double eps) const;
  static EtaLaw parse(const std::string& text);  // "const:c" | "pow:a" | "exp:rho,mu"
  std::string describe() const;
};

enum class HolePartition { all_dirichlet, all_robin, alternating };

struct PerforationConfig {
  double eps = 0.1;
  EtaLaw eta_law;
  double spacing_factor = 3.0;  // s_k = spacing_factor * eps * k
  HolePartition partition = HolePartition::all_dirichlet;
  double robin_a = 1.0;
  double lateral_margin = 0.0;  // materialize |s_k| <= X - lateral_margin
};

struct Hole {
  int k = 0;
  double s = 0.0;
  Vec2 y;
  double r = 0.0;  // concrete scale eps*eta; boundary = y + r * (shape boundary)
  HoleBC bc = HoleBC::dirichlet;
  double a = 0.0;
};

struct PerforatedDomain {
  StripGeometry strip;
  CurveSpec curve;
  HoleFamily family;
  PerforationConfig cfg;
  double eps = 0.0;
  double eta = 0.0;
  std::vector<Hole> holes;

  bool any_dirichlet() const;
  bool any_robin() const;
  // concrete outradius of hole k's disk bound: r * shape.outradius()
  double hole_outradius(const Hole& h) const;
};

// Places holes along the curve, scales them, checks wall clearance and
// pairwise overlap of the dilated balls B_{b R2 eps}(y_k).
PerforatedDomain build_perforated_domain(const StripGeometry& strip,
                                         const CurveSpec& curve,
                                         const HoleFamily& family,
                                         const PerforationConfig& cfg);

struct AssumptionReport {
  bool a1_ok = false;
  bool a3_ok = false;
  bool shape_ok = false;
  double a1_pair_margin = 0.0;   // min over pairs: dist(y_i,y_k) - 2 b R2 eps
  double wall_clearance = 0.0;   // min over holes: distance of dilated ball to walls
  double a3_worst_gap = 0.0;     // max over tube samples: dist to nearest
                                 // Dirichlet center - R3 eps  (<= 0 means covered)
  std::string detail;
};

// Dense tube sampling with pitch = pitch_factor * eps * b * R2.
AssumptionReport check_assumptions(const PerforatedDomain& dom,
                                   double pitch_factor = 1.0 / 16.0);

// Flux field X(z) = z/|z|^2 of the unit reference circle; requires |z| >= 1
// up to rounding slack.
Vec2 hole_flux_field_circle(Vec2 z);

// Piecewise-constant function of arclength: val[i] on (brk[i], brk[i+1]),
// zero outside the covered range.
struct PiecewiseConst {
  std::vector<double> brk;
  std::vector<double> val;

  double operator()(double s) const;
  double integral() const;
  // integral of f over [a,b] against exp(-i w (s - shift)): real/imag parts
  void fourier_integral(double a, double b, double w, double shift,
                        double* re, double* im) const;
};

enum class AlphaRegime { dirichlet_delta, robin };

// Window function alpha^eps: pi/(b R2) on |s-s_k| < b R2 eps over Dirichlet
// holes (dirichlet_delta regime), |dOmega_k| eta/(2 b R2) over all holes
// (robin regime).
PiecewiseConst compute_alpha_eps(const PerforatedDomain& dom, AlphaRegime regime);

struct KappaResult {
  double kappa = 0.0;
  int q_used = 0;        // truncation order actually used
  double tail_bound = 0.0;
  double sum = 0.0;      // partial weighted sum (kappa^2 lower part)
  bool converged = false;
};

// Fourier-weighted deviation of alpha^eps from alpha over the window
// [n, n+ell] with integer harmonics exp(-2 pi i q (s-n)/ell); truncation
// keeps the Parseval tail bound below rel_tail_tol of the partial sum.
KappaResult estimate_kappa(const PiecewiseConst& alpha_eps,
                           const PiecewiseConst& alpha, double n, double ell,
                           double rel_tail_tol = 0.01, int q_cap = 1 << 20);

// Delta-interface coefficient on the curve:
//   beta(s)  = alpha(s) * factor / (A11 A22 - A12^2)(rho(s)).
// factor = rho+mu for beta, rho for beta_0.  Errors if det <= 0 anywhere
// sampled.  A defaults to identity when not supplied.
std::function<double(double)> compute_beta(
    const PiecewiseConst& alpha, double factor,
    const std::function<Mat2(Vec2)>& A, const CurveSpec& curve);

// Robin limit coefficient alpha(s) * a(s).
std::function<double(double)> compute_beta_robin(
    const PiecewiseConst& alpha, const std::function<double(double)>& a);

double mu_of_eps(double eps, double eta, double rho);  // -1/(eps ln eta) - rho

}  // namespace striphomog
