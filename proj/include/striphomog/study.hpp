#pragma once

// Convergence harness: manufactured strip data, eps-sweeps over the four
// interface regimes, least-squares rate fits, and report emission.

#include <string>
#include <vector>

#include "striphomog/assembly.hpp"
#include "striphomog/geometry.hpp"

namespace striphomog {

// Interface regime selecting hole flags, comparator condition on the curve
// and the error-bound formula:
//   dirichlet - Dirichlet holes, eta bounded away from 0; u0 vanishes on
//               the curve; bound sqrt(eps)(sqrt|ln eta| + 1)
//   delta     - Dirichlet holes, eta exponentially small; jump condition
//               [du/dn] = beta u; bound sqrt(eps) + kappa (L2),
//               sqrt(eps) + kappa (rho + mu) corrected (H1)
//   robin     - Robin holes, eta constant; jump coefficient beta0 = alpha a;
//               bound sqrt(eps) + kappa
//   none      - Robin holes with a == 0; no condition on the curve; bound
//               sqrt(eps) eta (sqrt|ln eta| + 1)
enum class StudyCase { dirichlet, delta, robin, none };

StudyCase parse_study_case(const std::string& name);
const char* study_case_name(StudyCase c);

// Closed-form homogenized solution u0(x) = chi(x1) U(x2) on the strip
// {0 < x2 < pi} and its resolvent data f = (-Lap - i) u0.  U has value h0
// and one-sided slopes h1p/h1m at x2 = pi/2, stays linear on
// |x2 - pi/2| <= pi/4, and is blended to zero at the walls by quintic
// pieces matching value and first two derivatives at both junctions.
// chi is 1 on |x1| <= 1, 0 on |x1| >= 2, glued by the exp(-1/t) mollifier
// step.  The pair (u0, f) solves the homogenized problem of the selected
// case exactly: the slope jump h1p - h1m equals beta * h0.
struct ManufacturedReference {
  StudyCase which = StudyCase::dirichlet;
  double h0 = 0.0, h1p = 0.0, h1m = 0.0;
  double beta = 0.0;  // interface coefficient consistent with the slopes

  double u0(Vec2 x) const;
  Vec2 grad_u0(Vec2 x) const;
  cplx f(Vec2 x) const;  // (-Lap - i) u0, defined off the interface

  // factors, exposed for direct testing
  double U(double y) const;
  double dU(double y) const;
  double d2U(double y) const;
  double chi(double t) const;
  double dchi(double t) const;
  double d2chi(double t) const;
};

ManufacturedReference section8_reference(StudyCase c, double rho, double mu,
                                         double a, double eta);

struct StudyConfig {
  StudyCase which = StudyCase::dirichlet;
  std::vector<double> eps_list = {0.2, 0.1, 0.05, 0.025};
  EtaLaw eta_law;               // delta needs the exponential law, robin constant
  double robin_a = 1.0;         // Robin coefficient (robin case)
  double X = 2.5;               // lateral half-width of the computational strip
  double h_far = 0.05;          // far-field mesh pitch
  bool corrected = false;       // also record the (1 - W) u0 comparator columns
  bool fem_comparator = false;  // matched-mesh FEM homogenized comparator columns
  bool deterministic = false;   // serial row execution
  int threads = 0;              // 0: hardware concurrency
};

struct EpsRecord {
  double eps = 0, eta = 0, mu = 0, kappa = 0;
  double l2 = 0, h1 = 0;            // error vs the closed form (exact quadrature)
  double l2_corr = 0, h1_corr = 0;  // corrected comparator (1 - W) u0, nodal
  double h1_plain = 0;              // uncorrected u0, nodal (pairs with h1_corr)
  double l2_fem = 0, h1_fem = 0;    // matched-mesh FEM homogenized comparator
  double bound = 0;                 // case formula at (eps, eta, kappa, mu)
  double sharp_ratio = 0;           // h1^2 / (eps (|ln eta| + 1))
  int n_nodes = 0;
  bool ok = false;
  std::string error;  // first failed stage when !ok
};

struct RateFit {
  double slope = 0, intercept = 0, band = 0;  // band: 1.96 * stderr(slope)
  bool valid = false;
};

struct ConvergenceReport {
  StudyCase which = StudyCase::dirichlet;
  double beta = 0.0;  // interface coefficient of the comparator (0: none)
  std::vector<EpsRecord> records;  // sorted by decreasing eps
  RateFit l2_fit, h1_fit;
  RateFit l2_corr_fit, h1_corr_fit;
  RateFit l2_fem_fit, h1_fem_fit;
  // fitted-slope acceptance window for the case's headline norm
  double window_lo = 0, window_hi = 0;
  bool headline_pass = false;  // headline fit valid and inside the window
};

ConvergenceReport run_convergence_study(const StudyConfig& cfg);

// Least squares of ln(err) on ln(eps); band = 1.96 * standard error of the
// slope.  Errors on fewer than 3 records or any non-positive / non-finite
// error value.
RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& err);

// format "csv" or "json"; the CSV column schema is documented in the README
// and frozen by a golden-file test.  Doubles print with %.12g, so equal
// reports serialize identically byte for byte.
void emit_report(const ConvergenceReport& rep, const std::string& format,
                 const std::string& path);
std::string report_csv(const ConvergenceReport& rep);
std::string report_json(const ConvergenceReport& rep);
ConvergenceReport parse_report_json(const std::string& text);

// Homogenized-solve refinement study against the closed form: L2 errors on
// meshes of pitch h_list and the ratios between consecutive levels.
struct MmsResult {
  std::vector<double> h;
  std::vector<double> l2;
  std::vector<double> ratio;  // l2[i-1] / l2[i]
};
MmsResult mms_study(StudyCase c, const std::vector<double>& h_list, double X);

}  // namespace striphomog
