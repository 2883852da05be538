#pragma once

// Lowest eigenvalues of the discrete perturbed/homogenized operators and the
// 1D transverse shooting oracle for the straight-strip model, plus the
// eps-sweep comparison harness.

#include <vector>

#include "striphomog/assembly.hpp"

namespace striphomog {

enum class TransverseBC { none, dirichlet, delta };

// k smallest eigenvalues nu of -phi'' = nu phi on (0, pi), phi(0) = phi(pi)
// = 0, with at pi/2: nothing (none), phi = 0 (dirichlet, eigenvalues doubled
// by the two independent halves), or continuity plus the derivative jump
// [phi'] = beta phi (delta).  RK4 shooting + bisection to 1e-10; no closed
// form is assumed.
std::vector<double> transverse_oracle(TransverseBC bc, double beta, int k);

// k smallest values of nu_i + (m pi / (2X))^2: the spectrum of the
// homogenized operator on the lateral truncation (-X, X) with Dirichlet
// cut ends.
std::vector<double> homogenized_oracle(TransverseBC bc, double beta, double X,
                                       int k);

// k smallest eigenvalues of K u = lambda M u over the free dofs.  Requires a
// real symmetric configuration.  Shift-invert Lanczos (M-inner product, full
// reorthogonalization, deterministic start), residual <= 1e-8 ||Mu|| per
// pair; dense fallback for small systems.
std::vector<double> lowest_eigenvalues(const AssembledSystem& sys, int k);

enum class SpectralRegime { dirichlet, delta };

struct SpectralConfig {
  SpectralRegime regime = SpectralRegime::dirichlet;
  std::vector<double> eps_list = {0.2, 0.1, 0.05, 0.025};
  double eta_const = 1.0;  // dirichlet regime hole scale
  double rho = 1.0;        // delta regime: eta = exp(-1/(eps(rho+mu0)))
  double mu0 = 0.0;
  double X = 2.5;
  double h_far = 0.05;
  int k = 4;
  bool fem_homogenized = false;  // add a 2D homogenized eigensolve column
  double h0 = 0.04;              // mesh size for that column
};

struct SpectrumRow {
  double eps = 0.0, eta = 0.0;
  std::vector<double> perturbed;
  std::vector<double> oracle;
  std::vector<double> fem_homogenized;  // empty unless requested
  double gap1 = 0.0;  // |perturbed[0] - oracle[0]|
};

struct SpectrumReport {
  SpectralRegime regime = SpectralRegime::dirichlet;
  double beta = 0.0;  // delta regime coefficient (2 pi / 3)(rho + mu0)
  std::vector<SpectrumRow> rows;
  bool gap_monotone = true;
};

// Straight-strip model sweep: perturbed eigenvalues on the perforated strip
// vs the homogenized oracle; flags non-monotone lowest-gap sequences.
SpectrumReport compare_spectra(const SpectralConfig& cfg);

}  // namespace striphomog
