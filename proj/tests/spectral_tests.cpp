#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "striphomog/geometry.hpp"
#include "striphomog/meshgen.hpp"
#include "striphomog/spectral.hpp"

using namespace striphomog;

namespace {

constexpr double kPi = 3.14159265358979323846;

TriMesh strip_mesh(double X, double h) {
  StripGeometry strip{kPi, X};
  CurveSpec curve;
  curve.kind = CurveSpec::Kind::straight;
  curve.y0 = kPi / 2;
  return generate_homogenized_mesh(strip, curve, h);
}

// root of 2 k cos(pi k / 2) + beta sin(pi k / 2) on (1, 2): the lowest
// symmetric transverse mode with the derivative jump at pi/2
double delta_nu1(double beta) {
  const auto g = [&](double k) {
    return 2 * k * std::cos(kPi * k / 2) + beta * std::sin(kPi * k / 2);
  };
  double lo = 1.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(lo) * g(mid) <= 0 ? hi : lo) = mid;
  }
  return lo * lo;
}

}  // namespace

TEST_CASE("transverse oracle endpoints") {
  const auto none = transverse_oracle(TransverseBC::none, 0, 3);
  REQUIRE(none.size() == 3);
  CHECK(none[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(none[1] == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(none[2] == doctest::Approx(9.0).epsilon(1e-8));

  // Dirichlet at the midline: two independent halves, doubled spectrum
  const auto dir = transverse_oracle(TransverseBC::dirichlet, 0, 3);
  CHECK(dir[0] == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(dir[1] == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(dir[2] == doctest::Approx(16.0).epsilon(1e-8));
}

TEST_CASE("delta oracle: beta 0 is free, large beta approaches Dirichlet") {
  const auto free0 = transverse_oracle(TransverseBC::delta, 0.0, 3);
  const auto none = transverse_oracle(TransverseBC::none, 0.0, 3);
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(free0[i] - none[i]) <= 1e-10 * none[i]);

  double prev = 1.0;
  for (const double beta : {1.0, 10.0, 100.0}) {
    const double nu1 = transverse_oracle(TransverseBC::delta, beta, 1)[0];
    CHECK(nu1 > prev);
    CHECK(nu1 < 4.0);
    CHECK(nu1 == doctest::Approx(delta_nu1(beta)).epsilon(1e-8));
    prev = nu1;
  }
  CHECK(transverse_oracle(TransverseBC::delta, 100.0, 1)[0] > 3.5);

  // the antisymmetric mode nu = 4 is blind to the interface
  const auto two = transverse_oracle(TransverseBC::delta, 1.0, 2);
  CHECK(two[1] == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("strip spectrum composes transverse and lateral modes") {
  // X = pi/2 gives the unit square modes nu_k + n^2
  const auto sq = homogenized_oracle(TransverseBC::none, 0, kPi / 2, 3);
  REQUIRE(sq.size() == 3);
  CHECK(sq[0] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(sq[1] == doctest::Approx(5.0).epsilon(1e-8));
  CHECK(sq[2] == doctest::Approx(5.0).epsilon(1e-8));
}

TEST_CASE("discrete eigenvalues match a dense reference and the oracle") {
  const TriMesh m = strip_mesh(kPi / 2, 0.12);
  const AssembledSystem sys =
      assemble_homogenized(m, Coefficients::laplace(), HomogBC::none);
  const int k = 4;
  const auto lam = lowest_eigenvalues(sys, k);
  REQUIRE(static_cast<int>(lam.size()) == k);

  // dense generalized solve over the free dofs
  std::vector<int> free_ids;
  for (int i = 0; i < sys.n; ++i)
    if (!sys.constrained[i]) free_ids.push_back(i);
  std::vector<int> where(sys.n, -1);
  for (std::size_t j = 0; j < free_ids.size(); ++j) where[free_ids[j]] = static_cast<int>(j);
  const int nf = static_cast<int>(free_ids.size());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nf, nf);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nf, nf);
  for (int i = 0; i < sys.n; ++i) {
    if (where[i] < 0) continue;
    for (int p = sys.K.ptr[i]; p < sys.K.ptr[i + 1]; ++p)
      if (where[sys.K.idx[p]] >= 0)
        K(where[i], where[sys.K.idx[p]]) += sys.K.val[p].real();
    for (int p = sys.M.ptr[i]; p < sys.M.ptr[i + 1]; ++p)
      if (where[sys.M.idx[p]] >= 0)
        M(where[i], where[sys.M.idx[p]]) += sys.M.val[p].real();
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
  for (int i = 0; i < k; ++i)
    CHECK(lam[i] == doctest::Approx(es.eigenvalues()[i]).epsilon(1e-8));

  // P1 eigenvalues approach {2, 5, 5} from above
  const auto exact = homogenized_oracle(TransverseBC::none, 0, kPi / 2, k);
  for (int i = 0; i < 3; ++i) {
    CHECK(lam[i] >= exact[i] - 1e-10);
    CHECK(lam[i] == doctest::Approx(exact[i]).epsilon(0.02));
  }
}

TEST_CASE("perturbed assembly without holes equals the homogenized one") {
  StripGeometry strip{kPi, 2.5};
  CurveSpec curve;
  curve.kind = CurveSpec::Kind::straight;
  curve.y0 = kPi / 2;
  PerforationConfig pc;
  pc.eps = 0.2;
  pc.eta_law = EtaLaw::parse("const:0.5");
  pc.lateral_margin = 3.0;  // beyond X: no hole is materialized
  const PerforatedDomain dom =
      build_perforated_domain(strip, curve, HoleFamily{}, pc);
  REQUIRE(dom.holes.empty());
  MeshOptions opt;
  opt.h_far = 0.2;
  const TriMesh m = generate_mesh(dom, opt);
  const AssembledSystem a = assemble_perturbed(m, Coefficients::laplace());
  const AssembledSystem b =
      assemble_homogenized(m, Coefficients::laplace(), HomogBC::none);
  REQUIRE(a.K.val.size() == b.K.val.size());
  for (std::size_t p = 0; p < a.K.val.size(); ++p)
    CHECK(std::abs(a.K.val[p] - b.K.val[p]) <= 1e-15);
  for (int i = 0; i < a.n; ++i) CHECK(a.constrained[i] == b.constrained[i]);

  const auto lam = lowest_eigenvalues(a, 3);
  const auto ref = homogenized_oracle(TransverseBC::none, 0, 2.5, 3);
  for (int i = 0; i < 3; ++i)
    CHECK(lam[i] == doctest::Approx(ref[i]).epsilon(0.02));
}

TEST_CASE("spectrum sweep report structure") {
  SpectralConfig cfg;
  cfg.regime = SpectralRegime::dirichlet;
  cfg.eps_list = {0.4, 0.2};
  cfg.eta_const = 1.0;
  cfg.h_far = 0.1;
  cfg.k = 2;
  const SpectrumReport rep = compare_spectra(cfg);
  REQUIRE(rep.rows.size() == 2);
  const double free_floor =
      homogenized_oracle(TransverseBC::none, 0.0, cfg.X, 1)[0];
  for (const SpectrumRow& r : rep.rows) {
    CHECK(r.eta == 1.0);
    REQUIRE(r.perturbed.size() == 2);
    REQUIRE(r.oracle.size() == 2);
    CHECK(r.fem_homogenized.empty());
    // holes only narrow the free strip's form domain
    CHECK(r.perturbed[0] >= free_floor - 1e-6);
    CHECK(r.gap1 ==
          doctest::Approx(std::abs(r.perturbed[0] - r.oracle[0])).epsilon(1e-12));
  }
  // halving eps moves the ground state toward the Dirichlet-line limit
  CHECK(rep.gap_monotone);
  CHECK(rep.beta == 0.0);
}
