#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "striphomog/corrector.hpp"
#include "striphomog/meshgen.hpp"

using namespace striphomog;

namespace {

constexpr double kPi = 3.14159265358979323846;

PerforatedDomain model_domain(double eps, double eta) {
  StripGeometry strip{kPi, 2.5};
  CurveSpec curve;
  curve.kind = CurveSpec::Kind::straight;
  curve.y0 = kPi / 2;
  PerforationConfig pc;
  pc.eps = eps;
  pc.eta_law = EtaLaw::parse("const:" + std::to_string(eta));
  pc.lateral_margin = 0.5 * pc.spacing_factor * eps;
  return build_perforated_domain(strip, curve, HoleFamily{}, pc);
}

}  // namespace

TEST_CASE("Q matrices are inverse square roots of A at the hole centers") {
  const PerforatedDomain dom = model_domain(0.2, 0.5);
  Coefficients co = Coefficients::laplace();
  co.A = [](Vec2) {
    Mat2 m;
    m.a11 = 4.0;
    m.a22 = 1.0;
    return m;
  };
  const EllipseFamily fam = q_matrices(co, dom);
  REQUIRE(fam.holes.size() == dom.holes.size());
  for (const EllipseEntry& e : fam.holes) {
    CHECK(e.q.a11 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(e.q.a22 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(e.q.a12) <= 1e-12);
    CHECK(e.sig_qinv == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(e.sig_q == doctest::Approx(1.0).epsilon(1e-12));
  }
  // r5 = 0.99 R2 / (2 sqrt(lambda_max)) = 0.99 * 1.25 / 4
  CHECK(fam.r5 == doctest::Approx(0.99 * 1.25 / 4).epsilon(1e-12));
  CHECK(fam.outer_margin >= 0);
}

TEST_CASE("log profile: support, range, level sets") {
  const double eps = 0.2, eta = 0.5;
  const PerforatedDomain dom = model_domain(eps, eta);
  const EllipseFamily fam = q_matrices(Coefficients::laplace(), dom);
  CHECK(fam.r5 == doctest::Approx(0.99 * 0.625).epsilon(1e-12));
  CHECK(fam.outer_margin >= 0);
  // the unit reference circle does not fit inside E_eta; reported only
  CHECK(fam.hole_margin < 0);

  const Vec2 c = {0.0, kPi / 2};
  const double r_out = fam.r5 * eps;      // W = 0 outside
  const double r_in = r_out * eta;        // W = 1 inside
  CHECK(fam.evaluate_W(c) == 1.0);
  CHECK(fam.evaluate_W({0.0, kPi / 2 + 0.5 * r_in}) == 1.0);
  CHECK(fam.evaluate_W({r_out * 1.0001, kPi / 2}) == 0.0);
  CHECK(fam.evaluate_W({0.3, kPi / 2}) == 0.0);  // midpoint between holes
  // half level at the geometric mean radius
  CHECK(fam.evaluate_W({r_out * std::sqrt(eta), kPi / 2}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // ellipses around every hole act independently
  CHECK(fam.evaluate_W({0.6, kPi / 2}) == 1.0);

  // range and continuity along a radial sweep through the profile
  double prev = -1.0;
  const int n = 4000;
  double worst_jump = 0;
  for (int i = 0; i <= n; ++i) {
    const double r = 2.0 * r_out * i / n;
    const double w = fam.evaluate_W({r, kPi / 2});
    CHECK(w >= 0.0);
    CHECK(w <= 1.0);
    if (i) worst_jump = std::max(worst_jump, std::abs(w - prev));
    prev = w;
  }
  // |dW/drho| <= 1/(r_in |ln eta|); step = 2 r_out / n
  const double lip = 1.0 / (r_in * std::abs(std::log(eta)));
  CHECK(worst_jump <= 2.0 * lip * (2.0 * r_out / n));
}

TEST_CASE("corrected comparator multiplies by 1 - W at the target nodes") {
  const double eps = 0.2, eta = 0.5;
  const PerforatedDomain dom = model_domain(eps, eta);
  const EllipseFamily fam = q_matrices(Coefficients::laplace(), dom);

  StripGeometry strip{kPi, 2.5};
  CurveSpec curve;
  curve.kind = CurveSpec::Kind::straight;
  curve.y0 = kPi / 2;
  const TriMesh coarse = generate_homogenized_mesh(strip, curve, 0.2);
  Field one;
  one.mesh = &coarse;
  one.v.assign(coarse.xy.size(), cplx(1.0, 0.0));

  MeshOptions opt;
  opt.h_far = 0.1;
  const TriMesh target = generate_mesh(dom, opt);
  const Field corr = corrected_field(one, fam, target);
  REQUIRE(corr.v.size() == target.xy.size());
  for (int i = 0; i < target.n_nodes(); ++i) {
    const double w = fam.evaluate_W(target.xy[i]);
    CHECK(std::abs(corr.v[i] - cplx(1.0 - w, 0.0)) <= 1e-12);
  }
}
