#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "striphomog/study.hpp"

using namespace striphomog;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("rate fit recovers exact power laws") {
  const std::vector<double> eps = {0.4, 0.2, 0.1, 0.05};
  std::vector<double> err;
  for (double e : eps) err.push_back(2.0 * std::sqrt(e));
  RateFit f = fit_rate(eps, err);
  CHECK(f.valid);
  CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(f.band <= 1e-10);

  err.clear();
  for (double e : eps) err.push_back(3.0 * e);
  f = fit_rate(eps, err);
  CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));

  // the logarithmic model fits between its pure-power envelopes
  err.clear();
  for (double e : eps) err.push_back(std::sqrt(e * (std::abs(std::log(e)) + 1)));
  f = fit_rate(eps, err);
  CHECK(f.slope > 0.25);
  CHECK(f.slope < 0.5);
  CHECK(f.band > 0);
}

TEST_CASE("rate fit input validation") {
  CHECK_THROWS_AS(fit_rate({0.2, 0.1}, {1.0, 0.5}), Error);
  CHECK_THROWS_AS(fit_rate({0.2, 0.1, 0.05}, {1.0, 0.5}), Error);
  CHECK_THROWS_AS(fit_rate({0.2, 0.1, 0.05}, {1.0, 0.0, 0.5}), Error);
  CHECK_THROWS_AS(fit_rate({0.1, 0.1, 0.1}, {1.0, 1.0, 1.0}), Error);
}

TEST_CASE("manufactured data: interface identities") {
  // dirichlet: u0 vanishes on the curve
  const ManufacturedReference dir = section8_reference(StudyCase::dirichlet, 0, 0, 0, 1.0);
  CHECK(dir.h0 == 0.0);
  for (double x : {-1.7, -0.3, 0.0, 0.9, 2.4})
    CHECK(dir.u0({x, kPi / 2}) == 0.0);
  CHECK(dir.beta == 0.0);

  // delta: the slope jump equals beta * h0 exactly, beta = (2 pi / 3)(rho + mu)
  const ManufacturedReference del = section8_reference(StudyCase::delta, 1.0, 0.5, 0, 0.01);
  CHECK(del.h0 == 1.0);
  CHECK(del.h1p - del.h1m == del.beta * del.h0);
  CHECK(del.beta == doctest::Approx(2 * kPi / 3 * 1.5).epsilon(1e-14));
  const double gp = del.grad_u0({0.0, kPi / 2 + 1e-9}).y;
  const double gm = del.grad_u0({0.0, kPi / 2 - 1e-9}).y;
  CHECK(gp == doctest::Approx(del.h1p).epsilon(1e-7));
  CHECK(gm == doctest::Approx(del.h1m).epsilon(1e-7));

  // robin: beta0 = alpha a with the robin window alpha = 2 pi eta / 3
  const ManufacturedReference rob = section8_reference(StudyCase::robin, 0, 0, 1.0, 0.3);
  CHECK(rob.beta == doctest::Approx(2 * kPi * 0.3 / 3).epsilon(1e-14));

  // none: no jump, no interface coefficient
  const ManufacturedReference non = section8_reference(StudyCase::none, 0, 0, 0.0, 0.3);
  CHECK(non.h1p == 0.0);
  CHECK(non.h1m == 0.0);
  CHECK(non.beta == 0.0);

  CHECK_THROWS_AS(section8_reference(StudyCase::delta, -1.0, 0.5, 0, 0.01), Error);
  CHECK_THROWS_AS(section8_reference(StudyCase::robin, 0, 0, 1.0, 1.5), Error);
}

TEST_CASE("manufactured data: profile and cutoff smoothness") {
  const ManufacturedReference del = section8_reference(StudyCase::delta, 1.0, 0.0, 0, 0.01);

  // resolvent data reduces to -i u0 where both factors are flat/linear
  for (const Vec2 p : {Vec2{0.5, kPi / 2 + 0.2}, Vec2{-0.9, kPi / 2 - 0.3}}) {
    const cplx r = del.f(p) + cplx(0, 1) * del.u0(p);
    CHECK(std::abs(r) <= 1e-14);
  }

  // wall values and junction continuity of the transverse profile
  CHECK(del.U(0.0) == 0.0);
  CHECK(del.U(kPi) == 0.0);
  CHECK(std::abs(del.dU(1e-9)) <= 1e-6);
  CHECK(std::abs(del.dU(kPi - 1e-9)) <= 1e-6);
  for (const double yj : {kPi / 4, 3 * kPi / 4}) {
    CHECK(del.U(yj + 1e-9) - del.U(yj - 1e-9) ==
          doctest::Approx(0.0).epsilon(1e-7));
    CHECK(del.dU(yj + 1e-9) - del.dU(yj - 1e-9) ==
          doctest::Approx(0.0).epsilon(1e-6));
    CHECK(del.d2U(yj + 1e-9) - del.d2U(yj - 1e-9) ==
          doctest::Approx(0.0).epsilon(1e-5));
  }

  // mollifier bump: plateau, support, monotone decay, C^2 gluing
  CHECK(del.chi(0.0) == 1.0);
  CHECK(del.chi(0.99) == 1.0);
  CHECK(del.chi(-0.5) == 1.0);
  CHECK(del.chi(2.0) == 0.0);
  CHECK(del.chi(-2.7) == 0.0);
  double prev = 1.0;
  for (int i = 1; i <= 40; ++i) {
    const double c = del.chi(1.0 + i * 0.025);
    CHECK(c <= prev + 1e-15);
    CHECK(c >= 0.0);
    prev = c;
  }
  CHECK(del.chi(1.5) == doctest::Approx(0.5).epsilon(1e-12));  // odd symmetry
  CHECK(std::abs(del.dchi(1.0 + 1e-7)) <= 1e-5);
  CHECK(std::abs(del.dchi(2.0 - 1e-7)) <= 1e-5);
  CHECK(std::abs(del.d2chi(1.0 + 1e-6)) <= 1e-3);

  // gradient composes the two factors
  const Vec2 g = del.grad_u0({1.5, kPi / 2 + 0.3});
  CHECK(g.x == doctest::Approx(del.dchi(1.5) * del.U(kPi / 2 + 0.3)).epsilon(1e-13));
  CHECK(g.y == doctest::Approx(del.chi(1.5) * del.dU(kPi / 2 + 0.3)).epsilon(1e-13));
}

TEST_CASE("study case parsing") {
  CHECK(parse_study_case("delta") == StudyCase::delta);
  CHECK(parse_study_case("none") == StudyCase::none);
  CHECK(std::string(study_case_name(StudyCase::robin)) == "robin");
  CHECK_THROWS_AS(parse_study_case("neumann"), Error);
}

TEST_CASE("study configuration validation") {
  StudyConfig bad;
  bad.which = StudyCase::delta;
  bad.eta_law = EtaLaw::parse("const:0.5");  // delta needs the exponential law
  CHECK_THROWS_AS(run_convergence_study(bad), Error);

  StudyConfig incr;
  incr.eta_law = EtaLaw::parse("const:0.5");
  incr.eps_list = {0.05, 0.1, 0.2};
  CHECK_THROWS_AS(run_convergence_study(incr), Error);

  StudyConfig two;
  two.eta_law = EtaLaw::parse("const:0.5");
  two.eps_list = {0.2, 0.1};
  CHECK_THROWS_AS(run_convergence_study(two), Error);

  StudyConfig corr;
  corr.which = StudyCase::none;
  corr.eta_law = EtaLaw::parse("pow:1");
  corr.corrected = true;  // the corrector needs Dirichlet holes
  CHECK_THROWS_AS(run_convergence_study(corr), Error);

  StudyConfig rob;
  rob.which = StudyCase::robin;
  rob.eta_law = EtaLaw::parse("pow:1");  // robin needs a constant eta
  CHECK_THROWS_AS(run_convergence_study(rob), Error);
}

TEST_CASE("report serialization is frozen") {
  ConvergenceReport rep;
  rep.which = StudyCase::delta;
  rep.beta = 2.25;
  rep.window_lo = 0.4;
  rep.window_hi = 10.0;
  rep.headline_pass = true;
  EpsRecord a;
  a.eps = 0.2;
  a.eta = 0.125;
  a.mu = 0.25;
  a.kappa = 0.0;
  a.l2 = 0.03;
  a.h1 = 0.5;
  a.l2_corr = 0.02;
  a.h1_corr = 0.25;
  a.h1_plain = 0.5;
  a.bound = 0.625;
  a.sharp_ratio = 0.5;
  a.n_nodes = 1200;
  a.ok = true;
  EpsRecord b;
  b.eps = 0.1;
  b.ok = false;
  b.error = "mesh, degenerate";
  rep.records = {a, b};
  rep.l2_fit.valid = true;
  rep.l2_fit.slope = 0.5;
  rep.l2_fit.intercept = 1.25;
  rep.l2_fit.band = 0.0078125;

  const std::string expect =
      "# strip-homog convergence report v1\n"
      "# case=delta,beta=2.25,window=[0.4;10],headline=pass\n"
      "eps,eta,mu,kappa,l2,h1,l2_corr,h1_corr,h1_plain,l2_fem,h1_fem,bound,"
      "sharp_ratio,n_nodes,status,error\n"
      "0.2,0.125,0.25,0,0.03,0.5,0.02,0.25,0.5,0,0,0.625,0.5,1200,ok,\n"
      "0.1,0,0,0,0,0,0,0,0,0,0,0,0,0,failed,\"mesh, degenerate\"\n"
      "fit,l2,0.5,1.25,0.0078125\n";
  CHECK(report_csv(rep) == expect);

  // json round-trips to the identical byte string
  const std::string j1 = report_json(rep);
  const ConvergenceReport back = parse_report_json(j1);
  CHECK(report_json(back) == j1);
  CHECK(back.records.size() == 2);
  CHECK(back.records[1].error == "mesh, degenerate");
  CHECK(back.l2_fit.valid);
  CHECK(!back.h1_fit.valid);
  CHECK(back.headline_pass);
  CHECK_THROWS_AS(parse_report_json("{ not json"), Error);
}

TEST_CASE("study runs are deterministic") {
  StudyConfig cfg;
  cfg.which = StudyCase::dirichlet;
  cfg.eta_law = EtaLaw::parse("const:0.5");
  cfg.eps_list = {0.4, 0.3, 0.2};
  cfg.h_far = 0.2;
  cfg.deterministic = true;
  const ConvergenceReport r1 = run_convergence_study(cfg);
  const ConvergenceReport r2 = run_convergence_study(cfg);
  CHECK(report_json(r1) == report_json(r2));
  for (const EpsRecord& r : r1.records) {
    CHECK(r.ok);
    CHECK(r.l2 > 0);
    CHECK(r.h1 > r.l2);  // the H1 error dominates
    CHECK(r.n_nodes > 0);
    CHECK(r.kappa == 0.0);
  }
  CHECK(r1.h1_fit.valid);
  CHECK(r1.beta == 0.0);
}

TEST_CASE("exponential law rows carry mu and an exact zero kappa") {
  StudyConfig cfg;
  cfg.which = StudyCase::delta;
  cfg.eta_law = EtaLaw::parse("exp:1,0.5");
  cfg.eps_list = {0.4, 0.3, 0.2};
  cfg.h_far = 0.2;
  cfg.deterministic = true;
  const ConvergenceReport rep = run_convergence_study(cfg);
  for (const EpsRecord& r : rep.records) {
    CHECK(r.ok);
    CHECK(r.kappa == 0.0);  // tiled windows: the deviation vanishes exactly
    CHECK(r.mu == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(r.eta == doctest::Approx(std::exp(-1.0 / (r.eps * 1.5))).epsilon(1e-13));
  }
  CHECK(rep.beta == doctest::Approx(2 * kPi / 3 * 1.5).epsilon(1e-10));
}

TEST_CASE("homogenized refinement study halves the L2 error quadratically") {
  const MmsResult r = mms_study(StudyCase::delta, {0.3, 0.15}, 2.5);
  REQUIRE(r.l2.size() == 2);
  REQUIRE(r.ratio.size() == 1);
  CHECK(r.l2[0] > r.l2[1]);
  CHECK(r.ratio[0] > 2.0);
  CHECK(r.ratio[0] < 8.0);
}
