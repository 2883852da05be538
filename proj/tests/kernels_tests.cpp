#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "striphomog/kernels.hpp"

using namespace striphomog;
using kern::cplx;

namespace {

std::mt19937 rng(20240517);

std::vector<double> rand_vec(std::size_t n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::vector<cplx> rand_cvec(std::size_t n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& x : v) x = cplx(d(rng), d(rng));
  return v;
}

// random CSR with ~nnz_per_row entries per row, diagonally loaded
template <class T>
void rand_csr(int n, std::vector<int>& ptr, std::vector<int>& idx,
              std::vector<T>& val) {
  std::uniform_int_distribution<int> col(0, n - 1);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ptr.assign(1, 0);
  idx.clear();
  val.clear();
  for (int i = 0; i < n; ++i) {
    idx.push_back(i);
    if constexpr (std::is_same_v<T, cplx>) val.push_back(cplx(d(rng), d(rng)));
    else val.push_back(d(rng));
    for (int j = 0; j < 4; ++j) {
      idx.push_back(col(rng));
      if constexpr (std::is_same_v<T, cplx>) val.push_back(cplx(d(rng), d(rng)));
      else val.push_back(d(rng));
    }
    ptr.push_back(static_cast<int>(idx.size()));
  }
}

}  // namespace

TEST_CASE("scalar dot/nrm2/axpy agree with a plain loop") {
  // lengths cover all remainder lanes of the 4-wide blocks
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 15u, 64u, 67u}) {
    auto x = rand_vec(n), y = rand_vec(n);
    double dref = 0, nref = 0;
    for (std::size_t i = 0; i < n; ++i) {
      dref += x[i] * y[i];
      nref += x[i] * x[i];
    }
    CHECK(kern::scalar::dot(x.data(), y.data(), n) == doctest::Approx(dref).epsilon(1e-14));
    CHECK(kern::scalar::nrm2sq(x.data(), n) == doctest::Approx(nref).epsilon(1e-14));
    auto y2 = y;
    kern::scalar::axpy(0.75, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(y2[i] == doctest::Approx(y[i] + 0.75 * x[i]));
  }
}

TEST_CASE("dotc conjugates the left argument") {
  auto x = rand_cvec(33), y = rand_cvec(33);
  cplx ref = 0;
  for (std::size_t i = 0; i < x.size(); ++i) ref += std::conj(x[i]) * y[i];
  cplx got = kern::scalar::dotc(x.data(), y.data(), x.size());
  CHECK(std::abs(got - ref) <= 1e-13);
  // dotc(x, x) is the squared norm, real and nonnegative
  cplx s = kern::scalar::dotc(x.data(), x.data(), x.size());
  CHECK(s.imag() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(s.real() == doctest::Approx(kern::scalar::nrm2sq(x.data(), x.size())));
}

TEST_CASE("dispatched kernels match the scalar reference") {
  INFO("active isa: ", kern::active_isa());
  for (std::size_t n : {1u, 5u, 16u, 63u, 256u, 1000u}) {
    auto x = rand_vec(n), y = rand_vec(n);
    CHECK(kern::dot(x.data(), y.data(), n) ==
          doctest::Approx(kern::scalar::dot(x.data(), y.data(), n)).epsilon(1e-14));
    CHECK(kern::nrm2sq(x.data(), n) ==
          doctest::Approx(kern::scalar::nrm2sq(x.data(), n)).epsilon(1e-14));
    auto ya = y, yb = y;
    kern::axpy(-1.25, x.data(), ya.data(), n);
    kern::scalar::axpy(-1.25, x.data(), yb.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(ya[i] == yb[i]);

    auto cx = rand_cvec(n), cy = rand_cvec(n);
    CHECK(std::abs(kern::dotc(cx.data(), cy.data(), n) -
                   kern::scalar::dotc(cx.data(), cy.data(), n)) <= 1e-13 * n);
    CHECK(kern::nrm2sq(cx.data(), n) ==
          doctest::Approx(kern::scalar::nrm2sq(cx.data(), n)).epsilon(1e-14));
    auto ca = cy, cb = cy;
    kern::axpy(cplx(0.5, -2.0), cx.data(), ca.data(), n);
    kern::scalar::axpy(cplx(0.5, -2.0), cx.data(), cb.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(ca[i] == cb[i]);
  }
}

TEST_CASE("spmv matches the scalar reference on random CSR") {
  const int n = 173;
  {
    std::vector<int> ptr, idx;
    std::vector<double> val;
    rand_csr<double>(n, ptr, idx, val);
    auto x = rand_vec(n);
    std::vector<double> ya(n), yb(n);
    kern::csr_spmv(ptr.data(), idx.data(), val.data(), x.data(), ya.data(), n);
    kern::scalar::csr_spmv(ptr.data(), idx.data(), val.data(), x.data(),
                           yb.data(), n);
    for (int i = 0; i < n; ++i)
      CHECK(ya[i] == doctest::Approx(yb[i]).epsilon(1e-14));
  }
  {
    std::vector<int> ptr, idx;
    std::vector<cplx> val;
    rand_csr<cplx>(n, ptr, idx, val);
    auto x = rand_cvec(n);
    std::vector<cplx> ya(n), yb(n);
    kern::csr_spmv(ptr.data(), idx.data(), val.data(), x.data(), ya.data(), n);
    kern::scalar::csr_spmv(ptr.data(), idx.data(), val.data(), x.data(),
                           yb.data(), n);
    for (int i = 0; i < n; ++i) CHECK(std::abs(ya[i] - yb[i]) <= 1e-13);
  }
}

TEST_CASE("isa forcing") {
  const std::string before = kern::active_isa();
  kern::force_isa("scalar");
  CHECK(kern::active_isa() == "scalar");
  if (kern::avx2_available()) {
    kern::force_isa("avx2");
    CHECK(kern::active_isa() == "avx2");
  }
  CHECK_THROWS_AS(kern::force_isa("sse9"), std::invalid_argument);
  kern::force_isa("auto");
  CHECK(kern::active_isa() == before);
}

TEST_CASE("forced scalar and forced avx2 give matching solves") {
  if (!kern::avx2_available()) return;
  const std::size_t n = 517;
  auto x = rand_vec(n), y = rand_vec(n);
  kern::force_isa("scalar");
  const double ds = kern::dot(x.data(), y.data(), n);
  kern::force_isa("avx2");
  const double dv = kern::dot(x.data(), y.data(), n);
  kern::force_isa("auto");
  CHECK(ds == doctest::Approx(dv).epsilon(1e-14));
}
