#include "striphomog/kernels.hpp"

#include <atomic>
#include <stdexcept>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define STRIPHOMOG_X86 1
#endif

namespace striphomog::kern {

// ---- scalar reference ----------------------------------------------------

namespace scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double nrm2sq(const double* x, std::size_t n) { return dot(x, x, n); }

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double nrm2sq(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void csr_spmv(const int* row_ptr, const int* col_idx, const double* val,
              const double* x, double* y, int nrows) {
  for (int r = 0; r < nrows; ++r) {
    double s = 0.0;
    for (int j = row_ptr[r]; j < row_ptr[r + 1]; ++j) s += val[j] * x[col_idx[j]];
    y[r] = s;
  }
}

void csr_spmv(const int* row_ptr, const int* col_idx, const cplx* val,
              const cplx* x, cplx* y, int nrows) {
  for (int r = 0; r < nrows; ++r) {
    cplx s = 0.0;
    for (int j = row_ptr[r]; j < row_ptr[r + 1]; ++j) s += val[j] * x[col_idx[j]];
    y[r] = s;
  }
}

}  // namespace scalar

// ---- AVX2+FMA variants ---------------------------------------------------
//
// Compiled with per-function target attributes so the TU builds without
// global -mavx2; the dispatcher guarantees these only run when the CPU
// reports both AVX2 and FMA.

#ifdef STRIPHOMOG_X86

namespace avx2 {

__attribute__((target("avx2,fma"))) static double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

__attribute__((target("avx2,fma"))) double dot(const double* x, const double* y,
                                               std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

__attribute__((target("avx2,fma"))) double nrm2sq(const double* x, std::size_t n) {
  return dot(x, x, n);
}

// axpy stays fma-free (separate mul + add, same rounding as the scalar path)
// so elementwise updates are bit-identical whichever ISA is dispatched.
__attribute__((target("avx2"))) void axpy(double a, const double* x, double* y,
                                          std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(x + i)),
                               _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

// Complex vectors are interleaved [re0 im0 re1 im1 ...]; one ymm register
// holds two complex numbers.

__attribute__((target("avx2,fma"))) cplx dotc(const cplx* x, const cplx* y,
                                              std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d accP = _mm256_setzero_pd();  // lanes: xr*yr, xi*yi per pair
  __m256d accQ = _mm256_setzero_pd();  // lanes: xr*yi, xi*yr per pair
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    __m256d ys = _mm256_permute_pd(yv, 0x5);  // swap re/im in each pair
    accP = _mm256_fmadd_pd(xv, yv, accP);
    accQ = _mm256_fmadd_pd(xv, ys, accQ);
  }
  alignas(32) double p[4], q[4];
  _mm256_store_pd(p, accP);
  _mm256_store_pd(q, accQ);
  double re = p[0] + p[1] + p[2] + p[3];
  double im = q[0] - q[1] + q[2] - q[3];
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

__attribute__((target("avx2,fma"))) double nrm2sq(const cplx* x, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  return dot(xd, xd, 2 * n);
}

__attribute__((target("avx2"))) void axpy(cplx a, const cplx* x, cplx* y,
                                          std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const __m256d var = _mm256_set1_pd(a.real());
  const __m256d vai = _mm256_setr_pd(-a.imag(), a.imag(), -a.imag(), a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d xs = _mm256_permute_pd(xv, 0x5);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    // t = a*x with the same association std::complex uses, then y += t
    __m256d t = _mm256_add_pd(_mm256_mul_pd(var, xv), _mm256_mul_pd(vai, xs));
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, t));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

__attribute__((target("avx2,fma"))) void csr_spmv(const int* row_ptr,
                                                  const int* col_idx,
                                                  const double* val, const double* x,
                                                  double* y, int nrows) {
  for (int r = 0; r < nrows; ++r) {
    __m256d acc = _mm256_setzero_pd();
    int j = row_ptr[r];
    const int end = row_ptr[r + 1];
    for (; j + 4 <= end; j += 4) {
      __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(col_idx + j));
      __m256d xv = _mm256_i32gather_pd(x, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(val + j), xv, acc);
    }
    double s = hsum(acc);
    for (; j < end; ++j) s += val[j] * x[col_idx[j]];
    y[r] = s;
  }
}

__attribute__((target("avx2,fma"))) void csr_spmv(const int* row_ptr,
                                                  const int* col_idx, const cplx* val,
                                                  const cplx* x, cplx* y, int nrows) {
  const double* xd = reinterpret_cast<const double*>(x);
  for (int r = 0; r < nrows; ++r) {
    __m256d acc = _mm256_setzero_pd();
    int j = row_ptr[r];
    const int end = row_ptr[r + 1];
    for (; j + 2 <= end; j += 2) {
      __m256d vv = _mm256_loadu_pd(reinterpret_cast<const double*>(val + j));
      __m128d x0 = _mm_loadu_pd(xd + 2 * col_idx[j]);
      __m128d x1 = _mm_loadu_pd(xd + 2 * col_idx[j + 1]);
      __m256d xv = _mm256_set_m128d(x1, x0);
      __m256d xr = _mm256_movedup_pd(xv);                 // [xr xr] per pair
      __m256d xi = _mm256_permute_pd(xv, 0xF);            // [xi xi] per pair
      __m256d vs = _mm256_permute_pd(vv, 0x5);            // [vi vr] per pair
      // (vr+ivi)(xr+ixi) = [vr*xr - vi*xi, vr*xi + vi*xr]
      acc = _mm256_add_pd(acc, _mm256_addsub_pd(_mm256_mul_pd(vv, xr),
                                                _mm256_mul_pd(vs, xi)));
    }
    alignas(32) double t[4];
    _mm256_store_pd(t, acc);
    cplx s{t[0] + t[2], t[1] + t[3]};
    for (; j < end; ++j) s += val[j] * x[col_idx[j]];
    y[r] = s;
  }
}

}  // namespace avx2

#endif  // STRIPHOMOG_X86

// ---- dispatch ------------------------------------------------------------

bool avx2_available() {
#ifdef STRIPHOMOG_X86
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

struct Vtable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*nrm2sq_d)(const double*, std::size_t);
  void (*axpy_d)(double, const double*, double*, std::size_t);
  cplx (*dotc)(const cplx*, const cplx*, std::size_t);
  double (*nrm2sq_z)(const cplx*, std::size_t);
  void (*axpy_z)(cplx, const cplx*, cplx*, std::size_t);
  void (*spmv_d)(const int*, const int*, const double*, const double*, double*, int);
  void (*spmv_z)(const int*, const int*, const cplx*, const cplx*, cplx*, int);
  std::string name;
};

const Vtable kScalar = {scalar::dot,    scalar::nrm2sq, scalar::axpy,
                        scalar::dotc,   scalar::nrm2sq, scalar::axpy,
                        scalar::csr_spmv, scalar::csr_spmv, "scalar"};

#ifdef STRIPHOMOG_X86
const Vtable kAvx2 = {avx2::dot,    avx2::nrm2sq, avx2::axpy,
                      avx2::dotc,   avx2::nrm2sq, avx2::axpy,
                      avx2::csr_spmv, avx2::csr_spmv, "avx2"};
#endif

const Vtable* pick_auto() {
#ifdef STRIPHOMOG_X86
  if (avx2_available()) return &kAvx2;
#endif
  return &kScalar;
}

std::atomic<const Vtable*> g_active{nullptr};

const Vtable& active() {
  const Vtable* v = g_active.load(std::memory_order_acquire);
  if (!v) {
    v = pick_auto();
    g_active.store(v, std::memory_order_release);
  }
  return *v;
}

}  // namespace

const std::string& active_isa() { return active().name; }

void force_isa(const std::string& name) {
  if (name == "auto") {
    g_active.store(pick_auto(), std::memory_order_release);
  } else if (name == "scalar") {
    g_active.store(&kScalar, std::memory_order_release);
  } else if (name == "avx2") {
#ifdef STRIPHOMOG_X86
    if (!avx2_available()) throw std::runtime_error("kern: host lacks AVX2+FMA");
    g_active.store(&kAvx2, std::memory_order_release);
#else
    throw std::runtime_error("kern: avx2 unavailable on this architecture");
#endif
  } else {
    throw std::invalid_argument("kern: unknown isa '" + name + "'");
  }
}

double dot(const double* x, const double* y, std::size_t n) {
  return active().dot(x, y, n);
}
double nrm2sq(const double* x, std::size_t n) { return active().nrm2sq_d(x, n); }
void axpy(double a, const double* x, double* y, std::size_t n) {
  active().axpy_d(a, x, y, n);
}
cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
  return active().dotc(x, y, n);
}
double nrm2sq(const cplx* x, std::size_t n) { return active().nrm2sq_z(x, n); }
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  active().axpy_z(a, x, y, n);
}
void csr_spmv(const int* rp, const int* ci, const double* v, const double* x,
              double* y, int nrows) {
  active().spmv_d(rp, ci, v, x, y, nrows);
}
void csr_spmv(const int* rp, const int* ci, const cplx* v, const cplx* x, cplx* y,
              int nrows) {
  active().spmv_z(rp, ci, v, x, y, nrows);
}

}  // namespace striphomog::kern
