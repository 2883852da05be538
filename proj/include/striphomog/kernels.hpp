#pragma once

// Dense/sparse inner-loop kernels: scalar reference implementations plus
// AVX2+FMA variants selected once at runtime.  Everything downstream
// (residual checks, norms, the Lanczos eigensolver) calls through the
// dispatched entry points so the two implementations stay interchangeable.

#include <complex>
#include <cstddef>
#include <string>

namespace striphomog::kern {

using cplx = std::complex<double>;

// ---- dispatched entry points -------------------------------------------

double dot(const double* x, const double* y, std::size_t n);
double nrm2sq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);

cplx dotc(const cplx* x, const cplx* y, std::size_t n);  // sum conj(x[i])*y[i]
double nrm2sq(const cplx* x, std::size_t n);
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n);

// y = A*x for CSR with nrows rows; row_ptr has nrows+1 entries.
void csr_spmv(const int* row_ptr, const int* col_idx, const double* val,
              const double* x, double* y, int nrows);
void csr_spmv(const int* row_ptr, const int* col_idx, const cplx* val,
              const cplx* x, cplx* y, int nrows);

// Name of the active implementation ("avx2" or "scalar").
const std::string& active_isa();

// Force an implementation for testing: "scalar", "avx2", or "auto".
// Throws std::invalid_argument for unknown names and std::runtime_error

// if "avx2" is requested on a host without AVX2+FMA.
void force_isa(const std::string& name);

// ---- scalar reference (always available) -------------------------------

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
double nrm2sq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
cplx dotc(const cplx* x, const cplx* y, std::size_t n);
double nrm2sq(const cplx* x, std::size_t n);
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n);
void csr_spmv(const int* row_ptr, const int* col_idx, const double* val,
              const double* x, double* y, int nrows);
void csr_spmv(const int* row_ptr, const int* col_idx, const cplx* val,
              const cplx* x, cplx* y, int nrows);
}  // namespace scalar

bool avx2_available();

}  // namespace striphomog::kern
