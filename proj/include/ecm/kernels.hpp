#ifndef ECM_KERNELS_HPP
#define ECM_KERNELS_HPP

#include <cstddef>

// Dense double-precision kernels behind every inner loop in the library.
// Two implementations exist: a scalar reference and an AVX2/FMA variant.
// The dispatched entry points pick one at startup based on the CPU; set
// ECM_KERNELS=scalar in the environment to force the reference path.
// SIMD and scalar results differ only by floating-point reassociation;
// tests/test_kernels.cpp pins the allowed gap.

namespace ecm::kernels {

double dot(const double* x, const double* y, std::size_t n);
double nrm2sq(const double* x, std::size_t n);
double sum(const double* x, std::size_t n);
// y += a * x
void axpy(double a, const double* x, double* y, std::size_t n);
void scal(double a, double* x, std::size_t n);

bool avx2_available();
const char* active_backend();  // "avx2" or "scalar"

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
double nrm2sq(const double* x, std::size_t n);
double sum(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scal(double a, double* x, std::size_t n);
}  // namespace scalar

// Defined only when the binary carries AVX2 code; guard calls with
// avx2_available().
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
double nrm2sq(const double* x, std::size_t n);
double sum(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scal(double a, double* x, std::size_t n);
}  // namespace avx2

}  // namespace ecm::kernels

#endif
