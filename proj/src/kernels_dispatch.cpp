#include "ecm/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace ecm::kernels {

namespace {

struct Backend {
  double (*dot)(const double*, const double*, std::size_t);
  double (*nrm2sq)(const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scal)(double, double*, std::size_t);
  const char* name;
};

constexpr Backend kScalar{scalar::dot, scalar::nrm2sq, scalar::sum,
                          scalar::axpy, scalar::scal, "scalar"};
constexpr Backend kAvx2{avx2::dot, avx2::nrm2sq, avx2::sum,
                        avx2::axpy, avx2::scal, "avx2"};

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Backend& pick() {
  static const Backend& chosen = []() -> const Backend& {
    const char* env = std::getenv("ECM_KERNELS");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return kScalar;
    return cpu_has_avx2() ? kAvx2 : kScalar;
  }();
  return chosen;
}

}  // namespace

bool avx2_available() { return cpu_has_avx2(); }
const char* active_backend() { return pick().name; }

double dot(const double* x, const double* y, std::size_t n) { return pick().dot(x, y, n); }
double nrm2sq(const double* x, std::size_t n) { return pick().nrm2sq(x, n); }
double sum(const double* x, std::size_t n) { return pick().sum(x, n); }
void axpy(double a, const double* x, double* y, std::size_t n) { pick().axpy(a, x, y, n); }
void scal(double a, double* x, std::size_t n) { pick().scal(a, x, n); }

}  // namespace ecm::kernels
