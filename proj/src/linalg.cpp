#include "ecm/linalg.hpp"

#include <cmath>

#include "ecm/errors.hpp"

namespace ecm {

SymmetricEigen jacobi_eigh(std::span<const double> a, int n, double tol,
                           int max_sweeps) {
  if (static_cast<int>(a.size()) != n * n)
    throw precondition_error("jacobi_eigh: matrix size must be n*n");
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> b(a.begin(), a.end());
  std::vector<double> v(un * un, 0.0);
  for (std::size_t i = 0; i < un; ++i) v[i * un + i] = 1.0;

  auto off_norm_sq = [&]() {
    double s = 0.0;
    for (std::size_t p = 0; p < un; ++p)
      for (std::size_t q = p + 1; q < un; ++q) s += b[p * un + q] * b[p * un + q];
    return 2.0 * s;
  };
  double frob_sq = 0.0;
  for (double x : b) frob_sq += x * x;
  const double target = tol * tol * (frob_sq + 1e-300);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm_sq() <= target) break;
    for (std::size_t p = 0; p < un; ++p) {
      for (std::size_t q = p + 1; q < un; ++q) {
        const double apq = b[p * un + q];
        if (apq == 0.0) continue;
        const double app = b[p * un + p];
        const double aqq = b[q * un + q];
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t i = 0; i < un; ++i) {
          const double bip = b[i * un + p];
          const double biq = b[i * un + q];
          b[i * un + p] = c * bip - s * biq;
          b[i * un + q] = s * bip + c * biq;
        }
        for (std::size_t i = 0; i < un; ++i) {
          const double bpi = b[p * un + i];
          const double bqi = b[q * un + i];
          b[p * un + i] = c * bpi - s * bqi;
          b[q * un + i] = s * bpi + c * bqi;
        }
        for (std::size_t i = 0; i < un; ++i) {
          const double vip = v[i * un + p];
          const double viq = v[i * un + q];
          v[i * un + p] = c * vip - s * viq;
          v[i * un + q] = s * vip + c * viq;
        }
      }
    }
  }

  SymmetricEigen out;
  out.values.resize(un);
  for (std::size_t i = 0; i < un; ++i) out.values[i] = b[i * un + i];
  out.vectors = std::move(v);
  return out;
}

double orthogonality_defect(std::span<const double> g, int n) {
  const auto un = static_cast<std::size_t>(n);
  double worst = 0.0;
  for (std::size_t i = 0; i < un; ++i) {
    for (std::size_t j = 0; j < un; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < un; ++k) s += g[k * un + i] * g[k * un + j];
      const double d = std::fabs(s - (i == j ? 1.0 : 0.0));
      if (d > worst) worst = d;
    }
  }
  return worst;
}

}  // namespace ecm
