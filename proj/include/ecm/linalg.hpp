#ifndef ECM_LINALG_HPP
#define ECM_LINALG_HPP

#include <span>
#include <vector>

namespace ecm {

// Eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.
// `vectors` is row-major with eigenvector c stored as column c, so
// a = V diag(values) V^T up to the sweep tolerance.
struct SymmetricEigen {
  std::vector<double> values;
  std::vector<double> vectors;
};

SymmetricEigen jacobi_eigh(std::span<const double> a, int n,
                           double tol = 1e-12, int max_sweeps = 100);

// max_ij |g^T g - I|_ij for a row-major n x n matrix
double orthogonality_defect(std::span<const double> g, int n);

}  // namespace ecm

#endif
