#ifndef ECM_TENSOR_HPP
#define ECM_TENSOR_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace ecm {

// Dense order-k tensor over a finite colour set of size dim, stored flat in
// row-major order (last index fastest). Order 0 is a single scalar. Values
// are immutable after construction except through the named mutators used
// by the decomposition loop.
//
// Symmetric tensors (invariant under every permutation of their indices,
// with exact entry equality) are produced by symmetrize(); consumers that
// require the invariant check it with is_symmetric(). Witness atoms such as
// rank-one products are ordinary tensors and need not be symmetric.
class Tensor {
 public:
  Tensor(int order, int dim);  // zero-filled
  static Tensor from_values(int order, int dim, std::vector<double> values);
  static Tensor scalar(double v, int dim = 1);
  static Tensor basis_vector(int dim, int index);

  int order() const { return order_; }
  int dim() const { return dim_; }
  std::size_t size() const { return vals_.size(); }

  std::span<const double> values() const { return vals_; }
  std::span<double> mutable_values() { return vals_; }
  double operator[](std::size_t flat) const { return vals_[flat]; }

  std::size_t flat_index(std::span<const int> idx) const;
  bool same_shape(const Tensor& o) const {
    return order_ == o.order_ && dim_ == o.dim_;
  }
  bool is_symmetric() const;  // exact entry equality across index permutations

  // contiguous sub-tensor fixing the first `prefix.size()` indices
  std::span<const double> slice_first(std::span<const int> prefix) const;

  // this += a * x  (shape-checked)
  void add_scaled(const Tensor& x, double a);
  void scale(double a);

  // contraction of the last mode with a length-dim vector; order drops by 1
  Tensor contract_last(std::span<const double> v) const;

  // simultaneous mode multiplication: out(i1..ik) = sum g(i1,d1)..g(ik,dk) t(d1..dk)
  // g is dim x dim row-major
  Tensor apply_matrix_all_modes(std::span<const double> g) const;

 private:
  int order_;
  int dim_;
  std::vector<double> vals_;
};

double inner(const Tensor& x, const Tensor& y);
double hilbert_norm(const Tensor& x);

// Average each entry over its index-permutation orbit; every entry of an
// orbit receives the identical double, so the result is exactly invariant.
// Idempotent.
Tensor symmetrize(int order, int dim, std::vector<double> values);
Tensor symmetrize(const Tensor& t);

// t unchanged if its Hilbert norm is <= 1, else t scaled to norm 1
Tensor ball_project(const Tensor& t);

Tensor operator+(const Tensor& a, const Tensor& b);
Tensor operator-(const Tensor& a, const Tensor& b);
Tensor operator*(double a, const Tensor& t);

// rank-one tensor f1 (x) f2 (x) ... (x) fk; factors all length dim
Tensor outer_product(int dim, const std::vector<std::vector<double>>& factors);

}  // namespace ecm

#endif
