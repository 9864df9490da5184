#include "ecm/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ecm/config.hpp"
#include "ecm/errors.hpp"
#include "ecm/kernels.hpp"

namespace ecm {

namespace {

std::size_t checked_size(int order, int dim) {
  if (order < 0) throw precondition_error("tensor order must be >= 0");
  if (dim < 1) throw precondition_error("tensor dim must be >= 1");
  const double budget = Tolerances::defaults().budget_values;
  double s = 1.0;
  for (int i = 0; i < order; ++i) {
    s *= dim;
    if (s > budget)
      throw budget_error("dense tensor too large: dim^order exceeds " +
                         std::to_string(static_cast<long long>(budget)));
  }
  return static_cast<std::size_t>(s);
}

void check_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) throw precondition_error("tensor entries must be finite");
}

}  // namespace

Tensor::Tensor(int order, int dim)
    : order_(order), dim_(dim), vals_(checked_size(order, dim), 0.0) {}

Tensor Tensor::from_values(int order, int dim, std::vector<double> values) {
  Tensor t(order, dim);
  if (values.size() != t.vals_.size())
    throw precondition_error("value array length does not match dim^order");
  check_finite(values);
  t.vals_ = std::move(values);
  return t;
}

Tensor Tensor::scalar(double v, int dim) { return from_values(0, dim, {v}); }

Tensor Tensor::basis_vector(int dim, int index) {
  Tensor t(1, dim);
  t.vals_.at(static_cast<std::size_t>(index)) = 1.0;
  return t;
}

std::size_t Tensor::flat_index(std::span<const int> idx) const {
  std::size_t flat = 0;
  for (int i : idx) flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  return flat;
}

std::span<const double> Tensor::slice_first(std::span<const int> prefix) const {
  const int l = static_cast<int>(prefix.size());
  std::size_t tail = 1;
  for (int i = 0; i < order_ - l; ++i) tail *= static_cast<std::size_t>(dim_);
  const std::size_t off = flat_index(prefix) * tail;
  return {vals_.data() + off, tail};
}

bool Tensor::is_symmetric() const {
  if (order_ <= 1) return true;
  std::vector<int> idx(static_cast<std::size_t>(order_), 0);
  // walk canonical (non-decreasing) tuples; compare the whole orbit of each
  while (true) {
    const double ref = vals_[flat_index(idx)];
    std::vector<int> perm = idx;
    do {
      if (vals_[flat_index(perm)] != ref) return false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    // next non-decreasing tuple
    int pos = order_ - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == dim_ - 1) --pos;
    if (pos < 0) break;
    const int v = idx[static_cast<std::size_t>(pos)] + 1;
    for (int i = pos; i < order_; ++i) idx[static_cast<std::size_t>(i)] = v;
  }
  return true;
}

void Tensor::add_scaled(const Tensor& x, double a) {
  if (!same_shape(x)) throw precondition_error("tensor shape mismatch in add_scaled");
  kernels::axpy(a, x.vals_.data(), vals_.data(), vals_.size());
}

void Tensor::scale(double a) { kernels::scal(a, vals_.data(), vals_.size()); }

Tensor Tensor::contract_last(std::span<const double> v) const {
  if (order_ < 1) throw precondition_error("contract_last needs order >= 1");
  if (static_cast<int>(v.size()) != dim_)
    throw precondition_error("contract_last vector length must equal dim");
  Tensor out(order_ - 1, dim_);
  const std::size_t rows = out.vals_.size();
  for (std::size_t r = 0; r < rows; ++r)
    out.vals_[r] = kernels::dot(vals_.data() + r * static_cast<std::size_t>(dim_),
                                v.data(), v.size());
  return out;
}

Tensor Tensor::apply_matrix_all_modes(std::span<const double> g) const {
  if (static_cast<int>(g.size()) != dim_ * dim_)
    throw precondition_error("matrix size must be dim x dim");
  const auto n = static_cast<std::size_t>(dim_);
  Tensor cur = *this;
  // one mode at a time; after transforming the last mode, rotate it to the
  // front so each original mode takes its turn at the contiguous position
  for (int m = 0; m < order_; ++m) {
    Tensor next(order_, dim_);
    const std::size_t rows = cur.vals_.size() / n;
    for (std::size_t r = 0; r < rows; ++r) {
      const double* src = cur.vals_.data() + r * n;
      for (std::size_t i = 0; i < n; ++i) {
        // next layout: transformed index first, remaining indices after
        next.vals_[i * rows + r] = kernels::dot(g.data() + i * n, src, n);
      }
    }
    cur = std::move(next);
  }
  return cur;  // order_ rotations restore the original axis order
}

double inner(const Tensor& x, const Tensor& y) {
  if (!x.same_shape(y)) throw precondition_error("tensor shape mismatch in inner");
  return kernels::dot(x.values().data(), y.values().data(), x.size());
}

double hilbert_norm(const Tensor& x) {
  return std::sqrt(kernels::nrm2sq(x.values().data(), x.size()));
}

Tensor symmetrize(int order, int dim, std::vector<double> values) {
  Tensor t = Tensor::from_values(order, dim, std::move(values));
  return symmetrize(t);
}

Tensor symmetrize(const Tensor& t) {
  if (t.order() <= 1) return t;
  const int k = t.order();
  const int n = t.dim();
  Tensor out(k, n);
  auto ov = out.mutable_values();
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  while (true) {
    // orbit of the canonical tuple: sum, then write the mean everywhere
    double acc = 0.0;
    std::size_t count = 0;
    std::vector<int> perm = idx;
    do {
      acc += t[t.flat_index(perm)];
      ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    const double mean = acc / static_cast<double>(count);
    perm = idx;
    do {
      ov[t.flat_index(perm)] = mean;
    } while (std::next_permutation(perm.begin(), perm.end()));
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - 1) --pos;
    if (pos < 0) break;
    const int v = idx[static_cast<std::size_t>(pos)] + 1;
    for (int i = pos; i < k; ++i) idx[static_cast<std::size_t>(i)] = v;
  }
  return out;
}

Tensor ball_project(const Tensor& t) {
  const double nrm = hilbert_norm(t);
  if (nrm <= 1.0) return t;
  Tensor out = t;
  out.scale(1.0 / nrm);
  return out;
}

Tensor operator+(const Tensor& a, const Tensor& b) {
  Tensor out = a;
  out.add_scaled(b, 1.0);
  return out;
}

Tensor operator-(const Tensor& a, const Tensor& b) {
  Tensor out = a;
  out.add_scaled(b, -1.0);
  return out;
}

Tensor operator*(double a, const Tensor& t) {
  Tensor out = t;
  out.scale(a);
  return out;
}

Tensor outer_product(int dim, const std::vector<std::vector<double>>& factors) {
  const int k = static_cast<int>(factors.size());
  for (const auto& f : factors)
    if (static_cast<int>(f.size()) != dim)
      throw precondition_error("outer_product factor length must equal dim");
  Tensor out(k, dim);
  auto ov = out.mutable_values();
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    double p = 1.0;
    for (int m = 0; m < k; ++m) p *= factors[static_cast<std::size_t>(m)][static_cast<std::size_t>(idx[static_cast<std::size_t>(m)])];
    ov[flat] = p;
    for (int m = k - 1; m >= 0; --m) {
      auto& c = idx[static_cast<std::size_t>(m)];
      if (++c < dim) break;
      c = 0;
    }
  }
  return out;
}

bool close_rel(double a, double b, double tol) {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= tol * scale;
}

}  // namespace ecm
