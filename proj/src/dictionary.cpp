#include "ecm/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ecm/config.hpp"
#include "ecm/errors.hpp"
#include "ecm/kernels.hpp"
#include "ecm/linalg.hpp"
#include "ecm/parallel.hpp"
#include "ecm/rng.hpp"

namespace ecm {

Dictionary Dictionary::finite_set(std::vector<Tensor> atoms) {
  const auto& tol = Tolerances::defaults();
  Dictionary d;
  d.variant_ = Variant::finite_set;
  if (!atoms.empty()) {
    d.order_ = atoms.front().order();
    d.dim_ = atoms.front().dim();
    for (const auto& a : atoms) {
      if (a.order() != d.order_ || a.dim() != d.dim_)
        throw precondition_error("finite-set atoms must share one order and dim");
      if (hilbert_norm(a) > 1.0 + tol.ball)
        throw precondition_error("finite-set atoms must have Hilbert norm <= 1");
    }
  }
  d.atoms_ = std::move(atoms);
  return d;
}

Dictionary Dictionary::rank_one_ball(int order, int dim, SearchBudget budget) {
  if (order < 1) throw precondition_error("rank-one ball needs order >= 1");
  if (dim < 1) throw precondition_error("rank-one ball needs dim >= 1");
  if (budget.restarts < 1 || budget.max_iter < 1)
    throw precondition_error("search budget must be positive");
  Dictionary d;
  d.variant_ = Variant::rank_one_ball;
  d.order_ = order;
  d.dim_ = dim;
  d.budget_ = budget;
  return d;
}

Dictionary Dictionary::cut_products(int q, std::vector<double> mu) {
  const auto& tol = Tolerances::defaults();
  if (q < 1) throw precondition_error("cut dictionary needs q >= 1");
  if (static_cast<int>(mu.size()) != q)
    throw precondition_error("cut dictionary needs q block measures");
  double s = 0.0;
  for (double m : mu) {
    if (!(m > 0.0)) throw precondition_error("block measures must be positive");
    s += m;
  }
  if (std::fabs(s - 1.0) > tol.measure_sum)
    throw precondition_error("block measures must sum to 1");
  Dictionary d;
  d.variant_ = Variant::cut_products;
  d.order_ = 2;
  d.dim_ = q;
  d.q_ = q;
  d.mu_ = std::move(mu);
  return d;
}

bool Dictionary::compatible(const Tensor& x) const {
  switch (variant_) {
    case Variant::finite_set:
      return atoms_.empty() || (x.order() == order_ && x.dim() == dim_);
    case Variant::rank_one_ball:
    case Variant::cut_products:
      return x.order() == order_ && x.dim() == dim_;
  }
  return false;
}

void Dictionary::require_compatible(const Tensor& x) const {
  if (!compatible(x))
    throw precondition_error("tensor shape does not match dictionary");
}

namespace {

SeminormValue seminorm_finite(const Tensor& x, const Dictionary& dict) {
  if (dict.atoms().empty())
    throw precondition_error("seminorm over an empty finite set");
  SeminormValue best;
  best.kind = SeminormValue::Kind::exact;
  best.value = -1.0;
  int idx = 0;
  for (const auto& atom : dict.atoms()) {
    const double v = std::fabs(inner(atom, x));
    if (v > best.value) {  // strictly-greater keeps the first maximiser
      best.value = v;
      best.atom_index = idx;
    }
    ++idx;
  }
  best.witness = dict.atoms()[static_cast<std::size_t>(best.atom_index)];
  return best;
}

// --- cut products -----------------------------------------------------

// Direct per-pair evaluation: the candidate for (S, T) is accumulated in
// row-major (i, j) order, matching what an independent check computes, so a
// sampled pair can never exceed the returned maximum even at ulp level.
SeminormValue cut_direct(const Tensor& x, int q, const std::vector<double>& mu) {
  const auto uq = static_cast<std::size_t>(q);
  std::vector<double> y(uq * uq);
  for (std::size_t i = 0; i < uq; ++i)
    for (std::size_t j = 0; j < uq; ++j)
      y[i * uq + j] = mu[i] * mu[j] * x[i * uq + j];

  double best = -1.0;
  std::uint32_t best_s = 0, best_t = 0;
  const std::uint32_t lim = 1u << q;
  for (std::uint32_t s = 0; s < lim; ++s) {
    for (std::uint32_t t = 0; t < lim; ++t) {
      double acc = 0.0;
      for (int i = 0; i < q; ++i) {
        if (!(s >> i & 1u)) continue;
        for (int j = 0; j < q; ++j)
          if (t >> j & 1u) acc += y[static_cast<std::size_t>(i) * uq + static_cast<std::size_t>(j)];
      }
      const double v = std::fabs(acc);
      if (v > best) {
        best = v;
        best_s = s;
        best_t = t;
      }
    }
  }
  SeminormValue out;
  out.kind = SeminormValue::Kind::exact;
  out.value = best;
  out.cut_s = best_s;
  out.cut_t = best_t;
  return out;
}

// Column-sum shortcut for larger q: for fixed S the optimal T collects the
// positive (or negative) column sums.
SeminormValue cut_colsum(const Tensor& x, int q, const std::vector<double>& mu) {
  const auto uq = static_cast<std::size_t>(q);
  std::vector<double> y(uq * uq);
  for (std::size_t i = 0; i < uq; ++i)
    for (std::size_t j = 0; j < uq; ++j)
      y[i * uq + j] = mu[i] * mu[j] * x[i * uq + j];

  double best = -1.0;
  std::uint32_t best_s = 0, best_t = 0;
  std::vector<double> t_col(uq);
  const std::uint32_t lim = 1u << q;
  for (std::uint32_t s = 0; s < lim; ++s) {
    for (std::size_t j = 0; j < uq; ++j) {
      double acc = 0.0;
      for (int i = 0; i < q; ++i)
        if (s >> i & 1u) acc += y[static_cast<std::size_t>(i) * uq + j];
      t_col[j] = acc;
    }
    double pos = 0.0, neg = 0.0;
    std::uint32_t pos_mask = 0, neg_mask = 0;
    for (int j = 0; j < q; ++j) {
      if (t_col[static_cast<std::size_t>(j)] > 0.0) {
        pos += t_col[static_cast<std::size_t>(j)];
        pos_mask |= 1u << j;
      } else if (t_col[static_cast<std::size_t>(j)] < 0.0) {
        neg -= t_col[static_cast<std::size_t>(j)];
        neg_mask |= 1u << j;
      }
    }
    const double v = std::max(pos, neg);
    std::uint32_t tm = pos > neg ? pos_mask : neg_mask;
    if (pos == neg) tm = std::min(pos_mask, neg_mask);
    if (v > best) {
      best = v;
      best_s = s;
      best_t = tm;
    }
  }
  SeminormValue out;
  out.kind = SeminormValue::Kind::exact;
  out.value = best;
  out.cut_s = best_s;
  out.cut_t = best_t;
  return out;
}

Tensor cut_witness(int q, const std::vector<double>& mu, std::uint32_t s,
                   std::uint32_t t) {
  Tensor w(2, q);
  auto wv = w.mutable_values();
  const auto uq = static_cast<std::size_t>(q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      if ((s >> i & 1u) && (t >> j & 1u))
        wv[static_cast<std::size_t>(i) * uq + static_cast<std::size_t>(j)] =
            mu[static_cast<std::size_t>(i)] * mu[static_cast<std::size_t>(j)];
  return w;
}

SeminormValue seminorm_cut(const Tensor& x, const Dictionary& dict) {
  const int q = dict.q();
  if (q > 14) throw budget_error("cut seminorm enumeration limited to q <= 14");
  SeminormValue out = q <= 10 ? cut_direct(x, q, dict.mu())
                              : cut_colsum(x, q, dict.mu());
  out.witness = cut_witness(q, dict.mu(), out.cut_s, out.cut_t);
  return out;
}

// --- rank-one ball ----------------------------------------------------

SeminormValue rank_one_order1(const Tensor& x) {
  SeminormValue out;
  out.kind = SeminormValue::Kind::exact;
  const double nrm = hilbert_norm(x);
  if (nrm == 0.0) {
    out.witness = Tensor::basis_vector(x.dim(), 0);
    out.value = 0.0;
    return out;
  }
  out.witness = (1.0 / nrm) * x;
  out.value = std::fabs(inner(out.witness, x));
  return out;
}

SeminormValue rank_one_order2(const Tensor& x) {
  // largest singular value via the spectrum of x^T x
  const int n = x.dim();
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> gram(un * un, 0.0);
  for (std::size_t i = 0; i < un; ++i)
    for (std::size_t j = 0; j < un; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < un; ++k) s += x[k * un + i] * x[k * un + j];
      gram[i * un + j] = s;
    }
  const auto eig = jacobi_eigh(gram, n, Tolerances::defaults().eigen_offdiag);
  int best = 0;
  for (int i = 1; i < n; ++i)
    if (eig.values[static_cast<std::size_t>(i)] >
        eig.values[static_cast<std::size_t>(best)])
      best = i;
  const double sigma = std::sqrt(std::max(0.0, eig.values[static_cast<std::size_t>(best)]));

  std::vector<double> v(un), u(un, 0.0);
  for (std::size_t i = 0; i < un; ++i)
    v[i] = eig.vectors[i * un + static_cast<std::size_t>(best)];
  SeminormValue out;
  out.kind = SeminormValue::Kind::exact;
  if (sigma <= 0.0) {
    std::vector<double> e0(un, 0.0);
    e0[0] = 1.0;
    out.witness = outer_product(n, {e0, e0});
    out.value = std::fabs(inner(out.witness, x));
    return out;
  }
  for (std::size_t i = 0; i < un; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < un; ++j) s += x[i * un + j] * v[j];
    u[i] = s / sigma;
  }
  const double unrm = std::sqrt(kernels::nrm2sq(u.data(), un));
  if (unrm > 0.0)
    for (auto& c : u) c /= unrm;
  out.witness = outer_product(n, {u, v});
  out.value = std::fabs(inner(out.witness, x));
  return out;
}

struct AlsResult {
  double value = -1.0;
  std::vector<std::vector<double>> factors;
};

AlsResult als_restart(const Tensor& x, std::uint64_t seed, bool ones_start,
                      int max_iter, double tol) {
  const int k = x.order();
  const int n = x.dim();
  const auto un = static_cast<std::size_t>(n);
  Rng rng(seed);
  std::vector<std::vector<double>> f(static_cast<std::size_t>(k),
                                     std::vector<double>(un));
  for (auto& fac : f) {
    if (ones_start)
      std::fill(fac.begin(), fac.end(), 1.0 / std::sqrt(static_cast<double>(n)));
    else {
      for (auto& c : fac) c = rng.gaussian();
      const double nr = std::sqrt(kernels::nrm2sq(fac.data(), un));
      if (nr > 0.0)
        for (auto& c : fac) c /= nr;
      else
        fac[0] = 1.0;
    }
  }

  auto gradient = [&](int mode) {
    Tensor cur = x;
    for (int m = k - 1; m > mode; --m) cur = cur.contract_last(f[static_cast<std::size_t>(m)]);
    for (int m = 0; m < mode; ++m) {
      // mode 0 of the remaining tensor is original mode m
      Tensor next(cur.order() - 1, n);
      const std::size_t inner_sz = next.size();
      auto nv = next.mutable_values();
      for (std::size_t r = 0; r < inner_sz; ++r) {
        double s = 0.0;
        for (std::size_t d = 0; d < un; ++d)
          s += cur[d * inner_sz + r] * f[static_cast<std::size_t>(m)][d];
        nv[r] = s;
      }
      cur = std::move(next);
    }
    return cur;  // order-1 tensor: gradient for `mode`
  };

  double value = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    double last = 0.0;
    for (int mode = 0; mode < k; ++mode) {
      Tensor g = gradient(mode);
      const double nr = hilbert_norm(g);
      if (nr > 0.0) {
        auto gv = g.values();
        for (std::size_t i = 0; i < un; ++i)
          f[static_cast<std::size_t>(mode)][i] = gv[i] / nr;
      }
      last = nr;
    }
    if (std::fabs(last - value) <= tol) {
      value = last;
      break;
    }
    value = last;
  }
  AlsResult out;
  out.value = value;
  out.factors = std::move(f);
  return out;
}

SeminormValue rank_one_search(const Tensor& x, const Dictionary& dict) {
  const auto& tol = Tolerances::defaults();
  const int restarts = dict.budget().restarts;
  const auto results = parallel_map<AlsResult>(
      static_cast<std::size_t>(restarts), [&](std::size_t r) {
        const std::uint64_t seed = 0x9e3779b97f4a7c15ull ^ (r * 0xbf58476d1ce4e5b9ull);
        return als_restart(x, seed, r == 0, dict.budget().max_iter, tol.als);
      });
  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r)
    if (results[r].value > results[best].value) best = r;  // ties keep lowest index

  SeminormValue out;
  out.kind = SeminormValue::Kind::lower_bound;
  out.witness = outer_product(x.dim(), results[best].factors);
  out.value = std::fabs(inner(out.witness, x));
  return out;
}

}  // namespace

SeminormValue seminorm(const Tensor& x, const Dictionary& dict) {
  dict.require_compatible(x);
  switch (dict.variant()) {
    case Dictionary::Variant::finite_set:
      return seminorm_finite(x, dict);
    case Dictionary::Variant::cut_products:
      return seminorm_cut(x, dict);
    case Dictionary::Variant::rank_one_ball:
      if (dict.order() == 1) return rank_one_order1(x);
      if (dict.order() == 2) return rank_one_order2(x);
      return rank_one_search(x, dict);
  }
  throw error("unreachable dictionary variant");
}

double cut_max_value(int q, const std::vector<double>& mu,
                     const std::vector<double>& vals) {
  const auto uq = static_cast<std::size_t>(q);
  if (q > 14) throw budget_error("cut seminorm enumeration limited to q <= 14");
  std::vector<double> t_col(uq);
  double best = 0.0;
  const std::uint32_t lim = 1u << q;
  for (std::uint32_t s = 1; s < lim; ++s) {
    for (std::size_t j = 0; j < uq; ++j) {
      double acc = 0.0;
      for (int i = 0; i < q; ++i)
        if (s >> i & 1u)
          acc += mu[static_cast<std::size_t>(i)] * mu[j] *
                 vals[static_cast<std::size_t>(i) * uq + j];
      t_col[j] = acc;
    }
    double pos = 0.0, neg = 0.0;
    for (std::size_t j = 0; j < uq; ++j) {
      if (t_col[j] > 0.0) pos += t_col[j];
      else neg -= t_col[j];
    }
    best = std::max({best, pos, neg});
  }
  return best;
}

}  // namespace ecm
