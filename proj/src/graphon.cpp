#include "ecm/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ecm/config.hpp"
#include "ecm/errors.hpp"

namespace ecm {

StepGraphon::StepGraphon(int q_in, std::vector<double> mu_in,
                         std::vector<double> vals_in)
    : q(q_in), mu(std::move(mu_in)), vals(std::move(vals_in)) {
  const auto& tol = Tolerances::defaults();
  if (q < 1) throw precondition_error("step graphon needs q >= 1");
  if (static_cast<int>(mu.size()) != q)
    throw precondition_error("step graphon needs q block measures");
  if (vals.size() != static_cast<std::size_t>(q) * static_cast<std::size_t>(q))
    throw precondition_error("step graphon needs a q x q value matrix");
  double s = 0.0;
  for (double m : mu) {
    if (!(m > 0.0)) throw precondition_error("block measures must be positive");
    s += m;
  }
  if (std::fabs(s - 1.0) > tol.measure_sum)
    throw precondition_error("block measures must sum to 1");
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      if (at(i, j) != at(j, i))
        throw precondition_error("step graphon values must be symmetric");
      if (at(i, j) < 0.0 || at(i, j) > 1.0)
        throw precondition_error("step graphon values must lie in [0,1]");
    }
}

bool StepGraphon::uniform_measure(double tol) const {
  const double u = 1.0 / static_cast<double>(q);
  for (double m : mu)
    if (std::fabs(m - u) > tol) return false;
  return true;
}

double tau(const StepGraphon& w, const SimpleGraph& f) {
  const auto& tol = Tolerances::defaults();
  const int nv = f.n_vertices();
  double total = 1.0;
  for (int i = 0; i < nv; ++i) {
    total *= w.q;
    if (total > tol.budget_enum)
      throw budget_error("tau: q^{|V(F)|} exceeds the enumeration budget");
  }

  std::vector<int> assign(static_cast<std::size_t>(nv), 0);
  // Neumaier-compensated accumulation: the density identity against integer
  // homomorphism counts is checked to absolute 1e-9 after scaling by
  // q^{|V(F)|}, which plain summation cannot reliably meet
  double acc = 0.0;
  double comp = 0.0;
  const auto count = static_cast<std::size_t>(total);
  for (std::size_t c = 0; c < count; ++c) {
    double p = 1.0;
    for (int v = 0; v < nv; ++v) p *= w.mu[static_cast<std::size_t>(assign[static_cast<std::size_t>(v)])];
    for (auto [u, v] : f.edges())
      p *= w.at(assign[static_cast<std::size_t>(u)], assign[static_cast<std::size_t>(v)]);
    const double s = acc + p;
    if (std::fabs(acc) >= std::fabs(p))
      comp += (acc - s) + p;
    else
      comp += (p - s) + acc;
    acc = s;
    for (int v = nv - 1; v >= 0; --v) {
      auto& digit = assign[static_cast<std::size_t>(v)];
      if (++digit < w.q) break;
      digit = 0;
    }
  }
  return acc + comp;
}

StepGraphon graph_to_graphon(const SimpleGraph& g) {
  const int n = g.n_vertices();
  if (n < 1) throw precondition_error("graph_to_graphon needs at least one vertex");
  std::vector<double> mu(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
  std::vector<double> vals(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (auto [u, v] : g.edges()) {
    vals[static_cast<std::size_t>(u) * static_cast<std::size_t>(n) + static_cast<std::size_t>(v)] = 1.0;
    vals[static_cast<std::size_t>(v) * static_cast<std::size_t>(n) + static_cast<std::size_t>(u)] = 1.0;
  }
  return {n, std::move(mu), std::move(vals)};
}

SeminormValue cut_seminorm(const StepGraphon& w) {
  const Tensor x = Tensor::from_values(2, w.q, w.vals);
  return seminorm(x, Dictionary::cut_products(w.q, w.mu));
}

namespace {

// lexicographically smallest relabeling of the value matrix over all block
// permutations; pure data movement, so canon(sigma.w) == canon(w) exactly
std::pair<std::vector<double>, std::vector<int>> canonical_labeling(
    const StepGraphon& w) {
  const auto uq = static_cast<std::size_t>(w.q);
  std::vector<int> perm(uq);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best_perm = perm;
  std::vector<double> best = w.vals;
  std::vector<double> cand(uq * uq);
  while (std::next_permutation(perm.begin(), perm.end())) {
    for (std::size_t i = 0; i < uq; ++i)
      for (std::size_t j = 0; j < uq; ++j)
        cand[i * uq + j] = w.at(perm[i], perm[j]);
    if (std::lexicographical_compare(cand.begin(), cand.end(), best.begin(),
                                     best.end())) {
      best = cand;
      best_perm = perm;
    }
  }
  return {best, best_perm};
}

}  // namespace

CutDistance cut_distance_aligned(const StepGraphon& w1, const StepGraphon& w2) {
  const auto& tol = Tolerances::defaults();
  if (w1.q != w2.q)
    throw precondition_error("cut distance needs equal block counts");
  if (w1.q > 8)
    throw budget_error("cut distance alignment limited to q <= 8");
  if (!w1.uniform_measure(tol.measure_sum) || !w2.uniform_measure(tol.measure_sum))
    throw precondition_error("cut distance alignment needs uniform measures");

  const int q = w1.q;
  const auto uq = static_cast<std::size_t>(q);
  const auto [c1, p1] = canonical_labeling(w1);
  const auto [c2, p2] = canonical_labeling(w2);

  std::vector<int> perm(uq);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> diff(uq * uq);
  double best = -1.0;
  std::vector<int> best_perm = perm;
  do {
    for (std::size_t i = 0; i < uq; ++i)
      for (std::size_t j = 0; j < uq; ++j)
        diff[i * uq + j] =
            c1[i * uq + j] -
            c2[static_cast<std::size_t>(perm[i]) * uq + static_cast<std::size_t>(perm[j])];
    const double v = cut_max_value(q, w1.mu, diff);
    if (best < 0.0 || v < best) {
      best = v;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  // translate the winning alignment of the canonical forms back to a
  // relabeling of w2 against the original w1: w1 ~ p1, w2 ~ p2, and the
  // canonical forms were compared as c1 - perm.c2
  CutDistance out;
  out.value = best;
  out.permutation.resize(uq);
  // c1(i,j) = w1(p1 i, p1 j); c2(perm i, perm j) = w2(p2 perm i, p2 perm j)
  // so block p1(i) of w1 aligns with block p2(perm(i)) of w2
  for (std::size_t i = 0; i < uq; ++i)
    out.permutation[static_cast<std::size_t>(p1[i])] =
        p2[static_cast<std::size_t>(best_perm[i])];
  return out;
}

}  // namespace ecm
