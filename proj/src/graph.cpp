#include "ecm/graph.hpp"

#include <algorithm>
#include <set>

#include "ecm/errors.hpp"

namespace ecm {

SimpleGraph::SimpleGraph(int n_vertices, std::vector<std::pair<int, int>> edges)
    : n_(n_vertices) {
  if (n_ < 0) throw precondition_error("graph needs n_vertices >= 0");
  incidence_.resize(static_cast<std::size_t>(n_));
  std::set<std::pair<int, int>> seen;
  edges_.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_)
      throw precondition_error("edge endpoint out of range");
    if (u == v) throw precondition_error("loops are not allowed");
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second)
      throw precondition_error("parallel edges are not allowed");
    const int id = static_cast<int>(edges_.size());
    edges_.emplace_back(u, v);
    incidence_[static_cast<std::size_t>(u)].push_back(id);
    incidence_[static_cast<std::size_t>(v)].push_back(id);
  }
}

int SimpleGraph::max_degree() const {
  int d = 0;
  for (const auto& inc : incidence_) d = std::max(d, static_cast<int>(inc.size()));
  return d;
}

void SimpleGraph::permute_incidence(int v, const std::vector<int>& perm) {
  auto& inc = incidence_.at(static_cast<std::size_t>(v));
  if (perm.size() != inc.size())
    throw precondition_error("incidence permutation has wrong length");
  std::vector<int> next(inc.size());
  for (std::size_t i = 0; i < perm.size(); ++i)
    next[i] = inc[static_cast<std::size_t>(perm[i])];
  inc = std::move(next);
}

SimpleGraph SimpleGraph::complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return {n, std::move(e)};
}

SimpleGraph SimpleGraph::cycle(int n) {
  if (n < 3) throw precondition_error("cycle needs n >= 3");
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u) e.emplace_back(u, (u + 1) % n);
  return {n, std::move(e)};
}

SimpleGraph SimpleGraph::path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u + 1 < n; ++u) e.emplace_back(u, u + 1);
  return {n, std::move(e)};
}

SimpleGraph SimpleGraph::disjoint_union(const SimpleGraph& a, const SimpleGraph& b) {
  std::vector<std::pair<int, int>> e = a.edges_;
  for (auto [u, v] : b.edges_) e.emplace_back(u + a.n_, v + a.n_);
  return {a.n_ + b.n_, std::move(e)};
}

std::vector<SimpleGraph> SimpleGraph::all_labeled(int n) {
  std::vector<std::pair<int, int>> slots;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) slots.emplace_back(u, v);
  const std::size_t m = slots.size();
  std::vector<SimpleGraph> out;
  out.reserve(static_cast<std::size_t>(1) << m);
  for (std::size_t mask = 0; mask < (static_cast<std::size_t>(1) << m); ++mask) {
    std::vector<std::pair<int, int>> e;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1u) e.push_back(slots[i]);
    out.emplace_back(n, std::move(e));
  }
  return out;
}

std::vector<SimpleGraph> SimpleGraph::all_labeled_up_to(int n_max) {
  std::vector<SimpleGraph> out;
  for (int n = 0; n <= n_max; ++n) {
    auto g = all_labeled(n);
    out.insert(out.end(), std::make_move_iterator(g.begin()),
               std::make_move_iterator(g.end()));
  }
  return out;
}

}  // namespace ecm
