#include "ecm/vertex_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ecm/config.hpp"
#include "ecm/errors.hpp"
#include "ecm/kernels.hpp"
#include "ecm/parallel.hpp"

namespace ecm {

EdgeModel::EdgeModel(int dim, std::vector<Tensor> levels) : dim_(dim) {
  if (dim_ < 1) throw precondition_error("edge model needs dim >= 1");
  if (levels.empty()) throw precondition_error("edge model needs at least level 0");
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const Tensor& t = levels[k];
    if (t.order() != static_cast<int>(k))
      throw precondition_error("edge model level " + std::to_string(k) +
                               " must have order " + std::to_string(k));
    if (t.dim() != dim_)
      throw precondition_error("edge model levels must share the colour count");
    if (!t.is_symmetric())
      throw precondition_error("edge model level " + std::to_string(k) +
                               " is not symmetric");
  }
  levels_ = std::move(levels);
}

VertexAssignment::VertexAssignment(int dim, std::vector<Tensor> per_vertex)
    : dim_(dim) {
  if (dim_ < 1) throw precondition_error("vertex assignment needs dim >= 1");
  for (const auto& t : per_vertex) {
    if (t.dim() != dim_)
      throw precondition_error("vertex tensors must share the colour count");
    if (!t.is_symmetric())
      throw precondition_error("vertex tensors must be symmetric");
  }
  tensors_ = std::move(per_vertex);
}

VertexAssignment VertexAssignment::with_vertex(int v, Tensor t) const {
  std::vector<Tensor> copy = tensors_;
  copy.at(static_cast<std::size_t>(v)) = std::move(t);
  return {dim_, std::move(copy)};
}

namespace {

std::size_t pow_checked(int base, int exp, double budget, const char* what) {
  double s = 1.0;
  for (int i = 0; i < exp; ++i) {
    s *= base;
    if (s > budget)
      throw budget_error(std::string(what) + ": " + std::to_string(base) + "^" +
                         std::to_string(exp) + " exceeds the enumeration budget");
  }
  return static_cast<std::size_t>(s);
}

struct VertexFactor {
  const Tensor* tensor = nullptr;
  std::vector<int> edge_ids;        // sorted ascending
  std::vector<std::size_t> stride;  // dim^(deg-1-j) per position
};

std::vector<VertexFactor> make_factors(const std::vector<const Tensor*>& per_vertex,
                                       const SimpleGraph& f, int dim) {
  std::vector<VertexFactor> out(static_cast<std::size_t>(f.n_vertices()));
  for (int v = 0; v < f.n_vertices(); ++v) {
    auto& vf = out[static_cast<std::size_t>(v)];
    vf.tensor = per_vertex[static_cast<std::size_t>(v)];
    vf.edge_ids = f.delta(v);
    std::ranges::sort(vf.edge_ids);
    const int deg = static_cast<int>(vf.edge_ids.size());
    vf.stride.resize(vf.edge_ids.size());
    std::size_t s = 1;
    for (int j = deg - 1; j >= 0; --j) {
      vf.stride[static_cast<std::size_t>(j)] = s;
      s *= static_cast<std::size_t>(dim);
    }
  }
  return out;
}

// deterministic blocked sum over all dim^m colourings: per-block partial
// sums are combined by a pairwise tree, so the value is independent of how
// blocks are scheduled across threads
template <typename PerColouring>
double brute_sum(int dim, int m, std::size_t total, PerColouring&& term) {
  constexpr std::size_t kBlock = 8192;
  const std::size_t nblocks = total == 0 ? 0 : (total - 1) / kBlock + 1;
  auto block_sum = [&](std::size_t b) {
    const std::size_t begin = b * kBlock;
    const std::size_t end = std::min(total, begin + kBlock);
    std::vector<int> col(static_cast<std::size_t>(m), 0);
    std::size_t rem = begin;
    for (int e = m - 1; e >= 0; --e) {
      col[static_cast<std::size_t>(e)] = static_cast<int>(rem % static_cast<std::size_t>(dim));
      rem /= static_cast<std::size_t>(dim);
    }
    double acc = 0.0;
    for (std::size_t c = begin; c < end; ++c) {
      acc += term(col);
      for (int e = m - 1; e >= 0; --e) {
        auto& digit = col[static_cast<std::size_t>(e)];
        if (++digit < dim) break;
        digit = 0;
      }
    }
    return acc;
  };
  return tree_reduce_sum(parallel_map<double>(nblocks, block_sum));
}

double evaluate_brute(const std::vector<const Tensor*>& per_vertex,
                      const SimpleGraph& f, int dim) {
  const auto& tol = Tolerances::defaults();
  const std::size_t total =
      pow_checked(dim, f.n_edges(), tol.budget_enum, "brute partition function");
  const auto factors = make_factors(per_vertex, f, dim);
  return brute_sum(dim, f.n_edges(), total, [&](const std::vector<int>& col) {
    double p = 1.0;
    for (const auto& vf : factors) {
      std::size_t flat = 0;
      for (std::size_t j = 0; j < vf.edge_ids.size(); ++j)
        flat += static_cast<std::size_t>(col[static_cast<std::size_t>(vf.edge_ids[j])]) * vf.stride[j];
      p *= (*vf.tensor)[flat];
    }
    return p;
  });
}

// --- contraction engine -------------------------------------------------

struct Factor {
  std::vector<int> scope;  // variable (edge) ids, sorted ascending
  std::vector<double> vals;
};

std::size_t scope_size(const std::vector<int>& scope, int dim) {
  double s = 1.0;
  for (std::size_t i = 0; i < scope.size(); ++i) {
    s *= dim;
    if (s > Tolerances::defaults().budget_values)
      throw budget_error("contraction intermediate exceeds the storage budget");
  }
  return static_cast<std::size_t>(s);
}

Factor multiply_and_sum_out(const std::vector<const Factor*>& parts, int var,
                            int dim) {
  std::vector<int> uni;
  for (const Factor* f : parts)
    for (int v : f->scope)
      if (std::find(uni.begin(), uni.end(), v) == uni.end()) uni.push_back(v);
  std::ranges::sort(uni);

  std::vector<int> rest;
  for (int v : uni)
    if (v != var) rest.push_back(v);

  Factor out;
  out.scope = rest;
  out.vals.assign(scope_size(rest, dim), 0.0);

  // strides of each part factor with respect to (rest..., var) iteration
  const std::size_t nrest = rest.size();
  std::vector<std::vector<std::size_t>> stride_rest(parts.size(),
                                                    std::vector<std::size_t>(nrest, 0));
  std::vector<std::size_t> stride_var(parts.size(), 0);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const auto& scope = parts[p]->scope;
    std::vector<std::size_t> s(scope.size());
    std::size_t acc = 1;
    for (int j = static_cast<int>(scope.size()) - 1; j >= 0; --j) {
      s[static_cast<std::size_t>(j)] = acc;
      acc *= static_cast<std::size_t>(dim);
    }
    for (std::size_t j = 0; j < scope.size(); ++j) {
      if (scope[j] == var) {
        stride_var[p] = s[j];
      } else {
        const auto pos = static_cast<std::size_t>(
            std::find(rest.begin(), rest.end(), scope[j]) - rest.begin());
        stride_rest[p][pos] = s[j];
      }
    }
  }

  std::vector<int> idx(nrest, 0);
  std::vector<std::size_t> base(parts.size(), 0);
  for (std::size_t flat = 0; flat < out.vals.size(); ++flat) {
    for (std::size_t p = 0; p < parts.size(); ++p) {
      base[p] = 0;
      for (std::size_t j = 0; j < nrest; ++j)
        base[p] += static_cast<std::size_t>(idx[j]) * stride_rest[p][j];
    }
    double acc = 0.0;
    for (int d = 0; d < dim; ++d) {
      double prod = 1.0;
      for (std::size_t p = 0; p < parts.size(); ++p)
        prod *= parts[p]->vals[base[p] + static_cast<std::size_t>(d) * stride_var[p]];
      acc += prod;
    }
    out.vals[flat] = acc;
    for (int j = static_cast<int>(nrest) - 1; j >= 0; --j) {
      auto& digit = idx[static_cast<std::size_t>(j)];
      if (++digit < dim) break;
      digit = 0;
    }
  }
  return out;
}

// greedy min-fill over the edge-variable interaction graph, lowest edge id
// on ties
std::vector<int> min_fill_order(std::vector<std::vector<int>> scopes, int m) {
  std::vector<int> order;
  std::vector<bool> eliminated(static_cast<std::size_t>(m), false);
  for (int round = 0; round < m; ++round) {
    // adjacency from live scopes
    std::vector<std::set<int>> adj(static_cast<std::size_t>(m));
    for (const auto& scope : scopes)
      for (int a : scope)
        for (int b : scope)
          if (a != b) adj[static_cast<std::size_t>(a)].insert(b);

    int best = -1;
    long best_fill = 0;
    for (int v = 0; v < m; ++v) {
      if (eliminated[static_cast<std::size_t>(v)]) continue;
      const auto& nb = adj[static_cast<std::size_t>(v)];
      long fill = 0;
      for (auto it = nb.begin(); it != nb.end(); ++it)
        for (auto jt = std::next(it); jt != nb.end(); ++jt)
          if (!adj[static_cast<std::size_t>(*it)].contains(*jt)) ++fill;
      if (best < 0 || fill < best_fill) {
        best = v;
        best_fill = fill;
      }
    }
    order.push_back(best);
    eliminated[static_cast<std::size_t>(best)] = true;

    // merge scopes containing best
    std::vector<int> merged;
    std::vector<std::vector<int>> next;
    for (auto& scope : scopes) {
      if (std::find(scope.begin(), scope.end(), best) != scope.end()) {
        for (int v : scope)
          if (v != best && std::find(merged.begin(), merged.end(), v) == merged.end())
            merged.push_back(v);
      } else {
        next.push_back(std::move(scope));
      }
    }
    std::ranges::sort(merged);
    next.push_back(std::move(merged));
    scopes = std::move(next);
  }
  return order;
}

double evaluate_contract(const std::vector<const Tensor*>& per_vertex,
                         const SimpleGraph& f, int dim) {
  std::vector<Factor> live;
  for (int v = 0; v < f.n_vertices(); ++v) {
    Factor fac;
    fac.scope = f.delta(v);
    std::ranges::sort(fac.scope);
    const Tensor& t = *per_vertex[static_cast<std::size_t>(v)];
    // modes follow sorted edge ids; symmetry makes the raw values correct
    fac.vals.assign(t.values().begin(), t.values().end());
    live.push_back(std::move(fac));
  }

  std::vector<std::vector<int>> scopes;
  for (const auto& fac : live) scopes.push_back(fac.scope);
  const std::vector<int> order = min_fill_order(std::move(scopes), f.n_edges());

  for (int var : order) {
    std::vector<const Factor*> parts;
    std::vector<Factor> keep;
    for (auto& fac : live) {
      if (std::find(fac.scope.begin(), fac.scope.end(), var) != fac.scope.end())
        parts.push_back(&fac);
      else
        keep.push_back(std::move(fac));
    }
    Factor merged = multiply_and_sum_out(parts, var, dim);
    keep.push_back(std::move(merged));
    live = std::move(keep);
  }

  double prod = 1.0;
  for (const auto& fac : live) prod *= fac.vals.at(0);
  return prod;
}

std::vector<const Tensor*> model_slots(const EdgeModel& model, const SimpleGraph& f) {
  if (f.max_degree() > model.max_order())
    throw precondition_error("graph degree " + std::to_string(f.max_degree()) +
                             " exceeds the model's max order " +
                             std::to_string(model.max_order()));
  std::vector<const Tensor*> slots;
  slots.reserve(static_cast<std::size_t>(f.n_vertices()));
  for (int v = 0; v < f.n_vertices(); ++v)
    slots.push_back(&model.level(f.degree(v)));
  return slots;
}

std::vector<const Tensor*> assignment_slots(const VertexAssignment& h,
                                            const SimpleGraph& f,
                                            bool exact_orders) {
  if (h.size() != f.n_vertices())
    throw precondition_error("assignment size does not match the vertex count");
  std::vector<const Tensor*> slots;
  for (int v = 0; v < f.n_vertices(); ++v) {
    const Tensor& t = h.at(v);
    if (exact_orders && t.order() != f.degree(v))
      throw precondition_error("vertex " + std::to_string(v) + " tensor order " +
                               std::to_string(t.order()) + " != degree " +
                               std::to_string(f.degree(v)));
    if (!exact_orders && t.order() < f.degree(v))
      throw precondition_error("vertex tensor order below degree");
    slots.push_back(&t);
  }
  return slots;
}

}  // namespace

double partition_function(const EdgeModel& model, const SimpleGraph& f,
                          Engine engine) {
  const auto slots = model_slots(model, f);
  return engine == Engine::brute ? evaluate_brute(slots, f, model.dim())
                                 : evaluate_contract(slots, f, model.dim());
}

double pi_f(const VertexAssignment& h, const SimpleGraph& f, Engine engine) {
  const auto slots = assignment_slots(h, f, /*exact_orders=*/true);
  return engine == Engine::brute ? evaluate_brute(slots, f, h.dim())
                                 : evaluate_contract(slots, f, h.dim());
}

std::vector<int> contraction_order(const SimpleGraph& f) {
  std::vector<std::vector<int>> scopes;
  for (int v = 0; v < f.n_vertices(); ++v) {
    auto scope = f.delta(v);
    std::ranges::sort(scope);
    scopes.push_back(std::move(scope));
  }
  return min_fill_order(std::move(scopes), f.n_edges());
}

BoundCheck cs_bound_check(const VertexAssignment& h, const SimpleGraph& f) {
  const auto& tol = Tolerances::defaults();
  const auto slots = assignment_slots(h, f, /*exact_orders=*/false);
  const int dim = h.dim();

  // budget: colourings times the slice-norm work per colouring
  double per_col = 0.0;
  for (int v = 0; v < f.n_vertices(); ++v) {
    double tail = 1.0;
    for (int i = 0; i < h.at(v).order() - f.degree(v); ++i) tail *= dim;
    per_col += tail;
  }
  const std::size_t total =
      pow_checked(dim, f.n_edges(), tol.budget_enum, "cs bound check");
  if (static_cast<double>(total) * std::max(1.0, per_col) > tol.budget_enum)
    throw budget_error("cs bound check exceeds the enumeration budget");

  std::vector<std::vector<int>> sorted_delta(static_cast<std::size_t>(f.n_vertices()));
  for (int v = 0; v < f.n_vertices(); ++v) {
    sorted_delta[static_cast<std::size_t>(v)] = f.delta(v);
    std::ranges::sort(sorted_delta[static_cast<std::size_t>(v)]);
  }

  BoundCheck out;
  out.lhs = brute_sum(dim, f.n_edges(), total, [&](const std::vector<int>& col) {
    double p = 1.0;
    std::vector<int> prefix;
    for (int v = 0; v < f.n_vertices(); ++v) {
      prefix.clear();
      for (int e : sorted_delta[static_cast<std::size_t>(v)])
        prefix.push_back(col[static_cast<std::size_t>(e)]);
      const auto slice = slots[static_cast<std::size_t>(v)]->slice_first(prefix);
      p *= std::sqrt(kernels::nrm2sq(slice.data(), slice.size()));
    }
    return p;
  });

  out.rhs = 1.0;
  for (int v = 0; v < f.n_vertices(); ++v) out.rhs *= hilbert_norm(h.at(v));
  out.holds = out.lhs <= out.rhs + tol.abs_eq;
  return out;
}

BoundCheck lipschitz_bound_check(const VertexAssignment& g,
                                 const VertexAssignment& h,
                                 const SimpleGraph& f,
                                 const std::map<int, Dictionary>& dicts) {
  const auto& tol = Tolerances::defaults();
  if (g.dim() != h.dim())
    throw precondition_error("assignments must share the colour count");
  if (g.size() != f.n_vertices() || h.size() != f.n_vertices())
    throw precondition_error("assignment size does not match the vertex count");
  for (int v = 0; v < f.n_vertices(); ++v) {
    if (hilbert_norm(g.at(v)) > 1.0 + tol.ball ||
        hilbert_norm(h.at(v)) > 1.0 + tol.ball)
      throw precondition_error("lipschitz bound needs unit-ball vertex tensors");
  }
  for (int v = 0; v < f.n_vertices(); ++v) {
    const int d = f.degree(v);
    if (d == 0) continue;  // scored as |g_v - h_v| directly
    const auto it = dicts.find(d);
    if (it == dicts.end())
      throw precondition_error("no dictionary for degree " + std::to_string(d));
    const Dictionary& dict = it->second;
    if (dict.variant() != Dictionary::Variant::rank_one_ball ||
        dict.order() != d || dict.dim() != g.dim())
      throw precondition_error(
          "lipschitz bound needs a rank-one-ball dictionary of the vertex degree");
    if (!dict.exact_kind())
      throw precondition_error(
          "refusing the lipschitz bound with a heuristic dictionary at degree " +
          std::to_string(d));
  }

  BoundCheck out;
  // telescoping chain q^u: first u vertices from g, the rest from h
  VertexAssignment cur = h;
  out.telescoping.push_back(pi_f(cur, f));
  for (int u = 0; u < f.n_vertices(); ++u) {
    cur = cur.with_vertex(u, g.at(u));
    out.telescoping.push_back(pi_f(cur, f));
  }
  out.lhs = std::fabs(out.telescoping.back() - out.telescoping.front());

  out.rhs = 0.0;
  for (int v = 0; v < f.n_vertices(); ++v) {
    const Tensor diff = g.at(v) - h.at(v);
    if (f.degree(v) == 0) {
      out.rhs += std::fabs(diff[0]);
    } else {
      out.rhs += seminorm(diff, dicts.at(f.degree(v))).value;
    }
  }
  out.holds = out.lhs <= out.rhs + tol.abs_eq;
  return out;
}

}  // namespace ecm
