#include "ecm/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ecm/config.hpp"
#include "ecm/dictionary.hpp"
#include "ecm/errors.hpp"
#include "ecm/graphon.hpp"
#include "ecm/rng.hpp"

namespace ecm {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Tensor unit_noise(int order, int dim, Rng& rng) {
  Tensor raw(order, dim);
  auto v = raw.mutable_values();
  for (auto& x : v) x = rng.gaussian();
  Tensor sym = symmetrize(raw);
  const double nrm = hilbert_norm(sym);
  if (nrm > 0.0) sym.scale(1.0 / nrm);
  return sym;
}

EdgeModel project_levels(const EdgeModel& m) {
  std::vector<Tensor> levels;
  for (int k = 0; k <= m.max_order(); ++k) levels.push_back(ball_project(m.level(k)));
  return {m.dim(), std::move(levels)};
}

// d_{R_k} between two same-shape levels: rank-one-ball seminorm of the
// difference (|diff| at order 0). Heuristic above order 2.
double level_distance(const Tensor& a, const Tensor& b, bool* certified) {
  const Tensor diff = a - b;
  if (a.order() == 0) return std::fabs(diff[0]);
  if (a.order() > 2 && certified != nullptr) *certified = false;
  return seminorm(diff, Dictionary::rank_one_ball(a.order(), a.dim())).value;
}

double graph_bound(const EdgeModel& a, const EdgeModel& b, const SimpleGraph& f,
                   bool* certified) {
  double s = 0.0;
  for (int v = 0; v < f.n_vertices(); ++v)
    s += level_distance(a.level(f.degree(v)), b.level(f.degree(v)), certified);
  return s;
}

EdgeModel zero_pad(const EdgeModel& m, int new_dim) {
  std::vector<Tensor> levels;
  for (int k = 0; k <= m.max_order(); ++k) {
    const Tensor& t = m.level(k);
    Tensor padded(k, new_dim);
    auto pv = padded.mutable_values();
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
      pv[padded.flat_index(idx)] = t[flat];
      for (int j = k - 1; j >= 0; --j) {
        auto& d = idx[static_cast<std::size_t>(j)];
        if (++d < t.dim()) break;
        d = 0;
      }
    }
    levels.push_back(std::move(padded));
  }
  return {new_dim, std::move(levels)};
}

SimpleGraph random_graph(int n, Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.coin()) edges.emplace_back(u, v);
  return {n, std::move(edges)};
}

void finish_summary(ConvergenceReport& rep, const ConvergeSpec& spec) {
  const int n_graphs = static_cast<int>(spec.graphs.size());
  const int window = std::max(1, (spec.i_max + 3) / 4);  // ceil(i_max / 4)
  rep.tail_start = std::max(0, static_cast<int>(rep.rows.size()) - window);
  rep.tail_oscillation.assign(static_cast<std::size_t>(n_graphs), 0.0);
  for (int g = 0; g < n_graphs; ++g) {
    double osc = 0.0;
    for (std::size_t a = static_cast<std::size_t>(rep.tail_start); a < rep.rows.size(); ++a) {
      if (rep.rows[a].budget_exceeded) continue;
      for (std::size_t b = a + 1; b < rep.rows.size(); ++b) {
        if (rep.rows[b].budget_exceeded) continue;
        osc = std::max(osc, std::fabs(rep.rows[a].values[static_cast<std::size_t>(g)] -
                                      rep.rows[b].values[static_cast<std::size_t>(g)]));
      }
    }
    rep.tail_oscillation[static_cast<std::size_t>(g)] = osc;
  }
}

}  // namespace

ConvergenceReport converge_models(const ConvergeSpec& spec) {
  const auto& tol = Tolerances::defaults();
  if (spec.i_max < 1) throw precondition_error("converge needs i_max >= 1");
  if (spec.graphs.empty()) throw precondition_error("converge needs graphs");

  ConvergenceReport rep;
  rep.family = spec.family;
  rep.seed = spec.seed;
  rep.graph_names = spec.graph_names;

  if (spec.family == ConvergeSpec::Family::perturb ||
      spec.family == ConvergeSpec::Family::embed) {
    if (!spec.base.has_value())
      throw precondition_error("converge families perturb/embed need a base model");
    const EdgeModel base = project_levels(*spec.base);
    for (const auto& f : spec.graphs)
      rep.limit_values.push_back(partition_function(base, f, Engine::contract));

    std::vector<Tensor> noise;
    if (spec.family == ConvergeSpec::Family::perturb) {
      Rng rng(spec.seed);
      for (int k = 0; k <= base.max_order(); ++k)
        noise.push_back(unit_noise(k, base.dim(), rng));
    }

    EdgeModel prev = base;
    for (int i = 0; i <= spec.i_max; ++i) {
      EdgeModel cur = base;
      if (spec.family == ConvergeSpec::Family::perturb) {
        const double eps = spec.noise_scale * std::ldexp(1.0, -i);  // 2^-i
        std::vector<Tensor> levels;
        for (int k = 0; k <= base.max_order(); ++k) {
          Tensor t = base.level(k);
          t.add_scaled(noise[static_cast<std::size_t>(k)], eps);
          levels.push_back(ball_project(t));
        }
        cur = EdgeModel(base.dim(), std::move(levels));
      } else {
        cur = zero_pad(base, base.dim() + i);
      }

      ConvergenceRow row;
      row.i = i;
      for (std::size_t g = 0; g < spec.graphs.size(); ++g) {
        const auto& f = spec.graphs[g];
        // for the embed family, evaluate the padded model but compare with
        // the base value, which padding preserves
        row.values.push_back(partition_function(cur, f, Engine::contract));
        row.gaps.push_back(std::fabs(row.values.back() - rep.limit_values[g]));
        EdgeModel limit_like =
            spec.family == ConvergeSpec::Family::embed ? zero_pad(base, cur.dim()) : base;
        const double bound = graph_bound(cur, limit_like, f, &rep.bounds_certified);
        row.bounds.push_back(bound);
        if (row.gaps.back() > bound + tol.abs_eq) rep.bounds_hold = false;
      }
      if (i > 0) {
        EdgeModel prev_like = prev;
        if (spec.family == ConvergeSpec::Family::embed)
          prev_like = zero_pad(prev, cur.dim());
        for (int k = 0; k <= cur.max_order(); ++k)
          row.level_dists.push_back(
              level_distance(cur.level(k), prev_like.level(k), nullptr));
      } else {
        row.level_dists.assign(static_cast<std::size_t>(cur.max_order()) + 1, 0.0);
      }
      rep.rows.push_back(std::move(row));
      prev = std::move(cur);
    }
    finish_summary(rep, spec);
    return rep;
  }

  // family sample: step graphons of G(10 * 2^i, 1/2); the limit is the
  // constant-1/2 graphon, whose density at F is 2^{-|E(F)|}
  for (const auto& f : spec.graphs)
    rep.limit_values.push_back(std::ldexp(1.0, -f.n_edges()));

  Rng rng(spec.seed);
  for (int i = 1; i <= spec.i_max; ++i) {
    const int n = 10 * (1 << i);
    const SimpleGraph gi = random_graph(n, rng);
    const StepGraphon w = graph_to_graphon(gi);
    ConvergenceRow row;
    row.i = i;
    bool exceeded = false;
    for (std::size_t g = 0; g < spec.graphs.size(); ++g) {
      try {
        row.values.push_back(tau(w, spec.graphs[g]));
        row.gaps.push_back(std::fabs(row.values.back() - rep.limit_values[g]));
      } catch (const budget_error&) {
        exceeded = true;
        break;
      }
    }
    if (exceeded) {
      // partial report, marked; later indices only grow the budget
      row.values.clear();
      row.gaps.clear();
      row.budget_exceeded = true;
      rep.rows.push_back(std::move(row));
      break;
    }
    rep.rows.push_back(std::move(row));
  }
  finish_summary(rep, spec);
  return rep;
}

std::string convergence_csv(const ConvergenceReport& rep) {
  std::ostringstream out;
  out << "i";
  for (const auto& name : rep.graph_names)
    out << ",value_" << name << ",gap_" << name << ",bound_" << name;
  const std::size_t n_levels =
      rep.rows.empty() ? 0 : rep.rows.front().level_dists.size();
  for (std::size_t k = 0; k < n_levels; ++k) out << ",dist_level" << k;
  out << ",budget_exceeded\n";
  for (const auto& row : rep.rows) {
    out << row.i;
    for (std::size_t g = 0; g < rep.graph_names.size(); ++g) {
      if (row.budget_exceeded) {
        out << ",,,";
      } else {
        out << ',' << fmt(row.values[g]) << ',' << fmt(row.gaps[g]);
        out << ',' << (g < row.bounds.size() ? fmt(row.bounds[g]) : "");
      }
    }
    for (std::size_t k = 0; k < n_levels; ++k)
      out << ',' << (k < row.level_dists.size() ? fmt(row.level_dists[k]) : "");
    out << ',' << (row.budget_exceeded ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace ecm
