#ifndef ECM_EXPERIMENT_HPP
#define ECM_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecm/graph.hpp"
#include "ecm/vertex_model.hpp"

namespace ecm {

// Built-in model families for the convergence experiment:
//   perturb  h^i = ball_project(h + 2^-i * noise), fixed symmetric unit
//            noise per level; converges to h, and the per-graph gap is
//            dominated by the sum of per-degree seminorm distances
//   embed    h^i = h zero-padded to dim + i colours; the partition
//            function is invariant, rows are constant
//   sample   step graphons of seeded random graphs G(10 * 2^i, 1/2);
//            values approach the constant-1/2 graphon's densities
struct ConvergeSpec {
  enum class Family { perturb, embed, sample };
  Family family = Family::perturb;
  int i_max = 8;
  std::uint64_t seed = 0;
  double noise_scale = 1.0;       // family perturb; 0 freezes the sequence
  std::optional<EdgeModel> base;  // families perturb/embed
  std::vector<SimpleGraph> graphs;
  std::vector<std::string> graph_names;
};

struct ConvergenceRow {
  int i = 0;
  std::vector<double> values;       // per graph
  std::vector<double> gaps;         // per graph, |value - limit value|
  std::vector<double> bounds;       // per graph, telescoping bound (perturb/embed)
  std::vector<double> level_dists;  // per level, distance to the previous row
  bool budget_exceeded = false;
};

struct ConvergenceReport {
  ConvergeSpec::Family family{};
  std::uint64_t seed = 0;
  std::vector<std::string> graph_names;
  std::vector<double> limit_values;  // per graph
  std::vector<ConvergenceRow> rows;
  int tail_start = 0;                     // first row index in the tail window
  std::vector<double> tail_oscillation;   // per graph, max |v_j - v_k| in tail
  bool bounds_certified = true;  // exact seminorms at every occurring degree
  bool bounds_hold = true;       // gap <= bound + tol on every row (perturb/embed)
};

ConvergenceReport converge_models(const ConvergeSpec& spec);

std::string convergence_csv(const ConvergenceReport& rep);

}  // namespace ecm

#endif
