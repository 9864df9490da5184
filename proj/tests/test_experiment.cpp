#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ecm/experiment.hpp"
#include "ecm/rng.hpp"
#include "test_util.hpp"

using namespace ecm;

namespace {

EdgeModel base_model(int dim, int max_order, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Tensor> levels;
  for (int k = 0; k <= max_order; ++k)
    levels.push_back(ball_project(test::random_symmetric(k, dim, rng)));
  return {dim, std::move(levels)};
}

}  // namespace

TEST_CASE("perturbation family with zero noise is constant") {
  ConvergeSpec spec;
  spec.family = ConvergeSpec::Family::perturb;
  spec.i_max = 4;
  spec.seed = 5;
  spec.noise_scale = 0.0;
  spec.base = base_model(2, 2, 71);
  spec.graphs = {SimpleGraph::cycle(3), SimpleGraph::path(3)};
  spec.graph_names = {"triangle", "path3"};
  const auto rep = converge_models(spec);
  REQUIRE(rep.rows.size() == 5);
  for (const auto& row : rep.rows)
    for (std::size_t g = 0; g < 2; ++g) {
      CHECK(row.values[g] == rep.limit_values[g]);
      CHECK(row.gaps[g] == 0.0);
      CHECK(row.bounds[g] == 0.0);
    }
  for (double osc : rep.tail_oscillation) CHECK(osc == 0.0);
  CHECK(rep.bounds_hold);
  CHECK(rep.bounds_certified);
}

TEST_CASE("perturbation family: gaps are dominated by the telescoping bound") {
  ConvergeSpec spec;
  spec.family = ConvergeSpec::Family::perturb;
  spec.i_max = 8;
  spec.seed = 17;
  spec.base = base_model(2, 2, 23);
  spec.graphs = {SimpleGraph::cycle(3)};
  spec.graph_names = {"triangle"};
  const auto rep = converge_models(spec);
  REQUIRE(rep.rows.size() == 9);
  CHECK(rep.bounds_certified);  // degrees at most 2
  CHECK(rep.bounds_hold);
  for (const auto& row : rep.rows)
    CHECK(row.gaps[0] <= row.bounds[0] + 1e-9);
  // the sequence actually approaches its limit
  CHECK(rep.rows.back().gaps[0] <= rep.rows.front().gaps[0] + 1e-12);
  CHECK(rep.rows.back().gaps[0] <= 2e-2);
}

TEST_CASE("embedding family is exactly constant in the partition values") {
  ConvergeSpec spec;
  spec.family = ConvergeSpec::Family::embed;
  spec.i_max = 3;
  spec.seed = 2;
  spec.base = base_model(2, 2, 31);
  spec.graphs = {SimpleGraph::cycle(4)};
  spec.graph_names = {"c4"};
  const auto rep = converge_models(spec);
  REQUIRE(rep.rows.size() == 4);
  for (const auto& row : rep.rows) {
    CHECK(std::fabs(row.values[0] - rep.limit_values[0]) <= 1e-12);
    CHECK(row.gaps[0] <= row.bounds[0] + 1e-9);
  }
  for (double osc : rep.tail_oscillation) CHECK(osc <= 1e-12);
}

TEST_CASE("sampled-graph family approaches the constant-half densities") {
  ConvergeSpec spec;
  spec.family = ConvergeSpec::Family::sample;
  spec.i_max = 3;  // n = 20, 40, 80
  spec.seed = 4242;
  spec.graphs = {SimpleGraph(2, {{0, 1}})};
  spec.graph_names = {"k2"};
  const auto rep = converge_models(spec);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.limit_values[0] == 0.5);
  CHECK(rep.rows.back().gaps[0] <= 0.05);
}

TEST_CASE("sampled-graph family marks budget exhaustion and stops") {
  ConvergeSpec spec;
  spec.family = ConvergeSpec::Family::sample;
  spec.i_max = 3;
  spec.seed = 9;
  spec.graphs = {SimpleGraph::complete(5)};  // 40^5 > 10^8 at i = 2
  spec.graph_names = {"k5"};
  const auto rep = converge_models(spec);
  REQUIRE(rep.rows.size() == 2);
  CHECK_FALSE(rep.rows[0].budget_exceeded);
  CHECK(rep.rows[1].budget_exceeded);
  CHECK(rep.rows[1].values.empty());
}

TEST_CASE("reports are deterministic given the seed") {
  ConvergeSpec spec;
  spec.family = ConvergeSpec::Family::perturb;
  spec.i_max = 5;
  spec.seed = 77;
  spec.base = base_model(2, 2, 77);
  spec.graphs = {SimpleGraph::cycle(3), SimpleGraph(2, {{0, 1}})};
  spec.graph_names = {"triangle", "k2"};
  const auto a = convergence_csv(converge_models(spec));
  const auto b = convergence_csv(converge_models(spec));
  CHECK(a == b);
  CHECK(a.find("value_triangle") != std::string::npos);
}
