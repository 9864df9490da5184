#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "ecm/config.hpp"
#include "ecm/errors.hpp"
#include "ecm/rng.hpp"
#include "ecm/vertex_model.hpp"
#include "test_util.hpp"

using namespace ecm;

namespace {

EdgeModel random_model(int dim, int max_order, Rng& rng, bool project = false) {
  std::vector<Tensor> levels;
  for (int k = 0; k <= max_order; ++k) {
    Tensor t = test::random_symmetric(k, dim, rng);
    if (project) t = ball_project(t);
    levels.push_back(std::move(t));
  }
  return {dim, std::move(levels)};
}

// independent oracle: trace of the p-th matrix power by explicit products
double trace_power(const Tensor& m, int p) {
  const int n = m.dim();
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> acc(un * un, 0.0);
  for (std::size_t i = 0; i < un; ++i) acc[i * un + i] = 1.0;
  for (int rep = 0; rep < p; ++rep) {
    std::vector<double> next(un * un, 0.0);
    for (std::size_t i = 0; i < un; ++i)
      for (std::size_t j = 0; j < un; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < un; ++k) s += acc[i * un + k] * m[k * un + j];
        next[i * un + j] = s;
      }
    acc = std::move(next);
  }
  double tr = 0.0;
  for (std::size_t i = 0; i < un; ++i) tr += acc[i * un + i];
  return tr;
}

}  // namespace

TEST_CASE("single vertex yields the order-0 weight") {
  Rng rng(91);
  const EdgeModel m = random_model(3, 2, rng);
  const SimpleGraph f(1, {});
  CHECK(partition_function(m, f, Engine::brute) == m.level(0)[0]);
  CHECK(partition_function(m, f, Engine::contract) == m.level(0)[0]);
}

TEST_CASE("K2 gives the squared norm of the order-1 weight") {
  Rng rng(93);
  const EdgeModel m = random_model(3, 1, rng);
  const SimpleGraph k2(2, {{0, 1}});
  const double expect = inner(m.level(1), m.level(1));
  CHECK(partition_function(m, k2, Engine::brute) ==
        doctest::Approx(expect).epsilon(1e-12));
  CHECK(partition_function(m, k2, Engine::contract) ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("triangle and four-cycle match matrix power traces") {
  Rng rng(97);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 2 + rep % 5;  // up to 6 colours
    std::vector<Tensor> levels = {Tensor::scalar(1.0, n), Tensor(1, n),
                                  test::random_symmetric(2, n, rng)};
    const EdgeModel m(n, std::move(levels));
    const double t3 = trace_power(m.level(2), 3);
    const double t4 = trace_power(m.level(2), 4);
    for (Engine e : {Engine::brute, Engine::contract}) {
      CHECK(close_rel(partition_function(m, SimpleGraph::cycle(3), e), t3, 1e-9));
      CHECK(close_rel(partition_function(m, SimpleGraph::cycle(4), e), t4, 1e-9));
    }
  }
}

TEST_CASE("brute and contraction engines agree on every small graph") {
  Rng rng(101);
  const auto graphs = SimpleGraph::all_labeled_up_to(4);
  for (int rep = 0; rep < 3; ++rep) {
    const EdgeModel m = random_model(2, 3, rng, /*project=*/true);
    for (const auto& f : graphs) {
      const double b = partition_function(m, f, Engine::brute);
      const double c = partition_function(m, f, Engine::contract);
      CHECK(close_rel(b, c, 1e-9));
    }
  }
}

TEST_CASE("pi_f specialises to the partition function") {
  Rng rng(103);
  const EdgeModel m = random_model(3, 3, rng);
  const SimpleGraph f(4, {{0, 1}, {1, 2}, {2, 3}, {0, 2}});
  std::vector<Tensor> slots;
  for (int v = 0; v < 4; ++v) slots.push_back(m.level(f.degree(v)));
  const VertexAssignment h(3, std::move(slots));
  CHECK(pi_f(h, f) == doctest::Approx(partition_function(m, f, Engine::contract))
                          .epsilon(1e-12));
  CHECK(pi_f(h, f, Engine::brute) ==
        doctest::Approx(partition_function(m, f, Engine::brute)).epsilon(1e-12));
}

TEST_CASE("pi_f vanishes when any vertex weight is zero") {
  Rng rng(107);
  const SimpleGraph f = SimpleGraph::cycle(3);
  std::vector<Tensor> slots = {test::random_symmetric(2, 2, rng),
                               test::random_symmetric(2, 2, rng), Tensor(2, 2)};
  const VertexAssignment h(2, std::move(slots));
  CHECK(pi_f(h, f) == 0.0);
  CHECK(pi_f(h, f, Engine::brute) == 0.0);
}

TEST_CASE("pi_f on a single edge is the inner product") {
  Rng rng(109);
  const SimpleGraph k2(2, {{0, 1}});
  const Tensor u = test::random_tensor(1, 4, rng);
  const Tensor v = test::random_tensor(1, 4, rng);
  const VertexAssignment h(4, {u, v});
  CHECK(pi_f(h, k2) == doctest::Approx(inner(u, v)).epsilon(1e-12));
}

TEST_CASE("pi_f is multilinear in each vertex slot") {
  Rng rng(113);
  const SimpleGraph f = SimpleGraph::path(3);  // degrees 1, 2, 1
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<Tensor> slots = {test::random_tensor(1, 3, rng),
                                 test::random_symmetric(2, 3, rng),
                                 test::random_tensor(1, 3, rng)};
    const VertexAssignment h(3, slots);
    const Tensor x = test::random_tensor(1, 3, rng);
    const Tensor y = test::random_tensor(1, 3, rng);
    const double alpha = rng.uniform(-2, 2), beta = rng.uniform(-2, 2);
    Tensor combo = alpha * x;
    combo.add_scaled(y, beta);
    const double lhs = pi_f(h.with_vertex(0, combo), f);
    const double rhs = alpha * pi_f(h.with_vertex(0, x), f) +
                       beta * pi_f(h.with_vertex(0, y), f);
    CHECK(std::fabs(lhs - rhs) <= 1e-9 * (1.0 + std::fabs(lhs)));
  }
}

TEST_CASE("incidence order is irrelevant, bit for bit") {
  Rng rng(127);
  const EdgeModel m = random_model(2, 3, rng);
  SimpleGraph f(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}});
  const double before_b = partition_function(m, f, Engine::brute);
  const double before_c = partition_function(m, f, Engine::contract);
  f.permute_incidence(0, {2, 0, 1});
  f.permute_incidence(1, {1, 0});
  CHECK(partition_function(m, f, Engine::brute) == before_b);
  CHECK(partition_function(m, f, Engine::contract) == before_c);
}

TEST_CASE("isolated vertices multiply by the order-0 weight") {
  Rng rng(131);
  const EdgeModel m = random_model(2, 2, rng);
  const SimpleGraph f = SimpleGraph::cycle(3);
  const SimpleGraph fplus(4, {{0, 1}, {1, 2}, {0, 2}});
  const double base = partition_function(m, f, Engine::contract);
  const double plus = partition_function(m, fplus, Engine::contract);
  CHECK(plus == doctest::Approx(base * m.level(0)[0]).epsilon(1e-12));
}

TEST_CASE("disjoint unions multiply") {
  Rng rng(137);
  for (int rep = 0; rep < 5; ++rep) {
    const EdgeModel m = random_model(2, 2, rng);
    const SimpleGraph a = SimpleGraph::cycle(3);
    const SimpleGraph b = SimpleGraph::path(3);
    const SimpleGraph both = SimpleGraph::disjoint_union(a, b);
    const double pa = partition_function(m, a, Engine::brute);
    const double pb = partition_function(m, b, Engine::brute);
    const double pu = partition_function(m, both, Engine::brute);
    CHECK(close_rel(pu, pa * pb, 1e-9));
    CHECK(close_rel(partition_function(m, both, Engine::contract), pa * pb, 1e-9));
  }
}

TEST_CASE("degree above the model order is rejected") {
  Rng rng(139);
  const EdgeModel m = random_model(2, 1, rng);
  CHECK_THROWS_AS(partition_function(m, SimpleGraph::cycle(3), Engine::brute),
                  precondition_error);
}

TEST_CASE("brute budget guard") {
  std::vector<Tensor> levels;
  for (int k = 0; k <= 2; ++k) levels.push_back(symmetrize(Tensor(k, 10)));
  const EdgeModel m(10, std::move(levels));
  // 10 colours, 9 edges: 10^9 colourings exceeds the 10^8 budget
  SimpleGraph big(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7},
                       {7, 8}, {8, 9}});
  CHECK_THROWS_AS(partition_function(m, big, Engine::brute), budget_error);
}

TEST_CASE("cs bound: single edge reduces to cauchy-schwarz") {
  Rng rng(149);
  const SimpleGraph k2(2, {{0, 1}});
  const Tensor u = test::random_tensor(1, 3, rng);
  const Tensor v = test::random_tensor(1, 3, rng);
  const VertexAssignment h(3, {u, v});
  const auto chk = cs_bound_check(h, k2);
  double lhs = 0.0;
  for (int c = 0; c < 3; ++c)
    lhs += std::fabs(u[static_cast<std::size_t>(c)]) *
           std::fabs(v[static_cast<std::size_t>(c)]);
  CHECK(chk.lhs == doctest::Approx(lhs).epsilon(1e-12));
  CHECK(chk.rhs == doctest::Approx(hilbert_norm(u) * hilbert_norm(v)).epsilon(1e-12));
  CHECK(chk.holds);
}

TEST_CASE("cs bound: empty graph holds with equality") {
  Rng rng(151);
  const SimpleGraph f(3, {});
  const VertexAssignment h(2, {test::random_symmetric(2, 2, rng),
                               test::random_symmetric(1, 2, rng),
                               test::random_symmetric(3, 2, rng)});
  const auto chk = cs_bound_check(h, f);
  CHECK(chk.lhs == chk.rhs);
  CHECK(chk.holds);
}

TEST_CASE("cs bound holds on random instances, orders above degrees included") {
  Rng rng(157);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 2 + rep % 2;
    const SimpleGraph f = rep % 3 == 0 ? SimpleGraph::cycle(3)
                         : rep % 3 == 1 ? SimpleGraph::path(3)
                                        : SimpleGraph(3, {{0, 1}, {1, 2}, {0, 2}});
    std::vector<Tensor> slots;
    for (int v = 0; v < f.n_vertices(); ++v) {
      const int extra = rep % 2;  // order strictly above the degree half the time
      slots.push_back(test::random_symmetric(f.degree(v) + extra, n, rng));
    }
    const auto chk = cs_bound_check(VertexAssignment(n, std::move(slots)), f);
    CHECK(chk.holds);
  }
}

TEST_CASE("lipschitz bound: identical assignments give zero on both sides") {
  Rng rng(163);
  const SimpleGraph f = SimpleGraph::cycle(4);
  std::vector<Tensor> slots;
  for (int v = 0; v < 4; ++v)
    slots.push_back(ball_project(test::random_symmetric(2, 3, rng)));
  const VertexAssignment g(3, slots);
  std::map<int, Dictionary> dicts;
  dicts.emplace(2, Dictionary::rank_one_ball(2, 3));
  const auto chk = lipschitz_bound_check(g, g, f, dicts);
  CHECK(chk.lhs == 0.0);
  CHECK(chk.rhs == 0.0);
  CHECK(chk.holds);
  REQUIRE(chk.telescoping.size() == 5);
  CHECK(chk.telescoping.front() == chk.telescoping.back());
}

TEST_CASE("lipschitz bound holds on random cycles") {
  Rng rng(167);
  for (int len : {3, 4, 5, 6}) {
    const SimpleGraph f = SimpleGraph::cycle(len);
    std::map<int, Dictionary> dicts;
    dicts.emplace(2, Dictionary::rank_one_ball(2, 2));
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<Tensor> gs, hs;
      for (int v = 0; v < len; ++v) {
        gs.push_back(test::random_symmetric_unit_ball(2, 2, rng));
        hs.push_back(test::random_symmetric_unit_ball(2, 2, rng));
      }
      const auto chk = lipschitz_bound_check(VertexAssignment(2, gs),
                                             VertexAssignment(2, hs), f, dicts);
      CHECK(chk.holds);
      CHECK(chk.telescoping.size() == static_cast<std::size_t>(len) + 1);
    }
  }
}

TEST_CASE("lipschitz bound under a vanishing single-vertex perturbation") {
  Rng rng(173);
  const SimpleGraph f = SimpleGraph::cycle(4);
  std::map<int, Dictionary> dicts;
  dicts.emplace(2, Dictionary::rank_one_ball(2, 2));
  std::vector<Tensor> base;
  for (int v = 0; v < 4; ++v) {
    Tensor t = test::random_symmetric(2, 2, rng);
    t.scale(0.9 / hilbert_norm(t));
    base.push_back(std::move(t));
  }
  const VertexAssignment h(2, base);
  Tensor dir = symmetrize(test::random_tensor(2, 2, rng));
  dir.scale(1.0 / hilbert_norm(dir));
  const double sigma = seminorm(dir, dicts.at(2)).value;
  for (double eps : {1e-2, 1e-3}) {
    Tensor moved = base[0];
    moved.add_scaled(dir, eps);
    const auto chk = lipschitz_bound_check(h.with_vertex(0, moved), h, f, dicts);
    CHECK(chk.holds);
    // one perturbed vertex: the bound is the seminorm of the single
    // difference, which scales linearly in eps
    CHECK(chk.rhs == doctest::Approx(eps * sigma).epsilon(1e-9));
  }
}

TEST_CASE("lipschitz bound refuses unsound setups") {
  Rng rng(179);
  const SimpleGraph f = SimpleGraph::cycle(3);
  std::vector<Tensor> ok, big;
  for (int v = 0; v < 3; ++v) {
    ok.push_back(ball_project(test::random_symmetric(2, 2, rng)));
    Tensor t = test::random_symmetric(2, 2, rng);
    t.scale(2.0 / hilbert_norm(t));
    big.push_back(std::move(t));
  }
  std::map<int, Dictionary> dicts;
  dicts.emplace(2, Dictionary::rank_one_ball(2, 2));
  CHECK_THROWS_AS(lipschitz_bound_check(VertexAssignment(2, big),
                                        VertexAssignment(2, ok), f, dicts),
                  precondition_error);

  // missing degree
  std::map<int, Dictionary> empty;
  CHECK_THROWS_AS(lipschitz_bound_check(VertexAssignment(2, ok),
                                        VertexAssignment(2, ok), f, empty),
                  precondition_error);

  // heuristic dictionary at degree 3 is refused
  const SimpleGraph k4 = SimpleGraph::complete(4);
  std::vector<Tensor> cubic;
  for (int v = 0; v < 4; ++v)
    cubic.push_back(ball_project(test::random_symmetric(3, 2, rng)));
  std::map<int, Dictionary> heuristic;
  heuristic.emplace(3, Dictionary::rank_one_ball(3, 2));
  CHECK_THROWS_AS(lipschitz_bound_check(VertexAssignment(2, cubic),
                                        VertexAssignment(2, cubic), k4, heuristic),
                  precondition_error);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(EdgeModel(2, {}), precondition_error);
  // wrong order at level 1
  CHECK_THROWS_AS(EdgeModel(2, {Tensor::scalar(1.0, 2), Tensor(2, 2)}),
                  precondition_error);
  // asymmetric level
  CHECK_THROWS_AS(EdgeModel(2, {Tensor::scalar(1.0, 2), Tensor(1, 2),
                                Tensor::from_values(2, 2, {0, 1, 0, 0})}),
                  precondition_error);
}

TEST_CASE("brute engine is deterministic across runs on multi-block sums") {
  // 3^9 = 19683 colourings spans several reduction blocks
  Rng rng(353);
  const EdgeModel m = random_model(3, 3, rng, /*project=*/true);
  SimpleGraph f(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 3},
                    {1, 4}, {2, 5}});
  const double first = partition_function(m, f, Engine::brute);
  for (int rep = 0; rep < 3; ++rep)
    CHECK(partition_function(m, f, Engine::brute) == first);
  CHECK(close_rel(first, partition_function(m, f, Engine::contract), 1e-9));
}
