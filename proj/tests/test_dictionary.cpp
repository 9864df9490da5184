#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ecm/dictionary.hpp"
#include "ecm/errors.hpp"
#include "ecm/rng.hpp"
#include "ecm/tensor.hpp"
#include "test_util.hpp"

using namespace ecm;

namespace {

// independent oracle: sigma_max via power iteration on M^T M
double sigma_max_oracle(const Tensor& m) {
  const int n = m.dim();
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> b(un * un, 0.0);
  for (std::size_t i = 0; i < un; ++i)
    for (std::size_t j = 0; j < un; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < un; ++k) s += m[k * un + i] * m[k * un + j];
      b[i * un + j] = s;
    }
  Rng rng(12345);
  double best = 0.0;
  for (int start = 0; start < 3; ++start) {
    std::vector<double> v(un);
    for (auto& x : v) x = start == 0 ? 1.0 : rng.gaussian();
    double lambda = 0.0;
    for (int it = 0; it < 5000; ++it) {
      std::vector<double> w(un, 0.0);
      for (std::size_t i = 0; i < un; ++i)
        for (std::size_t j = 0; j < un; ++j) w[i] += b[i * un + j] * v[j];
      double nrm = 0.0;
      for (double x : w) nrm += x * x;
      nrm = std::sqrt(nrm);
      if (nrm == 0.0) break;
      for (std::size_t i = 0; i < un; ++i) v[i] = w[i] / nrm;
      lambda = nrm;
    }
    best = std::max(best, std::sqrt(lambda));
  }
  return best;
}

// independent oracle: every subset pair evaluated directly
double cut_oracle(const Tensor& x, int q, const std::vector<double>& mu) {
  double best = 0.0;
  for (std::uint32_t s = 0; s < (1u << q); ++s)
    for (std::uint32_t t = 0; t < (1u << q); ++t) {
      double acc = 0.0;
      for (int i = 0; i < q; ++i) {
        if (!(s >> i & 1u)) continue;
        for (int j = 0; j < q; ++j)
          if (t >> j & 1u)
            acc += mu[static_cast<std::size_t>(i)] * mu[static_cast<std::size_t>(j)] *
                   x[static_cast<std::size_t>(i * q + j)];
      }
      best = std::max(best, std::fabs(acc));
    }
  return best;
}

}  // namespace

TEST_CASE("seminorm of zero is zero for every variant") {
  const Dictionary fin = Dictionary::finite_set(
      {Tensor::basis_vector(3, 0), Tensor::basis_vector(3, 1)});
  CHECK(seminorm(Tensor(1, 3), fin).value == 0.0);

  const Dictionary cut = Dictionary::cut_products(2, {0.5, 0.5});
  CHECK(seminorm(Tensor(2, 2), cut).value == 0.0);

  CHECK(seminorm(Tensor(2, 3), Dictionary::rank_one_ball(2, 3)).value == 0.0);
  CHECK(seminorm(Tensor(1, 3), Dictionary::rank_one_ball(1, 3)).value == 0.0);
  const auto sv = seminorm(Tensor(3, 2), Dictionary::rank_one_ball(3, 2));
  CHECK(sv.value == 0.0);
  CHECK(sv.kind == SeminormValue::Kind::lower_bound);
}

TEST_CASE("finite set takes the max atom correlation") {
  const Dictionary dict = Dictionary::finite_set(
      {Tensor::basis_vector(3, 0), Tensor::basis_vector(3, 1)});
  const Tensor x = Tensor::from_values(1, 3, {3.0, -4.0, 1.0});
  const auto sv = seminorm(x, dict);
  CHECK(sv.value == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(sv.atom_index == 1);
  CHECK(sv.kind == SeminormValue::Kind::exact);
  CHECK(std::fabs(inner(sv.witness, x)) == doctest::Approx(sv.value).epsilon(1e-14));

  CHECK_THROWS_AS(seminorm(x, Dictionary::finite_set({})), precondition_error);
  CHECK_THROWS_AS(seminorm(Tensor(1, 4), dict), precondition_error);
  // atoms above the unit ball are rejected at construction
  CHECK_THROWS_AS(Dictionary::finite_set({Tensor::from_values(1, 2, {2.0, 0.0})}),
                  precondition_error);
}

TEST_CASE("cut products: identity example and the enumeration oracle") {
  const Dictionary cut = Dictionary::cut_products(2, {0.5, 0.5});
  const Tensor eye = Tensor::from_values(2, 2, {1.0, 0.0, 0.0, 1.0});
  // frozen from the enumeration oracle below: the full pair S = T = {1, 2}
  // collects both diagonal cells, 1/4 + 1/4
  CHECK(cut_oracle(eye, 2, {0.5, 0.5}) == 0.5);
  const auto sv = seminorm(eye, cut);
  CHECK(sv.value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(sv.cut_s == 3u);
  CHECK(sv.cut_t == 3u);
  CHECK(std::fabs(inner(sv.witness, eye)) ==
        doctest::Approx(sv.value).epsilon(1e-12));

  Rng rng(21);
  for (int rep = 0; rep < 20; ++rep) {
    const int q = 2 + rep % 4;
    std::vector<double> mu(static_cast<std::size_t>(q), 1.0 / q);
    const Tensor x = test::random_tensor(2, q, rng);
    const auto got = seminorm(x, Dictionary::cut_products(q, mu));
    CHECK(got.value == doctest::Approx(cut_oracle(x, q, mu)).epsilon(1e-12));
  }
}

TEST_CASE("cut products: sampled subset pairs never exceed the maximum") {
  Rng rng(23);
  for (int q : {4, 8, 10}) {
    std::vector<double> mu(static_cast<std::size_t>(q), 1.0 / q);
    const Tensor x = test::random_tensor(2, q, rng);
    const auto sv = seminorm(x, Dictionary::cut_products(q, mu));
    for (int trial = 0; trial < 2000; ++trial) {
      const auto s = static_cast<std::uint32_t>(rng.next_u64() & ((1u << q) - 1));
      const auto t = static_cast<std::uint32_t>(rng.next_u64() & ((1u << q) - 1));
      double acc = 0.0;
      for (int i = 0; i < q; ++i) {
        if (!(s >> i & 1u)) continue;
        for (int j = 0; j < q; ++j)
          if (t >> j & 1u)
            acc += mu[static_cast<std::size_t>(i)] * mu[static_cast<std::size_t>(j)] *
                   x[static_cast<std::size_t>(i * q + j)];
      }
      CHECK(std::fabs(acc) <= sv.value);
    }
  }
}

TEST_CASE("non-uniform cut measures") {
  const Dictionary cut = Dictionary::cut_products(3, {0.5, 0.25, 0.25});
  Rng rng(29);
  const Tensor x = test::random_tensor(2, 3, rng);
  CHECK(seminorm(x, cut).value ==
        doctest::Approx(cut_oracle(x, 3, {0.5, 0.25, 0.25})).epsilon(1e-12));
  CHECK_THROWS_AS(Dictionary::cut_products(2, {0.5, 0.6}), precondition_error);
  CHECK_THROWS_AS(Dictionary::cut_products(2, {1.1, -0.1}), precondition_error);
}

TEST_CASE("rank-one ball order 1 is the hilbert norm") {
  Rng rng(31);
  const Tensor x = test::random_tensor(1, 5, rng);
  const auto sv = seminorm(x, Dictionary::rank_one_ball(1, 5));
  CHECK(sv.value == doctest::Approx(hilbert_norm(x)).epsilon(1e-12));
  CHECK(hilbert_norm(sv.witness) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rank-one ball order 2 matches the singular value oracle") {
  const auto sv2 = seminorm(Tensor::from_values(2, 2, {1, 0, 0, 1}),
                            Dictionary::rank_one_ball(2, 2));
  CHECK(sv2.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sv2.kind == SeminormValue::Kind::exact);

  Rng rng(37);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 2 + rep % 7;  // up to 8x8
    const Tensor m = rep % 2 == 0 ? test::random_symmetric(2, n, rng)
                                  : test::random_tensor(2, n, rng);
    const auto sv = seminorm(m, Dictionary::rank_one_ball(2, n));
    CHECK(std::fabs(sv.value - sigma_max_oracle(m)) <= 1e-9 * (1.0 + sv.value));
    CHECK(std::fabs(std::fabs(inner(sv.witness, m)) - sv.value) <= 1e-9);
  }
}

TEST_CASE("rank-one ball order 3 finds the value of a pure power tensor") {
  Rng rng(41);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<double> v(3);
    for (auto& c : v) c = rng.gaussian();
    const Tensor x = outer_product(3, {v, v, v});
    double nrm = 0.0;
    for (double c : v) nrm += c * c;
    const double expect = std::pow(std::sqrt(nrm), 3.0);
    const auto sv = seminorm(x, Dictionary::rank_one_ball(3, 3));
    CHECK(sv.kind == SeminormValue::Kind::lower_bound);
    CHECK(sv.value == doctest::Approx(expect).epsilon(1e-8));
    CHECK(std::fabs(std::fabs(inner(sv.witness, x)) - sv.value) <= 1e-9);
  }
}

TEST_CASE("seminorm axioms on exact dictionaries") {
  Rng rng(43);
  const Dictionary cut = Dictionary::cut_products(3, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const Dictionary r2 = Dictionary::rank_one_ball(2, 3);
  const Dictionary fin = Dictionary::finite_set({Tensor::basis_vector(3, 0),
                                                 Tensor::basis_vector(3, 1),
                                                 Tensor::basis_vector(3, 2)});
  for (int rep = 0; rep < 25; ++rep) {
    const Tensor x = test::random_tensor(2, 3, rng);
    const Tensor y = test::random_tensor(2, 3, rng);
    const double lambda = rng.uniform(-2.0, 2.0);
    for (const Dictionary* dict : {&cut, &r2}) {
      const double sx = seminorm(x, *dict).value;
      const double sy = seminorm(y, *dict).value;
      CHECK(seminorm(x + y, *dict).value <= sx + sy + 1e-9);
      CHECK(seminorm(lambda * x, *dict).value ==
            doctest::Approx(std::fabs(lambda) * sx).epsilon(1e-9));
    }
    const Tensor xv = test::random_tensor(1, 3, rng);
    const Tensor yv = test::random_tensor(1, 3, rng);
    const double sx = seminorm(xv, fin).value;
    const double sy = seminorm(yv, fin).value;
    CHECK(seminorm(xv + yv, fin).value <= sx + sy + 1e-9);
    CHECK(seminorm(lambda * xv, fin).value ==
          doctest::Approx(std::fabs(lambda) * sx).epsilon(1e-9));
  }
}

TEST_CASE("unit-atom dictionaries are dominated by the hilbert norm") {
  Rng rng(47);
  const Dictionary cut = Dictionary::cut_products(4, {0.25, 0.25, 0.25, 0.25});
  const Dictionary r2 = Dictionary::rank_one_ball(2, 4);
  const Dictionary fin = Dictionary::finite_set(
      {Tensor::basis_vector(4, 0), Tensor::basis_vector(4, 2)});
  for (int rep = 0; rep < 25; ++rep) {
    const Tensor x = test::random_tensor(2, 4, rng);
    CHECK(seminorm(x, cut).value <= hilbert_norm(x) + 1e-9);
    CHECK(seminorm(x, r2).value <= hilbert_norm(x) + 1e-9);
    const Tensor xv = test::random_tensor(1, 4, rng);
    CHECK(seminorm(xv, fin).value <= hilbert_norm(xv) + 1e-9);
  }
}

TEST_CASE("witness consistency across variants") {
  Rng rng(53);
  const Dictionary cut = Dictionary::cut_products(4, {0.25, 0.25, 0.25, 0.25});
  const Dictionary r1 = Dictionary::rank_one_ball(1, 4);
  const Dictionary r2 = Dictionary::rank_one_ball(2, 4);
  const Dictionary r3 = Dictionary::rank_one_ball(3, 4);
  for (int rep = 0; rep < 10; ++rep) {
    const Tensor m = test::random_tensor(2, 4, rng);
    for (const Dictionary* d : {&cut, &r2}) {
      const auto sv = seminorm(m, *d);
      CHECK(std::fabs(std::fabs(inner(sv.witness, m)) - sv.value) <= 1e-9);
    }
    const Tensor v = test::random_tensor(1, 4, rng);
    const auto s1 = seminorm(v, r1);
    CHECK(std::fabs(std::fabs(inner(s1.witness, v)) - s1.value) <= 1e-9);
    const Tensor c = test::random_tensor(3, 4, rng);
    const auto s3 = seminorm(c, r3);
    CHECK(std::fabs(std::fabs(inner(s3.witness, c)) - s3.value) <= 1e-9);
  }
}

TEST_CASE("dictionary construction guards") {
  CHECK_THROWS_AS(Dictionary::rank_one_ball(0, 3), precondition_error);
  CHECK_THROWS_AS(Dictionary::rank_one_ball(2, 0), precondition_error);
  CHECK_THROWS_AS(Dictionary::cut_products(0, {}), precondition_error);
  CHECK_THROWS_AS(seminorm(Tensor(2, 3), Dictionary::cut_products(2, {0.5, 0.5})),
                  precondition_error);
}

TEST_CASE("rank-one search is deterministic despite parallel restarts") {
  Rng rng(359);
  const Tensor x = test::random_tensor(3, 4, rng);
  const Dictionary dict = Dictionary::rank_one_ball(3, 4);
  const auto a = seminorm(x, dict);
  for (int rep = 0; rep < 3; ++rep) {
    const auto b = seminorm(x, dict);
    CHECK(a.value == b.value);
    CHECK(std::equal(a.witness.values().begin(), a.witness.values().end(),
                     b.witness.values().begin()));
  }
}
