#include "ecm/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ecm/config.hpp"
#include "ecm/errors.hpp"
#include "ecm/linalg.hpp"
#include "ecm/parallel.hpp"
#include "ecm/rng.hpp"

namespace ecm {

Tensor act(std::span<const double> g, const Tensor& t) {
  const auto& tol = Tolerances::defaults();
  if (static_cast<int>(g.size()) != t.dim() * t.dim())
    throw precondition_error("act: matrix must be dim x dim");
  if (orthogonality_defect(g, t.dim()) > tol.orthogonality)
    throw precondition_error("act: matrix is not orthogonal");
  return t.apply_matrix_all_modes(g);
}

OrbitMetric OrbitMetric::hilbert() { return OrbitMetric{}; }

OrbitMetric OrbitMetric::seminorm_metric(Dictionary dict) {
  OrbitMetric m;
  m.dicts_.emplace(dict.order(), std::move(dict));
  return m;
}

OrbitMetric OrbitMetric::seminorm_per_order(std::map<int, Dictionary> dicts) {
  OrbitMetric m;
  m.dicts_ = std::move(dicts);
  return m;
}

double OrbitMetric::distance(const Tensor& x, const Tensor& y) const {
  if (!x.same_shape(y)) throw precondition_error("metric shape mismatch");
  if (dicts_.empty()) return hilbert_norm(x - y);
  const auto it = dicts_.find(x.order());
  if (it == dicts_.end()) {
    if (x.order() == 0) return std::fabs(x[0] - y[0]);
    throw precondition_error("no dictionary for tensor order " +
                             std::to_string(x.order()));
  }
  return seminorm(x - y, it->second).value;
}

std::vector<double> permutation_matrix(const std::vector<int>& perm) {
  const auto n = perm.size();
  std::vector<double> g(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    g[i * n + static_cast<std::size_t>(perm[i])] = 1.0;
  return g;
}

std::vector<double> random_orthogonal(int n, std::uint64_t seed) {
  const auto un = static_cast<std::size_t>(n);
  Rng rng(seed);
  std::vector<double> g(un * un);
  for (auto& x : g) x = rng.gaussian();
  // modified Gram-Schmidt on columns, run twice for orthogonality near
  // machine precision
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t c = 0; c < un; ++c) {
      for (std::size_t pc = 0; pc < c; ++pc) {
        double dot = 0.0;
        for (std::size_t r = 0; r < un; ++r) dot += g[r * un + c] * g[r * un + pc];
        for (std::size_t r = 0; r < un; ++r) g[r * un + c] -= dot * g[r * un + pc];
      }
      double nrm = 0.0;
      for (std::size_t r = 0; r < un; ++r) nrm += g[r * un + c] * g[r * un + c];
      nrm = std::sqrt(nrm);
      if (nrm < 1e-12) {
        // essentially impossible for Gaussian input; restart the column
        for (std::size_t r = 0; r < un; ++r) g[r * un + c] = rng.gaussian();
        --c;
        continue;
      }
      for (std::size_t r = 0; r < un; ++r) g[r * un + c] /= nrm;
    }
  }
  return g;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

void apply_givens_right(std::vector<double>& g, int n, int p, int q,
                        double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const auto un = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < un; ++i) {
    const double gp = g[i * un + static_cast<std::size_t>(p)];
    const double gq = g[i * un + static_cast<std::size_t>(q)];
    g[i * un + static_cast<std::size_t>(p)] = c * gp - s * gq;
    g[i * un + static_cast<std::size_t>(q)] = s * gp + c * gq;
  }
}

// minimise f over [lo, hi] by golden-section; returns (arg, value)
template <typename F>
std::pair<double, double> golden_section(F&& f, double lo, double hi, int iters) {
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

struct Candidate {
  double value = 0.0;
  std::vector<double> matrix;
};

template <typename DistanceFn>
Candidate refine_by_rotations(std::vector<double> g, int n, int steps,
                              DistanceFn&& dist) {
  Candidate cur{dist(g), g};
  if (n < 2) return cur;
  std::vector<std::pair<int, int>> pairs;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) pairs.emplace_back(p, q);
  for (int s = 0; s < steps; ++s) {
    const auto [p, q] = pairs[static_cast<std::size_t>(s) % pairs.size()];
    auto objective = [&](double theta) {
      std::vector<double> trial = cur.matrix;
      apply_givens_right(trial, n, p, q, theta);
      return dist(trial);
    };
    const auto [theta, val] = golden_section(objective, -kPi / 2.0, kPi / 2.0, 24);
    if (val < cur.value) {
      apply_givens_right(cur.matrix, n, p, q, theta);
      cur.value = val;
    }
  }
  return cur;
}

template <typename DistanceFn>
OrbitDistance orbit_search(int n, const GroupSpec& group, DistanceFn&& dist) {
  OrbitDistance out;
  switch (group.variant) {
    case GroupSpec::Variant::permutations: {
      if (n > 8) throw budget_error("permutation enumeration limited to n <= 8");
      std::vector<int> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      bool first = true;
      do {
        const auto g = permutation_matrix(perm);
        const double v = dist(g);
        if (first || v < out.value) {
          out.value = v;
          out.witness = g;
          first = false;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      out.kind = OrbitDistance::Kind::exact;
      return out;
    }
    case GroupSpec::Variant::signed_permutations: {
      if (n > 6)
        throw budget_error("signed permutation enumeration limited to n <= 6");
      std::vector<int> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      bool first = true;
      do {
        for (std::uint32_t signs = 0; signs < (1u << n); ++signs) {
          auto g = permutation_matrix(perm);
          for (int i = 0; i < n; ++i)
            if (signs >> i & 1u)
              g[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = -1.0;
          const double v = dist(g);
          if (first || v < out.value) {
            out.value = v;
            out.witness = g;
            first = false;
          }
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      out.kind = OrbitDistance::Kind::exact;
      return out;
    }
    case GroupSpec::Variant::sampled_orthogonal: {
      const auto samples = static_cast<std::size_t>(group.sample_count);
      // candidate 0 is the identity so the result never exceeds d(x, y)
      const auto results = parallel_map<Candidate>(samples + 1, [&](std::size_t i) {
        std::vector<double> g;
        if (i == 0) {
          g.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
          for (int r = 0; r < n; ++r)
            g[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) +
              static_cast<std::size_t>(r)] = 1.0;
        } else {
          g = random_orthogonal(n, group.seed + 0x51ed2701u * i);
        }
        return refine_by_rotations(std::move(g), n, group.refine_steps, dist);
      });
      std::size_t best = 0;
      for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].value < results[best].value) best = i;
      out.value = results[best].value;
      out.witness = results[best].matrix;
      out.kind = OrbitDistance::Kind::upper_bound;
      return out;
    }
  }
  throw error("unreachable group variant");
}

}  // namespace

OrbitDistance orbit_distance(const Tensor& x, const Tensor& y,
                             const GroupSpec& group, const OrbitMetric& metric) {
  if (!x.same_shape(y)) throw precondition_error("orbit distance shape mismatch");
  if (group.n != x.dim())
    throw precondition_error("group dimension must match tensor dim");
  return orbit_search(x.dim(), group, [&](const std::vector<double>& g) {
    return metric.distance(x, act(g, y));
  });
}

OrbitDistance orbit_distance(const EdgeModel& x, const EdgeModel& y,
                             const GroupSpec& group, const OrbitMetric& metric) {
  if (x.dim() != y.dim() || x.max_order() != y.max_order())
    throw precondition_error("orbit distance model shape mismatch");
  if (group.n != x.dim())
    throw precondition_error("group dimension must match model dim");
  return orbit_search(x.dim(), group, [&](const std::vector<double>& g) {
    double worst = 0.0;
    for (int k = 0; k <= x.max_order(); ++k)
      worst = std::max(worst, metric.distance(x.level(k), act(g, y.level(k))));
    return worst;
  });
}

InvarianceReport pi_invariance_check(const EdgeModel& model,
                                     std::span<const double> g,
                                     const std::vector<SimpleGraph>& graphs) {
  std::vector<Tensor> acted;
  acted.reserve(static_cast<std::size_t>(model.max_order()) + 1);
  for (int k = 0; k <= model.max_order(); ++k)
    acted.push_back(symmetrize(act(g, model.level(k))));
  const EdgeModel moved(model.dim(), std::move(acted));

  InvarianceReport rep;
  for (const auto& f : graphs) {
    const double base = partition_function(model, f, Engine::brute);
    const double after = partition_function(moved, f, Engine::brute);
    rep.base_values.push_back(base);
    rep.acted_values.push_back(after);
    rep.max_rel_deviation = std::max(
        rep.max_rel_deviation, std::fabs(after - base) / (std::fabs(base) + 1.0));
  }
  return rep;
}

}  // namespace ecm
