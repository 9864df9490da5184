#ifndef ECM_ORBIT_HPP
#define ECM_ORBIT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "ecm/dictionary.hpp"
#include "ecm/graph.hpp"
#include "ecm/tensor.hpp"
#include "ecm/vertex_model.hpp"

namespace ecm {

// Which subgroup of the orthogonal group O(n) to search. Permutations and
// signed permutations are enumerated exactly (n <= 8 / n <= 6); the sampled
// variant draws Haar-random rotations and polishes each with two-coordinate
// rotation descent, yielding an upper bound only.
struct GroupSpec {
  enum class Variant { permutations, signed_permutations, sampled_orthogonal };
  Variant variant = Variant::permutations;
  int n = 1;
  int sample_count = 256;
  int refine_steps = 100;
  std::uint64_t seed = 0;
};

// applies the orthogonal matrix g (n x n row-major) to every mode of t;
// preserves the Hilbert norm and, up to roundoff, index symmetry
Tensor act(std::span<const double> g, const Tensor& t);

// base metric for orbit distances: plain Hilbert distance, or d_R for a
// dictionary (per tensor order when models are compared)
class OrbitMetric {
 public:
  static OrbitMetric hilbert();
  static OrbitMetric seminorm_metric(Dictionary dict);
  static OrbitMetric seminorm_per_order(std::map<int, Dictionary> dicts);

  double distance(const Tensor& x, const Tensor& y) const;
  bool is_hilbert() const { return dicts_.empty(); }

 private:
  OrbitMetric() = default;
  std::map<int, Dictionary> dicts_;
};

struct OrbitDistance {
  enum class Kind { exact, upper_bound };
  double value = 0.0;
  Kind kind = Kind::exact;
  std::vector<double> witness;  // n x n matrix achieving the reported value
};

OrbitDistance orbit_distance(const Tensor& x, const Tensor& y,
                             const GroupSpec& group, const OrbitMetric& metric);

// the same group element acts on every level simultaneously; the distance
// aggregates levels by their maximum (the product-space metric)
OrbitDistance orbit_distance(const EdgeModel& x, const EdgeModel& y,
                             const GroupSpec& group, const OrbitMetric& metric);

struct InvarianceReport {
  double max_rel_deviation = 0.0;
  std::vector<double> base_values;
  std::vector<double> acted_values;
};

// evaluates pi on the model and on its g-transform over the given graphs;
// deviations are relative to |pi| + 1
InvarianceReport pi_invariance_check(const EdgeModel& model,
                                     std::span<const double> g,
                                     const std::vector<SimpleGraph>& graphs);

// Haar-distributed random orthogonal matrix (row-major)
std::vector<double> random_orthogonal(int n, std::uint64_t seed);

std::vector<double> permutation_matrix(const std::vector<int>& perm);

}  // namespace ecm

#endif
