#ifndef ECM_GRAPH_HPP
#define ECM_GRAPH_HPP

#include <utility>
#include <vector>

namespace ecm {

// Loopless simple graph. Edges are unordered vertex pairs stored with
// u < v; delta(v) lists the ids of incident edges in insertion order.
class SimpleGraph {
 public:
  SimpleGraph() = default;
  SimpleGraph(int n_vertices, std::vector<std::pair<int, int>> edges);

  int n_vertices() const { return n_; }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& delta(int v) const {
    return incidence_[static_cast<std::size_t>(v)];
  }
  int degree(int v) const {
    return static_cast<int>(incidence_[static_cast<std::size_t>(v)].size());
  }
  int max_degree() const;

  // permutes the stored order of delta(v); the partition function must not
  // care, which the invariance tests exercise
  void permute_incidence(int v, const std::vector<int>& perm);

  static SimpleGraph complete(int n);
  static SimpleGraph cycle(int n);
  static SimpleGraph path(int n);
  static SimpleGraph disjoint_union(const SimpleGraph& a, const SimpleGraph& b);

  // every labeled simple graph on exactly n vertices (2^(n choose 2) of them)
  static std::vector<SimpleGraph> all_labeled(int n);
  // every labeled simple graph on 0..n_max vertices
  static std::vector<SimpleGraph> all_labeled_up_to(int n_max);

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> incidence_;
};

}  // namespace ecm

#endif
