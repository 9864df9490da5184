#ifndef ECM_VERTEX_MODEL_HPP
#define ECM_VERTEX_MODEL_HPP

#include <map>
#include <vector>

#include "ecm/dictionary.hpp"
#include "ecm/graph.hpp"
#include "ecm/tensor.hpp"

namespace ecm {

// An edge-colouring model over n colours: one symmetric tensor per arity
// 0..K. Level k weights the colour tuples seen along the k edges at a
// degree-k vertex.
class EdgeModel {
 public:
  EdgeModel(int dim, std::vector<Tensor> levels);

  int dim() const { return dim_; }
  int max_order() const { return static_cast<int>(levels_.size()) - 1; }
  const Tensor& level(int k) const { return levels_.at(static_cast<std::size_t>(k)); }
  const std::vector<Tensor>& levels() const { return levels_; }

 private:
  int dim_ = 0;
  std::vector<Tensor> levels_;
};

// Per-vertex tensors for the multilinear form pi_F. Shared colour count;
// each tensor symmetric. pi_F requires order(v) == deg(v); the
// Cauchy-Schwarz checker allows order(v) >= deg(v) and slices.
class VertexAssignment {
 public:
  VertexAssignment(int dim, std::vector<Tensor> per_vertex);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(tensors_.size()); }
  const Tensor& at(int v) const { return tensors_.at(static_cast<std::size_t>(v)); }
  VertexAssignment with_vertex(int v, Tensor t) const;

 private:
  int dim_ = 0;
  std::vector<Tensor> tensors_;
};

enum class Engine { brute, contract };

// Partition function: sum over edge colourings of the product over vertices
// of the degree-arity tensor evaluated at the incident colours. The brute
// engine enumerates colourings (budget dim^{|E|}); the contraction engine
// eliminates edge variables along a greedy min-fill order. The two agree to
// relative 1e-9.
double partition_function(const EdgeModel& model, const SimpleGraph& f,
                          Engine engine);

double pi_f(const VertexAssignment& h, const SimpleGraph& f,
            Engine engine = Engine::contract);

// elimination order the contraction engine would use (edge ids)
std::vector<int> contraction_order(const SimpleGraph& f);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  std::vector<double> telescoping;  // pi_F(q^u) audit trail where applicable
};

// sum over colourings of products of slice norms vs the product of full
// norms; tensor orders may exceed degrees
BoundCheck cs_bound_check(const VertexAssignment& h, const SimpleGraph& f);

// |pi_F(g) - pi_F(h)| vs the sum over vertices of the rank-one-ball
// seminorm of g_v - h_v. All tensors must be in the unit ball and every
// degree >= 1 present in f needs an exact rank-one-ball dictionary in
// `dicts` (degree-0 differences are scored by absolute value).
BoundCheck lipschitz_bound_check(const VertexAssignment& g,
                                 const VertexAssignment& h,
                                 const SimpleGraph& f,
                                 const std::map<int, Dictionary>& dicts);

}  // namespace ecm

#endif
