#ifndef ECM_GRAPHON_HPP
#define ECM_GRAPHON_HPP

#include <vector>

#include "ecm/dictionary.hpp"
#include "ecm/graph.hpp"
#include "ecm/tensor.hpp"

namespace ecm {

// Symmetric step function on [0,1]^2 with q blocks of measure mu_i and
// values in [0,1]. The block structure makes every integral below a finite
// sum, evaluated exactly.
struct StepGraphon {
  int q = 0;
  std::vector<double> mu;    // positive, sums to 1
  std::vector<double> vals;  // q x q row-major, symmetric, entries in [0,1]

  StepGraphon() = default;
  StepGraphon(int q, std::vector<double> mu, std::vector<double> vals);

  double at(int i, int j) const {
    return vals[static_cast<std::size_t>(i) * static_cast<std::size_t>(q) +
                static_cast<std::size_t>(j)];
  }
  bool uniform_measure(double tol) const;
};

// homomorphism density: sum over block assignments of V(F) of the product
// of block measures and edge weights; budget q^{|V(F)|}
double tau(const StepGraphon& w, const SimpleGraph& f);

// adjacency matrix of G as a step graphon with uniform blocks;
// tau(result, F) * |V(G)|^{|V(F)|} counts homomorphisms F -> G
StepGraphon graph_to_graphon(const SimpleGraph& g);

// restriction of the cut seminorm to the step algebra: exact maximum over
// block-subset pairs, witness recorded in cut_s/cut_t
SeminormValue cut_seminorm(const StepGraphon& w);

struct CutDistance {
  double value = 0.0;
  std::vector<int> permutation;  // block relabeling of w2 achieving the min
};

// min over all q! block permutations of the cut seminorm of w1 - sigma.w2.
// Requires equal q <= 8 and uniform measures on both sides. Both arguments
// are canonically relabeled first, so the value is exactly invariant under
// block permutations of either input. Upper bound on the full
// measure-automorphism orbit distance.
CutDistance cut_distance_aligned(const StepGraphon& w1, const StepGraphon& w2);

}  // namespace ecm

#endif
