#ifndef ECM_DICTIONARY_HPP
#define ECM_DICTIONARY_HPP

#include <cstdint>
#include <vector>

#include "ecm/tensor.hpp"

namespace ecm {

// Restart/iteration limits for the rank-one-ball search at order >= 3.
struct SearchBudget {
  int restarts = 32;
  int max_iter = 200;
};

// A bounded family R of atoms together with the evaluation of
// sup_{r in R} |<r, x>|. Three families are supported:
//
//   finite_set     explicit atoms, shared shape, Hilbert norm <= 1
//   rank_one_ball  {f1 (x) ... (x) fk : ||fi|| <= 1}; exact for k <= 2
//                  (norm / largest singular value), alternating search
//                  with restarts for k >= 3 (certified lower bound only)
//   cut_products   indicator products over blocks of measure mu, realised
//                  as atoms with entries mu_i*mu_j on S x T and 0 elsewhere
class Dictionary {
 public:
  enum class Variant { finite_set, rank_one_ball, cut_products };

  static Dictionary finite_set(std::vector<Tensor> atoms);
  static Dictionary rank_one_ball(int order, int dim, SearchBudget budget = {});
  static Dictionary cut_products(int q, std::vector<double> mu);

  Variant variant() const { return variant_; }
  bool exact_kind() const {
    return variant_ != Variant::rank_one_ball || order_ <= 2;
  }
  int order() const { return order_; }
  int dim() const { return dim_; }
  int q() const { return q_; }
  const std::vector<double>& mu() const { return mu_; }
  const std::vector<Tensor>& atoms() const { return atoms_; }
  const SearchBudget& budget() const { return budget_; }

  // shape the dictionary pairs with (cut_products acts on q x q tensors)
  bool compatible(const Tensor& x) const;
  void require_compatible(const Tensor& x) const;

 private:
  Dictionary() = default;
  Variant variant_ = Variant::finite_set;
  int order_ = 0;
  int dim_ = 0;
  int q_ = 0;
  std::vector<double> mu_;
  std::vector<Tensor> atoms_;
  SearchBudget budget_;
};

struct SeminormValue {
  enum class Kind { exact, lower_bound };
  double value = 0.0;
  Kind kind = Kind::exact;
  Tensor witness{0, 1};           // |<witness, x>| == value (within fp)
  int atom_index = -1;            // finite_set only
  std::uint32_t cut_s = 0;        // cut_products only: block bitmasks
  std::uint32_t cut_t = 0;
};

SeminormValue seminorm(const Tensor& x, const Dictionary& dict);

// Fast evaluator for cut-type maxima over raw q x q values; exposed for the
// block-permutation alignment search. Returns max over subset pairs (S, T)
// of |sum_{i in S, j in T} mu_i mu_j vals_ij| without materialising a
// witness.
double cut_max_value(int q, const std::vector<double>& mu,
                     const std::vector<double>& vals);

}  // namespace ecm

#endif
