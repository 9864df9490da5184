#ifndef ECM_REGULARITY_HPP
#define ECM_REGULARITY_HPP

#include <vector>

#include "ecm/dictionary.hpp"
#include "ecm/tensor.hpp"

namespace ecm {

// Result of the greedy dictionary decomposition of a unit-ball element:
//   original = sum_i coeffs[i] * atoms[i] + residual
// with coeffs[i] = <atoms[i], a_i> for the iterates a_0 = original,
// a_{i+1} = a_i - coeffs[i] * atoms[i]. energy_log[i] = ||a_i||^2 has
// steps+1 entries and decreases by at least 1/k per executed step.
struct Decomposition {
  Tensor original{0, 1};
  std::vector<Tensor> atoms;
  std::vector<double> coeffs;
  Tensor residual{0, 1};
  std::vector<double> energy_log;
  int steps = 0;
  int k = 0;
  // true when the dictionary is exact-kind, so "residual seminorm <=
  // 1/sqrt(k)" is a certificate rather than a best-effort search outcome
  bool certified = true;
};

// Peel off the best-correlated atom while the seminorm of the iterate
// exceeds 1/sqrt(k). Requires ||a|| <= 1 and k >= 1; at most k steps run.
Decomposition greedy_decompose(const Tensor& a, const Dictionary& dict, int k);

struct EnergyReport {
  int steps = 0;
  // max |  ||a_{i+1}||^2 - (||a_i||^2 - c_i^2 (2 - ||r_i||^2))  |
  double max_identity_violation = 0.0;
  // max | <r_i, a_i> - coeffs[i] |
  double max_coeff_mismatch = 0.0;
  // max over recorded vs recomputed ||a_i||^2
  double max_energy_log_error = 0.0;
  // ||a_i||^2 <= 1 - i/k while the loop ran
  bool chained_bound_ok = true;
  double max_chain_excess = 0.0;
  double residual_seminorm = 0.0;
  bool residual_certified = true;

  bool pass(double tol) const {
    return max_identity_violation <= tol && max_coeff_mismatch <= tol &&
           max_energy_log_error <= tol && chained_bound_ok;
  }
};

// Replays the decomposition from original/atoms/coeffs and checks the
// per-step energy identity, the chained energy bound and the recorded log.
// Throws if the decomposition does not reconstruct its original.
EnergyReport verify_energy_identity(const Decomposition& dec,
                                    const Dictionary& dict);

// All coefficients in [-1, +1] (up to the shared tolerance) and the
// reconstruction identity holds.
bool q_k_membership(const Decomposition& dec);

}  // namespace ecm

#endif
