#include "ecm/regularity.hpp"

#include <cmath>

#include "ecm/config.hpp"
#include "ecm/errors.hpp"

namespace ecm {

Decomposition greedy_decompose(const Tensor& a, const Dictionary& dict, int k) {
  const auto& tol = Tolerances::defaults();
  if (k < 1) throw precondition_error("greedy_decompose needs k >= 1");
  if (hilbert_norm(a) > 1.0 + tol.ball)
    throw precondition_error("greedy_decompose needs ||a|| <= 1");
  dict.require_compatible(a);

  const double threshold = 1.0 / std::sqrt(static_cast<double>(k));

  Decomposition dec;
  dec.original = a;
  dec.k = k;
  dec.certified = dict.exact_kind();

  Tensor iterate = a;
  dec.energy_log.push_back(inner(iterate, iterate));
  while (dec.steps < k) {
    const SeminormValue sv = seminorm(iterate, dict);
    // the slack lets a step at exactly 1/sqrt(k) proceed instead of
    // stalling on the boundary
    if (!(sv.value > threshold - tol.stop_slack)) break;
    const double coeff = inner(sv.witness, iterate);
    iterate.add_scaled(sv.witness, -coeff);
    dec.atoms.push_back(sv.witness);
    dec.coeffs.push_back(coeff);
    dec.energy_log.push_back(inner(iterate, iterate));
    ++dec.steps;
  }
  dec.residual = std::move(iterate);
  return dec;
}

namespace {

Tensor replay_reconstruction(const Decomposition& dec) {
  Tensor acc = dec.residual;
  for (std::size_t i = 0; i < dec.atoms.size(); ++i)
    acc.add_scaled(dec.atoms[i], dec.coeffs[i]);
  return acc;
}

}  // namespace

EnergyReport verify_energy_identity(const Decomposition& dec,
                                    const Dictionary& dict) {
  const auto& tol = Tolerances::defaults();
  if (dec.atoms.size() != dec.coeffs.size() ||
      dec.energy_log.size() != dec.atoms.size() + 1 ||
      dec.steps != static_cast<int>(dec.atoms.size()))
    throw precondition_error("decomposition record is internally inconsistent");

  const Tensor rebuilt = replay_reconstruction(dec);
  if (hilbert_norm(dec.original - rebuilt) > tol.abs_eq)
    throw precondition_error("decomposition does not reconstruct its original");

  EnergyReport rep;
  rep.steps = dec.steps;

  Tensor iterate = dec.original;
  double prev_energy = inner(iterate, iterate);
  rep.max_energy_log_error = std::fabs(prev_energy - dec.energy_log[0]);
  const double inv_k = 1.0 / static_cast<double>(dec.k);

  for (int i = 0; i < dec.steps; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double chain_limit = 1.0 - static_cast<double>(i) * inv_k;
    if (prev_energy > chain_limit + tol.abs_eq) {
      rep.chained_bound_ok = false;
    }
    rep.max_chain_excess = std::max(rep.max_chain_excess, prev_energy - chain_limit);

    const Tensor& atom = dec.atoms[ui];
    const double c = dec.coeffs[ui];
    rep.max_coeff_mismatch =
        std::max(rep.max_coeff_mismatch, std::fabs(inner(atom, iterate) - c));

    iterate.add_scaled(atom, -c);
    const double energy = inner(iterate, iterate);
    const double predicted =
        prev_energy - c * c * (2.0 - inner(atom, atom));
    rep.max_identity_violation =
        std::max(rep.max_identity_violation, std::fabs(energy - predicted));
    rep.max_energy_log_error = std::max(
        rep.max_energy_log_error, std::fabs(energy - dec.energy_log[ui + 1]));
    prev_energy = energy;
  }

  // final chained bound, after the last executed step
  const double final_limit = 1.0 - static_cast<double>(dec.steps) * inv_k;
  if (prev_energy > final_limit + tol.abs_eq) rep.chained_bound_ok = false;
  rep.max_chain_excess = std::max(rep.max_chain_excess, prev_energy - final_limit);

  const SeminormValue sv = seminorm(dec.residual, dict);
  rep.residual_seminorm = sv.value;
  rep.residual_certified = dict.exact_kind();
  return rep;
}

bool q_k_membership(const Decomposition& dec) {
  const auto& tol = Tolerances::defaults();
  for (double c : dec.coeffs)
    if (std::fabs(c) > 1.0 + tol.abs_eq) return false;
  if (dec.atoms.size() != dec.coeffs.size()) return false;
  const Tensor rebuilt = replay_reconstruction(dec);
  return hilbert_norm(dec.original - rebuilt) <= tol.abs_eq;
}

}  // namespace ecm
