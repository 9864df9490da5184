#ifndef ECM_CONFIG_HPP
#define ECM_CONFIG_HPP

namespace ecm {

// Every tolerance used by the library lives in this one record so that test
// suites have a single knob to turn.
struct Tolerances {
  double abs_eq = 1e-9;         // absolute slack in equality / inequality checks
  double rel_engine = 1e-9;     // engine agreement, relative with unit floor
  double stop_slack = 1e-12;    // greedy stopping-threshold slack
  double ball = 1e-9;           // unit-ball membership slack
  double orthogonality = 1e-9;  // max-abs of g^T g - I
  double measure_sum = 1e-12;   // block measures summing to one
  double eigen_offdiag = 1e-12; // Jacobi sweep target
  double als = 1e-10;           // alternating-maximization convergence
  double budget_values = 1e7;   // dense tensor entries
  double budget_enum = 1e8;     // brute-force colouring / assignment count

  static const Tolerances& defaults();
};

inline const Tolerances& Tolerances::defaults() {
  static const Tolerances t{};
  return t;
}

// |a - b| <= tol * max(1, |a|, |b|): relative agreement with an absolute
// floor at 1, so near-cancelled values compare by absolute error.
bool close_rel(double a, double b, double tol);

}  // namespace ecm

#endif
