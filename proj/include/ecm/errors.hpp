#ifndef ECM_ERRORS_HPP
#define ECM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ecm {

// Error taxonomy mirrored by the CLI exit codes: parse 2, budget 3,
// precondition 4.

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input files; message names the file and field.
struct parse_error : error {
  using error::error;
};

// An enumeration or storage budget would be exceeded.
struct budget_error : error {
  using error::error;
};

// A documented operation precondition does not hold.
struct precondition_error : error {
  using error::error;
};

}  // namespace ecm

#endif
