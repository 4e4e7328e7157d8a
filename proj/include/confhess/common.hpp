#pragma once

#include <stdexcept>
#include <string>

namespace confhess {

// Parameter outside its documented range (bad b <= 0, mu <= 1, ...).
struct ParamError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Structurally malformed input: unsorted eigenvalue list, asymmetric matrix,
// unparsable JSON or expression text, unknown catalog name.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Evaluation point outside a field's domain (singular locus, tabulated range,
// finite-difference stencil leaving the domain, point at infinity).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical procedure could not complete: bracket/bisection failure,
// step underflow without a blow-up certificate, rank-deficient fit.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace confhess
