#pragma once

#include <stdexcept>
#include <string>

namespace framelab {

// Base class for every error thrown by the library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape or index mismatch between operands.
struct dimension_error : error {
  using error::error;
};

// An operand violates a precondition (non-finite data, non-Hermitian input,
// a family that is required to be a frame but is not, ...).
struct contract_error : error {
  using error::error;
};

// The request cannot be satisfied for structural reasons (e.g. asking for a
// frame with fewer points than the dimension).
struct infeasible_error : error {
  using error::error;
};

// A randomized construction exhausted its retry budget.
struct generation_error : error {
  using error::error;
};

// The operation is defined but deliberately not offered for these arguments.
struct unsupported_error : error {
  using error::error;
};

// Malformed input text: JSON documents, scalars, CLI values.
struct parse_error : error {
  using error::error;
};

}  // namespace framelab
