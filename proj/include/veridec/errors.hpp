#pragma once

#include <stdexcept>
#include <string>

namespace veridec {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input: schema violations, invalid scenarios, bad preconditions.
struct ValidationError : Error {
  using Error::Error;
};

// A set function fails the capacity axioms where a capacity is required.
struct CapacityError : Error {
  using Error::Error;
};

// A capacity is outside the verification model class (Mobius negativity,
// non-unique minimal cores, or unclaimed positive mass).
struct ModelClassError : Error {
  using Error::Error;
};

// A deterministic witness search ran out of candidates at the requested
// grid resolution.
struct SearchExhaustedError : Error {
  using Error::Error;
};

}  // namespace veridec
