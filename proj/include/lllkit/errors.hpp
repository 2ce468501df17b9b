// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lllkit {

// Malformed or out-of-contract input. Maps to CLI exit status 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A guarantee the library relies on did not hold. Never expected in practice.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Enumeration, memory or time budget would be exceeded. CLI exit status 3.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The goodness gate failed; `witness` indexes the offending constraint.
class GateRejected : public std::runtime_error {
 public:
  GateRejected(std::size_t witness, const std::string& what)
      : std::runtime_error(what), witness_(witness) {}
  std::size_t witness() const { return witness_; }

 private:
  std::size_t witness_;
};

}  // namespace lllkit
