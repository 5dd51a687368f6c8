#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bayestomo {

// Malformed or inconsistent input (bad shapes, mismatched lengths, invalid
// parameters). The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computed result failed one of its declared invariants (trace, Hermiticity,
// positivity). The CLI maps this to exit code 3.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured resource guard (matrix size, lattice size, sample count) was
// exceeded. The CLI maps this to exit code 4.
class GuardLimitExceeded : public std::runtime_error {
 public:
  GuardLimitExceeded(std::string limit_name, std::size_t limit, std::size_t requested)
      : std::runtime_error(limit_name + " exceeded: requested " + std::to_string(requested) +
                           ", limit " + std::to_string(limit)),
        limit_name_(std::move(limit_name)),
        limit_(limit),
        requested_(requested) {}

  const std::string& limit_name() const noexcept { return limit_name_; }
  std::size_t limit() const noexcept { return limit_; }
  std::size_t requested() const noexcept { return requested_; }

 private:
  std::string limit_name_;
  std::size_t limit_;
  std::size_t requested_;
};

// The posterior is undefined because the observed record has zero
// probability under every state in the prior support.
class DegenerateLikelihood : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace bayestomo
