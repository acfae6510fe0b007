#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace heomcorr {

// Dimension or precondition violated by the caller.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A state has an eigenvalue below the allowed numerical slack.
class PositivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid physical parameters (bath poles, negative rates, ...).
class ParameterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Hierarchy or grid larger than the configured budget.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, std::size_t requested)
      : std::runtime_error(what), requested_(requested) {}
  std::size_t requested() const { return requested_; }

 private:
  std::size_t requested_;
};

// Adaptive step size collapsed below the floor.
class StiffnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Propagated state left the physical region.
class PropagationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invalid configuration text.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed data handed to an analysis routine.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace heomcorr
