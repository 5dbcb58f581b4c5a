#pragma once

#include <stdexcept>
#include <string>

namespace iqbb {

// A child was observed with lower cost than its parent.
class BnbConditionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or infeasible problem instance, or relaxation failure.
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed serialized tree or record file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace iqbb
