#pragma once

#include <stdexcept>
#include <string>

namespace lamg {

/// Raised for malformed inputs and violated preconditions.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lamg
