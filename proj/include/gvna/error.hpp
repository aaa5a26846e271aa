#pragma once

#include <stdexcept>
#include <string>

namespace gvna {

/// Raised when an argument violates a documented precondition
/// (unknown generator, context mismatch, malformed input, ...).
class input_error : public std::invalid_argument {
 public:
  explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a configured enumeration or search budget is exhausted.
/// The message names the bound that was hit.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gvna
