#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dynobs {

/// Malformed or inconsistent input: undeclared names, alphabet mismatches,
/// parse errors. Maps to CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A caller broke an operation's documented precondition.
class PreconditionError : public std::logic_error {
 public:
  explicit PreconditionError(const std::string& what) : std::logic_error(what) {}
};

/// A configured resource cap was exceeded. Maps to CLI exit code 3.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::size_t cap)
      : std::runtime_error(what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}

  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

}  // namespace dynobs
