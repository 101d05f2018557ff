#pragma once
/// \file common.hpp
/// Shared error types and small utilities for the mtgraph library.

#include <stdexcept>
#include <string>

namespace mtg {

inline constexpr const char* kVersion = "0.1.0";

/// Internal invariant check that stays live in release builds.
#define MTG_ASSERT(cond, msg)                                            \
  do {                                                                   \
    if (!(cond)) throw std::logic_error(std::string("invariant: ") + (msg)); \
  } while (0)

/// Error in user-supplied input (model file, flags, preconditions).
/// CLI maps this family to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Numerical failure (no convergence, singular matrix, lost positivity).
/// CLI maps this family to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace mtg
