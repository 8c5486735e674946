#pragma once

#include <stdexcept>
#include <string>

namespace invkern {

// Invalid argument values (negative sizes, mismatched shapes, bad labels).
class input_error : public std::invalid_argument {
 public:
  explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// A request exceeds a hard enumeration/representation budget.
class size_error : public std::length_error {
 public:
  explicit size_error(const std::string& what) : std::length_error(what) {}
};

// Arguments are valid but outside the regime a formula is stated for.
class regime_error : public std::domain_error {
 public:
  explicit regime_error(const std::string& what) : std::domain_error(what) {}
};

// An internal numerical consistency check failed (should not happen).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Least-squares / solver failures (rank deficiency, singular Gram).
class fit_error : public std::runtime_error {
 public:
  explicit fit_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace invkern
