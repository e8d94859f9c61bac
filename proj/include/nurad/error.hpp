#pragma once

#include <stdexcept>
#include <string>

namespace nurad {

/// Failure categories shared by every module.
enum class ErrorKind {
  invalid_input,     ///< non-finite or malformed argument
  domain,            ///< argument outside the mathematical domain (r <= 0, n < 0, ...)
  degenerate,        ///< degenerate equation (e.g. a = b = 0 in a quadratic)
  no_structure,      ///< potential has neither a minimum nor a zero on r > 0
  no_branch,         ///< no real k makes the NU radicand a perfect square
  invalid_k,         ///< k does not certify a perfect-square radicand
  unsupported_sigma, ///< closed-form factor requested for sigma != s
  complex_index,     ///< q + 1/4 < 0
  singular_branch,   ///< vanishing eigenvalue denominator
  non_normalizable,  ///< eigenfunction requested for a state that is not bound
  integration,       ///< adaptive quadrature did not converge
  oracle,            ///< finite-difference eigensolver failure
  config,            ///< CLI / configuration error
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::domain: return "domain";
    case ErrorKind::degenerate: return "degenerate-equation";
    case ErrorKind::no_structure: return "no-structure";
    case ErrorKind::no_branch: return "no-branch";
    case ErrorKind::invalid_k: return "invalid-k";
    case ErrorKind::unsupported_sigma: return "unsupported-sigma";
    case ErrorKind::complex_index: return "complex-index";
    case ErrorKind::singular_branch: return "singular-branch";
    case ErrorKind::non_normalizable: return "non-normalizable";
    case ErrorKind::integration: return "integration-failure";
    case ErrorKind::oracle: return "oracle";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nurad
