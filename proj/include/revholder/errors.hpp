#pragma once

#include <stdexcept>
#include <string>

namespace revholder {

// Argument outside the mathematical domain of an operation (t outside [-1,1],
// Jacobi index <= -1, p >= q, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Slope fit over fewer than four degrees or a grid with no spread in log n.
class DegenerateGridError : public DomainError {
public:
  using DomainError::DomainError;
};

// A node or evaluation budget would be exceeded.
class BudgetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Iterative solver (node polishing, sup refinement) failed to converge, or a
// constructed rule failed its self-certification.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An integrand or operator input produced a non-finite value.
class NonFiniteError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Quadrature exactness too low for the declared polynomial degree of an input.
class ExactnessError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed experiment configuration or CLI argument.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace revholder
