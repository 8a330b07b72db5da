#pragma once

#include <stdexcept>
#include <string>

namespace dnstrip {

// Parameters outside the region where an operation is defined.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Evaluation landed within tolerance of a tan pole; use the regularized form.
class PoleError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// No sign change of the matching function on the search interval.
class NoRootError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A numerical verdict could not be certified within its error bars.
class InconclusiveError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace dnstrip
