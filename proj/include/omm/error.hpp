#pragma once

#include <stdexcept>
#include <string>

namespace omm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or missing input (parameter records, config files, sweep specs).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A covariance-level quantity was requested at a point whose drift matrix
// has an eigenvalue with non-negative real part.
class UnstablePointError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Eigen-solver failure, non-physical determinant, excessive imaginary residue.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace omm
