// SPDX-License-Identifier: MIT
#ifndef BELLMAN_ERRORS_HPP
#define BELLMAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bellman {

/// Base class for all failures this library reports by exception.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent run configuration (bad key, bad value, bad file).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The supplied boundary function violates an admissibility requirement
/// (wrong third-derivative sign layout, separation gap, growth parameter).
class ClassGateError : public Error {
 public:
  using Error::Error;
};

/// The foliation builder could not complete a construction step
/// (cup growth obstructed, force family not balanceable, iteration cap hit).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// A quadrature or root-finding routine could not reach its tolerance.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// An improper integral diverges in the requested regime.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace bellman

#endif  // BELLMAN_ERRORS_HPP
