#pragma once

#include <exception>
#include <stdexcept>
#include <string>

namespace fermi {

// All library failures derive from Error; the CLI maps each family to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation (beta <= 0, leaking profiles, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A smearing id was used before being registered in the bilinear data.
class UnregisteredSmearing : public Error {
 public:
  explicit UnregisteredSmearing(int id)
      : Error("unregistered smearing id " + std::to_string(id)), id_(id) {}
  int id() const { return id_; }

 private:
  int id_;
};

/// Conditioning a state on an outcome of (numerically) zero probability.
class NullEventError : public Error {
 public:
  using Error::Error;
};

/// Quadrature or cutoff iteration did not reach the requested tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double estimate)
      : Error(what + " (error estimate " + std::to_string(estimate) + ")"),
        estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

/// An internal cross-check failed (e.g. a channel that is not CPTP).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

namespace exit_code {
inline constexpr int success = 0;
inline constexpr int other = 1;
inline constexpr int config = 2;
inline constexpr int accuracy = 3;
inline constexpr int consistency = 4;
}  // namespace exit_code

int exit_code_for(const std::exception& e);

}  // namespace fermi
