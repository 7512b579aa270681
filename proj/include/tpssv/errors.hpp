#pragma once

#include <stdexcept>
#include <string>

namespace tpssv {

// Input violates a documented invariant (bad lambda, m/n out of envelope, ...).
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Fock cutoff cannot hold the state to the requested tail tolerance.
class CutoffTooSmall : public std::runtime_error {
public:
  CutoffTooSmall(const std::string &what, int required)
      : std::runtime_error(what), required_cutoff(required) {}
  int required_cutoff;
};

// Request exceeds a hard size limit (grid points, cutoff cap, ...).
class ResourceLimit : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Numerical procedure did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace tpssv
