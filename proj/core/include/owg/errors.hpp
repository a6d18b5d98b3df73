#pragma once

#include <stdexcept>
#include <string>

namespace owg {

// Two envelopes (or an envelope and a trace) were combined on different grids.
class GridMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A normalization or correlation needed a nonzero signal.
class ZeroSignal : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// A damped normal-equations system could not be factorized.
class SingularSystem : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An iterative solver or loop stopped without meeting its tolerance.
class NonConvergence : public std::runtime_error {
public:
  NonConvergence(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

}  // namespace owg
