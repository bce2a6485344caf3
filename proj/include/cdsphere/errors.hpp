// Error types shared across the library. Parameter and domain violations use
// the std exceptions directly; the types below carry numeric payloads that
// callers may want to inspect (achieved error, final bracket, ...).
#pragma once

#include <stdexcept>
#include <string>

namespace cdsphere {

/// Adaptive quadrature stopped before reaching the requested tolerance.
class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}
    double achieved_error() const { return achieved_error_; }

  private:
    double achieved_error_;
};

/// Root bracketing finished without meeting the requested tolerance.
class ToleranceError : public std::runtime_error {
  public:
    ToleranceError(const std::string& what, double bracket_lo, double bracket_hi)
        : std::runtime_error(what), lo_(bracket_lo), hi_(bracket_hi) {}
    double bracket_lo() const { return lo_; }
    double bracket_hi() const { return hi_; }

  private:
    double lo_;
    double hi_;
};

/// Finite-difference step produced inconsistent results between h and 2h.
class FdStepError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Eigenvalue grid refinement disagreed by more than the safety threshold.
class GridError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A numeric certificate contradicted its analytic counterpart (impl bug).
class CertificationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Monte-Carlo batch failed its health limits (e.g. too many rejections).
class SamplingError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace cdsphere
