#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace weldkit {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An input violates a type invariant (normalization, univalence, positivity).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computation ran but could not produce a trustworthy result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class RankGapError : public NumericalError {
 public:
  RankGapError(const std::string& what, double sigma_min_ratio, double sigma_second_ratio)
      : NumericalError(what), sigma_min_ratio_(sigma_min_ratio), sigma_second_ratio_(sigma_second_ratio) {}
  double sigma_min_ratio() const noexcept { return sigma_min_ratio_; }
  double sigma_second_ratio() const noexcept { return sigma_second_ratio_; }

 private:
  double sigma_min_ratio_;
  double sigma_second_ratio_;
};

class WeldingInconsistency : public NumericalError {
 public:
  WeldingInconsistency(const std::string& what, double consistency)
      : NumericalError(what), consistency_(consistency) {}
  double consistency() const noexcept { return consistency_; }

 private:
  double consistency_;
};

class RootFindingError : public NumericalError {
 public:
  RootFindingError(const std::string& what, std::vector<std::complex<double>> partial)
      : NumericalError(what), partial_(std::move(partial)) {}
  const std::vector<std::complex<double>>& partial_roots() const noexcept { return partial_; }

 private:
  std::vector<std::complex<double>> partial_;
};

}  // namespace weldkit
