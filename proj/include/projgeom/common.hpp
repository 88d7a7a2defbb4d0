#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>

namespace projgeom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Error hierarchy. `ValidationError` covers bad inputs (CLI exit code 2),
// `SolverError` covers numerical failures (exit code 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class PreconditionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ManifestError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Chart evaluation requested outside the closed parameter box, or an
/// expression evaluated where it is undefined / not differentiable.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class RankDeficient : public SolverError {
 public:
  using SolverError::SolverError;
};

class NotC2 : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SolverFailure : public SolverError {
 public:
  using SolverError::SolverError;
};

/// A real number or +infinity, with the infinite case carried as an explicit
/// state rather than a floating point sentinel.
class ExtendedReal {
 public:
  static ExtendedReal finite(double v) {
    if (!(v == v) || v == std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument("ExtendedReal::finite: value must be finite");
    }
    return ExtendedReal(false, v);
  }
  static ExtendedReal unbounded() { return ExtendedReal(true, 0.0); }

  bool is_unbounded() const { return unbounded_; }
  bool is_finite() const { return !unbounded_; }

  double value() const {
    if (unbounded_) throw std::logic_error("ExtendedReal::value on unbounded");
    return value_;
  }

  /// `value()` for finite, `fallback` otherwise.
  double value_or(double fallback) const { return unbounded_ ? fallback : value_; }

  std::string to_string() const;

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.unbounded_ == b.unbounded_ && (a.unbounded_ || a.value_ == b.value_);
  }

 private:
  ExtendedReal(bool u, double v) : unbounded_(u), value_(v) {}
  bool unbounded_;
  double value_;
};

inline constexpr double kMachineEps = std::numeric_limits<double>::epsilon();

}  // namespace projgeom
