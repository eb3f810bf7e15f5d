#ifndef SGDCERT_TYPES_HPP
#define SGDCERT_TYPES_HPP

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sgdcert {

/// Dense column vector of doubles; the ambient space for all iterates,
/// gradients and minimizers.
using DenseVector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// A caller broke a documented precondition (bad dimension, index out of
/// range, non-positive curvature, ...).
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what)
      : std::invalid_argument(what) {}
};

/// The objective fails the growth condition at the probed point: the average
/// gradient vanishes but some component gradient does not.
class GrowthViolation : public std::runtime_error {
 public:
  explicit GrowthViolation(const std::string& what)
      : std::runtime_error(what) {}
};

/// Step size lies outside the open interval (0, 2/(L B^2)) where the descent
/// guarantee holds.
class WindowViolation : public std::runtime_error {
 public:
  explicit WindowViolation(const std::string& what)
      : std::runtime_error(what) {}
};

/// An optimizer run produced a non-finite objective value. `iteration` is the
/// first iteration whose record went bad.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long iteration)
      : std::runtime_error(what), iteration(iteration) {}
  long iteration;
};

/// An internal numeric routine failed to converge or overflowed.
class NumericFailure : public std::runtime_error {
 public:
  explicit NumericFailure(const std::string& what)
      : std::runtime_error(what) {}
};

/// Too few usable data points for a fit.
class InsufficientData : public std::runtime_error {
 public:
  explicit InsufficientData(const std::string& what)
      : std::runtime_error(what) {}
};

/// Malformed problem or experiment file; the message names the offending
/// field. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// File system failure while reading or writing an artifact.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sgdcert

#endif  // SGDCERT_TYPES_HPP
