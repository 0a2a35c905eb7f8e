#pragma once

#include <stdexcept>
#include <string>

namespace phlab {

// Error categories mirror the status codes of the C interface.
enum class ErrorKind {
  kInvalidArgument = 1,
  kDomain = 2,
  kSizeCap = 3,
  kNumerical = 4,
  kIo = 5,
  kValidation = 6,
  kSampling = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parameter outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::kDomain, what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorKind::kInvalidArgument, what) {}
};

/// Problem size exceeds an explicit resource limit.
class SizeCapError : public Error {
 public:
  explicit SizeCapError(const std::string& what) : Error(ErrorKind::kSizeCap, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::kNumerical, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

/// Experiment configuration failed validation; the message names the field.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& field, const std::string& constraint)
      : Error(ErrorKind::kValidation, field + ": " + constraint), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Rejection sampler gave up; signals a malformed density.
class SamplingError : public Error {
 public:
  explicit SamplingError(const std::string& what) : Error(ErrorKind::kSampling, what) {}
};

}  // namespace phlab
