#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace warpgeo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed expression text. offset is a byte offset into the parsed string.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownFunction : public SyntaxError {
 public:
  UnknownFunction(const std::string& name, std::size_t offset)
      : SyntaxError("unknown function '" + name + "'", offset), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string& name)
      : Error("unbound variable '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(double eigenvalue)
      : Error("metric is not positive definite (smallest eigenvalue " +
              std::to_string(eigenvalue) + ")"),
        eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidAlpha : public Error {
 public:
  InvalidAlpha() : Error("alpha must be a non-zero constant") {}
};

class ConventionMismatch : public Error {
 public:
  using Error::Error;
};

class NonPositiveWarp : public Error {
 public:
  using Error::Error;
};

// A builder or check was handed inputs that violate its documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Semantic problem in a manifold-spec file (unknown coordinate, asymmetric metric, ...).
class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace warpgeo
