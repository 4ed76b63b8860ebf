#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fbmg {

// Every library error names the module that raised it so that the CLI can
// report "<module>: <message>" and map the error kind onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(std::string_view module, const std::string& message)
      : std::runtime_error(std::string(module) + ": " + message), module_(module) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Input violates a documented precondition (e.g. a path not starting at 0).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Problem size exceeds a documented cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Two paths that must share a grid do not.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

// Factorization / embedding / quadrature failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// The data carries no information for the requested estimate.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Malformed input file.
class InputFormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace fbmg
