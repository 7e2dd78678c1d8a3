#pragma once

#include <stdexcept>
#include <string>

namespace bipoisson {

/// Base class of every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong vector lengths, empty words, mismatched sizes.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An argument is well formed but outside the mathematical domain of the
/// operation (a non-tangent vector, a non-closed subspace, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Chart coordinates outside the validity box.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be invertible or of full rank is not.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

/// The principal isotropy dimension changed when the sample count doubled.
class GenericityError : public Error {
 public:
  using Error::Error;
};

/// A reduction-setup identity failed; the message names the identity.
class SetupError : public Error {
 public:
  using Error::Error;
};

}  // namespace bipoisson
