#pragma once

#include <stdexcept>
#include <string>

namespace dgama {

/// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Cholesky pivot was <= 0: the matrix left the positive-definite cone.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// An iterative routine hit its iteration cap.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A covariance entry has no agent that can observe it.
class NoLeader : public Error {
 public:
  using Error::Error;
};

class NotJointlyObservable : public Error {
 public:
  using Error::Error;
};

/// Two data sources reported different values for the same variable.
class InconsistentData : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The eigenvalue box [a, b] is unusable (a <= 0 or a > b).
class InvalidBox : public Error {
 public:
  using Error::Error;
};

class InvalidDelta : public Error {
 public:
  using Error::Error;
};

/// A bound evaluator needed history entries that were never logged.
class MissingLog : public Error {
 public:
  using Error::Error;
};

}  // namespace dgama
