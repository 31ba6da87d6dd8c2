#pragma once

#include <stdexcept>
#include <string>

namespace ortho {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(const std::string& what, long step) : Error(what), step_(step) {}
  /// Zero-based pivot index at which the factorization broke down.
  long step() const { return step_; }

 private:
  long step_;
};

class SingularError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class NormBoundError : public Error {
 public:
  using Error::Error;
};

class SingularTError : public Error {
 public:
  using Error::Error;
};

class OrthonormalityError : public Error {
 public:
  using Error::Error;
};

/// Intra-block orthogonalization broke down (e.g. shifted Cholesky-QR hit a non-positive pivot).
class IntraFailure : public Error {
 public:
  IntraFailure(const std::string& what, long block = -1) : Error(what), block_(block) {}
  long block() const { return block_; }

 private:
  long block_;
};

class BreakdownError : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ortho
