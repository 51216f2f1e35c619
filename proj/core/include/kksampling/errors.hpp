#pragma once

#include <stdexcept>
#include <string>

namespace kks {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A dilation candidate has an eigenvalue on or inside the unit circle.
class NonExpansiveMatrix : public Error {
 public:
  using Error::Error;
};

/// A linear solve or derivative estimate lost too much precision.
class IllConditioned : public Error {
 public:
  using Error::Error;
};

/// Richardson levels of a finite-difference derivative disagree.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// A synthesized kernel or averager failed its post-hoc moment-defect check.
class DefectCheckFailed : public Error {
 public:
  DefectCheckFailed(const std::string& what, double defect) : Error(what), defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// A quadrature rule would need more nodes than the configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// The truncated lattice set for an operator exceeds the configured cap.
class TruncationCapExceeded : public Error {
 public:
  using Error::Error;
};

/// A test function returned a non-finite value during integration or sampling.
class EvaluationFailure : public Error {
 public:
  using Error::Error;
};

/// Two grids that must share geometry do not.
class GeometryMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace kks
