#ifndef FRACDIFF_ERRORS_HPP
#define FRACDIFF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fracdiff {

// Evaluation at a point where the function is singular (e.g. y^beta at y=0
// with beta < 0, or Bessel K in the overflow regime).
class SingularEvaluationError : public std::runtime_error {
 public:
  explicit SingularEvaluationError(const std::string& what)
      : std::runtime_error(what) {}
};

// Derivative order beyond what the recurrence supports.
class UnsupportedOrderError : public std::runtime_error {
 public:
  explicit UnsupportedOrderError(const std::string& what)
      : std::runtime_error(what) {}
};

// Domain kind not handled by the requested operation.
class UnsupportedDomainError : public std::runtime_error {
 public:
  explicit UnsupportedDomainError(const std::string& what)
      : std::runtime_error(what) {}
};

// Invalid discretization parameter (mesh grading, level range, ...).
class ParameterError : public std::runtime_error {
 public:
  explicit ParameterError(const std::string& what)
      : std::runtime_error(what) {}
};

// Matrix expected SPD failed a factorization or a definiteness check.
class IndefiniteMatrixError : public std::runtime_error {
 public:
  explicit IndefiniteMatrixError(const std::string& what)
      : std::runtime_error(what) {}
};

// Problem size exceeds a hard cap of the chosen algorithm.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// A quadrature or iteration failed to reach its accuracy target; carries the
// best estimate achieved.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

// Invalid geometry (self-intersecting polygon, refinement failure, ...).
class GeometryError : public std::runtime_error {
 public:
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

// Computed trace pairing exceeds the reference pairing by more than roundoff,
// meaning the reference solution is not fine enough.
class ReferenceInconsistencyError : public std::runtime_error {
 public:
  explicit ReferenceInconsistencyError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace fracdiff

#endif
