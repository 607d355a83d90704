#pragma once

#include <stdexcept>
#include <string>

namespace softlogic {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vector or operation was given an unusable arity (empty vector, arity 0).
class ArityError : public Error {
 public:
  using Error::Error;
};

/// A probability or blend value lies outside [0,1].
class DomainError : public Error {
 public:
  using Error::Error;
};

/// decompose_boundary requires the coordinate sum to equal n-1.
class BoundarySumError : public Error {
 public:
  using Error::Error;
};

/// decompose_interior requires the coordinate sum to be at most n-1.
class InteriorSumError : public Error {
 public:
  using Error::Error;
};

/// decompose_upper requires the coordinate sum to exceed n-1.
class UpperSumError : public Error {
 public:
  using Error::Error;
};

/// construct_joint was asked for a conjunction probability outside the
/// Frechet interval of its marginals.
class InfeasibleTargetError : public Error {
 public:
  using Error::Error;
};

/// An event or atom index is out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// A rule variable could not be bound to a domain during grounding.
class GroundingError : public Error {
 public:
  using Error::Error;
};

/// grid_oracle refuses models with too many free atoms.
class OracleScaleError : public Error {
 public:
  using Error::Error;
};

/// The loss exponent is below 1, so the objective need not be convex.
class NonconvexLossError : public Error {
 public:
  using Error::Error;
};

/// LP export is only defined for the piecewise-linear loss (exponent 1).
class NotPiecewiseLinearError : public Error {
 public:
  using Error::Error;
};

}  // namespace softlogic
