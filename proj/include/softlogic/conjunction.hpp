#pragma once

// Soft conjunction operations on probabilities.
//
// The family evaluated here is the one-parameter set of hinge operations
//   and(p_1..p_n) = max(c1 * sum(p) - (n*c1 - 1), 0),   c1 in [1/n, 1],
// whose endpoints are the Lukasiewicz t-norm (c1 = 1) and the arithmetic
// average (c1 = 1/n). A single blend parameter in [0,1] selects c1 per
// arity so that one knob covers every rule arity in a program.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "softlogic/errors.hpp"

namespace softlogic {

/// Absolute tolerance for checks that hold as exact algebraic identities.
inline constexpr double kIdentityTol = 1e-12;
/// Absolute tolerance for sampled inequality checks.
inline constexpr double kSampledTol = 1e-9;

/// A nonempty vector of probabilities, each validated to lie in [0,1].
class ProbabilityVector {
 public:
  explicit ProbabilityVector(std::vector<double> values)
      : values_(std::move(values)) {
    if (values_.empty()) {
      throw ArityError("probability vector must have arity >= 1");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!(values_[i] >= 0.0 && values_[i] <= 1.0)) {
        throw DomainError("probability entry " + std::to_string(i + 1) +
                          " = " + std::to_string(values_[i]) +
                          " is outside [0,1]");
      }
    }
  }

  ProbabilityVector(std::initializer_list<double> values)
      : ProbabilityVector(std::vector<double>(values)) {}

  std::size_t arity() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  double sum() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s;
  }

  double min() const { return *std::min_element(values_.begin(), values_.end()); }

 private:
  std::vector<double> values_;
};

namespace detail {

/// Shared hinge kernel max(c1*sum - (n*c1 - 1), 0), clamped into [0,1] to
/// absorb last-ulp rounding at the top boundary. All three public
/// evaluators route through this so the blend endpoints coincide exactly
/// with the Lukasiewicz and average operations.
inline double family_from_sum(double c1, double sum, std::size_t arity) {
  const double n = static_cast<double>(arity);
  const double v = c1 * sum - (n * c1 - 1.0);
  return std::min(std::max(v, 0.0), 1.0);
}

}  // namespace detail

/// One member of the soft-conjunction family. blend = 1 is Lukasiewicz,
/// blend = 0 is the arithmetic average.
class SoftConjunction {
 public:
  explicit SoftConjunction(double blend) : blend_(blend) {
    if (!(blend >= 0.0 && blend <= 1.0)) {
      throw DomainError("blend = " + std::to_string(blend) +
                        " is outside [0,1]");
    }
  }

  double blend() const { return blend_; }

  /// Per-arity coefficient c1 = 1/n + blend*(1 - 1/n), in [1/n, 1].
  double resolve_c1(std::size_t arity) const {
    if (arity == 0) throw ArityError("arity must be >= 1");
    if (blend_ == 1.0) return 1.0;
    const double inv = 1.0 / static_cast<double>(arity);
    const double c1 = inv + blend_ * (1.0 - inv);
    return std::min(std::max(c1, inv), 1.0);
  }

 private:
  double blend_;
};

/// max(sum(p) - (n-1), 0).
inline double eval_lukasiewicz(const ProbabilityVector& p) {
  return detail::family_from_sum(1.0, p.sum(), p.arity());
}

/// sum(p) / n.
inline double eval_average(const ProbabilityVector& p) {
  const double inv = 1.0 / static_cast<double>(p.arity());
  return detail::family_from_sum(inv, p.sum(), p.arity());
}

/// Family member selected by op, evaluated at p.
inline double eval_family(const SoftConjunction& op, const ProbabilityVector& p) {
  return detail::family_from_sum(op.resolve_c1(p.arity()), p.sum(), p.arity());
}

/// The sharp interval [max(sum - (n-1), 0), min(p_i)] of achievable
/// conjunction probabilities for given marginals.
struct FrechetInterval {
  double lower = 0.0;
  double upper = 1.0;

  double width() const { return upper - lower; }
  bool contains(double t, double tol) const {
    return t >= lower - tol && t <= upper + tol;
  }
};

inline FrechetInterval frechet_bounds(const ProbabilityVector& p) {
  const double upper = p.min();
  // min() guards the last-ulp case where the hinge sum rounds above an
  // equal upper bound.
  const double lower =
      std::min(detail::family_from_sum(1.0, p.sum(), p.arity()), upper);
  return FrechetInterval{lower, upper};
}

/// Abstract n-ary conjunction evaluator used by checks and audits.
using ConjunctionFn = std::function<double(const ProbabilityVector&)>;

enum class BoundSide { Lower, Upper };

inline std::string to_string(BoundSide side) {
  return side == BoundSide::Lower ? "lower" : "upper";
}

/// Outcome of a Definition-1 check: whether op(p) lies inside the Frechet
/// interval, with the violated side and gap as witness when it does not.
struct BoundCheck {
  bool within = true;
  BoundSide side = BoundSide::Lower;
  double gap = 0.0;
  double value = 0.0;
  FrechetInterval interval;
};

inline BoundCheck satisfies_definition1(const ConjunctionFn& op,
                                        const ProbabilityVector& p) {
  const double value = op(p);
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DomainError("conjunction evaluator returned " +
                      std::to_string(value) + ", outside [0,1]");
  }
  const FrechetInterval bounds = frechet_bounds(p);
  BoundCheck check;
  check.value = value;
  check.interval = bounds;
  if (value < bounds.lower - kSampledTol) {
    check.within = false;
    check.side = BoundSide::Lower;
    check.gap = bounds.lower - value;
  } else if (value > bounds.upper + kSampledTol) {
    check.within = false;
    check.side = BoundSide::Upper;
    check.gap = value - bounds.upper;
  }
  return check;
}

}  // namespace softlogic
