#pragma once

// Convexity audits and constructive vertex decompositions.
//
// Every p in [0,1]^n splits into a convex combination of binary vectors:
// on the hyperplane sum(p) = n-1 the weights are a_i = 1 - p_i on the
// one-zero vertices t_i; below it every vertex can be chosen with a zero
// bit; above it the all-ones vertex t0 carries exactly sum(p) - (n-1).
// Together with a seeded Jensen-inequality search this corroborates that
// the Lukasiewicz hinge is the unique convex operation staying inside the
// Frechet interval.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "softlogic/conjunction.hpp"
#include "softlogic/errors.hpp"
#include "softlogic/random.hpp"

namespace softlogic {

/// A 0/1 vector, the vertices of the probability box.
class BinaryVector {
 public:
  explicit BinaryVector(std::vector<int> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) throw ArityError("binary vector must have arity >= 1");
    for (int b : bits_) {
      if (b != 0 && b != 1) {
        throw DomainError("binary vector entries must be 0 or 1");
      }
    }
  }

  BinaryVector(std::initializer_list<int> bits)
      : BinaryVector(std::vector<int>(bits)) {}

  /// All-ones vector t0.
  static BinaryVector ones(std::size_t arity) {
    return BinaryVector(std::vector<int>(arity, 1));
  }

  /// All-zeros vector.
  static BinaryVector zeros(std::size_t arity) {
    return BinaryVector(std::vector<int>(arity, 0));
  }

  /// t_i: ones everywhere except a single zero at position i (0-based).
  static BinaryVector ones_except(std::size_t arity, std::size_t i) {
    std::vector<int> bits(arity, 1);
    bits.at(i) = 0;
    return BinaryVector(std::move(bits));
  }

  /// e_i: zeros everywhere except a single one at position i (0-based).
  static BinaryVector unit(std::size_t arity, std::size_t i) {
    std::vector<int> bits(arity, 0);
    bits.at(i) = 1;
    return BinaryVector(std::move(bits));
  }

  std::size_t arity() const { return bits_.size(); }
  int bit(std::size_t i) const { return bits_[i]; }
  const std::vector<int>& bits() const { return bits_; }

  bool all_ones() const {
    return std::all_of(bits_.begin(), bits_.end(), [](int b) { return b == 1; });
  }

  ProbabilityVector to_probability_vector() const {
    std::vector<double> v(bits_.begin(), bits_.end());
    return ProbabilityVector(std::move(v));
  }

  /// Pattern string, e.g. "011"; leftmost character is coordinate 1.
  std::string pattern() const {
    std::string s;
    s.reserve(bits_.size());
    for (int b : bits_) s.push_back(b ? '1' : '0');
    return s;
  }

  friend bool operator==(const BinaryVector& a, const BinaryVector& b) {
    return a.bits_ == b.bits_;
  }
  friend bool operator<(const BinaryVector& a, const BinaryVector& b) {
    return a.bits_ < b.bits_;
  }

 private:
  std::vector<int> bits_;
};

struct WeightedVertex {
  BinaryVector vertex;
  double weight;
};

/// A convex combination of binary vectors: nonnegative weights summing to
/// one. Terms are kept merged (distinct vertices) and sorted by pattern.
class VertexCombination {
 public:
  VertexCombination(std::size_t arity, std::vector<WeightedVertex> terms)
      : arity_(arity), terms_(std::move(terms)) {
    if (arity_ == 0) throw ArityError("vertex combination needs arity >= 1");
    merge();
    double sum = 0.0;
    for (const auto& t : terms_) {
      if (t.vertex.arity() != arity_) {
        throw ArityError("vertex arity mismatch in combination");
      }
      if (!(t.weight >= 0.0)) {
        throw DomainError("combination weight must be nonnegative");
      }
      sum += t.weight;
    }
    if (!(std::abs(sum - 1.0) <= kSampledTol)) {
      throw DomainError("combination weights must sum to 1, got " +
                        std::to_string(sum));
    }
  }

  std::size_t arity() const { return arity_; }
  const std::vector<WeightedVertex>& terms() const { return terms_; }

  double weight_sum() const {
    double s = 0.0;
    for (const auto& t : terms_) s += t.weight;
    return s;
  }

  /// Weight carried by a specific vertex (0 when absent).
  double weight_on(const BinaryVector& v) const {
    for (const auto& t : terms_) {
      if (t.vertex == v) return t.weight;
    }
    return 0.0;
  }

  /// Sum of weight * vertex, coordinate by coordinate.
  std::vector<double> reconstruct() const {
    std::vector<double> r(arity_, 0.0);
    for (const auto& t : terms_) {
      for (std::size_t j = 0; j < arity_; ++j) {
        if (t.vertex.bit(j)) r[j] += t.weight;
      }
    }
    return r;
  }

 private:
  void merge() {
    std::sort(terms_.begin(), terms_.end(),
              [](const WeightedVertex& a, const WeightedVertex& b) {
                return a.vertex < b.vertex;
              });
    std::vector<WeightedVertex> merged;
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().vertex == t.vertex) {
        merged.back().weight += t.weight;
      } else {
        merged.push_back(std::move(t));
      }
    }
    std::erase_if(merged, [](const WeightedVertex& t) { return t.weight <= 0.0; });
    terms_ = std::move(merged);
  }

  std::size_t arity_;
  std::vector<WeightedVertex> terms_;
};

namespace detail {

/// Staircase decomposition of an arbitrary u in [0,1]^n: sort coordinates
/// descending; vertices are the top-k indicator vectors, weighted by the
/// consecutive value gaps. Every emitted vertex uses only coordinates with
/// positive value, so a zero coordinate in u stays zero in every vertex.
inline void staircase_terms(const std::vector<double>& u, double scale,
                            std::vector<WeightedVertex>& out) {
  const std::size_t n = u.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return u[a] > u[b]; });

  std::vector<int> vertex(n, 0);
  double prev = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double val = u[order[k]];
    const double w = prev - val;
    if (w > 0.0) out.push_back({BinaryVector(vertex), scale * w});
    vertex[order[k]] = 1;
    prev = val;
  }
  if (prev > 0.0) out.push_back({BinaryVector(vertex), scale * prev});
}

/// a_i = 1 - p_i on the vertices t_i; valid when sum(p) = n-1.
inline void boundary_terms(const std::vector<double>& p, double scale,
                           std::vector<WeightedVertex>& out) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 1.0 - p[i];
    if (w > 0.0) out.push_back({BinaryVector::ones_except(n, i), scale * w});
  }
}

}  // namespace detail

/// Decompose p with sum(p) = n-1 (within 1e-9) as sum of (1-p_i) * t_i.
inline VertexCombination decompose_boundary(const ProbabilityVector& p) {
  const std::size_t n = p.arity();
  const double target = static_cast<double>(n) - 1.0;
  if (std::abs(p.sum() - target) > kSampledTol) {
    throw BoundarySumError("coordinate sum " + std::to_string(p.sum()) +
                           " must equal n-1 = " + std::to_string(target));
  }
  std::vector<WeightedVertex> terms;
  detail::boundary_terms(p.values(), 1.0, terms);
  return VertexCombination(n, std::move(terms));
}

/// Decompose p with sum(p) <= n-1 into vertices that all carry at least
/// one zero bit. Follows the promotion procedure: with q_j the value that
/// would lift coordinate j onto the sum = n-1 hyperplane, either split
/// between the zeroed vector and that boundary vector (q_j <= 1), or split
/// between the zeroed and fully raised vector and continue on the latter.
inline VertexCombination decompose_interior(const ProbabilityVector& p) {
  const std::size_t n = p.arity();
  const double target = static_cast<double>(n) - 1.0;
  if (p.sum() > target) {
    throw InteriorSumError("coordinate sum " + std::to_string(p.sum()) +
                           " must be at most n-1 = " + std::to_string(target));
  }

  std::vector<WeightedVertex> terms;
  std::vector<double> v = p.values();
  double acc = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    double rest = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != j) rest += v[i];
    }
    const double qj = target - rest;
    if (qj <= 1.0) {
      const double q = std::max(qj, 0.0);
      double hi = q > 0.0 ? std::min(v[j] / q, 1.0) : 0.0;
      if (hi > 0.0) {
        std::vector<double> b = v;
        b[j] = q;
        detail::boundary_terms(b, acc * hi, terms);
      }
      if (1.0 - hi > 0.0) {
        std::vector<double> z = v;
        z[j] = 0.0;
        detail::staircase_terms(z, acc * (1.0 - hi), terms);
      }
      break;
    }
    // qj > 1: split coordinate j between 0 and 1, keep the raised branch.
    if (v[j] < 1.0) {
      std::vector<double> z = v;
      z[j] = 0.0;
      detail::staircase_terms(z, acc * (1.0 - v[j]), terms);
    }
    if (v[j] <= 0.0) break;
    acc *= v[j];
    v[j] = 1.0;
  }
  return VertexCombination(n, std::move(terms));
}

/// Decompose p with sum(p) > n-1 as a0 * t0 + sum of (1-p_i) * t_i, with
/// a0 = sum(p) - (n-1) on the all-ones vertex.
inline VertexCombination decompose_upper(const ProbabilityVector& p) {
  const std::size_t n = p.arity();
  const double target = static_cast<double>(n) - 1.0;
  const double a0 = p.sum() - target;
  if (!(a0 > 0.0)) {
    throw UpperSumError("coordinate sum " + std::to_string(p.sum()) +
                        " must exceed n-1 = " + std::to_string(target));
  }
  std::vector<WeightedVertex> terms;
  terms.push_back({BinaryVector::ones(n), a0});
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 1.0 - p[i];
    if (w > 0.0) terms.push_back({BinaryVector::ones_except(n, i), w});
  }
  return VertexCombination(n, std::move(terms));
}

/// Dispatch on sum(p) vs n-1; the all-ones vertex ends up carrying exactly
/// max(sum(p) - (n-1), 0).
inline VertexCombination decompose(const ProbabilityVector& p) {
  const double target = static_cast<double>(p.arity()) - 1.0;
  const double s = p.sum();
  if (s > target) return decompose_upper(p);
  if (target - s <= kIdentityTol) return decompose_boundary(p);
  return decompose_interior(p);
}

/// A sampled Jensen-inequality violation: the operation evaluated at the
/// mixture exceeds the mixture of its values.
struct ConvexityCounterexample {
  ProbabilityVector x;
  ProbabilityVector y;
  double lambda;
  double lhs;
  double rhs;
  double gap;
  bool from_probe;
};

struct BoundFailure {
  ProbabilityVector point;
  BoundSide side;
  double gap;
  bool from_probe;
};

struct Disagreement {
  ProbabilityVector point;
  double value;
  double expected;
};

enum class AuditVerdict {
  ConvexAndLogical,
  ConvexNotLogical,
  LogicalNotConvex,
  Neither,
};

inline std::string to_string(AuditVerdict v) {
  switch (v) {
    case AuditVerdict::ConvexAndLogical: return "convex-and-logical";
    case AuditVerdict::ConvexNotLogical: return "convex-not-logical";
    case AuditVerdict::LogicalNotConvex: return "logical-not-convex";
    case AuditVerdict::Neither: return "neither";
  }
  return "neither";
}

namespace detail {

inline double checked_eval(const ConjunctionFn& op, const ProbabilityVector& p) {
  const double v = op(p);
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError("conjunction evaluator returned " + std::to_string(v) +
                      ", outside [0,1]");
  }
  return v;
}

inline ProbabilityVector mix(const ProbabilityVector& x,
                             const ProbabilityVector& y, double lambda) {
  std::vector<double> m(x.arity());
  for (std::size_t i = 0; i < x.arity(); ++i) {
    const double v = lambda * x[i] + (1.0 - lambda) * y[i];
    m[i] = std::min(std::max(v, 0.0), 1.0);  // fp guard at the box boundary
  }
  return ProbabilityVector(std::move(m));
}

/// Probe pairs checked before random sampling: opposing unit vertices
/// (e_i, e_j) and their complements (t_i, t_j), each at lambda = 1/2. The
/// known concavity counterexamples for min and product live here.
inline std::vector<std::pair<BinaryVector, BinaryVector>> probe_pairs(
    std::size_t arity) {
  std::vector<std::pair<BinaryVector, BinaryVector>> pairs;
  for (std::size_t i = 0; i < arity; ++i) {
    for (std::size_t j = i + 1; j < arity; ++j) {
      pairs.emplace_back(BinaryVector::unit(arity, i),
                         BinaryVector::unit(arity, j));
    }
  }
  for (std::size_t i = 0; i < arity; ++i) {
    for (std::size_t j = i + 1; j < arity; ++j) {
      pairs.emplace_back(BinaryVector::ones_except(arity, i),
                         BinaryVector::ones_except(arity, j));
    }
  }
  return pairs;
}

struct SearchOutcome {
  std::optional<ConvexityCounterexample> counterexample;
  std::size_t triples_tested = 0;
};

inline SearchOutcome convexity_search_counted(const ConjunctionFn& op,
                                              std::size_t arity,
                                              std::size_t samples,
                                              std::uint64_t seed) {
  if (arity == 0) throw ArityError("arity must be >= 1");
  if (samples == 0) throw ArityError("samples must be >= 1");

  SearchOutcome out;
  auto test = [&](const ProbabilityVector& x, const ProbabilityVector& y,
                  double lambda, bool probe) -> bool {
    ++out.triples_tested;
    const double vx = checked_eval(op, x);
    const double vy = checked_eval(op, y);
    const ProbabilityVector m = mix(x, y, lambda);
    const double lhs = checked_eval(op, m);
    const double rhs = lambda * vx + (1.0 - lambda) * vy;
    if (lhs > rhs + kSampledTol) {
      out.counterexample =
          ConvexityCounterexample{x, y, lambda, lhs, rhs, lhs - rhs, probe};
      return true;
    }
    return false;
  };

  for (const auto& [a, b] : probe_pairs(arity)) {
    if (test(a.to_probability_vector(), b.to_probability_vector(), 0.5, true)) {
      return out;
    }
  }

  UniformSampler rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> xv(arity), yv(arity);
    for (auto& v : xv) v = rng.next();
    for (auto& v : yv) v = rng.next();
    const double lambda = rng.next();
    ProbabilityVector x(std::move(xv));
    ProbabilityVector y(std::move(yv));
    if (test(x, y, lambda, false)) return out;
  }
  return out;
}

}  // namespace detail

/// Seeded search for a Jensen violation of op on [0,1]^arity. Probes the
/// deterministic vertex pairs first, then draws `samples` random triples
/// (x, y, lambda); returns the first violation found, if any.
inline std::optional<ConvexityCounterexample> convexity_search(
    const ConjunctionFn& op, std::size_t arity, std::size_t samples,
    std::uint64_t seed) {
  return detail::convexity_search_counted(op, arity, samples, seed)
      .counterexample;
}

/// Joint convexity + Definition-1 audit of an operation.
struct AuditReport {
  std::size_t samples_drawn = 0;
  std::vector<ConvexityCounterexample> violations;
  std::size_t bound_failure_count = 0;
  std::vector<BoundFailure> bound_failures;  // capped at kMaxReported
  std::size_t disagreement_count = 0;
  std::vector<Disagreement> disagreements;  // capped at kMaxReported
  double max_lukasiewicz_gap = 0.0;
  AuditVerdict verdict = AuditVerdict::Neither;

  static constexpr std::size_t kMaxReported = 5;
};

/// Run convexity_search and Frechet-bound sampling jointly. When the
/// verdict is convex-and-logical, the operation must also agree pointwise
/// with eval_lukasiewicz; disagreements are counted as inconsistencies.
inline AuditReport uniqueness_audit(const ConjunctionFn& op, std::size_t arity,
                                    std::size_t samples, std::uint64_t seed) {
  if (arity < 2) throw ArityError("uniqueness audit requires arity >= 2");
  if (samples == 0) throw ArityError("samples must be >= 1");

  AuditReport report;
  auto search = detail::convexity_search_counted(op, arity, samples, seed);
  report.samples_drawn += search.triples_tested;
  if (search.counterexample) {
    report.violations.push_back(*search.counterexample);
  }

  auto check_point = [&](const ProbabilityVector& p, bool probe) {
    const double v = detail::checked_eval(op, p);
    const FrechetInterval bounds = frechet_bounds(p);
    ++report.samples_drawn;
    if (v < bounds.lower - kSampledTol) {
      ++report.bound_failure_count;
      if (report.bound_failures.size() < AuditReport::kMaxReported) {
        report.bound_failures.push_back(
            {p, BoundSide::Lower, bounds.lower - v, probe});
      }
    } else if (v > bounds.upper + kSampledTol) {
      ++report.bound_failure_count;
      if (report.bound_failures.size() < AuditReport::kMaxReported) {
        report.bound_failures.push_back(
            {p, BoundSide::Upper, v - bounds.upper, probe});
      }
    }
    const double expected = eval_lukasiewicz(p);
    const double gap = std::abs(v - expected);
    report.max_lukasiewicz_gap = std::max(report.max_lukasiewicz_gap, gap);
    if (gap > kSampledTol) {
      ++report.disagreement_count;
      if (report.disagreements.size() < AuditReport::kMaxReported) {
        report.disagreements.push_back({p, v, expected});
      }
    }
  };

  // Deterministic bound probes: the one-hot and one-zero vertices, where
  // every blend below 1 exceeds the upper bound.
  for (std::size_t i = 0; i < arity; ++i) {
    check_point(BinaryVector::unit(arity, i).to_probability_vector(), true);
  }
  for (std::size_t i = 0; i < arity; ++i) {
    check_point(BinaryVector::ones_except(arity, i).to_probability_vector(),
                true);
  }

  UniformSampler rng(seed + 1);
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> pv(arity);
    for (auto& v : pv) v = rng.next();
    check_point(ProbabilityVector(std::move(pv)), false);
  }

  const bool convex = report.violations.empty();
  const bool logical = report.bound_failure_count == 0;
  report.verdict = convex ? (logical ? AuditVerdict::ConvexAndLogical
                                     : AuditVerdict::ConvexNotLogical)
                          : (logical ? AuditVerdict::LogicalNotConvex
                                     : AuditVerdict::Neither);
  return report;
}

/// Audit fixture: min(p_1..p_n). Logical but concave.
inline double min_conjunction(const ProbabilityVector& p) { return p.min(); }

/// Audit fixture: product of coordinates. Logical but not convex.
inline double product_conjunction(const ProbabilityVector& p) {
  double v = 1.0;
  for (double x : p) v *= x;
  return v;
}

}  // namespace softlogic
