#pragma once

// Constructive tightness of the Frechet bounds.
//
// For marginals m_1..m_n, every conjunction probability in
// [max(sum(m) - (n-1), 0), min(m_i)] is achieved by an explicit joint
// distribution. Both extremes come from couplings of a single latent
// uniform u on [0,1): the comonotone coupling (event i occurs iff
// u < m_i) reaches the upper bound, and the circle-arc coupling (the
// complement of event i is an arc of length 1 - m_i, arcs stacked end to
// end around the circle) reaches the lower bound. A theta-mixture of the
// two hits any target in between, and mixtures preserve marginals.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "softlogic/conjunction.hpp"
#include "softlogic/convexity.hpp"
#include "softlogic/errors.hpp"
#include "softlogic/format.hpp"

namespace softlogic {

struct JointEntry {
  BinaryVector pattern;
  double mass;
};

/// A finitely supported distribution over outcome patterns of n events.
/// Entries are merged, sorted by pattern, and strictly positive.
class JointDistribution {
 public:
  static constexpr std::size_t kMaxArity = 16;

  JointDistribution(std::size_t arity, std::vector<JointEntry> entries)
      : arity_(arity), entries_(std::move(entries)) {
    if (arity_ == 0) throw ArityError("joint distribution needs arity >= 1");
    if (arity_ > kMaxArity) {
      throw ArityError("joint distribution arity " + std::to_string(arity_) +
                       " exceeds the supported maximum " +
                       std::to_string(kMaxArity));
    }
    double sum = 0.0;
    for (const auto& e : entries_) {
      if (e.pattern.arity() != arity_) {
        throw ArityError("pattern arity mismatch in joint distribution");
      }
      if (!(e.mass >= 0.0)) {
        throw DomainError("pattern mass must be nonnegative");
      }
      sum += e.mass;
    }
    if (std::abs(sum - 1.0) > kIdentityTol) {
      throw DomainError("pattern masses must sum to 1, got " +
                        std::to_string(sum));
    }
    std::sort(entries_.begin(), entries_.end(),
              [](const JointEntry& a, const JointEntry& b) {
                return a.pattern < b.pattern;
              });
    std::vector<JointEntry> merged;
    for (auto& e : entries_) {
      if (!merged.empty() && merged.back().pattern == e.pattern) {
        merged.back().mass += e.mass;
      } else {
        merged.push_back(std::move(e));
      }
    }
    std::erase_if(merged, [](const JointEntry& e) { return e.mass <= 0.0; });
    entries_ = std::move(merged);
  }

  std::size_t arity() const { return arity_; }
  const std::vector<JointEntry>& entries() const { return entries_; }

  double mass_on(const BinaryVector& pattern) const {
    for (const auto& e : entries_) {
      if (e.pattern == pattern) return e.mass;
    }
    return 0.0;
  }

  /// CSV rows `pattern,mass`, header included, patterns in sorted order;
  /// leftmost pattern character is event 1.
  std::string to_csv() const {
    std::string out = "pattern,mass\n";
    for (const auto& e : entries_) {
      out += e.pattern.pattern();
      out += ',';
      out += detail::format_g12(e.mass);
      out += '\n';
    }
    return out;
  }

 private:
  std::size_t arity_;
  std::vector<JointEntry> entries_;
};

/// Probability that event i (0-based) occurs.
inline double joint_marginal(const JointDistribution& j, std::size_t i) {
  if (i >= j.arity()) {
    throw IndexError("event index " + std::to_string(i) +
                     " out of range for arity " + std::to_string(j.arity()));
  }
  double s = 0.0;
  for (const auto& e : j.entries()) {
    if (e.pattern.bit(i)) s += e.mass;
  }
  return s;
}

/// Probability that all events occur: the mass on the all-ones pattern.
inline double joint_conjunction_prob(const JointDistribution& j) {
  return j.mass_on(BinaryVector::ones(j.arity()));
}

namespace detail {

/// Splits [0,1) at the given cut points and maps each nonempty segment to
/// a pattern via bit_of(i, a, b) for segment (a, b).
template <typename BitOf>
std::vector<JointEntry> segment_entries(std::vector<double> cuts,
                                        std::size_t arity, BitOf bit_of) {
  cuts.push_back(0.0);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<JointEntry> entries;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    if (!(a >= 0.0) || !(b <= 1.0) || !(b > a)) continue;
    std::vector<int> bits(arity);
    for (std::size_t i = 0; i < arity; ++i) bits[i] = bit_of(i, a, b);
    entries.push_back({BinaryVector(std::move(bits)), b - a});
  }
  return entries;
}

/// Comonotone coupling: event i occurs iff u < m_i.
inline std::vector<JointEntry> comonotone_entries(const ProbabilityVector& m) {
  std::vector<double> cuts(m.begin(), m.end());
  return segment_entries(std::move(cuts), m.arity(),
                         [&](std::size_t i, double /*a*/, double b) {
                           return m[i] >= b ? 1 : 0;
                         });
}

/// Circle-arc coupling: the complement of event i is the arc of length
/// 1 - m_i starting at (sum of earlier complement lengths) mod 1.
inline std::vector<JointEntry> antitone_entries(const ProbabilityVector& m) {
  const std::size_t n = m.arity();
  std::vector<double> start(n), len(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    start[i] = acc - std::floor(acc);
    len[i] = 1.0 - m[i];
    acc += len[i];
  }
  std::vector<double> cuts;
  cuts.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    cuts.push_back(start[i]);
    const double end = start[i] + len[i];
    cuts.push_back(end <= 1.0 ? end : end - 1.0);
  }
  return segment_entries(std::move(cuts), n,
                         [&](std::size_t i, double a, double b) {
                           if (len[i] <= 0.0) return 1;
                           const double end = start[i] + len[i];
                           const bool in_arc =
                               end <= 1.0 ? (a >= start[i] && b <= end)
                                          : (a >= start[i] || b <= end - 1.0);
                           return in_arc ? 0 : 1;
                         });
}

inline double mass_on_ones(const std::vector<JointEntry>& entries,
                           std::size_t arity) {
  double s = 0.0;
  for (const auto& e : entries) {
    if (e.pattern == BinaryVector::ones(arity)) s += e.mass;
  }
  return s;
}

}  // namespace detail

/// Builds a joint distribution with the given marginals whose conjunction
/// probability equals target. Feasible targets are exactly the Frechet
/// interval of the marginals; anything outside raises infeasible-target.
inline JointDistribution construct_joint(const ProbabilityVector& marginals,
                                         double target) {
  const std::size_t n = marginals.arity();
  const FrechetInterval bounds = frechet_bounds(marginals);
  if (target < bounds.lower - kIdentityTol ||
      target > bounds.upper + kIdentityTol) {
    throw InfeasibleTargetError(
        "target " + std::to_string(target) + " lies outside the interval [" +
        std::to_string(bounds.lower) + ", " + std::to_string(bounds.upper) +
        "]");
  }

  std::vector<JointEntry> upper = detail::comonotone_entries(marginals);
  std::vector<JointEntry> lower = detail::antitone_entries(marginals);
  const double u = detail::mass_on_ones(upper, n);
  const double l = detail::mass_on_ones(lower, n);

  // Mixture weight on the lower coupling, from the realized extreme
  // masses so the target is hit to the last bit the mixture allows.
  double theta;
  if (u - l > 0.0) {
    theta = (u - target) / (u - l);
    theta = std::min(std::max(theta, 0.0), 1.0);
  } else {
    theta = 0.0;
  }

  if (theta == 0.0) return JointDistribution(n, std::move(upper));
  if (theta == 1.0) return JointDistribution(n, std::move(lower));

  std::vector<JointEntry> mixed;
  mixed.reserve(upper.size() + lower.size());
  for (auto& e : lower) mixed.push_back({std::move(e.pattern), theta * e.mass});
  for (auto& e : upper) {
    mixed.push_back({std::move(e.pattern), (1.0 - theta) * e.mass});
  }
  return JointDistribution(n, std::move(mixed));
}

}  // namespace softlogic
