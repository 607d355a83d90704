#pragma once

// Hinge-loss inference over a ground model.
//
// The objective is sum_r lambda_r * max(and(body_r) - p(head_r), 0)^p
// with and() a soft-conjunction family member. For exponent p >= 1 this
// is convex piecewise-(linear|smooth) in the free atom probabilities, so
// projected subgradient descent with eta_t = eta0/sqrt(t) converges; a
// brute-force grid oracle and an LP text export (p = 1 only) provide
// independent checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "softlogic/conjunction.hpp"
#include "softlogic/errors.hpp"
#include "softlogic/format.hpp"
#include "softlogic/random.hpp"
#include "softlogic/rules.hpp"

namespace softlogic {

struct LossSpec {
  double exponent = 1.0;  // convex for exponent >= 1
};

/// Probability per ground atom; evidence entries stay at their declared
/// values throughout.
struct Interpretation {
  std::vector<double> values;
};

enum class InitMode { Center, Random };

struct SolveConfig {
  std::uint64_t seed = 0;
  std::size_t max_iterations = 10000;
  double eta0 = 0.5;
  double tolerance = 1e-9;
  InitMode init = InitMode::Center;
};

struct Solution {
  Interpretation interpretation;
  double objective = 0.0;
  std::size_t iterations = 0;
  std::vector<double> rule_penalties;
};

/// lambda_r * max(and(body) - head, 0)^exponent.
inline double rule_penalty(const GroundRule& rule, const Interpretation& x,
                           const SoftConjunction& op, const LossSpec& loss) {
  std::vector<double> body(rule.body.size());
  for (std::size_t i = 0; i < rule.body.size(); ++i) {
    body[i] = x.values.at(rule.body[i]);
  }
  const double conj = eval_family(op, ProbabilityVector(std::move(body)));
  const double h = conj - x.values.at(rule.head);
  if (h <= 0.0) return 0.0;
  const double severity =
      loss.exponent == 1.0 ? h : std::pow(h, loss.exponent);
  return rule.weight * severity;
}

/// Sum of rule penalties in fixed rule order.
inline double evaluate_objective(const GroundModel& m, const Interpretation& x,
                                 const SoftConjunction& op,
                                 const LossSpec& loss) {
  if (x.values.size() != m.atom_count()) {
    throw IndexError("interpretation covers " +
                     std::to_string(x.values.size()) + " atoms, model has " +
                     std::to_string(m.atom_count()));
  }
  double total = 0.0;
  for (const auto& rule : m.rules()) {
    total += rule_penalty(rule, x, op, loss);
  }
  return total;
}

/// Evidence at declared values; free atoms at 0.5 (Center) or seeded
/// uniforms (Random).
inline Interpretation initial_interpretation(const GroundModel& m,
                                             InitMode mode,
                                             std::uint64_t seed) {
  UniformSampler rng(seed);
  Interpretation x;
  x.values.resize(m.atom_count());
  for (std::size_t i = 0; i < m.atom_count(); ++i) {
    if (m.is_evidence(i)) {
      x.values[i] = m.evidence_value(i);
    } else {
      x.values[i] = mode == InitMode::Center ? 0.5 : rng.next();
    }
  }
  return x;
}

namespace detail {

inline std::vector<double> rule_penalties(const GroundModel& m,
                                          const Interpretation& x,
                                          const SoftConjunction& op,
                                          const LossSpec& loss) {
  std::vector<double> penalties;
  penalties.reserve(m.rules().size());
  for (const auto& rule : m.rules()) {
    penalties.push_back(rule_penalty(rule, x, op, loss));
  }
  return penalties;
}

}  // namespace detail

/// Projected subgradient descent on [0,1]^free with evidence frozen.
/// Step eta_t = eta0/sqrt(t); returns the best iterate by objective
/// (never worse than the initialization). At hinge kinks the subgradient
/// 0 is chosen, so satisfied rules are inert.
inline Solution solve_subgradient(const GroundModel& m,
                                  const SoftConjunction& op,
                                  const LossSpec& loss,
                                  const SolveConfig& cfg = {}) {
  if (loss.exponent < 1.0) {
    throw NonconvexLossError("loss exponent " +
                             detail::format_g12(loss.exponent) +
                             " is below 1");
  }
  if (cfg.max_iterations < 1) throw DomainError("max_iterations must be >= 1");
  if (!(cfg.eta0 > 0.0)) throw DomainError("eta0 must be positive");
  if (!(cfg.tolerance > 0.0)) throw DomainError("tolerance must be positive");

  Interpretation x = initial_interpretation(m, cfg.init, cfg.seed);
  Interpretation best = x;
  double best_objective = evaluate_objective(m, x, op, loss);
  std::vector<double> best_history{best_objective};

  std::vector<double> gradient(m.atom_count());
  std::vector<double> body;
  std::size_t iterations = 0;
  for (std::size_t t = 1; t <= cfg.max_iterations; ++t) {
    std::fill(gradient.begin(), gradient.end(), 0.0);
    for (const auto& rule : m.rules()) {
      body.resize(rule.body.size());
      for (std::size_t i = 0; i < rule.body.size(); ++i) {
        body[i] = x.values[rule.body[i]];
      }
      const double c1 = op.resolve_c1(rule.body.size());
      double sum = 0.0;
      for (double v : body) sum += v;
      const double conj =
          detail::family_from_sum(c1, sum, rule.body.size());
      const double h = conj - x.values[rule.head];
      if (h <= 0.0 || conj <= 0.0) continue;
      const double factor =
          rule.weight * (loss.exponent == 1.0
                             ? 1.0
                             : loss.exponent *
                                   std::pow(h, loss.exponent - 1.0));
      for (std::size_t i = 0; i < rule.body.size(); ++i) {
        gradient[rule.body[i]] += factor * c1;
      }
      gradient[rule.head] -= factor;
    }

    const double eta = cfg.eta0 / std::sqrt(static_cast<double>(t));
    for (std::size_t i = 0; i < m.atom_count(); ++i) {
      if (m.is_evidence(i)) continue;
      x.values[i] =
          std::min(std::max(x.values[i] - eta * gradient[i], 0.0), 1.0);
    }

    const double objective = evaluate_objective(m, x, op, loss);
    iterations = t;
    if (objective < best_objective) {
      best_objective = objective;
      best = x;
    }
    best_history.push_back(best_objective);
    if (t >= 100 &&
        best_history[t - 100] - best_objective < cfg.tolerance) {
      break;
    }
  }

  Solution solution;
  solution.interpretation = std::move(best);
  solution.rule_penalties =
      detail::rule_penalties(m, solution.interpretation, op, loss);
  double total = 0.0;
  for (double p : solution.rule_penalties) total += p;
  solution.objective = total;
  solution.iterations = iterations;
  return solution;
}

/// Exhaustive search over the grid {0, resolution, 2*resolution, ..., 1}
/// on every free atom; ties keep the lexicographically first grid point.
inline Solution grid_oracle(const GroundModel& m, const SoftConjunction& op,
                            const LossSpec& loss, double resolution) {
  if (!(resolution > 0.0)) throw DomainError("resolution must be positive");
  const std::vector<std::size_t> free = m.free_atoms();
  if (free.size() > 4) {
    throw OracleScaleError("grid oracle supports at most 4 free atoms, got " +
                           std::to_string(free.size()));
  }

  std::vector<double> levels;
  for (std::size_t k = 0;; ++k) {
    const double v = static_cast<double>(k) * resolution;
    if (v >= 1.0) break;
    levels.push_back(v);
  }
  levels.push_back(1.0);

  Interpretation x = initial_interpretation(m, InitMode::Center, 0);
  std::vector<std::size_t> odo(free.size(), 0);
  Interpretation best;
  double best_objective = 0.0;
  std::size_t evaluated = 0;
  for (;;) {
    for (std::size_t i = 0; i < free.size(); ++i) {
      x.values[free[i]] = levels[odo[i]];
    }
    const double objective = evaluate_objective(m, x, op, loss);
    ++evaluated;
    if (evaluated == 1 || objective < best_objective) {
      best_objective = objective;
      best = x;
    }
    bool done = true;
    for (std::size_t i = free.size(); i-- > 0;) {
      if (++odo[i] < levels.size()) {
        done = false;
        break;
      }
      odo[i] = 0;
    }
    if (done) break;
  }

  Solution solution;
  solution.interpretation = std::move(best);
  solution.objective = best_objective;
  solution.iterations = evaluated;
  solution.rule_penalties =
      detail::rule_penalties(m, solution.interpretation, op, loss);
  return solution;
}

/// Emits the exponent-1 objective as a linear program over atom
/// variables p<i> and one slack u<r> per rule:
///
///   objective: <lambda>*u<r> + ...
///   row: u<r> >= 0
///   row: u<r> >= c1*p<i> + ... - <n*c1 - 1> - p<head>
///   bound: 0 <= p<i> <= 1
///   fix: p<i> = <evidence value>
///
/// The inner hinge of the conjunction needs no slack of its own: since
/// p(head) >= 0, max(max(s, 0) - p(head), 0) = max(s - p(head), 0).
inline std::string export_lp(const GroundModel& m, const SoftConjunction& op,
                             const LossSpec& loss) {
  if (loss.exponent != 1.0) {
    throw NotPiecewiseLinearError("LP export requires exponent 1, got " +
                                  detail::format_g12(loss.exponent));
  }

  std::string out = "# minimize weighted hinge slack over atom probabilities\n";
  out += "objective:";
  for (std::size_t r = 0; r < m.rules().size(); ++r) {
    out += r == 0 ? " " : " + ";
    out += detail::format_g12(m.rules()[r].weight) + "*u" + std::to_string(r);
  }
  out += "\n";

  for (std::size_t r = 0; r < m.rules().size(); ++r) {
    const GroundRule& rule = m.rules()[r];
    const double c1 = op.resolve_c1(rule.body.size());
    const double k =
        static_cast<double>(rule.body.size()) * c1 - 1.0;
    out += "row: u" + std::to_string(r) + " >= 0\n";
    out += "row: u" + std::to_string(r) + " >=";
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
      out += i == 0 ? " " : " + ";
      if (c1 == 1.0) {
        out += "p" + std::to_string(rule.body[i]);
      } else {
        out += detail::format_g12(c1) + "*p" + std::to_string(rule.body[i]);
      }
    }
    if (k > 0.0) {
      out += " - " + detail::format_g12(k);
    } else if (k < 0.0) {
      out += " + " + detail::format_g12(-k);
    }
    out += " - p" + std::to_string(rule.head) + "\n";
  }

  for (std::size_t i = 0; i < m.atom_count(); ++i) {
    out += "bound: 0 <= p" + std::to_string(i) + " <= 1\n";
  }
  for (std::size_t i = 0; i < m.atom_count(); ++i) {
    if (m.is_evidence(i)) {
      out += "fix: p" + std::to_string(i) + " = " +
             detail::format_g12(m.evidence_value(i)) + "\n";
    }
  }
  return out;
}

}  // namespace softlogic
