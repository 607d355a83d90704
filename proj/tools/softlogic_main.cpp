// Command-line front end: inference, operation audits, vertex
// decompositions, joint construction, and LP export. Reports are JSON on
// stdout with floats at 12 significant digits; LP text and CSV go to
// --out files. Exit codes: 0 success (audit: expected verdict), 1 audit
// verdict mismatch, 2 usage/parse/module error, 3 solver error.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "softlogic/softlogic.hpp"

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

double r12(double v) { return softlogic::detail::round_sig12(v); }

json number_array(const std::vector<double>& values) {
  json a = json::array();
  for (double v : values) a.push_back(r12(v));
  return a;
}

json number_array(const softlogic::ProbabilityVector& p) {
  return number_array(p.values());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw softlogic::Error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out.good()) throw softlogic::Error("cannot write file: " + path);
}

void emit(const json& report) { std::cout << report.dump(2) << "\n"; }

json counterexample_json(const softlogic::ConvexityCounterexample& c) {
  return json{{"x", number_array(c.x)},       {"y", number_array(c.y)},
              {"lambda", r12(c.lambda)},      {"lhs", r12(c.lhs)},
              {"rhs", r12(c.rhs)},            {"gap", r12(c.gap)},
              {"from_probe", c.from_probe}};
}

json bound_failure_json(const softlogic::BoundFailure& f) {
  return json{{"point", number_array(f.point)},
              {"side", softlogic::to_string(f.side)},
              {"gap", r12(f.gap)},
              {"from_probe", f.from_probe}};
}

struct InferArgs {
  std::string model;
  double blend = 1.0;
  double exponent = 1.0;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 10000;
  double eta0 = 0.5;
  double tolerance = 1e-9;
  std::string init = "center";
  bool oracle = false;
  double resolution = 0.01;
};

int run_infer(const InferArgs& a) {
  const auto start = Clock::now();
  std::optional<softlogic::GroundModel> model;
  try {
    model.emplace(softlogic::ground(softlogic::parse_program(
        read_file(a.model))));
  } catch (const softlogic::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    const softlogic::SoftConjunction op(a.blend);
    const softlogic::LossSpec loss{a.exponent};
    softlogic::SolveConfig cfg;
    cfg.seed = a.seed;
    cfg.max_iterations = a.max_iterations;
    cfg.eta0 = a.eta0;
    cfg.tolerance = a.tolerance;
    cfg.init = a.init == "random" ? softlogic::InitMode::Random
                                  : softlogic::InitMode::Center;
    const softlogic::Solution solution =
        softlogic::solve_subgradient(*model, op, loss, cfg);

    json atoms = json::object();
    for (std::size_t i = 0; i < model->atom_count(); ++i) {
      atoms[model->atom(i).key()] = r12(solution.interpretation.values[i]);
    }

    json report{{"command", "infer"},
                {"model", a.model},
                {"blend", r12(a.blend)},
                {"exponent", r12(a.exponent)},
                {"seed", a.seed},
                {"solver",
                 {{"max_iterations", a.max_iterations},
                  {"eta0", r12(a.eta0)},
                  {"tolerance", r12(a.tolerance)},
                  {"init", a.init}}},
                {"atoms", atoms},
                {"objective", r12(solution.objective)},
                {"iterations", solution.iterations},
                {"rule_count", model->rules().size()}};

    if (a.oracle) {
      const softlogic::Solution reference =
          softlogic::grid_oracle(*model, op, loss, a.resolution);
      report["oracle"] = {{"resolution", r12(a.resolution)},
                          {"objective", r12(reference.objective)},
                          {"gap", r12(solution.objective -
                                      reference.objective)}};
    }
    report["elapsed_ms"] = elapsed_ms(start);
    emit(report);
    return 0;
  } catch (const softlogic::Error& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
}

struct AuditArgs {
  std::string op;
  std::size_t arity = 2;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
};

struct ResolvedOp {
  softlogic::ConjunctionFn fn;
  std::string expected;
};

std::optional<ResolvedOp> resolve_op(const std::string& name) {
  using softlogic::AuditVerdict;
  if (name == "min") {
    return ResolvedOp{softlogic::min_conjunction,
                      to_string(AuditVerdict::LogicalNotConvex)};
  }
  if (name == "product") {
    return ResolvedOp{softlogic::product_conjunction,
                      to_string(AuditVerdict::LogicalNotConvex)};
  }
  const std::string prefix = "family:";
  if (name.rfind(prefix, 0) == 0) {
    const std::string value = name.substr(prefix.size());
    char* end = nullptr;
    const double blend = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size()) {
      return std::nullopt;
    }
    if (!(blend >= 0.0 && blend <= 1.0)) return std::nullopt;
    const softlogic::SoftConjunction op(blend);
    return ResolvedOp{
        [op](const softlogic::ProbabilityVector& p) {
          return softlogic::eval_family(op, p);
        },
        to_string(blend == 1.0 ? AuditVerdict::ConvexAndLogical
                               : AuditVerdict::ConvexNotLogical)};
  }
  return std::nullopt;
}

int run_audit(const AuditArgs& a) {
  const auto start = Clock::now();
  const std::optional<ResolvedOp> op = resolve_op(a.op);
  if (!op) {
    std::cerr << "unknown operation '" << a.op
              << "' (expected family:<blend>, min, or product)\n";
    return 2;
  }

  softlogic::AuditReport audit;
  try {
    audit = softlogic::uniqueness_audit(op->fn, a.arity, a.samples, a.seed);
  } catch (const softlogic::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  const std::string verdict = to_string(audit.verdict);
  json report{{"command", "audit"},
              {"op", a.op},
              {"arity", a.arity},
              {"samples", a.samples},
              {"seed", a.seed},
              {"verdict", verdict},
              {"expected", op->expected},
              {"samples_drawn", audit.samples_drawn},
              {"violations", audit.violations.size()},
              {"bound_failures", audit.bound_failure_count},
              {"disagreements", audit.disagreement_count},
              {"max_lukasiewicz_gap", r12(audit.max_lukasiewicz_gap)}};
  report["counterexample"] = audit.violations.empty()
                                 ? json()
                                 : counterexample_json(audit.violations[0]);
  report["bound_failure"] = audit.bound_failures.empty()
                                ? json()
                                : bound_failure_json(audit.bound_failures[0]);
  report["elapsed_ms"] = elapsed_ms(start);
  emit(report);
  return verdict == op->expected ? 0 : 1;
}

int run_decompose(const std::vector<double>& values) {
  const auto start = Clock::now();
  try {
    const softlogic::ProbabilityVector p(values);
    const double boundary_sum = static_cast<double>(p.arity()) - 1.0;
    const char* regime = p.sum() > boundary_sum ? "upper"
                         : boundary_sum - p.sum() <= softlogic::kIdentityTol
                             ? "boundary"
                             : "interior";
    const softlogic::VertexCombination combo = softlogic::decompose(p);

    json terms = json::array();
    for (const auto& term : combo.terms()) {
      terms.push_back({{"vertex", term.vertex.pattern()},
                       {"weight", r12(term.weight)}});
    }
    json report{{"command", "decompose"},
                {"vector", number_array(p)},
                {"regime", regime},
                {"terms", terms},
                {"weight_on_ones",
                 r12(combo.weight_on(
                     softlogic::BinaryVector::ones(p.arity())))},
                {"elapsed_ms", elapsed_ms(start)}};
    emit(report);
    return 0;
  } catch (const softlogic::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}

int run_joint(const std::vector<double>& marginals, double target,
              const std::string& out) {
  const auto start = Clock::now();
  try {
    const softlogic::ProbabilityVector p(marginals);
    const softlogic::FrechetInterval bounds = softlogic::frechet_bounds(p);
    const softlogic::JointDistribution joint =
        softlogic::construct_joint(p, target);

    json patterns = json::array();
    for (const auto& entry : joint.entries()) {
      patterns.push_back(
          {{"pattern", entry.pattern.pattern()}, {"mass", r12(entry.mass)}});
    }
    json report{{"command", "joint"},
                {"marginals", number_array(p)},
                {"target", r12(target)},
                {"bounds",
                 {{"lower", r12(bounds.lower)}, {"upper", r12(bounds.upper)}}},
                {"patterns", patterns},
                {"conjunction", r12(softlogic::joint_conjunction_prob(joint))}};
    if (out.empty()) {
      report["out"] = json();
    } else {
      write_file(out, joint.to_csv());
      report["out"] = out;
    }
    report["elapsed_ms"] = elapsed_ms(start);
    emit(report);
    return 0;
  } catch (const softlogic::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}

int run_export_lp(const std::string& model_path, double blend,
                  double exponent, const std::string& out) {
  const auto start = Clock::now();
  try {
    const softlogic::GroundModel model =
        softlogic::ground(softlogic::parse_program(read_file(model_path)));
    const std::string lp = softlogic::export_lp(
        model, softlogic::SoftConjunction(blend),
        softlogic::LossSpec{exponent});
    if (out.empty()) {
      std::cout << lp;
      return 0;
    }
    write_file(out, lp);
    json report{{"command", "export-lp"},
                {"model", model_path},
                {"blend", r12(blend)},
                {"exponent", r12(exponent)},
                {"atom_count", model.atom_count()},
                {"rule_count", model.rules().size()},
                {"out", out},
                {"elapsed_ms", elapsed_ms(start)}};
    emit(report);
    return 0;
  } catch (const softlogic::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soft-logic toolkit: hinge-loss inference over weighted "
               "implication rules, conjunction audits, vertex "
               "decompositions, joint construction, LP export"};
  app.require_subcommand(1);

  InferArgs infer_args;
  CLI::App* infer = app.add_subcommand(
      "infer", "Minimize the hinge-loss objective of a rule model");
  infer->add_option("model", infer_args.model, "rule model file")->required();
  infer->add_option("--blend", infer_args.blend,
                    "conjunction family blend in [0,1]")
      ->check(CLI::Range(0.0, 1.0));
  infer->add_option("--exponent", infer_args.exponent,
                    "hinge exponent, >= 1 for a convex objective");
  infer->add_option("--seed", infer_args.seed, "random-seed for the solver");
  infer->add_option("--max-iterations", infer_args.max_iterations,
                    "subgradient iteration budget");
  infer->add_option("--eta0", infer_args.eta0, "initial step size");
  infer->add_option("--tolerance", infer_args.tolerance,
                    "stop when the best objective stalls by less than this");
  infer->add_option("--init", infer_args.init, "initial point")
      ->check(CLI::IsMember({"center", "random"}));
  infer->add_flag("--oracle", infer_args.oracle,
                  "also run the grid oracle and report the gap");
  infer->add_option("--resolution", infer_args.resolution,
                    "grid oracle resolution");

  AuditArgs audit_args;
  CLI::App* audit = app.add_subcommand(
      "audit", "Audit a conjunction operation for convexity and the "
               "Frechet bounds");
  audit->add_option("op", audit_args.op,
                    "operation: family:<blend>, min, or product")
      ->required();
  audit->add_option("--arity", audit_args.arity, "argument count, >= 2");
  audit->add_option("--samples", audit_args.samples, "random sample budget");
  audit->add_option("--seed", audit_args.seed, "sampling seed");

  std::vector<double> decompose_values;
  CLI::App* decompose = app.add_subcommand(
      "decompose", "Write a probability vector as a convex combination of "
                   "binary vertices");
  decompose->add_option("values", decompose_values, "probabilities in [0,1]")
      ->required()
      ->expected(-1);

  std::vector<double> joint_marginals;
  double joint_target = 0.0;
  std::string joint_out;
  CLI::App* joint = app.add_subcommand(
      "joint", "Construct a joint distribution with given marginals and "
               "conjunction probability");
  joint->add_option("marginals", joint_marginals, "event probabilities")
      ->required()
      ->expected(-1);
  joint->add_option("--target", joint_target,
                    "probability of the all-events outcome")
      ->required();
  joint->add_option("--out", joint_out, "write the distribution as CSV");

  std::string lp_model;
  double lp_blend = 1.0;
  double lp_exponent = 1.0;
  std::string lp_out;
  CLI::App* export_lp = app.add_subcommand(
      "export-lp", "Emit the exponent-1 objective as an LP text file");
  export_lp->add_option("model", lp_model, "rule model file")->required();
  export_lp->add_option("--blend", lp_blend,
                        "conjunction family blend in [0,1]")
      ->check(CLI::Range(0.0, 1.0));
  export_lp->add_option("--exponent", lp_exponent,
                        "hinge exponent; must be 1");
  export_lp->add_option("--out", lp_out,
                        "LP destination (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*infer) return run_infer(infer_args);
  if (*audit) return run_audit(audit_args);
  if (*decompose) return run_decompose(decompose_values);
  if (*joint) return run_joint(joint_marginals, joint_target, joint_out);
  if (*export_lp) return run_export_lp(lp_model, lp_blend, lp_exponent, lp_out);
  return 2;
}
