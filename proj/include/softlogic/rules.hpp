#pragma once

// Rule DSL: finite domains, typed predicates, evidence facts, and
// weighted implication rules with conjunctive bodies.
//
//   domain Person = { a1, a2, b }
//   predicate Voted(Person, Party)
//   evidence Voted(a1, inc) = 1.0
//   rule 1.0 : Friend(X, B2) & Voted(X, P) -> Voted(B2, P)
//
// Comments start with '#'. Identifiers are [A-Za-z][A-Za-z0-9_]*; an
// argument is a variable iff it is capitalized and not declared as a
// constant of some domain. Grounding instantiates each rule once per
// assignment of its variables to domain constants.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "softlogic/errors.hpp"

namespace softlogic {

struct SourceLocation {
  std::size_t line = 0;    // 1-based
  std::size_t column = 0;  // 1-based
};

struct Diagnostic {
  std::string code;
  std::string message;
  SourceLocation loc;

  std::string format() const {
    return std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " +
           code + ": " + message;
  }
};

/// Parse or validation failure; carries every collected diagnostic.
class ParseError : public Error {
 public:
  explicit ParseError(std::vector<Diagnostic> diagnostics)
      : Error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  static std::string join(const std::vector<Diagnostic>& ds) {
    std::string s;
    for (const auto& d : ds) {
      if (!s.empty()) s += '\n';
      s += d.format();
    }
    return s.empty() ? std::string("parse error") : s;
  }

  std::vector<Diagnostic> diagnostics_;
};

struct AtomTemplate {
  std::string predicate;
  std::vector<std::string> args;
  SourceLocation loc;
};

struct DomainDecl {
  std::string name;
  std::vector<std::string> constants;
  SourceLocation loc;
};

struct PredicateDecl {
  std::string name;
  std::vector<std::string> arg_domains;
  SourceLocation loc;
};

struct EvidenceDecl {
  AtomTemplate atom;
  double value = 0.0;
  SourceLocation loc;
};

struct RuleDecl {
  double weight = 0.0;
  std::vector<AtomTemplate> body;
  AtomTemplate head;
  SourceLocation loc;
};

struct Program {
  std::vector<DomainDecl> domains;
  std::vector<PredicateDecl> predicates;
  std::vector<EvidenceDecl> evidence;
  std::vector<RuleDecl> rules;

  const DomainDecl* find_domain(const std::string& name) const {
    for (const auto& d : domains) {
      if (d.name == name) return &d;
    }
    return nullptr;
  }

  const PredicateDecl* find_predicate(const std::string& name) const {
    for (const auto& p : predicates) {
      if (p.name == name) return &p;
    }
    return nullptr;
  }

  bool is_constant(const std::string& symbol) const {
    for (const auto& d : domains) {
      if (std::find(d.constants.begin(), d.constants.end(), symbol) !=
          d.constants.end()) {
        return true;
      }
    }
    return false;
  }

  /// Variables are capitalized identifiers not declared as constants.
  bool is_variable(const std::string& symbol) const {
    return !symbol.empty() && std::isupper(static_cast<unsigned char>(symbol[0])) &&
           !is_constant(symbol);
  }
};

namespace detail {

struct Token {
  enum class Kind { Identifier, Number, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  SourceLocation loc;
};

inline bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0;
}
inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}
inline bool is_digit(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) != 0;
}

/// Tokenizes one source line (comment already stripped). Appends a
/// syntax diagnostic and returns false on an unexpected character.
inline bool tokenize_line(const std::string& text, std::size_t line_no,
                          std::vector<Token>& out,
                          std::vector<Diagnostic>& diagnostics) {
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    const SourceLocation loc{line_no, i + 1};
    if (is_ident_start(c)) {
      std::size_t j = i + 1;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      out.push_back({Token::Kind::Identifier, text.substr(i, j - i), loc});
      i = j;
      continue;
    }
    if (is_digit(c) || c == '.' ||
        (c == '-' && i + 1 < text.size() &&
         (is_digit(text[i + 1]) || text[i + 1] == '.'))) {
      std::size_t j = i + 1;
      while (j < text.size() &&
             (is_digit(text[j]) || text[j] == '.' || text[j] == 'e' ||
              text[j] == 'E' ||
              ((text[j] == '+' || text[j] == '-') &&
               (text[j - 1] == 'e' || text[j - 1] == 'E')))) {
        ++j;
      }
      out.push_back({Token::Kind::Number, text.substr(i, j - i), loc});
      i = j;
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({Token::Kind::Symbol, "->", loc});
      i += 2;
      continue;
    }
    if (c == '=' || c == '{' || c == '}' || c == '(' || c == ')' ||
        c == ',' || c == ':' || c == '&') {
      out.push_back({Token::Kind::Symbol, std::string(1, c), loc});
      ++i;
      continue;
    }
    diagnostics.push_back({"syntax",
                           std::string("unexpected character '") + c + "'",
                           loc});
    return false;
  }
  out.push_back({Token::Kind::End, "", SourceLocation{line_no, text.size() + 1}});
  return true;
}

/// Cursor over one line of tokens; records at most one diagnostic.
class LineParser {
 public:
  LineParser(const std::vector<Token>& tokens,
             std::vector<Diagnostic>& diagnostics)
      : tokens_(tokens), diagnostics_(diagnostics) {}

  const Token& peek() const { return tokens_[pos_]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }

  bool ok() const { return ok_; }

  std::optional<std::string> expect_identifier(const std::string& what) {
    if (peek().kind == Token::Kind::Identifier) {
      return tokens_[pos_++].text;
    }
    fail("expected " + what);
    return std::nullopt;
  }

  std::optional<double> expect_number(const std::string& what) {
    if (peek().kind == Token::Kind::Number) {
      const Token& t = tokens_[pos_++];
      char* end = nullptr;
      const double v = std::strtod(t.text.c_str(), &end);
      if (end != t.text.c_str() + t.text.size()) {
        fail("malformed number '" + t.text + "'", t.loc);
        return std::nullopt;
      }
      return v;
    }
    fail("expected " + what);
    return std::nullopt;
  }

  bool expect_symbol(const std::string& s) {
    if (peek().kind == Token::Kind::Symbol && peek().text == s) {
      ++pos_;
      return true;
    }
    fail("expected '" + s + "'");
    return false;
  }

  bool try_symbol(const std::string& s) {
    if (peek().kind == Token::Kind::Symbol && peek().text == s) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool expect_end() {
    if (at_end()) return true;
    fail("unexpected trailing input");
    return false;
  }

  void fail(const std::string& message) { fail(message, peek().loc); }

  void fail(const std::string& message, SourceLocation loc) {
    if (ok_) diagnostics_.push_back({"syntax", message, loc});
    ok_ = false;
  }

 private:
  const std::vector<Token>& tokens_;
  std::vector<Diagnostic>& diagnostics_;
  std::size_t pos_ = 0;
  bool ok_ = true;
};

/// `Pred(arg, arg, ...)`; arguments are identifiers.
inline std::optional<AtomTemplate> parse_atom(LineParser& p) {
  AtomTemplate atom;
  atom.loc = p.peek().loc;
  auto name = p.expect_identifier("predicate name");
  if (!name) return std::nullopt;
  atom.predicate = *name;
  if (!p.expect_symbol("(")) return std::nullopt;
  for (;;) {
    auto arg = p.expect_identifier("argument");
    if (!arg) return std::nullopt;
    atom.args.push_back(*arg);
    if (p.try_symbol(")")) break;
    if (!p.expect_symbol(",")) return std::nullopt;
  }
  return atom;
}

inline std::string shortest_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

inline std::string atom_key(const std::string& predicate,
                            const std::vector<std::string>& args) {
  std::string key = predicate + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) key += ",";
    key += args[i];
  }
  key += ")";
  return key;
}

/// Semantic checks over a syntactically well-formed Program. Returns the
/// empty list iff all Program invariants hold.
inline std::vector<Diagnostic> validate(const Program& program) {
  std::vector<Diagnostic> out;
  const auto emit = [&](std::string code, std::string message,
                        SourceLocation loc) {
    out.push_back({std::move(code), std::move(message), loc});
  };

  std::set<std::string> domain_names;
  for (const auto& d : program.domains) {
    if (!domain_names.insert(d.name).second) {
      emit("duplicate-domain", "domain '" + d.name + "' declared twice", d.loc);
    }
  }
  std::set<std::string> predicate_names;
  for (const auto& p : program.predicates) {
    if (!predicate_names.insert(p.name).second) {
      emit("duplicate-predicate", "predicate '" + p.name + "' declared twice",
           p.loc);
    }
    for (const auto& domain : p.arg_domains) {
      if (!program.find_domain(domain)) {
        emit("unknown-domain",
             "predicate '" + p.name + "' uses undeclared domain '" + domain +
                 "'",
             p.loc);
      }
    }
  }

  // Checks one atom argument against the domain expected at its position.
  // Returns the variable name when the argument is a variable.
  const auto check_arg = [&](const AtomTemplate& atom, std::size_t i,
                             const std::string& expected_domain,
                             bool allow_variables) -> std::optional<std::string> {
    const std::string& arg = atom.args[i];
    if (program.is_variable(arg)) {
      if (!allow_variables) {
        emit("evidence-not-ground",
             "evidence argument '" + arg + "' is a variable", atom.loc);
      }
      return arg;
    }
    const DomainDecl* domain = program.find_domain(expected_domain);
    if (domain == nullptr) return std::nullopt;  // already reported
    if (std::find(domain->constants.begin(), domain->constants.end(), arg) ==
        domain->constants.end()) {
      if (program.is_constant(arg)) {
        emit("type-mismatch",
             "constant '" + arg + "' is not in domain '" + expected_domain +
                 "'",
             atom.loc);
      } else {
        emit("unknown-constant", "unknown constant '" + arg + "'", atom.loc);
      }
    }
    return std::nullopt;
  };

  // Checks predicate existence and arity; returns the declaration.
  const auto check_atom = [&](const AtomTemplate& atom) -> const PredicateDecl* {
    const PredicateDecl* decl = program.find_predicate(atom.predicate);
    if (decl == nullptr) {
      emit("unknown-predicate",
           "unknown predicate '" + atom.predicate + "'", atom.loc);
      return nullptr;
    }
    if (decl->arg_domains.size() != atom.args.size()) {
      emit("arity-mismatch",
           "predicate '" + atom.predicate + "' expects " +
               std::to_string(decl->arg_domains.size()) + " arguments, got " +
               std::to_string(atom.args.size()),
           atom.loc);
      return nullptr;
    }
    return decl;
  };

  std::set<std::string> evidence_keys;
  for (const auto& e : program.evidence) {
    if (const PredicateDecl* decl = check_atom(e.atom)) {
      for (std::size_t i = 0; i < e.atom.args.size(); ++i) {
        check_arg(e.atom, i, decl->arg_domains[i], false);
      }
    }
    if (!(e.value >= 0.0 && e.value <= 1.0)) {
      emit("evidence-range",
           "evidence value " + detail::shortest_double(e.value) +
               " is outside [0,1]",
           e.loc);
    }
    if (!evidence_keys.insert(atom_key(e.atom.predicate, e.atom.args)).second) {
      emit("duplicate-evidence",
           "duplicate evidence for " + atom_key(e.atom.predicate, e.atom.args),
           e.loc);
    }
  }

  for (const auto& r : program.rules) {
    if (!(r.weight > 0.0)) {
      emit("weight-positive",
           "rule weight " + detail::shortest_double(r.weight) +
               " must be positive",
           r.loc);
    }
    std::map<std::string, std::string> variable_domains;
    const auto visit_atom = [&](const AtomTemplate& atom, bool in_body) {
      const PredicateDecl* decl = check_atom(atom);
      if (decl == nullptr) return;
      for (std::size_t i = 0; i < atom.args.size(); ++i) {
        const auto variable = check_arg(atom, i, decl->arg_domains[i], true);
        if (!variable) continue;
        const std::string& expected = decl->arg_domains[i];
        const auto [it, inserted] =
            variable_domains.emplace(*variable, expected);
        if (inserted) {
          if (!in_body) {
            emit("head-variable",
                 "head variable '" + *variable +
                     "' does not appear in the rule body",
                 atom.loc);
          }
        } else if (it->second != expected) {
          emit("variable-type-conflict",
               "variable '" + *variable + "' used as both '" + it->second +
                   "' and '" + expected + "'",
               atom.loc);
        }
      }
    };
    for (const auto& atom : r.body) visit_atom(atom, true);
    visit_atom(r.head, false);
  }
  return out;
}

/// Parses program text. Collects diagnostics across lines and throws a
/// ParseError carrying all of them when parsing or validation fails.
inline Program parse_program(const std::string& text) {
  Program program;
  std::vector<Diagnostic> diagnostics;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(
        pos, eol == std::string::npos ? std::string::npos : eol - pos);
    ++line_no;
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;

    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);

    std::vector<detail::Token> tokens;
    if (!detail::tokenize_line(line, line_no, tokens, diagnostics)) continue;
    detail::LineParser p(tokens, diagnostics);
    if (p.at_end()) continue;

    const auto keyword = p.expect_identifier("statement keyword");
    if (!keyword) continue;

    if (*keyword == "domain") {
      DomainDecl d;
      d.loc = tokens[0].loc;
      auto name = p.expect_identifier("domain name");
      if (!name || !p.expect_symbol("=") || !p.expect_symbol("{")) continue;
      d.name = *name;
      if (!p.try_symbol("}")) {
        for (;;) {
          auto constant = p.expect_identifier("constant");
          if (!constant) break;
          d.constants.push_back(*constant);
          if (p.try_symbol("}")) break;
          if (!p.expect_symbol(",")) break;
        }
      }
      if (p.ok() && p.expect_end()) program.domains.push_back(std::move(d));
    } else if (*keyword == "predicate") {
      PredicateDecl decl;
      decl.loc = tokens[0].loc;
      auto name = p.expect_identifier("predicate name");
      if (!name || !p.expect_symbol("(")) continue;
      decl.name = *name;
      for (;;) {
        auto domain = p.expect_identifier("domain name");
        if (!domain) break;
        decl.arg_domains.push_back(*domain);
        if (p.try_symbol(")")) break;
        if (!p.expect_symbol(",")) break;
      }
      if (p.ok() && p.expect_end()) {
        program.predicates.push_back(std::move(decl));
      }
    } else if (*keyword == "evidence") {
      EvidenceDecl e;
      e.loc = tokens[0].loc;
      auto atom = detail::parse_atom(p);
      if (!atom || !p.expect_symbol("=")) continue;
      auto value = p.expect_number("evidence value");
      if (!value) continue;
      e.atom = std::move(*atom);
      e.value = *value;
      if (p.expect_end()) program.evidence.push_back(std::move(e));
    } else if (*keyword == "rule") {
      RuleDecl r;
      r.loc = tokens[0].loc;
      auto weight = p.expect_number("rule weight");
      if (!weight || !p.expect_symbol(":")) continue;
      r.weight = *weight;
      bool good = true;
      for (;;) {
        auto atom = detail::parse_atom(p);
        if (!atom) {
          good = false;
          break;
        }
        r.body.push_back(std::move(*atom));
        if (p.try_symbol("->")) break;
        if (!p.expect_symbol("&")) {
          good = false;
          break;
        }
      }
      if (!good) continue;
      auto head = detail::parse_atom(p);
      if (!head) continue;
      r.head = std::move(*head);
      if (p.expect_end()) program.rules.push_back(std::move(r));
    } else {
      p.fail("unknown statement '" + *keyword + "'", tokens[0].loc);
    }
  }

  if (diagnostics.empty()) {
    std::vector<Diagnostic> semantic = validate(program);
    diagnostics.insert(diagnostics.end(), semantic.begin(), semantic.end());
  }
  if (!diagnostics.empty()) throw ParseError(std::move(diagnostics));
  return program;
}

/// Canonical source text; parse_program(print_program(p)) is structurally
/// equal to p.
inline std::string print_program(const Program& program) {
  std::string out;
  for (const auto& d : program.domains) {
    out += "domain " + d.name + " = {";
    for (std::size_t i = 0; i < d.constants.size(); ++i) {
      out += i == 0 ? " " : ", ";
      out += d.constants[i];
    }
    out += d.constants.empty() ? "}\n" : " }\n";
  }
  for (const auto& p : program.predicates) {
    out += "predicate " + p.name + "(";
    for (std::size_t i = 0; i < p.arg_domains.size(); ++i) {
      if (i > 0) out += ", ";
      out += p.arg_domains[i];
    }
    out += ")\n";
  }
  for (const auto& e : program.evidence) {
    out += "evidence " + atom_key(e.atom.predicate, e.atom.args) + " = " +
           detail::shortest_double(e.value) + "\n";
  }
  for (const auto& r : program.rules) {
    out += "rule " + detail::shortest_double(r.weight) + " : ";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      if (i > 0) out += " & ";
      out += atom_key(r.body[i].predicate, r.body[i].args);
    }
    out += " -> " + atom_key(r.head.predicate, r.head.args) + "\n";
  }
  return out;
}

inline bool structurally_equal(const AtomTemplate& a, const AtomTemplate& b) {
  return a.predicate == b.predicate && a.args == b.args;
}

inline bool structurally_equal(const Program& a, const Program& b) {
  if (a.domains.size() != b.domains.size() ||
      a.predicates.size() != b.predicates.size() ||
      a.evidence.size() != b.evidence.size() ||
      a.rules.size() != b.rules.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.domains.size(); ++i) {
    if (a.domains[i].name != b.domains[i].name ||
        a.domains[i].constants != b.domains[i].constants) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.predicates.size(); ++i) {
    if (a.predicates[i].name != b.predicates[i].name ||
        a.predicates[i].arg_domains != b.predicates[i].arg_domains) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.evidence.size(); ++i) {
    if (!structurally_equal(a.evidence[i].atom, b.evidence[i].atom) ||
        a.evidence[i].value != b.evidence[i].value) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    const RuleDecl& x = a.rules[i];
    const RuleDecl& y = b.rules[i];
    if (x.weight != y.weight || x.body.size() != y.body.size() ||
        !structurally_equal(x.head, y.head)) {
      return false;
    }
    for (std::size_t j = 0; j < x.body.size(); ++j) {
      if (!structurally_equal(x.body[j], y.body[j])) return false;
    }
  }
  return true;
}

struct GroundAtom {
  std::string predicate;
  std::vector<std::string> args;

  std::string key() const { return atom_key(predicate, args); }

  friend bool operator<(const GroundAtom& a, const GroundAtom& b) {
    if (a.predicate != b.predicate) return a.predicate < b.predicate;
    return a.args < b.args;
  }
};

struct GroundRule {
  double weight = 0.0;
  std::vector<std::size_t> body;  // atom indices, arity >= 1
  std::size_t head = 0;
};

/// A rule program instantiated over its finite domains: the full atom
/// base (lexicographically ordered), evidence assignments, and one
/// ground rule per variable assignment.
class GroundModel {
 public:
  GroundModel(std::vector<GroundAtom> atoms,
              std::vector<std::optional<double>> evidence,
              std::vector<GroundRule> rules)
      : atoms_(std::move(atoms)),
        evidence_(std::move(evidence)),
        rules_(std::move(rules)) {
    if (evidence_.size() != atoms_.size()) {
      throw GroundingError("evidence table size mismatch");
    }
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      index_.emplace(atoms_[i].key(), i);
    }
    for (const auto& r : rules_) {
      if (r.body.empty()) throw GroundingError("ground rule with empty body");
      for (std::size_t b : r.body) {
        if (b >= atoms_.size()) throw GroundingError("body index out of range");
      }
      if (r.head >= atoms_.size()) {
        throw GroundingError("head index out of range");
      }
    }
  }

  std::size_t atom_count() const { return atoms_.size(); }
  const std::vector<GroundAtom>& atoms() const { return atoms_; }
  const GroundAtom& atom(std::size_t i) const { return atoms_.at(i); }
  const std::vector<GroundRule>& rules() const { return rules_; }

  bool is_evidence(std::size_t i) const {
    return evidence_.at(i).has_value();
  }
  double evidence_value(std::size_t i) const { return *evidence_.at(i); }

  std::optional<std::size_t> find_atom(const std::string& key) const {
    const auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<std::size_t> free_atoms() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (!evidence_[i].has_value()) out.push_back(i);
    }
    return out;
  }

 private:
  std::vector<GroundAtom> atoms_;
  std::vector<std::optional<double>> evidence_;
  std::vector<GroundRule> rules_;
  std::map<std::string, std::size_t> index_;
};

/// Instantiates a validated Program: the atom base is the full product
/// of each predicate's domains, and every rule grounds once per
/// assignment of its distinct variables (count = product of domain
/// sizes). Assignments enumerate in lexicographic constant order.
inline GroundModel ground(const Program& program) {
  {
    std::vector<Diagnostic> problems = validate(program);
    if (!problems.empty()) throw ParseError(std::move(problems));
  }

  std::map<std::string, std::vector<std::string>> sorted_constants;
  for (const auto& d : program.domains) {
    std::vector<std::string> cs = d.constants;
    std::sort(cs.begin(), cs.end());
    sorted_constants.emplace(d.name, std::move(cs));
  }

  std::vector<GroundAtom> atoms;
  for (const auto& pred : program.predicates) {
    std::vector<const std::vector<std::string>*> axes;
    axes.reserve(pred.arg_domains.size());
    for (const auto& domain : pred.arg_domains) {
      axes.push_back(&sorted_constants.at(domain));
    }
    bool empty_axis = false;
    for (const auto* axis : axes) empty_axis = empty_axis || axis->empty();
    if (empty_axis) continue;
    std::vector<std::size_t> odo(axes.size(), 0);
    for (;;) {
      GroundAtom atom;
      atom.predicate = pred.name;
      for (std::size_t i = 0; i < axes.size(); ++i) {
        atom.args.push_back((*axes[i])[odo[i]]);
      }
      atoms.push_back(std::move(atom));
      bool done = true;
      for (std::size_t i = axes.size(); i-- > 0;) {
        if (++odo[i] < axes[i]->size()) {
          done = false;
          break;
        }
        odo[i] = 0;
      }
      if (done) break;
    }
  }
  std::sort(atoms.begin(), atoms.end());

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    index.emplace(atoms[i].key(), i);
  }

  std::vector<std::optional<double>> evidence(atoms.size());
  for (const auto& e : program.evidence) {
    const auto it = index.find(atom_key(e.atom.predicate, e.atom.args));
    if (it == index.end()) {
      throw GroundingError("evidence atom not in the atom base: " +
                           atom_key(e.atom.predicate, e.atom.args));
    }
    evidence[it->second] = e.value;
  }

  std::vector<GroundRule> ground_rules;
  for (const auto& rule : program.rules) {
    // Distinct variables in order of first appearance, body before head.
    std::vector<std::string> variables;
    std::vector<const std::vector<std::string>*> axes;
    const auto scan_atom = [&](const AtomTemplate& atom) {
      const PredicateDecl* decl = program.find_predicate(atom.predicate);
      for (std::size_t i = 0; i < atom.args.size(); ++i) {
        const std::string& arg = atom.args[i];
        if (!program.is_variable(arg)) continue;
        if (std::find(variables.begin(), variables.end(), arg) !=
            variables.end()) {
          continue;
        }
        if (decl == nullptr || i >= decl->arg_domains.size()) {
          throw GroundingError("no domain inferable for variable '" + arg +
                               "'");
        }
        variables.push_back(arg);
        axes.push_back(&sorted_constants.at(decl->arg_domains[i]));
      }
    };
    for (const auto& atom : rule.body) scan_atom(atom);
    scan_atom(rule.head);

    const auto instantiate = [&](const AtomTemplate& atom,
                                 const std::map<std::string, std::string>&
                                     binding) -> std::size_t {
      std::vector<std::string> args;
      args.reserve(atom.args.size());
      for (const auto& arg : atom.args) {
        const auto it = binding.find(arg);
        args.push_back(it == binding.end() ? arg : it->second);
      }
      const auto found = index.find(atom_key(atom.predicate, args));
      if (found == index.end()) {
        throw GroundingError("ground atom not in the atom base: " +
                             atom_key(atom.predicate, args));
      }
      return found->second;
    };

    bool empty_axis = false;
    for (const auto* axis : axes) empty_axis = empty_axis || axis->empty();
    if (empty_axis) continue;
    std::vector<std::size_t> odo(variables.size(), 0);
    for (;;) {
      std::map<std::string, std::string> binding;
      for (std::size_t i = 0; i < variables.size(); ++i) {
        binding.emplace(variables[i], (*axes[i])[odo[i]]);
      }
      GroundRule gr;
      gr.weight = rule.weight;
      for (const auto& atom : rule.body) {
        gr.body.push_back(instantiate(atom, binding));
      }
      gr.head = instantiate(rule.head, binding);
      ground_rules.push_back(std::move(gr));

      bool done = true;
      for (std::size_t i = variables.size(); i-- > 0;) {
        if (++odo[i] < axes[i]->size()) {
          done = false;
          break;
        }
        odo[i] = 0;
      }
      if (done) break;
    }
  }

  return GroundModel(std::move(atoms), std::move(evidence),
                     std::move(ground_rules));
}

}  // namespace softlogic
