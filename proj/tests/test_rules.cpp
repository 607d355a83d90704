#include "softlogic/rules.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

using namespace softlogic;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string model_path(const std::string& name) {
  return std::string(SOFTLOGIC_MODELS_DIR) + "/" + name;
}

std::vector<std::string> codes_of(const std::string& text) {
  try {
    parse_program(text);
  } catch (const ParseError& e) {
    std::vector<std::string> codes;
    for (const auto& d : e.diagnostics()) codes.push_back(d.code);
    return codes;
  }
  return {};
}

bool has_code(const std::vector<std::string>& codes, const std::string& code) {
  return std::find(codes.begin(), codes.end(), code) != codes.end();
}

}  // namespace

TEST_CASE("voting program parses into the expected structure") {
  const Program p = parse_program(read_file(model_path("voting.psl")));

  REQUIRE(p.domains.size() == 2);
  CHECK(p.domains[0].name == "Person");
  CHECK(p.domains[0].constants == std::vector<std::string>{"a1", "a2", "b"});
  CHECK(p.domains[1].name == "Party");
  CHECK(p.domains[1].constants == std::vector<std::string>{"inc", "chal"});

  REQUIRE(p.predicates.size() == 2);
  CHECK(p.predicates[0].name == "Friend");
  CHECK(p.predicates[0].arg_domains ==
        std::vector<std::string>{"Person", "Person"});
  CHECK(p.predicates[1].name == "Voted");
  CHECK(p.predicates[1].arg_domains ==
        std::vector<std::string>{"Person", "Party"});

  REQUIRE(p.evidence.size() == 4);
  CHECK(p.evidence[0].atom.predicate == "Friend");
  CHECK(p.evidence[0].atom.args == std::vector<std::string>{"a1", "b"});
  CHECK(p.evidence[0].value == 1.0);

  REQUIRE(p.rules.size() == 1);
  const RuleDecl& r = p.rules[0];
  CHECK(r.weight == 1.0);
  REQUIRE(r.body.size() == 2);
  CHECK(r.body[0].predicate == "Friend");
  CHECK(r.body[0].args == std::vector<std::string>{"X", "B2"});
  CHECK(r.body[1].predicate == "Voted");
  CHECK(r.head.predicate == "Voted");
  CHECK(r.head.args == std::vector<std::string>{"B2", "P"});
}

TEST_CASE("empty and comment-only input parses to an empty program") {
  for (const std::string text :
       {std::string(""), std::string("\n\n"),
        std::string("# nothing here\n   # indented comment")}) {
    const Program p = parse_program(text);
    CHECK(p.domains.empty());
    CHECK(p.predicates.empty());
    CHECK(p.evidence.empty());
    CHECK(p.rules.empty());
  }
}

TEST_CASE("comments and whitespace are ignored") {
  const Program p = parse_program(
      "# leading comment\n"
      "\t domain D = { x }   # trailing comment\n"
      "\n"
      "predicate P(D)\n");
  REQUIRE(p.domains.size() == 1);
  CHECK(p.domains[0].constants == std::vector<std::string>{"x"});
  CHECK(p.predicates.size() == 1);
}

TEST_CASE("domains may be empty") {
  const Program p = parse_program("domain E = {}\n");
  REQUIRE(p.domains.size() == 1);
  CHECK(p.domains[0].constants.empty());
  CHECK(print_program(p) == "domain E = {}\n");
}

TEST_CASE("numeric literal forms") {
  const Program p = parse_program(
      "domain D = { a }\n"
      "predicate P(D)\n"
      "evidence P(a) = .5\n"
      "rule 2e0 : P(a) -> P(a)\n");
  CHECK(p.evidence[0].value == 0.5);
  CHECK(p.rules[0].weight == 2.0);
}

TEST_CASE("negative rule weight is rejected with unknown predicates") {
  const std::string text = "rule -1.0 : A(x) -> B(x)\n";
  REQUIRE_THROWS_AS(parse_program(text), ParseError);
  const auto codes = codes_of(text);
  CHECK(has_code(codes, "weight-positive"));
  CHECK(has_code(codes, "unknown-predicate"));
}

TEST_CASE("syntax diagnostics carry line and column") {
  try {
    parse_program("domain D = { a; }\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    REQUIRE(e.diagnostics().size() == 1);
    const Diagnostic& d = e.diagnostics()[0];
    CHECK(d.code == "syntax");
    CHECK(d.loc.line == 1);
    CHECK(d.loc.column == 15);
    CHECK(d.format() == "1:15: syntax: unexpected character ';'");
  }
}

TEST_CASE("diagnostics are collected across lines") {
  try {
    parse_program("domain = { a }\nnonsense here\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    REQUIRE(e.diagnostics().size() == 2);
    CHECK(e.diagnostics()[0].loc.line == 1);
    CHECK(e.diagnostics()[1].loc.line == 2);
    CHECK(e.diagnostics()[1].message == "unknown statement 'nonsense'");
  }
}

TEST_CASE("rule missing the arrow is a syntax error") {
  const auto codes = codes_of(
      "domain D = { a }\n"
      "predicate P(D)\n"
      "rule 1.0 : P(a) P(a)\n");
  REQUIRE(codes.size() == 1);
  CHECK(codes[0] == "syntax");
}

TEST_CASE("validation diagnostics") {
  const std::string preamble =
      "domain D = { a, b }\n"
      "domain E = { c }\n"
      "predicate P(D)\n"
      "predicate Q(D, E)\n";

  SECTION("duplicate domain") {
    CHECK(has_code(codes_of("domain D = { a }\ndomain D = { b }\n"),
                   "duplicate-domain"));
  }
  SECTION("duplicate predicate") {
    CHECK(has_code(
        codes_of("domain D = { a }\npredicate P(D)\npredicate P(D)\n"),
        "duplicate-predicate"));
  }
  SECTION("unknown domain in a predicate signature") {
    CHECK(has_code(codes_of("predicate P(Nope)\n"), "unknown-domain"));
  }
  SECTION("evidence must be ground") {
    CHECK(has_code(codes_of(preamble + "evidence P(X) = 1.0\n"),
                   "evidence-not-ground"));
  }
  SECTION("constant from the wrong domain") {
    CHECK(has_code(codes_of(preamble + "evidence P(c) = 1.0\n"),
                   "type-mismatch"));
  }
  SECTION("unknown constant") {
    CHECK(has_code(codes_of(preamble + "evidence P(zz) = 1.0\n"),
                   "unknown-constant"));
  }
  SECTION("unknown predicate") {
    CHECK(has_code(codes_of(preamble + "evidence R(a) = 1.0\n"),
                   "unknown-predicate"));
  }
  SECTION("arity mismatch") {
    CHECK(has_code(codes_of(preamble + "evidence P(a, b) = 1.0\n"),
                   "arity-mismatch"));
  }
  SECTION("evidence value out of range") {
    const auto codes = codes_of(preamble + "evidence P(a) = 1.3\n");
    CHECK(has_code(codes, "evidence-range"));
  }
  SECTION("duplicate evidence") {
    CHECK(has_code(codes_of(preamble +
                            "evidence P(a) = 1.0\nevidence P(a) = 0.5\n"),
                   "duplicate-evidence"));
  }
  SECTION("zero weight") {
    CHECK(has_code(codes_of(preamble + "rule 0 : P(a) -> P(b)\n"),
                   "weight-positive"));
  }
  SECTION("head variable not bound in the body") {
    CHECK(has_code(codes_of(preamble + "rule 1.0 : P(a) -> P(X)\n"),
                   "head-variable"));
  }
  SECTION("variable used at two domains") {
    CHECK(has_code(codes_of(preamble + "rule 1.0 : P(X) & Q(a, X) -> P(X)\n"),
                   "variable-type-conflict"));
  }
  SECTION("valid program yields no diagnostics") {
    const Program p =
        parse_program(preamble + "rule 1.0 : P(X) & Q(X, c) -> P(X)\n");
    CHECK(validate(p).empty());
  }
}

TEST_CASE("print_program emits canonical text") {
  const std::string canonical =
      "domain D = { a, b }\n"
      "predicate P(D)\n"
      "evidence P(a) = 1\n"
      "rule 1.5 : P(a) -> P(b)\n";
  const Program p = parse_program(canonical);
  CHECK(print_program(p) == canonical);
}

TEST_CASE("print then parse round-trips every bundled model") {
  for (const std::string name :
       {"chain.psl", "conflict.psl", "voting.psl", "hiring.psl"}) {
    const Program p = parse_program(read_file(model_path(name)));
    const Program q = parse_program(print_program(p));
    CHECK(structurally_equal(p, q));
  }
}

TEST_CASE("round trip preserves fractional values") {
  const Program p = parse_program(
      "domain D = { a }\n"
      "predicate P(D)\n"
      "evidence P(a) = 0.125\n"
      "rule 0.001 : P(a) -> P(a)\n");
  const Program q = parse_program(print_program(p));
  REQUIRE(structurally_equal(p, q));
  CHECK(q.evidence[0].value == 0.125);
  CHECK(q.rules[0].weight == 0.001);
}

TEST_CASE("voting model grounds to 18 rules over 15 atoms") {
  const GroundModel gm =
      ground(parse_program(read_file(model_path("voting.psl"))));

  CHECK(gm.rules().size() == 18);
  CHECK(gm.atom_count() == 15);  // 9 Friend + 6 Voted
  CHECK(gm.free_atoms().size() == 11);

  REQUIRE(gm.find_atom("Friend(a1,b)").has_value());
  CHECK(gm.is_evidence(*gm.find_atom("Friend(a1,b)")));
  CHECK(gm.evidence_value(*gm.find_atom("Friend(a1,b)")) == 1.0);
  REQUIRE(gm.find_atom("Voted(b,inc)").has_value());
  CHECK_FALSE(gm.is_evidence(*gm.find_atom("Voted(b,inc)")));
  CHECK_FALSE(gm.find_atom("Voted(b,b)").has_value());

  // Atom base is sorted by key.
  for (std::size_t i = 1; i < gm.atom_count(); ++i) {
    CHECK(gm.atom(i - 1).key() < gm.atom(i).key());
  }

  // Assignments enumerate (X, B2, P) lexicographically over sorted
  // constants, so the first two instantiate X=a1, B2=a1, P=chal|inc.
  const GroundRule& first = gm.rules()[0];
  CHECK(gm.atom(first.body[0]).key() == "Friend(a1,a1)");
  CHECK(gm.atom(first.body[1]).key() == "Voted(a1,chal)");
  CHECK(gm.atom(first.head).key() == "Voted(a1,chal)");
  CHECK(gm.atom(gm.rules()[1].head).key() == "Voted(a1,inc)");
  for (const GroundRule& r : gm.rules()) CHECK(r.weight == 1.0);
}

TEST_CASE("grounding count is the product of the variable domain sizes") {
  const std::string text =
      "domain A = { x1, x2 }\n"
      "domain B = { y1, y2, y3 }\n"
      "domain C = { z1 }\n"
      "predicate Pa(A)\n"
      "predicate Pb(B)\n"
      "predicate Pc(C)\n";

  SECTION("three distinct variables") {
    const GroundModel gm = ground(parse_program(
        text + "rule 1.0 : Pa(X) & Pb(Y) & Pc(Z) -> Pa(X)\n"));
    CHECK(gm.rules().size() == 2 * 3 * 1);
  }
  SECTION("repeated variable counts once") {
    const GroundModel gm =
        ground(parse_program(text + "rule 1.0 : Pa(X) & Pa(X) -> Pa(X)\n"));
    CHECK(gm.rules().size() == 2);
  }
  SECTION("fully ground rule instantiates once") {
    const GroundModel gm =
        ground(parse_program(text + "rule 1.0 : Pa(x1) -> Pa(x2)\n"));
    REQUIRE(gm.rules().size() == 1);
    CHECK(gm.atom(gm.rules()[0].body[0]).key() == "Pa(x1)");
  }
  SECTION("duplicate rule statements ground separately") {
    const GroundModel gm = ground(parse_program(
        text + "rule 1.0 : Pa(x1) -> Pa(x2)\nrule 1.0 : Pa(x1) -> Pa(x2)\n"));
    CHECK(gm.rules().size() == 2);
  }
  SECTION("program without rules grounds to none") {
    const GroundModel gm = ground(parse_program(text));
    CHECK(gm.rules().empty());
    CHECK(gm.atom_count() == 6);
  }
}

TEST_CASE("capitalized constants are not variables") {
  const Program p = parse_program(
      "domain T = { Alice, bob }\n"
      "predicate Knows(T)\n"
      "rule 1.0 : Knows(Alice) -> Knows(bob)\n");
  CHECK_FALSE(p.is_variable("Alice"));
  CHECK(p.is_variable("Carol"));
  const GroundModel gm = ground(p);
  REQUIRE(gm.rules().size() == 1);
  CHECK(gm.atom(gm.rules()[0].body[0]).key() == "Knows(Alice)");
}

TEST_CASE("chain and hiring models ground as expected") {
  const GroundModel chain =
      ground(parse_program(read_file(model_path("chain.psl"))));
  CHECK(chain.atom_count() == 3);
  CHECK(chain.rules().size() == 2);
  REQUIRE(chain.free_atoms().size() == 1);
  CHECK(chain.atom(chain.free_atoms()[0]).key() == "Holds(b)");
  CHECK(chain.evidence_value(*chain.find_atom("Holds(a)")) == 1.0);
  CHECK(chain.evidence_value(*chain.find_atom("Holds(c)")) == 0.0);

  const GroundModel hiring =
      ground(parse_program(read_file(model_path("hiring.psl"))));
  CHECK(hiring.atom_count() == 8);
  CHECK(hiring.rules().size() == 2);
  CHECK(hiring.free_atoms().size() == 2);
  REQUIRE(hiring.rules()[0].body.size() == 3);
}

TEST_CASE("ground revalidates the program") {
  Program p;
  p.domains.push_back({"D", {"a"}, {}});
  p.predicates.push_back({"P", {"D"}, {}});
  RuleDecl r;
  r.weight = 1.0;
  r.body.push_back({"P", {"a"}, {}});
  r.head = {"Missing", {"a"}, {}};
  p.rules.push_back(r);
  REQUIRE_THROWS_AS(ground(p), ParseError);
}

TEST_CASE("GroundModel constructor validates its inputs") {
  std::vector<GroundAtom> atoms{{"P", {"a"}}, {"P", {"b"}}};

  SECTION("evidence table size mismatch") {
    REQUIRE_THROWS_AS(GroundModel(atoms, {std::nullopt}, {}), GroundingError);
  }
  SECTION("empty rule body") {
    REQUIRE_THROWS_AS(
        GroundModel(atoms, {std::nullopt, std::nullopt}, {{1.0, {}, 0}}),
        GroundingError);
  }
  SECTION("body index out of range") {
    REQUIRE_THROWS_AS(
        GroundModel(atoms, {std::nullopt, std::nullopt}, {{1.0, {5}, 0}}),
        GroundingError);
  }
  SECTION("head index out of range") {
    REQUIRE_THROWS_AS(
        GroundModel(atoms, {std::nullopt, std::nullopt}, {{1.0, {0}, 5}}),
        GroundingError);
  }
}
