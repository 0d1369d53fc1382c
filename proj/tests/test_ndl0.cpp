#include <catch2/catch_amalgamated.hpp>

#include "forge/ndl0.hpp"

using namespace forge;

namespace {

// Simple DAG pebbling item: 8 premises, goal A8, refutational proof.
const char* kItem233 = R"(
assert premise-1 := A1
assert premise-2 := (~A2 ==> ~A1)
assert premise-3 := (A2 ==> A3)
assert premise-4 := (~A4 ==> ~A3)
assert premise-5 := (~A5 ==> ~A4)
assert premise-6 := (~A6 ==> ~A2 | ~A5)
assert premise-7 := (A6 & ~A7 ==> ~A3 | ~A2)
assert premise-8 := (A3 & A6 & ~A8 & A7 & A4 & A2 ==> ~A1)

# Goal: Prove A8
{
  assume negated_conjecture := (~ A8) {
    lemma-1 := A2 from premise-2, premise-1;
    lemma-2 := A3 from premise-3, lemma-1;
    lemma-3 := (A3 ==> A7 | ~A6) from premise-7, lemma-1;
    lemma-4 := (~A8 ==> ~A4 | ~A6 | ~A7 | ~A2 | ~A3) from premise-8, premise-1;
    lemma-5 := A4 from premise-4, lemma-2;
    lemma-6 := (A6 ==> A7) from lemma-3, lemma-2;
    lemma-7 := (~A4 | ~A7 | A8 | ~A6 | ~A3) from lemma-4, lemma-1;
    lemma-8 := A5 from premise-5, lemma-5;
    lemma-9 := (A6 ==> ~A7 | A8 | ~A3) from lemma-7, lemma-5;
    lemma-10 := (~A2 | A6) from premise-6, lemma-8;
    lemma-11 := A6 from lemma-10, lemma-1;
    lemma-12 := A7 from lemma-6, lemma-11;
    lemma-13 := (A8 | ~A6 | ~A3) from lemma-9, lemma-12;
    lemma-14 := (A8 | ~A3) from lemma-13, lemma-11;
    lemma-15 := A8 from lemma-14, lemma-2;
    lemma-16 := false from negated_conjecture, lemma-15
  };
  A8 from (~A8 ==> false)
}
)";

const char* kDirect8 = R"(
{
  A2 from premise-1, premise-2;
  A3 from A2, premise-3;
  A4 from A3, premise-4;
  A5 from A4, premise-5;
  A6 from A2, A5, premise-6;
  A7 from A6, A2, A3, premise-7;
  lemma := (~A6 | ~A7 | A8) from A1, A2, A3, A4, premise-8;
  A8 from lemma, A6, A7
}
)";

std::vector<std::pair<std::string, Formula>> premises233() {
  std::vector<std::pair<std::string, Formula>> out;
  const char* fs[] = {"A1",
                      "(~A2 ==> ~A1)",
                      "(A2 ==> A3)",
                      "(~A4 ==> ~A3)",
                      "(~A5 ==> ~A4)",
                      "(~A6 ==> ~A2 | ~A5)",
                      "(A6 & ~A7 ==> ~A3 | ~A2)",
                      "(A3 & A6 & ~A8 & A7 & A4 & A2 ==> ~A1)"};
  for (int i = 0; i < 8; ++i)
    out.emplace_back("premise-" + std::to_string(i + 1), parse_formula(fs[i]));
  return out;
}

}  // namespace

TEST_CASE("eval0: from-step with named arguments") {
  const char* text = R"(
assert premise-1 := A1
assert premise-2 := (~A2 ==> ~A1)
{
  A2 from premise-2, premise-1
}
)";
  Ndl0Program prog = parse_ndl0_program(text);
  AssumptionBase base;
  Environment env;
  for (const auto& [n, f] : prog.asserts) {
    base.insert(f);
    env.bind(n, f);
  }
  Ndl0Verdict v = eval0(*prog.main, base, env);
  REQUIRE(v.ok());
  CHECK(*v.conclusion == parse_formula("A2"));
}

TEST_CASE("eval0: non-entailed step yields the paper's countermodel") {
  AssumptionBase base;
  base.insert(parse_formula("(A16 | A15)"));
  Ndl0ProofPtr p = parse_ndl0_proof("A15 from (A16 | A15)");
  Ndl0Verdict v = eval0(*p, base, Environment());
  REQUIRE_FALSE(v.ok());
  CHECK(v.error->base.kind == NdlErrorKind::WrongConclusion);
  REQUIRE(v.error->countermodel);
  // A16: true, A15: false
  CHECK(v.error->countermodel->lookup("A16") == true);
  CHECK(v.error->countermodel->lookup("A15") == false);
}

TEST_CASE("eval0: membership is strict") {
  AssumptionBase base;
  base.insert(parse_formula("(A & B)"));
  // literal membership: (B & A) is not in the base
  Ndl0ProofPtr p = parse_ndl0_proof("A from (B & A)");
  Ndl0Verdict v = eval0(*p, base, Environment());
  REQUIRE_FALSE(v.ok());
  CHECK(v.error->base.kind == NdlErrorKind::NotInAB);
}

TEST_CASE("eval0: arity cap at five") {
  AssumptionBase base;
  for (char c = 'A'; c <= 'F'; ++c) base.insert(Formula::atom(std::string(1, c)));
  Ndl0ProofPtr p = parse_ndl0_proof("(A & B) from A, B, C, D, E, F");
  Ndl0Verdict v = eval0(*p, base, Environment());
  REQUIRE_FALSE(v.ok());
  CHECK(v.error->base.kind == NdlErrorKind::MalformedRuleApp);

  Ndl0ProofPtr ok = parse_ndl0_proof("(A & B) from A, B, C, D, E");
  CHECK(eval0(*ok, base, Environment()).ok());
}

TEST_CASE("eval0: optional total-conjunct cap") {
  AssumptionBase base;
  base.insert(parse_formula("(A & B & C)"));
  base.insert(parse_formula("(D & E & F)"));
  Ndl0ProofPtr p = parse_ndl0_proof("A from (A & B & C), (D & E & F)");
  CHECK(eval0(*p, base, Environment()).ok());
  Ndl0EvalOptions strict;
  strict.cap_total_conjuncts = true;
  Ndl0Verdict v = eval0(*p, base, Environment(), strict);
  REQUIRE_FALSE(v.ok());
  CHECK(v.error->base.kind == NdlErrorKind::MalformedRuleApp);
}

TEST_CASE("item 233: refutational proof checks and has depth 12") {
  Ndl0Program prog = parse_ndl0_program(kItem233);
  REQUIRE(prog.goal.has_value());
  CHECK(*prog.goal == parse_formula("A8"));
  Ndl0CheckReport rep = check_argument0({}, *prog.goal, kItem233);
  CHECK(rep.ok());

  ReasoningGraph g = reasoning_graph(prog);
  CHECK(g.acyclic());
  CHECK(g.has_false_sink);
  CHECK(g.depth() == 12);
}

TEST_CASE("direct 8-step proof checks; reasoning depth by longest-path oracle") {
  Ndl0CheckReport rep = check_argument0(premises233(), parse_formula("A8"), kDirect8);
  CHECK(rep.ok());

  Ndl0Program prog = parse_ndl0_program(kDirect8);
  ReasoningGraph g = reasoning_graph(prog, premises233());
  CHECK(g.acyclic());
  CHECK_FALSE(g.has_false_sink);

  // Independent oracle: longest path over the explicit dependency lists.
  std::map<std::string, std::vector<std::string>> deps = {
      {"A2", {"p"}},          {"A3", {"A2"}},
      {"A4", {"A3"}},         {"A5", {"A4"}},
      {"A6", {"A2", "A5"}},   {"A7", {"A6", "A2", "A3"}},
      {"lemma", {"A2", "A3", "A4"}}, {"A8", {"lemma", "A6", "A7"}}};
  std::map<std::string, int> depth{{"p", 0}};
  for (const char* k : {"A2", "A3", "A4", "A5", "A6", "A7", "lemma", "A8"}) {
    int best = 0;
    for (const auto& d : deps[k]) best = std::max(best, depth[d]);
    depth[k] = best + 1;
  }
  CHECK(g.depth() == depth["A8"]);
  CHECK(depth["A8"] == 7);
}

TEST_CASE("single from-step has depth 1") {
  const char* text = "assert premise-1 := (A ==> B)\n{ (A ==> B) from premise-1 }\n";
  Ndl0Program prog = parse_ndl0_program(text);
  ReasoningGraph g = reasoning_graph(prog);
  CHECK(g.depth() == 1);
}

TEST_CASE("ndl_to_ndl0 translations") {
  SECTION("mp maps to conclusion-from-args") {
    AssumptionBase base;
    base.insert(parse_formula("(A ==> B)"));
    base.insert(parse_formula("A"));
    Ndl0ProofPtr step =
        ndl_to_ndl0("mp", {parse_formula("(A ==> B)"), parse_formula("A")}, base);
    CHECK(print_ndl0_proof(step) == "B from (A ==> B), A");
    CHECK(eval0(*step, base, Environment()).ok());
  }
  SECTION("left-either cites only its left disjunct") {
    AssumptionBase b;
    b.insert(parse_formula("B"));
    Ndl0ProofPtr step =
        ndl_to_ndl0("left-either", {parse_formula("B"), parse_formula("D")}, b);
    CHECK(print_ndl0_proof(step) == "(B | D) from B");
    CHECK(eval0(*step, b, Environment()).ok());
  }
  SECTION("by-contradiction cites the conditional") {
    AssumptionBase b;
    b.insert(parse_formula("(~A ==> false)"));
    Ndl0ProofPtr step = ndl_to_ndl0(
        "by-contradiction", {parse_formula("A"), parse_formula("(~A ==> false)")}, b);
    CHECK(print_ndl0_proof(step) == "A from ((~ A) ==> false)");
    CHECK(eval0(*step, b, Environment()).ok());
  }
  SECTION("from-false cites the false literal") {
    AssumptionBase b;
    b.insert(Formula::f());
    Ndl0ProofPtr step = ndl_to_ndl0("from-false", {parse_formula("(A & B)")}, b);
    CHECK(print_ndl0_proof(step) == "(A & B) from false");
    CHECK(eval0(*step, b, Environment()).ok());
  }
  SECTION("simulation across the catalog") {
    struct Case {
      const char* rule;
      std::vector<const char*> args;
    };
    AssumptionBase b;
    for (const char* s :
         {"(A ==> B)", "A", "(A & B)", "(A | B)", "(~ (~ C))", "(A <==> B)",
          "(B ==> A)", "(A ==> C)", "(B ==> C)", "false", "(~ (A ==> B))",
          "(~ (A & B))", "(~ A)", "((~ Q7) ==> false)"})
      b.insert(parse_formula(s));
    std::vector<Case> cases = {
        {"claim", {"A"}},
        {"mp", {"(A ==> B)", "A"}},
        {"both", {"A", "(A & B)"}},
        {"left-and", {"(A & B)"}},
        {"right-and", {"(A & B)"}},
        {"left-either", {"A", "Z9"}},
        {"right-either", {"Z9", "A"}},
        {"cases", {"(A | B)", "(A ==> C)", "(B ==> C)"}},
        {"cd", {"(A | B)", "(A ==> C)", "(B ==> C)"}},
        {"dn", {"(~ (~ C))"}},
        {"dm", {"(~ (A & B))"}},
        {"dsyl", {"(A | B)", "(~ A)"}},
        {"cond-def", {"(A ==> B)"}},
        {"neg-cond-def", {"(~ (A ==> B))"}},
        {"bicond-def", {"(A <==> B)"}},
        {"equiv", {"(A ==> B)", "(B ==> A)"}},
        {"left-iff", {"(A <==> B)"}},
        {"right-iff", {"(A <==> B)"}},
        {"ex-middle", {"Q7"}},
        {"from-complements", {"C", "A", "(~ A)"}},
        {"from-false", {"(A & B)"}},
        {"mt", {"(B ==> A)", "(~ A)"}},
        {"absurd", {"A", "(~ A)"}},
        {"by-contradiction", {"Q7", "((~ Q7) ==> false)"}},
    };
    int simulated = 0;
    for (const auto& c : cases) {
      std::vector<Formula> args;
      for (const char* a : c.args) args.push_back(parse_formula(a));
      RuleOutcome out = apply_rule(c.rule, args, b);
      REQUIRE(out.conclusion);
      Ndl0ProofPtr step = ndl_to_ndl0(c.rule, args, b);
      Ndl0Verdict v = eval0(*step, b, Environment());
      REQUIRE(v.ok());
      CHECK(*v.conclusion == *out.conclusion);
      ++simulated;
    }
    CHECK(simulated == 24);
  }
}

TEST_CASE("accepted proofs satisfy the entailment oracle") {
  Ndl0CheckReport rep = check_argument0(premises233(), parse_formula("A8"), kDirect8);
  REQUIRE(rep.ok());
  std::vector<Formula> prem;
  for (const auto& [_, f] : premises233()) prem.push_back(f);
  CHECK(entails(prem, parse_formula("A8")));
}
