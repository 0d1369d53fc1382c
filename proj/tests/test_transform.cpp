#include <catch2/catch_amalgamated.hpp>

#include "forge/transform.hpp"

using namespace forge;

namespace {

const char* kSample = R"(
assert premise-1 := (A ==> B)
assert premise-2 := (~ A ==> C)
assert premise-3 := (C ==> D)
# Goal: (B | D)

{
  (A | ~A) BY ex-middle on A;
  assume A {
    B BY mp on premise-1, A;
    (B | D) by left-either on B, D
  };
  assume (~ A) {
    C BY mp on premise-2, (~ A);
    D BY mp on premise-3, C;
    (B | D) BY right-either on B, D
  };
  (B | D) BY cases on (A | ~A), (A ==> B | D), (~A ==> B | D)
}
)";

std::vector<std::pair<std::string, Formula>> premises3() {
  return {{"premise-1", parse_formula("(A ==> B)")},
          {"premise-2", parse_formula("(~ A ==> C)")},
          {"premise-3", parse_formula("(C ==> D)")}};
}

}  // namespace

TEST_CASE("mask_proof: gold assignment re-checks semantically") {
  NdlProgram prog = parse_ndl_program(kSample);
  for (double fraction : {0.3, 0.6, 0.9}) {
    MaskedProof masked = mask_proof(prog, fraction, 2024);
    CHECK(masked.assignment.size() >= 1);
    // tokens appear in the text; unmasking with the gold restores a proof the
    // checker accepts
    std::string restored = unmask(masked.text, masked.assignment);
    CheckReport r = check_argument(premises3(), parse_formula("(B | D)"), restored);
    INFO(masked.text);
    CHECK(r.ok());
  }
}

TEST_CASE("mask_proof: zero masks means density zero") {
  NdlProgram prog = parse_ndl_program(kSample);
  MaskedProof none = mask_proof(prog, 0.0, 1);
  CHECK(none.assignment.empty());
  CHECK(mask_density(none) == 0.0);
  // density = masks / maskable lines; 9 steps in the sample proof
  MaskedProof all = mask_proof(prog, 1.0, 1);
  CHECK(all.maskable_lines == 9);
  CHECK(mask_density(all) ==
        Catch::Approx(static_cast<double>(all.assignment.size()) / 9.0));
}

TEST_CASE("mask_proof masks whole occupants only and covers all four kinds") {
  NdlProgram prog = parse_ndl_program(kSample);
  MaskedProof all = mask_proof(prog, 1.0, 3);
  std::set<std::string> kinds;
  for (const auto& [token, kind] : all.kinds) kinds.insert(kind);
  CHECK(kinds.count("conclusion") == 1);
  CHECK(kinds.count("rule") == 1);
  CHECK(kinds.count("assumption") == 1);
  CHECK(kinds.count("rule-argument") == 1);
  // no token is embedded inside a formula: the printer substitutes whole
  // occupants, so "(~ MASK" never appears
  CHECK(all.text.find("(~ MASK") == std::string::npos);
}

TEST_CASE("mask grading accepts the swapped left-and/right-and assignment") {
  const char* commuting = R"(
assert premise-1 := (A & B)
# Goal: (B & A)

{
  left-and on premise-1;
  right-and on premise-1;
  (B & A) BY both on B, A
}
)";
  NdlProgram prog = parse_ndl_program(commuting);
  // mask both rule names
  detail::SubstitutionContext ctx;
  std::vector<detail::MaskCandidate> cands;
  detail::collect_candidates(*prog.main, cands);
  std::map<std::string, std::string> gold, swapped;
  int next = 1;
  for (const auto& c : cands) {
    if (c.kind == detail::MaskCandidate::Kind::Rule && next <= 2) {
      std::string token = "MASK" + std::to_string(next++);
      ctx.rule_masks[c.node] = token;
      gold[token] = c.value;
    }
  }
  REQUIRE(gold.size() == 2);
  swapped["MASK1"] = gold["MASK2"];
  swapped["MASK2"] = gold["MASK1"];
  std::string text = detail::print_sub_program(prog, ctx);
  auto prem = std::vector<std::pair<std::string, Formula>>{
      {"premise-1", parse_formula("(A & B)")}};
  // both assignments are valid solutions under semantic grading
  CHECK(check_argument(prem, parse_formula("(B & A)"), unmask(text, gold)).ok());
  CHECK(check_argument(prem, parse_formula("(B & A)"), unmask(text, swapped)).ok());
}

TEST_CASE("mask_proof determinism") {
  NdlProgram prog = parse_ndl_program(kSample);
  MaskedProof a = mask_proof(prog, 0.5, 77);
  MaskedProof b = mask_proof(prog, 0.5, 77);
  CHECK(a.text == b.text);
  CHECK(a.assignment == b.assignment);
  CHECK(a.kinds == b.kinds);
}

TEST_CASE("insert_gaps: gold completion re-checks; fraction in range") {
  NdlProgram prog = parse_ndl_program(kSample);
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
    GappedProof gapped = insert_gaps(prog, 0.5, seed);
    CHECK(gapped.elided_fraction > 0);
    CHECK(gapped.elided_fraction <= 0.99);
    std::string restored = splice_gaps(gapped.text, gapped.gold);
    CheckReport r = check_argument(premises3(), parse_formula("(B | D)"), restored);
    INFO(gapped.text);
    CHECK(r.ok());
  }
}

TEST_CASE("insert_gaps: near-total elision reduces to proof writing") {
  NdlProgram prog = parse_ndl_program(kSample);
  GappedProof gapped = insert_gaps(prog, 0.99, 12);
  CHECK(gapped.elided_fraction >= 0.5);
  std::string restored = splice_gaps(gapped.text, gapped.gold);
  CHECK(check_argument(premises3(), parse_formula("(B | D)"), restored).ok());
}

TEST_CASE("insert_gaps: any valid filling of a redundant gap is accepted") {
  const char* redundant = R"(
assert premise-1 := (A & B)
# Goal: A

{
  extra := right-and on premise-1;
  A BY left-and on premise-1
}
)";
  NdlProgram prog = parse_ndl_program(redundant);
  // force a gap over the redundant first step
  GappedProof gapped;
  bool made = false;
  for (std::uint64_t seed = 0; seed < 40 && !made; ++seed) {
    GappedProof g = insert_gaps(prog, 0.5, seed);
    if (g.gold.size() == 1 &&
        g.gold.begin()->second.find("right-and") != std::string::npos) {
      gapped = g;
      made = true;
    }
  }
  REQUIRE(made);
  auto prem = std::vector<std::pair<std::string, Formula>>{
      {"premise-1", parse_formula("(A & B)")}};
  // a different no-op derivation in place of the gold is also accepted
  std::map<std::string, std::string> other{{gapped.gold.begin()->first,
                                            "noop := claim on premise-1"}};
  CHECK(check_argument(prem, parse_formula("A"),
                       splice_gaps(gapped.text, other)).ok());
}

TEST_CASE("corrupt_ndl_proof: strict failure at the recorded location") {
  NdlProgram prog = parse_ndl_program(kSample);
  for (std::uint64_t seed : {5ull, 6ull, 7ull, 8ull, 9ull}) {
    NdlCorruption c = corrupt_ndl_proof(prog, parse_formula("(B | D)"), seed);
    CheckReport strict = check_argument({}, parse_formula("(B | D)"), c.text);
    REQUIRE_FALSE(strict.ok());
    REQUIRE(strict.error);
    CHECK(strict.error->kind == c.expected_kind);
    CHECK(strict.error->line == c.line);
    // the instrumented checker's first error matches the ground truth
    InstrumentedResult inst = instrumented_eval({}, parse_formula("(B | D)"), c.text);
    CHECK(inst.result == InstrumentedOutcome::Incorrect);
    REQUIRE(inst.first_error);
    CHECK(inst.first_error->kind == c.expected_kind);
    CHECK(inst.first_error->line == c.line);
  }
}

TEST_CASE("corrupt_ndl_proof determinism") {
  NdlProgram prog = parse_ndl_program(kSample);
  NdlCorruption a = corrupt_ndl_proof(prog, parse_formula("(B | D)"), 99);
  NdlCorruption b = corrupt_ndl_proof(prog, parse_formula("(B | D)"), 99);
  CHECK(a.text == b.text);
  CHECK(a.line == b.line);
  CHECK(a.expected_kind == b.expected_kind);
}

TEST_CASE("corrupted proofs include removed-step and malformed categories") {
  NdlProgram prog = parse_ndl_program(kSample);
  std::set<NdlErrorKind> seen;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    try {
      NdlCorruption c = corrupt_ndl_proof(prog, parse_formula("(B | D)"), seed);
      seen.insert(c.expected_kind);
    } catch (const GenerationExhausted&) {
    }
  }
  CHECK(seen.count(NdlErrorKind::MalformedRuleApp) == 1);
}
