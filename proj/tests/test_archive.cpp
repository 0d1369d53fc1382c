#include <catch2/catch_amalgamated.hpp>

#include "forge/archive.hpp"
#include "forge/gen.hpp"

using namespace forge;

namespace {

// An archive shaped like the released masking records.
const char* kPmArchive = R"(
- index: 0
  problem: '(C & A) # (~C | B) # B'
  conditionalized: false
  proof: |-
    {
      C BY left-and on (C & A);
      B BY dsyl on (~C | B), C
    }
  correctProof: true
  complexProof: false
  maskedProof: |-
    {
      MASK1 BY left-and on (C & A);
      B BY MASK3 on (~C | B), MASK2
    }
  masks:
    MASK1: C
    MASK2: C
    MASK3: dsyl
  llmMaskFillingResponses:
    strong-model:
      sentTimestamp: '2026-03-01 10:00:00+00:00'
      answer:
        MASK1: C
        MASK2: C
        MASK3: dsyl
    weak-model:
      answer:
        MASK1: C
        MASK3: dsyl
    formatting-model:
      answer:
        MASK1: C
        MASK2: C
        MASK3: (A & B)
    failed-model:
      apiFailure: true
  extraMetadata:
    keep: me
)";

}  // namespace

TEST_CASE("archive round-trip preserves known and unknown keys") {
  std::vector<ResultRecord> records = load_archive_text(kPmArchive);
  REQUIRE(records.size() == 1);
  CHECK(records[0].index() == 0);
  CHECK(records[0].node["extraMetadata"]["keep"].as<std::string>() == "me");

  std::string dumped = dump_archive(records);
  std::vector<ResultRecord> again = load_archive_text(dumped);
  REQUIRE(again.size() == 1);
  CHECK(again[0].index() == 0);
  CHECK(again[0].text("maskedProof") == records[0].text("maskedProof"));
  CHECK(again[0].node["masks"]["MASK2"].as<std::string>() == "C");
  CHECK(again[0].node["extraMetadata"]["keep"].as<std::string>() == "me");
  CHECK(again[0]
            .node["llmMaskFillingResponses"]["strong-model"]["sentTimestamp"]
            .as<std::string>() ==
        records[0]
            .node["llmMaskFillingResponses"]["strong-model"]["sentTimestamp"]
            .as<std::string>());
}

TEST_CASE("empty archive round-trips; missing index is a schema error") {
  CHECK(load_archive_text("[]").empty());
  CHECK_THROWS_AS(load_archive_text("- problem: x\n"), SchemaError);
  try {
    load_archive_text("- index: 3\n- problem: x\n");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.index() == 1);
    CHECK(e.key() == "index");
  }
}

TEST_CASE("evaluate_task: PL1-PM credits, categories, denominators") {
  std::vector<ResultRecord> records = load_archive_text(kPmArchive);
  EvalReport report = evaluate_task(TaskKind::Pl1Pm, records);
  REQUIRE(report.models.size() == 4);

  auto find = [&report](const std::string& name) -> const ModelReport& {
    for (const auto& m : report.models)
      if (m.model == name) return m;
    FAIL("missing model " + name);
    return report.models[0];
  };

  const ModelReport& strong = find("strong-model");
  CHECK(strong.credited == 1);
  CHECK(strong.errors == 0);
  CHECK(strong.accuracy() == 1.0);
  CHECK(strong.strict_credited == 1);

  const ModelReport& weak = find("weak-model");
  CHECK(weak.credited == 0);
  CHECK(weak.error_categories.at("missingMasks") == 1);

  const ModelReport& fmt = find("formatting-model");
  CHECK(fmt.credited == 0);
  CHECK(fmt.error_categories.at("rulesToFormulas") == 1);

  const ModelReport& failed = find("failed-model");
  CHECK(failed.excluded == 1);
  CHECK(failed.denominator() == 0);

  // bookkeeping identity per model
  for (const auto& m : report.models)
    CHECK(m.credited + m.errors + m.excluded == m.total);
}

TEST_CASE("evaluate_task: PL1-PC scoring rule") {
  const char* archive = R"(
- index: 0
  problem: '(A & B) # A'
  proof: |-
    {
      A BY left-and on premise-1
    }
  correctProof: true
  llmProofCheckingResponses:
    accepts:
      answer:
        correct: true
        errorDetails: {}
    rejects:
      answer:
        correct: false
        errorDetails:
          offendingLine: "A BY left-and on premise-1"
          offendingLineNumber: 2
          errorType: logic
          errorDescription: "spurious"
- index: 1
  problem: '(A & B) # A'
  proof: |-
    {
      A BY claim on C
    }
  correctProof: false
  llmProofCheckingResponses:
    accepts:
      answer:
        correct: true
        errorDetails: {}
    rejects:
      answer:
        correct: false
        errorDetails:
          offendingLine: "A BY claim on C"
          offendingLineNumber: 2
          errorType: logic
          errorDescription: "C is unbound"
)";
  std::vector<ResultRecord> records = load_archive_text(archive);
  EvalReport report = evaluate_task(TaskKind::Pl1Pc, records);
  REQUIRE(report.models.size() == 2);
  for (const auto& m : report.models) {
    if (m.model == "accepts") {
      CHECK(m.credited == 1);  // right on the clean proof, type-1 on the broken
      CHECK(m.error_categories.at("type1-false-negative") == 1);
    } else {
      CHECK(m.credited == 1);  // right on the broken proof, type-2 on the clean
      CHECK(m.error_categories.at("type2-false-positive") == 1);
    }
  }
  // two models with accuracies 0.5 and 0.5: DI defined, zero spread
  REQUIRE(report.di_value);
  CHECK(*report.di_value == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("evaluate_task: EQ-ER proof- and step-level accuracy") {
  const char* archive = R"(
- index: 0
  problem: |
    - Axioms:
    E1: f(X) = a
    E2: g(a,Y) = Y
    - Proof:
    s = g(f(b),c)
        g(a,c)
        c
  llmEquationRecoveryResponses:
    perfect:
      answer:
        - step: 1
          supportingEquations: [E1]
        - step: 2
          supportingEquations: [E2]
    partial:
      answer:
        - step: 1
          supportingEquations: [E2]
        - step: 2
          supportingEquations: [E2]
)";
  std::vector<ResultRecord> records = load_archive_text(archive);
  EvalReport report = evaluate_task(TaskKind::EqEr, records);
  for (const auto& m : report.models) {
    if (m.model == "perfect") {
      CHECK(m.credited == 1);
      CHECK(m.sla_correct == 2);
    } else {
      CHECK(m.credited == 0);
      CHECK(m.sla_correct == 1);
      CHECK(m.sla_total == 2);
    }
  }
}

TEST_CASE("evaluate_task: EQ-GF with confidence calibration") {
  const char* archive = R"(
- index: 0
  problem: |
    - Axioms:
    E1: f(X) = a
    E2: g(a,Y) = Y
    - Proof:
    s = g(f(b),c)
        ??        ??
        c         by E2
  llmGapFillingResponses:
    filler:
      answer:
        explanation: reduce the first argument
        missingSteps:
          - term: g(a,c)
            supportingEquations: [E1]
        confidence: 5
    refuser:
      answer:
        explanation: looks impossible
        missingSteps: []
        confidence: 4
)";
  std::vector<ResultRecord> records = load_archive_text(archive);
  EvalReport report = evaluate_task(TaskKind::EqGf, records);
  for (const auto& m : report.models) {
    if (m.model == "filler") {
      CHECK(m.credited == 1);
      REQUIRE(m.calib);
      CHECK(m.calib->ece == Catch::Approx(0.05));
    } else {
      CHECK(m.credited == 0);
      CHECK(m.error_categories.count("type1-empty") == 1);
    }
  }
}

TEST_CASE("evaluate_task: PL3-PC lenient true-positive rule") {
  const char* archive = R"(
- index: 0
  problem: 'A1 # (A1 ==> A2) # A2'
  proof: |-
    {
      A2 from premise-1, premise-2
    }
  llmProofCheckingResponses:
    right:
      answer:
        correct: true
        errorDetails: {}
- index: 1
  problem: '(A16 | A15) # A15'
  proof: |-
    {
      A15 from premise-1
    }
  llmProofCheckingResponses:
    right:
      answer:
        correct: false
        errorDetails:
          offendingLineNumber: 2
          errorType: logic
          errorDescription: "does not follow; countermodel A16 true, A15 false"
)";
  std::vector<ResultRecord> records = load_archive_text(archive);
  EvalReport report = evaluate_task(TaskKind::Pl3Pc, records);
  REQUIRE(report.models.size() == 1);
  CHECK(report.models[0].credited == 2);
}

TEST_CASE("evaluate_task: conditionalized problems fold premises into the goal") {
  const char* archive = R"(
- index: 0
  problem: 'A # B # (A & B)'
  conditionalized: true
  llmProofWritingResponses:
    writer:
      answer:
        proof: |-
          assume both-hyp := (A & B) {
            claim on both-hyp
          }
)";
  std::vector<ResultRecord> records = load_archive_text(archive);
  EvalReport report = evaluate_task(TaskKind::Pl1Pw, records);
  REQUIRE(report.models.size() == 1);
  CHECK(report.models[0].credited == 1);
}

TEST_CASE("answer normalization strips fences and bold markers") {
  std::string text = "```json\nGAP-1: claim on A\n```\n**GAP-2:** both on A, B\n";
  int edits = normalize_answer_text(text);
  CHECK(edits >= 3);
  CHECK(text.find("```") == std::string::npos);
  CHECK(text.find("**") == std::string::npos);
  CHECK(text.find("GAP-2:") != std::string::npos);
}

TEST_CASE("end to end: generate, transform, archive, evaluate") {
  // Generated problems with generated proofs, masked, archived with
  // synthetic responses, and scored through the public evaluation surface.
  YAML::Node root(YAML::NodeType::Sequence);
  int made = 0;
  for (int n : {1, 3, 5}) {
    Argument arg = gen_debruijn(n);
    std::string proof_text = write_debruijn_proof(n);
    REQUIRE(check_argument({}, arg.goal, proof_text).ok());
    for (std::uint64_t seed : {11ull, 12ull}) {
      NdlProgram prog = parse_ndl_program("# Goal: " + print_formula(arg.goal) +
                                          "\n" + proof_text);
      MaskedProof masked = mask_proof(prog, 0.3, seed);
      REQUIRE_FALSE(masked.assignment.empty());

      YAML::Node rec;
      rec["index"] = made;
      rec["problem"] = print_formula(arg.goal);  // zero premises
      rec["conditionalized"] = false;
      rec["proof"] = proof_text;
      rec["correctProof"] = true;
      rec["maskedProof"] = masked.text;
      for (const auto& [token, value] : masked.assignment)
        rec["masks"][token] = value;
      // the faithful model answers with the gold assignment; the lazy one
      // drops a mask
      for (const auto& [token, value] : masked.assignment)
        rec["llmMaskFillingResponses"]["faithful"]["answer"][token] = value;
      bool first = true;
      for (const auto& [token, value] : masked.assignment) {
        if (first) {
          first = false;
          continue;
        }
        rec["llmMaskFillingResponses"]["lazy"]["answer"][token] = value;
      }
      root.push_back(rec);
      ++made;
    }
  }
  REQUIRE(made == 6);

  YAML::Emitter emitter;
  emitter << root;
  std::vector<ResultRecord> records = load_archive_text(emitter.c_str());
  EvalReport report = evaluate_task(TaskKind::Pl1Pm, records);
  REQUIRE(report.models.size() == 2);
  for (const auto& m : report.models) {
    if (m.model == "faithful") {
      CHECK(m.credited == 6);
      CHECK(m.accuracy() == 1.0);
    } else {
      CHECK(m.credited == 0);
      CHECK(m.error_categories.at("missingMasks") == 6);
    }
    CHECK(m.credited + m.errors + m.excluded == m.total);
  }
  // determinism of the scoring pipeline
  EvalReport again = evaluate_task(TaskKind::Pl1Pm, records);
  REQUIRE(again.models.size() == report.models.size());
  for (std::size_t i = 0; i < report.models.size(); ++i) {
    CHECK(again.models[i].credited == report.models[i].credited);
    CHECK(again.models[i].errors == report.models[i].errors);
  }
}
