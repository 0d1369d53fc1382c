// Result archives: YAML-backed record files (one per task), per-task scoring
// pipelines wiring the engines together, and report aggregation.

#ifndef FORGE_ARCHIVE_HPP_
#define FORGE_ARCHIVE_HPP_

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "forge/eq.hpp"
#include "forge/instrumented.hpp"
#include "forge/ndl0.hpp"
#include "forge/psychometrics.hpp"
#include "forge/transform.hpp"

namespace forge {

class SchemaError : public std::runtime_error {
public:
  SchemaError(long index, const std::string& key, const std::string& what)
      : std::runtime_error("record " + std::to_string(index) + ", key '" + key +
                           "': " + what),
        index_(index), key_(key) {}
  long index() const { return index_; }
  const std::string& key() const { return key_; }

private:
  long index_;
  std::string key_;
};

enum class TaskKind {
  Pl1Pw, Pl1Pc, Pl1Pm, Pl1Gf, Pl3Pw, Pl3Pc, EqPc, EqEr, EqGf,
};

inline std::optional<TaskKind> parse_task_kind(const std::string& s) {
  if (s == "PL1-PW") return TaskKind::Pl1Pw;
  if (s == "PL1-PC") return TaskKind::Pl1Pc;
  if (s == "PL1-PM") return TaskKind::Pl1Pm;
  if (s == "PL1-GF") return TaskKind::Pl1Gf;
  if (s == "PL3-PW") return TaskKind::Pl3Pw;
  if (s == "PL3-PC") return TaskKind::Pl3Pc;
  if (s == "EQ-PC") return TaskKind::EqPc;
  if (s == "EQ-ER") return TaskKind::EqEr;
  if (s == "EQ-GF") return TaskKind::EqGf;
  return std::nullopt;
}

inline const char* to_string(TaskKind k) {
  switch (k) {
    case TaskKind::Pl1Pw: return "PL1-PW";
    case TaskKind::Pl1Pc: return "PL1-PC";
    case TaskKind::Pl1Pm: return "PL1-PM";
    case TaskKind::Pl1Gf: return "PL1-GF";
    case TaskKind::Pl3Pw: return "PL3-PW";
    case TaskKind::Pl3Pc: return "PL3-PC";
    case TaskKind::EqPc: return "EQ-PC";
    case TaskKind::EqEr: return "EQ-ER";
    case TaskKind::EqGf: return "EQ-GF";
  }
  return "?";
}

// The per-task response dictionary key.
inline const char* response_key(TaskKind k) {
  switch (k) {
    case TaskKind::Pl1Pw:
    case TaskKind::Pl3Pw: return "llmProofWritingResponses";
    case TaskKind::Pl1Pc:
    case TaskKind::Pl3Pc:
    case TaskKind::EqPc: return "llmProofCheckingResponses";
    case TaskKind::Pl1Pm: return "llmMaskFillingResponses";
    case TaskKind::Pl1Gf:
    case TaskKind::EqGf: return "llmGapFillingResponses";
    case TaskKind::EqEr: return "llmEquationRecoveryResponses";
  }
  return "responses";
}

// One result record; unknown keys ride along in the node.
struct ResultRecord {
  YAML::Node node;

  long index() const { return node["index"].as<long>(); }
  std::string text(const char* key) const {
    return node[key] ? node[key].as<std::string>() : std::string();
  }
  bool flag(const char* key) const { return node[key] && node[key].as<bool>(); }
};

inline std::vector<ResultRecord> load_archive_text(const std::string& yaml_text) {
  YAML::Node root = YAML::Load(yaml_text);
  std::vector<ResultRecord> out;
  if (root.IsNull() || !root.IsDefined()) return out;
  if (!root.IsSequence()) throw SchemaError(-1, "", "archive must be a list of records");
  long pos = 0;
  for (const YAML::Node& n : root) {
    if (!n["index"]) throw SchemaError(pos, "index", "missing");
    out.push_back({YAML::Clone(n)});
    ++pos;
  }
  return out;
}

inline std::vector<ResultRecord> load_archive(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open archive " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return load_archive_text(text);
}

inline std::string dump_archive(const std::vector<ResultRecord>& records) {
  YAML::Node root(YAML::NodeType::Sequence);
  for (const ResultRecord& r : records) root.push_back(r.node);
  YAML::Emitter emitter;
  emitter << root;
  return std::string(emitter.c_str()) + "\n";
}

inline void save_archive(const std::vector<ResultRecord>& records,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write archive " + path);
  out << dump_archive(records);
}

// ---------------------------------------------------------------------------
// Problem parsing. The `problem` field lists the premises and the goal
// separated by ` # `; conditionalized records fold the premises into the
// goal's antecedent for grading.

struct ProblemSpec {
  std::vector<std::pair<std::string, Formula>> premises;
  Formula goal;
};

inline ProblemSpec parse_problem_field(const std::string& field, bool conditionalized) {
  std::vector<std::string> parts;
  std::string cur;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] == '#') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += field[i];
    }
  }
  parts.push_back(cur);
  if (parts.empty()) throw std::invalid_argument("empty problem field");
  ProblemSpec spec;
  std::vector<Formula> premises;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i)
    premises.push_back(parse_formula(parts[i]));
  Formula goal = parse_formula(parts.back());
  if (conditionalized && !premises.empty()) {
    Formula conj = premises.back();
    for (std::size_t i = premises.size() - 1; i-- > 0;)
      conj = Formula::conj(premises[i], conj);
    spec.goal = Formula::implies(conj, goal);
  } else {
    for (std::size_t i = 0; i < premises.size(); ++i)
      spec.premises.emplace_back("premise-" + std::to_string(i + 1), premises[i]);
    spec.goal = goal;
  }
  return spec;
}

// Markdown normalization for model answer payloads: strip code fences and
// bold markers. Returns the number of edits.
inline int normalize_answer_text(std::string& text) {
  int edits = 0;
  std::string out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string trimmed = line;
    std::size_t a = trimmed.find_first_not_of(" \t");
    if (a != std::string::npos && trimmed.compare(a, 3, "```") == 0) {
      ++edits;
      continue;  // drop fence lines entirely
    }
    std::size_t pos;
    while ((pos = line.find("**")) != std::string::npos) {
      line.erase(pos, 2);
      ++edits;
    }
    out += line;
    out += '\n';
  }
  text = out;
  return edits;
}

// ---------------------------------------------------------------------------
// Reports.

struct ModelReport {
  std::string model;
  long total = 0;       // records with any response entry
  long credited = 0;
  long errors = 0;
  long excluded = 0;    // API failures, removed from the denominator
  std::map<std::string, long> error_categories;
  long strict_credited = 0;           // strict-checker column where applicable
  long syntax_repairs = 0, structural_repairs = 0;
  double l1 = 0, l2 = 0, l3 = 0;      // EQ-PC level accuracies
  long sla_correct = 0, sla_total = 0;  // EQ-ER step-level tallies
  std::optional<CalibrationSummary> calib;

  long denominator() const { return total - excluded; }
  double accuracy() const {
    return denominator() > 0 ? static_cast<double>(credited) / denominator() : 0.0;
  }
  std::optional<WilsonInterval> interval() const {
    if (denominator() < 1) return std::nullopt;
    return wilson(credited, denominator());
  }
};

struct EvalReport {
  TaskKind task;
  std::vector<ModelReport> models;
  std::optional<double> di_value;        // over >= 2 model accuracies
  std::optional<GiniEstimates> gini;
};

namespace detail {

inline std::vector<std::string> model_ids(const std::vector<ResultRecord>& records,
                                          const char* key) {
  std::set<std::string> ids;
  for (const ResultRecord& r : records) {
    YAML::Node resp = r.node[key];
    if (!resp || !resp.IsMap()) continue;
    for (const auto& kv : resp) ids.insert(kv.first.as<std::string>());
  }
  return {ids.begin(), ids.end()};
}

inline void finish_report(EvalReport& report) {
  std::vector<double> accuracies;
  for (const ModelReport& m : report.models)
    if (m.denominator() > 0) accuracies.push_back(m.accuracy());
  if (accuracies.size() >= 2) {
    report.di_value = di(accuracies);
    report.gini = lorenz_gini(accuracies);
  }
}

// PL1-PC model answer extraction.
inline PcResponse parse_pc_answer(const YAML::Node& answer) {
  PcResponse out;
  if (!answer || !answer.IsMap() || !answer["correct"]) {
    out.well_formed = false;
    return out;
  }
  try {
    out.says_correct = answer["correct"].as<bool>();
  } catch (const YAML::Exception&) {
    out.well_formed = false;
    return out;
  }
  YAML::Node det = answer["errorDetails"];
  if (!out.says_correct) {
    if (!det || !det.IsMap() || !det["offendingLineNumber"]) {
      out.well_formed = false;
      return out;
    }
    try {
      out.offending_line = det["offendingLineNumber"].as<int>();
    } catch (const YAML::Exception&) {
      out.well_formed = false;
      return out;
    }
    if (det["errorType"]) out.error_type = det["errorType"].as<std::string>();
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Task evaluation. Credits are computed from the raw answer payloads; records
// whose response carries `apiFailure: true` leave the denominator.

inline EvalReport evaluate_task(TaskKind kind,
                                const std::vector<ResultRecord>& records) {
  EvalReport report;
  report.task = kind;
  const char* rkey = response_key(kind);

  for (const std::string& model : detail::model_ids(records, rkey)) {
    ModelReport mr;
    mr.model = model;
    for (const ResultRecord& rec : records) {
      YAML::Node resp = rec.node[rkey];
      if (!resp || !resp[model]) continue;
      YAML::Node entry = resp[model];
      ++mr.total;
      if (entry["apiFailure"] && entry["apiFailure"].as<bool>()) {
        ++mr.excluded;
        continue;
      }
      bool credited = false;
      std::string category;

      try {
        switch (kind) {
          case TaskKind::Pl1Pw: {
            ProblemSpec prob = parse_problem_field(rec.text("problem"),
                                                   rec.flag("conditionalized"));
            std::string proof = entry["answer"] && entry["answer"]["proof"]
                                    ? entry["answer"]["proof"].as<std::string>()
                                    : std::string();
            if (proof.empty()) {
              category = "illFormattedAnswers";
              break;
            }
            normalize_answer_text(proof);
            InstrumentedResult gold =
                instrumented_eval(prob.premises, prob.goal, proof);
            if (gold.result == InstrumentedOutcome::Unknown) {
              ++mr.excluded;  // unknown verdicts leave the denominator
              continue;
            }
            mr.syntax_repairs += static_cast<long>(gold.repairs.syntax.size());
            mr.structural_repairs +=
                static_cast<long>(gold.repairs.structural.size());
            credited = gold.result == InstrumentedOutcome::Correct;
            if (gold.strict_accepted) ++mr.strict_credited;
            if (!credited && gold.first_error)
              category = to_string(gold.first_error->kind);
            break;
          }
          case TaskKind::Pl1Pc: {
            ProblemSpec prob = parse_problem_field(rec.text("problem"),
                                                   rec.flag("conditionalized"));
            InstrumentedResult gold =
                instrumented_eval(prob.premises, prob.goal, rec.text("proof"));
            PcResponse answer = detail::parse_pc_answer(entry["answer"]);
            credited = score_pc_response(gold, answer);
            if (!credited) {
              const bool gold_clean =
                  gold.result == InstrumentedOutcome::Correct &&
                  gold.repairs.structural.empty();
              if (!answer.well_formed)
                category = "type3-formatting";
              else if (answer.says_correct && !gold_clean)
                category = "type1-false-negative";
              else if (!answer.says_correct && gold_clean)
                category = "type2-false-positive";
              else {
                // wrong proof correctly flagged; localization vs typing
                int gold_line = gold.first_error
                                    ? gold.first_error->line
                                    : (gold.repairs.structural.empty()
                                           ? 0
                                           : gold.repairs.structural.front().line);
                if (answer.offending_line && *answer.offending_line == gold_line)
                  category = "type5-mischaracterized";
                else
                  category = "type4-mislocalized";
              }
            }
            break;
          }
          case TaskKind::Pl1Pm: {
            ProblemSpec prob = parse_problem_field(rec.text("problem"),
                                                   rec.flag("conditionalized"));
            std::string masked = rec.text("maskedProof");
            YAML::Node answer = entry["answer"];
            if (!answer || !answer.IsMap()) {
              category = "illFormattedAnswers";
              break;
            }
            std::map<std::string, std::string> assignment;
            for (const auto& kv : answer)
              assignment[kv.first.as<std::string>()] = kv.second.as<std::string>();
            if (assignment.empty()) {
              category = "emptyAnswers";
              break;
            }
            // mask inventory from the masked text
            std::set<std::string> masks;
            for (std::size_t pos = masked.find("MASK"); pos != std::string::npos;
                 pos = masked.find("MASK", pos + 1)) {
              std::size_t end = pos + 4;
              while (end < masked.size() &&
                     std::isdigit(static_cast<unsigned char>(masked[end])))
                ++end;
              if (end > pos + 4 && (pos == 0 || !is_ident_char(masked[pos - 1])))
                masks.insert(masked.substr(pos, end - pos));
            }
            bool bogus = false, missing = false, rules_to_formulas = false,
                 formulas_to_rules = false;
            for (const auto& [token, _] : assignment)
              if (!masks.count(token)) bogus = true;
            for (const auto& token : masks)
              if (!assignment.count(token)) missing = true;
            // positional typing: before ` on ` a mask is a rule, else formula
            for (const auto& token : masks) {
              if (!assignment.count(token)) continue;
              std::size_t pos = masked.find(token);
              std::size_t after = pos + token.size();
              bool rule_position = masked.compare(after, 4, " on ") == 0;
              const std::string& value = assignment.at(token);
              bool value_is_rule = is_ndl_rule(value);
              if (rule_position && !value_is_rule) rules_to_formulas = true;
              if (!rule_position && value_is_rule) formulas_to_rules = true;
            }
            if (bogus) mr.error_categories["bogusMasks"]++;
            if (missing) mr.error_categories["missingMasks"]++;
            if (rules_to_formulas) mr.error_categories["rulesToFormulas"]++;
            if (formulas_to_rules) mr.error_categories["formulasToRules"]++;
            if (missing) {
              category = "";
              ++mr.errors;
              goto pm_done;
            }
            {
              std::string restored = unmask(masked, assignment);
              InstrumentedResult gold =
                  instrumented_eval(prob.premises, prob.goal, restored);
              if (gold.result == InstrumentedOutcome::Unknown) {
                ++mr.excluded;  // unknown verdicts leave the denominator
                continue;
              }
              credited = gold.result == InstrumentedOutcome::Correct;
              if (gold.strict_accepted) ++mr.strict_credited;
            }
            if (!credited) ++mr.errors;
          pm_done:
            if (credited) ++mr.credited;
            continue;  // bookkeeping already done
          }
          case TaskKind::Pl1Gf: {
            ProblemSpec prob = parse_problem_field(rec.text("problem"),
                                                   rec.flag("conditionalized"));
            std::string gapped = rec.text("gappedProof");
            std::string answer_text =
                entry["answer"] ? entry["answer"].as<std::string>() : std::string();
            if (answer_text.empty()) {
              category = "illFormattedAnswers";
              break;
            }
            normalize_answer_text(answer_text);
            // parse `GAP-k:` blocks
            std::map<std::string, std::string> fills;
            std::string current;
            std::istringstream in(answer_text);
            std::string line;
            while (std::getline(in, line)) {
              std::size_t g = line.find("GAP-");
              std::size_t colon = line.find(':');
              if (g != std::string::npos && colon != std::string::npos && colon > g) {
                current = line.substr(g, colon - g);
                fills[current] = line.substr(colon + 1);
              } else if (!current.empty()) {
                fills[current] += "\n" + line;
              }
            }
            if (fills.empty()) {
              category = "illFormattedAnswers";
              break;
            }
            std::string restored = splice_gaps(gapped, fills);
            InstrumentedResult gold =
                instrumented_eval(prob.premises, prob.goal, restored);
            if (gold.result == InstrumentedOutcome::Unknown) {
              ++mr.excluded;  // unknown verdicts leave the denominator
              continue;
            }
            credited = gold.result == InstrumentedOutcome::Correct;
            if (gold.strict_accepted) ++mr.strict_credited;
            if (!credited && gold.first_error)
              category = to_string(gold.first_error->kind);
            break;
          }
          case TaskKind::Pl3Pw: {
            ProblemSpec prob = parse_problem_field(rec.text("problem"),
                                                   rec.flag("conditionalized"));
            std::string proof = entry["answer"] && entry["answer"]["proof"]
                                    ? entry["answer"]["proof"].as<std::string>()
                                    : std::string();
            if (proof.empty()) {
              category = "illFormattedAnswers";
              break;
            }
            normalize_answer_text(proof);
            Ndl0CheckReport check = check_argument0(prob.premises, prob.goal, proof);
            credited = check.ok();
            if (!credited && check.verdict.error)
              category = to_string(check.verdict.error->base.kind);
            break;
          }
          case TaskKind::Pl3Pc: {
            ProblemSpec prob = parse_problem_field(rec.text("problem"),
                                                   rec.flag("conditionalized"));
            Ndl0CheckReport gold =
                check_argument0(prob.premises, prob.goal, rec.text("proof"));
            PcResponse answer = detail::parse_pc_answer(entry["answer"]);
            if (!answer.well_formed) {
              category = "type3-formatting";
              break;
            }
            bool gold_ok = gold.ok();
            if (answer.says_correct) {
              credited = gold_ok;
              if (!credited) category = "type1-false-negative";
            } else if (gold_ok) {
              category = "type2-false-positive";
            } else {
              // lenient true-positive rule: the erroneous step must be
              // identified; error details and countermodels are not graded
              int gold_line = gold.verdict.error ? gold.verdict.error->base.line : 0;
              credited = answer.offending_line && *answer.offending_line == gold_line;
              if (!credited) category = "type4-mislocalized";
            }
            break;
          }
          case TaskKind::EqPc: {
            EqProblem prob = parse_eq_problem(rec.text("problem"));
            EqProof proof0 = prob.proof();
            EqCheckResult gold = check_eq_proof(prob.axioms, proof0);
            YAML::Node answer = entry["answer"];
            if (!answer || !answer["correct"]) {
              category = "type1-format";
              break;
            }
            bool says_correct = answer["correct"].as<bool>();
            bool l1 = says_correct == gold.correct;
            bool l2 = l1, l3 = l1;
            if (l1 && says_correct) {
              // positive verification: the explanation must be a valid
              // per-step witness list
              l2 = false;
              YAML::Node expl = answer["explanation"];
              if (expl && expl.IsSequence() && expl.size() == proof0.steps.size()) {
                l2 = true;
                Term prev = prob.start;
                std::size_t step_idx = 0;
                for (const YAML::Node& stepnode : expl) {
                  const EqStep& step = proof0.steps[step_idx];
                  std::vector<RewriteWitness> witnesses;
                  bool ok = stepnode["rewrites"] && stepnode["rewrites"].IsSequence();
                  if (ok) {
                    for (const YAML::Node& rw : stepnode["rewrites"]) {
                      try {
                        RewriteWitness w;
                        w.redex = parse_term(rw["redex"].as<std::string>());
                        w.contractum = parse_term(rw["contractum"].as<std::string>());
                        w.equation = rw["equation"].as<std::string>();
                        for (const YAML::Node& p : rw["position"])
                          w.position.push_back(p.as<int>());
                        witnesses.push_back(w);
                      } catch (...) {
                        ok = false;
                      }
                    }
                  }
                  // verify the witness list semantically
                  if (ok) {
                    Term rebuilt = prev;
                    std::set<std::string> used;
                    for (const auto& w : witnesses) {
                      if (!position_valid(prev, w.position) ||
                          subterm(prev, w.position) != w.redex ||
                          !used.insert(w.equation).second) {
                        ok = false;
                        break;
                      }
                      auto eq = find_equation(prob.axioms, w.equation);
                      if (!eq) {
                        ok = false;
                        break;
                      }
                      auto sub = match_term(eq->lhs, w.redex);
                      if (!sub ||
                          apply_substitution(eq->rhs, *sub) != w.contractum) {
                        ok = false;
                        break;
                      }
                      rebuilt = replace(rebuilt, w.position, w.contractum);
                    }
                    if (ok && rebuilt != step.term) ok = false;
                    std::set<std::string> cited(step.cited.begin(), step.cited.end());
                    if (ok && used != cited) ok = false;
                  }
                  if (!ok) {
                    l2 = false;
                    break;
                  }
                  prev = step.term;
                  ++step_idx;
                }
              }
              l3 = l2;
            } else if (l1 && !says_correct) {
              // negative verdicts: L2 needs nothing further; L3 must document
              // the first failure
              l3 = false;
              YAML::Node expl = answer["explanation"];
              if (expl && expl.IsMap() && expl["step"]) {
                if (gold.contractum_error && expl["expectedContractum"]) {
                  try {
                    l3 = expl["step"].as<int>() == gold.contractum_error->step &&
                         expl["equation"].as<std::string>() ==
                             gold.contractum_error->equation &&
                         parse_term(expl["expectedContractum"].as<std::string>()) ==
                             gold.contractum_error->expected_contractum &&
                         parse_term(expl["actualContractum"].as<std::string>()) ==
                             gold.contractum_error->actual_contractum;
                    if (l3 && expl["position"]) {
                      Position pos;
                      for (const YAML::Node& p : expl["position"])
                        pos.push_back(p.as<int>());
                      l3 = pos == gold.contractum_error->position;
                    }
                  } catch (...) {
                    l3 = false;
                  }
                } else if (gold.equation_error && expl["givenEquations"]) {
                  try {
                    l3 = expl["step"].as<int>() == gold.equation_error->step;
                    if (l3) {
                      std::vector<std::string> given;
                      for (const YAML::Node& g : expl["givenEquations"])
                        given.push_back(g.as<std::string>());
                      l3 = given == gold.equation_error->given_equations;
                    }
                    if (l3 && expl["correctEquations"]) {
                      // any independently valid justifying set earns the point
                      std::vector<std::string> correct;
                      for (const YAML::Node& c : expl["correctEquations"])
                        correct.push_back(c.as<std::string>());
                      int step = gold.equation_error->step;
                      Term prev = step == 1 ? prob.start
                                            : proof0.steps[static_cast<std::size_t>(
                                                               step - 2)].term;
                      Term cur = proof0.steps[static_cast<std::size_t>(step - 1)].term;
                      l3 = verify_recovery_answer(prob.axioms, prev, cur, correct) &&
                           !correct.empty();
                    } else {
                      l3 = false;
                    }
                  } catch (...) {
                    l3 = false;
                  }
                } else {
                  l3 = false;
                }
              }
            }
            mr.l1 += l1 ? 1 : 0;
            mr.l2 += l2 ? 1 : 0;
            mr.l3 += l3 ? 1 : 0;
            credited = l3;
            if (!credited) category = l1 ? "explanation" : "type2-verdict";
            break;
          }
          case TaskKind::EqEr: {
            EqProblem prob = parse_eq_problem(rec.text("problem"));
            EqProof proof = prob.proof();
            YAML::Node answer = entry["answer"];
            if (!answer || !answer.IsSequence()) {
              category = "type1-format";
              break;
            }
            std::map<int, std::vector<std::string>> by_step;
            for (const YAML::Node& stepnode : answer) {
              if (!stepnode["step"]) continue;
              std::vector<std::string> eqs;
              if (stepnode["supportingEquations"])
                for (const YAML::Node& e : stepnode["supportingEquations"])
                  eqs.push_back(e.as<std::string>());
              by_step[stepnode["step"].as<int>()] = eqs;
            }
            bool all = true;
            Term prev = proof.start;
            for (std::size_t i = 0; i < proof.steps.size(); ++i) {
              auto it = by_step.find(static_cast<int>(i + 1));
              bool step_ok =
                  it != by_step.end() &&
                  verify_recovery_answer(prob.axioms, prev, proof.steps[i].term,
                                         it->second);
              ++mr.sla_total;
              if (step_ok) ++mr.sla_correct;
              all = all && step_ok;
              prev = proof.steps[i].term;
            }
            credited = all;  // proof-level accuracy
            if (!credited) category = "stepError";
            break;
          }
          case TaskKind::EqGf: {
            EqProblem prob = parse_eq_problem(rec.text("problem"));
            // locate the gap
            std::size_t gap_index = prob.lines.size();
            for (std::size_t i = 0; i < prob.lines.size(); ++i)
              if (prob.lines[i].is_gap) gap_index = i;
            if (gap_index == prob.lines.size())
              throw std::invalid_argument("gap-fill record has no gap");
            Term pre = gap_index == 0 ? prob.start : prob.lines[gap_index - 1].term;
            if (gap_index + 1 >= prob.lines.size())
              throw std::invalid_argument("gap must precede a final step");
            EqStep post{prob.lines[gap_index + 1].term,
                        prob.lines[gap_index + 1].cited};
            YAML::Node answer = entry["answer"];
            if (!answer || !answer["missingSteps"]) {
              category = "type1-format";
              break;
            }
            std::vector<EqStep> fill;
            bool parse_ok = true;
            for (const YAML::Node& stepnode : answer["missingSteps"]) {
              EqStep s;
              try {
                s.term = parse_term(stepnode["term"].as<std::string>());
              } catch (const SyntaxError&) {
                category = "type2-syntax";
                parse_ok = false;
                break;
              } catch (const TermError&) {
                category = "type3-type";
                parse_ok = false;
                break;
              }
              if (stepnode["supportingEquations"])
                for (const YAML::Node& e : stepnode["supportingEquations"])
                  s.cited.push_back(e.as<std::string>());
              fill.push_back(s);
            }
            if (!parse_ok) break;
            GapFillReport verdict = verify_gap_fill(prob.axioms, pre, post, fill);
            credited = verdict.accepted;
            if (!credited) {
              switch (verdict.status) {
                case GapFillStatus::RejectedEmptyButFillable:
                  category = "type1-empty";
                  break;
                case GapFillStatus::RejectedNonEmptyUnfillable:
                  category = "type5-unfillable";
                  break;
                case GapFillStatus::CitationCapExceeded:
                  category = "citationCap";
                  break;
                default:
                  category = fill.empty() ? "type1-empty" : "type4-step";
              }
            }
            if (answer["confidence"]) {
              int level = answer["confidence"].as<int>();
              if (level >= 1 && level <= 5) {
                if (!mr.calib) mr.calib = CalibrationSummary{};
                // bins recomputed below; stash raw records in categories
                mr.error_categories["confidence-" + std::to_string(level) +
                                    (credited ? "-hit" : "-miss")]++;
              }
            }
            break;
          }
        }
      } catch (const std::exception& e) {
        category = std::string("evaluationError:") + e.what();
        credited = false;
      }

      if (credited)
        ++mr.credited;
      else {
        ++mr.errors;
        if (!category.empty()) mr.error_categories[category]++;
      }
    }

    // EQ-GF calibration summary from the stashed confidence tallies
    if (kind == TaskKind::EqGf) {
      std::vector<CalibrationRecord> recs;
      for (int level = 1; level <= 5; ++level) {
        long hit = mr.error_categories["confidence-" + std::to_string(level) + "-hit"];
        long miss =
            mr.error_categories["confidence-" + std::to_string(level) + "-miss"];
        for (long i = 0; i < hit; ++i) recs.push_back({level, true});
        for (long i = 0; i < miss; ++i) recs.push_back({level, false});
      }
      if (!recs.empty()) mr.calib = calibration(recs);
    }
    report.models.push_back(std::move(mr));
  }
  detail::finish_report(report);
  return report;
}

}  // namespace forge

#endif  // FORGE_ARCHIVE_HPP_
