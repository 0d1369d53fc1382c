// Equational proofs: simultaneous one-step rewriting at disjoint positions,
// three-level proof checking with structured explanations, elided-equation
// recovery, gap-fill verification, and seeded corruption.

#ifndef FORGE_EQ_HPP_
#define FORGE_EQ_HPP_

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>
#include <unordered_set>

#include "forge/term.hpp"

namespace forge {

struct Equation {
  std::string name;  // E1, E2, ...
  Term lhs, rhs;
};

struct EqStep {
  Term term;
  std::vector<std::string> cited;  // empty in recovery inputs
};

struct EqProof {
  Term start;
  std::vector<EqStep> steps;  // step i derives steps[i].term (1-based in reports)
};

struct RewriteWitness {
  Term redex;
  Position position;
  std::string equation;
  Term contractum;
};

// ---------------------------------------------------------------------------
// Single-equation rewriting.

inline std::optional<Equation> find_equation(const std::vector<Equation>& eqs,
                                             const std::string& name) {
  for (const Equation& e : eqs)
    if (e.name == name) return e;
  return std::nullopt;
}

// All positions where eq.lhs matches, each with the whole rewritten term.
inline std::vector<std::pair<Position, Term>> one_step_rewrites(const Term& t,
                                                                const Equation& eq) {
  std::vector<std::pair<Position, Term>> out;
  for (const Position& p : positions(t)) {
    if (auto sub = match_term(eq.lhs, subterm(t, p)))
      out.emplace_back(p, replace(t, p, apply_substitution(eq.rhs, *sub)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// s ==>_S t: each equation in S fires exactly once, at pairwise-disjoint
// positions, and the simultaneous replacement turns s into t. Returns one
// witness per cited equation (in citation order) or nothing.

namespace detail {

struct EqCandidate {
  Position position;
  Term redex;
  Term contractum;
};

inline std::vector<EqCandidate> rewrite_candidates(const Term& s, const Term& t,
                                                   const Equation& eq) {
  std::vector<EqCandidate> out;
  for (const Position& p : positions(s)) {
    Term red = subterm(s, p);
    auto sub = match_term(eq.lhs, red);
    if (!sub) continue;
    Term con = apply_substitution(eq.rhs, *sub);
    // disjoint simultaneous replacement preserves every chosen position, so
    // the contractum must appear verbatim in t
    if (!position_valid(t, p) || subterm(t, p) != con) continue;
    out.push_back({p, red, con});
  }
  return out;
}

inline bool assign_rewrites(const Term& s, const Term& t,
                            const std::vector<Equation>& eqs, std::size_t idx,
                            std::vector<std::vector<EqCandidate>>& cands,
                            std::vector<int>& chosen) {
  if (idx == eqs.size()) {
    Term result = s;
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      const EqCandidate& c = cands[i][static_cast<std::size_t>(chosen[i])];
      result = replace(result, c.position, c.contractum);
    }
    return result == t;
  }
  for (std::size_t k = 0; k < cands[idx].size(); ++k) {
    bool ok = true;
    for (std::size_t j = 0; j < idx && ok; ++j)
      ok = disjoint_positions(cands[j][static_cast<std::size_t>(chosen[j])].position,
                              cands[idx][k].position);
    if (!ok) continue;
    chosen[idx] = static_cast<int>(k);
    if (assign_rewrites(s, t, eqs, idx + 1, cands, chosen)) return true;
  }
  return false;
}

}  // namespace detail

inline std::optional<std::vector<RewriteWitness>>
multi_rewrite_check(const Term& s, const Term& t, const std::vector<Equation>& eqs) {
  if (eqs.empty()) return std::nullopt;
  std::vector<std::vector<detail::EqCandidate>> cands;
  cands.reserve(eqs.size());
  for (const Equation& e : eqs) {
    cands.push_back(detail::rewrite_candidates(s, t, e));
    if (cands.back().empty()) return std::nullopt;
  }
  std::vector<int> chosen(eqs.size(), 0);
  if (!detail::assign_rewrites(s, t, eqs, 0, cands, chosen)) return std::nullopt;
  std::vector<RewriteWitness> out;
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    const detail::EqCandidate& c = cands[i][static_cast<std::size_t>(chosen[i])];
    out.push_back({c.redex, c.position, eqs[i].name, c.contractum});
  }
  return out;
}

inline std::optional<std::vector<RewriteWitness>>
multi_rewrite_check(const Term& s, const Term& t, const std::vector<Equation>& all,
                    const std::vector<std::string>& cited) {
  std::vector<Equation> eqs;
  for (const std::string& name : cited) {
    auto e = find_equation(all, name);
    if (!e) return std::nullopt;
    eqs.push_back(*e);
  }
  return multi_rewrite_check(s, t, eqs);
}

// Symmetric closure: s ==>_S t or t ==>_S s.
inline bool bi_rewrite_check(const Term& s, const Term& t,
                             const std::vector<Equation>& all,
                             const std::vector<std::string>& cited) {
  return multi_rewrite_check(s, t, all, cited).has_value() ||
         multi_rewrite_check(t, s, all, cited).has_value();
}

// ---------------------------------------------------------------------------
// Minimum justifying sets: the smallest S (ties broken by lexicographic
// equation names) with s ==>_S t, found by covering the disagreement
// positions between s and t.

namespace detail {

inline void collect_disagreements(const Term& s, const Term& t, Position& prefix,
                                  std::vector<Position>& out) {
  if (s == t) return;
  bool same_root = s.kind() == t.kind() && s.name() == t.name() &&
                   s.arity() == t.arity();
  if (!same_root) {
    out.push_back(prefix);
    return;
  }
  for (std::size_t i = 0; i < s.arity(); ++i) {
    prefix.push_back(static_cast<int>(i + 1));
    collect_disagreements(s.arg(i), t.arg(i), prefix, out);
    prefix.pop_back();
  }
}

struct CoverSearch {
  const Term& s;
  const Term& t;
  const std::vector<Equation>& eqs;  // sorted by name
  std::vector<std::vector<EqCandidate>> cands;
  std::vector<Position> disagreements;
  std::vector<std::vector<std::string>> solutions;
  std::size_t best = SIZE_MAX;

  void run() {
    Position prefix;
    collect_disagreements(s, t, prefix, disagreements);
    cands.resize(eqs.size());
    for (std::size_t i = 0; i < eqs.size(); ++i)
      cands[i] = rewrite_candidates(s, t, eqs[i]);
    if (disagreements.empty()) {
      // only a single invisibly-firing equation can justify s == t
      for (std::size_t i = 0; i < eqs.size(); ++i)
        for (const EqCandidate& c : cands[i])
          if (c.contractum == c.redex) {
            solutions.push_back({eqs[i].name});
            best = 1;
            return;
          }
      return;
    }
    std::vector<std::pair<std::size_t, Position>> chosen;
    std::vector<char> used(eqs.size(), 0);
    recurse(disagreements, chosen, used);
  }

  void recurse(const std::vector<Position>& uncovered,
               std::vector<std::pair<std::size_t, Position>>& chosen,
               std::vector<char>& used) {
    if (chosen.size() > best) return;
    if (uncovered.empty()) {
      if (chosen.size() < best) {
        best = chosen.size();
        solutions.clear();
      }
      if (chosen.size() == best) {
        std::vector<std::string> names;
        for (auto& [i, _] : chosen) names.push_back(eqs[i].name);
        std::sort(names.begin(), names.end());
        solutions.push_back(std::move(names));
      }
      return;
    }
    const Position& d = uncovered.front();
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      if (used[i]) continue;
      for (const EqCandidate& c : cands[i]) {
        if (!is_prefix_of(c.position, d)) continue;
        bool ok = true;
        for (auto& [_, p] : chosen)
          if (!disjoint_positions(p, c.position)) {
            ok = false;
            break;
          }
        if (!ok) continue;
        std::vector<Position> rest;
        for (const Position& u : uncovered)
          if (!is_prefix_of(c.position, u)) rest.push_back(u);
        chosen.emplace_back(i, c.position);
        used[i] = 1;
        recurse(rest, chosen, used);
        used[i] = 0;
        chosen.pop_back();
      }
    }
  }
};

}  // namespace detail

// Smallest set of equations justifying s ==>_S t; nullopt when none exists.
inline std::optional<std::vector<std::string>>
min_justifying_set(const Term& s, const Term& t, const std::vector<Equation>& all) {
  std::vector<Equation> sorted = all;
  std::sort(sorted.begin(), sorted.end(),
            [](const Equation& a, const Equation& b) { return a.name < b.name; });
  detail::CoverSearch search{s, t, sorted, {}, {}, {}, SIZE_MAX};
  search.run();
  if (search.solutions.empty()) return std::nullopt;
  return *std::min_element(search.solutions.begin(), search.solutions.end());
}

// ---------------------------------------------------------------------------
// Proof checking at three rigor levels. The gold computation is the same for
// all levels: a verdict, the per-step witness explanation for correct proofs,
// and the first-error record for incorrect ones.

struct EqStepExplanation {
  int step;  // 1-based
  std::vector<RewriteWitness> rewrites;
};

struct EqContractumError {
  int step;
  std::string equation;
  Position position;
  Term expected_contractum;
  Term actual_contractum;
};

struct EqEquationError {
  int step;
  std::vector<std::string> given_equations;
  std::vector<std::string> correct_equations;  // empty when no set justifies
};

struct EqCheckResult {
  bool correct = false;
  std::vector<EqStepExplanation> explanation;
  std::optional<EqContractumError> contractum_error;
  std::optional<EqEquationError> equation_error;
};

namespace detail {

// First-error diagnosis for a failing step. Contractum records take
// precedence: a cited redex whose region changed into something other than
// the expected contractum; otherwise the correct equations are reported.
inline void diagnose_step(int step_no, const Term& prev, const Term& cur,
                          const std::vector<std::string>& cited,
                          const std::vector<Equation>& axioms, EqCheckResult& out) {
  for (const std::string& name : cited) {
    auto eq = find_equation(axioms, name);
    if (!eq) continue;
    for (const Position& p : positions(prev)) {
      auto sub = match_term(eq->lhs, subterm(prev, p));
      if (!sub) continue;
      if (!position_valid(cur, p)) continue;
      Term expected = apply_substitution(eq->rhs, *sub);
      Term actual = subterm(cur, p);
      if (actual != subterm(prev, p) && actual != expected) {
        out.contractum_error =
            EqContractumError{step_no, name, p, expected, actual};
        return;
      }
    }
  }
  auto correct = min_justifying_set(prev, cur, axioms);
  out.equation_error = EqEquationError{
      step_no, cited, correct.value_or(std::vector<std::string>{})};
}

}  // namespace detail

inline EqCheckResult check_eq_proof(const std::vector<Equation>& axioms,
                                    const EqProof& proof) {
  EqCheckResult out;
  Term prev = proof.start;
  for (std::size_t i = 0; i < proof.steps.size(); ++i) {
    const EqStep& step = proof.steps[i];
    auto witnesses = multi_rewrite_check(prev, step.term, axioms, step.cited);
    if (!witnesses) {
      detail::diagnose_step(static_cast<int>(i + 1), prev, step.term, step.cited,
                            axioms, out);
      return out;
    }
    out.explanation.push_back({static_cast<int>(i + 1), std::move(*witnesses)});
    prev = step.term;
  }
  out.correct = true;
  return out;
}

// ---------------------------------------------------------------------------
// Recovery of elided equations: one justifying set per step (minimum
// cardinality, lexicographic ties) or the empty marker when provably none
// exists. Verification of a candidate set is independent of recovery.

inline std::vector<std::vector<std::string>>
recover_equations(const std::vector<Equation>& axioms, const EqProof& proof) {
  std::vector<std::vector<std::string>> out;
  Term prev = proof.start;
  for (const EqStep& step : proof.steps) {
    auto s = min_justifying_set(prev, step.term, axioms);
    out.push_back(s.value_or(std::vector<std::string>{}));
    prev = step.term;
  }
  return out;
}

// A step answer is correct iff a nonempty set justifies the step under
// ==>_S, or the empty set is given and no subset of the axioms justifies it.
inline bool verify_recovery_answer(const std::vector<Equation>& axioms,
                                   const Term& s, const Term& t,
                                   const std::vector<std::string>& answer) {
  if (!answer.empty()) return multi_rewrite_check(s, t, axioms, answer).has_value();
  return !min_justifying_set(s, t, axioms).has_value();
}

// ---------------------------------------------------------------------------
// Gap filling.

inline constexpr std::size_t kGapCitationCap = 2;

enum class GapFillStatus {
  Accepted,
  RejectedEmptyButFillable,   // type 1
  RejectedSyntax,             // type 2 (reported by the parsing layer)
  RejectedType,               // type 3 (reported by the parsing layer)
  RejectedStep,               // type 4: some hop is not a valid rewrite
  RejectedNonEmptyUnfillable, // type 5
  CitationCapExceeded,
  Undecided,                  // unfillability could not be certified
};

enum class GapReachability { Fillable, Unfillable, Undecided };

struct GapFillReport {
  GapFillStatus status;
  bool accepted = false;
  int failing_step = 0;  // 1-based index into the candidate steps; 0 = final hop
  std::string detail;
};

// Reachability: does some chain s' <=>* u exist with u <=>_{post.cited}
// post.term? Certified by an introduced-symbol argument where possible, and
// by exhaustive bidirectional closure search within the node budget
// otherwise.
inline GapReachability gap_reachability(const std::vector<Equation>& axioms,
                                        const Term& pre_gap, const EqStep& post_gap,
                                        std::size_t node_budget = 20000) {
  std::set<std::string> allowed;
  collect_symbols(pre_gap, allowed);
  for (const Equation& e : axioms) {
    collect_symbols(e.lhs, allowed);
    collect_symbols(e.rhs, allowed);
  }
  std::set<std::string> target_syms;
  collect_symbols(post_gap.term, target_syms);
  bool disallowed = false;
  for (const auto& s : target_syms)
    if (!allowed.count(s)) disallowed = true;

  if (disallowed) {
    // the final hop would need a neighbour u of post_gap.term within the
    // allowed signature; if every neighbour keeps a disallowed symbol, no
    // chain can exist
    bool reachable_neighbour = false;
    std::vector<Equation> cited;
    for (const std::string& name : post_gap.cited)
      if (auto e = find_equation(axioms, name)) cited.push_back(*e);
    for (const Equation& e : cited) {
      // u ==> post.term is impossible (u would already carry the symbol);
      // consider post.term ==> u with the equation in either direction
      for (const Equation& dir : {e, Equation{e.name, e.rhs, e.lhs}}) {
        for (const auto& [p, u] : one_step_rewrites(post_gap.term, dir)) {
          std::set<std::string> us;
          collect_symbols(u, us);
          bool ok = true;
          for (const auto& s : us)
            if (!allowed.count(s)) ok = false;
          if (ok) reachable_neighbour = true;
        }
      }
    }
    if (!reachable_neighbour) return GapReachability::Unfillable;
  }

  // exhaustive bidirectional closure from the pre-gap term
  std::unordered_set<std::string> seen;
  std::deque<Term> frontier;
  frontier.push_back(pre_gap);
  seen.insert(print_term(pre_gap));
  std::size_t expanded = 0;
  while (!frontier.empty()) {
    if (seen.size() > node_budget) return GapReachability::Undecided;
    Term u = frontier.front();
    frontier.pop_front();
    ++expanded;
    if (bi_rewrite_check(u, post_gap.term, axioms, post_gap.cited))
      return GapReachability::Fillable;
    for (const Equation& e : axioms) {
      for (const Equation& dir : {e, Equation{e.name, e.rhs, e.lhs}}) {
        for (const auto& [p, v] : one_step_rewrites(u, dir)) {
          std::string key = print_term(v);
          if (seen.insert(key).second) frontier.push_back(v);
        }
      }
    }
  }
  return GapReachability::Unfillable;
}

inline GapFillReport verify_gap_fill(const std::vector<Equation>& axioms,
                                     const Term& pre_gap, const EqStep& post_gap,
                                     const std::vector<EqStep>& candidate,
                                     std::size_t max_cited = kGapCitationCap,
                                     std::size_t node_budget = 20000) {
  GapFillReport report{GapFillStatus::RejectedStep, false, 0, ""};
  if (candidate.empty()) {
    GapReachability r = gap_reachability(axioms, pre_gap, post_gap, node_budget);
    switch (r) {
      case GapReachability::Unfillable:
        report.status = GapFillStatus::Accepted;
        report.accepted = true;
        return report;
      case GapReachability::Fillable:
        report.status = GapFillStatus::RejectedEmptyButFillable;
        report.detail = "the gap can be filled";
        return report;
      case GapReachability::Undecided:
        report.status = GapFillStatus::Undecided;
        report.detail = "unfillability could not be certified within the budget";
        return report;
    }
  }
  Term cur = pre_gap;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    const EqStep& step = candidate[i];
    if (step.cited.size() > max_cited) {
      report.status = GapFillStatus::CitationCapExceeded;
      report.failing_step = static_cast<int>(i + 1);
      report.detail = "a step may not cite more than " + std::to_string(max_cited) +
                      " equations";
      return report;
    }
    if (!bi_rewrite_check(cur, step.term, axioms, step.cited)) {
      report.status = GapFillStatus::RejectedStep;
      report.failing_step = static_cast<int>(i + 1);
      report.detail = "the cited equations do not relate the consecutive terms";
      return report;
    }
    cur = step.term;
  }
  if (!bi_rewrite_check(cur, post_gap.term, axioms, post_gap.cited)) {
    report.status = GapFillStatus::RejectedStep;
    report.failing_step = 0;
    report.detail = "the final candidate term does not reach the post-gap step";
    return report;
  }
  report.status = GapFillStatus::Accepted;
  report.accepted = true;
  return report;
}

// ---------------------------------------------------------------------------
// Seeded corruption of a correct proof; the result provably fails at the
// recorded step with the recorded subtype.

enum class EqCorruptionMode { Contractum, Equation };

struct EqCorruption {
  EqProof corrupted;
  int step = 0;  // 1-based
  std::optional<EqContractumError> contractum_truth;
  std::optional<EqEquationError> equation_truth;
};

namespace detail {

inline std::vector<Position> constant_leaves(const Term& t) {
  std::vector<Position> out;
  for (const Position& p : positions(t))
    if (subterm(t, p).is_const()) out.push_back(p);
  return out;
}

}  // namespace detail

inline std::optional<EqCorruption> corrupt_eq_proof(const std::vector<Equation>& axioms,
                                                    const EqProof& proof,
                                                    EqCorruptionMode mode,
                                                    std::uint64_t seed) {
  EqCheckResult gold = check_eq_proof(axioms, proof);
  if (!gold.correct) return std::nullopt;
  std::mt19937_64 rng(seed);
  const std::vector<std::string> constants = {"a", "b", "c", "d", "e"};

  auto term_at = [&proof](int step) {  // 0 = start
    return step == 0 ? proof.start : proof.steps[static_cast<std::size_t>(step - 1)].term;
  };

  for (int attempt = 0; attempt < 200; ++attempt) {
    std::size_t i = rng() % proof.steps.size();  // corrupt step i+1
    const EqStepExplanation& expl = gold.explanation[i];
    if (mode == EqCorruptionMode::Contractum) {
      const RewriteWitness& w = expl.rewrites[rng() % expl.rewrites.size()];
      std::vector<Position> leaves = detail::constant_leaves(w.contractum);
      if (leaves.empty()) continue;
      Position leaf = leaves[rng() % leaves.size()];
      std::string old = subterm(w.contractum, leaf).name();
      std::string fresh = constants[rng() % constants.size()];
      if (fresh == old) continue;
      Term bad_contractum = replace(w.contractum, leaf, Term::constant(fresh));
      Term bad_term = replace(proof.steps[i].term, w.position, bad_contractum);
      // the step must now provably fail
      if (multi_rewrite_check(term_at(static_cast<int>(i)), bad_term, axioms,
                              proof.steps[i].cited))
        continue;
      EqCorruption out;
      out.corrupted = proof;
      out.corrupted.steps[i].term = bad_term;
      out.step = static_cast<int>(i + 1);
      out.contractum_truth = EqContractumError{
          out.step, w.equation, w.position, w.contractum, bad_contractum};
      return out;
    } else {
      if (proof.steps[i].cited.empty()) continue;
      std::size_t j = rng() % proof.steps[i].cited.size();
      std::vector<std::string> others;
      for (const Equation& e : axioms)
        if (std::find(proof.steps[i].cited.begin(), proof.steps[i].cited.end(),
                      e.name) == proof.steps[i].cited.end())
          others.push_back(e.name);
      if (others.empty()) continue;
      std::string replacement = others[rng() % others.size()];
      std::vector<std::string> bad_cited = proof.steps[i].cited;
      bad_cited[j] = replacement;
      if (multi_rewrite_check(term_at(static_cast<int>(i)), proof.steps[i].term,
                              axioms, bad_cited))
        continue;  // accidentally still valid; try again
      EqCorruption out;
      out.corrupted = proof;
      out.corrupted.steps[i].cited = bad_cited;
      out.step = static_cast<int>(i + 1);
      auto correct = min_justifying_set(term_at(static_cast<int>(i)),
                                        proof.steps[i].term, axioms);
      out.equation_truth = EqEquationError{
          out.step, bad_cited, correct.value_or(std::vector<std::string>{})};
      return out;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Textual problem format, as in the released listings:
//
//   - Axioms:            (or "- Equations:")
//   E1: lhs = rhs
//   ...
//   - Proof:
//   s = term0
//       term1   by E1
//       ??      ??
//       term3   by E2, E3
//
// `# ...` trailing comments are ignored. `??` marks a gap.

struct EqProblem {
  std::vector<Equation> axioms;
  Term start;
  struct Line {
    bool is_gap = false;
    Term term;
    std::vector<std::string> cited;
  };
  std::vector<Line> lines;

  // Convenience view when the problem has no gaps.
  EqProof proof() const {
    EqProof p;
    p.start = start;
    for (const Line& l : lines) {
      if (l.is_gap) throw TermError("proof contains a gap");
      p.steps.push_back({l.term, l.cited});
    }
    return p;
  }
};

inline EqProblem parse_eq_problem(const std::string& text) {
  EqProblem out;
  std::istringstream in(text);
  std::string raw;
  bool in_axioms = false, in_proof = false, have_start = false;
  auto strip = [](std::string s) {
    std::size_t h = s.find('#');
    if (h != std::string::npos) s = s.substr(0, h);
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, raw)) {
    std::string line = strip(raw);
    if (line.empty()) continue;
    if (line.rfind("- Axioms", 0) == 0 || line.rfind("- Equations", 0) == 0) {
      in_axioms = true;
      in_proof = false;
      continue;
    }
    if (line.rfind("- Proof", 0) == 0) {
      in_axioms = false;
      in_proof = true;
      continue;
    }
    if (in_axioms) {
      std::size_t colon = line.find(':');
      if (colon == std::string::npos)
        throw SyntaxError("expected 'NAME: lhs = rhs'", 0, ":");
      std::string name = strip(line.substr(0, colon));
      std::string rest = line.substr(colon + 1);
      std::size_t eq = rest.find('=');
      if (eq == std::string::npos) throw SyntaxError("missing '=' in equation", 0, "=");
      out.axioms.push_back({name, parse_term(strip(rest.substr(0, eq))),
                            parse_term(strip(rest.substr(eq + 1)))});
      continue;
    }
    if (!in_proof) continue;
    // first proof line: `s = term`
    if (!have_start) {
      std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw SyntaxError("expected 's = <term>' to open the proof", 0, "=");
      out.start = parse_term(strip(line.substr(eq + 1)));
      have_start = true;
      continue;
    }
    EqProblem::Line pl;
    if (line.rfind("??", 0) == 0) {
      pl.is_gap = true;
      out.lines.push_back(pl);
      continue;
    }
    std::size_t by = std::string::npos;
    for (std::size_t k = 0; k + 2 <= line.size(); ++k) {
      if ((line[k] == 'b' || line[k] == 'B') &&
          (line[k + 1] == 'y' || line[k + 1] == 'Y') &&
          (k + 2 == line.size() || line[k + 2] == ' ' || line[k + 2] == '\t') &&
          (k > 0 && (line[k - 1] == ' ' || line[k - 1] == '\t'))) {
        by = k;
        break;
      }
    }
    if (by == std::string::npos) {
      pl.term = parse_term(strip(line));
    } else {
      pl.term = parse_term(strip(line.substr(0, by)));
      std::string names = strip(line.substr(by + 2));
      std::size_t pos = 0;
      while (pos < names.size()) {
        std::size_t comma = names.find(',', pos);
        std::string name = strip(comma == std::string::npos
                                     ? names.substr(pos)
                                     : names.substr(pos, comma - pos));
        if (!name.empty()) pl.cited.push_back(name);
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    }
    out.lines.push_back(std::move(pl));
  }
  if (!have_start) throw SyntaxError("missing proof start", 0, "s = <term>");
  return out;
}

}  // namespace forge

#endif  // FORGE_EQ_HPP_
