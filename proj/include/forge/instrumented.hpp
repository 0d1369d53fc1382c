// Error-tolerant NDL evaluation: repairs minor syntactic deviations, overlooks
// a fixed sound equivalence of semantic slips, logs every intervention, and
// reports the first substantive failure.

#ifndef FORGE_INSTRUMENTED_HPP_
#define FORGE_INSTRUMENTED_HPP_

#include <sstream>
#include <string>
#include <vector>

#include "forge/ndl.hpp"

namespace forge {

// Logged correction categories. The commutativity string follows the archive
// record format verbatim.
inline constexpr const char* kOverlookCommutativity =
    "Overlooking a wrong conclusion that's equivalent up to conj/disj commutativity";
inline constexpr const char* kOverlookDoubleNegation =
    "Overlooking a wrong conclusion that's equivalent up to double negation";
inline constexpr const char* kOverlookDnAndCommutativity =
    "Overlooking a wrong conclusion that's equivalent up to double negation and "
    "conj/disj commutativity";
inline constexpr const char* kOverlookMembership =
    "Overlooking an assumption-base reference that's equivalent up to double "
    "negation or conj/disj commutativity";
inline constexpr const char* kOverlookFromFalseOnFalse =
    "Overlooking from-false applied to false instead of the target conclusion";

inline std::string overlook_rule_swap(const std::string& used, const std::string& meant) {
  return "Overlooking an application of " + used + " that should instead be " + meant;
}

struct SyntaxCorrection {
  int line = 0;
  std::string description;
};

struct StructuralCorrection {
  int step = 0;
  int line = 0;
  std::string description;
};

struct RepairLog {
  std::vector<SyntaxCorrection> syntax;
  std::vector<StructuralCorrection> structural;
};

enum class InstrumentedOutcome { Correct, Incorrect, Unknown };

inline const char* to_string(InstrumentedOutcome o) {
  switch (o) {
    case InstrumentedOutcome::Correct: return "correct";
    case InstrumentedOutcome::Incorrect: return "incorrect";
    case InstrumentedOutcome::Unknown: return "unknown";
  }
  return "?";
}

struct InstrumentedResult {
  InstrumentedOutcome result = InstrumentedOutcome::Incorrect;
  std::optional<NdlError> first_error;
  RepairLog repairs;
  bool strict_accepted = false;
  std::string strict_diagnostics;
  std::string repaired_text;
};

// ---------------------------------------------------------------------------
// The overlook equivalence: congruence closure of p == ~~p together with
// commutativity of & and | (associativity is NOT overlooked).

namespace detail {

inline Formula canon_dn(const Formula& f) {
  switch (f.kind()) {
    case Conn::Atom:
    case Conn::True:
    case Conn::False: return f;
    case Conn::Not:
      if (f.left().kind() == Conn::Not) return canon_dn(f.left().left());
      return Formula::neg(canon_dn(f.left()));
    case Conn::And: return Formula::conj(canon_dn(f.left()), canon_dn(f.right()));
    case Conn::Or: return Formula::disj(canon_dn(f.left()), canon_dn(f.right()));
    case Conn::Implies:
      return Formula::implies(canon_dn(f.left()), canon_dn(f.right()));
    case Conn::Iff: return Formula::iff(canon_dn(f.left()), canon_dn(f.right()));
  }
  return f;
}

inline Formula canon_comm(const Formula& f) {
  switch (f.kind()) {
    case Conn::Atom:
    case Conn::True:
    case Conn::False: return f;
    case Conn::Not: return Formula::neg(canon_comm(f.left()));
    case Conn::And: {
      Formula a = canon_comm(f.left()), b = canon_comm(f.right());
      return b < a ? Formula::conj(b, a) : Formula::conj(a, b);
    }
    case Conn::Or: {
      Formula a = canon_comm(f.left()), b = canon_comm(f.right());
      return b < a ? Formula::disj(b, a) : Formula::disj(a, b);
    }
    case Conn::Implies:
      return Formula::implies(canon_comm(f.left()), canon_comm(f.right()));
    case Conn::Iff: return Formula::iff(canon_comm(f.left()), canon_comm(f.right()));
  }
  return f;
}

}  // namespace detail

// Canonical form under the full overlook equivalence.
inline Formula overlook_canon(const Formula& f) {
  return detail::canon_comm(detail::canon_dn(f));
}

inline bool overlook_equal(const Formula& a, const Formula& b) {
  return overlook_canon(a) == overlook_canon(b);
}

// Which overlook category explains the (non-strict) equality.
inline const char* overlook_category(const Formula& a, const Formula& b) {
  if (detail::canon_dn(a) == detail::canon_dn(b)) return kOverlookDoubleNegation;
  if (detail::canon_comm(a) == detail::canon_comm(b)) return kOverlookCommutativity;
  return kOverlookDnAndCommutativity;
}

// ---------------------------------------------------------------------------
// Syntax repair. Text-to-text, line oriented, run to fixpoint; every edit is
// logged. Failures are deferred to evaluation.

struct RepairedText {
  std::string text;
  std::vector<SyntaxCorrection> corrections;
};

namespace detail {

inline std::string strip_comment(const std::string& line) {
  std::size_t h = line.find('#');
  return h == std::string::npos ? line : line.substr(0, h);
}

inline std::string rtrim(const std::string& s) {
  std::size_t b = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(0, b + 1);
}

inline bool ends_with_any(const std::string& s, std::initializer_list<const char*> sufs) {
  for (const char* suf : sufs) {
    std::size_t n = std::char_traits<char>::length(suf);
    if (s.size() >= n && s.compare(s.size() - n, n, suf) == 0) return true;
  }
  return false;
}

inline bool starts_with_any(const std::string& s, std::initializer_list<const char*> pres) {
  for (const char* pre : pres) {
    std::size_t n = std::char_traits<char>::length(pre);
    if (s.size() >= n && s.compare(0, n, pre) == 0) return true;
  }
  return false;
}

inline std::string ltrim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  return a == std::string::npos ? "" : s.substr(a);
}

struct RepairPass {
  const std::optional<std::set<std::string>>& universe;
  std::vector<SyntaxCorrection>& log;

  bool is_formula_token(const std::string& tok) const {
    if (tok == "true" || tok == "false") return true;
    return universe && universe->count(tok) > 0;
  }

  bool run(std::vector<std::string>& lines) {
    bool changed = false;
    changed |= brackets(lines);
    changed |= name_by_to_bind(lines);
    changed |= rebalance_parens(lines);
    changed |= semicolons(lines);
    changed |= braces(lines);
    return changed;
  }

  bool brackets(std::vector<std::string>& lines) {
    bool changed = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      std::string code = strip_comment(lines[i]);
      bool line_changed = false;
      for (std::size_t k = 0; k < code.size(); ++k) {
        if (code[k] == '[') { lines[i][k] = '('; line_changed = true; }
        if (code[k] == ']') { lines[i][k] = ')'; line_changed = true; }
      }
      if (line_changed) {
        log.push_back({static_cast<int>(i + 1), "replaced square brackets by parentheses"});
        changed = true;
      }
    }
    return changed;
  }

  // `name BY R on ...` -> `name := R on ...` when `name` is a bare identifier
  // that cannot be a formula.
  bool name_by_to_bind(std::vector<std::string>& lines) {
    bool changed = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      std::string code = strip_comment(lines[i]);
      std::size_t a = code.find_first_not_of(" \t");
      if (a == std::string::npos || !is_ident_start(code[a])) continue;
      std::size_t b = a;
      while (b < code.size() && is_ident_char(code[b])) ++b;
      std::string tok = code.substr(a, b - a);
      std::size_t c = code.find_first_not_of(" \t", b);
      if (c == std::string::npos) continue;
      // must be followed by BY/by
      if (code.compare(c, 2, "BY") != 0 && code.compare(c, 2, "by") != 0) continue;
      std::size_t d = c + 2;
      if (d < code.size() && is_ident_char(code[d])) continue;  // e.g. `byproduct`
      if (tok == "assume" || tok == "assert" || is_formula_token(tok)) continue;
      lines[i] = lines[i].substr(0, c) + ":=" + lines[i].substr(d);
      log.push_back({static_cast<int>(i + 1),
                     "rewrote '" + tok + " BY' into '" + tok + " :='"});
      changed = true;
    }
    return changed;
  }

  bool rebalance_parens(std::vector<std::string>& lines) {
    bool changed = false;
    // a globally balanced text only looks unbalanced per line when formulas
    // span lines; leave those to the parser
    int global = 0;
    for (const auto& l : lines)
      for (char ch : strip_comment(l)) {
        if (ch == '(') ++global;
        if (ch == ')') --global;
      }
    if (global == 0) return false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      std::string code = rtrim(strip_comment(lines[i]));
      if (code.empty()) continue;
      int bal = 0;
      for (char ch : code) {
        if (ch == '(') ++bal;
        if (ch == ')') --bal;
      }
      if (bal == 0) continue;
      std::string trailer;
      std::string body = code;
      if (ends_with_any(body, {";"})) {
        trailer = ";";
        body = rtrim(body.substr(0, body.size() - 1));
      }
      if (bal > 0) {
        body.append(static_cast<std::size_t>(bal), ')');
        log.push_back({static_cast<int>(i + 1),
                       "appended " + std::to_string(bal) + " missing ')'"});
      } else {
        int extra = -bal;
        while (extra > 0 && !body.empty() && body.back() == ')') {
          body.pop_back();
          --extra;
        }
        if (extra > 0) continue;  // not a trailing imbalance; leave to the parser
        log.push_back({static_cast<int>(i + 1),
                       "removed " + std::to_string(-bal) + " extra ')'"});
      }
      lines[i] = body + trailer;
      changed = true;
    }
    return changed;
  }

  bool semicolons(std::vector<std::string>& lines) {
    bool changed = false;
    // collapse repeated semicolons
    for (std::size_t i = 0; i < lines.size(); ++i) {
      std::string code = strip_comment(lines[i]);
      std::size_t pos;
      bool line_changed = false;
      while ((pos = code.find(";;")) != std::string::npos) {
        code.erase(pos, 1);
        lines[i].erase(lines[i].find(";;"), 1);
        line_changed = true;
      }
      if (line_changed) {
        log.push_back({static_cast<int>(i + 1), "removed extra semicolon"});
        changed = true;
      }
    }
    // insert missing separators between adjacent steps
    std::vector<std::size_t> code_lines;
    for (std::size_t i = 0; i < lines.size(); ++i)
      if (!rtrim(strip_comment(lines[i])).empty()) code_lines.push_back(i);
    for (std::size_t k = 0; k + 1 < code_lines.size(); ++k) {
      std::size_t i = code_lines[k];
      std::string code = rtrim(strip_comment(lines[i]));
      std::string next = ltrim(strip_comment(lines[code_lines[k + 1]]));
      if (ends_with_any(code, {";", "{", ",", ":=", "(", "&", "|", "~", "==>", "<==>"}))
        continue;
      if (starts_with_any(next, {"}", ")", ",", "&", "|", "==>", "<==>"})) continue;
      if (starts_with_any(next, {"BY ", "by ", "on ", "BY(", "by(", "on("})) continue;
      // `assume p {` openings span two lines in some model outputs
      if (next == "{" || starts_with_any(next, {"{", ":="})) continue;
      std::size_t cut = lines[i].find('#');
      std::string head = rtrim(lines[i].substr(0, cut == std::string::npos
                                                      ? lines[i].size()
                                                      : cut));
      std::string tail = cut == std::string::npos ? "" : " " + lines[i].substr(cut);
      lines[i] = head + ";" + tail;
      log.push_back({static_cast<int>(i + 1), "inserted missing ';'"});
      changed = true;
    }
    return changed;
  }

  bool braces(std::vector<std::string>& lines) {
    int bal = 0;
    for (const auto& l : lines) {
      std::string code = strip_comment(l);
      for (char ch : code) {
        if (ch == '{') ++bal;
        if (ch == '}') --bal;
      }
    }
    if (bal > 0) {
      for (int k = 0; k < bal; ++k) lines.push_back("}");
      log.push_back({static_cast<int>(lines.size()),
                     "appended " + std::to_string(bal) + " missing '}'"});
      return true;
    }
    if (bal < 0) {
      int extra = -bal;
      for (std::size_t i = lines.size(); i-- > 0 && extra > 0;) {
        std::string code = rtrim(strip_comment(lines[i]));
        while (extra > 0 && !code.empty() && code.back() == '}') {
          code.pop_back();
          code = rtrim(code);
          --extra;
          std::size_t cut = lines[i].rfind('}');
          lines[i].erase(cut, 1);
          log.push_back({static_cast<int>(i + 1), "removed extra '}'"});
        }
        if (!code.empty()) break;
      }
      return true;
    }
    return false;
  }
};

}  // namespace detail

inline RepairedText repair_syntax(
    const std::string& text,
    const std::optional<std::set<std::string>>& atom_universe = std::nullopt) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  RepairedText out;
  detail::RepairPass pass{atom_universe, out.corrections};
  for (int iter = 0; iter < 8; ++iter)
    if (!pass.run(lines)) break;
  std::string joined;
  for (const auto& l : lines) {
    joined += l;
    joined += '\n';
  }
  out.text = std::move(joined);
  return out;
}

// ---------------------------------------------------------------------------
// Relaxed evaluation.

namespace detail {

inline const std::unordered_map<std::string, std::string>& swap_partners() {
  static const std::unordered_map<std::string, std::string> m = {
      {"left-and", "right-and"},   {"right-and", "left-and"},
      {"left-either", "right-either"}, {"right-either", "left-either"},
      {"left-iff", "right-iff"},   {"right-iff", "left-iff"},
  };
  return m;
}

// Assumption base with overlook-equivalence lookup.
class CanonBase {
public:
  void insert(const Formula& f) {
    exact_.emplace(f, 1);
    canon_.emplace(overlook_canon(f), 1);
  }
  bool contains_exact(const Formula& f) const { return exact_.count(f) > 0; }
  bool contains_canon(const Formula& f) const {
    return canon_.count(overlook_canon(f)) > 0;
  }

private:
  FormulaSet exact_, canon_;
};

struct InstrumentedEvaluator {
  NdlEvalOptions opts;
  RepairLog* log;
  int step_counter = 0;

  NdlEvaluator resolver() const { return NdlEvaluator{opts}; }

  // Membership with overlook; logs when only the relaxed lookup succeeds.
  bool member(const Formula& f, const CanonBase& base, int step, int line) {
    if (base.contains_exact(f)) return true;
    if (base.contains_canon(f)) {
      log->structural.push_back({step, line, kOverlookMembership});
      return true;
    }
    return false;
  }

  struct Applied {
    std::optional<Formula> conclusion;
    std::optional<NdlError> error;
  };

  // Rule application with relaxed membership. Shape errors are final here;
  // swap retries happen at the annotation level.
  Applied apply(const std::string& rule, const std::vector<Formula>& args,
                const CanonBase& base, int step, int line, int column) {
    const auto& catalog = rule_catalog();
    auto it = catalog.find(rule);
    if (it == catalog.end()) {
      NdlError e = malformed(rule, args, "unknown inference rule '" + rule + "'");
      e.step = step;
      e.line = line;
      e.column = column;
      return {std::nullopt, e};
    }
    const RuleSpec& spec = it->second;
    if (static_cast<int>(args.size()) != spec.arity) {
      NdlError e = malformed(rule, args,
                             rule + " takes " + std::to_string(spec.arity) +
                                 " argument(s), got " + std::to_string(args.size()));
      e.step = step;
      e.line = line;
      e.column = column;
      return {std::nullopt, e};
    }
    RuleOutcome shaped = spec.conclude(args);
    if (shaped.error) {
      shaped.error->step = step;
      shaped.error->line = line;
      shaped.error->column = column;
      return {std::nullopt, shaped.error};
    }
    for (int i : spec.membership)
      if (!member(args[i], base, step, line)) {
        NdlError e = not_in_ab(rule, args[i]);
        e.step = step;
        e.line = line;
        e.column = column;
        return {std::nullopt, e};
      }
    for (const Formula& f : spec.extra_membership)
      if (!member(f, base, step, line)) {
        NdlError e = not_in_ab(rule, f);
        e.step = step;
        e.line = line;
        e.column = column;
        return {std::nullopt, e};
      }
    return {shaped.conclusion, std::nullopt};
  }

  struct EvalResult {
    std::optional<Formula> conclusion;
    std::optional<NdlError> error;
  };

  EvalResult eval(const NdlProof& p, const CanonBase& base, Environment env) {
    switch (p.kind) {
      case NdlProof::Kind::RuleApp:
        return eval_rule(p, base, env, std::nullopt);
      case NdlProof::Kind::ByAnnotated:
        return eval_annotated(p, base, env);
      case NdlProof::Kind::Assume: {
        int step = ++step_counter;
        auto r = resolver().resolve_formula(p.hypothesis->formula, env, p.line,
                                            p.column, step);
        if (r.error) {
          NdlError e = *r.error;
          e.kind = NdlErrorKind::MalformedAssumption;
          e.detail = "hypothesis is not a valid formula: " + e.detail;
          return {std::nullopt, e};
        }
        CanonBase inner = base;
        inner.insert(*r.formula);
        Environment scoped = env;
        if (p.hyp_name) scoped.bind(*p.hyp_name, *r.formula);
        EvalResult body = eval(*p.body, inner, scoped);
        if (body.error) return body;
        return {Formula::implies(*r.formula, *body.conclusion), std::nullopt};
      }
      case NdlProof::Kind::Compose: {
        CanonBase cur = base;
        Environment scoped = std::move(env);
        std::optional<Formula> last;
        for (const NdlStep& s : p.steps) {
          EvalResult v = eval(*s.proof, cur, scoped);
          if (v.error) return v;
          cur.insert(*v.conclusion);
          if (s.name) scoped.bind(*s.name, *v.conclusion);
          last = v.conclusion;
        }
        return {last, std::nullopt};
      }
    }
    NdlError e;
    e.kind = NdlErrorKind::Parsing;
    e.detail = "corrupt proof node";
    return {std::nullopt, e};
  }

private:
  EvalResult eval_rule(const NdlProof& p, const CanonBase& base, Environment env,
                       std::optional<Formula> claimed) {
    int step = ++step_counter;
    std::vector<Formula> args;
    args.reserve(p.args.size());
    for (const NdlArg& a : p.args) {
      auto r = resolver().resolve(a, env, p.line, p.column, step);
      if (r.error) return {std::nullopt, *r.error};
      args.push_back(*r.formula);
    }

    // `p BY from-false on false`: reinterpret the argument as the advertised
    // conclusion.
    if (claimed && p.rule == "from-false" && args.size() == 1 &&
        overlook_canon(args[0]).kind() == Conn::False &&
        overlook_canon(*claimed).kind() != Conn::False) {
      log->structural.push_back({step, p.line, kOverlookFromFalseOnFalse});
      args[0] = *claimed;
    }

    Applied first = apply(p.rule, args, base, step, p.line, p.column);
    if (!first.error && (!claimed || *first.conclusion == *claimed))
      return {first.conclusion, std::nullopt};
    if (!first.error && claimed && overlook_equal(*first.conclusion, *claimed)) {
      log->structural.push_back(
          {step, p.line, overlook_category(*first.conclusion, *claimed)});
      return {*claimed, std::nullopt};
    }

    // Swap retry: the advertised conclusion may match the partner rule.
    auto partner = swap_partners().find(p.rule);
    if (claimed && partner != swap_partners().end()) {
      Applied second = apply(partner->second, args, base, step, p.line, p.column);
      if (!second.error) {
        if (*second.conclusion == *claimed) {
          log->structural.push_back(
              {step, p.line, overlook_rule_swap(p.rule, partner->second)});
          return {*claimed, std::nullopt};
        }
        if (overlook_equal(*second.conclusion, *claimed)) {
          log->structural.push_back(
              {step, p.line, overlook_rule_swap(p.rule, partner->second)});
          log->structural.push_back(
              {step, p.line, overlook_category(*second.conclusion, *claimed)});
          return {*claimed, std::nullopt};
        }
      }
    }

    if (first.error) return {std::nullopt, *first.error};

    NdlError e;
    e.kind = NdlErrorKind::WrongConclusion;
    e.line = p.line;
    e.column = p.column;
    e.step = step;
    e.rule = p.rule;
    e.expected = claimed;
    e.actual = first.conclusion;
    e.detail = "annotation claims " + print_formula(*claimed) +
               " but the application derives " + print_formula(*first.conclusion);
    return {std::nullopt, e};
  }

  EvalResult eval_annotated(const NdlProof& p, const CanonBase& base,
                            Environment env) {
    auto claim =
        resolver().resolve_formula(p.claimed, env, p.line, p.column, step_counter + 1);
    if (claim.error) return {std::nullopt, *claim.error};

    if (p.inner->kind == NdlProof::Kind::RuleApp) {
      NdlProof inner = *p.inner;
      inner.line = p.line;
      inner.column = p.column;
      return eval_rule(inner, base, env, claim.formula);
    }

    EvalResult inner = eval(*p.inner, base, std::move(env));
    if (inner.error) return inner;
    if (*inner.conclusion == *claim.formula) return inner;
    if (overlook_equal(*inner.conclusion, *claim.formula)) {
      log->structural.push_back({step_counter, p.line,
                                 overlook_category(*inner.conclusion, *claim.formula)});
      return {*claim.formula, std::nullopt};
    }
    NdlError e;
    e.kind = NdlErrorKind::WrongConclusion;
    e.line = p.line;
    e.column = p.column;
    e.step = step_counter;
    e.expected = *claim.formula;
    e.actual = inner.conclusion;
    e.detail = "annotation claims " + print_formula(*claim.formula) +
               " but the proof derives " + print_formula(*inner.conclusion);
    return {std::nullopt, e};
  }
};

}  // namespace detail

struct InstrumentedOptions {
  std::size_t atom_budget = kDefaultAtomBudget;
  // Cross-check accepted proofs against the entailment oracle when feasible;
  // infeasible problems yield an `unknown` verdict.
  bool oracle_check = true;
};

inline InstrumentedResult
instrumented_eval(const std::vector<std::pair<std::string, Formula>>& premises,
                  const Formula& goal, const std::string& proof_text,
                  const InstrumentedOptions& options = {}) {
  InstrumentedResult res;

  // Strict pass on the raw text.
  CheckReport strict = check_argument(premises, goal, proof_text);
  res.strict_accepted = strict.ok();
  if (!strict.ok() && strict.error) {
    std::ostringstream diag;
    diag << "line " << strict.error->line << ": " << to_string(strict.error->kind)
         << ": " << strict.error->detail;
    res.strict_diagnostics = diag.str();
  }

  std::set<std::string> universe;
  for (const auto& [_, f] : premises) collect_atoms(f, universe);
  collect_atoms(goal, universe);

  // Syntax repair to fixpoint, then parse.
  RepairedText repaired = repair_syntax(proof_text, universe);
  res.repairs.syntax = repaired.corrections;
  res.repaired_text = repaired.text;

  NdlProgram prog;
  try {
    prog = parse_ndl_program(repaired.text);
  } catch (const SyntaxError& ex) {
    NdlError e;
    e.kind = NdlErrorKind::Parsing;
    detail::ProofLexer lx(repaired.text);
    auto [line, col] = lx.line_col(ex.offset());
    e.line = line;
    e.column = col;
    e.detail = ex.what();
    res.result = InstrumentedOutcome::Incorrect;
    res.first_error = e;
    return res;
  }

  detail::CanonBase base;
  Environment env;
  for (const auto& [name, f] : premises) {
    base.insert(f);
    env.bind(name, f);
  }
  for (const auto& [name, f] : prog.asserts) {
    base.insert(f);
    env.bind(name, f);
    collect_atoms(f, universe);
  }

  NdlEvalOptions opts;
  opts.atom_universe = universe;
  detail::InstrumentedEvaluator ev{opts, &res.repairs};
  auto out = ev.eval(*prog.main, base, env);
  if (out.error) {
    res.result = InstrumentedOutcome::Incorrect;
    res.first_error = out.error;
    return res;
  }

  if (*out.conclusion != goal) {
    if (overlook_equal(*out.conclusion, goal)) {
      res.repairs.structural.push_back(
          {0, 0, overlook_category(*out.conclusion, goal)});
    } else {
      NdlError e;
      e.kind = NdlErrorKind::WrongConclusion;
      e.line = 0;
      e.step = 0;
      e.expected = goal;
      e.actual = out.conclusion;
      e.detail = "proof derives " + print_formula(*out.conclusion) +
                 " but the goal is " + print_formula(goal);
      res.result = InstrumentedOutcome::Incorrect;
      res.first_error = e;
      return res;
    }
  }

  // Soundness cross-check against the oracle; strictly accepted proofs are
  // sound by the interpreter semantics and keep their verdict even when the
  // problem exceeds the oracle budget.
  if (options.oracle_check && !res.strict_accepted) {
    std::vector<Formula> prem;
    for (const auto& [_, f] : premises) prem.push_back(f);
    for (const auto& [_, f] : prog.asserts) prem.push_back(f);
    try {
      if (!entails(prem, goal, options.atom_budget)) {
        // An accepted proof of a non-entailed goal would be a soundness bug.
        NdlError e;
        e.kind = NdlErrorKind::WrongConclusion;
        e.detail = "internal: accepted conclusion is not entailed";
        res.result = InstrumentedOutcome::Incorrect;
        res.first_error = e;
        return res;
      }
    } catch (const AtomBudgetExceeded&) {
      res.result = InstrumentedOutcome::Unknown;
      return res;
    }
  }

  res.result = InstrumentedOutcome::Correct;
  return res;
}

// ---------------------------------------------------------------------------
// Scoring a proof-checking response against the instrumented gold result.

struct PcResponse {
  bool well_formed = true;      // ill-formed reports are formatting errors
  bool says_correct = false;
  std::optional<int> offending_line;   // 0 = whole-proof level
  std::optional<std::string> error_type;  // "syntax" | "type" | "logic"
};

inline bool score_pc_response(const InstrumentedResult& gold, const PcResponse& model) {
  if (!model.well_formed) return false;
  const bool gold_clean = gold.result == InstrumentedOutcome::Correct &&
                          gold.repairs.structural.empty();
  if (model.says_correct) {
    // Positive verdicts earn the point only when the checker agrees modulo
    // syntax-only repairs.
    return gold_clean;
  }
  if (gold.result == InstrumentedOutcome::Incorrect && gold.first_error) {
    if (!model.offending_line || *model.offending_line != gold.first_error->line)
      return false;
    if (model.error_type &&
        *model.error_type != to_string(classify(gold.first_error->kind)))
      return false;
    return model.error_type.has_value();
  }
  if (gold.result == InstrumentedOutcome::Correct &&
      !gold.repairs.structural.empty()) {
    // Correct only after structural/semantic repairs: the first repaired spot
    // must coincide with the reported error.
    const StructuralCorrection& first = gold.repairs.structural.front();
    return model.offending_line && *model.offending_line == first.line;
  }
  return false;
}

}  // namespace forge

#endif  // FORGE_INSTRUMENTED_HPP_
