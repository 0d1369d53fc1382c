// NDL: natural-deduction proofs with an assumption-base semantics. Parser,
// rule catalog, evaluator, and whole-argument checking.

#ifndef FORGE_NDL_HPP_
#define FORGE_NDL_HPP_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "forge/formula.hpp"

namespace forge {

// ---------------------------------------------------------------------------
// Errors and verdicts.

enum class NdlErrorKind {
  Parsing,
  NotInAB,
  MalformedRuleApp,
  MalformedAssumption,
  WrongConclusion,
  UnboundIdentifier,
};

inline const char* to_string(NdlErrorKind k) {
  switch (k) {
    case NdlErrorKind::Parsing: return "parsing";
    case NdlErrorKind::NotInAB: return "notInAB";
    case NdlErrorKind::MalformedRuleApp: return "malformedRuleApp";
    case NdlErrorKind::MalformedAssumption: return "malformedAssumption";
    case NdlErrorKind::WrongConclusion: return "wrongConclusion";
    case NdlErrorKind::UnboundIdentifier: return "unboundIdentifier";
  }
  return "?";
}

// One of the paper's three coarse error classes, used by proof-checking tasks.
enum class NdlErrorClass { Syntax, Type, Logic };

inline NdlErrorClass classify(NdlErrorKind k) {
  switch (k) {
    case NdlErrorKind::Parsing: return NdlErrorClass::Syntax;
    case NdlErrorKind::MalformedRuleApp:
    case NdlErrorKind::MalformedAssumption: return NdlErrorClass::Type;
    default: return NdlErrorClass::Logic;
  }
}

inline const char* to_string(NdlErrorClass c) {
  switch (c) {
    case NdlErrorClass::Syntax: return "syntax";
    case NdlErrorClass::Type: return "type";
    case NdlErrorClass::Logic: return "logic";
  }
  return "?";
}

struct NdlError {
  NdlErrorKind kind;
  int line = 0;      // source line, 1-based; 0 = whole-proof level
  int column = 0;
  int step = 0;      // step ordinal in textual order, 1-based; 0 = whole proof
  std::string detail;
  std::optional<std::string> rule;
  std::vector<Formula> offending;     // evaluated arguments, when applicable
  std::optional<Formula> missing;     // NotInAB: the absent formula
  std::optional<Formula> expected;    // WrongConclusion
  std::optional<Formula> actual;
};

struct NdlVerdict {
  std::optional<Formula> conclusion;
  std::optional<NdlError> error;
  bool ok() const { return conclusion.has_value(); }

  static NdlVerdict success(Formula f) { return {std::move(f), std::nullopt}; }
  static NdlVerdict failure(NdlError e) { return {std::nullopt, std::move(e)}; }
};

// ---------------------------------------------------------------------------
// Assumption base and lexical environment. Evaluation-local values.

class AssumptionBase {
public:
  AssumptionBase() = default;
  explicit AssumptionBase(const std::vector<Formula>& fs) {
    for (const auto& f : fs) insert(f);
  }
  void insert(const Formula& f) { set_.emplace(f, 1); }
  bool contains(const Formula& f) const { return set_.count(f) > 0; }
  std::size_t size() const { return set_.size(); }
  std::vector<Formula> formulas() const {
    std::vector<Formula> out;
    out.reserve(set_.size());
    for (const auto& [f, _] : set_) out.push_back(f);
    std::sort(out.begin(), out.end());
    return out;
  }

private:
  FormulaSet set_;
};

class Environment {
public:
  Environment() = default;
  void bind(const std::string& name, const Formula& f) { map_[name] = f; }
  std::optional<Formula> lookup(const std::string& name) const {
    auto it = map_.find(name);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

private:
  std::unordered_map<std::string, Formula> map_;
};

// ---------------------------------------------------------------------------
// Proof AST. A bare identifier in argument or hypothesis position stays
// unresolved until evaluation (it may name a premise or a lemma, or denote a
// problem atom).

struct NdlProof;
using NdlProofPtr = std::shared_ptr<const NdlProof>;

struct NdlArg {
  std::optional<std::string> ident;  // set when the source was a bare identifier
  Formula formula;                   // the identifier parsed as an atom otherwise
  bool is_ident() const { return ident.has_value(); }
};

struct NdlStep {
  std::optional<std::string> name;  // `name := D`
  NdlProofPtr proof;
};

struct NdlProof {
  enum class Kind { RuleApp, Assume, Compose, ByAnnotated } kind;
  int line = 0, column = 0;

  // RuleApp
  std::string rule;
  std::vector<NdlArg> args;

  // Assume
  std::optional<std::string> hyp_name;  // `assume I := p { ... }`
  std::optional<NdlArg> hypothesis;
  NdlProofPtr body;

  // Compose
  std::vector<NdlStep> steps;

  // ByAnnotated
  Formula claimed;
  NdlProofPtr inner;
};

struct NdlProgram {
  std::vector<std::pair<std::string, Formula>> asserts;
  std::optional<Formula> goal;  // from a `# Goal:` comment when present
  NdlProofPtr main;
};

// ---------------------------------------------------------------------------
// Tokenizer shared by the NDL and NDL0 parsers.

namespace detail {

struct Token {
  enum class Kind {
    Ident, LBrace, RBrace, LParen, Semi, Assign, Comma, FormulaOp, End
  } kind;
  std::string text;
  std::size_t offset = 0;
  int line = 1, column = 1;
};

class ProofLexer {
public:
  explicit ProofLexer(std::string text) : text_(std::move(text)) {
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < text_.size(); ++i)
      if (text_[i] == '\n') line_starts_.push_back(i + 1);
    advance();
  }

  const Token& peek() const { return cur_; }
  Token next() {
    Token t = cur_;
    advance();
    return t;
  }
  const std::string& text() const { return text_; }
  std::size_t pos() const { return pos_; }

  // Re-synchronize after a FormulaScanner consumed input directly.
  void reset_to(std::size_t pos) {
    pos_ = pos;
    advance();
  }

  // Line/column of an arbitrary offset (1-based).
  std::pair<int, int> line_col(std::size_t offset) const {
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
    return {static_cast<int>(line),
            static_cast<int>(offset - line_starts_[line - 1] + 1)};
  }

private:
  std::string text_;
  std::vector<std::size_t> line_starts_;
  std::size_t pos_ = 0;
  Token cur_;

  void advance() {
    skip_ws();
    Token t;
    t.offset = pos_;
    auto [l, c] = line_col(pos_);
    t.line = l;
    t.column = c;
    if (pos_ >= text_.size()) {
      t.kind = Token::Kind::End;
      cur_ = t;
      return;
    }
    char ch = text_[pos_];
    if (ch == '{') { t.kind = Token::Kind::LBrace; t.text = "{"; ++pos_; }
    else if (ch == '}') { t.kind = Token::Kind::RBrace; t.text = "}"; ++pos_; }
    else if (ch == '(') { t.kind = Token::Kind::LParen; t.text = "("; ++pos_; }
    else if (ch == ';') { t.kind = Token::Kind::Semi; t.text = ";"; ++pos_; }
    else if (ch == ',') { t.kind = Token::Kind::Comma; t.text = ","; ++pos_; }
    else if (text_.compare(pos_, 2, ":=") == 0) {
      t.kind = Token::Kind::Assign; t.text = ":="; pos_ += 2;
    } else if (ch == '~' || ch == '&' || ch == '|' || ch == '<' || ch == '=' || ch == ')') {
      t.kind = Token::Kind::FormulaOp;
      t.text = std::string(1, ch);
      // do not consume; the FormulaScanner owns operator parsing
    } else if (is_ident_start(ch)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      t.kind = Token::Kind::Ident;
      t.text = text_.substr(start, pos_ - start);
    } else {
      throw SyntaxError(std::string("unexpected character '") + ch + "'", pos_);
    }
    cur_ = t;
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos_;
      } else {
        break;
      }
    }
  }
};

inline bool ieq(const std::string& a, const char* b) {
  std::size_t n = std::char_traits<char>::length(b);
  if (a.size() != n) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) != b[i]) return false;
  return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Parser.

namespace detail {

class NdlParser {
public:
  explicit NdlParser(std::string text) : lex_(std::move(text)) {}

  NdlProgram parse_program() {
    NdlProgram prog;
    prog.goal = scan_goal_comment(lex_.text());
    while (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "assert") {
      lex_.next();
      Token name = expect_ident("premise name");
      expect(Token::Kind::Assign, ":=");
      prog.asserts.emplace_back(name.text, parse_formula_here());
      if (lex_.peek().kind == Token::Kind::Semi) lex_.next();
    }
    prog.main = parse_proof();
    if (lex_.peek().kind != Token::Kind::End)
      throw SyntaxError("trailing input after proof", lex_.peek().offset, "end of input");
    return prog;
  }

  NdlProofPtr parse_proof() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::LBrace) return parse_compose();
    if (t.kind == Token::Kind::Ident && t.text == "assume") return parse_assume();
    return parse_step_core();
  }

private:
  ProofLexer lex_;

  static std::optional<Formula> scan_goal_comment(const std::string& text) {
    std::size_t pos = 0;
    while ((pos = text.find('#', pos)) != std::string::npos) {
      std::size_t eol = text.find('\n', pos);
      std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos
                                                                   : eol - pos);
      std::size_t g = line.find("Goal:");
      if (g != std::string::npos) {
        std::string rest = line.substr(g + 5);
        // strip leading "Prove"
        std::size_t s = rest.find_first_not_of(" \t");
        if (s != std::string::npos && rest.compare(s, 5, "Prove") == 0 &&
            (s + 5 >= rest.size() || !is_ident_char(rest[s + 5])))
          rest = rest.substr(s + 5);
        try {
          return parse_formula(trim(rest));
        } catch (const SyntaxError&) {
          return std::nullopt;
        }
      }
      pos = eol == std::string::npos ? text.size() : eol;
    }
    return std::nullopt;
  }

  static std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  }

  Token expect_ident(const char* what) {
    if (lex_.peek().kind != Token::Kind::Ident)
      throw SyntaxError(std::string("expected ") + what, lex_.peek().offset, what);
    return lex_.next();
  }

  void expect(Token::Kind k, const char* what) {
    if (lex_.peek().kind != k)
      throw SyntaxError(std::string("expected '") + what + "'", lex_.peek().offset, what);
    lex_.next();
  }

  Formula parse_formula_here() {
    FormulaScanner fs(lex_.text(), lex_.peek().offset);
    Formula f = fs.parse_formula();
    lex_.reset_to(fs.pos());
    return f;
  }

  // A formula that may be a single bare identifier; reports which.
  NdlArg parse_arg() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Ident) {
      // Lone identifier unless an operator follows (then it is a formula).
      std::size_t save = t.offset;
      Token id = lex_.next();
      const Token& after = lex_.peek();
      bool formula_continues =
          after.kind == Token::Kind::FormulaOp && after.text != ")";
      if (!formula_continues) {
        NdlArg a;
        if (id.text == "true") a.formula = Formula::t();
        else if (id.text == "false") a.formula = Formula::f();
        else { a.ident = id.text; a.formula = Formula::atom(id.text); }
        return a;
      }
      FormulaScanner fs(lex_.text(), save);
      Formula f = fs.parse_formula();
      lex_.reset_to(fs.pos());
      return NdlArg{std::nullopt, f};
    }
    return NdlArg{std::nullopt, parse_formula_here()};
  }

  NdlProofPtr parse_compose() {
    Token open = lex_.next();  // '{'
    auto node = std::make_shared<NdlProof>();
    node->kind = NdlProof::Kind::Compose;
    node->line = open.line;
    node->column = open.column;
    while (true) {
      if (lex_.peek().kind == Token::Kind::RBrace) break;
      node->steps.push_back(parse_named_step());
      if (lex_.peek().kind == Token::Kind::Semi) {
        lex_.next();
        if (lex_.peek().kind == Token::Kind::Semi)
          throw SyntaxError("extra semicolon", lex_.peek().offset, "proof step or '}'");
      } else if (lex_.peek().kind != Token::Kind::RBrace) {
        throw SyntaxError("expected ';' or '}' after proof step",
                          lex_.peek().offset, "';' or '}'");
      }
    }
    if (node->steps.empty())
      throw SyntaxError("empty proof body", open.offset, "proof step");
    lex_.next();  // '}'
    return node;
  }

  NdlStep parse_named_step() {
    NdlStep step;
    if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text != "assume") {
      // lookahead for `name :=`
      ProofLexer probe = lex_;
      Token id = probe.next();
      if (probe.peek().kind == Token::Kind::Assign) {
        lex_.next();
        lex_.next();
        step.name = id.text;
      }
    }
    step.proof = parse_proof();
    return step;
  }

  NdlProofPtr parse_assume() {
    Token kw = lex_.next();  // 'assume'
    auto node = std::make_shared<NdlProof>();
    node->kind = NdlProof::Kind::Assume;
    node->line = kw.line;
    node->column = kw.column;
    // `assume I := p` vs `assume p`
    if (lex_.peek().kind == Token::Kind::Ident) {
      ProofLexer probe = lex_;
      Token id = probe.next();
      if (probe.peek().kind == Token::Kind::Assign) {
        lex_.next();
        lex_.next();
        node->hyp_name = id.text;
        node->hypothesis = NdlArg{std::nullopt, parse_formula_here()};
        node->body = parse_proof();
        return node;
      }
    }
    node->hypothesis = parse_arg();
    node->body = parse_proof();
    return node;
  }

  // A step that is not a compose/assume: `p BY D`, or a rule application.
  NdlProofPtr parse_step_core() {
    Token start = lex_.peek();
    if (start.kind != Token::Kind::Ident && start.kind != Token::Kind::LParen &&
        !(start.kind == Token::Kind::FormulaOp && start.text == "~"))
      throw SyntaxError("expected a proof step", start.offset,
                        "formula, rule application, '{' or 'assume'");

    // Try: IDENT 'on' ...  (rule application without annotation)
    if (start.kind == Token::Kind::Ident) {
      ProofLexer probe = lex_;
      Token id = probe.next();
      if (probe.peek().kind == Token::Kind::Ident && ieq(probe.peek().text, "on")) {
        lex_.next();
        lex_.next();
        return parse_rule_args(id);
      }
    }

    // Otherwise parse a formula, then BY.
    FormulaScanner fs(lex_.text(), start.offset);
    Formula claimed = fs.parse_formula();
    lex_.reset_to(fs.pos());
    if (lex_.peek().kind == Token::Kind::Ident && ieq(lex_.peek().text, "by")) {
      Token by = lex_.next();
      auto node = std::make_shared<NdlProof>();
      node->kind = NdlProof::Kind::ByAnnotated;
      node->line = start.line;
      node->column = start.column;
      node->claimed = claimed;
      node->inner = parse_proof();
      (void)by;
      return node;
    }
    throw SyntaxError("expected 'BY' or 'on' after formula", lex_.peek().offset,
                      "BY or on");
  }

  NdlProofPtr parse_rule_args(const Token& rule) {
    auto node = std::make_shared<NdlProof>();
    node->kind = NdlProof::Kind::RuleApp;
    node->line = rule.line;
    node->column = rule.column;
    node->rule = rule.text;
    node->args.push_back(parse_arg());
    while (lex_.peek().kind == Token::Kind::Comma) {
      lex_.next();
      node->args.push_back(parse_arg());
    }
    return node;
  }
};

}  // namespace detail

inline NdlProgram parse_ndl_program(const std::string& text) {
  detail::NdlParser p(text);
  return p.parse_program();
}

// The body-only entry point (no assert lines required).
inline NdlProofPtr parse_proof(const std::string& text) {
  detail::NdlParser p(text);
  NdlProgram prog = p.parse_program();
  return prog.main;
}

// ---------------------------------------------------------------------------
// Printing (used by the generators and transforms).

namespace detail {

inline void print_proof_rec(const NdlProof& p, std::string& out, int indent);

inline void print_step(const NdlStep& s, std::string& out, int indent) {
  out.append(indent, ' ');
  if (s.name) out += *s.name + " := ";
  std::string tmp;
  print_proof_rec(*s.proof, tmp, indent);
  out += tmp;
}

inline void print_proof_rec(const NdlProof& p, std::string& out, int indent) {
  switch (p.kind) {
    case NdlProof::Kind::RuleApp: {
      out += p.rule + " on ";
      for (std::size_t i = 0; i < p.args.size(); ++i) {
        if (i) out += ", ";
        const NdlArg& a = p.args[i];
        out += a.is_ident() ? *a.ident : print_formula(a.formula);
      }
      break;
    }
    case NdlProof::Kind::ByAnnotated: {
      out += print_formula(p.claimed) + " BY ";
      std::string tmp;
      print_proof_rec(*p.inner, tmp, indent);
      out += tmp;
      break;
    }
    case NdlProof::Kind::Assume: {
      out.append("assume ");
      if (p.hyp_name) out += *p.hyp_name + " := ";
      const NdlArg& h = *p.hypothesis;
      out += h.is_ident() ? *h.ident : print_formula(h.formula);
      out += " ";
      std::string tmp;
      print_proof_rec(*p.body, tmp, indent);
      out += tmp;
      break;
    }
    case NdlProof::Kind::Compose: {
      out += "{\n";
      for (std::size_t i = 0; i < p.steps.size(); ++i) {
        print_step(p.steps[i], out, indent + 2);
        if (i + 1 < p.steps.size()) out += ";";
        out += "\n";
      }
      out.append(indent, ' ');
      out += "}";
      break;
    }
  }
}

}  // namespace detail

inline std::string print_proof(const NdlProofPtr& p) {
  std::string out;
  if (p->kind == NdlProof::Kind::RuleApp || p->kind == NdlProof::Kind::ByAnnotated) {
    detail::print_proof_rec(*p, out, 0);
  } else {
    detail::print_proof_rec(*p, out, 0);
  }
  return out;
}

inline std::string print_program(const NdlProgram& prog) {
  std::string out;
  for (const auto& [name, f] : prog.asserts)
    out += "assert " + name + " := " + print_formula(f) + "\n";
  if (prog.goal) out += "# Goal: " + print_formula(*prog.goal) + "\n";
  if (!prog.asserts.empty() || prog.goal) out += "\n";
  out += print_proof(prog.main);
  out += "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Rule catalog. 24 rules; `true`/`false` are literals, not rules.

struct RuleOutcome {
  std::optional<Formula> conclusion;
  std::optional<NdlError> error;
};

namespace detail {

inline NdlError malformed(const std::string& rule, const std::vector<Formula>& args,
                          const std::string& why) {
  NdlError e;
  e.kind = NdlErrorKind::MalformedRuleApp;
  e.rule = rule;
  e.offending = args;
  e.detail = why;
  return e;
}

inline NdlError not_in_ab(const std::string& rule, const Formula& missing) {
  NdlError e;
  e.kind = NdlErrorKind::NotInAB;
  e.rule = rule;
  e.missing = missing;
  e.detail = "formula " + print_formula(missing) + " is not in the assumption base";
  return e;
}

struct RuleSpec {
  int arity;
  // Indices of arguments whose membership in the assumption base is required.
  std::vector<int> membership;
  // Shape check plus conclusion; assumes arity already validated.
  std::function<RuleOutcome(const std::vector<Formula>&)> conclude;
  // Extra formulas that must be in the base (beyond arguments), e.g. `false`.
  std::vector<Formula> extra_membership;
};

inline const std::unordered_map<std::string, RuleSpec>& rule_catalog() {
  using Args = std::vector<Formula>;
  auto ok = [](Formula f) { return RuleOutcome{std::move(f), std::nullopt}; };
  auto bad = [](const std::string& rule, const Args& a, const std::string& why) {
    return RuleOutcome{std::nullopt, malformed(rule, a, why)};
  };

  static const std::unordered_map<std::string, RuleSpec> catalog = [&] {
    std::unordered_map<std::string, RuleSpec> m;

    m["claim"] = {1, {0}, [ok](const Args& a) { return ok(a[0]); }, {}};

    m["mp"] = {2, {0, 1}, [=](const Args& a) {
      if (a[0].kind() != Conn::Implies)
        return bad("mp", a, "first argument must be a conditional");
      if (a[0].left() != a[1])
        return bad("mp", a, "second argument must match the antecedent");
      return ok(a[0].right());
    }, {}};

    m["mt"] = {2, {0, 1}, [=](const Args& a) {
      if (a[0].kind() != Conn::Implies)
        return bad("mt", a, "first argument must be a conditional");
      if (!complements(a[1], a[0].right()))
        return bad("mt", a, "second argument must complement the consequent");
      return ok(Formula::neg(a[0].left()));
    }, {}};

    m["both"] = {2, {0, 1}, [ok](const Args& a) {
      return ok(Formula::conj(a[0], a[1]));
    }, {}};

    m["left-and"] = {1, {0}, [=](const Args& a) {
      if (a[0].kind() != Conn::And)
        return bad("left-and", a, "argument must be a conjunction");
      return ok(a[0].left());
    }, {}};

    m["right-and"] = {1, {0}, [=](const Args& a) {
      if (a[0].kind() != Conn::And)
        return bad("right-and", a, "argument must be a conjunction");
      return ok(a[0].right());
    }, {}};

    m["left-either"] = {2, {0}, [ok](const Args& a) {
      return ok(Formula::disj(a[0], a[1]));
    }, {}};

    m["right-either"] = {2, {1}, [ok](const Args& a) {
      return ok(Formula::disj(a[0], a[1]));
    }, {}};

    m["cases"] = {3, {0, 1, 2}, [=](const Args& a) {
      if (a[0].kind() != Conn::Or)
        return bad("cases", a, "first argument must be a disjunction");
      if (a[1].kind() != Conn::Implies || a[2].kind() != Conn::Implies)
        return bad("cases", a, "second and third arguments must be conditionals");
      if (a[1].left() != a[0].left() || a[2].left() != a[0].right())
        return bad("cases", a, "conditional antecedents must match the disjuncts");
      if (a[1].right() != a[2].right())
        return bad("cases", a, "the two conditionals must share one consequent");
      return ok(a[1].right());
    }, {}};

    m["cd"] = {3, {0, 1, 2}, [=](const Args& a) {
      if (a[0].kind() != Conn::Or)
        return bad("cd", a, "first argument must be a disjunction");
      if (a[1].kind() != Conn::Implies || a[2].kind() != Conn::Implies)
        return bad("cd", a, "second and third arguments must be conditionals");
      if (a[1].left() != a[0].left() || a[2].left() != a[0].right())
        return bad("cd", a, "conditional antecedents must match the disjuncts");
      return ok(Formula::disj(a[1].right(), a[2].right()));
    }, {}};

    m["dn"] = {1, {0}, [=](const Args& a) {
      if (a[0].kind() != Conn::Not || a[0].left().kind() != Conn::Not)
        return bad("dn", a, "argument must be a double negation");
      return ok(a[0].left().left());
    }, {}};

    // One De Morgan transformation; no implicit double-negation cleanup.
    m["dm"] = {1, {0}, [=](const Args& a) {
      const Formula& p = a[0];
      if (p.kind() == Conn::Not && p.left().kind() == Conn::And)
        return ok(Formula::disj(Formula::neg(p.left().left()),
                                Formula::neg(p.left().right())));
      if (p.kind() == Conn::Not && p.left().kind() == Conn::Or)
        return ok(Formula::conj(Formula::neg(p.left().left()),
                                Formula::neg(p.left().right())));
      if (p.kind() == Conn::And && p.left().kind() == Conn::Not &&
          p.right().kind() == Conn::Not)
        return ok(Formula::neg(Formula::disj(p.left().left(), p.right().left())));
      if (p.kind() == Conn::Or && p.left().kind() == Conn::Not &&
          p.right().kind() == Conn::Not)
        return ok(Formula::neg(Formula::conj(p.left().left(), p.right().left())));
      return bad("dm", a, "argument does not match a De Morgan pattern");
    }, {}};

    m["dsyl"] = {2, {0, 1}, [=](const Args& a) {
      if (a[0].kind() != Conn::Or)
        return bad("dsyl", a, "first argument must be a disjunction");
      if (complements(a[1], a[0].left())) return ok(a[0].right());
      if (complements(a[1], a[0].right())) return ok(a[0].left());
      return bad("dsyl", a, "second argument must complement a disjunct");
    }, {}};

    m["cond-def"] = {1, {0}, [=](const Args& a) {
      const Formula& p = a[0];
      if (p.kind() == Conn::Implies)
        return ok(Formula::disj(Formula::neg(p.left()), p.right()));
      if (p.kind() == Conn::Or && p.left().kind() == Conn::Not)
        return ok(Formula::implies(p.left().left(), p.right()));
      return bad("cond-def", a, "argument must be a conditional or (~p | q)");
    }, {}};

    m["neg-cond-def"] = {1, {0}, [=](const Args& a) {
      const Formula& p = a[0];
      if (p.kind() == Conn::Not && p.left().kind() == Conn::Implies)
        return ok(Formula::conj(p.left().left(), Formula::neg(p.left().right())));
      if (p.kind() == Conn::And && p.right().kind() == Conn::Not)
        return ok(Formula::neg(Formula::implies(p.left(), p.right().left())));
      return bad("neg-cond-def", a, "argument must be a negated conditional or (p & ~q)");
    }, {}};

    m["bicond-def"] = {1, {0}, [=](const Args& a) {
      if (a[0].kind() != Conn::Iff)
        return bad("bicond-def", a, "argument must be a biconditional");
      Formula l = a[0].left(), r = a[0].right();
      return ok(Formula::disj(Formula::conj(l, r),
                              Formula::conj(Formula::neg(l), Formula::neg(r))));
    }, {}};

    m["equiv"] = {2, {0, 1}, [=](const Args& a) {
      if (a[0].kind() != Conn::Implies || a[1].kind() != Conn::Implies)
        return bad("equiv", a, "both arguments must be conditionals");
      if (a[0].left() != a[1].right() || a[0].right() != a[1].left())
        return bad("equiv", a, "the conditionals must be converses of each other");
      return ok(Formula::iff(a[0].left(), a[0].right()));
    }, {}};

    m["left-iff"] = {1, {0}, [=](const Args& a) {
      if (a[0].kind() != Conn::Iff)
        return bad("left-iff", a, "argument must be a biconditional");
      return ok(Formula::implies(a[0].left(), a[0].right()));
    }, {}};

    m["right-iff"] = {1, {0}, [=](const Args& a) {
      if (a[0].kind() != Conn::Iff)
        return bad("right-iff", a, "argument must be a biconditional");
      return ok(Formula::implies(a[0].right(), a[0].left()));
    }, {}};

    m["absurd"] = {2, {0, 1}, [=](const Args& a) {
      if (!complements(a[0], a[1]))
        return bad("absurd", a, "arguments must be complementary");
      return ok(Formula::f());
    }, {}};

    m["from-false"] = {1, {}, [ok](const Args& a) { return ok(a[0]); },
                       {Formula::f()}};

    m["by-contradiction"] = {2, {1}, [=](const Args& a) {
      if (a[1].kind() != Conn::Implies || a[1].right().kind() != Conn::False)
        return bad("by-contradiction", a, "second argument must be (p ==> false)");
      if (!complements(a[1].left(), a[0]))
        return bad("by-contradiction", a,
                   "hypothesis of the second argument must complement the target");
      return ok(a[0]);
    }, {}};

    m["ex-middle"] = {1, {}, [ok](const Args& a) {
      return ok(Formula::disj(a[0], Formula::neg(a[0])));
    }, {}};

    m["from-complements"] = {3, {1, 2}, [=](const Args& a) {
      if (!complements(a[1], a[2]))
        return bad("from-complements", a, "last two arguments must be complementary");
      return ok(a[0]);
    }, {}};

    return m;
  }();
  return catalog;
}

}  // namespace detail

inline bool is_ndl_rule(const std::string& name) {
  return detail::rule_catalog().count(name) > 0;
}

inline std::vector<std::string> ndl_rule_names() {
  std::vector<std::string> out;
  for (const auto& [k, _] : detail::rule_catalog()) out.push_back(k);
  std::sort(out.begin(), out.end());
  return out;
}

// Apply a rule to already-evaluated arguments in the given assumption base.
inline RuleOutcome apply_rule(const std::string& rule,
                              const std::vector<Formula>& args,
                              const AssumptionBase& base) {
  const auto& catalog = detail::rule_catalog();
  auto it = catalog.find(rule);
  if (it == catalog.end()) {
    NdlError e = detail::malformed(rule, args, "unknown inference rule '" + rule + "'");
    return {std::nullopt, e};
  }
  const detail::RuleSpec& spec = it->second;
  if (static_cast<int>(args.size()) != spec.arity) {
    NdlError e = detail::malformed(
        rule, args,
        rule + " takes " + std::to_string(spec.arity) + " argument(s), got " +
            std::to_string(args.size()));
    return {std::nullopt, e};
  }
  RuleOutcome shaped = spec.conclude(args);
  if (shaped.error) return shaped;
  for (int i : spec.membership)
    if (!base.contains(args[i]))
      return {std::nullopt, detail::not_in_ab(rule, args[i])};
  for (const Formula& f : spec.extra_membership)
    if (!base.contains(f)) return {std::nullopt, detail::not_in_ab(rule, f)};
  return shaped;
}

// Membership-checked argument indices of a rule (used by the NDL0 translation
// and the instrumented checker).
inline std::vector<int> rule_membership_indices(const std::string& rule) {
  const auto& catalog = detail::rule_catalog();
  auto it = catalog.find(rule);
  if (it == catalog.end()) return {};
  return it->second.membership;
}

inline int rule_arity(const std::string& rule) {
  const auto& catalog = detail::rule_catalog();
  auto it = catalog.find(rule);
  return it == catalog.end() ? -1 : it->second.arity;
}

// ---------------------------------------------------------------------------
// Evaluation.

struct NdlEvalOptions {
  // Identifiers in this set denote problem atoms; any bare identifier that is
  // neither bound nor in the universe is an unbound reference. When absent,
  // every unbound bare identifier is read as an atom.
  std::optional<std::set<std::string>> atom_universe;
};

namespace detail {

struct NdlEvaluator {
  NdlEvalOptions opts;
  int step_counter = 0;

  struct Resolved {
    std::optional<Formula> formula;
    std::optional<NdlError> error;
  };

  // Environment substitution: identifiers bound in the environment denote
  // their formulas wherever they occur, including inside composite formulas
  // (names shadow problem atoms). Unbound identifiers outside the atom
  // universe are unbound references.
  Resolved resolve_formula(const Formula& f, const Environment& env, int line,
                           int col, int step) const {
    switch (f.kind()) {
      case Conn::Atom: {
        const std::string& id = f.atom_name();
        if (auto bound = env.lookup(id)) return {*bound, std::nullopt};
        if (!opts.atom_universe || opts.atom_universe->count(id))
          return {f, std::nullopt};
        NdlError e;
        e.kind = NdlErrorKind::UnboundIdentifier;
        e.line = line;
        e.column = col;
        e.step = step;
        e.detail = "identifier '" + id + "' is not bound and is not a problem atom";
        return {std::nullopt, e};
      }
      case Conn::True:
      case Conn::False:
        return {f, std::nullopt};
      case Conn::Not: {
        Resolved inner = resolve_formula(f.left(), env, line, col, step);
        if (inner.error) return inner;
        return {Formula::neg(*inner.formula), std::nullopt};
      }
      default: {
        Resolved l = resolve_formula(f.left(), env, line, col, step);
        if (l.error) return l;
        Resolved r = resolve_formula(f.right(), env, line, col, step);
        if (r.error) return r;
        switch (f.kind()) {
          case Conn::And: return {Formula::conj(*l.formula, *r.formula), std::nullopt};
          case Conn::Or: return {Formula::disj(*l.formula, *r.formula), std::nullopt};
          case Conn::Implies:
            return {Formula::implies(*l.formula, *r.formula), std::nullopt};
          default: return {Formula::iff(*l.formula, *r.formula), std::nullopt};
        }
      }
    }
  }

  Resolved resolve(const NdlArg& arg, const Environment& env, int line, int col,
                   int step) const {
    return resolve_formula(arg.formula, env, line, col, step);
  }

  NdlVerdict eval(const NdlProof& p, AssumptionBase base, Environment env) {
    switch (p.kind) {
      case NdlProof::Kind::RuleApp: {
        int step = ++step_counter;
        std::vector<Formula> args;
        args.reserve(p.args.size());
        for (const NdlArg& a : p.args) {
          Resolved r = resolve(a, env, p.line, p.column, step);
          if (r.error) return NdlVerdict::failure(*r.error);
          args.push_back(*r.formula);
        }
        RuleOutcome out = apply_rule(p.rule, args, base);
        if (out.error) {
          out.error->line = p.line;
          out.error->column = p.column;
          out.error->step = step;
          return NdlVerdict::failure(*out.error);
        }
        return NdlVerdict::success(*out.conclusion);
      }
      case NdlProof::Kind::Assume: {
        int step = ++step_counter;
        const NdlArg& h = *p.hypothesis;
        Resolved r = resolve_formula(h.formula, env, p.line, p.column, step);
        if (r.error) {
          NdlError e = *r.error;
          e.kind = NdlErrorKind::MalformedAssumption;
          e.detail = "hypothesis is not a valid formula: " + e.detail;
          return NdlVerdict::failure(e);
        }
        Formula hyp = *r.formula;
        AssumptionBase inner = base;
        inner.insert(hyp);
        Environment scoped = env;
        if (p.hyp_name) scoped.bind(*p.hyp_name, hyp);
        NdlVerdict body = eval(*p.body, std::move(inner), std::move(scoped));
        if (!body.ok()) return body;
        return NdlVerdict::success(Formula::implies(hyp, *body.conclusion));
      }
      case NdlProof::Kind::Compose: {
        AssumptionBase cur = std::move(base);
        Environment scoped = std::move(env);
        std::optional<Formula> last;
        for (const NdlStep& s : p.steps) {
          NdlVerdict v = eval(*s.proof, cur, scoped);
          if (!v.ok()) return v;
          cur.insert(*v.conclusion);
          if (s.name) scoped.bind(*s.name, *v.conclusion);
          last = v.conclusion;
        }
        return NdlVerdict::success(*last);
      }
      case NdlProof::Kind::ByAnnotated: {
        Resolved claim = resolve_formula(p.claimed, env, p.line, p.column,
                                         step_counter + 1);
        if (claim.error) return NdlVerdict::failure(*claim.error);
        NdlVerdict inner = eval(*p.inner, std::move(base), std::move(env));
        if (!inner.ok()) return inner;
        if (*inner.conclusion != *claim.formula) {
          NdlError e;
          e.kind = NdlErrorKind::WrongConclusion;
          e.line = p.line;
          e.column = p.column;
          e.step = step_counter;
          e.expected = claim.formula;
          e.actual = inner.conclusion;
          e.detail = "annotation claims " + print_formula(*claim.formula) +
                     " but the proof derives " + print_formula(*inner.conclusion);
          return NdlVerdict::failure(e);
        }
        return inner;
      }
    }
    NdlError e;
    e.kind = NdlErrorKind::Parsing;
    e.detail = "corrupt proof node";
    return NdlVerdict::failure(e);
  }
};

}  // namespace detail

inline NdlVerdict eval(const NdlProof& proof, const AssumptionBase& base,
                       const Environment& env, NdlEvalOptions opts = {}) {
  detail::NdlEvaluator ev{std::move(opts)};
  return ev.eval(proof, base, env);
}

// ---------------------------------------------------------------------------
// Whole-argument checking: base = premise set, env binds premise names, and
// success requires the derived conclusion to equal the goal exactly.

struct CheckReport {
  NdlVerdict verdict;
  bool conclusion_matches_goal = false;
  std::optional<NdlError> error;
  bool ok() const { return verdict.ok() && conclusion_matches_goal; }
};

inline CheckReport
check_argument(const std::vector<std::pair<std::string, Formula>>& premises,
               const Formula& goal, const std::string& proof_text) {
  CheckReport report;
  NdlProgram prog;
  try {
    prog = parse_ndl_program(proof_text);
  } catch (const SyntaxError& ex) {
    NdlError e;
    e.kind = NdlErrorKind::Parsing;
    detail::ProofLexer lx(proof_text);
    auto [line, col] = lx.line_col(ex.offset());
    e.line = line;
    e.column = col;
    e.detail = ex.what();
    report.verdict = NdlVerdict::failure(e);
    report.error = e;
    return report;
  }

  AssumptionBase base;
  Environment env;
  std::set<std::string> universe;
  for (const auto& [name, f] : premises) {
    base.insert(f);
    env.bind(name, f);
    collect_atoms(f, universe);
  }
  for (const auto& [name, f] : prog.asserts) {
    base.insert(f);
    env.bind(name, f);
    collect_atoms(f, universe);
  }
  collect_atoms(goal, universe);

  NdlEvalOptions opts;
  opts.atom_universe = universe;
  report.verdict = eval(*prog.main, base, env, opts);
  if (!report.verdict.ok()) {
    report.error = report.verdict.error;
    return report;
  }
  report.conclusion_matches_goal = (*report.verdict.conclusion == goal);
  if (!report.conclusion_matches_goal) {
    NdlError e;
    e.kind = NdlErrorKind::WrongConclusion;
    e.line = 0;  // whole-proof level
    e.step = 0;
    e.expected = goal;
    e.actual = report.verdict.conclusion;
    e.detail = "proof derives " + print_formula(*report.verdict.conclusion) +
               " but the goal is " + print_formula(goal);
    report.error = e;
  }
  return report;
}

inline CheckReport check_argument(const NdlProgram& prog, const Formula& goal) {
  std::string text = print_program(prog);
  std::vector<std::pair<std::string, Formula>> premises;  // asserts are in text
  return check_argument(premises, goal, text);
}

}  // namespace forge

#endif  // FORGE_NDL_HPP_
