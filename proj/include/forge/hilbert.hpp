// Hilbert calculus: three axiom schemas plus modus ponens over named lines,
// premise support, lenient repairs, and deduction-theorem proof compilation.

#ifndef FORGE_HILBERT_HPP_
#define FORGE_HILBERT_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forge/ndl.hpp"

namespace forge {

// Axiom schemas over metavariables p, q, r:
//   1: (p ==> (q ==> p))
//   2: ((p ==> (q ==> r)) ==> ((p ==> q) ==> (p ==> r)))
//   3: ((~p ==> ~q) ==> ((~p ==> q) ==> p))
struct AxiomSchema {
  int id;
  Formula pattern;
};

inline const std::vector<AxiomSchema>& hilbert_axioms() {
  static const std::vector<AxiomSchema> axioms = [] {
    Formula p = Formula::atom("p"), q = Formula::atom("q"), r = Formula::atom("r");
    std::vector<AxiomSchema> out;
    out.push_back({1, Formula::implies(p, Formula::implies(q, p))});
    out.push_back({2, Formula::implies(
                          Formula::implies(p, Formula::implies(q, r)),
                          Formula::implies(Formula::implies(p, q),
                                           Formula::implies(p, r)))});
    out.push_back({3, Formula::implies(
                          Formula::implies(Formula::neg(p), Formula::neg(q)),
                          Formula::implies(Formula::implies(Formula::neg(p), q), p))});
    return out;
  }();
  return axioms;
}

using MetaSubstitution = std::map<std::string, Formula>;

namespace detail {

inline bool match_pattern(const Formula& pattern, const Formula& f,
                          MetaSubstitution& sub) {
  if (pattern.is_atom()) {
    auto it = sub.find(pattern.atom_name());
    if (it == sub.end()) {
      sub.emplace(pattern.atom_name(), f);
      return true;
    }
    return it->second == f;
  }
  if (pattern.kind() != f.kind()) return false;
  switch (pattern.kind()) {
    case Conn::True:
    case Conn::False: return true;
    case Conn::Not: return match_pattern(pattern.left(), f.left(), sub);
    default:
      return match_pattern(pattern.left(), f.left(), sub) &&
             match_pattern(pattern.right(), f.right(), sub);
  }
}

}  // namespace detail

// Metavariable assignment with f = pattern[assignment], or none.
inline std::optional<MetaSubstitution> match_axiom(int id, const Formula& f) {
  for (const AxiomSchema& ax : hilbert_axioms()) {
    if (ax.id != id) continue;
    MetaSubstitution sub;
    if (detail::match_pattern(ax.pattern, f, sub)) return sub;
    return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Proofs: ordered named lines.

struct HilbertLine {
  std::string name;
  enum class Kind { Axiom, Premise, Mp } kind;
  int axiom_id = 0;                  // Axiom
  std::string premise_name;          // Premise
  std::string major, minor;          // Mp: line names, major = (minor ==> this)
  Formula stated;                    // the formula this line claims
  int line_no = 0;                   // 1-based position in the proof
};

struct HilbertProof {
  std::vector<HilbertLine> lines;
};

enum class HilbertErrorKind {
  SyntaxError,
  FailedAxiom,
  FailedMp,
  UndefinedStepName,
  WrongConclusion,
  NoProof,
};

inline const char* to_string(HilbertErrorKind k) {
  switch (k) {
    case HilbertErrorKind::SyntaxError: return "syntaxError";
    case HilbertErrorKind::FailedAxiom: return "failedAxiom";
    case HilbertErrorKind::FailedMp: return "failedMp";
    case HilbertErrorKind::UndefinedStepName: return "undefinedStepName";
    case HilbertErrorKind::WrongConclusion: return "wrongConclusion";
    case HilbertErrorKind::NoProof: return "noProof";
  }
  return "?";
}

struct HilbertError {
  HilbertErrorKind kind;
  int line_no = 0;
  std::string detail;
};

struct HilbertReport {
  bool ok = false;
  std::optional<HilbertError> error;
  std::vector<std::string> repairs;  // lenient-mode interventions
  std::optional<Formula> conclusion;
};

// ---------------------------------------------------------------------------
// Concrete syntax:
//   pK := axiom-N on (formula);
//   pK := (formula) BY mp on pI, pJ;
//   pK := premise-J;
// Comments (#) and blank lines are ignored.

namespace detail {

inline std::optional<int> axiom_number(const std::string& tok) {
  if (tok.rfind("axiom-", 0) != 0) return std::nullopt;
  std::string num = tok.substr(6);
  if (num.empty()) return std::nullopt;
  for (char c : num)
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  return std::stoi(num);
}

}  // namespace detail

inline HilbertProof
parse_hilbert_proof(const std::string& text,
                    const std::vector<std::pair<std::string, Formula>>& premises) {
  HilbertProof proof;
  detail::ProofLexer lex(text);
  using TK = detail::Token::Kind;
  if (lex.peek().kind == TK::LBrace) lex.next();
  std::map<std::string, Formula> premise_map(premises.begin(), premises.end());

  int line_no = 0;
  while (lex.peek().kind != TK::End && lex.peek().kind != TK::RBrace) {
    if (lex.peek().kind != TK::Ident)
      throw SyntaxError("expected a line name", lex.peek().offset, "identifier");
    HilbertLine line;
    line.name = lex.next().text;
    if (lex.peek().kind != TK::Assign)
      throw SyntaxError("expected ':=' after line name", lex.peek().offset, ":=");
    lex.next();

    if (lex.peek().kind == TK::Ident) {
      std::string tok = lex.peek().text;
      if (auto ax = detail::axiom_number(tok)) {
        lex.next();
        if (!(lex.peek().kind == TK::Ident && detail::ieq(lex.peek().text, "on")))
          throw SyntaxError("expected 'on' after axiom citation", lex.peek().offset,
                            "on");
        lex.next();
        detail::FormulaScanner fs(lex.text(), lex.peek().offset);
        line.stated = fs.parse_formula();
        lex.reset_to(fs.pos());
        line.kind = HilbertLine::Kind::Axiom;
        line.axiom_id = *ax;
        line.line_no = ++line_no;
        proof.lines.push_back(line);
        if (lex.peek().kind == TK::Semi) lex.next();
        continue;
      }
      if (premise_map.count(tok)) {
        lex.next();
        line.kind = HilbertLine::Kind::Premise;
        line.premise_name = tok;
        line.stated = premise_map.at(tok);
        line.line_no = ++line_no;
        proof.lines.push_back(line);
        if (lex.peek().kind == TK::Semi) lex.next();
        continue;
      }
    }

    // `pK := (formula) BY mp on pI, pJ`
    detail::FormulaScanner fs(lex.text(), lex.peek().offset);
    line.stated = fs.parse_formula();
    lex.reset_to(fs.pos());
    if (!(lex.peek().kind == TK::Ident && detail::ieq(lex.peek().text, "by")))
      throw SyntaxError("expected 'BY' after the stated formula", lex.peek().offset,
                        "BY");
    lex.next();
    if (!(lex.peek().kind == TK::Ident && lex.peek().text == "mp"))
      throw SyntaxError("expected 'mp'", lex.peek().offset, "mp");
    lex.next();
    if (!(lex.peek().kind == TK::Ident && detail::ieq(lex.peek().text, "on")))
      throw SyntaxError("expected 'on'", lex.peek().offset, "on");
    lex.next();
    if (lex.peek().kind != TK::Ident)
      throw SyntaxError("expected a line name", lex.peek().offset, "identifier");
    line.major = lex.next().text;
    if (lex.peek().kind != TK::Comma)
      throw SyntaxError("expected ','", lex.peek().offset, ",");
    lex.next();
    if (lex.peek().kind != TK::Ident)
      throw SyntaxError("expected a line name", lex.peek().offset, "identifier");
    line.minor = lex.next().text;
    line.kind = HilbertLine::Kind::Mp;
    line.line_no = ++line_no;
    proof.lines.push_back(line);
    if (lex.peek().kind == TK::Semi) lex.next();
  }
  if (lex.peek().kind == TK::RBrace) lex.next();
  return proof;
}

// ---------------------------------------------------------------------------
// Checking. Lenient mode applies the fixed repair set; the one visible at
// this level is swapping flipped detachment arguments when the swap validates
// (the textual repairs run before parsing, see check_hilbert_text).

inline HilbertReport
check_hilbert(const std::vector<std::pair<std::string, Formula>>& premises,
              const Formula& goal, const HilbertProof& proof, bool lenient) {
  HilbertReport report;
  if (proof.lines.empty()) {
    report.error = HilbertError{HilbertErrorKind::NoProof, 0, "empty proof"};
    return report;
  }
  std::map<std::string, Formula> premise_map(premises.begin(), premises.end());
  std::map<std::string, std::pair<Formula, int>> defined;  // name -> (formula, line)

  for (const HilbertLine& line : proof.lines) {
    switch (line.kind) {
      case HilbertLine::Kind::Axiom: {
        if (!match_axiom(line.axiom_id, line.stated)) {
          report.error = HilbertError{
              HilbertErrorKind::FailedAxiom, line.line_no,
              print_formula(line.stated) + " is not an instance of axiom " +
                  std::to_string(line.axiom_id)};
          return report;
        }
        break;
      }
      case HilbertLine::Kind::Premise: {
        auto it = premise_map.find(line.premise_name);
        if (it == premise_map.end()) {
          report.error = HilbertError{HilbertErrorKind::UndefinedStepName,
                                      line.line_no,
                                      "unknown premise '" + line.premise_name + "'"};
          return report;
        }
        if (it->second != line.stated) {
          report.error = HilbertError{HilbertErrorKind::WrongConclusion, line.line_no,
                                      "stated formula differs from the premise"};
          return report;
        }
        break;
      }
      case HilbertLine::Kind::Mp: {
        auto lookup = [&](const std::string& name) -> std::optional<Formula> {
          auto it = defined.find(name);
          if (it != defined.end()) return it->second.first;
          auto pm = premise_map.find(name);
          if (pm != premise_map.end()) return pm->second;
          return std::nullopt;
        };
        std::optional<Formula> major = lookup(line.major);
        std::optional<Formula> minor = lookup(line.minor);
        if (!major || !minor) {
          report.error = HilbertError{
              HilbertErrorKind::UndefinedStepName, line.line_no,
              "unknown step name '" + (!major ? line.major : line.minor) + "'"};
          return report;
        }
        auto validates = [&](const Formula& maj, const Formula& min) {
          return maj.kind() == Conn::Implies && maj.left() == min &&
                 maj.right() == line.stated;
        };
        if (!validates(*major, *minor)) {
          if (lenient && validates(*minor, *major)) {
            report.repairs.push_back("line " + std::to_string(line.line_no) +
                                     ": swapped flipped mp arguments");
          } else {
            std::string why;
            if (major->kind() != Conn::Implies)
              why = "major premise is not a conditional";
            else if (major->left() != *minor)
              why = "minor premise does not match the antecedent";
            else
              why = "stated formula does not match the consequent";
            report.error =
                HilbertError{HilbertErrorKind::FailedMp, line.line_no, why};
            return report;
          }
        }
        break;
      }
    }
    defined[line.name] = {line.stated, line.line_no};
  }

  const HilbertLine& last = proof.lines.back();
  if (last.stated != goal) {
    report.error = HilbertError{HilbertErrorKind::WrongConclusion, last.line_no,
                                "final line derives " + print_formula(last.stated) +
                                    " but the goal is " + print_formula(goal)};
    return report;
  }
  report.ok = true;
  report.conclusion = last.stated;
  return report;
}

// Text-level entry point. Lenient mode first applies the textual repairs
// (parenthesis rebalancing, semicolon cleanup; minimal parenthesization is
// accepted by the grammar itself), then swaps mp arguments when needed.
inline HilbertReport
check_hilbert_text(const std::vector<std::pair<std::string, Formula>>& premises,
                   const Formula& goal, const std::string& text, bool lenient) {
  auto parse_and_check = [&](const std::string& t,
                             std::vector<std::string> pre_repairs) -> HilbertReport {
    HilbertReport report;
    HilbertProof proof;
    try {
      proof = parse_hilbert_proof(t, premises);
    } catch (const SyntaxError& ex) {
      report.error = HilbertError{HilbertErrorKind::SyntaxError, 0, ex.what()};
      report.repairs = std::move(pre_repairs);
      return report;
    }
    report = check_hilbert(premises, goal, proof, lenient);
    for (auto& r : report.repairs) pre_repairs.push_back(std::move(r));
    report.repairs = std::move(pre_repairs);
    return report;
  };

  HilbertReport strict_try = parse_and_check(text, {});
  if (!lenient || strict_try.ok) return strict_try;
  if (strict_try.error && strict_try.error->kind != HilbertErrorKind::SyntaxError)
    return strict_try;

  // Textual repairs only when the raw text does not even parse.
  std::vector<std::string> region_repairs;
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string& l = lines[i];
    std::size_t h = l.find('#');
    std::string code = h == std::string::npos ? l : l.substr(0, h);
    int bal = 0;
    for (char c : code) {
      if (c == '(') ++bal;
      if (c == ')') --bal;
    }
    if (bal > 0) {
      std::size_t e = code.find_last_not_of(" \t;");
      std::string trailer = (e != std::string::npos && code[e] == ';') ? ";" : "";
      std::size_t cut = code.find_last_not_of(" \t");
      std::string body = code.substr(0, cut + 1);
      if (!body.empty() && body.back() == ';') body.pop_back();
      body.append(static_cast<std::size_t>(bal), ')');
      l = body + ";";
      region_repairs.push_back("line " + std::to_string(i + 1) +
                               ": appended missing ')'");
    } else if (bal < 0) {
      std::string body = code;
      int extra = -bal;
      std::size_t cut = body.find_last_not_of(" \t");
      if (cut != std::string::npos) body = body.substr(0, cut + 1);
      bool had_semi = !body.empty() && body.back() == ';';
      if (had_semi) body.pop_back();
      while (extra > 0 && !body.empty() && body.back() == ')') {
        body.pop_back();
        --extra;
      }
      if (extra == 0) {
        l = body + (had_semi ? ";" : "");
        region_repairs.push_back("line " + std::to_string(i + 1) +
                                 ": removed extra ')'");
      }
    }
  }
  std::string repaired;
  for (const auto& l : lines) {
    repaired += l;
    repaired += '\n';
  }
  return parse_and_check(repaired, std::move(region_repairs));
}

// ---------------------------------------------------------------------------
// Deduction-theorem compilation: from a strict proof of p using premises
// including h, produce a strict proof of (h ==> p) from the remaining
// premises. Output length is at most 3n + 5 lines for an n-line input.

inline HilbertProof
deduction_compile(const std::vector<std::pair<std::string, Formula>>& premises,
                  const std::string& hyp_name, const HilbertProof& proof) {
  Formula h;
  std::vector<std::pair<std::string, Formula>> remaining;
  bool found = false;
  for (const auto& [name, f] : premises) {
    if (name == hyp_name) {
      h = f;
      found = true;
    } else {
      remaining.emplace_back(name, f);
    }
  }
  if (!found) throw std::invalid_argument("unknown hypothesis premise " + hyp_name);

  HilbertProof out;
  int fresh = 0;
  auto next_name = [&fresh] { return "d" + std::to_string(fresh++); };
  auto emit = [&out](HilbertLine line) -> std::string {
    line.line_no = static_cast<int>(out.lines.size()) + 1;
    out.lines.push_back(line);
    return out.lines.back().name;
  };

  // (h ==> h) is derived once up front and reused.
  std::string h_impl_h_name;
  Formula h_impl_h = Formula::implies(h, h);
  {
    Formula hh = Formula::implies(h, h);
    Formula s1 = Formula::implies(h, Formula::implies(hh, h));
    Formula s2 = Formula::implies(
        s1, Formula::implies(Formula::implies(h, hh), Formula::implies(h, h)));
    HilbertLine l1{next_name(), HilbertLine::Kind::Axiom, 1, "", "", "", s1};
    std::string n1 = emit(l1);
    HilbertLine l2{next_name(), HilbertLine::Kind::Axiom, 2, "", "", "", s2};
    std::string n2 = emit(l2);
    HilbertLine l3{next_name(), HilbertLine::Kind::Mp, 0, "", n2, n1,
                   Formula::implies(Formula::implies(h, hh), Formula::implies(h, h))};
    std::string n3 = emit(l3);
    HilbertLine l4{next_name(), HilbertLine::Kind::Axiom, 1, "", "", "",
                   Formula::implies(h, hh)};
    std::string n4 = emit(l4);
    HilbertLine l5{next_name(), HilbertLine::Kind::Mp, 0, "", n3, n4, h_impl_h};
    h_impl_h_name = emit(l5);
  }

  // original line or premise name -> compiled line proving (h ==> formula)
  std::map<std::string, std::string> translated;
  std::map<std::string, Formula> stated_of;
  std::map<std::string, Formula> premise_map(premises.begin(), premises.end());

  // A non-hypothesis base fact f reached through a premise or axiom line:
  // emit f, then axiom-1 f ==> (h ==> f), then detach.
  auto lift = [&](HilbertLine base) -> std::string {
    Formula q = base.stated;
    base.name = next_name();
    std::string nq = emit(base);
    HilbertLine k{next_name(), HilbertLine::Kind::Axiom, 1, "", "", "",
                  Formula::implies(q, Formula::implies(h, q))};
    std::string nk = emit(k);
    HilbertLine det{next_name(), HilbertLine::Kind::Mp, 0, "", nk, nq,
                    Formula::implies(h, q)};
    return emit(det);
  };

  // mp arguments may cite premises directly, without a dedicated line
  auto translate_ref = [&](const std::string& name) -> std::string {
    auto it = translated.find(name);
    if (it != translated.end()) return it->second;
    auto pm = premise_map.find(name);
    if (pm == premise_map.end())
      throw std::invalid_argument("deduction_compile: input proof is not closed");
    stated_of[name] = pm->second;
    if (pm->second == h) return translated[name] = h_impl_h_name;
    HilbertLine base;
    base.kind = HilbertLine::Kind::Premise;
    base.premise_name = name;
    base.stated = pm->second;
    return translated[name] = lift(base);
  };

  for (const HilbertLine& line : proof.lines) {
    const Formula& q = line.stated;
    stated_of[line.name] = q;
    if (q == h) {
      translated[line.name] = h_impl_h_name;
      continue;
    }
    switch (line.kind) {
      case HilbertLine::Kind::Axiom:
      case HilbertLine::Kind::Premise: {
        HilbertLine base;
        base.kind = line.kind;
        base.axiom_id = line.axiom_id;
        base.premise_name = line.premise_name;
        base.stated = q;
        translated[line.name] = lift(base);
        break;
      }
      case HilbertLine::Kind::Mp: {
        // we have h ==> (r ==> q) and h ==> r; axiom 2 closes the square
        std::string maj = translate_ref(line.major);
        std::string min = translate_ref(line.minor);
        Formula r = stated_of.at(line.minor);
        Formula s2 = Formula::implies(
            Formula::implies(h, Formula::implies(r, q)),
            Formula::implies(Formula::implies(h, r), Formula::implies(h, q)));
        HilbertLine ax{next_name(), HilbertLine::Kind::Axiom, 2, "", "", "", s2};
        std::string nax = emit(ax);
        HilbertLine m1{next_name(), HilbertLine::Kind::Mp, 0, "", nax, maj,
                       Formula::implies(Formula::implies(h, r),
                                        Formula::implies(h, q))};
        std::string nm1 = emit(m1);
        HilbertLine m2{next_name(), HilbertLine::Kind::Mp, 0, "", nm1, min,
                       Formula::implies(h, q)};
        translated[line.name] = emit(m2);
        break;
      }
    }
  }
  return out;
}

inline std::string print_hilbert_proof(const HilbertProof& proof) {
  std::string out = "{\n";
  for (const HilbertLine& l : proof.lines) {
    out += "  " + l.name + " := ";
    switch (l.kind) {
      case HilbertLine::Kind::Axiom:
        out += "axiom-" + std::to_string(l.axiom_id) + " on " + print_formula(l.stated);
        break;
      case HilbertLine::Kind::Premise:
        out += l.premise_name;
        break;
      case HilbertLine::Kind::Mp:
        out += print_formula(l.stated) + " BY mp on " + l.major + ", " + l.minor;
        break;
    }
    out += ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace forge

#endif  // FORGE_HILBERT_HPP_
