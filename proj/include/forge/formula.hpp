// Propositional formulas: AST, concrete syntax, truth-table semantics and the
// entailment oracle used by every checker in the library.

#ifndef FORGE_FORMULA_HPP_
#define FORGE_FORMULA_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace forge {

class SyntaxError : public std::runtime_error {
public:
  SyntaxError(std::string msg, std::size_t offset, std::string expected = "")
      : std::runtime_error(std::move(msg)), offset_(offset),
        expected_(std::move(expected)) {}
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

private:
  std::size_t offset_;
  std::string expected_;
};

class MissingAtom : public std::runtime_error {
public:
  explicit MissingAtom(const std::string& name)
      : std::runtime_error("no assignment for atom '" + name + "'"),
        atom_(name) {}
  const std::string& atom() const { return atom_; }

private:
  std::string atom_;
};

class AtomBudgetExceeded : public std::runtime_error {
public:
  AtomBudgetExceeded(std::size_t atoms, std::size_t budget)
      : std::runtime_error("entailment oracle: " + std::to_string(atoms) +
                           " atoms exceed budget of " + std::to_string(budget)),
        atoms_(atoms), budget_(budget) {}
  std::size_t atoms() const { return atoms_; }
  std::size_t budget() const { return budget_; }

private:
  std::size_t atoms_, budget_;
};

enum class Conn : std::uint8_t { Atom, True, False, Not, And, Or, Implies, Iff };

// Immutable formula value. Copies share structure; equality is syntactic.
class Formula {
  struct Node {
    Conn kind;
    std::string atom;                       // Conn::Atom only
    std::shared_ptr<const Node> lhs, rhs;   // rhs null for Not
  };
  std::shared_ptr<const Node> n_;
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

public:
  Formula() : Formula(f()) {}

  static Formula atom(std::string name) {
    return Formula(std::make_shared<Node>(Node{Conn::Atom, std::move(name), nullptr, nullptr}));
  }
  static Formula t() {
    static const Formula v(std::make_shared<Node>(Node{Conn::True, "", nullptr, nullptr}));
    return v;
  }
  static Formula f() {
    static const Formula v(std::make_shared<Node>(Node{Conn::False, "", nullptr, nullptr}));
    return v;
  }
  static Formula neg(Formula a) {
    return Formula(std::make_shared<Node>(Node{Conn::Not, "", a.n_, nullptr}));
  }
  static Formula conj(Formula a, Formula b) {
    return Formula(std::make_shared<Node>(Node{Conn::And, "", a.n_, b.n_}));
  }
  static Formula disj(Formula a, Formula b) {
    return Formula(std::make_shared<Node>(Node{Conn::Or, "", a.n_, b.n_}));
  }
  static Formula implies(Formula a, Formula b) {
    return Formula(std::make_shared<Node>(Node{Conn::Implies, "", a.n_, b.n_}));
  }
  static Formula iff(Formula a, Formula b) {
    return Formula(std::make_shared<Node>(Node{Conn::Iff, "", a.n_, b.n_}));
  }

  Conn kind() const { return n_->kind; }
  const std::string& atom_name() const { return n_->atom; }
  Formula left() const { return Formula(n_->lhs); }
  Formula right() const { return Formula(n_->rhs); }
  bool is_atom() const { return n_->kind == Conn::Atom; }
  bool is_binary() const {
    return n_->kind == Conn::And || n_->kind == Conn::Or ||
           n_->kind == Conn::Implies || n_->kind == Conn::Iff;
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    return structural_eq(a.n_.get(), b.n_.get());
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  friend bool operator<(const Formula& a, const Formula& b) {
    return compare(a.n_.get(), b.n_.get()) < 0;
  }

  std::size_t hash() const { return hash_node(n_.get()); }

private:
  static bool structural_eq(const Node* a, const Node* b) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case Conn::Atom: return a->atom == b->atom;
      case Conn::True:
      case Conn::False: return true;
      case Conn::Not: return structural_eq(a->lhs.get(), b->lhs.get());
      default:
        return structural_eq(a->lhs.get(), b->lhs.get()) &&
               structural_eq(a->rhs.get(), b->rhs.get());
    }
  }
  // Total order: by connective tag first, then children, then atom names.
  static int compare(const Node* a, const Node* b) {
    if (a == b) return 0;
    if (a->kind != b->kind)
      return static_cast<int>(a->kind) < static_cast<int>(b->kind) ? -1 : 1;
    switch (a->kind) {
      case Conn::Atom: return a->atom.compare(b->atom);
      case Conn::True:
      case Conn::False: return 0;
      case Conn::Not: return compare(a->lhs.get(), b->lhs.get());
      default: {
        int c = compare(a->lhs.get(), b->lhs.get());
        if (c != 0) return c;
        return compare(a->rhs.get(), b->rhs.get());
      }
    }
  }
  static std::size_t hash_node(const Node* n) {
    std::size_t h = static_cast<std::size_t>(n->kind) * 0x9e3779b97f4a7c15ull;
    auto mix = [&h](std::size_t v) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    switch (n->kind) {
      case Conn::Atom: mix(std::hash<std::string>{}(n->atom)); break;
      case Conn::Not: mix(hash_node(n->lhs.get())); break;
      case Conn::And:
      case Conn::Or:
      case Conn::Implies:
      case Conn::Iff:
        mix(hash_node(n->lhs.get()));
        mix(hash_node(n->rhs.get()));
        break;
      default: break;
    }
    return h;
  }
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

using FormulaSet = std::unordered_map<Formula, char, FormulaHash>;

// Total assignment of truth values to a declared atom set.
class Interpretation {
public:
  Interpretation() = default;
  explicit Interpretation(std::map<std::string, bool> m) : assignment_(std::move(m)) {}
  void set(const std::string& atom, bool v) { assignment_[atom] = v; }
  bool lookup(const std::string& atom) const {
    auto it = assignment_.find(atom);
    if (it == assignment_.end()) throw MissingAtom(atom);
    return it->second;
  }
  const std::map<std::string, bool>& assignment() const { return assignment_; }

private:
  std::map<std::string, bool> assignment_;
};

struct FormulaMetrics {
  std::size_t ast_size = 0;
  std::set<std::string> atom_set;
  std::size_t negations = 0, conjunctions = 0, disjunctions = 0,
              conditionals = 0, biconditionals = 0;
};

inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Conn::Atom: out.insert(f.atom_name()); break;
    case Conn::True:
    case Conn::False: break;
    case Conn::Not: collect_atoms(f.left(), out); break;
    default:
      collect_atoms(f.left(), out);
      collect_atoms(f.right(), out);
  }
}

inline std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> s;
  collect_atoms(f, s);
  return s;
}

inline FormulaMetrics metrics(const Formula& f) {
  FormulaMetrics m;
  struct Walk {
    FormulaMetrics& m;
    void operator()(const Formula& g) {
      ++m.ast_size;
      switch (g.kind()) {
        case Conn::Atom: m.atom_set.insert(g.atom_name()); break;
        case Conn::True:
        case Conn::False: break;
        case Conn::Not:
          ++m.negations;
          (*this)(g.left());
          break;
        case Conn::And: ++m.conjunctions; goto binary;
        case Conn::Or: ++m.disjunctions; goto binary;
        case Conn::Implies: ++m.conditionals; goto binary;
        case Conn::Iff: ++m.biconditionals; goto binary;
        binary:
          (*this)(g.left());
          (*this)(g.right());
      }
    }
  } walk{m};
  walk(f);
  return m;
}

// Combined metrics of a whole problem: sum of per-formula node counts.
inline FormulaMetrics metrics(const std::vector<Formula>& premises, const Formula& goal) {
  FormulaMetrics total;
  auto add = [&total](const Formula& f) {
    FormulaMetrics m = metrics(f);
    total.ast_size += m.ast_size;
    total.atom_set.insert(m.atom_set.begin(), m.atom_set.end());
    total.negations += m.negations;
    total.conjunctions += m.conjunctions;
    total.disjunctions += m.disjunctions;
    total.conditionals += m.conditionals;
    total.biconditionals += m.biconditionals;
  };
  for (const auto& p : premises) add(p);
  add(goal);
  return total;
}

// ---------------------------------------------------------------------------
// Concrete syntax. Precedence ~ > & > | > ==> > <==>, binary ops
// right-associative; `true`/`false` are reserved tokens.

inline bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '_';
}

namespace detail {

// Shared by the formula and proof parsers.
class FormulaScanner {
public:
  FormulaScanner(const std::string& text, std::size_t pos) : text_(text), pos_(pos) {}

  std::size_t pos() const { return pos_; }

  Formula parse_formula() { return parse_iff(); }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {  // comment to end of line
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

private:
  const std::string& text_;
  std::size_t pos_;

  bool peek_sym(const char* s) {
    skip_ws();
    std::size_t n = std::char_traits<char>::length(s);
    if (text_.compare(pos_, n, s) != 0) return false;
    // '-' continues identifiers, so "==>" must not bind into an ident; the
    // symbols we match never collide with ident chars at their first char.
    return true;
  }
  bool eat_sym(const char* s) {
    if (!peek_sym(s)) return false;
    pos_ += std::char_traits<char>::length(s);
    return true;
  }

  Formula parse_iff() {
    Formula lhs = parse_implies();
    if (eat_sym("<==>")) return Formula::iff(lhs, parse_iff());
    return lhs;
  }
  Formula parse_implies() {
    Formula lhs = parse_or();
    if (eat_sym("==>")) return Formula::implies(lhs, parse_implies());
    return lhs;
  }
  Formula parse_or() {
    Formula lhs = parse_and();
    skip_ws();
    // careful: "|" but not part of "||" (we accept "|" only)
    if (pos_ < text_.size() && text_[pos_] == '|') {
      ++pos_;
      return Formula::disj(lhs, parse_or());
    }
    return lhs;
  }
  Formula parse_and() {
    Formula lhs = parse_unary();
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '&') {
      ++pos_;
      return Formula::conj(lhs, parse_and());
    }
    return lhs;
  }
  Formula parse_unary() {
    skip_ws();
    if (pos_ >= text_.size())
      throw SyntaxError("unexpected end of input in formula", pos_, "formula");
    char c = text_[pos_];
    if (c == '~') {
      ++pos_;
      return Formula::neg(parse_unary());
    }
    if (c == '(') {
      std::size_t open = pos_;
      ++pos_;
      Formula inner = parse_iff();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')')
        throw SyntaxError("unbalanced parenthesis opened at offset " +
                              std::to_string(open),
                          pos_, ")");
      ++pos_;
      return inner;
    }
    if (is_ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      std::string name = text_.substr(start, pos_ - start);
      if (name == "true") return Formula::t();
      if (name == "false") return Formula::f();
      return Formula::atom(name);
    }
    throw SyntaxError(std::string("unexpected character '") + c + "' in formula",
                      pos_, "atom, '~' or '('");
  }
};

}  // namespace detail

inline Formula parse_formula(const std::string& text) {
  detail::FormulaScanner s(text, 0);
  Formula f = s.parse_formula();
  if (!s.at_end())
    throw SyntaxError("trailing input after formula", s.pos(), "end of input");
  return f;
}

inline std::string print_formula(const Formula& f) {
  switch (f.kind()) {
    case Conn::Atom: return f.atom_name();
    case Conn::True: return "true";
    case Conn::False: return "false";
    case Conn::Not: return "(~ " + print_formula(f.left()) + ")";
    case Conn::And: return "(" + print_formula(f.left()) + " & " + print_formula(f.right()) + ")";
    case Conn::Or: return "(" + print_formula(f.left()) + " | " + print_formula(f.right()) + ")";
    case Conn::Implies: return "(" + print_formula(f.left()) + " ==> " + print_formula(f.right()) + ")";
    case Conn::Iff: return "(" + print_formula(f.left()) + " <==> " + print_formula(f.right()) + ")";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Truth-table semantics.

inline bool evaluate(const Formula& f, const Interpretation& i) {
  switch (f.kind()) {
    case Conn::Atom: return i.lookup(f.atom_name());
    case Conn::True: return true;
    case Conn::False: return false;
    case Conn::Not: return !evaluate(f.left(), i);
    case Conn::And: return evaluate(f.left(), i) && evaluate(f.right(), i);
    case Conn::Or: return evaluate(f.left(), i) || evaluate(f.right(), i);
    case Conn::Implies: return !evaluate(f.left(), i) || evaluate(f.right(), i);
    case Conn::Iff: return evaluate(f.left(), i) == evaluate(f.right(), i);
  }
  return false;
}

namespace detail {

// Postorder compilation to a small stack machine so the 2^n truth-table sweep
// avoids per-assignment hash lookups.
struct CompiledFormula {
  struct Op {
    Conn kind;
    int atom_index = -1;
  };
  std::vector<Op> ops;
  std::size_t stack_need = 1;

  void compile(const Formula& f, const std::map<std::string, int>& idx) {
    build(f, idx);
    std::size_t depth = 0, peak = 1;
    for (const Op& op : ops) {
      switch (op.kind) {
        case Conn::Atom:
        case Conn::True:
        case Conn::False: ++depth; break;
        case Conn::Not: break;
        default: --depth;
      }
      peak = std::max(peak, depth);
    }
    stack_need = peak;
  }

  bool eval(std::uint32_t assignment, std::vector<char>& stack) const {
    if (stack.size() < stack_need) stack.resize(stack_need);
    std::size_t sp = 0;
    for (const Op& op : ops) {
      switch (op.kind) {
        case Conn::Atom: stack[sp++] = (assignment >> op.atom_index) & 1u; break;
        case Conn::True: stack[sp++] = 1; break;
        case Conn::False: stack[sp++] = 0; break;
        case Conn::Not: stack[sp - 1] = !stack[sp - 1]; break;
        case Conn::And: --sp; stack[sp - 1] = stack[sp - 1] && stack[sp]; break;
        case Conn::Or: --sp; stack[sp - 1] = stack[sp - 1] || stack[sp]; break;
        case Conn::Implies: --sp; stack[sp - 1] = !stack[sp - 1] || stack[sp]; break;
        case Conn::Iff: --sp; stack[sp - 1] = stack[sp - 1] == stack[sp]; break;
      }
    }
    return stack[0] != 0;
  }

private:
  void build(const Formula& f, const std::map<std::string, int>& idx) {
    switch (f.kind()) {
      case Conn::Atom:
        ops.push_back({Conn::Atom, idx.at(f.atom_name())});
        return;
      case Conn::True:
      case Conn::False:
        ops.push_back({f.kind(), -1});
        return;
      case Conn::Not:
        build(f.left(), idx);
        ops.push_back({Conn::Not, -1});
        return;
      default:
        build(f.left(), idx);
        build(f.right(), idx);
        ops.push_back({f.kind(), -1});
    }
  }
};

}  // namespace detail

inline constexpr std::size_t kDefaultAtomBudget = 24;

// True iff every interpretation satisfying all premises satisfies the goal.
// Exhaustive truth-table sweep over the joint atom set.
inline bool entails(const std::vector<Formula>& premises, const Formula& goal,
                    std::size_t atom_budget = kDefaultAtomBudget) {
  std::set<std::string> names;
  for (const auto& p : premises) collect_atoms(p, names);
  collect_atoms(goal, names);
  if (names.size() > atom_budget) throw AtomBudgetExceeded(names.size(), atom_budget);

  std::map<std::string, int> idx;
  int k = 0;
  for (const auto& n : names) idx[n] = k++;

  std::vector<detail::CompiledFormula> comp(premises.size() + 1);
  for (std::size_t i = 0; i < premises.size(); ++i) comp[i].compile(premises[i], idx);
  comp.back().compile(goal, idx);

  std::vector<char> scratch;
  const std::uint64_t total = std::uint64_t{1} << names.size();
  for (std::uint64_t a = 0; a < total; ++a) {
    bool all = true;
    for (std::size_t i = 0; i < premises.size() && all; ++i)
      all = comp[i].eval(static_cast<std::uint32_t>(a), scratch);
    if (all && !comp.back().eval(static_cast<std::uint32_t>(a), scratch)) return false;
  }
  return true;
}

// Satisfying interpretation of all given formulas, if one exists (used to
// report countermodels). Enumeration order is the lexicographic order of
// assignments with atoms sorted by name.
inline std::optional<Interpretation>
find_model(const std::vector<Formula>& formulas,
           std::size_t atom_budget = kDefaultAtomBudget) {
  std::set<std::string> names;
  for (const auto& f : formulas) collect_atoms(f, names);
  if (names.size() > atom_budget) throw AtomBudgetExceeded(names.size(), atom_budget);

  std::map<std::string, int> idx;
  int k = 0;
  for (const auto& n : names) idx[n] = k++;
  std::vector<detail::CompiledFormula> comp(formulas.size());
  for (std::size_t i = 0; i < formulas.size(); ++i) comp[i].compile(formulas[i], idx);

  std::vector<char> scratch;
  const std::uint64_t total = std::uint64_t{1} << names.size();
  for (std::uint64_t a = 0; a < total; ++a) {
    bool all = true;
    for (std::size_t i = 0; i < formulas.size() && all; ++i)
      all = comp[i].eval(static_cast<std::uint32_t>(a), scratch);
    if (all) {
      std::map<std::string, bool> m;
      for (const auto& [name, bit] : idx) m[name] = (a >> bit) & 1u;
      return Interpretation(std::move(m));
    }
  }
  return std::nullopt;
}

inline bool satisfiable(const std::vector<Formula>& formulas,
                        std::size_t atom_budget = kDefaultAtomBudget) {
  return find_model(formulas, atom_budget).has_value();
}

inline bool tautology(const Formula& f, std::size_t atom_budget = kDefaultAtomBudget) {
  return entails({}, f, atom_budget);
}

// p complements q iff one is the syntactic negation of the other.
inline bool complements(const Formula& p, const Formula& q) {
  return (p.kind() == Conn::Not && p.left() == q) ||
         (q.kind() == Conn::Not && q.left() == p);
}

inline Formula complement_of(const Formula& p) {
  return p.kind() == Conn::Not ? p.left() : Formula::neg(p);
}

// Desugar to the negation/implication fragment:
//   p | q   ->  ~p ==> q
//   p & q   ->  ~(p ==> ~q)
//   p <==> q -> ~((p ==> q) ==> ~(q ==> p))
inline Formula to_neg_imp(const Formula& f) {
  switch (f.kind()) {
    case Conn::Atom:
    case Conn::True:
    case Conn::False: return f;
    case Conn::Not: return Formula::neg(to_neg_imp(f.left()));
    case Conn::Or:
      return Formula::implies(Formula::neg(to_neg_imp(f.left())), to_neg_imp(f.right()));
    case Conn::And:
      return Formula::neg(Formula::implies(to_neg_imp(f.left()),
                                           Formula::neg(to_neg_imp(f.right()))));
    case Conn::Iff: {
      Formula a = to_neg_imp(f.left()), b = to_neg_imp(f.right());
      return Formula::neg(Formula::implies(Formula::implies(a, b),
                                           Formula::neg(Formula::implies(b, a))));
    }
    case Conn::Implies:
      return Formula::implies(to_neg_imp(f.left()), to_neg_imp(f.right()));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Alpha-equivalence keys for problem deduplication. Normal form: sort the
// premises, conjoin right-associatively, form the conditional to the goal,
// universally close, and canonicalize the bound-name order. Two problems get
// the same key iff their normal forms are alpha-equivalent.

namespace detail {

inline Formula rename_atoms(const Formula& f,
                            const std::map<std::string, std::string>& ren) {
  switch (f.kind()) {
    case Conn::Atom: return Formula::atom(ren.at(f.atom_name()));
    case Conn::True:
    case Conn::False: return f;
    case Conn::Not: return Formula::neg(rename_atoms(f.left(), ren));
    case Conn::And: return Formula::conj(rename_atoms(f.left(), ren), rename_atoms(f.right(), ren));
    case Conn::Or: return Formula::disj(rename_atoms(f.left(), ren), rename_atoms(f.right(), ren));
    case Conn::Implies:
      return Formula::implies(rename_atoms(f.left(), ren), rename_atoms(f.right(), ren));
    case Conn::Iff: return Formula::iff(rename_atoms(f.left(), ren), rename_atoms(f.right(), ren));
  }
  return f;
}

inline std::string key_under_renaming(std::vector<Formula> premises, Formula goal,
                                      const std::map<std::string, std::string>& ren) {
  for (auto& p : premises) p = rename_atoms(p, ren);
  goal = rename_atoms(goal, ren);
  std::sort(premises.begin(), premises.end());
  Formula body = goal;
  if (!premises.empty()) {
    Formula conj = premises.back();
    for (std::size_t i = premises.size() - 1; i-- > 0;)
      conj = Formula::conj(premises[i], conj);
    body = Formula::implies(conj, goal);
  }
  return print_formula(body);
}

}  // namespace detail

// Exact up to 8 atoms (all renamings are tried and the lexicographically
// smallest key wins); beyond that a first-occurrence canonicalization is used.
inline std::string alpha_key(const std::vector<Formula>& premises, const Formula& goal) {
  std::set<std::string> names;
  for (const auto& p : premises) collect_atoms(p, names);
  collect_atoms(goal, names);
  std::vector<std::string> atom_list(names.begin(), names.end());
  const std::size_t k = atom_list.size();

  auto fresh = [](std::size_t i) { return "v" + std::to_string(i + 1); };

  if (k <= 8) {
    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i) perm[i] = i;
    std::string best;
    do {
      std::map<std::string, std::string> ren;
      for (std::size_t i = 0; i < k; ++i) ren[atom_list[perm[i]]] = fresh(i);
      std::string key = detail::key_under_renaming(premises, goal, ren);
      if (best.empty() || key < best) best = std::move(key);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return "A:" + best;
  }

  // Fallback: rename by first occurrence in the sorted normal form.
  std::vector<Formula> sorted = premises;
  std::sort(sorted.begin(), sorted.end());
  std::map<std::string, std::string> ren;
  std::size_t next = 0;
  auto visit = [&](const Formula& f, auto&& self) -> void {
    if (f.is_atom()) {
      if (!ren.count(f.atom_name())) ren[f.atom_name()] = fresh(next++);
    } else if (f.kind() == Conn::Not) {
      self(f.left(), self);
    } else if (f.is_binary()) {
      self(f.left(), self);
      self(f.right(), self);
    }
  };
  for (const auto& p : sorted) visit(p, visit);
  visit(goal, visit);
  return "H:" + detail::key_under_renaming(premises, goal, ren);
}

}  // namespace forge

#endif  // FORGE_FORMULA_HPP_
