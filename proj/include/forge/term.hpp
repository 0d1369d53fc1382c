// First-order terms with Dewey positions, matching and substitution. The
// signature convention fixes arity by the leading letter of a function
// symbol: f* unary, g* binary, h* ternary, r* quaternary. Variables start
// with an uppercase letter; other lowercase identifiers are constants.

#ifndef FORGE_TERM_HPP_
#define FORGE_TERM_HPP_

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "forge/formula.hpp"  // SyntaxError, ident helpers

namespace forge {

class TermError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidPosition : public std::runtime_error {
public:
  explicit InvalidPosition(const std::string& what) : std::runtime_error(what) {}
};

using Position = std::vector<int>;  // 1-based child indices; {} is the root

inline std::string print_position(const Position& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(p[i]);
  }
  out += "]";
  return out;
}

// Neither position is a prefix of the other.
inline bool disjoint_positions(const Position& a, const Position& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] != b[i]) return true;
  return false;
}

inline bool is_prefix_of(const Position& a, const Position& b) {
  if (a.size() > b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

class Term {
  struct Node {
    enum class Kind { Var, Const, App } kind;
    std::string name;
    std::vector<std::shared_ptr<const Node>> args;
  };
  std::shared_ptr<const Node> n_;
  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

public:
  enum class Kind { Var, Const, App };

  Term() : Term(constant("a")) {}

  static Term var(std::string name) {
    return Term(std::make_shared<Node>(Node{Node::Kind::Var, std::move(name), {}}));
  }
  static Term constant(std::string name) {
    return Term(std::make_shared<Node>(Node{Node::Kind::Const, std::move(name), {}}));
  }
  static Term app(std::string fn, std::vector<Term> args) {
    std::vector<std::shared_ptr<const Node>> an;
    an.reserve(args.size());
    for (auto& a : args) an.push_back(a.n_);
    return Term(std::make_shared<Node>(Node{Node::Kind::App, std::move(fn), std::move(an)}));
  }

  Kind kind() const { return static_cast<Kind>(n_->kind); }
  const std::string& name() const { return n_->name; }
  std::size_t arity() const { return n_->args.size(); }
  Term arg(std::size_t i) const { return Term(n_->args[i]); }  // 0-based

  bool is_var() const { return n_->kind == Node::Kind::Var; }
  bool is_const() const { return n_->kind == Node::Kind::Const; }
  bool is_app() const { return n_->kind == Node::Kind::App; }

  friend bool operator==(const Term& a, const Term& b) { return eq(a.n_.get(), b.n_.get()); }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  friend bool operator<(const Term& a, const Term& b) {
    return cmp(a.n_.get(), b.n_.get()) < 0;
  }
  std::size_t hash() const { return hash_node(n_.get()); }

private:
  static bool eq(const Node* a, const Node* b) {
    if (a == b) return true;
    if (a->kind != b->kind || a->name != b->name || a->args.size() != b->args.size())
      return false;
    for (std::size_t i = 0; i < a->args.size(); ++i)
      if (!eq(a->args[i].get(), b->args[i].get())) return false;
    return true;
  }
  static int cmp(const Node* a, const Node* b) {
    if (a == b) return 0;
    if (a->kind != b->kind)
      return static_cast<int>(a->kind) < static_cast<int>(b->kind) ? -1 : 1;
    if (int c = a->name.compare(b->name)) return c;
    if (a->args.size() != b->args.size())
      return a->args.size() < b->args.size() ? -1 : 1;
    for (std::size_t i = 0; i < a->args.size(); ++i)
      if (int c = cmp(a->args[i].get(), b->args[i].get())) return c;
    return 0;
  }
  static std::size_t hash_node(const Node* n) {
    std::size_t h = std::hash<std::string>{}(n->name) * 31 +
                    static_cast<std::size_t>(n->kind);
    for (const auto& a : n->args)
      h ^= hash_node(a.get()) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

// Arity by leading letter; 0 means "not a function symbol".
inline int arity_of_symbol(const std::string& fn) {
  if (fn.empty()) return 0;
  switch (fn[0]) {
    case 'f': return 1;
    case 'g': return 2;
    case 'h': return 3;
    case 'r': return 4;
    default: return 0;
  }
}

inline bool is_variable_name(const std::string& s) {
  return !s.empty() && s[0] >= 'A' && s[0] <= 'Z';
}

// ---------------------------------------------------------------------------
// Concrete syntax: lowercase function/constant names, uppercase variables,
// comma-separated arguments in parentheses.

namespace detail {

class TermScanner {
public:
  TermScanner(const std::string& text, std::size_t pos) : text_(text), pos_(pos) {}
  std::size_t pos() const { return pos_; }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r'))
      ++pos_;
  }

  Term parse_term() {
    skip_ws();
    if (pos_ >= text_.size())
      throw SyntaxError("unexpected end of input in term", pos_, "term");
    if (!is_ident_start(text_[pos_]))
      throw SyntaxError(std::string("unexpected character '") + text_[pos_] + "'",
                        pos_, "identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (is_ident_start(text_[pos_]) || std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      if (is_variable_name(name))
        throw SyntaxError("variable '" + name + "' cannot take arguments", start);
      int want = arity_of_symbol(name);
      if (want == 0)
        throw SyntaxError("'" + name + "' is not a function symbol", start,
                          "f*/g*/h*/r* symbol");
      ++pos_;
      std::vector<Term> args;
      while (true) {
        args.push_back(parse_term());
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        break;
      }
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')')
        throw SyntaxError("unbalanced parenthesis in term", pos_, ")");
      ++pos_;
      if (static_cast<int>(args.size()) != want)
        throw TermError("'" + name + "' takes " + std::to_string(want) +
                        " argument(s), got " + std::to_string(args.size()));
      return Term::app(name, std::move(args));
    }
    if (is_variable_name(name)) return Term::var(name);
    if (arity_of_symbol(name) != 0)
      throw TermError("function symbol '" + name + "' used without arguments");
    return Term::constant(name);
  }

private:
  const std::string& text_;
  std::size_t pos_;
};

}  // namespace detail

inline Term parse_term(const std::string& text) {
  detail::TermScanner s(text, 0);
  Term t = s.parse_term();
  s.skip_ws();
  if (s.pos() != text.size())
    throw SyntaxError("trailing input after term", s.pos(), "end of input");
  return t;
}

inline std::string print_term(const Term& t) {
  if (!t.is_app()) return t.name();
  std::string out = t.name() + "(";
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ",";
    out += print_term(t.arg(i));
  }
  out += ")";
  return out;
}

// ---------------------------------------------------------------------------
// Positions.

inline bool position_valid(const Term& t, const Position& p) {
  Term cur = t;
  for (int idx : p) {
    if (idx < 1 || static_cast<std::size_t>(idx) > cur.arity()) return false;
    cur = cur.arg(static_cast<std::size_t>(idx - 1));
  }
  return true;
}

inline Term subterm(const Term& t, const Position& p) {
  Term cur = t;
  for (int idx : p) {
    if (idx < 1 || static_cast<std::size_t>(idx) > cur.arity())
      throw InvalidPosition("position " + print_position(p) + " not in dom(" +
                            print_term(t) + ")");
    cur = cur.arg(static_cast<std::size_t>(idx - 1));
  }
  return cur;
}

inline Term replace(const Term& t, const Position& p, const Term& s,
                    std::size_t depth = 0) {
  if (depth == p.size()) return s;
  int idx = p[depth];
  if (idx < 1 || static_cast<std::size_t>(idx) > t.arity())
    throw InvalidPosition("position " + print_position(p) + " not in dom(" +
                          print_term(t) + ")");
  std::vector<Term> args;
  args.reserve(t.arity());
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i + 1 == static_cast<std::size_t>(idx))
      args.push_back(replace(t.arg(i), p, s, depth + 1));
    else
      args.push_back(t.arg(i));
  }
  return Term::app(t.name(), std::move(args));
}

inline void collect_positions(const Term& t, Position& prefix,
                              std::vector<Position>& out) {
  out.push_back(prefix);
  for (std::size_t i = 0; i < t.arity(); ++i) {
    prefix.push_back(static_cast<int>(i + 1));
    collect_positions(t.arg(i), prefix, out);
    prefix.pop_back();
  }
}

inline std::vector<Position> positions(const Term& t) {
  std::vector<Position> out;
  Position prefix;
  collect_positions(t, prefix, out);
  return out;
}

// ---------------------------------------------------------------------------
// Matching and substitution.

using Substitution = std::map<std::string, Term>;

inline Term apply_substitution(const Term& t, const Substitution& sub) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = sub.find(t.name());
      return it == sub.end() ? t : it->second;
    }
    case Term::Kind::Const: return t;
    case Term::Kind::App: {
      std::vector<Term> args;
      args.reserve(t.arity());
      for (std::size_t i = 0; i < t.arity(); ++i)
        args.push_back(apply_substitution(t.arg(i), sub));
      return Term::app(t.name(), std::move(args));
    }
  }
  return t;
}

namespace detail {

inline bool match_rec(const Term& pattern, const Term& t, Substitution& sub) {
  switch (pattern.kind()) {
    case Term::Kind::Var: {
      auto [it, inserted] = sub.emplace(pattern.name(), t);
      return inserted || it->second == t;
    }
    case Term::Kind::Const:
      return t.is_const() && t.name() == pattern.name();
    case Term::Kind::App: {
      if (!t.is_app() || t.name() != pattern.name() || t.arity() != pattern.arity())
        return false;
      for (std::size_t i = 0; i < pattern.arity(); ++i)
        if (!match_rec(pattern.arg(i), t.arg(i), sub)) return false;
      return true;
    }
  }
  return false;
}

}  // namespace detail

// theta with theta(pattern) = t, or none; variables bind consistently.
inline std::optional<Substitution> match_term(const Term& pattern, const Term& t) {
  Substitution sub;
  if (detail::match_rec(pattern, t, sub)) return sub;
  return std::nullopt;
}

inline void collect_symbols(const Term& t, std::set<std::string>& out) {
  if (!t.is_var()) out.insert(t.name());
  for (std::size_t i = 0; i < t.arity(); ++i) collect_symbols(t.arg(i), out);
}

inline std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < t.arity(); ++i) n += term_size(t.arg(i));
  return n;
}

// Normalized longest-common-prefix similarity of two positions: 1 when
// identical, 0 when they diverge at the root, 2*lcp/(|a|+|b|) in between
// (e.g. [3,3,1] vs [3,3] -> 0.8).
inline double position_similarity(const Position& a, const Position& b) {
  if (a == b) return 1.0;
  std::size_t lcp = 0;
  while (lcp < a.size() && lcp < b.size() && a[lcp] == b[lcp]) ++lcp;
  return (2.0 * static_cast<double>(lcp)) /
         static_cast<double>(a.size() + b.size());
}

}  // namespace forge

#endif  // FORGE_TERM_HPP_
