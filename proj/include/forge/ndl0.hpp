// NDL0: the inference-rule-free language where each atomic step claims a
// semantic entailment, checked against the truth-table oracle. Includes the
// reasoning-graph analytics and the rule-to-entailment translation from NDL.

#ifndef FORGE_NDL0_HPP_
#define FORGE_NDL0_HPP_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "forge/ndl.hpp"

namespace forge {

inline constexpr std::size_t kFromStepMaxArgs = 5;

struct Ndl0Proof;
using Ndl0ProofPtr = std::shared_ptr<const Ndl0Proof>;

struct Ndl0Step {
  std::optional<std::string> name;
  Ndl0ProofPtr proof;
};

struct Ndl0Proof {
  enum class Kind { FromStep, Assume, Compose } kind;
  int line = 0, column = 0;

  // FromStep
  Formula conclusion;
  std::vector<NdlArg> args;

  // Assume
  std::optional<std::string> hyp_name;
  std::optional<NdlArg> hypothesis;
  Ndl0ProofPtr body;

  // Compose
  std::vector<Ndl0Step> steps;
};

struct Ndl0Program {
  std::vector<std::pair<std::string, Formula>> asserts;
  std::optional<Formula> goal;
  Ndl0ProofPtr main;
};

// ---------------------------------------------------------------------------
// Parser. Same assert/assume/brace scaffolding as NDL; atomic steps read
//   conclusion from a1, ..., ak
// with an optional `name :=` prefix.

namespace detail {

class Ndl0Parser {
public:
  explicit Ndl0Parser(std::string text) : lex_(std::move(text)) {}

  Ndl0Program parse_program() {
    Ndl0Program prog;
    prog.goal = scan_goal(lex_.text());
    while (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "assert") {
      lex_.next();
      if (lex_.peek().kind != Token::Kind::Ident)
        throw SyntaxError("expected premise name", lex_.peek().offset, "identifier");
      Token name = lex_.next();
      if (lex_.peek().kind != Token::Kind::Assign)
        throw SyntaxError("expected ':='", lex_.peek().offset, ":=");
      lex_.next();
      prog.asserts.emplace_back(name.text, parse_formula_here());
      if (lex_.peek().kind == Token::Kind::Semi) lex_.next();
    }
    prog.main = parse_proof();
    if (lex_.peek().kind != Token::Kind::End)
      throw SyntaxError("trailing input after proof", lex_.peek().offset, "end of input");
    return prog;
  }

  Ndl0ProofPtr parse_proof() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::LBrace) return parse_compose();
    if (t.kind == Token::Kind::Ident && t.text == "assume") return parse_assume();
    return parse_from_step();
  }

private:
  ProofLexer lex_;

  static std::optional<Formula> scan_goal(const std::string& text) {
    std::size_t pos = 0;
    while ((pos = text.find('#', pos)) != std::string::npos) {
      std::size_t eol = text.find('\n', pos);
      std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos
                                                                   : eol - pos);
      std::size_t g = line.find("Goal:");
      if (g != std::string::npos) {
        std::string rest = line.substr(g + 5);
        std::size_t s = rest.find_first_not_of(" \t");
        if (s != std::string::npos && rest.compare(s, 5, "Prove") == 0 &&
            (s + 5 >= rest.size() || !is_ident_char(rest[s + 5])))
          rest = rest.substr(s + 5);
        std::size_t a = rest.find_first_not_of(" \t\r");
        std::size_t b = rest.find_last_not_of(" \t\r");
        if (a == std::string::npos) return std::nullopt;
        try {
          return parse_formula(rest.substr(a, b - a + 1));
        } catch (const SyntaxError&) {
          return std::nullopt;
        }
      }
      pos = eol == std::string::npos ? text.size() : eol;
    }
    return std::nullopt;
  }

  Formula parse_formula_here() {
    FormulaScanner fs(lex_.text(), lex_.peek().offset);
    Formula f = fs.parse_formula();
    lex_.reset_to(fs.pos());
    return f;
  }

  NdlArg parse_arg() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Ident) {
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
    FormulaScanner fs(lex_.text(), t.offset);
    Formula f = fs.parse_formula();
    lex_.reset_to(fs.pos());
    return NdlArg{std::nullopt, f};
  }

  Ndl0ProofPtr parse_compose() {
    Token open = lex_.next();
    auto node = std::make_shared<Ndl0Proof>();
    node->kind = Ndl0Proof::Kind::Compose;
    node->line = open.line;
    node->column = open.column;
    while (true) {
      if (lex_.peek().kind == Token::Kind::RBrace) break;
      Ndl0Step step;
      if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text != "assume") {
        ProofLexer probe = lex_;
        probe.next();
        if (probe.peek().kind == Token::Kind::Assign) {
          step.name = lex_.next().text;
          lex_.next();
        }
      }
      step.proof = parse_proof();
      node->steps.push_back(std::move(step));
      if (lex_.peek().kind == Token::Kind::Semi) {
        lex_.next();
      } else if (lex_.peek().kind != Token::Kind::RBrace) {
        throw SyntaxError("expected ';' or '}' after proof step",
                          lex_.peek().offset, "';' or '}'");
      }
    }
    if (node->steps.empty())
      throw SyntaxError("empty proof body", open.offset, "proof step");
    lex_.next();
    return node;
  }

  Ndl0ProofPtr parse_assume() {
    Token kw = lex_.next();
    auto node = std::make_shared<Ndl0Proof>();
    node->kind = Ndl0Proof::Kind::Assume;
    node->line = kw.line;
    node->column = kw.column;
    if (lex_.peek().kind == Token::Kind::Ident) {
      ProofLexer probe = lex_;
      probe.next();
      if (probe.peek().kind == Token::Kind::Assign) {
        node->hyp_name = lex_.next().text;
        lex_.next();
        node->hypothesis = NdlArg{std::nullopt, parse_formula_here()};
        node->body = parse_proof();
        return node;
      }
    }
    node->hypothesis = parse_arg();
    node->body = parse_proof();
    return node;
  }

  Ndl0ProofPtr parse_from_step() {
    Token start = lex_.peek();
    FormulaScanner fs(lex_.text(), start.offset);
    Formula conclusion = fs.parse_formula();
    lex_.reset_to(fs.pos());
    if (!(lex_.peek().kind == Token::Kind::Ident && ieq(lex_.peek().text, "from")))
      throw SyntaxError("expected 'from' after the step conclusion",
                        lex_.peek().offset, "from");
    lex_.next();
    auto node = std::make_shared<Ndl0Proof>();
    node->kind = Ndl0Proof::Kind::FromStep;
    node->line = start.line;
    node->column = start.column;
    node->conclusion = conclusion;
    node->args.push_back(parse_arg());
    while (lex_.peek().kind == Token::Kind::Comma) {
      lex_.next();
      node->args.push_back(parse_arg());
    }
    return node;
  }
};

}  // namespace detail

inline Ndl0Program parse_ndl0_program(const std::string& text) {
  detail::Ndl0Parser p(text);
  return p.parse_program();
}

inline Ndl0ProofPtr parse_ndl0_proof(const std::string& text) {
  detail::Ndl0Parser p(text);
  return p.parse_program().main;
}

namespace detail {

inline void print_ndl0_rec(const Ndl0Proof& p, std::string& out, int indent) {
  switch (p.kind) {
    case Ndl0Proof::Kind::FromStep: {
      out += print_formula(p.conclusion) + " from ";
      for (std::size_t i = 0; i < p.args.size(); ++i) {
        if (i) out += ", ";
        out += p.args[i].is_ident() ? *p.args[i].ident
                                    : print_formula(p.args[i].formula);
      }
      break;
    }
    case Ndl0Proof::Kind::Assume: {
      out += "assume ";
      if (p.hyp_name) out += *p.hyp_name + " := ";
      out += p.hypothesis->is_ident() ? *p.hypothesis->ident
                                      : print_formula(p.hypothesis->formula);
      out += " ";
      print_ndl0_rec(*p.body, out, indent);
      break;
    }
    case Ndl0Proof::Kind::Compose: {
      out += "{\n";
      for (std::size_t i = 0; i < p.steps.size(); ++i) {
        out.append(indent + 2, ' ');
        if (p.steps[i].name) out += *p.steps[i].name + " := ";
        print_ndl0_rec(*p.steps[i].proof, out, indent + 2);
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

inline std::string print_ndl0_proof(const Ndl0ProofPtr& p) {
  std::string out;
  detail::print_ndl0_rec(*p, out, 0);
  return out;
}

inline std::string print_ndl0_program(const Ndl0Program& prog) {
  std::string out;
  for (const auto& [name, f] : prog.asserts)
    out += "assert " + name + " := " + print_formula(f) + "\n";
  if (prog.goal) out += "# Goal: " + print_formula(*prog.goal) + "\n";
  if (!prog.asserts.empty() || prog.goal) out += "\n";
  out += print_ndl0_proof(prog.main);
  out += "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation. A from-step succeeds iff every argument is in the assumption
// base and the conclusion follows from the arguments; a failing entailment is
// reported with a countermodel.

struct Ndl0EvalOptions {
  std::optional<std::set<std::string>> atom_universe;
  std::size_t atom_budget = kDefaultAtomBudget;
  // Optional stricter reading of the arity cap: at most 5 conjuncts in total
  // across the cited arguments. Off by default.
  bool cap_total_conjuncts = false;
};

struct Ndl0Error {
  NdlError base;                             // kind, location, detail
  std::optional<Interpretation> countermodel;  // for failed entailments
};

struct Ndl0Verdict {
  std::optional<Formula> conclusion;
  std::optional<Ndl0Error> error;
  bool ok() const { return conclusion.has_value(); }
};

namespace detail {

inline std::size_t top_conjunct_count(const Formula& f) {
  if (f.kind() != Conn::And) return 1;
  return top_conjunct_count(f.left()) + top_conjunct_count(f.right());
}

struct Ndl0Evaluator {
  Ndl0EvalOptions opts;
  int step_counter = 0;

  NdlEvaluator resolver() const {
    NdlEvalOptions o;
    o.atom_universe = opts.atom_universe;
    return NdlEvaluator{o};
  }

  Ndl0Verdict fail(NdlError e, std::optional<Interpretation> cm = std::nullopt) {
    return Ndl0Verdict{std::nullopt, Ndl0Error{std::move(e), std::move(cm)}};
  }

  Ndl0Verdict eval(const Ndl0Proof& p, AssumptionBase base, Environment env) {
    switch (p.kind) {
      case Ndl0Proof::Kind::FromStep: {
        int step = ++step_counter;
        auto rc = resolver().resolve_formula(p.conclusion, env, p.line, p.column, step);
        if (rc.error) return fail(*rc.error);
        std::vector<Formula> args;
        std::size_t conjuncts = 0;
        for (const NdlArg& a : p.args) {
          auto r = resolver().resolve(a, env, p.line, p.column, step);
          if (r.error) return fail(*r.error);
          args.push_back(*r.formula);
          conjuncts += top_conjunct_count(*r.formula);
        }
        if (args.size() > kFromStepMaxArgs ||
            (opts.cap_total_conjuncts && conjuncts > kFromStepMaxArgs)) {
          NdlError e;
          e.kind = NdlErrorKind::MalformedRuleApp;
          e.line = p.line;
          e.column = p.column;
          e.step = step;
          e.detail = "a from-step may cite at most " +
                     std::to_string(kFromStepMaxArgs) + " formulas";
          e.offending = args;
          return fail(e);
        }
        for (const Formula& a : args)
          if (!base.contains(a)) {
            NdlError e = not_in_ab("from", a);
            e.line = p.line;
            e.column = p.column;
            e.step = step;
            return fail(e);
          }
        std::vector<Formula> counterset = args;
        counterset.push_back(Formula::neg(*rc.formula));
        std::optional<Interpretation> cm = find_model(counterset, opts.atom_budget);
        if (cm) {
          NdlError e;
          e.kind = NdlErrorKind::WrongConclusion;
          e.line = p.line;
          e.column = p.column;
          e.step = step;
          e.offending = args;
          e.actual = *rc.formula;
          e.detail = "conclusion " + print_formula(*rc.formula) +
                     " does not follow from the cited formulas";
          return fail(e, cm);
        }
        return Ndl0Verdict{*rc.formula, std::nullopt};
      }
      case Ndl0Proof::Kind::Assume: {
        int step = ++step_counter;
        auto r = resolver().resolve_formula(p.hypothesis->formula, env, p.line,
                                            p.column, step);
        if (r.error) {
          NdlError e = *r.error;
          e.kind = NdlErrorKind::MalformedAssumption;
          e.detail = "hypothesis is not a valid formula: " + e.detail;
          return fail(e);
        }
        AssumptionBase inner = base;
        inner.insert(*r.formula);
        Environment scoped = env;
        if (p.hyp_name) scoped.bind(*p.hyp_name, *r.formula);
        Ndl0Verdict body = eval(*p.body, std::move(inner), std::move(scoped));
        if (!body.ok()) return body;
        return Ndl0Verdict{Formula::implies(*r.formula, *body.conclusion), std::nullopt};
      }
      case Ndl0Proof::Kind::Compose: {
        AssumptionBase cur = std::move(base);
        Environment scoped = std::move(env);
        std::optional<Formula> last;
        for (const Ndl0Step& s : p.steps) {
          Ndl0Verdict v = eval(*s.proof, cur, scoped);
          if (!v.ok()) return v;
          cur.insert(*v.conclusion);
          if (s.name) scoped.bind(*s.name, *v.conclusion);
          last = v.conclusion;
        }
        return Ndl0Verdict{*last, std::nullopt};
      }
    }
    NdlError e;
    e.kind = NdlErrorKind::Parsing;
    e.detail = "corrupt proof node";
    return fail(e);
  }
};

}  // namespace detail

inline Ndl0Verdict eval0(const Ndl0Proof& proof, const AssumptionBase& base,
                         const Environment& env, Ndl0EvalOptions opts = {}) {
  detail::Ndl0Evaluator ev{std::move(opts)};
  return ev.eval(proof, base, env);
}

struct Ndl0CheckReport {
  Ndl0Verdict verdict;
  bool conclusion_matches_goal = false;
  bool ok() const { return verdict.ok() && conclusion_matches_goal; }
};

inline Ndl0CheckReport
check_argument0(const std::vector<std::pair<std::string, Formula>>& premises,
                const Formula& goal, const std::string& proof_text,
                std::size_t atom_budget = kDefaultAtomBudget) {
  Ndl0CheckReport report;
  Ndl0Program prog;
  try {
    prog = parse_ndl0_program(proof_text);
  } catch (const SyntaxError& ex) {
    NdlError e;
    e.kind = NdlErrorKind::Parsing;
    e.detail = ex.what();
    report.verdict = Ndl0Verdict{std::nullopt, Ndl0Error{e, std::nullopt}};
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
  Ndl0EvalOptions opts;
  opts.atom_universe = universe;
  opts.atom_budget = atom_budget;
  report.verdict = eval0(*prog.main, base, env, opts);
  if (report.verdict.ok())
    report.conclusion_matches_goal = (*report.verdict.conclusion == goal);
  return report;
}

// ---------------------------------------------------------------------------
// Reasoning graph: nodes are premises, hypotheses and lemmas (one node per
// from-step), plus a false sink; a directed edge runs from every cited
// argument's source node to the step that cites it. The reasoning depth is
// the length of a maximal source-to-sink branch.

struct ReasoningGraph {
  struct Node {
    enum class Kind { Premise, Hypothesis, Lemma, FalseSink } kind;
    Formula formula;
    std::optional<std::string> name;
  };
  std::vector<Node> nodes;
  std::vector<std::pair<int, int>> edges;
  bool has_false_sink = false;

  bool acyclic() const {
    std::vector<std::vector<int>> adj(nodes.size());
    std::vector<int> indeg(nodes.size(), 0);
    for (auto [a, b] : edges) {
      adj[a].push_back(b);
      ++indeg[b];
    }
    std::vector<int> queue;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (indeg[i] == 0) queue.push_back(static_cast<int>(i));
    std::size_t seen = 0;
    while (seen < queue.size()) {
      int u = queue[seen++];
      for (int v : adj[u])
        if (--indeg[v] == 0) queue.push_back(v);
    }
    return seen == nodes.size();
  }

  // Longest path (in edges) from any source to the sink node.
  int depth() const {
    std::vector<std::vector<int>> radj(nodes.size());
    std::vector<int> indeg(nodes.size(), 0);
    std::vector<std::vector<int>> adj(nodes.size());
    for (auto [a, b] : edges) {
      adj[a].push_back(b);
      ++indeg[b];
    }
    std::vector<int> order;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (indeg[i] == 0) order.push_back(static_cast<int>(i));
    std::vector<int> dist(nodes.size(), 0);
    for (std::size_t k = 0; k < order.size(); ++k) {
      int u = order[k];
      for (int v : adj[u]) {
        dist[v] = std::max(dist[v], dist[u] + 1);
        if (--indeg[v] == 0) order.push_back(v);
      }
    }
    int best = 0;
    for (int d : dist) best = std::max(best, d);
    return best;
  }
};

namespace detail {

struct GraphBuilder {
  ReasoningGraph g;
  // formula -> most recent node that introduced it
  std::unordered_map<Formula, int, FormulaHash> latest;
  std::unordered_map<std::string, int> by_name;
  int last_lemma = -1;
  int last_false_lemma = -1;

  int add_node(ReasoningGraph::Node n) {
    g.nodes.push_back(std::move(n));
    int id = static_cast<int>(g.nodes.size()) - 1;
    latest[g.nodes[id].formula] = id;
    if (g.nodes[id].name) by_name[*g.nodes[id].name] = id;
    return id;
  }

  std::optional<int> source_of(const NdlArg& arg, const Formula& resolved) {
    if (arg.is_ident()) {
      auto it = by_name.find(*arg.ident);
      if (it != by_name.end()) return it->second;
    }
    auto it = latest.find(resolved);
    if (it != latest.end()) return it->second;
    return std::nullopt;
  }
};

inline void build_graph(const Ndl0Proof& p, GraphBuilder& b, Environment& env,
                        const Ndl0EvalOptions& opts) {
  NdlEvalOptions ropts;
  ropts.atom_universe = opts.atom_universe;
  NdlEvaluator resolver{ropts};
  switch (p.kind) {
    case Ndl0Proof::Kind::FromStep: {
      auto rc = resolver.resolve_formula(p.conclusion, env, 0, 0, 0);
      if (!rc.formula) return;
      int node = b.add_node({ReasoningGraph::Node::Kind::Lemma, *rc.formula,
                             std::nullopt});
      for (const NdlArg& a : p.args) {
        auto r = resolver.resolve(a, env, 0, 0, 0);
        if (!r.formula) continue;
        // source nodes must already exist; arguments are premises, hypotheses
        // or earlier lemmas
        if (auto src = b.source_of(a, *r.formula)) {
          if (*src != node) b.g.edges.emplace_back(*src, node);
        }
      }
      b.last_lemma = node;
      if (rc.formula->kind() == Conn::False) b.last_false_lemma = node;
      break;
    }
    case Ndl0Proof::Kind::Assume: {
      auto r = resolver.resolve_formula(p.hypothesis->formula, env, 0, 0, 0);
      if (r.formula) {
        b.add_node({ReasoningGraph::Node::Kind::Hypothesis, *r.formula, p.hyp_name});
        Environment scoped = env;
        if (p.hyp_name) scoped.bind(*p.hyp_name, *r.formula);
        build_graph(*p.body, b, scoped, opts);
      }
      break;
    }
    case Ndl0Proof::Kind::Compose: {
      for (const Ndl0Step& s : p.steps) {
        build_graph(*s.proof, b, env, opts);
        if (s.name && b.last_lemma >= 0) {
          // bind the step name to the lemma node for later reference
          b.by_name[*s.name] = b.last_lemma;
          Formula concl = b.g.nodes[b.last_lemma].formula;
          env.bind(*s.name, concl);
          b.g.nodes[b.last_lemma].name = *s.name;
        }
      }
      break;
    }
  }
}

}  // namespace detail

// Builds the dependency DAG of an (assumed valid) proof. The mock arc into
// the false sink is added when the proof ends in a false-deriving lemma.
inline ReasoningGraph
reasoning_graph(const Ndl0Program& prog,
                const std::vector<std::pair<std::string, Formula>>& premises = {},
                Ndl0EvalOptions opts = {}) {
  detail::GraphBuilder b;
  Environment env;
  std::set<std::string> universe;
  for (const auto& [name, f] : premises) {
    b.add_node({ReasoningGraph::Node::Kind::Premise, f, name});
    env.bind(name, f);
    collect_atoms(f, universe);
  }
  for (const auto& [name, f] : prog.asserts) {
    b.add_node({ReasoningGraph::Node::Kind::Premise, f, name});
    env.bind(name, f);
    collect_atoms(f, universe);
  }
  if (!opts.atom_universe) opts.atom_universe = universe;
  detail::build_graph(*prog.main, b, env, opts);
  if (b.last_false_lemma >= 0) {
    int sink = b.add_node({ReasoningGraph::Node::Kind::FalseSink, Formula::f(),
                           std::nullopt});
    b.g.edges.emplace_back(b.last_false_lemma, sink);
    b.g.has_false_sink = true;
  }
  return b.g;
}

inline int reasoning_depth(const Ndl0Program& prog,
                           const std::vector<std::pair<std::string, Formula>>& premises = {}) {
  return reasoning_graph(prog, premises).depth();
}

// ---------------------------------------------------------------------------
// NDL -> NDL0 translation of a single valid rule application: the conclusion
// is claimed `from` exactly the membership-checked arguments (from-false cites
// the `false` literal; ex-middle, which needs nothing from the base, cites its
// instantiating formula when available or any base formula otherwise).

inline Ndl0ProofPtr ndl_to_ndl0(const std::string& rule,
                                const std::vector<Formula>& args,
                                const AssumptionBase& base) {
  RuleOutcome out = apply_rule(rule, args, base);
  if (!out.conclusion)
    throw std::invalid_argument("ndl_to_ndl0 requires a valid rule application");

  auto node = std::make_shared<Ndl0Proof>();
  node->kind = Ndl0Proof::Kind::FromStep;
  node->conclusion = *out.conclusion;

  std::vector<Formula> cited;
  if (rule == "from-false") {
    cited.push_back(Formula::f());
  } else if (rule == "ex-middle") {
    if (base.contains(args[0])) {
      cited.push_back(args[0]);
    } else if (base.size() > 0) {
      cited.push_back(base.formulas().front());
    } else {
      throw std::invalid_argument(
          "ex-middle cannot be simulated in an empty assumption base");
    }
  } else {
    for (int i : rule_membership_indices(rule)) cited.push_back(args[i]);
  }
  for (const Formula& f : cited) node->args.push_back(NdlArg{std::nullopt, f});
  return node;
}

}  // namespace forge

#endif  // FORGE_NDL0_HPP_
