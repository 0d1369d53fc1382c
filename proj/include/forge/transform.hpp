// Proof transformations: masking, gap insertion, and seeded corruption of
// NDL proofs. Gold artifacts always re-validate through the checkers; any
// candidate answer is graded semantically by unmasking/splicing and
// re-checking, never by string match.

#ifndef FORGE_TRANSFORM_HPP_
#define FORGE_TRANSFORM_HPP_

#include "forge/gen.hpp"
#include "forge/instrumented.hpp"
#include "forge/ndl.hpp"
#include "forge/rng.hpp"

namespace forge {

// ---------------------------------------------------------------------------
// Printing with substitutions. Mask and gap emission share one printer.

namespace detail {

struct SubstitutionContext {
  std::unordered_map<const NdlProof*, std::string> rule_masks;
  std::unordered_map<const NdlProof*, std::string> conclusion_masks;
  std::unordered_map<const NdlProof*, std::string> hyp_masks;
  std::unordered_map<const NdlProof*, std::map<int, std::string>> arg_masks;
  // compose node -> regions (first step, last step, token), non-overlapping
  std::unordered_map<const NdlProof*, std::vector<std::tuple<int, int, std::string>>>
      gap_regions;
};

inline std::string print_arg_sub(const NdlArg& a) {
  return a.is_ident() ? *a.ident : print_formula(a.formula);
}

inline void print_sub_rec(const NdlProof& p, const SubstitutionContext& ctx,
                          std::string& out, int indent);

inline void print_sub_step(const NdlStep& s, const SubstitutionContext& ctx,
                           std::string& out, int indent) {
  out.append(static_cast<std::size_t>(indent), ' ');
  if (s.name) out += *s.name + " := ";
  print_sub_rec(*s.proof, ctx, out, indent);
}

inline void print_sub_rec(const NdlProof& p, const SubstitutionContext& ctx,
                          std::string& out, int indent) {
  switch (p.kind) {
    case NdlProof::Kind::RuleApp: {
      auto rit = ctx.rule_masks.find(&p);
      out += (rit != ctx.rule_masks.end() ? rit->second : p.rule) + " on ";
      auto ait = ctx.arg_masks.find(&p);
      for (std::size_t i = 0; i < p.args.size(); ++i) {
        if (i) out += ", ";
        if (ait != ctx.arg_masks.end()) {
          auto t = ait->second.find(static_cast<int>(i));
          if (t != ait->second.end()) {
            out += t->second;
            continue;
          }
        }
        out += print_arg_sub(p.args[i]);
      }
      break;
    }
    case NdlProof::Kind::ByAnnotated: {
      auto cit = ctx.conclusion_masks.find(&p);
      out += (cit != ctx.conclusion_masks.end() ? cit->second
                                                : print_formula(p.claimed)) +
             " BY ";
      print_sub_rec(*p.inner, ctx, out, indent);
      break;
    }
    case NdlProof::Kind::Assume: {
      out += "assume ";
      if (p.hyp_name) out += *p.hyp_name + " := ";
      auto hit = ctx.hyp_masks.find(&p);
      out += hit != ctx.hyp_masks.end() ? hit->second : print_arg_sub(*p.hypothesis);
      out += " ";
      print_sub_rec(*p.body, ctx, out, indent);
      break;
    }
    case NdlProof::Kind::Compose: {
      out += "{\n";
      const std::vector<std::tuple<int, int, std::string>>* regions = nullptr;
      auto git = ctx.gap_regions.find(&p);
      if (git != ctx.gap_regions.end()) regions = &git->second;
      std::size_t emitted = 0;
      for (std::size_t i = 0; i < p.steps.size();) {
        const std::tuple<int, int, std::string>* region = nullptr;
        if (regions)
          for (const auto& r : *regions)
            if (std::get<0>(r) == static_cast<int>(i)) region = &r;
        if (region) {
          if (emitted) out += ";\n";
          out.append(static_cast<std::size_t>(indent + 2), ' ');
          out += std::get<2>(*region);
          i = static_cast<std::size_t>(std::get<1>(*region)) + 1;
        } else {
          if (emitted) out += ";\n";
          print_sub_step(p.steps[i], ctx, out, indent + 2);
          ++i;
        }
        ++emitted;
      }
      out += "\n";
      out.append(static_cast<std::size_t>(indent), ' ');
      out += "}";
      break;
    }
  }
}

inline std::string print_sub_program(const NdlProgram& prog,
                                     const SubstitutionContext& ctx) {
  std::string out;
  for (const auto& [name, f] : prog.asserts)
    out += "assert " + name + " := " + print_formula(f) + "\n";
  if (prog.goal) out += "# Goal: " + print_formula(*prog.goal) + "\n";
  if (!prog.asserts.empty() || prog.goal) out += "\n";
  print_sub_rec(*prog.main, ctx, out, 0);
  out += "\n";
  return out;
}

// Maskable occupants in textual order.
struct MaskCandidate {
  enum class Kind { Conclusion, Rule, Assumption, Argument } kind;
  const NdlProof* node;
  int arg_index = -1;
  std::string value;  // the occupant as written
};

inline void collect_candidates(const NdlProof& p, std::vector<MaskCandidate>& out) {
  switch (p.kind) {
    case NdlProof::Kind::RuleApp: {
      out.push_back({MaskCandidate::Kind::Rule, &p, -1, p.rule});
      for (std::size_t i = 0; i < p.args.size(); ++i)
        out.push_back({MaskCandidate::Kind::Argument, &p, static_cast<int>(i),
                       print_arg_sub(p.args[i])});
      break;
    }
    case NdlProof::Kind::ByAnnotated:
      out.push_back({MaskCandidate::Kind::Conclusion, &p, -1,
                     print_formula(p.claimed)});
      collect_candidates(*p.inner, out);
      break;
    case NdlProof::Kind::Assume:
      out.push_back({MaskCandidate::Kind::Assumption, &p, -1,
                     print_arg_sub(*p.hypothesis)});
      collect_candidates(*p.body, out);
      break;
    case NdlProof::Kind::Compose:
      for (const NdlStep& s : p.steps) collect_candidates(*s.proof, out);
      break;
  }
}

inline int count_step_lines(const NdlProof& p) {
  switch (p.kind) {
    case NdlProof::Kind::RuleApp: return 1;
    case NdlProof::Kind::ByAnnotated: return count_step_lines(*p.inner);
    case NdlProof::Kind::Assume: return 1 + count_step_lines(*p.body);
    case NdlProof::Kind::Compose: {
      int n = 0;
      for (const NdlStep& s : p.steps) n += count_step_lines(*s.proof);
      return n;
    }
  }
  return 0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Masking: conclusions (preceding BY), rules (preceding `on`), assumptions
// (following `assume`), rule arguments (following `on`). Only whole top-level
// occupants, never proper subformulas. Masks are unique identifiers.

struct MaskedProof {
  std::string text;
  std::map<std::string, std::string> assignment;  // MASKk -> occupant
  std::map<std::string, std::string> kinds;       // MASKk -> kind
  int maskable_lines = 0;
};

inline const char* to_string(detail::MaskCandidate::Kind k) {
  switch (k) {
    case detail::MaskCandidate::Kind::Conclusion: return "conclusion";
    case detail::MaskCandidate::Kind::Rule: return "rule";
    case detail::MaskCandidate::Kind::Assumption: return "assumption";
    case detail::MaskCandidate::Kind::Argument: return "rule-argument";
  }
  return "?";
}

inline MaskedProof mask_proof(const NdlProgram& prog, double fraction,
                              std::uint64_t seed) {
  if (fraction < 0 || fraction > 1)
    throw std::invalid_argument("mask fraction must lie in [0, 1]");
  std::vector<detail::MaskCandidate> candidates;
  detail::collect_candidates(*prog.main, candidates);
  Rng rng(seed);
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::size_t k = static_cast<std::size_t>(fraction * static_cast<double>(candidates.size()) + 0.5);
  order.resize(std::min(k, order.size()));
  std::sort(order.begin(), order.end());  // tokens numbered in textual order

  detail::SubstitutionContext ctx;
  MaskedProof out;
  int next_token = 1;
  for (std::size_t idx : order) {
    const detail::MaskCandidate& c = candidates[idx];
    std::string token = "MASK" + std::to_string(next_token++);
    out.assignment[token] = c.value;
    out.kinds[token] = to_string(c.kind);
    switch (c.kind) {
      case detail::MaskCandidate::Kind::Rule:
        ctx.rule_masks[c.node] = token;
        break;
      case detail::MaskCandidate::Kind::Conclusion:
        ctx.conclusion_masks[c.node] = token;
        break;
      case detail::MaskCandidate::Kind::Assumption:
        ctx.hyp_masks[c.node] = token;
        break;
      case detail::MaskCandidate::Kind::Argument:
        ctx.arg_masks[c.node][c.arg_index] = token;
        break;
    }
  }
  out.text = detail::print_sub_program(prog, ctx);
  out.maskable_lines = detail::count_step_lines(*prog.main);
  return out;
}

// Token substitution; longest tokens first so MASK1 never clobbers MASK10.
inline std::string unmask(const std::string& masked_text,
                          const std::map<std::string, std::string>& assignment) {
  std::vector<std::pair<std::string, std::string>> subs(assignment.begin(),
                                                        assignment.end());
  std::sort(subs.begin(), subs.end(), [](const auto& a, const auto& b) {
    return a.first.size() > b.first.size();
  });
  std::string out = masked_text;
  for (const auto& [token, value] : subs) {
    std::size_t pos = 0;
    while ((pos = out.find(token, pos)) != std::string::npos) {
      bool left_ok = pos == 0 || !is_ident_char(out[pos - 1]);
      bool right_ok = pos + token.size() >= out.size() ||
                      !is_ident_char(out[pos + token.size()]);
      if (left_ok && right_ok) {
        out.replace(pos, token.size(), value);
        pos += value.size();
      } else {
        pos += token.size();
      }
    }
  }
  return out;
}

inline double mask_density(const MaskedProof& masked) {
  if (masked.maskable_lines == 0) return 0;
  return static_cast<double>(masked.assignment.size()) /
         static_cast<double>(masked.maskable_lines);
}

// ---------------------------------------------------------------------------
// Gap insertion: a gap replaces an entire subproof (single step, conditional
// subproof, or a chain of consecutive subproofs).

struct GappedProof {
  std::string text;
  std::map<std::string, std::string> gold;  // GAP-k -> elided step text
  double elided_fraction = 0;
};

inline GappedProof insert_gaps(const NdlProgram& prog, double fraction,
                               std::uint64_t seed) {
  if (fraction < 0.3 || fraction > 0.99)
    throw std::invalid_argument("elided fraction must lie in [0.3, 0.99]");
  Rng rng(seed);

  std::vector<const NdlProof*> composes;
  auto walk = [&composes](const NdlProof& p, auto&& self) -> void {
    switch (p.kind) {
      case NdlProof::Kind::Compose:
        composes.push_back(&p);
        for (const NdlStep& s : p.steps) self(*s.proof, self);
        break;
      case NdlProof::Kind::Assume: self(*p.body, self); break;
      case NdlProof::Kind::ByAnnotated: self(*p.inner, self); break;
      default: break;
    }
  };
  walk(*prog.main, walk);
  if (composes.empty()) throw std::invalid_argument("proof has no composite body");

  const int total_lines = detail::count_step_lines(*prog.main);
  detail::SubstitutionContext ctx;
  GappedProof out;
  // claimed[node] marks steps already inside a gap (directly or transitively)
  std::set<const NdlProof*> claimed;
  auto claim_subtree = [&claimed](const NdlProof& p, auto&& self) -> void {
    claimed.insert(&p);
    switch (p.kind) {
      case NdlProof::Kind::Compose:
        for (const NdlStep& s : p.steps) self(*s.proof, self);
        break;
      case NdlProof::Kind::Assume: self(*p.body, self); break;
      case NdlProof::Kind::ByAnnotated: self(*p.inner, self); break;
      default: break;
    }
  };

  int elided = 0;
  int next_gap = 1;
  const int max_elide = std::max(1, static_cast<int>(0.99 * total_lines));
  const int wanted =
      std::min(max_elide, std::max(1, static_cast<int>(fraction * total_lines + 0.5)));
  for (int attempt = 0; attempt < 400 && elided < wanted; ++attempt) {
    const NdlProof* comp = composes[rng.below(composes.size())];
    if (claimed.count(comp)) continue;
    int n = static_cast<int>(comp->steps.size());
    int i = rng.range(0, n - 1);
    int j = std::min(n - 1, i + rng.range(0, 1 + n / 3));
    // skip regions touching already-claimed steps or existing regions here
    bool clash = false;
    for (int k = i; k <= j && !clash; ++k)
      if (claimed.count(comp->steps[static_cast<std::size_t>(k)].proof.get()))
        clash = true;
    for (const auto& r : ctx.gap_regions[comp])
      if (!(j < std::get<0>(r) || i > std::get<1>(r))) clash = true;
    if (clash) continue;
    int region_lines = 0;
    for (int k = i; k <= j; ++k)
      region_lines +=
          detail::count_step_lines(*comp->steps[static_cast<std::size_t>(k)].proof);
    if (elided + region_lines > max_elide) continue;

    std::string token = "GAP-" + std::to_string(next_gap++);
    std::string gold;
    for (int k = i; k <= j; ++k) {
      if (k > i) gold += ";\n";
      std::string tmp;
      detail::SubstitutionContext plain;
      detail::print_sub_step(comp->steps[static_cast<std::size_t>(k)], plain, tmp, 0);
      gold += tmp;
      claim_subtree(*comp->steps[static_cast<std::size_t>(k)].proof, claim_subtree);
    }
    elided += region_lines;
    ctx.gap_regions[comp].emplace_back(i, j, token);
    out.gold[token] = gold;
  }
  if (out.gold.empty()) throw GenerationExhausted("could not place any gap");
  for (auto& [node, regions] : ctx.gap_regions)
    std::sort(regions.begin(), regions.end());
  out.text = detail::print_sub_program(prog, ctx);
  out.elided_fraction =
      total_lines == 0 ? 0 : static_cast<double>(elided) / total_lines;
  return out;
}

// Replace each GAP-k token with the candidate text; the result is graded by
// re-checking against the goal.
inline std::string splice_gaps(const std::string& gapped_text,
                               const std::map<std::string, std::string>& fills) {
  return unmask(gapped_text, fills);
}

// ---------------------------------------------------------------------------
// Corruption of a valid proof with a recorded ground-truth first error.

struct NdlCorruption {
  std::string text;
  NdlErrorKind expected_kind;
  int line = 0;  // in the corrupted text
  int step = 0;  // step ordinal
  std::string description;
};

namespace detail {

// Steps in evaluation order: rule applications and assume-openings.
inline void enumerate_steps(const NdlProof& p,
                            std::vector<const NdlProof*>& out) {
  switch (p.kind) {
    case NdlProof::Kind::RuleApp: out.push_back(&p); break;
    case NdlProof::Kind::ByAnnotated: enumerate_steps(*p.inner, out); break;
    case NdlProof::Kind::Assume:
      out.push_back(&p);
      enumerate_steps(*p.body, out);
      break;
    case NdlProof::Kind::Compose:
      for (const NdlStep& s : p.steps) enumerate_steps(*s.proof, out);
      break;
  }
}

inline NdlProofPtr clone_with(const NdlProofPtr& p,
                              const std::function<NdlProofPtr(const NdlProof&)>& fn) {
  if (NdlProofPtr replaced = fn(*p)) return replaced;
  auto node = std::make_shared<NdlProof>(*p);
  switch (p->kind) {
    case NdlProof::Kind::ByAnnotated: node->inner = clone_with(p->inner, fn); break;
    case NdlProof::Kind::Assume: node->body = clone_with(p->body, fn); break;
    case NdlProof::Kind::Compose:
      for (auto& s : node->steps) s.proof = clone_with(s.proof, fn);
      break;
    default: break;
  }
  return node;
}

}  // namespace detail

inline NdlCorruption corrupt_ndl_proof(const NdlProgram& prog, const Formula& goal,
                                       std::uint64_t seed) {
  std::vector<std::pair<std::string, Formula>> premises;  // asserts live in prog
  std::string original = print_program(prog);
  {
    CheckReport ok = check_argument(premises, goal, original);
    if (!ok.ok())
      throw std::invalid_argument("corrupt_ndl_proof requires a valid proof");
  }
  Rng rng(seed);

  for (int attempt = 0; attempt < 300; ++attempt) {
    int intervention = rng.range(0, 2);
    std::vector<const NdlProof*> steps;
    detail::enumerate_steps(*prog.main, steps);

    NdlProgram corrupted = prog;
    NdlErrorKind expected;
    std::string description;
    int target_ordinal = -1;  // 1-based step ordinal in the corrupted proof

    if (intervention == 0) {
      // retarget a conjunction elimination at a non-conjunction argument
      std::vector<const NdlProof*> rule_steps;
      for (const NdlProof* s : steps)
        if (s->kind == NdlProof::Kind::RuleApp && !s->args.empty())
          rule_steps.push_back(s);
      if (rule_steps.empty()) continue;
      const NdlProof* victim = rule_steps[rng.below(rule_steps.size())];
      // only sound when the argument cannot be a conjunction
      const NdlArg& a0 = victim->args[0];
      if (!a0.is_ident() && a0.formula.kind() == Conn::And) continue;
      corrupted.main = detail::clone_with(prog.main, [&](const NdlProof& node) {
        if (&node != victim) return NdlProofPtr{};
        auto repl = std::make_shared<NdlProof>(node);
        repl->rule = rng.coin() ? "left-and" : "right-and";
        repl->args = {node.args[0]};
        return NdlProofPtr(repl);
      });
      expected = NdlErrorKind::MalformedRuleApp;
      description = "conjunction elimination retargeted at a non-conjunction";
      for (std::size_t i = 0; i < steps.size(); ++i)
        if (steps[i] == victim) target_ordinal = static_cast<int>(i + 1);
    } else if (intervention == 1) {
      // drop the last argument of a multi-argument rule application
      std::vector<const NdlProof*> rule_steps;
      for (const NdlProof* s : steps)
        if (s->kind == NdlProof::Kind::RuleApp && s->args.size() >= 2)
          rule_steps.push_back(s);
      if (rule_steps.empty()) continue;
      const NdlProof* victim = rule_steps[rng.below(rule_steps.size())];
      corrupted.main = detail::clone_with(prog.main, [&](const NdlProof& node) {
        if (&node != victim) return NdlProofPtr{};
        auto repl = std::make_shared<NdlProof>(node);
        repl->args.pop_back();
        return NdlProofPtr(repl);
      });
      expected = NdlErrorKind::MalformedRuleApp;
      description = "rule application arity reduced";
      for (std::size_t i = 0; i < steps.size(); ++i)
        if (steps[i] == victim) target_ordinal = static_cast<int>(i + 1);
    } else {
      // remove a named chain step that a later step references by name
      struct Removal {
        const NdlProof* compose;
        int index;
        std::string name;
      };
      std::vector<Removal> options;
      auto scan = [&options](const NdlProof& p, auto&& self) -> void {
        if (p.kind == NdlProof::Kind::Compose) {
          for (std::size_t i = 0; i + 1 < p.steps.size(); ++i)
            if (p.steps[i].name)
              options.push_back({&p, static_cast<int>(i), *p.steps[i].name});
          for (const NdlStep& s : p.steps) self(*s.proof, self);
        } else if (p.kind == NdlProof::Kind::Assume) {
          self(*p.body, self);
        } else if (p.kind == NdlProof::Kind::ByAnnotated) {
          self(*p.inner, self);
        }
      };
      scan(*prog.main, scan);
      if (options.empty()) continue;
      Removal pick = options[rng.below(options.size())];
      // the removed step's conclusion must actually be referenced afterwards
      bool referenced = false;
      for (std::size_t i = static_cast<std::size_t>(pick.index) + 1;
           i < pick.compose->steps.size() && !referenced; ++i) {
        std::vector<const NdlProof*> later;
        detail::enumerate_steps(*pick.compose->steps[i].proof, later);
        for (const NdlProof* s : later) {
          if (s->kind != NdlProof::Kind::RuleApp) continue;
          for (const NdlArg& a : s->args)
            if (a.is_ident() && *a.ident == pick.name) referenced = true;
        }
      }
      if (!referenced) continue;
      corrupted.main = detail::clone_with(prog.main, [&](const NdlProof& node) {
        if (&node != pick.compose) return NdlProofPtr{};
        auto repl = std::make_shared<NdlProof>(node);
        repl->steps.erase(repl->steps.begin() + pick.index);
        return NdlProofPtr(repl);
      });
      expected = NdlErrorKind::UnboundIdentifier;
      description = "removed the chain step binding '" + pick.name + "'";
      target_ordinal = 0;  // determined below from the checker
    }

    std::string text = print_program(corrupted);
    CheckReport strict = check_argument(premises, goal, text);
    if (strict.ok() || !strict.error) continue;
    InstrumentedResult inst = instrumented_eval(premises, goal, text);
    if (inst.result == InstrumentedOutcome::Correct || !inst.first_error) continue;

    if (target_ordinal > 0) {
      if (strict.error->step != target_ordinal) continue;
      if (strict.error->kind != expected) continue;
    } else {
      // removed-step corruption: accept the reference failure wherever the
      // first dangling citation sits
      if (strict.error->kind != NdlErrorKind::UnboundIdentifier &&
          strict.error->kind != NdlErrorKind::NotInAB)
        continue;
      expected = strict.error->kind;
    }
    if (inst.first_error->kind != strict.error->kind ||
        inst.first_error->line != strict.error->line)
      continue;

    NdlCorruption out;
    out.text = text;
    out.expected_kind = strict.error->kind;
    out.line = strict.error->line;
    out.step = strict.error->step;
    out.description = description;
    return out;
  }
  throw GenerationExhausted("no applicable corruption found for this proof");
}

}  // namespace forge

#endif  // FORGE_TRANSFORM_HPP_
