// forge: checkers, generators, transforms, archive scoring, and the IRT
// pipeline behind one command-line surface.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "forge/archive.hpp"
#include "forge/eq.hpp"
#include "forge/gen.hpp"
#include "forge/hilbert.hpp"
#include "forge/instrumented.hpp"
#include "forge/ndl0.hpp"
#include "forge/psychometrics.hpp"
#include "forge/transform.hpp"

using json = nlohmann::json;
using namespace forge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

std::string read_input(const std::string& path) {
  if (path == "-" || path.empty()) {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("FORGE_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
    }
  }
  return 0;
}

json error_json(const NdlError& e) {
  json out = {
      {"errorType", to_string(e.kind)},
      {"errorClass", to_string(classify(e.kind))},
      {"offendingLineNumber", e.line},
      {"column", e.column},
      {"step", e.step},
      {"errorDescription", e.detail},
  };
  if (e.missing) out["missingFormula"] = print_formula(*e.missing);
  if (e.expected) out["expected"] = print_formula(*e.expected);
  if (e.actual) out["actual"] = print_formula(*e.actual);
  if (e.rule) out["offendingRule"] = *e.rule;
  return out;
}

json witness_json(const RewriteWitness& w) {
  return {{"redex", print_term(w.redex)},
          {"position", w.position},
          {"equation", w.equation},
          {"contractum", print_term(w.contractum)}};
}

int run_check_ndl(const std::string& text, bool instrumented) {
  NdlProgram prog;
  std::optional<Formula> goal;
  try {
    prog = parse_ndl_program(text);
    goal = prog.goal;
  } catch (const SyntaxError& ex) {
    if (!instrumented) {
      json out = {{"correct", false},
                  {"error", {{"errorType", "parsing"}, {"errorDescription", ex.what()}}}};
      std::cout << out.dump(2) << "\n";
      return kExitVerificationFailure;
    }
  }
  if (!goal) {
    // instrumented path may still recover the goal comment from the raw text
    try {
      goal = parse_ndl_program(repair_syntax(text).text).goal;
    } catch (...) {
    }
  }
  if (!goal) {
    std::cerr << "error: input needs a '# Goal: <formula>' comment\n";
    return kExitUsage;
  }

  if (instrumented) {
    InstrumentedResult r = instrumented_eval({}, *goal, text);
    json fixes = {{"syntaxCorrections", json::array()},
                  {"structuralCorrections", json::array()}};
    for (const auto& c : r.repairs.syntax)
      fixes["syntaxCorrections"].push_back(
          json::array({"line-" + std::to_string(c.line), c.description}));
    for (const auto& c : r.repairs.structural)
      fixes["structuralCorrections"].push_back(
          json::array({"step-" + std::to_string(c.step), c.description}));
    json out = {{"result", to_string(r.result)},
                {"fixes", fixes},
                {"strictAccepted", r.strict_accepted}};
    if (!r.strict_diagnostics.empty())
      out["strictDiagnostics"] = r.strict_diagnostics;
    if (r.first_error) {
      out["errorType"] = to_string(r.first_error->kind);
      out["step"] = r.first_error->step;
      out["offendingLineNumber"] = r.first_error->line;
      out["errorDescription"] = r.first_error->detail;
    }
    std::cout << out.dump(2) << "\n";
    return r.result == InstrumentedOutcome::Correct ? kExitOk
                                                    : kExitVerificationFailure;
  }

  CheckReport r = check_argument({}, *goal, text);
  json out = {{"correct", r.ok()}};
  if (r.verdict.conclusion) out["conclusion"] = print_formula(*r.verdict.conclusion);
  if (r.error) out["error"] = error_json(*r.error);
  std::cout << out.dump(2) << "\n";
  return r.ok() ? kExitOk : kExitVerificationFailure;
}

int run_check_ndl0(const std::string& text) {
  Ndl0Program prog;
  try {
    prog = parse_ndl0_program(text);
  } catch (const SyntaxError& ex) {
    json out = {{"correct", false},
                {"error", {{"errorType", "parsing"}, {"errorDescription", ex.what()}}}};
    std::cout << out.dump(2) << "\n";
    return kExitVerificationFailure;
  }
  if (!prog.goal) {
    std::cerr << "error: input needs a '# Goal: <formula>' comment\n";
    return kExitUsage;
  }
  Ndl0CheckReport r = check_argument0({}, *prog.goal, text);
  json out = {{"correct", r.ok()}};
  if (r.verdict.conclusion) out["conclusion"] = print_formula(*r.verdict.conclusion);
  if (r.verdict.error) {
    out["error"] = error_json(r.verdict.error->base);
    if (r.verdict.error->countermodel) {
      json cm = json::object();
      for (const auto& [atom, value] : r.verdict.error->countermodel->assignment())
        cm[atom] = value;
      out["error"]["countermodel"] = cm;
    }
  } else if (!r.conclusion_matches_goal) {
    out["error"] = {{"errorType", "wrongConclusion"},
                    {"offendingLineNumber", 0},
                    {"errorDescription", "conclusion does not match the goal"}};
  }
  std::cout << out.dump(2) << "\n";
  return r.ok() ? kExitOk : kExitVerificationFailure;
}

int run_check_hilbert(const std::string& text, bool lenient) {
  // premises come from assert lines; the goal from the # Goal: comment
  std::vector<std::pair<std::string, Formula>> premises;
  std::optional<Formula> goal;
  std::string body = text;
  try {
    // reuse the NDL program scanner for asserts/goal, body starts at '{'
    std::size_t brace = text.find('{');
    std::string header = brace == std::string::npos ? text : text.substr(0, brace);
    NdlProgram header_prog =
        parse_ndl_program(header + "\n{ claim on placeholder }");
    premises = header_prog.asserts;
    goal = header_prog.goal;
    body = brace == std::string::npos ? "" : text.substr(brace);
  } catch (const SyntaxError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitUsage;
  }
  if (!goal) {
    std::cerr << "error: input needs a '# Goal: <formula>' comment\n";
    return kExitUsage;
  }
  HilbertReport r = check_hilbert_text(premises, *goal, body, lenient);
  json out = {{"correct", r.ok}, {"repairs", r.repairs}};
  if (r.error)
    out["error"] = {{"errorType", to_string(r.error->kind)},
                    {"line", r.error->line_no},
                    {"errorDescription", r.error->detail}};
  std::cout << out.dump(2) << "\n";
  return r.ok ? kExitOk : kExitVerificationFailure;
}

int run_check_eq(const std::string& text) {
  EqProblem prob = parse_eq_problem(text);
  EqCheckResult r = check_eq_proof(prob.axioms, prob.proof());
  json out = {{"correct", r.correct}};
  if (r.correct) {
    json expl = json::array();
    for (const auto& step : r.explanation) {
      json rewrites = json::array();
      for (const auto& w : step.rewrites) rewrites.push_back(witness_json(w));
      expl.push_back({{"step", step.step}, {"rewrites", rewrites}});
    }
    out["explanation"] = expl;
  } else if (r.contractum_error) {
    out["explanation"] = {
        {"step", r.contractum_error->step},
        {"equation", r.contractum_error->equation},
        {"position", r.contractum_error->position},
        {"expectedContractum", print_term(r.contractum_error->expected_contractum)},
        {"actualContractum", print_term(r.contractum_error->actual_contractum)}};
  } else if (r.equation_error) {
    out["explanation"] = {{"step", r.equation_error->step},
                          {"givenEquations", r.equation_error->given_equations},
                          {"correctEquations", r.equation_error->correct_equations}};
  }
  std::cout << out.dump(2) << "\n";
  return r.correct ? kExitOk : kExitVerificationFailure;
}

json argument_json(const Argument& arg) {
  json premises = json::array();
  for (const auto& [name, f] : arg.premises)
    premises.push_back({{"name", name}, {"formula", print_formula(f)}});
  return {{"family", arg.family},
          {"premises", premises},
          {"goal", print_formula(arg.goal)},
          {"guaranteed", arg.guaranteed}};
}

std::vector<std::pair<int, int>> parse_edge_list(const std::string& spec) {
  std::vector<std::pair<int, int>> out;
  std::istringstream in(spec);
  std::string part;
  while (std::getline(in, part, ',')) {
    std::size_t dash = part.find('-');
    if (dash == std::string::npos)
      throw std::runtime_error("edge spec must be like 0-1,0-2");
    out.emplace_back(std::stoi(part.substr(0, dash)),
                     std::stoi(part.substr(dash + 1)));
  }
  return out;
}

std::string render_report_table(const EvalReport& report) {
  std::ostringstream out;
  out << "task: " << to_string(report.task) << "\n";
  out << "model\tn\tcredited\texcluded\taccuracy\twilson\tstrict\n";
  for (const ModelReport& m : report.models) {
    out << m.model << "\t" << m.denominator() << "\t" << m.credited << "\t"
        << m.excluded << "\t" << std::fixed << std::setprecision(4)
        << m.accuracy();
    if (auto w = m.interval())
      out << "\t(+/-" << std::setprecision(2) << w->half_width << ")";
    else
      out << "\t-";
    out << "\t" << m.strict_credited << "\n";
  }
  if (report.di_value) {
    out << "DI: " << std::setprecision(4) << *report.di_value;
    if (report.gini)
      out << "  gini(integrated): " << report.gini->integrated
          << "  gini(DI/2mu): " << report.gini->from_di;
    out << "\n";
  }
  return out.str();
}

json report_json(const EvalReport& report) {
  json models = json::array();
  for (const ModelReport& m : report.models) {
    json jm = {{"model", m.model},
               {"total", m.total},
               {"credited", m.credited},
               {"errors", m.errors},
               {"excluded", m.excluded},
               {"accuracy", m.accuracy()},
               {"strictCredited", m.strict_credited},
               {"syntaxRepairs", m.syntax_repairs},
               {"structuralRepairs", m.structural_repairs}};
    if (auto w = m.interval()) {
      jm["wilsonHalfWidth"] = w->half_width;
      jm["wilsonLo"] = w->lo;
      jm["wilsonHi"] = w->hi;
    }
    json cats = json::object();
    for (const auto& [k, v] : m.error_categories) cats[k] = v;
    jm["errorCategories"] = cats;
    if (m.sla_total > 0) {
      jm["stepLevelAccuracy"] =
          static_cast<double>(m.sla_correct) / static_cast<double>(m.sla_total);
    }
    if (m.l1 || m.l2 || m.l3) {
      jm["l1"] = m.l1;
      jm["l2"] = m.l2;
      jm["l3"] = m.l3;
    }
    if (m.calib) {
      jm["ece"] = m.calib->ece;
      jm["mce"] = m.calib->mce;
    }
    models.push_back(jm);
  }
  json out = {{"task", to_string(report.task)}, {"models", models}};
  if (report.di_value) out["di"] = *report.di_value;
  if (report.gini) {
    out["giniIntegrated"] = report.gini->integrated;
    out["giniFromDi"] = report.gini->from_di;
  }
  return out;
}

ResponseMatrix read_matrix_csv(const std::string& text) {
  ResponseMatrix m;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty matrix");
  {
    std::istringstream header(line);
    std::string cell;
    bool first = true;
    while (std::getline(header, cell, ',')) {
      if (first) {
        first = false;
        continue;
      }
      m.items.push_back(cell);
    }
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    m.respondents.push_back(cell);
    std::vector<int> outcomes;
    while (std::getline(row, cell, ',')) outcomes.push_back(std::stoi(cell));
    if (outcomes.size() != m.items.size())
      throw std::runtime_error("row width mismatch for " + m.respondents.back());
    m.outcomes.push_back(std::move(outcomes));
  }
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification and analysis toolkit for deduction benchmarks"};
  app.require_subcommand(1);

  // ---- check ----------------------------------------------------------
  auto* check = app.add_subcommand("check", "check a proof against its goal");
  std::string check_calculus, check_file = "-";
  bool instrumented = false, lenient = false;
  check->add_option("calculus", check_calculus, "ndl | ndl0 | hilbert | eq")
      ->required();
  check->add_option("file", check_file, "input file (default stdin)");
  check->add_flag("--instrumented", instrumented, "error-tolerant NDL checking");
  check->add_flag("--lenient", lenient, "lenient Hilbert checking");

  // ---- gen ------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a benchmark problem");
  std::string family;
  std::uint64_t seed = default_seed();
  bool as_json = false, with_proof = false, conditionalized = false;
  int height = 2, nodes = 6, pigeons = 2, places = 2, holes = 1;
  int elements = 3, block = 2, debruijn_n = 5, left = 4, right = 3;
  double edge_prob = -1, fraction = 0.5;
  std::string formula_text, edges_spec, charge_spec = "0";
  gen->add_option("family", family,
                  "pl1 | pl2-ab | pyramid | simple-pebbling | coloring | rel-php | "
                  "subset-card | tseitin | counting | de-bruijn")
      ->required();
  gen->add_option("--seed", seed, "generator seed (default $FORGE_SEED or 0)");
  gen->add_flag("--json", as_json, "emit the structured record");
  gen->add_flag("--proof", with_proof, "also emit a proof where supported");
  gen->add_flag("--conditionalized", conditionalized, "fold premises into the goal");
  gen->add_option("--formula", formula_text, "input formula (pl2-ab)");
  gen->add_option("--height", height, "pyramid height");
  gen->add_option("--nodes", nodes, "node count (simple-pebbling, coloring, tseitin)");
  gen->add_option("--edge-prob", edge_prob, "edge probability (coloring)");
  gen->add_option("--pigeons", pigeons)->group("rel-php");
  gen->add_option("--places", places)->group("rel-php");
  gen->add_option("--holes", holes)->group("rel-php");
  gen->add_option("--left", left)->group("subset-card");
  gen->add_option("--right", right)->group("subset-card");
  gen->add_option("--edges", edges_spec, "edge list like 0-0,0-2,1-0");
  gen->add_option("--charge", charge_spec, "charged node indices (tseitin)");
  gen->add_option("--elements", elements)->group("counting");
  gen->add_option("--block", block)->group("counting");
  gen->add_option("--n", debruijn_n, "index (de-bruijn)");

  // ---- transforms -----------------------------------------------------
  auto* mask_cmd = app.add_subcommand("mask", "mask a valid NDL proof");
  std::string mask_file = "-";
  mask_cmd->add_option("file", mask_file, "problem + proof text");
  mask_cmd->add_option("--fraction", fraction, "fraction of occupants to mask");
  mask_cmd->add_option("--seed", seed, "seed");

  auto* gap_cmd = app.add_subcommand("gap", "insert gaps into a valid NDL proof");
  std::string gap_file = "-";
  double gap_fraction = 0.5;
  gap_cmd->add_option("file", gap_file, "problem + proof text");
  gap_cmd->add_option("--fraction", gap_fraction, "elided fraction in [0.3, 0.99]");
  gap_cmd->add_option("--seed", seed, "seed");

  auto* corrupt_cmd = app.add_subcommand("corrupt", "corrupt a valid proof");
  std::string corrupt_file = "-", corrupt_calculus = "ndl", corrupt_mode = "contractum";
  corrupt_cmd->add_option("file", corrupt_file, "input text");
  corrupt_cmd->add_option("--calculus", corrupt_calculus, "ndl | eq");
  corrupt_cmd->add_option("--mode", corrupt_mode, "contractum | equation (eq)");
  corrupt_cmd->add_option("--seed", seed, "seed");

  // ---- eval -----------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("eval", "score an archived result file");
  std::string task_name, archive_path;
  bool eval_json = false;
  eval_cmd->add_option("task", task_name, "PL1-PW | PL1-PC | PL1-PM | PL1-GF | "
                                          "PL3-PW | PL3-PC | EQ-PC | EQ-ER | EQ-GF")
      ->required();
  eval_cmd->add_option("archive", archive_path, "YAML archive")->required();
  eval_cmd->add_flag("--json", eval_json, "emit the full JSON report");

  // ---- fit ------------------------------------------------------------
  auto* fit_cmd = app.add_subcommand("fit", "fit a 2PL model to a response matrix");
  std::string matrix_path;
  fit_cmd->add_option("matrix", matrix_path, "CSV: respondent,item...")->required();
  fit_cmd->add_option("--seed", seed, "initialization seed");

  // ---- report ---------------------------------------------------------
  auto* report_cmd = app.add_subcommand("report", "psychometric reports");
  std::string params_path, abilities_path;
  bool want_wright = false, want_bands = false;
  double theta1 = -1, theta2 = 1;
  int bins = 20, grid = 201;
  report_cmd->add_option("--params", params_path, "item parameter table (label a b)");
  report_cmd->add_option("--abilities", abilities_path, "ability table (label theta)");
  report_cmd->add_flag("--wright", want_wright, "print the Wright map");
  report_cmd->add_flag("--bands", want_bands, "print band-normalized scores");
  report_cmd->add_option("--theta1", theta1, "band lower edge");
  report_cmd->add_option("--theta2", theta2, "band upper edge");
  report_cmd->add_option("--bins", bins, "Wright map bins");
  report_cmd->add_option("--grid", grid, "band grid size");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) {
      std::string text = read_input(check_file);
      if (check_calculus == "ndl") return run_check_ndl(text, instrumented);
      if (check_calculus == "ndl0") return run_check_ndl0(text);
      if (check_calculus == "hilbert") return run_check_hilbert(text, lenient);
      if (check_calculus == "eq") return run_check_eq(text);
      std::cerr << "error: unknown calculus '" << check_calculus << "'\n";
      return kExitUsage;
    }

    if (*gen) {
      Argument arg;
      std::optional<std::string> proof_text;
      if (family == "pl1") {
        GenConfig cfg;
        cfg.seed = seed;
        Pl1Generator g(cfg);
        arg = g.gen();
        if (conditionalized) arg = conditionalize(arg);
      } else if (family == "pl2-ab") {
        if (formula_text.empty()) {
          std::cerr << "error: pl2-ab needs --formula\n";
          return kExitUsage;
        }
        arg = gen_pl2_ab(parse_formula(formula_text), seed);
      } else if (family == "pyramid") {
        arg = gen_pyramid_pebbling(height);
      } else if (family == "simple-pebbling") {
        arg = gen_simple_pebbling(nodes, seed);
      } else if (family == "coloring") {
        arg = gen_graph_coloring(nodes, edge_prob, seed).argument;
      } else if (family == "rel-php") {
        arg = gen_rel_php(pigeons, places, holes);
      } else if (family == "subset-card") {
        BipartiteSpec spec;
        spec.left = left;
        spec.right = right;
        spec.edges = parse_edge_list(edges_spec);
        arg = gen_subset_card(spec, seed);
      } else if (family == "tseitin") {
        TseitinGraph graph;
        for (int i = 0; i < nodes; ++i)
          graph.nodes.push_back(std::string(1, static_cast<char>('A' + i)));
        graph.edges = parse_edge_list(edges_spec);
        std::vector<int> charge;
        for (const auto& part : [&] {
               std::vector<std::string> parts;
               std::istringstream in(charge_spec);
               std::string p;
               while (std::getline(in, p, ',')) parts.push_back(p);
               return parts;
             }())
          charge.push_back(std::stoi(part));
        arg = gen_tseitin(graph, charge);
      } else if (family == "counting") {
        arg = gen_counting(elements, block, seed);
      } else if (family == "de-bruijn") {
        arg = gen_debruijn(debruijn_n);
        if (with_proof) proof_text = write_debruijn_proof(debruijn_n);
      } else {
        std::cerr << "error: unknown family '" << family << "'\n";
        return kExitUsage;
      }
      if (as_json) {
        json out = argument_json(arg);
        if (proof_text) out["proof"] = *proof_text;
        std::cout << out.dump(2) << "\n";
      } else {
        std::cout << problem_text(arg);
        if (proof_text) std::cout << "\n" << *proof_text;
      }
      return kExitOk;
    }

    if (*mask_cmd) {
      NdlProgram prog = parse_ndl_program(read_input(mask_file));
      MaskedProof masked = mask_proof(prog, fraction, seed);
      json out = {{"maskedProof", masked.text},
                  {"masks", masked.assignment},
                  {"kinds", masked.kinds},
                  {"maskDensity", mask_density(masked)}};
      std::cout << out.dump(2) << "\n";
      return kExitOk;
    }

    if (*gap_cmd) {
      NdlProgram prog = parse_ndl_program(read_input(gap_file));
      GappedProof gapped = insert_gaps(prog, gap_fraction, seed);
      json out = {{"gappedProof", gapped.text},
                  {"gaps", gapped.gold},
                  {"elidedFraction", gapped.elided_fraction}};
      std::cout << out.dump(2) << "\n";
      return kExitOk;
    }

    if (*corrupt_cmd) {
      std::string text = read_input(corrupt_file);
      if (corrupt_calculus == "ndl") {
        NdlProgram prog = parse_ndl_program(text);
        if (!prog.goal) {
          std::cerr << "error: input needs a '# Goal: <formula>' comment\n";
          return kExitUsage;
        }
        NdlCorruption c = corrupt_ndl_proof(prog, *prog.goal, seed);
        json out = {{"corruptedProof", c.text},
                    {"errorType", to_string(c.expected_kind)},
                    {"offendingLineNumber", c.line},
                    {"step", c.step},
                    {"description", c.description}};
        std::cout << out.dump(2) << "\n";
        return kExitOk;
      }
      if (corrupt_calculus == "eq") {
        EqProblem prob = parse_eq_problem(text);
        EqCorruptionMode mode = corrupt_mode == "equation"
                                    ? EqCorruptionMode::Equation
                                    : EqCorruptionMode::Contractum;
        auto c = corrupt_eq_proof(prob.axioms, prob.proof(), mode, seed);
        if (!c) {
          std::cerr << "error: no corruption found\n";
          return kExitVerificationFailure;
        }
        json truth;
        if (c->contractum_truth)
          truth = {{"step", c->contractum_truth->step},
                   {"equation", c->contractum_truth->equation},
                   {"position", c->contractum_truth->position},
                   {"expectedContractum",
                    print_term(c->contractum_truth->expected_contractum)},
                   {"actualContractum",
                    print_term(c->contractum_truth->actual_contractum)}};
        else
          truth = {{"step", c->equation_truth->step},
                   {"givenEquations", c->equation_truth->given_equations},
                   {"correctEquations", c->equation_truth->correct_equations}};
        std::string corrupted = "- Axioms:\n";
        for (const auto& e : prob.axioms)
          corrupted += e.name + ": " + print_term(e.lhs) + " = " + print_term(e.rhs) + "\n";
        corrupted += "\n- Proof:\n\ns = " + print_term(c->corrupted.start) + "\n";
        for (const auto& s : c->corrupted.steps) {
          corrupted += "    " + print_term(s.term);
          if (!s.cited.empty()) {
            corrupted += " by ";
            for (std::size_t i = 0; i < s.cited.size(); ++i) {
              if (i) corrupted += ", ";
              corrupted += s.cited[i];
            }
          }
          corrupted += "\n";
        }
        json out = {{"corruptedProof", corrupted}, {"groundTruth", truth}};
        std::cout << out.dump(2) << "\n";
        return kExitOk;
      }
      std::cerr << "error: unknown calculus '" << corrupt_calculus << "'\n";
      return kExitUsage;
    }

    if (*eval_cmd) {
      auto kind = parse_task_kind(task_name);
      if (!kind) {
        std::cerr << "error: unknown task '" << task_name << "'\n";
        return kExitUsage;
      }
      std::vector<ResultRecord> records = load_archive(archive_path);
      EvalReport report = evaluate_task(*kind, records);
      std::cout << render_report_table(report);
      if (eval_json) std::cout << report_json(report).dump(2) << "\n";
      return kExitOk;
    }

    if (*fit_cmd) {
      ResponseMatrix matrix = read_matrix_csv(read_input(matrix_path));
      IrtConfig cfg;
      cfg.seed = seed;
      IrtFit fit = fit_2pl(matrix, cfg);
      std::cout << format_fit(fit);
      std::cout << "# converged: " << (fit.converged ? "yes" : "no")
                << " iterations: " << fit.iterations << "\n";
      return kExitOk;
    }

    if (*report_cmd) {
      std::vector<ItemParams> items;
      std::vector<std::pair<std::string, double>> abilities;
      if (!params_path.empty()) items = parse_item_table(read_input(params_path));
      if (!abilities_path.empty())
        abilities = parse_ability_table(read_input(abilities_path));
      if (want_wright) {
        std::vector<std::pair<std::string, double>> item_points;
        for (const auto& it : items) item_points.emplace_back(it.label, it.b);
        std::cout << wright_map(abilities, item_points, bins);
      }
      if (want_bands) {
        Band band{theta1, theta2, grid};
        BandScores scores = band_scores(items, band);
        json out = {{"avgInfo", scores.avg_info},
                    {"meanInfoPerItem", scores.mean_info_per_item},
                    {"upperBound", scores.upper_bound},
                    {"normalizedScore", scores.normalized_score}};
        std::cout << out.dump(2) << "\n";
      }
      if (!want_wright && !want_bands) {
        std::cerr << "error: choose --wright and/or --bands\n";
        return kExitUsage;
      }
      return kExitOk;
    }
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
