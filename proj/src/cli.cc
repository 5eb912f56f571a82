// Copyright 2026 The Persuasion Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "persuasion/cli.h"

#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "persuasion/curve.h"
#include "persuasion/dp.h"
#include "persuasion/errors.h"
#include "persuasion/fixtures.h"
#include "persuasion/oracle.h"
#include "persuasion/receiver.h"
#include "persuasion/tree_io.h"
#include "persuasion/twophase.h"

namespace persuasion {
namespace {

const Rational kZero(0);
const Rational kOne(1);

std::vector<std::string> SplitCommas(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) parts.push_back(part);
  if (!text.empty() && text.back() == ',') parts.emplace_back();
  return parts;
}

std::vector<Rational> ParseList(const std::string& text, std::size_t n,
                                const std::string& what) {
  std::vector<std::string> parts = SplitCommas(text);
  if (parts.size() != n) {
    throw ValidationError(what + " expects " + std::to_string(n) +
                          " comma-separated values, got \"" + text + "\"");
  }
  std::vector<Rational> out;
  for (const std::string& p : parts) out.push_back(ParseRationalField(p, what));
  return out;
}

Experiment ParseExperiment(const std::string& text, const std::string& what) {
  std::vector<Rational> q = ParseList(text, 2, what);
  for (const Rational& r : q) {
    if (!r.in_unit_interval()) {
      throw ValidationError("probability outside [0,1] in " + what);
    }
  }
  return Experiment(q[0], q[1]);
}

Rational ResolvePrior(const std::string& flag, const TrialTree& tree) {
  if (!flag.empty()) {
    Rational p = ParseRationalField(flag, "--prior");
    if (!p.in_unit_interval()) throw ValidationError("prior outside [0,1]");
    return p;
  }
  if (tree.prior) return *tree.prior;
  throw ValidationError("no prior: pass --prior or set \"prior\" in the tree");
}

void Emit(const std::string& path, const std::string& content,
          std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("cannot write " + path);
  file << content;
}

std::string Opt(const std::optional<Rational>& r) {
  return r ? r->ToString() : "";
}
std::string OptDec(const std::optional<Rational>& r) {
  return r ? r->ToDecimal() : "";
}

std::string Join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line + "\n";
}

std::optional<Rational> RatioAt(const ValueCurve& c, const Rational& p,
                                const Rational& v) {
  if (p.sign() > 0) return v / p;
  if (c.segments().front().intercept.is_zero()) {
    return c.segments().front().slope;
  }
  return std::nullopt;
}

std::string Describe(const Experiment& e) {
  return "(" + e.q1.ToString() + ", " + e.q2.ToString() + ")";
}

const char* Verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

// --- subcommands ----------------------------------------------------------

struct SolveArgs {
  std::string tree, prior, out;
  bool pessimal = false;
};

int RunSolve(const SolveArgs& a, std::ostream& out) {
  TrialTree tree = LoadTreeFile(a.tree);
  Rational prior = ResolvePrior(a.prior, tree);
  Solution solution = SolveCurves(tree);
  TieBreak tb = a.pessimal ? TieBreak::kReceiverPessimal : TieBreak::kCanonical;
  Strategy s = ExtractStrategy(tree, solution, prior, tb);
  Evaluation e = EvaluateStrategy(tree, s, prior);
  Rational curve_value = solution.root().Eval(prior);
  if (e.sender_utility != curve_value) {
    throw ConsistencyError("extracted strategy earns " +
                           e.sender_utility.ToString() +
                           " but the value curve gives " +
                           curve_value.ToString());
  }
  nlohmann::json report = StrategyReport(s, e);
  report["tie_break"] = a.pessimal ? "receiver-pessimal" : "canonical";
  Emit(a.out, report.dump(2) + "\n", out);
  if (!a.out.empty()) {
    out << "sender utility " << e.sender_utility << " ("
        << e.sender_utility.ToDecimal() << "), receiver utility "
        << e.receiver_utility << " (" << e.receiver_utility.ToDecimal()
        << ")\n";
  }
  return kExitOk;
}

struct CurveArgs {
  std::string tree, out, node;
  int samples = 101;
  bool receiver = false;
};

int RunCurve(const CurveArgs& a, std::ostream& out, std::ostream& err) {
  TrialTree full = LoadTreeFile(a.tree);
  NodePath path = ParsePath(a.node);
  Resolve(*full.root, path);  // validates the path
  // A subtree's curve does not depend on what sits above it.
  NodePtr node = full.root;
  for (int i : path) node = node->child_ptr(i);
  TrialTree tree(node);
  Solution solution = SolveCurves(tree);
  const ValueCurve& curve = solution.root();
  for (const std::string& problem : CheckCurveInvariants(curve)) {
    if (problem.find("above") != std::string::npos ||
        problem.find("outside") != std::string::npos) {
      throw ConsistencyError("value curve self-check failed: " + problem);
    }
    err << "warning: " << problem << "\n";
  }
  std::vector<std::string> header = {"kind", "p", "value", "ratio"};
  if (a.receiver) header.push_back("receiver");
  for (const char* h : {"p_dec", "value_dec", "ratio_dec"}) {
    header.emplace_back(h);
  }
  if (a.receiver) header.emplace_back("receiver_dec");
  std::string csv = Join(header);
  auto row = [&](const char* kind, const Rational& p, const Rational& v) {
    std::optional<Rational> ratio = RatioAt(curve, p, v);
    std::optional<Rational> recv;
    if (a.receiver) recv = ReceiverValue(tree, solution, p);
    std::vector<std::string> cells = {kind, p.ToString(), v.ToString(),
                                      Opt(ratio)};
    if (a.receiver) cells.push_back(Opt(recv));
    cells.push_back(p.ToDecimal());
    cells.push_back(v.ToDecimal());
    cells.push_back(OptDec(ratio));
    if (a.receiver) cells.push_back(OptDec(recv));
    csv += Join(cells);
  };
  for (std::size_t i = 0; i < curve.size(); ++i) {
    row("breakpoint", curve.breakpoints()[i], curve.values()[i]);
  }
  for (const CurveSample& s : Sample(curve, a.samples)) {
    row("sample", s.p, s.value);
  }
  Emit(a.out, csv, out);
  return kExitOk;
}

struct TwoPhaseArgs {
  std::string qa, qb, prior, out;
  bool bbp = false;
  int samples = 101;
};

int RunTwoPhase(const TwoPhaseArgs& a, std::ostream& out) {
  Experiment ea = ParseExperiment(a.qa, "--qa");
  Experiment eb = ParseExperiment(a.qb, "--qb");
  NormalizedPair n = NormalizeTwoPhase(ea, eb);
  std::ostringstream summary;
  summary << "# normalized A = " << Describe(n.a) << ", B = " << Describe(n.b)
          << " (flip first: " << (n.swaps.flip_first ? "yes" : "no")
          << ", flip second: " << (n.swaps.flip_second ? "yes" : "no")
          << ", swap roles: " << (n.swaps.swap_roles ? "yes" : "no") << ")\n";
  for (const auto& [label, e] : {std::pair{"A", n.a}, std::pair{"B", n.b}}) {
    PersuasionPotential pot = ComputePersuasionPotential(e);
    Thresholds th = ComputeThresholds(e);
    summary << "# " << label << ": persuasion potential (" << pot.alpha_pot
            << ", " << (pot.beta_pot ? pot.beta_pot->ToString() : "undefined")
            << "), alpha_low " << th.alpha_low << ", beta_low " << th.beta_low
            << "\n";
  }
  std::vector<ValueCurve> types;
  std::vector<std::string> names;
  for (const StrategyType& t : AllTypes()) {
    types.push_back(TypeCurve(t, n.a, n.b));
    names.push_back(std::string(PatternName(t.a)) + "_A_" +
                    PatternName(t.b) + "_B");
  }
  ValueCurve optimal = OptimalTwoPhase(n.a, n.b);
  ValueCurve bbp = BbpOptimal(n.a, n.b);
  ValueCurve single = SinglePhaseCurve();
  ValueCurve dp = SolveCurves(TwoPhaseTree(n.a, n.b)).root();
  if (!(dp == optimal)) {
    throw ConsistencyError("type envelope differs from the DP curve");
  }
  if (!a.prior.empty()) {
    Rational p = ParseRationalField(a.prior, "--prior");
    if (!p.in_unit_interval()) throw ValidationError("prior outside [0,1]");
    summary << "# at prior " << p << ": optimal " << optimal.Eval(p) << " ("
            << optimal.Eval(p).ToDecimal() << "), bbp " << bbp.Eval(p)
            << ", single-phase " << single.Eval(p) << ", enumeration "
            << EnumerateTwoPhase(n.a, n.b, p).best_value << "\n";
    for (std::size_t i = 0; i < types.size(); ++i) {
      summary << "#   " << TypeName(AllTypes()[i]) << " "
              << types[i].Eval(p) << "\n";
    }
  }
  std::vector<std::string> header = {"p", "optimal"};
  if (a.bbp) {
    header.emplace_back("bbp");
    header.emplace_back("single_phase");
  }
  header.insert(header.end(), names.begin(), names.end());
  header.emplace_back("p_dec");
  header.emplace_back("optimal_dec");
  if (a.bbp) {
    header.emplace_back("bbp_dec");
    header.emplace_back("single_phase_dec");
  }
  std::string csv = Join(header);
  for (const CurveSample& s : Sample(optimal, a.samples)) {
    std::vector<std::string> cells = {s.p.ToString(), s.value.ToString()};
    if (a.bbp) {
      cells.push_back(bbp.Eval(s.p).ToString());
      cells.push_back(single.Eval(s.p).ToString());
    }
    for (const ValueCurve& t : types) cells.push_back(t.Eval(s.p).ToString());
    cells.push_back(s.p.ToDecimal());
    cells.push_back(s.value.ToDecimal());
    if (a.bbp) {
      cells.push_back(bbp.Eval(s.p).ToDecimal());
      cells.push_back(single.Eval(s.p).ToDecimal());
    }
    csv += Join(cells);
  }
  out << summary.str();
  Emit(a.out, csv, out);
  return kExitOk;
}

struct TreeOutArgs {
  std::string tree, out;
};

int RunPrune(const TreeOutArgs& a, std::ostream& out) {
  Emit(a.out, SerializeTree(Prune(LoadTreeFile(a.tree))), out);
  return kExitOk;
}

int RunExpand(const TreeOutArgs& a, std::ostream& out) {
  Emit(a.out, SerializeTree(ExpandNonbinary(LoadTreeFile(a.tree))), out);
  return kExitOk;
}

int RunCheckEquivalence(const std::string& file, std::ostream& out) {
  EquivalenceReport r = CheckSinglePhaseEquivalence(LoadTreeFile(file));
  out << "pruned tree: " << TreeToJson(r.pruned).dump() << "\n"
      << "condition (a), determined siblings trivial or designed: "
      << Verdict(r.siblings_ok) << "\n"
      << "condition (b), designed node on every path: "
      << Verdict(r.designed_on_every_path) << "\n";
  for (const std::string& v : r.violations) out << "  violation: " << v << "\n";
  if (r.verdict) {
    out << "verdict: PASS (sender value = min(2p,1) at every prior)\n";
  } else {
    out << "verdict: FAIL (no single-phase equivalence guarantee)\n";
  }
  return kExitOk;
}

struct OracleArgs {
  std::string tree, prior;
  int grid = 60;
  int refine = 3;
};

bool IsTwoPhaseShape(const TreeNode& root) {
  if (!root.is_designed()) return false;
  for (const NodePtr& c : root.children()) {
    if (!c->is_determined() || !c->child(0).is_leaf() ||
        !c->child(1).is_leaf()) {
      return false;
    }
  }
  return true;
}

int RunOracle(const OracleArgs& a, std::ostream& out) {
  TrialTree tree = LoadTreeFile(a.tree);
  Rational prior = ResolvePrior(a.prior, tree);
  Solution solution = SolveCurves(tree);
  Rational dp = solution.root().Eval(prior);
  OracleResult grid = GridSearch(tree, prior, a.grid, a.refine);
  Strategy s = ExtractStrategy(tree, solution, prior);
  Rational realized = EvaluateStrategy(tree, s, prior).sender_utility;

  out << "prior " << prior << "\n"
      << "dp value " << dp << " (" << dp.ToDecimal() << ")\n"
      << "grid search G=" << grid.grid_resolution
      << " R=" << grid.refinement_rounds << ": best " << grid.best_value
      << " (" << grid.best_value.ToDecimal() << "), error bound "
      << grid.error_bound << "\n";
  for (const auto& [path, params] : grid.best_params) {
    out << "  " << PathToString(path) << ": p1 " << params.p1 << ", p2 "
        << params.p2 << "\n";
  }
  std::vector<std::pair<std::string, bool>> checks = {
      {"dp >= grid best", dp >= grid.best_value},
      {"dp <= grid best + error bound",
       dp <= grid.best_value + grid.error_bound},
      {"evaluate(extract) = curve value", realized == dp}};
  if (IsTwoPhaseShape(*tree.root)) {
    OracleResult en =
        EnumerateTwoPhase(tree.root->child(0).experiment(),
                          tree.root->child(1).experiment(), prior);
    out << "two-phase enumeration: " << en.best_value << " ("
        << en.best_value.ToDecimal() << ")\n";
    checks.emplace_back("dp = enumeration", en.best_value == dp);
  }
  bool ok = true;
  for (const auto& [name, pass] : checks) {
    out << Verdict(pass) << " " << name << "\n";
    ok = ok && pass;
  }
  return ok ? kExitOk : kExitConsistency;
}

struct PerturbArgs {
  std::string tree, node, param = "q2", range, prior, out;
};

int RunPerturb(const PerturbArgs& a, std::ostream& out) {
  TrialTree tree = LoadTreeFile(a.tree);
  Rational prior = ResolvePrior(a.prior, tree);
  NodePath path = ParsePath(a.node);
  if (a.param != "q1" && a.param != "q2") {
    throw ValidationError("--param must be q1 or q2");
  }
  Param which = a.param == "q1" ? Param::kQ1 : Param::kQ2;
  std::vector<std::string> parts = SplitCommas(a.range);
  if (parts.size() != 3) throw ValidationError("--range expects lo,hi,steps");
  Rational lo = ParseRationalField(parts[0], "--range lo");
  Rational hi = ParseRationalField(parts[1], "--range hi");
  int steps = 0;
  try {
    steps = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw ValidationError("--range steps must be an integer");
  }
  if (steps < 1) throw ValidationError("--range steps must be at least 1");

  // The commitment made for the unperturbed tree, replayed unchanged.
  Strategy frozen = ExtractStrategy(tree, prior);
  std::string csv = Join({"value", "resolved", "frozen", "value_dec",
                          "resolved_dec", "frozen_dec"});
  for (int k = 0; k < steps; ++k) {
    Rational value =
        steps == 1 ? lo : lo + (hi - lo) * Rational(k, steps - 1);
    TrialTree perturbed = PerturbParam(tree, path, which, value);
    Rational resolved = SolveCurves(perturbed).root().Eval(prior);
    Rational kept = EvaluateStrategy(perturbed, frozen, prior,
                                     ActionMode::kObedient)
                        .sender_utility;
    csv += Join({value.ToString(), resolved.ToString(), kept.ToString(),
                 value.ToDecimal(), resolved.ToDecimal(), kept.ToDecimal()});
  }
  Emit(a.out, csv, out);
  return kExitOk;
}

struct ReceiverArgs {
  std::string ea, candidates, range, out;
  int grid = 101;
  bool pessimal = false;
};

int RunReceiverSelect(const ReceiverArgs& a, std::ostream& out) {
  CandidateSet set;
  set.fixed = ParseExperiment(a.ea, "--ea");
  std::ifstream in(a.candidates);
  if (!in) throw ValidationError("cannot open candidates file " + a.candidates);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    set.candidates.push_back(ParseExperiment(
        line, a.candidates + " line " + std::to_string(line_no)));
  }
  std::vector<Rational> range = ParseList(a.range, 2, "--range");
  set.lo = range[0];
  set.hi = range[1];
  MaximinResult m = MaximinSelect(
      set, a.grid,
      a.pessimal ? TieBreak::kReceiverPessimal : TieBreak::kCanonical);
  std::string csv = Join({"q1", "q2", "survived_filter", "worst_case",
                          "worst_prior", "evaluations", "worst_case_dec"});
  for (const CandidateRow& row : m.table) {
    csv += Join({row.candidate.q1.ToString(), row.candidate.q2.ToString(),
                 row.survived_filter ? "yes" : "no", Opt(row.worst_case),
                 Opt(row.worst_prior), std::to_string(row.evaluations),
                 OptDec(row.worst_case)});
  }
  Emit(a.out, csv, out);
  out << "# winner " << Describe(m.winner) << ", worst-case receiver utility "
      << m.worst_case_utility << " (" << m.worst_case_utility.ToDecimal()
      << ")\n";
  return kExitOk;
}

int RunFixturesCommand(std::ostream& out) {
  FixtureReport report = RunFixtures();
  out << FormatFixtureReport(report);
  return report.all_pass() ? kExitOk : kExitConsistency;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Exact solver for multi-phase persuasion trials", "persuade"};
  app.require_subcommand(1, 1);

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve", "optimal strategy at a prior");
  c_solve->add_option("tree", solve.tree, "tree file")->required();
  c_solve->add_option("--prior", solve.prior, "prior belief (a/b or decimal)");
  c_solve->add_option("--out", solve.out, "write the JSON report here");
  c_solve->add_flag("--pessimal-ties", solve.pessimal,
                    "break sender ties against the receiver");

  CurveArgs curve;
  auto* c_curve = app.add_subcommand("curve", "value curve as CSV");
  c_curve->add_option("tree", curve.tree, "tree file")->required();
  c_curve->add_option("--samples", curve.samples, "evenly spaced samples")
      ->check(CLI::Range(2, 1000000));
  c_curve->add_option("--out", curve.out, "CSV output file");
  c_curve->add_option("--node", curve.node, "path of an interior node");
  c_curve->add_flag("--receiver", curve.receiver,
                    "add the receiver's utility column");

  TwoPhaseArgs two;
  auto* c_two = app.add_subcommand("two-phase", "analytic two-phase solution");
  c_two->add_option("--qa", two.qa, "first experiment q1,q2")->required();
  c_two->add_option("--qb", two.qb, "second experiment q1,q2")->required();
  c_two->add_option("--prior", two.prior, "report values at this prior");
  c_two->add_flag("--bbp", two.bbp, "add bbp and single-phase columns");
  c_two->add_option("--samples", two.samples, "evenly spaced samples")
      ->check(CLI::Range(2, 1000000));
  c_two->add_option("--out", two.out, "CSV output file");

  TreeOutArgs prune, expand;
  auto* c_prune = app.add_subcommand("prune", "replace trivial-rooted subtrees");
  c_prune->add_option("tree", prune.tree, "tree file")->required();
  c_prune->add_option("--out", prune.out, "output tree file");
  auto* c_expand = app.add_subcommand("expand", "binarize n-ary experiments");
  c_expand->add_option("tree", expand.tree, "tree file")->required();
  c_expand->add_option("--out", expand.out, "output tree file");

  std::string equivalence_tree;
  auto* c_eq = app.add_subcommand("check-equivalence",
                                  "single-phase equivalence conditions");
  c_eq->add_option("tree", equivalence_tree, "tree file")->required();

  OracleArgs oracle;
  auto* c_oracle = app.add_subcommand("oracle", "brute-force cross-check");
  c_oracle->add_option("tree", oracle.tree, "tree file")->required();
  c_oracle->add_option("--prior", oracle.prior, "prior belief");
  c_oracle->add_option("--grid", oracle.grid, "grid resolution G")
      ->check(CLI::Range(1, 100000));
  c_oracle->add_option("--refine", oracle.refine, "refinement rounds R")
      ->check(CLI::Range(0, 60));

  PerturbArgs perturb;
  auto* c_perturb = app.add_subcommand("perturb", "parameter sweep");
  c_perturb->add_option("tree", perturb.tree, "tree file")->required();
  c_perturb->add_option("--node", perturb.node, "determined node path")
      ->required();
  c_perturb->add_option("--param", perturb.param, "q1 or q2");
  c_perturb->add_option("--range", perturb.range, "lo,hi,steps")->required();
  c_perturb->add_option("--prior", perturb.prior, "prior belief");
  c_perturb->add_option("--out", perturb.out, "CSV output file");

  ReceiverArgs recv;
  auto* c_recv = app.add_subcommand("receiver-select", "maximin experiment");
  c_recv->add_option("--ea", recv.ea, "fixed first experiment q1,q2")
      ->required();
  c_recv->add_option("--candidates", recv.candidates,
                     "file with one q1,q2 per line")
      ->required();
  c_recv->add_option("--range", recv.range, "prior range a,b")->required();
  c_recv->add_option("--grid", recv.grid, "grid points in the range")
      ->check(CLI::Range(2, 1000000));
  c_recv->add_flag("--pessimal-ties", recv.pessimal,
                   "break sender ties against the receiver");
  c_recv->add_option("--out", recv.out, "CSV output file");

  auto* c_fix = app.add_subcommand("fixtures", "reference value report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_solve->parsed()) return RunSolve(solve, out);
    if (c_curve->parsed()) return RunCurve(curve, out, err);
    if (c_two->parsed()) return RunTwoPhase(two, out);
    if (c_prune->parsed()) return RunPrune(prune, out);
    if (c_expand->parsed()) return RunExpand(expand, out);
    if (c_eq->parsed()) return RunCheckEquivalence(equivalence_tree, out);
    if (c_oracle->parsed()) return RunOracle(oracle, out);
    if (c_perturb->parsed()) return RunPerturb(perturb, out);
    if (c_recv->parsed()) return RunReceiverSelect(recv, out);
    if (c_fix->parsed()) return RunFixturesCommand(out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ConsistencyError& e) {
    err << "consistency failure: " << e.what() << "\n";
    return kExitConsistency;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitConsistency;
  }
  return kExitUsage;
}

}  // namespace persuasion
