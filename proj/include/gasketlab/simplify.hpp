#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "gasketlab/automaton.hpp"
#include "gasketlab/report.hpp"

namespace gasketlab {

enum class StepKind { TK, TKL };
enum class Side { AG, BG };

inline std::string_view to_string(StepKind k) { return k == StepKind::TK ? "TK" : "TKL"; }
inline std::string_view to_string(Side s) { return s == Side::AG ? "AG" : "BG"; }

/// One (τ,κ)- or (τ,κ,λ)-simplification. With side AG the deleted edge (τ,κ)
/// was in 𝒫_αγ and (τ,λ) in 𝒫_βγ; side BG is the same with α and β exchanged.
struct SimplStep {
  StepKind kind = StepKind::TK;
  Side side = Side::AG;
  Symbol tau = 0;
  Symbol kappa = 0;
  std::optional<Symbol> lambda;

  friend bool operator==(const SimplStep&, const SimplStep&) = default;
};

struct TerminalEdge {
  Symbol tau;
  Symbol kappa;
  Side side;

  friend bool operator==(const TerminalEdge&, const TerminalEdge&) = default;
};

/// Walks from the smallest edge of 𝒫_αγ ∪ 𝒫_βγ, preferring αγ-successors,
/// until the head has no successor in the union. The head is then
/// double-maximal.
inline TerminalEdge select_terminal_edge(const TriangleAutomaton& m) {
  const auto& ag = m.p_ag();
  const auto& bg = m.p_bg();
  if (ag.empty() && bg.empty()) throw std::invalid_argument("select_terminal_edge: no vertical edges");
  TerminalEdge cur;
  if (!bg.empty() && (ag.empty() || *bg.begin() < *ag.begin())) {
    cur = {bg.begin()->first, bg.begin()->second, Side::BG};
  } else {
    cur = {ag.begin()->first, ag.begin()->second, Side::AG};
  }
  for (int guard = 0; guard <= m.alphabet_size(); ++guard) {
    if (auto s = successor(ag, cur.kappa)) {
      cur = {cur.kappa, *s, Side::AG};
    } else if (auto t = successor(bg, cur.kappa)) {
      cur = {cur.kappa, *t, Side::BG};
    } else {
      return cur;
    }
  }
  throw std::invalid_argument("select_terminal_edge: cycle in the vertical relations");
}

/// Deletes the selected terminal edge and, when κ has a horizontal neighbour λ
/// on the relevant side, the edge (τ,λ) that gathering forces.
///
/// Side AG: top(τ) = left(κ). If right(λ) = left(κ) then top(τ) = right(λ),
/// i.e. (τ,λ) ∈ 𝒫_βγ. Side BG: top(τ) = right(κ); if right(κ) = left(λ) then
/// (τ,λ) ∈ 𝒫_αγ.
inline std::pair<TriangleAutomaton, SimplStep> one_step(const TriangleAutomaton& m) {
  const TerminalEdge e = select_terminal_edge(m);
  EdgeSet ab = m.p_ab(), ag = m.p_ag(), bg = m.p_bg();
  SimplStep step{StepKind::TK, e.side, e.tau, e.kappa, std::nullopt};
  EdgeSet& own = e.side == Side::AG ? ag : bg;
  EdgeSet& other = e.side == Side::AG ? bg : ag;
  own.erase({e.tau, e.kappa});
  const std::optional<Symbol> lambda = e.side == Side::AG ? predecessor(ab, e.kappa) : successor(ab, e.kappa);
  if (lambda) {
    if (!other.erase({e.tau, *lambda})) {
      throw std::logic_error("one_step: gathering partner (" + std::to_string(e.tau) + "," +
                             std::to_string(*lambda) + ") missing; input is not a gasket automaton");
    }
    step.kind = StepKind::TKL;
    step.lambda = lambda;
  }
  return {m.with_edges(std::move(ab), std::move(ag), std::move(bg)), step};
}

struct SimplificationChain {
  std::vector<TriangleAutomaton> automata;  // M_0, ..., M_q
  std::vector<SimplStep> steps;             // steps[i] takes automata[i] to automata[i+1]

  const TriangleAutomaton& final_automaton() const { return automata.back(); }
};

inline SimplificationChain final_simplification(const TriangleAutomaton& m) {
  SimplificationChain chain;
  chain.automata.push_back(m);
  const std::size_t bound = m.p_ag().size() + m.p_bg().size();
  while (!chain.automata.back().p_ag().empty() || !chain.automata.back().p_bg().empty()) {
    if (chain.steps.size() >= bound) throw std::logic_error("final_simplification: step bound exceeded");
    auto [next, step] = one_step(chain.automata.back());
    chain.automata.push_back(std::move(next));
    chain.steps.push_back(step);
  }
  return chain;
}

inline bool is_double_maximal(const TriangleAutomaton& m, Symbol s) {
  return is_maximal(m, Relation::AG, s) && is_maximal(m, Relation::BG, s);
}

/// Checks the conclusions of one simplification step on (M, M').
inline Report step_invariant_audit(const TriangleAutomaton& m, const TriangleAutomaton& mp, const SimplStep& step) {
  Report rep("step_invariant");
  const std::string who = "step (" + std::string(to_string(step.kind)) + "," + std::string(to_string(step.side)) +
                          ", tau=" + std::to_string(step.tau) + ", kappa=" + std::to_string(step.kappa) + ")";
  auto check = [&](bool holds, const std::string& rule, const std::string& detail) {
    ++rep.checked;
    if (!holds) rep.fail(rule, who + ": " + detail);
  };

  const Report valid = validate_triangle_gasket(mp);
  check(valid.ok(), "gasket", valid.ok() ? "" : valid.findings.front().detail);
  const Report iso = is_gamma_isolated(mp);
  check(iso.ok(), "gamma_isolated", iso.ok() ? "" : iso.findings.front().detail);

  check(is_double_maximal(mp, step.tau), "tau_double_maximal", "tau has a vertical successor in M'");
  check(is_double_maximal(mp, step.kappa), "kappa_double_maximal", "kappa has a vertical successor in M'");
  const Relation own = step.side == Side::AG ? Relation::AG : Relation::BG;
  check(is_minimal(mp, own, step.kappa) && is_maximal(mp, own, step.kappa), "kappa_isolated",
        "kappa still has an edge in " + std::string(to_string(own)));
  const CornerAssign& k = mp.corners();
  const Symbol side_corner = step.side == Side::AG ? k.alpha : k.beta;
  check(step.kappa != side_corner && step.kappa != k.gamma, "kappa_not_corner", "kappa is a corner symbol");
  check(step.tau != k.gamma, "tau_not_gamma", "tau equals gamma");

  // The step itself: exactly the recorded edges disappear.
  check(mp.p_ab() == m.p_ab(), "ab_preserved", "p_ab changed");
  EdgeSet ag = m.p_ag(), bg = m.p_bg();
  (step.side == Side::AG ? ag : bg).erase({step.tau, step.kappa});
  if (step.lambda) (step.side == Side::AG ? bg : ag).erase({step.tau, *step.lambda});
  check(mp.p_ag() == ag && mp.p_bg() == bg, "step_edges", "M' is not M minus the recorded edges");
  check((step.kind == StepKind::TKL) == step.lambda.has_value(), "step_kind", "kind and lambda disagree");
  return rep;
}

}  // namespace gasketlab
