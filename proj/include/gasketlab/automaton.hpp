#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gasketlab/parallel.hpp"
#include "gasketlab/report.hpp"
#include "gasketlab/symbolic.hpp"

namespace gasketlab {

/// Corner roles of the unit triangle: α = (0,0), β = (1,0), γ = apex.
enum class Role : std::uint8_t { A, B, G };

inline constexpr std::array<Role, 3> kRoles{Role::A, Role::B, Role::G};

/// The eight states of a triangle automaton. AB stands for S_αβ, BA for S_βα, ...
enum class State : std::uint8_t { Id, Exit, AB, BA, AG, GA, BG, GB };

/// The three stored edge relations 𝒫_αβ, 𝒫_αγ, 𝒫_βγ. Their mirrors are implied.
enum class Relation : std::uint8_t { AB, AG, BG };

inline constexpr std::array<Relation, 3> kRelations{Relation::AB, Relation::AG, Relation::BG};

constexpr char role_letter(Role r) { return r == Role::A ? 'a' : (r == Role::B ? 'b' : 'g'); }

constexpr State pair_state(Role u, Role v) {
  if (u == Role::A && v == Role::B) return State::AB;
  if (u == Role::B && v == Role::A) return State::BA;
  if (u == Role::A && v == Role::G) return State::AG;
  if (u == Role::G && v == Role::A) return State::GA;
  if (u == Role::B && v == Role::G) return State::BG;
  if (u == Role::G && v == Role::B) return State::GB;
  return State::Exit;
}

constexpr bool is_pair_state(State s) { return s != State::Id && s != State::Exit; }

/// u of S_uv.
constexpr Role first_role(State s) {
  switch (s) {
    case State::AB: case State::AG: return Role::A;
    case State::BA: case State::BG: return Role::B;
    default: return Role::G;
  }
}

/// v of S_uv.
constexpr Role second_role(State s) {
  switch (s) {
    case State::BA: case State::GA: return Role::A;
    case State::AB: case State::GB: return Role::B;
    default: return Role::G;
  }
}

constexpr State mirror(State s) {
  if (!is_pair_state(s)) return s;
  return pair_state(second_role(s), first_role(s));
}

constexpr State relation_state(Relation r) {
  switch (r) {
    case Relation::AB: return State::AB;
    case Relation::AG: return State::AG;
    default: return State::BG;
  }
}

inline std::string_view to_string(State s) {
  switch (s) {
    case State::Id: return "Id";
    case State::Exit: return "Exit";
    case State::AB: return "S_ab";
    case State::BA: return "S_ba";
    case State::AG: return "S_ag";
    case State::GA: return "S_ga";
    case State::BG: return "S_bg";
    case State::GB: return "S_gb";
  }
  return "?";
}

inline std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::AB: return "p_ab";
    case Relation::AG: return "p_ag";
    default: return "p_bg";
  }
}

/// Corner symbols. An absent corner carries -1 (α), -2 (β) or -3 (γ).
struct CornerAssign {
  Symbol alpha = -1;
  Symbol beta = -2;
  Symbol gamma = -3;

  Symbol symbol(Role r) const {
    return r == Role::A ? alpha : (r == Role::B ? beta : gamma);
  }
  bool present(Role r) const { return symbol(r) > 0; }

  friend bool operator==(const CornerAssign&, const CornerAssign&) = default;
};

inline constexpr Symbol absent_code(Role r) {
  return r == Role::A ? -1 : (r == Role::B ? -2 : -3);
}

using Edge = std::pair<Symbol, Symbol>;
using EdgeSet = std::set<Edge>;

/// The 8-state triangle automaton determined by its corner symbols and the
/// three relations 𝒫_αβ, 𝒫_αγ, 𝒫_βγ.
///
/// Mirror pairs are synthesized: (i,j) ∈ 𝒫_uv sends (j,i) to S_vu. A pair in
/// no relation sends Id to Exit. If the relations are not disjoint (an invalid
/// gasket automaton) the first of AB, AG, BG claiming a pair wins in the
/// transition table; validate_triangle_gasket reports the conflict.
class TriangleAutomaton {
 public:
  TriangleAutomaton(int n, CornerAssign corners, EdgeSet p_ab, EdgeSet p_ag, EdgeSet p_bg)
      : n_(n), corners_(corners), rel_{std::move(p_ab), std::move(p_ag), std::move(p_bg)} {
    if (n_ < 1) throw std::invalid_argument("automaton: alphabet size must be >= 1");
    for (Role r : kRoles) {
      const Symbol s = corners_.symbol(r);
      if (s > 0 ? s > n_ : s != absent_code(r)) {
        throw std::invalid_argument("automaton: corner " + std::string(1, role_letter(r)) + " = " +
                                    std::to_string(s) + " is neither a symbol nor its absent code");
      }
    }
    if ((corners_.alpha > 0 && corners_.alpha == corners_.beta) ||
        (corners_.alpha > 0 && corners_.alpha == corners_.gamma) ||
        (corners_.beta > 0 && corners_.beta == corners_.gamma)) {
      throw std::invalid_argument("automaton: corner symbols must be distinct");
    }
    for (const auto& set : rel_) {
      for (const auto& [i, j] : set) {
        if (i < 1 || i > n_ || j < 1 || j > n_) {
          throw std::invalid_argument("automaton: edge (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") out of range");
        }
        if (i == j) {
          throw std::invalid_argument("automaton: diagonal edge (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
        }
      }
    }
    build_tables();
  }

  int alphabet_size() const { return n_; }
  const CornerAssign& corners() const { return corners_; }
  const EdgeSet& edges(Relation r) const { return rel_[static_cast<std::size_t>(r)]; }
  const EdgeSet& p_ab() const { return edges(Relation::AB); }
  const EdgeSet& p_ag() const { return edges(Relation::AG); }
  const EdgeSet& p_bg() const { return edges(Relation::BG); }

  /// Same corners and alphabet, different relations.
  TriangleAutomaton with_edges(EdgeSet p_ab, EdgeSet p_ag, EdgeSet p_bg) const {
    return TriangleAutomaton(n_, corners_, std::move(p_ab), std::move(p_ag), std::move(p_bg));
  }

  /// δ(Id,(i,j)).
  State start(Symbol i, Symbol j) const {
    return from_id_[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n_) +
                    static_cast<std::size_t>(j - 1)];
  }

  /// δ(s,(i,j)). There are no transitions out of Exit.
  State delta(State s, Symbol i, Symbol j) const {
    if (s == State::Id) return start(i, j);
    if (s == State::Exit) throw std::logic_error("delta: Exit has no outgoing transitions");
    const auto& loop = loop_input_[static_cast<std::size_t>(s)];
    return (i == loop.first && j == loop.second) ? s : State::Exit;
  }

  friend bool operator==(const TriangleAutomaton& a, const TriangleAutomaton& b) {
    return a.n_ == b.n_ && a.corners_ == b.corners_ && a.rel_ == b.rel_;
  }

 private:
  void build_tables() {
    const auto n = static_cast<std::size_t>(n_);
    from_id_.assign(n * n, State::Exit);
    for (std::size_t i = 0; i < n; ++i) from_id_[i * n + i] = State::Id;
    auto claim = [&](Symbol i, Symbol j, State s) {
      auto& slot = from_id_[static_cast<std::size_t>(i - 1) * n + static_cast<std::size_t>(j - 1)];
      if (slot == State::Exit) slot = s;
    };
    for (Relation r : kRelations) {
      const State s = relation_state(r);
      for (const auto& [i, j] : edges(r)) {
        claim(i, j, s);
        claim(j, i, mirror(s));
      }
    }
    // S_uv loops on (v-symbol, u-symbol). An absent corner never matches an input.
    loop_input_.fill({0, 0});
    for (State s : {State::AB, State::BA, State::AG, State::GA, State::BG, State::GB}) {
      loop_input_[static_cast<std::size_t>(s)] = {corners_.symbol(second_role(s)),
                                                 corners_.symbol(first_role(s))};
    }
  }

  int n_;
  CornerAssign corners_;
  std::array<EdgeSet, 3> rel_;
  std::vector<State> from_id_;
  std::array<std::pair<Symbol, Symbol>, 8> loop_input_{};
};

/// T_M(x,y): the largest k with S_k != Exit, kInfinity if Exit is never reached.
///
/// After max(|prefix_x|, |prefix_y|) steps the input is the constant pair
/// (tail_x, tail_y). Under a constant input the only non-Exit moves are
/// Id -> Id, Id -> S_uv and S_uv -> S_uv, so within two further steps the
/// state either exits or repeats, and a repeat means it stays forever.
template <class Seq>
std::size_t surviving_time(const TriangleAutomaton& m, const Seq& x, const Seq& y) {
  const std::size_t steps = std::max(x.prefix_length(), y.prefix_length());
  State s = State::Id;
  for (std::size_t k = 1; k <= steps; ++k) {
    s = m.delta(s, x.at(k), y.at(k));
    if (s == State::Exit) return k - 1;
  }
  const Symbol a = x.tail();
  const Symbol b = y.tail();
  for (std::size_t k = steps + 1; k <= steps + 3; ++k) {
    const State next = m.delta(s, a, b);
    if (next == State::Exit) return k - 1;
    if (next == s) return kInfinity;
    s = next;
  }
  throw std::logic_error("surviving_time: constant input did not settle within two steps");
}

/// ρ_{M,ξ}(x,y) = ξ^T, zero when T is infinite.
inline double rho(const TriangleAutomaton& m, const ECSeq& x, const ECSeq& y, double xi) {
  if (!(xi > 0.0 && xi < 1.0)) throw std::invalid_argument("rho: xi must lie in (0,1)");
  const std::size_t t = surviving_time(m, x, y);
  return t == kInfinity ? 0.0 : std::pow(xi, static_cast<double>(t));
}

/// x ~ y in the quotient 𝒜_M.
inline bool equivalent(const TriangleAutomaton& m, const ECSeq& x, const ECSeq& y) {
  return surviving_time(m, x, y) == kInfinity;
}

/// States S_0 = Id, S_1, ... up to the first Exit or `max_steps` transitions.
inline std::vector<State> itinerary(const TriangleAutomaton& m, const ECSeq& x, const ECSeq& y,
                                    std::size_t max_steps) {
  std::vector<State> states{State::Id};
  for (std::size_t k = 1; k <= max_steps && states.back() != State::Exit; ++k) {
    states.push_back(m.delta(states.back(), x.at(k), y.at(k)));
  }
  return states;
}

namespace detail {

inline std::string edge_text(Relation r, const Edge& e) {
  return std::string(to_string(r)) + " (" + std::to_string(e.first) + "," +
         std::to_string(e.second) + ")";
}

inline std::vector<int> out_degree(const EdgeSet& set, int n) {
  std::vector<int> deg(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& e : set) ++deg[static_cast<std::size_t>(e.first)];
  return deg;
}

inline std::vector<int> in_degree(const EdgeSet& set, int n) {
  std::vector<int> deg(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& e : set) ++deg[static_cast<std::size_t>(e.second)];
  return deg;
}

}  // namespace detail

/// True iff `s` has no predecessor in relation r (it is "r-minimal").
inline bool is_minimal(const TriangleAutomaton& m, Relation r, Symbol s) {
  const auto& set = m.edges(r);
  return std::none_of(set.begin(), set.end(), [&](const Edge& e) { return e.second == s; });
}

/// True iff `s` has no successor in relation r.
inline bool is_maximal(const TriangleAutomaton& m, Relation r, Symbol s) {
  const auto& set = m.edges(r);
  return std::none_of(set.begin(), set.end(), [&](const Edge& e) { return e.first == s; });
}

inline std::optional<Symbol> successor(const EdgeSet& set, Symbol s) {
  auto it = set.lower_bound({s, 0});
  if (it != set.end() && it->first == s) return it->second;
  return std::nullopt;
}

inline std::optional<Symbol> predecessor(const EdgeSet& set, Symbol s) {
  for (const auto& e : set) {
    if (e.second == s) return e.first;
  }
  return std::nullopt;
}

/// Checks the gasket-automaton axioms: uniqueness, gathering, boundary, and
/// that no ordered pair is claimed by two states. An empty report means valid.
inline Report validate_triangle_gasket(const TriangleAutomaton& m) {
  Report rep("triangle_gasket");
  const int n = m.alphabet_size();

  // Uniqueness: every relation (and its mirror) is a partial injection.
  for (Relation r : kRelations) {
    const auto out = detail::out_degree(m.edges(r), n);
    const auto in = detail::in_degree(m.edges(r), n);
    for (Symbol s = 1; s <= n; ++s) {
      ++rep.checked;
      if (out[static_cast<std::size_t>(s)] > 1) {
        rep.fail("uniqueness", "symbol " + std::to_string(s) + " has " +
                                   std::to_string(out[static_cast<std::size_t>(s)]) +
                                   " successors in " + std::string(to_string(r)));
      }
      if (in[static_cast<std::size_t>(s)] > 1) {
        rep.fail("uniqueness", "symbol " + std::to_string(s) + " has " +
                                   std::to_string(in[static_cast<std::size_t>(s)]) +
                                   " predecessors in " + std::string(to_string(r)));
      }
    }
  }

  // Gathering: any two of a◁_αγ c, a◁_βγ b, b◁_αβ c imply the third.
  const auto& ab = m.p_ab();
  const auto& ag = m.p_ag();
  const auto& bg = m.p_bg();
  auto family = [](Symbol a, Symbol b, Symbol c) {
    return "a=" + std::to_string(a) + " b=" + std::to_string(b) + " c=" + std::to_string(c);
  };
  for (const auto& [a, c] : ag) {
    for (const auto& [a2, b] : bg) {
      if (a2 != a) continue;
      ++rep.checked;
      if (!ab.count({b, c})) rep.fail("gathering", family(a, b, c) + ": missing p_ab (" +
                                                       std::to_string(b) + "," + std::to_string(c) + ")");
    }
    for (const auto& [b, c2] : ab) {
      if (c2 != c) continue;
      ++rep.checked;
      if (!bg.count({a, b})) rep.fail("gathering", family(a, b, c) + ": missing p_bg (" +
                                                       std::to_string(a) + "," + std::to_string(b) + ")");
    }
  }
  for (const auto& [a, b] : bg) {
    for (const auto& [b2, c] : ab) {
      if (b2 != b) continue;
      ++rep.checked;
      if (!ag.count({a, c})) rep.fail("gathering", family(a, b, c) + ": missing p_ag (" +
                                                       std::to_string(a) + "," + std::to_string(c) + ")");
    }
  }

  // Boundary: j is uv-minimal iff it is vu-maximal.
  const auto& k = m.corners();
  auto require = [&](bool holds, Symbol s, const char* what) {
    ++rep.checked;
    if (!holds) rep.fail("boundary", "corner symbol " + std::to_string(s) + " must be " + what);
  };
  if (k.present(Role::A)) {
    require(is_minimal(m, Relation::AG, k.alpha), k.alpha, "ag-minimal");
    require(is_minimal(m, Relation::AB, k.alpha), k.alpha, "ab-minimal");
  }
  if (k.present(Role::B)) {
    require(is_minimal(m, Relation::BG, k.beta), k.beta, "bg-minimal");
    require(is_maximal(m, Relation::AB, k.beta), k.beta, "ba-minimal (ab-maximal)");
  }
  if (k.present(Role::G)) {
    require(is_maximal(m, Relation::AG, k.gamma), k.gamma, "ga-minimal (ag-maximal)");
    require(is_maximal(m, Relation::BG, k.gamma), k.gamma, "gb-minimal (bg-maximal)");
  }

  // Disjointness: an ordered pair leads to at most one state.
  std::map<Edge, std::vector<State>> claims;
  for (Relation r : kRelations) {
    const State s = relation_state(r);
    for (const auto& [i, j] : m.edges(r)) {
      claims[{i, j}].push_back(s);
      claims[{j, i}].push_back(mirror(s));
    }
  }
  for (const auto& [pair, states] : claims) {
    ++rep.checked;
    if (states.size() > 1 && pair.first < pair.second) {
      std::string which;
      for (State s : states) which += std::string(which.empty() ? "" : ", ") + std::string(to_string(s));
      rep.fail("disjointness", "pair (" + std::to_string(pair.first) + "," +
                                   std::to_string(pair.second) + ") maps to " + which);
    }
  }
  return rep;
}

/// γ-isolated condition: all corners present, 𝒫_αγ ∪ 𝒫_βγ acyclic, γ isolated
/// in all three relations. ok() on the returned report is the verdict.
inline Report is_gamma_isolated(const TriangleAutomaton& m) {
  Report rep("gamma_isolated");
  const auto& k = m.corners();
  ++rep.checked;
  for (Role r : kRoles) {
    if (!k.present(r)) {
      rep.fail("corners", std::string("corner ") + role_letter(r) + " is absent");
    }
  }

  const int n = m.alphabet_size();
  std::vector<std::vector<Symbol>> succ(static_cast<std::size_t>(n) + 1);
  for (Relation r : {Relation::AG, Relation::BG}) {
    for (const auto& [i, j] : m.edges(r)) succ[static_cast<std::size_t>(i)].push_back(j);
  }
  for (auto& s : succ) std::sort(s.begin(), s.end());
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<int> color(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Symbol> stack;
  std::optional<std::vector<Symbol>> cycle;
  auto dfs = [&](auto&& self, Symbol v) -> void {
    color[static_cast<std::size_t>(v)] = 1;
    stack.push_back(v);
    for (Symbol w : succ[static_cast<std::size_t>(v)]) {
      if (cycle) break;
      if (color[static_cast<std::size_t>(w)] == 1) {
        auto it = std::find(stack.begin(), stack.end(), w);
        cycle = std::vector<Symbol>(it, stack.end());
        cycle->push_back(w);
      } else if (color[static_cast<std::size_t>(w)] == 0) {
        self(self, w);
      }
    }
    stack.pop_back();
    color[static_cast<std::size_t>(v)] = 2;
  };
  for (Symbol v = 1; v <= n && !cycle; ++v) {
    if (color[static_cast<std::size_t>(v)] == 0) dfs(dfs, v);
  }
  ++rep.checked;
  if (cycle) rep.fail("acyclic", "cycle " + format(*cycle) + " in p_ag ∪ p_bg");

  if (k.present(Role::G)) {
    for (Relation r : kRelations) {
      ++rep.checked;
      if (!is_minimal(m, r, k.gamma) || !is_maximal(m, r, k.gamma)) {
        rep.fail("gamma_isolated", "gamma " + std::to_string(k.gamma) + " has an edge in " +
                                       std::string(to_string(r)));
      }
    }
  }
  return rep;
}

/// Exhaustive check of min{T(x,y),T(x,z)} <= T(y,z)+1, T(x,y) = T(y,x) and
/// T(x,y) >= |x∧y| over all triples from {ω t^∞ : |ω| <= depth}.
///
/// The triple scan uses, for each y and threshold θ, the bit set
/// {x : T(x,y) > θ}; a pair (y,z) violates the inequality iff the sets for y
/// and z at θ = T(y,z)+1 intersect. Every triple is still examined.
inline Report pseudo_metric_audit(const TriangleAutomaton& m, std::size_t depth) {
  Report rep("pseudo_metric");
  const auto seqs = enumerate_eventually_constant(m.alphabet_size(), depth);
  const std::size_t count = seqs.size();
  constexpr std::uint8_t kInf = 255;

  std::vector<std::uint8_t> t(count * count);
  std::vector<Report> parts(kDefaultChunks);
  for_each_chunk(count, kDefaultChunks, [&](std::size_t c, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      for (std::size_t j = 0; j < count; ++j) {
        const std::size_t v = surviving_time(m, seqs[i], seqs[j]);
        if (v != kInfinity && v >= kInf) throw std::overflow_error("pseudo_metric_audit: depth too large");
        t[i * count + j] = v == kInfinity ? kInf : static_cast<std::uint8_t>(v);
        const std::size_t lcp = common_prefix_len(seqs[i], seqs[j]);
        ++parts[c].checked;
        if (v < lcp) {
          parts[c].fail("prefix_bound", "T(" + format(seqs[i]) + ", " + format(seqs[j]) + ") = " +
                                            std::to_string(v) + " < |x^y| = " + std::to_string(lcp));
        }
      }
    }
  });
  for (auto& p : parts) rep.absorb(p);

  std::uint8_t max_finite = 0;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      const auto v = t[i * count + j];
      if (v != kInf) max_finite = std::max(max_finite, v);
      if (i < j) {
        ++rep.checked;
        if (v != t[j * count + i]) {
          auto show = [&](std::uint8_t w) { return w == kInf ? std::string("inf") : std::to_string(w); };
          rep.fail("symmetry", "T(" + format(seqs[i]) + ", " + format(seqs[j]) + ") = " + show(v) +
                                   " but reversed = " + show(t[j * count + i]));
        }
      }
    }
  }

  const std::size_t levels = static_cast<std::size_t>(max_finite) + 2;
  const std::size_t words = (count + 63) / 64;
  // bits[(y * levels + θ) * words + w]: x in bit w*64+b iff T(x,y) > θ
  std::vector<std::uint64_t> bits(count * levels * words, 0);
  for (std::size_t y = 0; y < count; ++y) {
    for (std::size_t x = 0; x < count; ++x) {
      const auto v = t[x * count + y];
      const std::size_t top = v == kInf ? levels : std::min<std::size_t>(v, levels);
      for (std::size_t th = 0; th < top; ++th) {
        bits[(y * levels + th) * words + x / 64] |= std::uint64_t{1} << (x % 64);
      }
    }
  }

  std::fill(parts.begin(), parts.end(), Report{});
  for_each_chunk(count, kDefaultChunks, [&](std::size_t c, std::size_t b, std::size_t e) {
    for (std::size_t y = b; y < e; ++y) {
      for (std::size_t z = 0; z < count; ++z) {
        if (y == z) continue;
        parts[c].checked += count;
        const auto v = t[y * count + z];
        if (v == kInf) continue;
        const std::size_t th = static_cast<std::size_t>(v) + 1;
        const auto* by = &bits[(y * levels + th) * words];
        const auto* bz = &bits[(z * levels + th) * words];
        for (std::size_t w = 0; w < words; ++w) {
          const std::uint64_t hit = by[w] & bz[w];
          if (!hit) continue;
          const std::size_t x = w * 64 + static_cast<std::size_t>(__builtin_ctzll(hit));
          parts[c].fail("triangle", "x=" + format(seqs[x]) + " y=" + format(seqs[y]) +
                                        " z=" + format(seqs[z]) + ": T(y,z)=" + std::to_string(v));
          break;
        }
      }
    }
  });
  for (auto& p : parts) rep.absorb(p);
  rep.metrics["sequences"] = static_cast<double>(count);
  rep.metrics["max_finite_T"] = static_cast<double>(max_finite);
  return rep;
}

}  // namespace gasketlab
