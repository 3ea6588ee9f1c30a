#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gasketlab/automaton.hpp"
#include "gasketlab/rational.hpp"
#include "gasketlab/report.hpp"
#include "gasketlab/symbolic.hpp"

namespace gasketlab {

/// Upward triangle {p >= origin.p, q >= origin.q, p + q <= origin.p + origin.q + size}.
struct Triangle {
  ObliquePoint origin;
  Frac size;

  Frac top() const { return origin.p + origin.q + size; }

  ObliquePoint vertex(Role r) const {
    switch (r) {
      case Role::A: return origin;
      case Role::B: return {origin.p + size, origin.q};
      default: return {origin.p, origin.q + size};
    }
  }

  friend bool operator==(const Triangle& a, const Triangle& b) {
    return a.origin == b.origin && a.size == b.size;
  }
};

/// A fractal gasket given by the image triangles φ_j(Δ), j = 1..N.
/// Map j is z ↦ size_j·z + origin_j; in the usual notation r_j = size_j and
/// d_j = origin_j / r_j.
struct GasketSpec {
  std::vector<Triangle> triangles;

  int size() const { return static_cast<int>(triangles.size()); }
  const Triangle& at(Symbol j) const { return triangles.at(static_cast<std::size_t>(j - 1)); }

  Frac min_ratio() const {
    Frac r = triangles.front().size;
    for (const auto& t : triangles) r = std::min(r, t.size);
    return r;
  }
  Frac max_ratio() const {
    Frac r = triangles.front().size;
    for (const auto& t : triangles) r = std::max(r, t.size);
    return r;
  }
};

enum class Overlap { Disjoint, Point, Interior };

/// Intersection type of two upward triangles; `point` receives the meeting
/// point when the type is Point.
inline Overlap overlap(const Triangle& a, const Triangle& b, ObliquePoint* point = nullptr) {
  const Frac P = std::max(a.origin.p, b.origin.p);
  const Frac Q = std::max(a.origin.q, b.origin.q);
  const Frac C = std::min(a.top(), b.top());
  const Frac s = P + Q;
  if (s > C) return Overlap::Disjoint;
  if (s < C) return Overlap::Interior;
  if (point) *point = {P, Q};
  return Overlap::Point;
}

inline std::optional<Role> vertex_role(const Triangle& t, const ObliquePoint& z) {
  for (Role r : kRoles) {
    if (t.vertex(r) == z) return r;
  }
  return std::nullopt;
}

inline Report validate_spec(const GasketSpec& spec) {
  Report rep("spec");
  ++rep.checked;
  if (spec.triangles.empty()) {
    rep.fail("structure", "a gasket needs at least one triangle");
    return rep;
  }
  for (Symbol j = 1; j <= spec.size(); ++j) {
    const auto& t = spec.at(j);
    ++rep.checked;
    if (t.size <= 0 || t.size >= 1) {
      rep.fail("ratio", "triangle " + std::to_string(j) + " has size " + t.size.get_str() +
                            " outside (0,1)");
    }
    ++rep.checked;
    if (t.origin.p < 0 || t.origin.q < 0 || t.top() > 1) {
      rep.fail("containment", "triangle " + std::to_string(j) + " at " + to_string(t.origin) +
                                  " size " + t.size.get_str() + " leaves the unit triangle");
    }
  }
  for (Symbol i = 1; i <= spec.size(); ++i) {
    for (Symbol j = i + 1; j <= spec.size(); ++j) {
      ++rep.checked;
      ObliquePoint z;
      const auto& a = spec.at(i);
      const auto& b = spec.at(j);
      switch (overlap(a, b, &z)) {
        case Overlap::Disjoint:
          break;
        case Overlap::Interior:
          rep.fail("overlap", "triangles " + std::to_string(i) + " and " + std::to_string(j) +
                                  " share interior points");
          break;
        case Overlap::Point:
          if (!vertex_role(a, z) || !vertex_role(b, z)) {
            rep.fail("vertex_contact", "triangles " + std::to_string(i) + " and " +
                                           std::to_string(j) + " meet at " + to_string(z) +
                                           ", which is not a vertex of both");
          }
          break;
      }
    }
  }
  return rep;
}

inline void require_valid(const GasketSpec& spec) {
  const Report rep = validate_spec(spec);
  if (!rep.ok()) {
    throw std::invalid_argument("invalid gasket: " + rep.findings.front().detail);
  }
}

/// The symbol whose triangle occupies each corner of Δ, or the absent code.
inline CornerAssign corner_symbols(const GasketSpec& spec) {
  CornerAssign k;
  for (Symbol j = 1; j <= spec.size(); ++j) {
    const auto& t = spec.at(j);
    if (t.origin.p == 0 && t.origin.q == 0) k.alpha = j;
    if (t.origin.q == 0 && t.origin.p + t.size == 1) k.beta = j;
    if (t.origin.p == 0 && t.origin.q + t.size == 1) k.gamma = j;
  }
  return k;
}

/// φ_i(ω_v) = φ_j(ω_u) = point.
struct Contact {
  Symbol i;
  Symbol j;
  Role v;
  Role u;
  ObliquePoint point;
};

/// All ordered contacts, sorted by (i, j).
inline std::vector<Contact> contacts(const GasketSpec& spec) {
  std::vector<Contact> out;
  for (Symbol i = 1; i <= spec.size(); ++i) {
    for (Symbol j = 1; j <= spec.size(); ++j) {
      if (i == j) continue;
      for (Role v : kRoles) {
        for (Role u : kRoles) {
          if (u == v) continue;
          const ObliquePoint z = spec.at(i).vertex(v);
          if (z == spec.at(j).vertex(u)) out.push_back({i, j, v, u, z});
        }
      }
    }
  }
  return out;
}

/// M_K: (i,j) ∈ 𝒫_uv when φ_i(ω_v) = φ_j(ω_u) and both ω_u, ω_v lie in K.
inline TriangleAutomaton topology_automaton(const GasketSpec& spec) {
  const CornerAssign k = corner_symbols(spec);
  std::array<EdgeSet, 3> rel;
  for (const Contact& c : contacts(spec)) {
    if (!k.present(c.u) || !k.present(c.v)) continue;
    const State s = pair_state(c.u, c.v);
    if (s == State::AB) rel[0].insert({c.i, c.j});
    if (s == State::AG) rel[1].insert({c.i, c.j});
    if (s == State::BG) rel[2].insert({c.i, c.j});
  }
  return TriangleAutomaton(spec.size(), k, rel[0], rel[1], rel[2]);
}

/// Maximal chains j₁, j₂, ... with φ_{j_m}(ω_β) = φ_{j_{m+1}}(ω_α), ordered by
/// their first element.
inline std::vector<Word> horizontal_blocks(const GasketSpec& spec) {
  const int n = spec.size();
  std::vector<Symbol> next(static_cast<std::size_t>(n) + 1, 0);
  std::vector<bool> has_prev(static_cast<std::size_t>(n) + 1, false);
  std::map<ObliquePoint, Symbol> left_vertex;
  for (Symbol j = 1; j <= n; ++j) left_vertex.emplace(spec.at(j).vertex(Role::A), j);
  for (Symbol i = 1; i <= n; ++i) {
    auto it = left_vertex.find(spec.at(i).vertex(Role::B));
    if (it != left_vertex.end()) {
      next[static_cast<std::size_t>(i)] = it->second;
      has_prev[static_cast<std::size_t>(it->second)] = true;
    }
  }
  std::vector<Word> blocks;
  for (Symbol j = 1; j <= n; ++j) {
    if (has_prev[static_cast<std::size_t>(j)]) continue;
    Word chain;
    for (Symbol s = j; s != 0; s = next[static_cast<std::size_t>(s)]) chain.push_back(s);
    blocks.push_back(std::move(chain));
  }
  return blocks;
}

/// Index into horizontal_blocks for each symbol (1-based symbols, slot 0 unused).
inline std::vector<int> block_index(const std::vector<Word>& blocks, int n) {
  std::vector<int> idx(static_cast<std::size_t>(n) + 1, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (Symbol s : blocks[b]) idx[static_cast<std::size_t>(s)] = static_cast<int>(b);
  }
  return idx;
}

struct FamilyReport {
  bool top_isolated = false;
  bool gamma_in_K = false;
  bool alpha_beta_same_block = false;
  bool in_F_T_ab = false;
};

inline FamilyReport family_check(const GasketSpec& spec) {
  const CornerAssign k = corner_symbols(spec);
  if (!k.present(Role::A) || !k.present(Role::B)) {
    throw OutOfScopeError("gasket must contain both bottom corners (0,0) and (1,0)");
  }
  FamilyReport f;
  f.gamma_in_K = k.present(Role::G);
  if (f.gamma_in_K) {
    f.top_isolated = true;
    for (Symbol j = 1; j <= spec.size(); ++j) {
      if (j != k.gamma && overlap(spec.at(k.gamma), spec.at(j)) != Overlap::Disjoint) {
        f.top_isolated = false;
      }
    }
  }
  const auto idx = block_index(horizontal_blocks(spec), spec.size());
  f.alpha_beta_same_block = idx[static_cast<std::size_t>(k.alpha)] == idx[static_cast<std::size_t>(k.beta)];
  f.in_F_T_ab = (f.top_isolated || !f.gamma_in_K) && f.alpha_beta_same_block;
  return f;
}

/// φ_I(Δ).
inline Triangle cylinder(const GasketSpec& spec, const Word& w) {
  Triangle t{{Frac(0), Frac(0)}, Frac(1)};
  for (Symbol j : w) {
    const auto& m = spec.at(j);
    t.origin = t.origin + t.size * m.origin;
    t.size *= m.size;
  }
  return t;
}

/// φ_{Ij}(Δ) from t = φ_I(Δ).
inline Triangle cylinder_child(const GasketSpec& spec, const Triangle& t, Symbol j) {
  const auto& m = spec.at(j);
  return Triangle{t.origin + t.size * m.origin, t.size * m.size};
}

/// φ_I(z).
inline ObliquePoint apply_word(const GasketSpec& spec, const Word& w, const ObliquePoint& z) {
  const Triangle t = cylinder(spec, w);
  return t.origin + t.size * z;
}

/// The fixed point of φ_j.
inline ObliquePoint fixed_point(const GasketSpec& spec, Symbol j) {
  const auto& m = spec.at(j);
  const Frac k = 1 / (1 - m.size);
  return k * m.origin;
}

/// π(ω κ^∞) = φ_ω(fixed point of φ_κ).
inline ObliquePoint pi_point(const GasketSpec& spec, const ECSeq& x) {
  return apply_word(spec, x.prefix(), fixed_point(spec, x.tail()));
}

/// Squared distance from z to the segment [a, b].
inline Frac sq_dist_segment(const ObliquePoint& z, const ObliquePoint& a, const ObliquePoint& b) {
  const ObliquePoint ab = b - a;
  const Frac len = dot(ab, ab);
  Frac t = dot(z - a, ab) / len;
  if (t < 0) t = 0;
  if (t > 1) t = 1;
  return sq_dist(z, a + t * ab);
}

inline bool contains(const Triangle& t, const ObliquePoint& z) {
  return z.p >= t.origin.p && z.q >= t.origin.q && z.p + z.q <= t.top();
}

inline Frac sq_dist(const Triangle& t, const ObliquePoint& z) {
  if (contains(t, z)) return Frac(0);
  const auto a = t.vertex(Role::A), b = t.vertex(Role::B), g = t.vertex(Role::G);
  return std::min({sq_dist_segment(z, a, b), sq_dist_segment(z, b, g), sq_dist_segment(z, g, a)});
}

/// A cheap lower bound: the two triangles project onto the p, q and p+q axes
/// as intervals, and a gap h on any axis keeps them (√3/2)·h apart.
inline Frac sq_dist_lower(const Triangle& a, const Triangle& b) {
  Frac gap(0);
  auto consider = [&](const Frac& lo1, const Frac& hi1, const Frac& lo2, const Frac& hi2) {
    if (lo2 > hi1) gap = std::max(gap, Frac(lo2 - hi1));
    if (lo1 > hi2) gap = std::max(gap, Frac(lo1 - hi2));
  };
  consider(a.origin.p, a.top() - a.origin.q, b.origin.p, b.top() - b.origin.q);
  consider(a.origin.q, a.top() - a.origin.p, b.origin.q, b.top() - b.origin.p);
  consider(a.origin.p + a.origin.q, a.top(), b.origin.p + b.origin.q, b.top());
  return Frac(3, 4) * gap * gap;
}

/// Exact squared distance between two upward triangles.
inline Frac sq_dist(const Triangle& a, const Triangle& b) {
  if (overlap(a, b) != Overlap::Disjoint) return Frac(0);
  Frac best;
  bool first = true;
  for (int side = 0; side < 2; ++side) {
    const Triangle& s = side == 0 ? a : b;
    const Triangle& t = side == 0 ? b : a;
    for (Role r : kRoles) {
      const ObliquePoint z = s.vertex(r);
      for (int e = 0; e < 3; ++e) {
        const Frac d = sq_dist_segment(z, t.vertex(kRoles[static_cast<std::size_t>(e)]),
                                       t.vertex(kRoles[static_cast<std::size_t>((e + 1) % 3)]));
        if (first || d < best) {
          best = d;
          first = false;
        }
      }
    }
  }
  return best;
}

/// All words of length k in lexicographic order.
inline std::vector<Word> words_of_length(int n, std::size_t k) {
  std::vector<Word> out{Word{}};
  for (std::size_t len = 0; len < k; ++len) {
    std::vector<Word> next;
    next.reserve(out.size() * static_cast<std::size_t>(n));
    for (const Word& w : out) {
      for (Symbol s = 1; s <= n; ++s) {
        Word v = w;
        v.push_back(s);
        next.push_back(std::move(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace gasketlab
