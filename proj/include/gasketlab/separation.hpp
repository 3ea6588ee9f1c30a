#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gasketlab/automaton.hpp"
#include "gasketlab/geometry.hpp"
#include "gasketlab/parallel.hpp"
#include "gasketlab/report.hpp"

namespace gasketlab {

/// Certified lower bounds on the squared constants C₁², C₂² of the sharp
/// separation argument, and C'² = min of the two (diam K = 1).
struct SeparationConstants {
  std::optional<Frac> C1_sq_lb;  // empty when no two first-level pieces are disjoint
  std::optional<Frac> C2_sq_lb;  // empty when every corner lies in every piece it could
  Frac Cprime_sq_lb;
  std::size_t refine_depth = 0;
};

namespace detail {

/// Minimum squared distance between the depth-`levels` covers of φ_a(K) and
/// φ_b(K), where a and b are given as triangles. Children lie inside their
/// parent, so a parent pair farther than the best found so far is pruned.
inline void cover_min(const GasketSpec& spec, const Triangle& a, const Triangle& b, std::size_t levels,
                      std::optional<Frac>& best) {
  if (best && sq_dist_lower(a, b) >= *best) return;
  const Frac d = sq_dist(a, b);
  if (best && d >= *best) return;
  if (levels == 0) {
    best = d;
    return;
  }
  for (Symbol i = 1; i <= spec.size(); ++i) {
    const Triangle ca = cylinder_child(spec, a, i);
    for (Symbol j = 1; j <= spec.size(); ++j) {
      cover_min(spec, ca, cylinder_child(spec, b, j), levels - 1, best);
    }
  }
}

inline void cover_min_point(const GasketSpec& spec, const Triangle& a, const ObliquePoint& z,
                            std::size_t levels, std::optional<Frac>& best) {
  const Frac d = sq_dist(a, z);
  if (best && d >= *best) return;
  if (levels == 0) {
    best = d;
    return;
  }
  for (Symbol i = 1; i <= spec.size(); ++i) cover_min_point(spec, cylinder_child(spec, a, i), z, levels - 1, best);
}

/// True when every pair of depth-`levels` subcovers stays at least sqrt(target) apart.
inline bool cover_separated(const GasketSpec& spec, const Triangle& a, const Triangle& b, std::size_t levels,
                            const Frac& target) {
  if (sq_dist_lower(a, b) >= target) return true;
  if (overlap(a, b) == Overlap::Disjoint && sq_dist(a, b) >= target) return true;
  if (levels == 0) return false;
  for (Symbol i = 1; i <= spec.size(); ++i) {
    const Triangle ca = cylinder_child(spec, a, i);
    for (Symbol j = 1; j <= spec.size(); ++j) {
      if (!cover_separated(spec, ca, cylinder_child(spec, b, j), levels - 1, target)) return false;
    }
  }
  return true;
}

}  // namespace detail

inline SeparationConstants separation_constants(const GasketSpec& spec, std::size_t refine_depth) {
  const TriangleAutomaton m = topology_automaton(spec);
  const CornerAssign k = m.corners();
  if (!k.present(Role::A) || !k.present(Role::B)) {
    throw OutOfScopeError("separation constants need both bottom corners in K");
  }
  SeparationConstants out;
  out.refine_depth = refine_depth;
  const int n = spec.size();
  for (Symbol i = 1; i <= n; ++i) {
    for (Symbol j = i + 1; j <= n; ++j) {
      if (m.start(i, j) != State::Exit) continue;
      std::optional<Frac> best;
      detail::cover_min(spec, spec.at(i), spec.at(j), refine_depth, best);
      if (*best == 0) {
        throw std::runtime_error("pieces " + std::to_string(i) + " and " + std::to_string(j) +
                                 " are not separated at refine depth " + std::to_string(refine_depth) +
                                 "; raise refine depth");
      }
      if (!out.C1_sq_lb || *best < *out.C1_sq_lb) out.C1_sq_lb = *best;
    }
  }
  const Triangle unit{{Frac(0), Frac(0)}, Frac(1)};
  for (Role r : kRoles) {
    if (!k.present(r)) continue;
    const ObliquePoint z = unit.vertex(r);
    for (Symbol i = 1; i <= n; ++i) {
      if (i == k.symbol(r)) continue;
      std::optional<Frac> best;
      detail::cover_min_point(spec, spec.at(i), z, refine_depth, best);
      if (*best == 0) {
        throw std::runtime_error("corner " + to_string(z) + " touches the cover of piece " + std::to_string(i) +
                                 " at refine depth " + std::to_string(refine_depth) + "; raise refine depth");
      }
      if (!out.C2_sq_lb || *best < *out.C2_sq_lb) out.C2_sq_lb = *best;
    }
  }
  if (!out.C1_sq_lb && !out.C2_sq_lb) {
    throw std::runtime_error("separation constants: no disjoint pieces and no exposed corners");
  }
  if (out.C1_sq_lb && out.C2_sq_lb) {
    out.Cprime_sq_lb = std::min(*out.C1_sq_lb, *out.C2_sq_lb);
  } else {
    out.Cprime_sq_lb = out.C1_sq_lb ? *out.C1_sq_lb : *out.C2_sq_lb;
  }
  return out;
}

/// Compares, for all I, J of length `depth`, the state reached in M_K with the
/// exact intersection of the cylinder triangles, and certifies the sharp
/// separation inequality for every pair the automaton sends to Exit.
inline Report geometry_vs_automaton_audit(const GasketSpec& spec, std::size_t depth, std::size_t refine_depth = 2) {
  Report rep("geometry_vs_automaton");
  const TriangleAutomaton m = topology_automaton(spec);
  const CornerAssign k = m.corners();
  const SeparationConstants sc = separation_constants(spec, refine_depth);
  const auto words = words_of_length(spec.size(), depth);
  std::vector<Triangle> cyl;
  cyl.reserve(words.size());
  for (const auto& w : words) cyl.push_back(cylinder(spec, w));

  std::vector<Report> parts(kDefaultChunks);
  for_each_chunk(words.size(), kDefaultChunks, [&](std::size_t c, std::size_t b, std::size_t e) {
    Report& part = parts[c];
    for (std::size_t x = b; x < e; ++x) {
      for (std::size_t y = 0; y < words.size(); ++y) {
        ++part.checked;
        State s = State::Id;
        for (std::size_t t = 0; t < depth && s != State::Exit; ++t) s = m.delta(s, words[x][t], words[y][t]);
        const Triangle& tx = cyl[x];
        const Triangle& ty = cyl[y];
        auto tag = [&] { return "I=" + format(words[x]) + " J=" + format(words[y]); };
        ObliquePoint z;
        const Overlap ov = overlap(tx, ty, &z);
        State expect = State::Exit;
        if (x == y) {
          expect = State::Id;
        } else if (ov == Overlap::Interior) {
          part.fail("geometry", tag() + ": cylinders overlap in their interiors");
          continue;
        } else if (ov == Overlap::Point) {
          const auto v = vertex_role(tx, z);
          const auto u = vertex_role(ty, z);
          if (!v || !u) {
            part.fail("geometry", tag() + ": cylinders meet at a non-vertex point " + to_string(z));
            continue;
          }
          if (k.present(*u) && k.present(*v)) expect = pair_state(*u, *v);
        }
        if (s != expect) {
          part.fail("state", tag() + ": automaton reaches " + std::string(to_string(s)) + ", geometry gives " +
                                 std::string(to_string(expect)));
          continue;
        }
        if (s != State::Exit) continue;
        const Frac& rmin = std::min(tx.size, ty.size);
        const Frac target = sc.Cprime_sq_lb * rmin * rmin;
        if (!detail::cover_separated(spec, tx, ty, refine_depth, target)) {
          part.fail("sharp_separation", tag() + ": distance not certified above C'·min(r_I, r_J)");
        }
      }
    }
  });
  for (auto& p : parts) rep.absorb(p);
  rep.metrics["pairs"] = static_cast<double>(words.size() * words.size());
  rep.metrics["Cprime_sq_lb"] = sc.Cprime_sq_lb.get_d();
  rep.notes["Cprime_sq_lb"] = sc.Cprime_sq_lb.get_str();
  return rep;
}

/// Finite checks behind the statement that every nontrivial connected
/// component of K is a horizontal segment: (a) at each depth k, cylinders
/// glued right-vertex-to-left-vertex form chains on one baseline whose height
/// is at most (r*)^k; (b) the nested apex cylinders φ_{γ^m}(Δ) touch no other
/// depth-m cylinder.
inline Report component_audit(const GasketSpec& spec, std::size_t depth) {
  const CornerAssign k = corner_symbols(spec);
  if (!k.present(Role::A) || !k.present(Role::B)) {
    throw OutOfScopeError("component audit needs both bottom corners in K");
  }
  const FamilyReport fam = family_check(spec);
  if (!(fam.top_isolated || !fam.gamma_in_K)) {
    throw OutOfScopeError("component audit needs the apex piece isolated or absent");
  }
  Report rep("component");
  const Frac rmax = spec.max_ratio();
  Frac bound(1);
  for (std::size_t level = 1; level <= depth; ++level) {
    bound *= rmax;
    const auto words = words_of_length(spec.size(), level);
    std::vector<Triangle> cyl;
    cyl.reserve(words.size());
    for (const auto& w : words) cyl.push_back(cylinder(spec, w));

    std::vector<std::size_t> parent(cyl.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    std::map<ObliquePoint, std::size_t> left;
    for (std::size_t i = 0; i < cyl.size(); ++i) left.emplace(cyl[i].vertex(Role::A), i);
    for (std::size_t i = 0; i < cyl.size(); ++i) {
      auto it = left.find(cyl[i].vertex(Role::B));
      if (it != left.end()) parent[find(i)] = find(it->second);
    }
    std::map<std::size_t, std::pair<Frac, Frac>> extent;  // root -> (min q, max top q)
    std::map<std::size_t, Frac> baseline;
    std::map<std::size_t, std::size_t> members;
    for (std::size_t i = 0; i < cyl.size(); ++i) {
      const std::size_t r = find(i);
      const Frac lo = cyl[i].origin.q;
      const Frac hi = cyl[i].origin.q + cyl[i].size;
      ++members[r];
      auto [it, fresh] = extent.emplace(r, std::make_pair(lo, hi));
      if (!fresh) {
        it->second.first = std::min(it->second.first, lo);
        it->second.second = std::max(it->second.second, hi);
      }
      auto [bt, bfresh] = baseline.emplace(r, lo);
      ++rep.checked;
      if (!bfresh && bt->second != lo) {
        rep.fail("baseline", "depth " + std::to_string(level) + ": chain through " + format(words[i]) +
                                 " leaves its baseline");
      }
    }
    for (const auto& [r, span] : extent) {
      if (members[r] < 2) continue;
      ++rep.checked;
      if (span.second - span.first > bound) {
        rep.fail("extent", "depth " + std::to_string(level) + ": chain through " + format(words[r]) +
                               " is taller than (r*)^k");
      }
    }
    if (fam.gamma_in_K) {
      const Word apex(level, k.gamma);
      const Triangle top = cylinder(spec, apex);
      for (std::size_t i = 0; i < cyl.size(); ++i) {
        if (words[i] == apex) continue;
        ++rep.checked;
        if (overlap(top, cyl[i]) != Overlap::Disjoint) {
          rep.fail("apex", "depth " + std::to_string(level) + ": apex cylinder meets " + format(words[i]));
        }
      }
    }
  }
  return rep;
}

}  // namespace gasketlab
