#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gasketlab/gasketlab.hpp"

namespace fixtures {

using namespace gasketlab;

inline Triangle tri(const char* p, const char* q, const char* r) {
  return {{parse_frac(p), parse_frac(q)}, parse_frac(r)};
}

inline GasketSpec sier() { return {{tri("0", "0", "1/2"), tri("1/2", "0", "1/2"), tri("0", "1/2", "1/2")}}; }

inline GasketSpec h6() {
  return {{tri("0", "0", "1/4"), tri("1/4", "0", "1/4"), tri("1/2", "0", "1/4"), tri("3/4", "0", "1/4"),
           tri("0", "1/4", "1/4"), tri("0", "3/4", "1/4")}};
}

inline GasketSpec h6prime() {
  GasketSpec s = h6();
  s.triangles[4] = tri("1/2", "1/4", "1/4");
  return s;
}

inline GasketSpec g5() {
  return {{tri("0", "0", "1/4"), tri("1/4", "0", "1/4"), tri("1/2", "0", "1/4"), tri("3/4", "0", "1/4"),
           tri("0", "3/4", "1/4")}};
}

inline GasketSpec g5prime() {
  GasketSpec s = g5();
  s.triangles[4] = tri("0", "1/2", "1/4");
  return s;
}

inline std::string spec_path(const std::string& name) { return std::string(GASKETLAB_SPEC_DIR) + "/" + name; }

inline GasketSpec example_e() { return load_spec(spec_path("example_e.json")); }
inline GasketSpec example_f() { return load_spec(spec_path("example_f.json")); }

inline TriangleAutomaton sierpinski_automaton() {
  return TriangleAutomaton(3, {1, 2, 3}, {{1, 2}}, {{1, 3}}, {{2, 3}});
}

inline TriangleAutomaton h6_automaton() {
  return TriangleAutomaton(6, {1, 4, 6}, {{1, 2}, {2, 3}, {3, 4}}, {{1, 5}}, {{2, 5}});
}

inline ECSeq seq(const std::string& text, int n) { return parse_ecseq(text, n); }

inline GasketSpec permuted(const GasketSpec& s, const std::vector<int>& order) {
  GasketSpec out;
  for (int i : order) out.triangles.push_back(s.triangles[static_cast<std::size_t>(i)]);
  return out;
}

// ---- hand-rolled generators -------------------------------------------------

using Rng = std::mt19937_64;

/// Upward cells of the m-grid: origin (a/m, b/m), size 1/m, a + b < m.
inline std::vector<Triangle> grid_cells(int m) {
  std::vector<Triangle> out;
  for (int b = 0; b < m; ++b) {
    for (int a = 0; a + b < m; ++a) out.push_back({{make_frac(a, m), make_frac(b, m)}, make_frac(1, m)});
  }
  return out;
}

/// A valid spec of at most `max_n` cells drawn from grids 2..4 (sizes mixed
/// when `mixed`), kept only if it passes validation. Both bottom corners are
/// forced in when `bottom_corners` is set.
inline GasketSpec random_spec(Rng& rng, int max_n, bool mixed, bool bottom_corners) {
  for (;;) {
    const int m = std::uniform_int_distribution<int>(2, 4)(rng);
    std::vector<Triangle> pool = grid_cells(m);
    if (mixed) {
      for (int other : {2, 3, 4}) {
        if (other == m) continue;
        for (const auto& c : grid_cells(other)) pool.push_back(c);
      }
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    const int n = std::uniform_int_distribution<int>(1, max_n)(rng);
    GasketSpec spec;
    if (bottom_corners) {
      spec.triangles.push_back({{Frac(0), Frac(0)}, make_frac(1, m)});
      spec.triangles.push_back({{make_frac(m - 1, m), Frac(0)}, make_frac(1, m)});
    }
    for (const auto& c : pool) {
      if (static_cast<int>(spec.triangles.size()) >= n) break;
      GasketSpec trial = spec;
      trial.triangles.push_back(c);
      if (validate_spec(trial).ok()) spec = trial;
    }
    if (spec.triangles.empty() || !validate_spec(spec).ok()) continue;
    std::vector<int> order(spec.triangles.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    return permuted(spec, order);
  }
}

/// Valid gasket automaton from random edge sets and corners (rejection
/// sampling), not necessarily realisable by any gasket.
inline TriangleAutomaton random_gasket_automaton(Rng& rng, int n) {
  std::uniform_int_distribution<int> sym(1, n);
  for (;;) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    CornerAssign k;
    std::bernoulli_distribution keep(0.8);
    if (n >= 1 && keep(rng)) k.alpha = perm[0];
    if (n >= 2 && keep(rng)) k.beta = perm[1];
    if (n >= 3 && keep(rng)) k.gamma = perm[2];
    std::array<EdgeSet, 3> rel;
    const int edges = std::uniform_int_distribution<int>(0, n + 1)(rng);
    for (int e = 0; e < edges; ++e) {
      const int i = sym(rng), j = sym(rng);
      if (i == j) continue;
      rel[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, 2)(rng))].insert({i, j});
    }
    TriangleAutomaton m(n, k, rel[0], rel[1], rel[2]);
    if (validate_triangle_gasket(m).ok()) return m;
  }
}

/// Valid γ-isolated automaton with at least one γ-side edge. Half of the
/// draws come from geometry (grid gaskets with the apex cell kept clear),
/// half from rejection sampling over edge sets.
inline TriangleAutomaton random_gamma_isolated(Rng& rng, int min_n, int max_n) {
  for (;;) {
    if (std::bernoulli_distribution(0.5)(rng)) {
      const int m = std::uniform_int_distribution<int>(3, 4)(rng);
      std::vector<Triangle> cells = grid_cells(m);
      const Triangle apex{{Frac(0), make_frac(m - 1, m)}, make_frac(1, m)};
      GasketSpec spec{{{{Frac(0), Frac(0)}, make_frac(1, m)}, {{make_frac(m - 1, m), Frac(0)}, make_frac(1, m)}, apex}};
      std::shuffle(cells.begin(), cells.end(), rng);
      const int n = std::uniform_int_distribution<int>(min_n, max_n)(rng);
      for (const auto& c : cells) {
        if (static_cast<int>(spec.triangles.size()) >= n) break;
        if (c == spec.triangles[0] || c == spec.triangles[1] || c == apex) continue;
        if (overlap(c, apex) != Overlap::Disjoint) continue;
        spec.triangles.push_back(c);
      }
      std::vector<int> order(spec.triangles.size());
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      const GasketSpec shuffled = permuted(spec, order);
      if (!validate_spec(shuffled).ok()) continue;
      const TriangleAutomaton m2 = topology_automaton(shuffled);
      if (m2.alphabet_size() >= min_n && (!m2.p_ag().empty() || !m2.p_bg().empty()) && is_gamma_isolated(m2).ok()) {
        return m2;
      }
      continue;
    }
    const int n = std::uniform_int_distribution<int>(min_n, max_n)(rng);
    const TriangleAutomaton m2 = random_gasket_automaton(rng, n);
    if (m2.p_ag().empty() && m2.p_bg().empty()) continue;
    if (is_gamma_isolated(m2).ok()) return m2;
  }
}

/// Renames symbols: s -> perm[s-1].
inline TriangleAutomaton relabeled(const TriangleAutomaton& m, const std::vector<Symbol>& perm) {
  auto map_sym = [&](Symbol s) { return s > 0 ? perm[static_cast<std::size_t>(s - 1)] : s; };
  auto map_set = [&](const EdgeSet& set) {
    EdgeSet out;
    for (const auto& [i, j] : set) out.insert({map_sym(i), map_sym(j)});
    return out;
  };
  const CornerAssign& k = m.corners();
  return TriangleAutomaton(m.alphabet_size(), {map_sym(k.alpha), map_sym(k.beta), map_sym(k.gamma)},
                           map_set(m.p_ab()), map_set(m.p_ag()), map_set(m.p_bg()));
}

inline ECSeq random_seq(Rng& rng, int n, std::size_t max_prefix) {
  std::uniform_int_distribution<int> sym(1, n);
  Word w(std::uniform_int_distribution<std::size_t>(0, max_prefix)(rng));
  for (auto& s : w) s = sym(rng);
  return canonicalize(w, sym(rng));
}

}  // namespace fixtures
