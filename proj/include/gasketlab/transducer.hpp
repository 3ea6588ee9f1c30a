#pragma once

#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gasketlab/automaton.hpp"
#include "gasketlab/parallel.hpp"
#include "gasketlab/report.hpp"
#include "gasketlab/simplify.hpp"
#include "gasketlab/symbolic.hpp"

namespace gasketlab {

/// Symbols the segment classes are built from. For a β-side step the `alpha`
/// slot holds the β symbol; `mirror` records that and changes nothing else.
struct DecompParams {
  Symbol tau = 0;
  Symbol kappa = 0;
  Symbol alpha = 0;
  Symbol gamma = 0;
  bool mirror = false;

  friend bool operator==(const DecompParams&, const DecompParams&) = default;
};

/// Throws on out-of-range or coinciding symbols; returns a warning for the
/// admitted but unusual case τ = α on a three-letter alphabet.
inline std::optional<std::string> check_params(const DecompParams& p, int n) {
  for (Symbol s : {p.tau, p.kappa, p.alpha, p.gamma}) {
    if (s < 1 || s > n) throw std::invalid_argument("params: symbol " + std::to_string(s) + " outside 1.." + std::to_string(n));
  }
  const bool distinct = p.kappa != p.alpha && p.kappa != p.gamma && p.alpha != p.gamma && p.tau != p.kappa &&
                        p.tau != p.gamma;
  if (!distinct) throw std::invalid_argument("params: tau, kappa, alpha, gamma must be distinct (tau = alpha allowed)");
  if (n >= 4) return std::nullopt;
  if (p.tau == p.alpha && n == 3) return std::string("alphabet of size 3 with tau = alpha; the construction assumes N >= 4");
  throw std::invalid_argument("params: alphabet too small");
}

inline DecompParams params_for_step(const TriangleAutomaton& m, const SimplStep& step) {
  const CornerAssign& k = m.corners();
  return {step.tau, step.kappa, step.side == Side::AG ? k.alpha : k.beta, k.gamma, step.side == Side::BG};
}

enum class SegClass { LETTER, TG_K, KAK_G, KAK_GG, TGG };

inline std::string_view to_string(SegClass c) {
  switch (c) {
    case SegClass::LETTER: return "LETTER";
    case SegClass::TG_K: return "TG_K";
    case SegClass::KAK_G: return "KAK_G";
    case SegClass::KAK_GG: return "KAK_GG";
    case SegClass::TGG: return "TGG";
  }
  return "?";
}

/// τγ^k (TG_K), κα^kκγ (KAK_G), κα^kκγγ (KAK_GG), τγγ (TGG) or one letter.
struct Segment {
  SegClass cls = SegClass::LETTER;
  std::size_t k = 0;
  Word word;

  friend bool operator==(const Segment&, const Segment&) = default;
};

inline Segment make_segment(SegClass cls, std::size_t k, const DecompParams& p, Symbol letter = 0) {
  Segment s{cls, k, {}};
  switch (cls) {
    case SegClass::LETTER:
      s.word = {letter};
      break;
    case SegClass::TG_K:
      if (k < 2) throw std::invalid_argument("TG_K needs k >= 2");
      s.word.push_back(p.tau);
      s.word.insert(s.word.end(), k, p.gamma);
      break;
    case SegClass::KAK_G:
    case SegClass::KAK_GG:
      s.word.push_back(p.kappa);
      s.word.insert(s.word.end(), k, p.alpha);
      s.word.push_back(p.kappa);
      s.word.push_back(p.gamma);
      if (cls == SegClass::KAK_GG) s.word.push_back(p.gamma);
      break;
    case SegClass::TGG:
      s.k = 0;
      s.word = {p.tau, p.gamma, p.gamma};
      break;
  }
  return s;
}

/// Greedy factorisation of x; the segments cover the prefix, after which
/// every position is the letter `tail`.
struct Decomposition {
  std::vector<Segment> segments;
  Symbol tail = 0;

  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

namespace detail {

/// Length of the run of s starting at `from`; kInfinity if it runs into the tail.
inline std::size_t run_length(const ECSeq& x, std::size_t from, Symbol s) {
  std::size_t k = 0;
  while (x.at(from + k) == s) {
    if (from + k > x.prefix_length()) return kInfinity;
    ++k;
  }
  return k;
}

template <bool Prime>
Decomposition decompose(const ECSeq& x, const DecompParams& p) {
  if (x.tail() == p.gamma) {
    throw std::invalid_argument("decomposition needs a tail different from gamma: " + format(x));
  }
  Decomposition d;
  d.tail = x.tail();
  std::size_t i = 1;
  while (i <= x.prefix_length()) {
    const Symbol s = x.at(i);
    Segment seg = make_segment(SegClass::LETTER, 0, p, s);
    if (s == p.tau) {
      if constexpr (Prime) {
        if (x.at(i + 1) == p.gamma && x.at(i + 2) == p.gamma) seg = make_segment(SegClass::TGG, 0, p);
      } else {
        const std::size_t k = run_length(x, i + 1, p.gamma);
        if (k >= 2 && k != kInfinity) seg = make_segment(SegClass::TG_K, k, p);
      }
    }
    if (s == p.kappa) {
      const std::size_t k = run_length(x, i + 1, p.alpha);
      const bool body = k != kInfinity && x.at(i + 1 + k) == p.kappa && x.at(i + 2 + k) == p.gamma;
      if (body) {
        const bool gg = Prime && x.at(i + 3 + k) == p.gamma;
        seg = make_segment(gg ? SegClass::KAK_GG : SegClass::KAK_G, k, p);
      }
    }
    i += seg.word.size();
    d.segments.push_back(std::move(seg));
  }
  return d;
}

}  // namespace detail

/// Factorisation over 𝒞_M ∪ Σ with 𝒞_M = {τγ^k : k ≥ 2} ∪ {κα^kκγ : k ≥ 0}.
inline Decomposition m_decompose(const ECSeq& x, const DecompParams& p) { return detail::decompose<false>(x, p); }

/// Factorisation over 𝒞_M' ∪ Σ with 𝒞_M' = {κα^kκγγ, κα^kκγ : k ≥ 0} ∪ {τγγ}.
inline Decomposition mp_decompose(const ECSeq& u, const DecompParams& p) { return detail::decompose<true>(u, p); }

/// g₀: τγ^k ↦ κα^{k-2}κγ, κα^kκγ ↦ κα^{k-1}κγγ (k ≥ 1), κκγ ↦ τγγ, i ↦ i.
inline Segment g0_apply(const Segment& s, const DecompParams& p) {
  switch (s.cls) {
    case SegClass::LETTER: return s;
    case SegClass::TG_K: return make_segment(SegClass::KAK_G, s.k - 2, p);
    case SegClass::KAK_G:
      return s.k == 0 ? make_segment(SegClass::TGG, 0, p) : make_segment(SegClass::KAK_GG, s.k - 1, p);
    default: throw std::invalid_argument("g0_apply: segment class " + std::string(to_string(s.cls)) + " is not in C_M");
  }
}

inline Segment g0_invert(const Segment& s, const DecompParams& p) {
  switch (s.cls) {
    case SegClass::LETTER: return s;
    case SegClass::KAK_G: return make_segment(SegClass::TG_K, s.k + 2, p);
    case SegClass::KAK_GG: return make_segment(SegClass::KAK_G, s.k + 1, p);
    case SegClass::TGG: return make_segment(SegClass::KAK_G, 0, p);
    default: throw std::invalid_argument("g0_invert: segment class " + std::string(to_string(s.cls)) + " is not in C_M'");
  }
}

inline ECSeq assemble(const std::vector<Segment>& segs, Symbol tail) {
  Word w;
  for (const auto& s : segs) w.insert(w.end(), s.word.begin(), s.word.end());
  return ECSeq(std::move(w), tail);
}

inline ECSeq g_map(const ECSeq& x, const DecompParams& p) {
  const Decomposition d = m_decompose(x, p);
  std::vector<Segment> out;
  out.reserve(d.segments.size());
  for (const auto& s : d.segments) out.push_back(g0_apply(s, p));
  return assemble(out, d.tail);
}

inline ECSeq h_map(const ECSeq& u, const DecompParams& p) {
  const Decomposition d = mp_decompose(u, p);
  std::vector<Segment> out;
  out.reserve(d.segments.size());
  for (const auto& s : d.segments) out.push_back(g0_invert(s, p));
  return assemble(out, d.tail);
}

/// Exhaustive check of g against one simplification step over
/// {ω κ^∞ : |ω| <= depth}: round trips, transport of decompositions,
/// |g(x)∧g(y)| >= |x∧y| - 2, |T_M(x,y) - T_M'(g(x),g(y))| <= 5 with infinite
/// times matched only to infinite ones, and T_M'(x,y) <= T_M(x,y).
inline Report distortion_audit(const TriangleAutomaton& m, const TriangleAutomaton& mp, const SimplStep& step,
                               std::size_t depth) {
  Report rep("distortion");
  const DecompParams p = params_for_step(m, step);
  if (auto warn = check_params(p, m.alphabet_size())) rep.notes["warning"] = *warn;
  const auto xs = enumerate_with_tail(m.alphabet_size(), depth, p.kappa);
  const std::size_t count = xs.size();

  std::vector<ECSeq> gx(count);
  std::vector<Report> parts(kDefaultChunks);
  for_each_chunk(count, kDefaultChunks, [&](std::size_t c, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const ECSeq& x = xs[i];
      gx[i] = g_map(x, p);
      parts[c].checked += 3;
      if (h_map(gx[i], p) != x) parts[c].fail("round_trip", "h(g(" + format(x) + ")) != x");
      if (g_map(h_map(x, p), p) != x) parts[c].fail("round_trip", "g(h(" + format(x) + ")) != x");
      const Decomposition dx = m_decompose(x, p);
      Decomposition expect{{}, dx.tail};
      for (const auto& s : dx.segments) expect.segments.push_back(g0_apply(s, p));
      if (mp_decompose(gx[i], p) != expect) {
        parts[c].fail("transport", "M'-decomposition of g(" + format(x) + ") is not g0 of its M-decomposition");
      }
    }
  });
  for (auto& part : parts) rep.absorb(part);

  struct Tally {
    std::size_t max_diff = 0;
    std::size_t equalities = 0;
    std::size_t prefix_failures = 0;
    std::string witness;
  };
  std::vector<Tally> tallies(kDefaultChunks);
  std::fill(parts.begin(), parts.end(), Report{});
  for_each_chunk(count, kDefaultChunks, [&](std::size_t c, std::size_t b, std::size_t e) {
    Report& part = parts[c];
    Tally& tally = tallies[c];
    for (std::size_t i = b; i < e; ++i) {
      for (std::size_t j = i + 1; j < count; ++j) {
        const ECSeq& x = xs[i];
        const ECSeq& y = xs[j];
        part.checked += 3;
        const std::size_t lx = common_prefix_len(x, y);
        const std::size_t lg = common_prefix_len(gx[i], gx[j]);
        if (lg == kInfinity) {
          part.fail("injective", "g(" + format(x) + ") = g(" + format(y) + ")");
          continue;
        }
        if (lg + 2 < lx) {
          ++tally.prefix_failures;
          part.fail("prefix_bound", "x=" + format(x) + " y=" + format(y) + ": |g(x)^g(y)| = " + std::to_string(lg) +
                                        " < |x^y| - 2 = " + std::to_string(lx - 2));
        } else if (lg + 2 == lx) {
          if (tally.equalities++ == 0) tally.witness = "x=" + format(x) + " y=" + format(y);
        }
        const std::size_t t = surviving_time(m, x, y);
        const std::size_t tg = surviving_time(mp, gx[i], gx[j]);
        if ((t == kInfinity) != (tg == kInfinity)) {
          part.fail("infinity_class", "x=" + format(x) + " y=" + format(y) + ": equivalence not preserved");
        } else if (t != kInfinity) {
          const std::size_t diff = t > tg ? t - tg : tg - t;
          tally.max_diff = std::max(tally.max_diff, diff);
          if (diff > 5) {
            part.fail("distortion", "x=" + format(x) + " y=" + format(y) + ": T_M = " + std::to_string(t) +
                                        ", T_M'(g) = " + std::to_string(tg));
          }
        }
        const std::size_t tp = surviving_time(mp, x, y);
        if (t != kInfinity && (tp == kInfinity || tp > t)) {
          part.fail("monotone", "x=" + format(x) + " y=" + format(y) + ": T_M'(x,y) > T_M(x,y)");
        }
      }
    }
  });
  Tally total;
  for (std::size_t c = 0; c < parts.size(); ++c) {
    rep.absorb(parts[c]);
    total.max_diff = std::max(total.max_diff, tallies[c].max_diff);
    if (total.equalities == 0 && tallies[c].equalities > 0) total.witness = tallies[c].witness;
    total.equalities += tallies[c].equalities;
    total.prefix_failures += tallies[c].prefix_failures;
  }
  rep.metrics["sequences"] = static_cast<double>(count);
  rep.metrics["max_abs_diff"] = static_cast<double>(total.max_diff);
  rep.metrics["prefix_equalities"] = static_cast<double>(total.equalities);
  rep.notes["prefix_bound_ok"] = total.prefix_failures ? "false" : "true";
  if (!total.witness.empty()) rep.notes["prefix_equality_witness"] = total.witness;
  return rep;
}

}  // namespace gasketlab
