#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gasketlab/automaton.hpp"
#include "gasketlab/geometry.hpp"
#include "gasketlab/parallel.hpp"
#include "gasketlab/report.hpp"
#include "gasketlab/separation.hpp"
#include "gasketlab/simplify.hpp"
#include "gasketlab/transducer.hpp"

namespace gasketlab {

struct BlockProfile {
  std::vector<std::size_t> sizes;             // ascending
  std::optional<std::size_t> ab_block_size;   // absent when α and β lie in different blocks
  std::optional<Frac> uniform_ratio;

  friend bool operator==(const BlockProfile&, const BlockProfile&) = default;
};

inline BlockProfile block_profile(const GasketSpec& spec) {
  const CornerAssign k = corner_symbols(spec);
  if (!k.present(Role::A) || !k.present(Role::B)) {
    throw OutOfScopeError("block profile needs both bottom corners in K");
  }
  BlockProfile out;
  const auto blocks = horizontal_blocks(spec);
  for (const auto& b : blocks) out.sizes.push_back(b.size());
  std::sort(out.sizes.begin(), out.sizes.end());
  const auto idx = block_index(blocks, spec.size());
  const int ia = idx[static_cast<std::size_t>(k.alpha)];
  if (ia == idx[static_cast<std::size_t>(k.beta)]) out.ab_block_size = blocks[static_cast<std::size_t>(ia)].size();
  if (spec.min_ratio() == spec.max_ratio()) out.uniform_ratio = spec.min_ratio();
  return out;
}

enum class Level { LIPSCHITZ, BIHOLDER_HOMEOMORPHIC, INCONCLUSIVE };

inline std::string_view to_string(Level l) {
  switch (l) {
    case Level::LIPSCHITZ: return "LIPSCHITZ";
    case Level::BIHOLDER_HOMEOMORPHIC: return "BIHOLDER_HOMEOMORPHIC";
    default: return "INCONCLUSIVE";
  }
}

struct Verdict {
  Level level = Level::INCONCLUSIVE;
  std::optional<std::vector<Symbol>> witness;  // witness[e] = image of E-symbol e; slot 0 unused
  std::string reasons;
};

inline void require_family(const GasketSpec& spec, const char* which) {
  const Report valid = validate_spec(spec);
  if (!valid.ok()) throw std::invalid_argument(std::string(which) + ": " + valid.findings.front().detail);
  if (!family_check(spec).in_F_T_ab) throw OutOfScopeError(std::string(which) + ": outside F_T_ab");
}

/// Symbol bijection: the j-th element of each block of E goes to
/// the j-th element of its partner block in F. The αβ-blocks are partners;
/// the remaining blocks are paired in (size, smallest member) order.
inline std::vector<Symbol> isometry_symbol_map(const GasketSpec& e, const GasketSpec& f) {
  auto ordered = [](const GasketSpec& spec) {
    const CornerAssign k = corner_symbols(spec);
    auto blocks = horizontal_blocks(spec);
    auto ab = std::find_if(blocks.begin(), blocks.end(), [&](const Word& b) {
      return std::find(b.begin(), b.end(), k.alpha) != b.end() && std::find(b.begin(), b.end(), k.beta) != b.end();
    });
    if (ab == blocks.end()) throw OutOfScopeError("bottom corners lie in different horizontal blocks");
    Word head = *ab;
    blocks.erase(ab);
    std::sort(blocks.begin(), blocks.end(), [](const Word& a, const Word& b) {
      const Symbol ma = *std::min_element(a.begin(), a.end());
      const Symbol mb = *std::min_element(b.begin(), b.end());
      return std::make_pair(a.size(), ma) < std::make_pair(b.size(), mb);
    });
    blocks.insert(blocks.begin(), head);
    return blocks;
  };
  const auto be = ordered(e);
  const auto bf = ordered(f);
  if (be.size() != bf.size()) throw std::invalid_argument("isometry: block counts differ");
  std::vector<Symbol> h(static_cast<std::size_t>(e.size()) + 1, 0);
  for (std::size_t b = 0; b < be.size(); ++b) {
    if (be[b].size() != bf[b].size()) throw std::invalid_argument("isometry: block sizes differ");
    for (std::size_t j = 0; j < be[b].size(); ++j) h[static_cast<std::size_t>(be[b][j])] = bf[b][j];
  }
  return h;
}

inline Verdict classify_pair(const GasketSpec& e, const GasketSpec& f) {
  require_family(e, "first gasket");
  require_family(f, "second gasket");
  const BlockProfile pe = block_profile(e);
  const BlockProfile pf = block_profile(f);
  Verdict v;
  if (pe.sizes != pf.sizes) {
    v.reasons = "horizontal block sizes differ";
    return v;
  }
  if (pe.ab_block_size != pf.ab_block_size) {
    v.reasons = "bottom blocks differ in size";
    return v;
  }
  v.witness = isometry_symbol_map(e, f);
  if (pe.uniform_ratio && pf.uniform_ratio && *pe.uniform_ratio == *pf.uniform_ratio) {
    v.level = Level::LIPSCHITZ;
    v.reasons = "equal block profiles and equal uniform ratio " + pe.uniform_ratio->get_str();
  } else {
    v.level = Level::BIHOLDER_HOMEOMORPHIC;
    v.reasons = "equal block profiles";
  }
  return v;
}

/// T_{M_E}(x,y) = T_{M_F}(h(x),h(y)) over {ω t^∞ : |ω| <= depth}.
inline Report isometry_audit(const TriangleAutomaton& me, const TriangleAutomaton& mf, const std::vector<Symbol>& h,
                             std::size_t depth) {
  Report rep("isometry");
  const auto xs = enumerate_eventually_constant(me.alphabet_size(), depth);
  std::vector<ECSeq> hx;
  hx.reserve(xs.size());
  for (const auto& x : xs) hx.push_back(relabel(x, h));
  std::vector<Report> parts(kDefaultChunks);
  for_each_chunk(xs.size(), kDefaultChunks, [&](std::size_t c, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      for (std::size_t j = i + 1; j < xs.size(); ++j) {
        ++parts[c].checked;
        const std::size_t t = surviving_time(me, xs[i], xs[j]);
        const std::size_t u = surviving_time(mf, hx[i], hx[j]);
        if (t != u) {
          parts[c].fail("isometry", "x=" + format(xs[i]) + " y=" + format(xs[j]) + ": surviving times differ");
        }
      }
    }
  });
  for (auto& p : parts) rep.absorb(p);
  return rep;
}

struct HolderParams {
  double s = 1.0;
  double xi = 0.5;
  double C = 2.0;
  double Cprime = 0.0;
  SeparationConstants constants;
};

inline HolderParams holder_params(const GasketSpec& spec, std::size_t refine_depth = 2) {
  HolderParams hp;
  const double rmin = spec.min_ratio().get_d();
  const double rmax = spec.max_ratio().get_d();
  hp.s = std::sqrt(std::log(rmax) / std::log(rmin));
  hp.xi = std::pow(rmin, hp.s);
  hp.constants = separation_constants(spec, refine_depth);
  hp.Cprime = std::sqrt(hp.constants.Cprime_sq_lb.get_d());
  hp.C = std::max(2.0, 1.0 / (rmin * hp.Cprime));
  return hp;
}

namespace detail {

/// Coding-map images with a shared denominator, so squared distances are
/// integer arithmetic. Falls back to exact rationals when numbers get large.
struct ScaledPoints {
  std::vector<ObliquePoint> exact;
  std::vector<std::int64_t> p, q;
  double denom = 1.0;
  bool integral = false;

  Frac sq_dist_exact(std::size_t i, std::size_t j) const { return sq_dist(exact[i], exact[j]); }

  // (2Δp + Δq)² + 3Δq², i.e. 4 L² times the squared distance
  __int128 scaled_sq(std::size_t i, std::size_t j) const {
    const __int128 dp = p[i] - p[j];
    const __int128 dq = q[i] - q[j];
    const __int128 a = 2 * dp + dq;
    return a * a + 3 * dq * dq;
  }
};

inline ScaledPoints scale_points(std::vector<ObliquePoint> pts) {
  ScaledPoints out;
  mpz_class l = 1;
  for (const auto& z : pts) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), z.p.get_den_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), z.q.get_den_mpz_t());
  }
  const mpz_class limit = mpz_class(1) << 40;
  out.integral = l <= limit;
  out.denom = l.get_d();
  if (out.integral) {
    for (const auto& z : pts) {
      const mpz_class a = z.p.get_num() * (l / z.p.get_den());
      const mpz_class b = z.q.get_num() * (l / z.q.get_den());
      out.p.push_back(a.get_si());
      out.q.push_back(b.get_si());
    }
  }
  out.exact = std::move(pts);
  return out;
}

}  // namespace detail

/// Checks C⁻¹ρ^{1/s} <= ‖π(x) − π(y)‖ <= C ρ^s over pairs from
/// {ω t^∞ : |ω| <= depth}, all pairs when there are at most `sample_count`
/// of them (or sample_count = 0), otherwise a fixed-seed sample.
inline Report biholder_audit(const GasketSpec& spec, std::size_t depth, std::size_t sample_count,
                             std::size_t refine_depth = 2) {
  Report rep("biholder");
  const TriangleAutomaton m = topology_automaton(spec);
  const HolderParams hp = holder_params(spec, refine_depth);
  const auto xs = enumerate_eventually_constant(spec.size(), depth);
  std::vector<ObliquePoint> pts;
  pts.reserve(xs.size());
  for (const auto& x : xs) pts.push_back(pi_point(spec, x));
  const detail::ScaledPoints sp = detail::scale_points(std::move(pts));
  constexpr double kTol = 1e-9;

  const std::size_t count = xs.size();
  const std::size_t pairs = count * (count - 1) / 2;
  const bool exhaustive = sample_count == 0 || pairs <= sample_count;
  std::vector<std::pair<std::size_t, std::size_t>> sample;
  if (!exhaustive) {
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_int_distribution<std::size_t> pick(0, count - 1);
    while (sample.size() < sample_count) {
      std::size_t i = pick(rng), j = pick(rng);
      if (i == j) continue;
      if (i > j) std::swap(i, j);
      sample.emplace_back(i, j);
    }
  }

  // (ρ^s, ρ^{1/s}) for ρ = ξ^t
  std::vector<std::pair<double, double>> powers;
  for (std::size_t t = 0; t < 256; ++t) {
    const double rho = std::pow(hp.xi, static_cast<double>(t));
    powers.emplace_back(std::pow(rho, hp.s), std::pow(rho, 1.0 / hp.s));
  }
  struct Tally {
    double worst_upper = 0.0;  // max d / ρ^s
    double worst_lower = 0.0;  // max ρ^{1/s} / d
  };
  std::vector<Tally> tallies(kDefaultChunks);
  std::vector<Report> parts(kDefaultChunks);
  auto check_pair = [&](std::size_t c, std::size_t i, std::size_t j) {
    Report& part = parts[c];
    ++part.checked;
    const std::size_t t = surviving_time(m, xs[i], xs[j]);
    bool zero;
    double d;
    if (sp.integral) {
      const __int128 s4 = sp.scaled_sq(i, j);
      zero = s4 == 0;
      d = std::sqrt(static_cast<double>(s4) / 4.0) / sp.denom;
    } else {
      const Frac e = sp.sq_dist_exact(i, j);
      zero = e == 0;
      d = std::sqrt(e.get_d());
    }
    auto tag = [&] { return "x=" + format(xs[i]) + " y=" + format(xs[j]); };
    if (t == kInfinity || zero) {
      if (!(t == kInfinity && zero)) part.fail("identification", tag() + ": rho = 0 and distance = 0 disagree");
      return;
    }
    const double up = t < powers.size() ? powers[t].first : std::pow(hp.xi, static_cast<double>(t) * hp.s);
    const double down = t < powers.size() ? powers[t].second : std::pow(hp.xi, static_cast<double>(t) / hp.s);
    if (d > hp.C * up * (1 + kTol)) part.fail("upper", tag() + ": distance above C rho^s");
    if (d < down / hp.C * (1 - kTol)) part.fail("lower", tag() + ": distance below rho^(1/s) / C");
    Tally& tl = tallies[c];
    tl.worst_upper = std::max(tl.worst_upper, d / up);
    tl.worst_lower = std::max(tl.worst_lower, down / d);
  };
  if (exhaustive) {
    for_each_chunk(count, kDefaultChunks, [&](std::size_t c, std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) check_pair(c, i, j);
      }
    });
  } else {
    for_each_chunk(sample.size(), kDefaultChunks, [&](std::size_t c, std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) check_pair(c, sample[k].first, sample[k].second);
    });
  }
  Tally total;
  for (std::size_t c = 0; c < parts.size(); ++c) {
    rep.absorb(parts[c]);
    total.worst_upper = std::max(total.worst_upper, tallies[c].worst_upper);
    total.worst_lower = std::max(total.worst_lower, tallies[c].worst_lower);
  }
  rep.metrics["s"] = hp.s;
  rep.metrics["xi"] = hp.xi;
  rep.metrics["C"] = hp.C;
  rep.metrics["Cprime"] = hp.Cprime;
  rep.metrics["tightest_C"] = std::max(total.worst_upper, total.worst_lower);
  rep.metrics["pairs"] = static_cast<double>(exhaustive ? pairs : sample.size());
  rep.notes["mode"] = exhaustive ? "exhaustive" : "sampled";
  rep.notes["Cprime_sq_lb"] = hp.constants.Cprime_sq_lb.get_str();
  return rep;
}

/// Certificate that two gaskets have bi-Hölder equivalent symbolic spaces:
/// E's simplification chain, the block isometry between the final automata,
/// and F's chain read backwards. Each step distorts ρ by at most ξ^{±5}.
struct ChainReport {
  SimplificationChain e_chain;
  std::vector<Report> e_audits;
  std::vector<Symbol> isometry;
  Report isometry_report;
  SimplificationChain f_chain;  // stored forwards; the certificate reads it in reverse
  std::vector<Report> f_audits;
  std::size_t exponent = 0;

  bool ok() const {
    auto all = [](const std::vector<Report>& v) {
      return std::all_of(v.begin(), v.end(), [](const Report& r) { return r.ok(); });
    };
    return all(e_audits) && all(f_audits) && isometry_report.ok();
  }
};

inline ChainReport equivalence_chain(const GasketSpec& e, const GasketSpec& f, std::size_t audit_depth = 3) {
  const Verdict v = classify_pair(e, f);
  if (v.level == Level::INCONCLUSIVE) throw std::invalid_argument("equivalence_chain: verdict is inconclusive");
  ChainReport out;
  auto build = [&](const GasketSpec& spec, SimplificationChain& chain, std::vector<Report>& audits) {
    chain = final_simplification(topology_automaton(spec));
    for (std::size_t i = 0; i < chain.steps.size(); ++i) {
      Report r = step_invariant_audit(chain.automata[i], chain.automata[i + 1], chain.steps[i]);
      Report d = distortion_audit(chain.automata[i], chain.automata[i + 1], chain.steps[i], audit_depth);
      r.absorb(d);
      r.metrics = d.metrics;
      r.notes = d.notes;
      r.name = "step";
      audits.push_back(std::move(r));
    }
  };
  build(e, out.e_chain, out.e_audits);
  build(f, out.f_chain, out.f_audits);
  out.isometry = *v.witness;
  out.isometry_report = isometry_audit(out.e_chain.final_automaton(), out.f_chain.final_automaton(), out.isometry,
                                       std::min<std::size_t>(audit_depth, 3));
  out.exponent = 5 * (out.e_chain.steps.size() + out.f_chain.steps.size());
  return out;
}

}  // namespace gasketlab
