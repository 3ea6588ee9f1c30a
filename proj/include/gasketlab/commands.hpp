#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gasketlab/automaton.hpp"
#include "gasketlab/classify.hpp"
#include "gasketlab/geometry.hpp"
#include "gasketlab/io.hpp"
#include "gasketlab/render.hpp"
#include "gasketlab/separation.hpp"
#include "gasketlab/simplify.hpp"
#include "gasketlab/transducer.hpp"

namespace gasketlab {

/// Exit codes of the command line tool.
enum ExitCode : int { kOk = 0, kFailed = 1, kBadInput = 2, kOutOfScope = 3 };

struct CommandResult {
  int code = kOk;
  std::string out;
  std::string err;
};

struct AuditOptions {
  std::string suite = "all";
  std::size_t depth = 4;
  std::size_t refine = 2;
  std::size_t samples = 10000;
  bool force = false;
};

namespace detail {

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Runs `body`, mapping the library's exceptions onto exit codes.
inline CommandResult guarded(const std::function<CommandResult()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    return {kBadInput, "", std::string("error: ") + e.what() + "\n"};
  } catch (const OutOfScopeError& e) {
    return {kOutOfScope, "", std::string("out of scope: ") + e.what() + "\n"};
  } catch (const std::invalid_argument& e) {
    return {kBadInput, "", std::string("error: ") + e.what() + "\n"};
  } catch (const std::exception& e) {
    return {kFailed, "", std::string("error: ") + e.what() + "\n"};
  }
}

/// Rough number of elementary evaluations, used against the enumeration caps.
inline double power(double base, std::size_t e) { return std::pow(base, static_cast<double>(e)); }

inline void require_cap(bool force, double work, double cap, const std::string& what) {
  if (!force && work > cap) {
    throw std::invalid_argument(what + " would enumerate about " + std::to_string(static_cast<long long>(work)) +
                                " items (cap " + std::to_string(static_cast<long long>(cap)) +
                                "); lower --depth or pass --force");
  }
}

inline CommandResult invalid_spec(const Report& rep) {
  return {kFailed, dump({{"valid", false}, {"report", report_to_json(rep)}}),
          "invalid gasket: " + (rep.findings.empty() ? std::string("?") : rep.findings.front().detail) + "\n"};
}

/// A spec document has "triangles", an automaton document has "n".
inline TriangleAutomaton load_automaton_or_spec(const std::string& path, std::optional<Report>& spec_report) {
  const Json doc = parse_json(read_file(path), path);
  if (doc.is_object() && doc.contains("triangles")) {
    const GasketSpec spec = spec_from_json(doc);
    Report rep = validate_spec(spec);
    const bool ok = rep.ok();
    spec_report = std::move(rep);
    if (!ok) return TriangleAutomaton(1, {}, {}, {}, {});
    return topology_automaton(spec);
  }
  return automaton_from_json(doc);
}

}  // namespace detail

inline CommandResult cmd_validate(const std::string& path) {
  return detail::guarded([&] {
    const GasketSpec spec = load_spec(path);
    const Report rep = validate_spec(spec);
    Json out{{"valid", rep.ok()}, {"n", spec.size()}};
    if (rep.ok()) {
      const CornerAssign k = corner_symbols(spec);
      out["corners"] = corners_to_json(k);
      if (k.present(Role::A) && k.present(Role::B)) {
        const FamilyReport f = family_check(spec);
        out["family"] = {{"top_isolated", f.top_isolated},
                         {"gamma_in_K", f.gamma_in_K},
                         {"alpha_beta_same_block", f.alpha_beta_same_block},
                         {"in_F_T_ab", f.in_F_T_ab}};
      } else {
        out["family"] = nullptr;
      }
    }
    out["report"] = report_to_json(rep);
    out["contact_rule"] = "touching triangles must meet at a vertex of both";
    return CommandResult{rep.ok() ? kOk : kFailed, detail::dump(out),
                         rep.ok() ? "" : "invalid gasket: " + rep.findings.front().detail + "\n"};
  });
}

inline CommandResult cmd_automaton(const std::string& path) {
  return detail::guarded([&] {
    const GasketSpec spec = load_spec(path);
    const Report rep = validate_spec(spec);
    if (!rep.ok()) return detail::invalid_spec(rep);
    const TriangleAutomaton m = topology_automaton(spec);
    const Report gasket = validate_triangle_gasket(m);
    return CommandResult{gasket.ok() ? kOk : kFailed, detail::dump(automaton_to_json(m)),
                         gasket.ok() ? "" : "topology automaton fails the gasket axioms\n"};
  });
}

inline CommandResult cmd_blocks(const std::string& path) {
  return detail::guarded([&] {
    const GasketSpec spec = load_spec(path);
    const Report rep = validate_spec(spec);
    if (!rep.ok()) return detail::invalid_spec(rep);
    Json blocks = Json::array();
    for (const auto& b : horizontal_blocks(spec)) blocks.push_back(b);
    Json out{{"blocks", blocks}, {"profile", profile_to_json(block_profile(spec))}};
    return CommandResult{kOk, detail::dump(out), ""};
  });
}

inline CommandResult cmd_simplify(const std::string& path, bool verify) {
  return detail::guarded([&] {
    std::optional<Report> spec_report;
    const TriangleAutomaton m = detail::load_automaton_or_spec(path, spec_report);
    if (spec_report && !spec_report->ok()) return detail::invalid_spec(*spec_report);
    const Report gasket = validate_triangle_gasket(m);
    if (!gasket.ok()) {
      return CommandResult{kFailed, detail::dump({{"report", report_to_json(gasket)}}),
                           "not a gasket automaton\n"};
    }
    const bool final_already = m.p_ag().empty() && m.p_bg().empty();
    if (!final_already && !is_gamma_isolated(m).ok()) {
      throw OutOfScopeError("automaton is not gamma-isolated; outside F_T_ab");
    }
    const SimplificationChain chain = final_simplification(m);
    std::vector<Report> audits;
    bool pass = true;
    if (verify) {
      for (std::size_t i = 0; i < chain.steps.size(); ++i) {
        audits.push_back(step_invariant_audit(chain.automata[i], chain.automata[i + 1], chain.steps[i]));
        pass = pass && audits.back().ok();
      }
    }
    return CommandResult{pass ? kOk : kFailed, detail::dump(chain_to_json(chain, verify ? &audits : nullptr)),
                         pass ? "" : "step audit failed\n"};
  });
}

struct GmapOptions {
  std::string params;
  std::string input;
  bool mirror = false;
  bool inverse = false;
  bool decompose = false;
  int n = 0;  // alphabet size; 0 = infer from the symbols seen
};

inline CommandResult cmd_gmap(const GmapOptions& opt) {
  return detail::guarded([&] {
    const DecompParams p = parse_params(opt.params, opt.mirror);
    ECSeq x;
    try {
      x = parse_ecseq(opt.input, 1 << 20);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
    int n = opt.n;
    if (n == 0) {
      n = std::max({p.tau, p.kappa, p.alpha, p.gamma, x.tail(), 4});
      for (Symbol s : x.prefix()) n = std::max(n, s);
    }
    for (Symbol s : x.prefix()) {
      if (s > n) throw std::invalid_argument("input letter " + std::to_string(s) + " outside the alphabet");
    }
    std::string err;
    if (auto warn = check_params(p, n)) err = "warning: " + *warn + "\n";
    const ECSeq y = opt.inverse ? h_map(x, p) : g_map(x, p);
    std::string out = format(y) + "\n";
    if (opt.decompose) {
      const Decomposition d = opt.inverse ? mp_decompose(x, p) : m_decompose(x, p);
      for (const auto& s : d.segments) {
        const Segment img = opt.inverse ? g0_invert(s, p) : g0_apply(s, p);
        out += std::string(to_string(s.cls)) + " " + format(s.word) + " -> " + std::string(to_string(img.cls)) + " " +
               format(img.word) + "\n";
      }
      out += "tail " + std::to_string(d.tail) + "\n";
    }
    return CommandResult{kOk, out, err};
  });
}

inline CommandResult cmd_classify(const std::string& path_e, const std::string& path_f,
                                  const std::string& certificate_path, std::size_t audit_depth) {
  return detail::guarded([&] {
    const GasketSpec e = load_spec(path_e);
    const GasketSpec f = load_spec(path_f);
    for (const GasketSpec* s : {&e, &f}) {
      const Report rep = validate_spec(*s);
      if (!rep.ok()) return detail::invalid_spec(rep);
    }
    const Verdict v = classify_pair(e, f);
    Json out = verdict_to_json(v);
    out["profiles"] = Json::array({profile_to_json(block_profile(e)), profile_to_json(block_profile(f))});
    int code = kOk;
    if (!certificate_path.empty()) {
      if (v.level == Level::INCONCLUSIVE) {
        return CommandResult{kOk, detail::dump(out), "no certificate for an inconclusive verdict\n"};
      }
      const ChainReport chain = equivalence_chain(e, f, audit_depth);
      write_file(certificate_path, detail::dump(chain_report_to_json(chain)));
      out["certificate"] = {{"path", certificate_path}, {"pass", chain.ok()}};
      if (!chain.ok()) code = kFailed;
    }
    return CommandResult{code, detail::dump(out), ""};
  });
}

inline CommandResult cmd_audit(const std::string& path, const AuditOptions& opt) {
  return detail::guarded([&] {
    const GasketSpec spec = load_spec(path);
    const Report rep = validate_spec(spec);
    if (!rep.ok()) return detail::invalid_spec(rep);
    static const std::vector<std::string> kSuites{"metric", "geometry", "distortion", "biholder", "component"};
    const bool all = opt.suite == "all";
    if (!all && std::find(kSuites.begin(), kSuites.end(), opt.suite) == kSuites.end()) {
      throw std::invalid_argument("unknown suite '" + opt.suite + "'");
    }
    const double n = spec.size();
    const TriangleAutomaton m = topology_automaton(spec);
    Json suites = Json::object();
    bool pass = true;
    auto record = [&](const std::string& name, const Report& r) {
      suites[name] = report_to_json(r);
      pass = pass && r.ok();
    };
    auto skip = [&](const std::string& name, const std::string& why) {
      suites[name] = {{"name", name}, {"skipped", why}};
    };
    auto want = [&](const std::string& s) { return all || opt.suite == s; };

    if (want("metric")) {
      const double seqs = n * detail::power(n, opt.depth);
      detail::require_cap(opt.force, seqs * seqs, 2.5e7, "metric audit");
      record("metric", pseudo_metric_audit(m, opt.depth));
    }
    if (want("geometry")) {
      const double words = detail::power(n, opt.depth);
      detail::require_cap(opt.force, words * words, 2e6, "geometry audit");
      if (corner_symbols(spec).present(Role::A) && corner_symbols(spec).present(Role::B)) {
        record("geometry", geometry_vs_automaton_audit(spec, opt.depth, opt.refine));
      } else if (all) {
        skip("geometry", "bottom corners not both in K");
      } else {
        throw OutOfScopeError("geometry audit needs both bottom corners in K");
      }
    }
    if (want("distortion")) {
      const bool final_already = m.p_ag().empty() && m.p_bg().empty();
      if (!final_already && !is_gamma_isolated(m).ok()) {
        if (!all) throw OutOfScopeError("distortion audit needs a gamma-isolated automaton");
        skip("distortion", "automaton is not gamma-isolated");
      } else {
        const double seqs = detail::power(n, opt.depth);
        detail::require_cap(opt.force, seqs * seqs / 2, 1e8, "distortion audit");
        const SimplificationChain chain = final_simplification(m);
        Json steps = Json::array();
        Report total("distortion");
        double max_diff = 0;
        for (std::size_t i = 0; i < chain.steps.size(); ++i) {
          const Report r = distortion_audit(chain.automata[i], chain.automata[i + 1], chain.steps[i], opt.depth);
          Json sj = report_to_json(r);
          sj["step"] = step_to_json(chain.steps[i]);
          steps.push_back(sj);
          total.absorb(r);
          max_diff = std::max(max_diff, r.metrics.at("max_abs_diff"));
        }
        total.metrics["steps"] = static_cast<double>(chain.steps.size());
        total.metrics["max_abs_diff"] = max_diff;
        Json dj = report_to_json(total);
        dj["per_step"] = steps;
        suites["distortion"] = dj;
        pass = pass && total.ok();
      }
    }
    if (want("biholder")) {
      const double seqs = n * detail::power(n, opt.depth);
      const double pairs = opt.samples == 0 ? seqs * seqs / 2 : std::min(seqs * seqs / 2, double(opt.samples));
      detail::require_cap(opt.force, pairs, 1e8, "biholder audit");
      if (corner_symbols(spec).present(Role::A) && corner_symbols(spec).present(Role::B)) {
        record("biholder", biholder_audit(spec, opt.depth, opt.samples, opt.refine));
      } else if (all) {
        skip("biholder", "bottom corners not both in K");
      } else {
        throw OutOfScopeError("biholder audit needs both bottom corners in K");
      }
    }
    if (want("component")) {
      detail::require_cap(opt.force, detail::power(n, opt.depth), 1e5, "component audit");
      try {
        record("component", component_audit(spec, opt.depth));
      } catch (const OutOfScopeError& e) {
        if (!all) throw;
        skip("component", e.what());
      }
    }
    Json out{{"pass", pass}, {"depth", opt.depth}, {"suites", suites}};
    return CommandResult{pass ? kOk : kFailed, detail::dump(out), pass ? "" : "audit failed\n"};
  });
}

struct RenderCommandOptions {
  std::size_t depth = 3;
  bool color_blocks = false;
  std::string out_path;
  bool force = false;
};

inline CommandResult cmd_render(const std::string& path, const RenderCommandOptions& opt) {
  return detail::guarded([&] {
    const GasketSpec spec = load_spec(path);
    const Report rep = validate_spec(spec);
    if (!rep.ok()) return detail::invalid_spec(rep);
    detail::require_cap(opt.force, detail::power(spec.size(), opt.depth), 2e5, "render");
    RenderOptions ro;
    ro.color_blocks = opt.color_blocks;
    const std::string svg = render_svg(spec, opt.depth, ro);
    if (opt.out_path.empty()) return CommandResult{kOk, svg, ""};
    write_file(opt.out_path, svg);
    return CommandResult{kOk, "", ""};
  });
}

}  // namespace gasketlab
