#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gasketlab/automaton.hpp"
#include "gasketlab/classify.hpp"
#include "gasketlab/geometry.hpp"
#include "gasketlab/report.hpp"
#include "gasketlab/simplify.hpp"
#include "gasketlab/transducer.hpp"

namespace gasketlab {

using Json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

/// Parses JSON text; syntax errors carry the 1-based line and column.
inline Json parse_json(const std::string& text, const std::string& source = "<input>") {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

namespace detail {

inline Frac frac_from_json(const Json& v, const std::string& where) {
  try {
    if (v.is_string()) return parse_frac(v.get<std::string>());
    if (v.is_number_integer()) return Frac(v.get<long>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": expected a rational such as \"1/4\"");
}

inline Json edges_to_json(const EdgeSet& set) {
  Json arr = Json::array();
  for (const auto& [i, j] : set) arr.push_back(Json::array({i, j}));
  return arr;
}

inline EdgeSet edges_from_json(const Json& v, const std::string& key) {
  if (!v.is_array()) throw ParseError("automaton: '" + key + "' must be an array of pairs");
  EdgeSet out;
  for (const auto& e : v) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw ParseError("automaton: '" + key + "' entries must be [i, j] integer pairs");
    }
    out.insert({e[0].get<int>(), e[1].get<int>()});
  }
  return out;
}

}  // namespace detail

inline GasketSpec spec_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("triangles") || !doc["triangles"].is_array()) {
    throw ParseError("gasket spec: expected an object with a 'triangles' array");
  }
  GasketSpec spec;
  std::size_t idx = 0;
  for (const auto& t : doc["triangles"]) {
    ++idx;
    const std::string where = "triangle " + std::to_string(idx);
    if (!t.is_object() || !t.contains("origin") || !t.contains("size") || !t["origin"].is_array() ||
        t["origin"].size() != 2) {
      throw ParseError(where + ": expected {\"origin\": [p, q], \"size\": r}");
    }
    spec.triangles.push_back({{detail::frac_from_json(t["origin"][0], where), detail::frac_from_json(t["origin"][1], where)},
                              detail::frac_from_json(t["size"], where)});
  }
  return spec;
}

inline GasketSpec load_spec(const std::string& path) { return spec_from_json(parse_json(read_file(path), path)); }

inline Json spec_to_json(const GasketSpec& spec) {
  Json arr = Json::array();
  for (const auto& t : spec.triangles) {
    arr.push_back({{"origin", {t.origin.p.get_str(), t.origin.q.get_str()}}, {"size", t.size.get_str()}});
  }
  return {{"triangles", arr}};
}

inline Json automaton_to_json(const TriangleAutomaton& m) {
  const auto& k = m.corners();
  return {{"n", m.alphabet_size()},
          {"alpha", k.alpha},
          {"beta", k.beta},
          {"gamma", k.gamma},
          {"p_ab", detail::edges_to_json(m.p_ab())},
          {"p_ag", detail::edges_to_json(m.p_ag())},
          {"p_bg", detail::edges_to_json(m.p_bg())}};
}

inline TriangleAutomaton automaton_from_json(const Json& doc) {
  for (const char* key : {"n", "alpha", "beta", "gamma"}) {
    if (!doc.contains(key) || !doc[key].is_number_integer()) {
      throw ParseError(std::string("automaton: missing integer '") + key + "'");
    }
  }
  for (const char* key : {"p_ab", "p_ag", "p_bg"}) {
    if (!doc.contains(key)) throw ParseError(std::string("automaton: missing '") + key + "'");
  }
  CornerAssign k{doc["alpha"].get<int>(), doc["beta"].get<int>(), doc["gamma"].get<int>()};
  try {
    return TriangleAutomaton(doc["n"].get<int>(), k, detail::edges_from_json(doc["p_ab"], "p_ab"),
                             detail::edges_from_json(doc["p_ag"], "p_ag"), detail::edges_from_json(doc["p_bg"], "p_bg"));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

inline Json report_to_json(const Report& r) {
  Json findings = Json::array();
  for (const auto& f : r.findings) findings.push_back({{"rule", f.rule}, {"detail", f.detail}});
  Json out{{"name", r.name}, {"pass", r.ok()}, {"checked", r.checked}, {"violations", r.violations},
           {"findings", findings}};
  if (!r.metrics.empty()) {
    Json m = Json::object();
    for (const auto& [k, v] : r.metrics) m[k] = v;
    out["metrics"] = m;
  }
  if (!r.notes.empty()) {
    Json n = Json::object();
    for (const auto& [k, v] : r.notes) n[k] = v;
    out["notes"] = n;
  }
  return out;
}

inline Json corners_to_json(const CornerAssign& k) { return {{"alpha", k.alpha}, {"beta", k.beta}, {"gamma", k.gamma}}; }

inline Json step_to_json(const SimplStep& s) {
  Json out{{"kind", std::string(to_string(s.kind))}, {"side", std::string(to_string(s.side))}, {"tau", s.tau},
           {"kappa", s.kappa}};
  out["lambda"] = s.lambda ? Json(*s.lambda) : Json(nullptr);
  return out;
}

inline Json chain_to_json(const SimplificationChain& c, const std::vector<Report>* audits = nullptr) {
  Json automata = Json::array();
  for (const auto& m : c.automata) automata.push_back(automaton_to_json(m));
  Json steps = Json::array();
  for (const auto& s : c.steps) steps.push_back(step_to_json(s));
  Json out{{"automata", automata}, {"steps", steps}};
  if (audits) {
    Json a = Json::array();
    for (const auto& r : *audits) a.push_back(report_to_json(r));
    out["audits"] = a;
  }
  return out;
}

inline Json profile_to_json(const BlockProfile& p) {
  Json out{{"sizes", p.sizes}};
  out["ab_block_size"] = p.ab_block_size ? Json(*p.ab_block_size) : Json(nullptr);
  out["uniform_ratio"] = p.uniform_ratio ? Json(p.uniform_ratio->get_str()) : Json(nullptr);
  return out;
}

inline Json symbol_map_to_json(const std::vector<Symbol>& h) {
  Json out = Json::object();
  for (std::size_t s = 1; s < h.size(); ++s) out[std::to_string(s)] = h[s];
  return out;
}

inline Json verdict_to_json(const Verdict& v) {
  Json out{{"level", std::string(to_string(v.level))}, {"reasons", v.reasons}};
  out["witness"] = v.witness ? symbol_map_to_json(*v.witness) : Json(nullptr);
  return out;
}

inline Json chain_report_to_json(const ChainReport& c) {
  // F's chain is reported from M_F* back to M_F.
  SimplificationChain f_rev;
  f_rev.automata.assign(c.f_chain.automata.rbegin(), c.f_chain.automata.rend());
  f_rev.steps.assign(c.f_chain.steps.rbegin(), c.f_chain.steps.rend());
  std::vector<Report> f_audits(c.f_audits.rbegin(), c.f_audits.rend());
  return {{"pass", c.ok()},
          {"e_chain", chain_to_json(c.e_chain, &c.e_audits)},
          {"isometry", symbol_map_to_json(c.isometry)},
          {"isometry_audit", report_to_json(c.isometry_report)},
          {"f_chain_reversed", chain_to_json(f_rev, &f_audits)},
          {"xi_exponent", c.exponent}};
}

inline Json segment_to_json(const Segment& s) {
  return {{"class", std::string(to_string(s.cls))}, {"k", s.k}, {"word", format(s.word)}};
}

/// "tau,kappa,alpha,gamma".
inline DecompParams parse_params(const std::string& text, bool mirror) {
  std::vector<int> v;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError("params: bad symbol '" + tok + "'");
    }
  }
  if (v.size() != 4) throw ParseError("params: expected tau,kappa,alpha,gamma");
  return {v[0], v[1], v[2], v[3], mirror};
}

}  // namespace gasketlab
