#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "testing/fixtures.hpp"

using namespace gasketlab;
using fixtures::spec_path;

namespace {

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("gasketlab_test_" + name);
  write_file(path.string(), text);
  return path.string();
}

}  // namespace

TEST(CliValidate, Sierpinski) {
  const auto r = cmd_validate(spec_path("sier.json"));
  EXPECT_EQ(r.code, kOk);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["corners"]["alpha"], 1);
  EXPECT_EQ(j["corners"]["beta"], 2);
  EXPECT_EQ(j["corners"]["gamma"], 3);
}

TEST(CliValidate, MalformedAndOverlap) {
  const auto bad = cmd_validate(spec_path("malformed.json"));
  EXPECT_EQ(bad.code, kBadInput);
  EXPECT_NE(bad.err.find(":4:25:"), std::string::npos) << bad.err;

  const auto ov = cmd_validate(spec_path("overlap.json"));
  EXPECT_EQ(ov.code, kFailed);
  EXPECT_FALSE(Json::parse(ov.out)["report"]["findings"].empty());

  EXPECT_EQ(cmd_validate("/nonexistent/spec.json").code, kBadInput);
  const auto bad_frac = temp_file("badfrac.json", R"({"triangles":[{"origin":["0","x"],"size":"1/2"}]})");
  EXPECT_EQ(cmd_validate(bad_frac).code, kBadInput);
  const auto no_tri = temp_file("notri.json", R"({"maps":[]})");
  EXPECT_EQ(cmd_validate(no_tri).code, kBadInput);
}

TEST(CliAutomaton, H6SortedEdges) {
  const auto r = cmd_automaton(spec_path("h6.json"));
  ASSERT_EQ(r.code, kOk);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["n"], 6);
  EXPECT_EQ(j["p_ab"], Json::parse("[[1,2],[2,3],[3,4]]"));
  EXPECT_EQ(j["p_ag"], Json::parse("[[1,5]]"));
  EXPECT_EQ(j["p_bg"], Json::parse("[[2,5]]"));
  EXPECT_EQ(automaton_from_json(j), fixtures::h6_automaton());
}

TEST(CliAutomaton, JsonRoundTrip) {
  fixtures::Rng rng(2);
  for (int t = 0; t < 30; ++t) {
    const auto m = fixtures::random_gasket_automaton(rng, 5);
    EXPECT_EQ(automaton_from_json(Json::parse(automaton_to_json(m).dump())), m);
  }
  EXPECT_THROW(automaton_from_json(Json::parse(R"({"n":3})")), ParseError);
  EXPECT_THROW(automaton_from_json(Json::parse(R"({"n":3,"alpha":1,"beta":2,"gamma":3,"p_ab":[[1,1]],"p_ag":[],"p_bg":[]})")),
               ParseError);
}

TEST(CliBlocks, ExampleE) {
  const auto r = cmd_blocks(spec_path("example_e.json"));
  ASSERT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("\"ab_block_size\": 5"), std::string::npos) << r.out;
}

TEST(CliSimplify, H6Verify) {
  const auto r = cmd_simplify(spec_path("h6.json"), true);
  ASSERT_EQ(r.code, kOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["steps"].size(), 2u);
  EXPECT_EQ(j["automata"].size(), 3u);
  for (const auto& a : j["audits"]) EXPECT_TRUE(a["pass"].get<bool>());
}

TEST(CliSimplify, AcceptsAutomatonJson) {
  const auto path = temp_file("h6_automaton.json", automaton_to_json(fixtures::h6_automaton()).dump());
  const auto a = cmd_simplify(path, false);
  const auto b = cmd_simplify(spec_path("h6.json"), false);
  EXPECT_EQ(a.code, kOk);
  EXPECT_EQ(a.out, b.out);
}

TEST(CliSimplify, NotGammaIsolated) { EXPECT_EQ(cmd_simplify(spec_path("sier.json"), false).code, kOutOfScope); }

TEST(CliGmap, Examples) {
  GmapOptions o;
  o.params = "1,2,3,4";
  o.input = "1.4.4.(2)^inf";
  auto r = cmd_gmap(o);
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out, "2.2.4.(2)^inf\n");

  o.inverse = true;
  o.input = "2.2.4.(2)^inf";
  EXPECT_EQ(cmd_gmap(o).out, "1.4.4.(2)^inf\n");

  o.inverse = false;
  o.decompose = true;
  o.input = "1.4.4.4.2.2.4.(2)^inf";
  EXPECT_EQ(cmd_gmap(o).out, "2.3.2.4.1.4.4.(2)^inf\nTG_K 1.4.4.4 -> KAK_G 2.3.2.4\nKAK_G 2.2.4 -> TGG 1.4.4\ntail 2\n");

  o.params = "1,2";
  EXPECT_EQ(cmd_gmap(o).code, kBadInput);
  o.params = "1,2,3,4";
  o.input = "1.4";
  EXPECT_EQ(cmd_gmap(o).code, kBadInput);
}

TEST(CliClassify, Verdicts) {
  auto level = [](const CommandResult& r) { return Json::parse(r.out)["level"].get<std::string>(); };
  const auto a = cmd_classify(spec_path("h6.json"), spec_path("h6prime.json"), "", 3);
  EXPECT_EQ(a.code, kOk);
  EXPECT_EQ(level(a), "LIPSCHITZ");
  EXPECT_EQ(level(cmd_classify(spec_path("h6.json"), spec_path("g5.json"), "", 3)), "INCONCLUSIVE");
  const auto s = cmd_classify(spec_path("sier.json"), spec_path("g5.json"), "", 3);
  EXPECT_EQ(s.code, kOutOfScope);
  EXPECT_NE(s.err.find("outside F_T_ab"), std::string::npos);
}

TEST(CliClassify, Certificate) {
  const auto cert = (std::filesystem::temp_directory_path() / "gasketlab_test_cert.json").string();
  const auto r = cmd_classify(spec_path("h6.json"), spec_path("h6prime.json"), cert, 3);
  ASSERT_EQ(r.code, kOk) << r.err;
  const Json c = Json::parse(read_file(cert));
  EXPECT_TRUE(c["pass"].get<bool>());
  EXPECT_EQ(c["xi_exponent"], 20);
  EXPECT_EQ(c["e_chain"]["steps"].size(), 2u);
}

TEST(CliAudit, Suites) {
  AuditOptions o;
  o.suite = "metric";
  o.depth = 3;
  const auto m = cmd_audit(spec_path("sier.json"), o);
  EXPECT_EQ(m.code, kOk) << m.err;

  o.suite = "distortion";
  o.depth = 4;
  const auto d = cmd_audit(spec_path("h6.json"), o);
  EXPECT_EQ(d.code, kOk) << d.err;
  EXPECT_LE(Json::parse(d.out)["suites"]["distortion"]["metrics"]["max_abs_diff"].get<double>(), 5.0);

  o.suite = "all";
  o.depth = 2;
  EXPECT_EQ(cmd_audit(spec_path("overlap.json"), o).code, kFailed);
  const auto all = cmd_audit(spec_path("sier.json"), o);
  EXPECT_EQ(all.code, kOk) << all.err;
  EXPECT_TRUE(Json::parse(all.out)["suites"]["component"].contains("skipped"));

  o.suite = "bogus";
  EXPECT_EQ(cmd_audit(spec_path("sier.json"), o).code, kBadInput);

  o.suite = "metric";
  o.depth = 9;
  EXPECT_EQ(cmd_audit(spec_path("h6.json"), o).code, kBadInput);

  o.suite = "component";
  o.depth = 1;
  EXPECT_EQ(cmd_audit(spec_path("sier.json"), o).code, kOutOfScope);
}

TEST(CliRender, WritesFile) {
  const auto out = (std::filesystem::temp_directory_path() / "gasketlab_test.svg").string();
  RenderCommandOptions o;
  o.depth = 2;
  o.out_path = out;
  ASSERT_EQ(cmd_render(spec_path("g5.json"), o).code, kOk);
  EXPECT_EQ(read_file(out), render_svg(fixtures::g5(), 2));
}

TEST(Parallel, ResultsIndependentOfWorkers) {
  const auto m = fixtures::h6_automaton();
  set_worker_count(1);
  const Report a = pseudo_metric_audit(m, 2);
  const Report ga = geometry_vs_automaton_audit(fixtures::h6(), 2);
  set_worker_count(4);
  const Report b = pseudo_metric_audit(m, 2);
  const Report gb = geometry_vs_automaton_audit(fixtures::h6(), 2);
  set_worker_count(0);
  EXPECT_EQ(a.checked, b.checked);
  EXPECT_EQ(a.metrics, b.metrics);
  EXPECT_EQ(ga.checked, gb.checked);
  EXPECT_EQ(report_to_json(ga).dump(), report_to_json(gb).dump());
}
