#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "testing/fixtures.hpp"

using namespace gasketlab;
using fixtures::tri;

namespace {

EdgeSet edges(std::initializer_list<Edge> e) { return EdgeSet(e); }

}  // namespace

TEST(Rational, ParseAndFormat) {
  EXPECT_EQ(parse_frac("3/6"), Frac(1, 2));
  EXPECT_EQ(parse_frac("-2"), Frac(-2));
  EXPECT_EQ(to_string(make_frac(6, 4)), "3/2");
  EXPECT_THROW(parse_frac("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_frac("a/2"), std::invalid_argument);
  EXPECT_THROW(parse_frac(""), std::invalid_argument);
}

TEST(Rational, SquaredDistanceMatchesCartesian) {
  fixtures::Rng rng(5);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
  for (int t = 0; t < 200; ++t) {
    const ObliquePoint a{Frac(num(rng), den(rng)), Frac(num(rng), den(rng))};
    const ObliquePoint b{Frac(num(rng), den(rng)), Frac(num(rng), den(rng))};
    const auto [ax, ay] = cartesian(a);
    const auto [bx, by] = cartesian(b);
    const double want = (ax - bx) * (ax - bx) + (ay - by) * (ay - by);
    EXPECT_NEAR(sq_dist(a, b).get_d(), want, 1e-9 * (1 + want));
  }
}

TEST(ValidateSpec, Sierpinski) { EXPECT_TRUE(validate_spec(fixtures::sier()).ok()); }

TEST(ValidateSpec, NonVertexContact) {
  GasketSpec s = fixtures::h6();
  s.triangles[4] = tri("1/8", "1/4", "1/4");
  const Report r = validate_spec(s);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(r.has_rule("vertex_contact"));
}

TEST(ValidateSpec, IdenticalMaps) {
  GasketSpec s = fixtures::sier();
  s.triangles.push_back(s.triangles[0]);
  const Report r = validate_spec(s);
  EXPECT_TRUE(r.has_rule("overlap"));
}

TEST(ValidateSpec, ContainmentAndRatio) {
  EXPECT_TRUE(validate_spec(GasketSpec{{tri("3/4", "0", "1/2")}}).has_rule("containment"));
  EXPECT_TRUE(validate_spec(GasketSpec{{tri("0", "0", "1")}}).has_rule("ratio"));
  EXPECT_TRUE(validate_spec(GasketSpec{{tri("0", "0", "0")}}).has_rule("ratio"));
  EXPECT_FALSE(validate_spec(GasketSpec{}).ok());
}

TEST(Overlap, Classification) {
  ObliquePoint z;
  EXPECT_EQ(overlap(tri("0", "0", "1/2"), tri("1/2", "0", "1/2"), &z), Overlap::Point);
  EXPECT_EQ(z, (ObliquePoint{Frac(1, 2), Frac(0)}));
  EXPECT_EQ(overlap(tri("0", "0", "1/2"), tri("1/4", "0", "1/2")), Overlap::Interior);
  EXPECT_EQ(overlap(tri("0", "0", "1/4"), tri("1/2", "0", "1/4")), Overlap::Disjoint);
}

TEST(Corners, Examples) {
  EXPECT_EQ(corner_symbols(fixtures::sier()), (CornerAssign{1, 2, 3}));
  EXPECT_EQ(corner_symbols(fixtures::g5()), (CornerAssign{1, 4, 5}));
  GasketSpec s = fixtures::h6();
  s.triangles.pop_back();
  EXPECT_EQ(corner_symbols(s), (CornerAssign{1, 4, -3}));
}

TEST(Contacts, H6) {
  std::set<std::tuple<int, int, Role, Role>> got;
  for (const auto& c : contacts(fixtures::h6())) got.insert({c.i, c.j, c.v, c.u});
  const std::set<std::tuple<int, int, Role, Role>> want{
      {1, 2, Role::B, Role::A}, {2, 1, Role::A, Role::B}, {2, 3, Role::B, Role::A}, {3, 2, Role::A, Role::B},
      {3, 4, Role::B, Role::A}, {4, 3, Role::A, Role::B}, {1, 5, Role::G, Role::A}, {5, 1, Role::A, Role::G},
      {2, 5, Role::G, Role::B}, {5, 2, Role::B, Role::G}};
  EXPECT_EQ(got, want);
}

TEST(Contacts, PointsAreSharedVertices) {
  const GasketSpec s = fixtures::sier();
  for (const auto& c : contacts(s)) {
    EXPECT_EQ(s.at(c.i).vertex(c.v), c.point);
    EXPECT_EQ(s.at(c.j).vertex(c.u), c.point);
  }
}

// Edge sets below were produced by tests/oracles/geometry_oracle.py
// (Cartesian, √3 tracked symbolically) and frozen.
TEST(TopologyAutomaton, OracleEdges) {
  const auto ms = topology_automaton(fixtures::sier());
  EXPECT_EQ(ms, fixtures::sierpinski_automaton());

  const auto mh = topology_automaton(fixtures::h6());
  EXPECT_EQ(mh, fixtures::h6_automaton());

  const auto mhp = topology_automaton(fixtures::h6prime());
  EXPECT_EQ(mhp.p_ag(), edges({{3, 5}}));
  EXPECT_EQ(mhp.p_bg(), edges({{4, 5}}));

  const auto mg = topology_automaton(fixtures::g5());
  EXPECT_EQ(mg.p_ab(), edges({{1, 2}, {2, 3}, {3, 4}}));
  EXPECT_TRUE(mg.p_ag().empty());
  EXPECT_TRUE(mg.p_bg().empty());

  const auto me = topology_automaton(fixtures::example_e());
  EXPECT_EQ(me.corners(), (CornerAssign{1, 5, 11}));
  EXPECT_EQ(me.p_ab(), edges({{1, 2}, {2, 3}, {3, 4}, {4, 5}, {6, 7}, {8, 9}, {9, 10}}));
  EXPECT_EQ(me.p_ag(), edges({{3, 6}, {4, 7}}));
  EXPECT_EQ(me.p_bg(), edges({{4, 6}, {5, 7}}));

  const auto mf = topology_automaton(fixtures::example_f());
  EXPECT_EQ(mf.p_ab(), edges({{1, 2}, {2, 3}, {3, 4}, {4, 5}, {6, 7}, {7, 8}, {9, 10}}));
  EXPECT_EQ(mf.p_ag(), edges({{1, 6}, {2, 7}, {3, 8}}));
  EXPECT_EQ(mf.p_bg(), edges({{2, 6}, {3, 7}, {4, 8}}));
}

TEST(TopologyAutomaton, AbsentAlphaDropsItsEdges) {
  GasketSpec s = fixtures::h6();
  s.triangles.erase(s.triangles.begin());
  const auto m = topology_automaton(s);
  EXPECT_EQ(m.corners().alpha, -1);
  // old 2..6 are now 1..5; with α absent no αβ contact point lies in K
  EXPECT_TRUE(m.p_ab().empty());
  EXPECT_TRUE(m.p_ag().empty());
  EXPECT_EQ(m.p_bg(), edges({{1, 4}}));
  EXPECT_TRUE(validate_triangle_gasket(m).ok());
}

TEST(Blocks, Examples) {
  EXPECT_EQ(horizontal_blocks(fixtures::h6()), (std::vector<Word>{{1, 2, 3, 4}, {5}, {6}}));
  EXPECT_EQ(horizontal_blocks(fixtures::g5()), (std::vector<Word>{{1, 2, 3, 4}, {5}}));
  EXPECT_EQ(horizontal_blocks(fixtures::sier()), (std::vector<Word>{{1, 2}, {3}}));
  std::multiset<std::size_t> sizes;
  for (const auto& b : horizontal_blocks(fixtures::example_e())) sizes.insert(b.size());
  EXPECT_EQ(sizes, (std::multiset<std::size_t>{1, 2, 3, 5}));
}

TEST(Family, Examples) {
  const auto h = family_check(fixtures::h6());
  EXPECT_TRUE(h.top_isolated && h.gamma_in_K && h.alpha_beta_same_block && h.in_F_T_ab);
  const auto g = family_check(fixtures::g5());
  EXPECT_TRUE(g.top_isolated && g.gamma_in_K && g.alpha_beta_same_block && g.in_F_T_ab);
  const auto s = family_check(fixtures::sier());
  EXPECT_FALSE(s.top_isolated);
  EXPECT_FALSE(s.in_F_T_ab);
  const auto gp = family_check(fixtures::g5prime());
  EXPECT_FALSE(gp.gamma_in_K);
  EXPECT_TRUE(gp.in_F_T_ab);
  GasketSpec no_beta = fixtures::h6();
  no_beta.triangles[3] = tri("1/2", "1/4", "1/4");
  EXPECT_THROW(family_check(no_beta), OutOfScopeError);
}

TEST(PiPoint, Examples) {
  const GasketSpec s = fixtures::sier();
  EXPECT_EQ(pi_point(s, fixtures::seq("(1)^inf", 3)), (ObliquePoint{Frac(0), Frac(0)}));
  EXPECT_EQ(pi_point(s, fixtures::seq("1.(2)^inf", 3)), (ObliquePoint{Frac(1, 2), Frac(0)}));
  EXPECT_EQ(pi_point(s, fixtures::seq("2.(1)^inf", 3)), (ObliquePoint{Frac(1, 2), Frac(0)}));
  EXPECT_EQ(fixed_point(s, 3), (ObliquePoint{Frac(0), Frac(1)}));
}

TEST(PiPoint, RespectsEquivalence) {
  for (const GasketSpec& s : {fixtures::sier(), fixtures::h6(), fixtures::g5()}) {
    const auto m = topology_automaton(s);
    const auto xs = enumerate_eventually_constant(s.size(), 2);
    for (const auto& x : xs) {
      for (const auto& y : xs) {
        if (equivalent(m, x, y)) {
          ASSERT_EQ(pi_point(s, x), pi_point(s, y)) << format(x) << " " << format(y);
        } else {
          ASSERT_NE(pi_point(s, x), pi_point(s, y)) << format(x) << " " << format(y);
        }
      }
    }
  }
}

// Frozen from tests/oracles/geometry_oracle.py.
TEST(Separation, OracleValues) {
  struct Case {
    GasketSpec spec;
    std::size_t depth;
    const char* c1;
    const char* c2;
    const char* cp;
  };
  const std::vector<Case> cases{
      {fixtures::sier(), 0, nullptr, "1/4", "1/4"},  {fixtures::sier(), 2, nullptr, "1/4", "1/4"},
      {fixtures::g5(), 0, "1/16", "1/16", "1/16"},   {fixtures::g5(), 2, "1/16", "1/16", "1/16"},
      {fixtures::g5prime(), 0, "3/64", "1/16", "3/64"}, {fixtures::g5prime(), 1, "1/16", "1/16", "1/16"},
      {fixtures::h6(), 0, "3/64", "1/16", "3/64"},   {fixtures::h6(), 2, "3/64", "1/16", "3/64"},
      {fixtures::h6prime(), 1, "3/64", "1/16", "3/64"}, {fixtures::example_e(), 1, "1/100", "1/25", "1/100"},
      {fixtures::example_f(), 1, "3/100", "1/25", "3/100"},
  };
  for (const auto& c : cases) {
    const auto sc = separation_constants(c.spec, c.depth);
    if (c.c1) {
      ASSERT_TRUE(sc.C1_sq_lb.has_value());
      EXPECT_EQ(*sc.C1_sq_lb, parse_frac(c.c1));
    } else {
      EXPECT_FALSE(sc.C1_sq_lb.has_value());
    }
    ASSERT_TRUE(sc.C2_sq_lb.has_value());
    EXPECT_EQ(*sc.C2_sq_lb, parse_frac(c.c2));
    EXPECT_EQ(sc.Cprime_sq_lb, parse_frac(c.cp));
  }
}

TEST(Separation, MonotoneInRefineDepth) {
  for (const GasketSpec& s : {fixtures::sier(), fixtures::h6(), fixtures::g5(), fixtures::g5prime()}) {
    Frac prev(0);
    for (std::size_t d = 0; d <= 2; ++d) {
      const Frac v = separation_constants(s, d).Cprime_sq_lb;
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(Separation, OutOfScopeWithoutBottomCorners) {
  GasketSpec s = fixtures::h6();
  s.triangles.erase(s.triangles.begin());
  EXPECT_THROW(separation_constants(s, 1), OutOfScopeError);
}

TEST(GeometryAudit, Examples) {
  for (auto [spec, depth] : std::vector<std::pair<GasketSpec, std::size_t>>{
           {fixtures::sier(), 3}, {fixtures::h6(), 2}, {fixtures::g5(), 2}, {fixtures::g5prime(), 2}}) {
    const Report r = geometry_vs_automaton_audit(spec, depth);
    EXPECT_TRUE(r.ok()) << (r.findings.empty() ? "" : r.findings[0].detail);
    EXPECT_EQ(r.checked, static_cast<std::size_t>(std::pow(spec.size(), 2.0 * static_cast<double>(depth))));
  }
}

TEST(ComponentAudit, Examples) {
  EXPECT_TRUE(component_audit(fixtures::g5(), 3).ok());
  EXPECT_TRUE(component_audit(fixtures::h6(), 3).ok());
  EXPECT_THROW(component_audit(fixtures::sier(), 1), OutOfScopeError);
}

TEST(Render, CountsAndColours) {
  auto cells = [](const std::string& svg) {
    std::size_t n = 0;
    for (std::size_t p = svg.find("class=\"cell\""); p != std::string::npos; p = svg.find("class=\"cell\"", p + 1)) ++n;
    return n;
  };
  EXPECT_EQ(cells(render_svg(fixtures::sier(), 1)), 3u);
  EXPECT_EQ(cells(render_svg(fixtures::h6(), 2)), 36u);
  RenderOptions opt;
  opt.color_blocks = true;
  const std::string svg = render_svg(fixtures::g5(), 1, opt);
  std::set<std::string> fills;
  for (std::size_t p = svg.find("class=\"cell\""); p != std::string::npos; p = svg.find("class=\"cell\"", p + 1)) {
    const std::size_t f = svg.find("fill=\"", p);
    const std::size_t close = svg.find('>', p);
    ASSERT_LT(f, close);
    fills.insert(svg.substr(f + 6, 7));
  }
  EXPECT_EQ(fills.size(), 2u);
  EXPECT_EQ(render_svg(fixtures::g5(), 3, opt), render_svg(fixtures::g5(), 3, opt));
}
