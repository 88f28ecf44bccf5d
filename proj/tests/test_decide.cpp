#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "treelike/construct.hpp"
#include "treelike/decide.hpp"

using namespace treelike;

namespace {

Dyadic D(const char* s) { return Dyadic::parse(s); }
Point2 P(const char* x, const char* y) { return {D(x), D(y)}; }

const Point2 a = P("0", "0"), b = P("0", "1"), c = P("1", "1");

// Breakpoints at k / 2^j with 2^j >= segments, last at 1.
PlanePath loop_of(const std::vector<Point2>& pts) {
  int j = 0;
  while ((1u << j) < pts.size() - 1) ++j;
  std::vector<PlanePath::Breakpoint> bps;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    bps.push_back({k + 1 == pts.size() ? Dyadic(1) : Dyadic(static_cast<long long>(k)).scaled(-j), pts[k]});
  }
  return PlanePath(bps);
}

// Twice the signed area.
oracle::Rat shoelace(const std::vector<Point2>& pts) {
  oracle::Rat s = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    s += oracle::rat(pts[i].x) * oracle::rat(pts[i + 1].y) - oracle::rat(pts[i + 1].x) * oracle::rat(pts[i].y);
  }
  return s;
}

Quad peak(const HeightFunction& h) {
  Quad m;
  for (const auto& bp : h.breakpoints()) m = max(m, bp.value);
  return m;
}

}  // namespace

TEST(Winding, Triangle) {
  std::vector<Point2> tri{a, b, c, a};
  PlanePath loop = loop_of(tri);
  // clockwise: negative area, winding -1 inside
  EXPECT_LT(shoelace(tri), 0);
  EXPECT_EQ(winding_number(loop, P("1/4", "5/8")), -1);
  EXPECT_EQ(winding_number(loop, P("2", "0")), 0);
  EXPECT_EQ(winding_number(loop, P("1", "0")), 0);
  EXPECT_EQ(winding_number(loop.reversed(), P("1/4", "5/8")), 1);
  EXPECT_THROW(winding_number(loop, P("0", "1/2")), std::invalid_argument);
  EXPECT_THROW(winding_number(loop, b), std::invalid_argument);
}

TEST(Winding, RefinementInvariant) {
  std::vector<Point2> tri{a, b, c, a};
  std::vector<Point2> fine{a, P("0", "1/2"), b, P("1/2", "1"), c, P("1/2", "1/2"), a};
  EXPECT_EQ(winding_number(loop_of(tri), P("1/4", "5/8")), winding_number(loop_of(fine), P("1/4", "5/8")));
  // twice around
  std::vector<Point2> twice{a, b, c, a, b, c, a};
  EXPECT_EQ(winding_number(loop_of(twice), P("1/4", "5/8")), -2);
}

TEST(Winding, MatchesShoelaceOnSquares) {
  // For a simple polygon the winding at an inside point is the sign of the area.
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> lo(0, 4), len(1, 4);
  for (int trial = 0; trial < 50; ++trial) {
    Dyadic x0(lo(rng)), y0(lo(rng)), w(len(rng)), hgt(len(rng));
    std::vector<Point2> sq{{x0, y0}, {x0 + w, y0}, {x0 + w, y0 + hgt}, {x0, y0 + hgt}, {x0, y0}};
    if (trial % 2) std::reverse(sq.begin(), sq.end());
    Point2 inside{x0 + w.half(), y0 + hgt.half()};
    Point2 outside{x0 - Dyadic(1), y0};
    const int expect = oracle::sgn(shoelace(sq));
    EXPECT_EQ(winding_number(loop_of(sq), inside), expect);
    EXPECT_EQ(winding_number(loop_of(sq), outside), 0);
  }
}

TEST(Decide, TriangleIsNotTreeLike) {
  Verdict v = decide_polygonal_loop(loop_of({a, b, c, a}));
  EXPECT_EQ(v.kind, Verdict::Kind::kNotTreeLike);
  ASSERT_TRUE(v.winding_point.has_value());
  EXPECT_NE(v.winding, 0);
  EXPECT_EQ(winding_number(loop_of({a, b, c, a}), *v.winding_point), v.winding);
  EXPECT_FALSE(v.witness.has_value());
  EXPECT_STREQ(to_string(v.kind), "NotTreeLike");
}

TEST(Decide, AlphaBetaIsNotTreeLike) {
  auto t = build_tower(1);
  PlanePath ab = loop_concat_reverse(t[0].curve(), t[0].curve_t());
  Verdict v = decide_polygonal_loop(ab);
  EXPECT_EQ(v.kind, Verdict::Kind::kNotTreeLike);
  EXPECT_EQ(v.winding, -1);
  EXPECT_EQ(winding_number(ab, P("1/4", "5/8")), -1);
}

TEST(Decide, BacktrackingLoopsAreTreeLike) {
  Verdict v = decide_polygonal_loop(loop_of({a, b, a}));
  ASSERT_EQ(v.kind, Verdict::Kind::kTreeLike);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_TRUE(v.witness->check.passed());
  EXPECT_EQ(peak(v.witness->height), Quad(1));
  EXPECT_EQ(v.witness->tree->edge_count(), 1u);

  Verdict w = decide_polygonal_loop(loop_of({a, b, c, b, a}));
  ASSERT_EQ(w.kind, Verdict::Kind::kTreeLike);
  EXPECT_EQ(peak(w.witness->height), Quad(2));
  EXPECT_EQ(w.witness->tree->edge_count(), 2u);
  EXPECT_EQ(map_path(w.witness->path, w.witness->map), loop_of({a, b, c, b, a}));

  auto t = build_tower(1);
  Verdict aa = decide_polygonal_loop(loop_concat_reverse(t[0].curve(), t[0].curve()));
  EXPECT_EQ(aa.kind, Verdict::Kind::kTreeLike);
  EXPECT_EQ(winding_number(loop_concat_reverse(t[0].curve(), t[0].curve()), P("1/4", "5/8")), 0);

  Verdict still = decide_polygonal_loop(loop_of({a, a}));
  EXPECT_EQ(still.kind, Verdict::Kind::kTreeLike);
}

TEST(Decide, Rejections) {
  // figure eight through a proper crossing
  std::vector<Point2> eight{a, P("1", "1"), P("1", "0"), P("0", "1"), a};
  EXPECT_THROW(decide_polygonal_loop(loop_of(eight)), std::invalid_argument);
  EXPECT_THROW(decide_polygonal_loop(loop_of({a, b})), std::invalid_argument);
}

TEST(Decide, BowtieIsInconclusive) {
  // two triangles sharing vertex a, traversed in opposite senses
  std::vector<Point2> bow{a, P("1", "0"), P("1", "1"), a, P("-1", "0"), P("-1", "1"), a};
  Verdict v = decide_polygonal_loop(loop_of(bow));
  EXPECT_EQ(v.kind, Verdict::Kind::kInconclusive);
  EXPECT_FALSE(v.reason.empty());
}

TEST(Decide, RandomBacktrackingWords) {
  // Random walks on the integer grid retraced in reverse always reduce.
  std::mt19937_64 rng(17);
  const Point2 steps[4] = {P("1", "0"), P("-1", "0"), P("0", "1"), P("0", "-1")};
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Point2> walk{a};
    const int len = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k < len; ++k) walk.push_back(walk.back() + steps[rng() % 4]);
    std::vector<Point2> pts = walk;
    for (int k = len - 1; k >= 0; --k) pts.push_back(walk[k]);
    PlanePath loop = loop_of(pts);
    Verdict v = decide_polygonal_loop(loop);
    ASSERT_EQ(v.kind, Verdict::Kind::kTreeLike) << trial << ": " << v.reason;
    ASSERT_TRUE(v.witness.has_value());
    // re-verify the witness independently of the stored report
    EXPECT_TRUE(verify_height_function(loop, v.witness->height, 1).passed());
    EXPECT_TRUE(v.witness->map.lipschitz_violations().empty());
  }
}
