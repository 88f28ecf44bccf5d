#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "oracle.hpp"
#include "treelike/serialize.hpp"

using namespace treelike;

namespace {

Dyadic D(const char* s) { return Dyadic::parse(s); }

const std::vector<TowerLevel>& tower3() {
  static const auto t = build_tower(3);
  return t;
}

std::string temp_path(const std::string& name) {
  return (std::string(::testing::TempDir()) + "treelike_" + name);
}

void write(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST(Json, DyadicRoundTrip) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    Dyadic x = oracle::random_dyadic(rng, 60, 70);
    EXPECT_EQ(dyadic_from_json(to_json(x)), x);
    EXPECT_EQ(dyadic_from_json(Json::parse(to_json(x).dump())), x);
  }
  EXPECT_EQ(to_json(D("-3/8")), (Json{{"num", "-3"}, {"exp", 3}}));
  EXPECT_EQ(dyadic_from_json(Json(5)), Dyadic(5));
  EXPECT_EQ(dyadic_from_json(Json("3/8")), D("3/8"));
  EXPECT_EQ(dyadic_from_json(Json{{"num", "6"}, {"exp", 2}}), D("3/2"));
  // values beyond 64 bits survive
  Dyadic big = Dyadic::pow2(100) + Dyadic(1);
  EXPECT_EQ(dyadic_from_json(to_json(big)), big);
}

TEST(Json, DyadicRejects) {
  EXPECT_THROW(dyadic_from_json(Json{{"num", "1.5"}, {"exp", 0}}), FormatError);
  EXPECT_THROW(dyadic_from_json(Json{{"num", 3}, {"exp", 0}}), FormatError);
  EXPECT_THROW(dyadic_from_json(Json{{"num", "3"}}), FormatError);
  EXPECT_THROW(dyadic_from_json(Json{{"num", "3"}, {"exp", "x"}}), FormatError);
  EXPECT_THROW(dyadic_from_json(Json("1/3")), FormatError);
  EXPECT_THROW(dyadic_from_json(Json(0.5)), FormatError);
  EXPECT_THROW(point_from_json(Json::array({1, 2, 3})), FormatError);
}

TEST(Json, QuadAndPoint) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    Quad q = oracle::random_quad(rng);
    EXPECT_EQ(quad_from_json(to_json(q)), q);
  }
  EXPECT_EQ(quad_from_json(Json(2)), Quad(2));
  Point2 p{D("1/2"), D("-3/4")};
  EXPECT_EQ(point_from_json(to_json(p)), p);
  EXPECT_EQ(point_from_json(Json::array({"1/2", "-3/4"})), p);
}

TEST(Json, TreeAndLevelRoundTrip) {
  for (const auto& l : tower3()) {
    EXPECT_EQ(tree_from_json(to_json(*l.tree)), *l.tree);
    TowerLevel back = level_from_json(Json::parse(to_json(l).dump()));
    EXPECT_EQ(back.n, l.n);
    EXPECT_EQ(*back.tree, *l.tree);
    EXPECT_EQ(*back.tree_t, *l.tree_t);
    EXPECT_EQ(back.path, l.path);
    EXPECT_EQ(back.path_t, l.path_t);
    EXPECT_EQ(back.map.images(), l.map.images());
    EXPECT_EQ(back.map_t.images(), l.map_t.images());
    EXPECT_EQ(back.triangles, l.triangles);
    EXPECT_EQ(back.new_leaves, l.new_leaves);
    EXPECT_EQ(back.new_leaves_t, l.new_leaves_t);
    EXPECT_EQ(back.curve(), l.curve());
  }
}

TEST(Json, HeightRoundTrip) {
  HeightFunction h({{D("0"), Quad(0)}, {D("1/2"), Quad::sqrt2()}, {D("1"), Quad(D("1/4"))}});
  EXPECT_EQ(height_from_json(to_json(h)), h);
}

TEST(State, RoundTripAndDigest) {
  const auto& t = tower3();
  std::string s1 = dump_state(t);
  std::string s2 = dump_state(build_tower(3));
  EXPECT_EQ(s1, s2);
  Json j = Json::parse(s1);
  EXPECT_EQ(j["format_version"], kStateFormatVersion);
  EXPECT_EQ(j["digest"], sha256_hex(j["levels"].dump()));
  EXPECT_EQ(j["metadata"]["level_count"], 3);
  EXPECT_EQ(j["metadata"]["levels"][2]["pi_breakpoints"], 33);
  EXPECT_EQ(j["metadata"]["levels"][2]["E_edges"], 20);
  StateFile st = state_from_json(j);
  EXPECT_TRUE(st.digest_ok());
  ASSERT_EQ(st.levels.size(), 3u);
  EXPECT_EQ(dump_state(st.levels), s1);

  std::string path = temp_path("state.json");
  write(path, s1);
  StateFile loaded = load_state(path);
  EXPECT_TRUE(loaded.digest_ok());
  EXPECT_EQ(*loaded.levels[2].tree, *t[2].tree);
  std::remove(path.c_str());
}

TEST(State, Sha256KnownAnswers) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(State, TamperedDigestLoadsButFlags) {
  Json j = Json::parse(dump_state(tower3()));
  j["levels"][1]["g"]["images"][0]["point"]["x"] = to_json(D("1/8"));
  StateFile st = state_from_json(j);
  EXPECT_FALSE(st.digest_ok());
}

TEST(State, CorruptInputs) {
  Json good = Json::parse(dump_state(tower3()));
  auto expect_bad = [](Json j, const char* what) { EXPECT_THROW(state_from_json(j), FormatError) << what; };
  {
    Json j = good;
    j["format_version"] = 99;
    expect_bad(j, "version");
  }
  {
    Json j = good;
    j["levels"] = Json::array();
    expect_bad(j, "empty levels");
  }
  {
    Json j = good;
    j["levels"].erase(0);
    expect_bad(j, "numbering");
  }
  {
    Json j = good;
    j["levels"][0].erase("pi");
    expect_bad(j, "missing pi");
  }
  {
    Json j = good;
    j["levels"][1]["E"]["root"] = 999;
    expect_bad(j, "root");
  }
  {
    Json j = good;
    j["levels"][1]["E"]["parents"][0]["vertex"] = -1;
    expect_bad(j, "negative id");
  }
  {
    Json j = good;
    j["levels"][1]["retraction"]["leaves"] = Json::array({12345});
    expect_bad(j, "leaf");
  }
  {
    Json j = good;
    j.erase("digest");
    expect_bad(j, "digest");
  }
  expect_bad(Json::array(), "not an object");

  std::string path = temp_path("truncated.json");
  std::string text = dump_state(tower3());
  write(path, text.substr(0, text.size() / 2));
  EXPECT_THROW(load_state(path), FormatError);
  std::remove(path.c_str());
  EXPECT_THROW(load_state(temp_path("does_not_exist.json")), std::exception);
}

TEST(LoopFile, PointsOnly) {
  Json j = Json::parse(R"({"points": [[0, 0], [0, 1], [1, 1], [0, 0]]})");
  PlanePath p = plane_path_from_json(j);
  ASSERT_EQ(p.size(), 4u);
  EXPECT_EQ(p.breakpoints()[1].param, D("1/4"));
  EXPECT_EQ(p.breakpoints()[2].param, D("1/2"));
  EXPECT_EQ(p.breakpoints()[3].param, Dyadic(1));
  Json two = Json::parse(R"({"points": [[0, 0], [1, 0], [0, 0]]})");
  EXPECT_EQ(plane_path_from_json(two).breakpoints()[1].param, D("1/2"));
  EXPECT_EQ(plane_path_from_json(to_json(p)), p);
  EXPECT_THROW(plane_path_from_json(Json::parse(R"({"points": [[0, 0]]})")), FormatError);
  EXPECT_THROW(plane_path_from_json(Json::parse(R"({"breakpoints": [{"param": 0, "point": [0, 0]}, {"param": "1/2", "point": [0, 0]}]})")),
               FormatError);
}

TEST(Reports, SuiteJsonShape) {
  SuiteReport rep = run_suite(build_tower(2), SuiteOptions{});
  Json j = to_json(rep);
  for (const char* s : {"hypotheses", "gap_bound", "retraction", "isometry", "density", "counts", "containment",
                        "certificates", "class_consistency", "verdicts"}) {
    ASSERT_TRUE(j.contains(s)) << s;
    EXPECT_TRUE(j[s]["passed"].get<bool>()) << s;
  }
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["verdicts"]["alpha_beta"]["kind"], "NotTreeLike");
}
