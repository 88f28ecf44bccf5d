#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
};

fs::path workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("treelike_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Runs the binary with `args` (and an optional environment prefix), capturing
// stdout and stderr together.
CliRun cli(const std::string& args, const std::string& env = "") {
  const fs::path log = workdir() / "last.log";
  const std::string cmd = "cd '" + workdir().string() + "' && " + env + " '" + TREELIKE_CLI + "' " + args + " > '" +
                          log.string() + "' 2>&1";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(log)};
}

bool has(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST(Cli, BuildIsDeterministic) {
  CliRun a = cli("build --levels 3 --out a.json");
  CliRun b = cli("build --levels 3 --out b.json");
  ASSERT_EQ(a.code, 0) << a.out;
  ASSERT_EQ(b.code, 0) << b.out;
  EXPECT_EQ(slurp(workdir() / "a.json"), slurp(workdir() / "b.json"));
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(has(a.out, "n=3 pi=33 pit=17 E_edges=20 Et_edges=10"));
  EXPECT_TRUE(has(a.out, "digest "));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli("build --levels 0 --out z.json").code, 2);
  EXPECT_EQ(cli("build --levels 11 --out z.json").code, 2);
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
  EXPECT_EQ(cli("verify --state missing.json").code, 2);
  EXPECT_EQ(cli("--help").code, 0);
}

TEST(Cli, VerifyPasses) {
  ASSERT_EQ(cli("build --levels 2 --out v.json").code, 0);
  CliRun r = cli("verify --state v.json --refine 1 --out report.json");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(has(r.out, "PASS integrity"));
  EXPECT_TRUE(has(r.out, "PASS hypotheses"));
  EXPECT_TRUE(has(r.out, "alpha*rev(beta): NotTreeLike"));
  std::string report = slurp(workdir() / "report.json");
  EXPECT_TRUE(has(report, "\"passed\": true"));
}

TEST(Cli, VerifyFailsOnPerturbedEdge) {
  ASSERT_EQ(cli("build --levels 2 --out p.json").code, 0);
  auto state = nlohmann::json::parse(slurp(workdir() / "p.json"));
  // level 2 edges have length 1/2; make one 3/4
  auto& link = state["levels"][1]["E"]["parents"][0];
  ASSERT_EQ(link["length"]["rat"], (nlohmann::json{{"num", "1"}, {"exp", 1}}));
  link["length"]["rat"] = {{"num", "3"}, {"exp", 2}};
  spit(workdir() / "p.json", state.dump(1));
  CliRun r = cli("verify --state p.json");
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_TRUE(has(r.out, "FAIL integrity"));
  EXPECT_TRUE(has(r.out, "FAIL hypotheses"));
  EXPECT_TRUE(has(r.out, "(1) edge lengths"));
  EXPECT_TRUE(has(r.out, "digest does not match"));
}

TEST(Cli, CorruptJson) {
  ASSERT_EQ(cli("build --levels 2 --out c.json").code, 0);
  std::string text = slurp(workdir() / "c.json");
  spit(workdir() / "c.json", text.substr(0, text.size() / 3));
  EXPECT_EQ(cli("verify --state c.json").code, 2);
  spit(workdir() / "c2.json", "{\"format_version\": 1, \"levels\": []}");
  EXPECT_EQ(cli("verify --state c2.json").code, 2);
}

TEST(Cli, Render) {
  ASSERT_EQ(cli("build --levels 2 --out r.json").code, 0);
  CliRun r = cli("render --state r.json --level 2 --curves alpha,gamma_n,trees --out fig.svg");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(has(slurp(workdir() / "fig.svg"), "<svg"));
  EXPECT_EQ(cli("render --state r.json --curves delta --out fig2.svg").code, 2);
  EXPECT_EQ(cli("render --state r.json --level 3 --out fig3.svg").code, 2);
}

TEST(Cli, Decide) {
  spit(workdir() / "tri.json", R"({"points": [[0, 0], [0, 1], [1, 1], [0, 0]]})");
  spit(workdir() / "back.json", R"({"points": [[0, 0], [0, 1], [0, 0]]})");
  spit(workdir() / "eight.json", R"({"points": [[0, 0], [1, 1], [1, 0], [0, 1], [0, 0]]})");
  CliRun tri = cli("decide tri.json");
  EXPECT_EQ(tri.code, 0) << tri.out;
  EXPECT_TRUE(has(tri.out, "\"kind\": \"NotTreeLike\""));
  EXPECT_TRUE(has(tri.out, "\"winding\": -1"));
  CliRun back = cli("decide back.json --out v.json");
  EXPECT_EQ(back.code, 0) << back.out;
  EXPECT_TRUE(has(slurp(workdir() / "v.json"), "\"kind\": \"TreeLike\""));
  EXPECT_EQ(cli("decide eight.json").code, 2);
  EXPECT_EQ(cli("decide nope.json").code, 2);
}

TEST(Cli, Heightfn) {
  ASSERT_EQ(cli("build --levels 2 --out h.json").code, 0);
  CliRun r = cli("heightfn --state h.json --level 2 --out hf.json");
  EXPECT_EQ(r.code, 0) << r.out;
  std::string j = slurp(workdir() / "hf.json");
  EXPECT_TRUE(has(j, "\"leaves\": 3"));
  EXPECT_TRUE(has(j, "\"vertices\": 6"));
  EXPECT_EQ(cli("heightfn --state h.json --tilde --level 1").code, 0);
  EXPECT_EQ(cli("heightfn --state h.json --loop back.json").code, 2);
}

TEST(Cli, WorkersEnvironment) {
  ASSERT_EQ(cli("build --levels 2 --out w.json").code, 0);
  EXPECT_EQ(cli("verify --state w.json", "TREELIKE_WORKERS=2").code, 0);
  EXPECT_EQ(cli("verify --state w.json", "TREELIKE_WORKERS=abc").code, 2);
  EXPECT_EQ(cli("verify --state w.json", "TREELIKE_WORKERS=0").code, 2);
  EXPECT_EQ(cli("verify --state w.json --workers 3", "TREELIKE_WORKERS=abc").code, 0);
}
