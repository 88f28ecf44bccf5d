// treelike: build the tower, verify it, render it, decide loops.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "treelike/render.hpp"
#include "treelike/serialize.hpp"
#include "treelike/suite.hpp"

namespace {

using namespace treelike;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  out.close();
  if (!out) throw std::runtime_error("write failed: " + path);
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

// Writes to `path`, or to stdout when it is empty or "-".
void emit(const std::string& path, const Json& j) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(1) << "\n";
  } else {
    write_file(path, j.dump(1) + "\n");
  }
}

unsigned resolve_workers(int flag) {
  if (flag > 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("TREELIKE_WORKERS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw UsageError(std::string("TREELIKE_WORKERS must be a positive integer, got '") + env + "'");
    return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<TowerLevel> load_levels(const std::string& path, StateFile* file = nullptr) {
  StateFile st = load_state(path);
  if (!st.digest_ok()) std::cerr << "warning: " << path << ": digest does not match the stored levels\n";
  auto levels = std::move(st.levels);
  if (file) *file = std::move(st);
  return levels;
}

int cmd_build(int levels, const std::string& out) {
  auto tower = build_tower(levels);
  Json state = state_to_json(tower);
  write_file(out, state.dump(1) + "\n");
  std::cout << "levels " << levels << "\n";
  for (const auto& m : state["metadata"]["levels"]) {
    std::cout << "  n=" << m["n"] << " pi=" << m["pi_breakpoints"] << " pit=" << m["pit_breakpoints"]
              << " E_edges=" << m["E_edges"] << " Et_edges=" << m["Et_edges"] << "\n";
  }
  std::cout << "digest " << state["digest"].get<std::string>() << "\n";
  return kPass;
}

int cmd_verify(const std::string& state_path, std::optional<unsigned> refine, unsigned workers, const std::string& out) {
  StateFile file;
  auto tower = load_levels(state_path, &file);
  SuiteReport rep = run_suite(tower, SuiteOptions{refine, workers});
  Json j = to_json(rep);
  j["integrity"] = {{"passed", file.digest_ok()}, {"stored", file.digest}, {"computed", file.computed}};
  j["levels"] = tower.size();
  const bool ok = rep.passed() && file.digest_ok();
  j["passed"] = ok;
  if (!out.empty()) emit(out, j);

  for (const char* section : {"integrity", "hypotheses", "gap_bound", "retraction", "isometry", "density", "counts",
                              "containment", "certificates", "class_consistency", "verdicts"}) {
    const bool pass = j[section]["passed"].get<bool>();
    std::cout << (pass ? "PASS " : "FAIL ") << section << "\n";
    if (j[section].contains("checks")) {
      for (const auto& c : j[section]["checks"]) {
        if (!c["passed"].get<bool>()) std::cout << "  n=" << c.value("n", 0) << " " << c["name"].get<std::string>() << ": " << c.value("detail", "") << "\n";
      }
    }
  }
  for (const auto& c : rep.certificates) {
    std::cout << "  certificate n=" << c.n << (c.tilde ? " Et" : " E ");
    if (c.witness) {
      std::cout << " pairs=" << c.witness->check.pairs_checked << " violations=" << c.witness->check.violation_count;
    }
    std::cout << " class_violations=" << c.classes.violation_count;
    if (!c.error.empty()) std::cout << " error: " << c.error;
    std::cout << "\n";
  }
  std::cout << "  alpha*rev(gamma_" << tower.size() << "): " << to_string(rep.alpha_gamma.kind) << "\n"
            << "  beta*rev(gammat_" << tower.size() << "): " << to_string(rep.beta_gamma.kind) << "\n"
            << "  alpha*rev(beta): " << to_string(rep.alpha_beta.kind) << " (" << rep.alpha_beta.reason
            << ", winding " << rep.alpha_beta.winding << ")\n";
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kPass : kFail;
}

int cmd_render(const std::string& state_path, int level, unsigned scale, const std::string& curves,
               const std::string& out) {
  RenderOptions opt;
  try {
    opt.curves = parse_curve_list(curves);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  opt.level = level;
  opt.scale = scale;
  auto tower = load_levels(state_path);
  if (level > static_cast<int>(tower.size())) {
    throw UsageError("level " + std::to_string(level) + " is not in the state (" + std::to_string(tower.size()) + " levels)");
  }
  write_file(out, render_svg(tower, opt));
  std::cout << "wrote " << out << "\n";
  return kPass;
}

int cmd_decide(const std::string& loop_path, const std::string& out) {
  PlanePath loop = plane_path_from_json(read_json(loop_path));
  Verdict v;
  try {
    v = decide_polygonal_loop(loop);
  } catch (const std::invalid_argument& e) {
    throw UsageError(loop_path + ": " + e.what());
  }
  emit(out, to_json(v));
  std::cerr << to_string(v.kind) << ": " << v.reason << "\n";
  if (v.witness && !v.witness->check.passed()) return kFail;
  return kPass;
}

int cmd_heightfn(const std::string& state_path, int level, bool tilde, const std::string& loop_path,
                 const std::string& height_path, std::optional<unsigned> refine, unsigned workers,
                 const std::string& out) {
  if (!loop_path.empty() || !height_path.empty()) {
    if (loop_path.empty() || height_path.empty()) throw UsageError("--loop and --height go together");
    PlanePath loop = plane_path_from_json(read_json(loop_path));
    HeightFunction h = height_from_json(read_json(height_path));
    HeightReport rep = verify_height_function(loop, h, refine.value_or(1), workers);
    ClassReport classes = class_consistency_check(loop, h, refine.value_or(1));
    emit(out, {{"check", to_json(rep)}, {"classes", to_json(classes)}});
    return rep.passed() && classes.passed() ? kPass : kFail;
  }
  auto tower = load_levels(state_path);
  const int top = static_cast<int>(tower.size());
  const int n = level == 0 ? top : level;
  if (n > top) throw UsageError("level " + std::to_string(n) + " is not in the state");
  Certificate cert = certify(tower, static_cast<std::size_t>(n - 1), tilde, refine.value_or(default_refine(n)), workers);
  QuotientTree q = quotient_dendrite(cert.witness->height);
  std::size_t leaves = 0;
  for (VertexId v : q.tree().vertices()) leaves += (v != q.tree().root() && q.tree().is_leaf(v)) ? 1 : 0;
  emit(out, {
                {"n", n},
                {"side", tilde ? "Et" : "E"},
                {"height", to_json(cert.witness->height)},
                {"check", to_json(cert.witness->check)},
                {"classes", to_json(cert.classes)},
                {"quotient", {{"vertices", q.tree().vertex_count()}, {"edges", q.tree().edge_count()}, {"leaves", leaves}}},
            });
  return cert.passed() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact tower of metric trees and tree-like certificates"};
  app.require_subcommand(1);

  int levels = 6;
  int level = 0;
  unsigned scale = 400;
  unsigned refine_flag = 0;
  int workers_flag = 0;
  bool tilde = false;
  std::string state_out, verify_out, render_out, decide_out, height_out, state = "state.json", curves = "gamma_n", loop_path, height_path;

  auto* build = app.add_subcommand("build", "Build levels 1..N and write the state file");
  build->add_option("--levels", levels, "Number of levels")->check(CLI::Range(1, 10));
  build->add_option("--out", state_out, "State file")->default_val("state.json");

  auto* verify = app.add_subcommand("verify", "Run every invariant suite on a state file");
  verify->add_option("--state", state, "State file");
  auto* refine_opt = verify->add_option("--refine", refine_flag, "Midpoint refinements of the pair grid (default 1 for n <= 4, 0 above)");
  verify->add_option("--workers", workers_flag, "Worker threads (env TREELIKE_WORKERS)")->check(CLI::PositiveNumber);
  verify->add_option("--out", verify_out, "JSON report");

  auto* render = app.add_subcommand("render", "Write an SVG of one level");
  render->add_option("--state", state, "State file");
  render->add_option("--level", level, "Level (default: top)")->check(CLI::Range(1, 10));
  render->add_option("--scale", scale, "Pixels per unit")->check(CLI::Range(1u, 100000u));
  render->add_option("--curves", curves, "Comma list of alpha, beta, gamma_n, trees");
  render->add_option("--out", render_out, "SVG file")->default_val("figure.svg");

  auto* decide = app.add_subcommand("decide", "Decide a polygonal loop");
  decide->add_option("loop", loop_path, "Loop JSON file")->required();
  decide->add_option("--out", decide_out, "Verdict JSON (default stdout)");

  auto* heightfn = app.add_subcommand("heightfn", "Emit the tree-derived height of pi_1 * rev(pi_n), or check a given one");
  heightfn->add_option("--state", state, "State file");
  heightfn->add_option("--level", level, "Level (default: top)")->check(CLI::Range(1, 10));
  heightfn->add_flag("--tilde", tilde, "Use Et_n instead of E_n");
  heightfn->add_option("--loop", loop_path, "Loop JSON to check instead");
  heightfn->add_option("--height", height_path, "Height function JSON to check against --loop");
  auto* h_refine_opt = heightfn->add_option("--refine", refine_flag, "Midpoint refinements of the pair grid");
  heightfn->add_option("--workers", workers_flag, "Worker threads (env TREELIKE_WORKERS)")->check(CLI::PositiveNumber);
  heightfn->add_option("--out", height_out, "JSON output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*build) return cmd_build(levels, state_out);
    if (*verify) {
      std::optional<unsigned> refine;
      if (*refine_opt) refine = refine_flag;
      return cmd_verify(state, refine, resolve_workers(workers_flag), verify_out);
    }
    if (*render) return cmd_render(state, level, scale, curves, render_out);
    if (*decide) return cmd_decide(loop_path, decide_out);
    if (*heightfn) {
      std::optional<unsigned> refine;
      if (*h_refine_opt) refine = refine_flag;
      return cmd_heightfn(state, level, tilde, loop_path, height_path, refine, resolve_workers(workers_flag), height_out);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "error: corrupt input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
