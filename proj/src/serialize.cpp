#include "treelike/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

namespace treelike {

namespace {

bool is_integer_text(const std::string& s) {
  std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

VertexId vertex_from_json(const Json& j) {
  if (!j.is_number_unsigned()) throw FormatError("vertex id must be a nonnegative integer");
  auto v = j.get<std::uint64_t>();
  if (v > 0xFFFFFFFEu) throw FormatError("vertex id out of range");
  return static_cast<VertexId>(v);
}

std::vector<VertexId> vertices_from_json(const Json& j) {
  std::vector<VertexId> out;
  for (const auto& v : j) out.push_back(vertex_from_json(v));
  return out;
}

// Runs `f`, turning library and JSON errors into FormatError.
template <class F>
auto guarded(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const FormatError& e) {
    throw FormatError(what + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(what + ": " + e.what());
  } catch (const std::logic_error& e) {
    throw FormatError(what + ": " + e.what());
  }
}

}  // namespace

Json to_json(const Dyadic& x) { return {{"num", x.num().str()}, {"exp", x.exp()}}; }

Json to_json(const Quad& x) { return {{"rat", to_json(x.rat())}, {"irr", to_json(x.irr())}}; }

Json to_json(const Point2& p) { return {{"x", to_json(p.x)}, {"y", to_json(p.y)}}; }

Json to_json(const MetricTree& tree) {
  Json parents = Json::array();
  for (VertexId v : tree.vertices()) {
    if (v == tree.root()) continue;
    parents.push_back({{"vertex", v}, {"parent", *tree.parent(v)}, {"length", to_json(tree.edge_length(v))}});
  }
  return {{"root", tree.root()}, {"vertices", tree.vertices()}, {"parents", parents}};
}

Json to_json(const TreePath& path) {
  Json bps = Json::array();
  for (const auto& b : path.breakpoints()) bps.push_back({{"param", to_json(b.param)}, {"vertex", b.vertex}});
  return {{"breakpoints", bps}};
}

Json to_json(const PlanePath& path) {
  Json bps = Json::array();
  for (const auto& b : path.breakpoints()) bps.push_back({{"param", to_json(b.param)}, {"point", to_json(b.point)}});
  return {{"breakpoints", bps}};
}

Json to_json(const PlanarMap& map) {
  Json images = Json::array();
  for (VertexId v : map.tree().vertices()) images.push_back({{"vertex", v}, {"point", to_json(map.image(v))}});
  return {{"lipschitz", to_json(map.lipschitz())}, {"images", images}};
}

Json to_json(const OrderedTriangle& t) { return {{"a", to_json(t.a)}, {"b", to_json(t.b)}, {"c", to_json(t.c)}}; }

Json to_json(const TowerLevel& level) {
  Json triangles = Json::array();
  for (const auto& t : level.triangles) triangles.push_back(to_json(t));
  return {
      {"n", level.n},
      {"E", to_json(*level.tree)},
      {"Et", to_json(*level.tree_t)},
      {"pi", to_json(level.path)},
      {"pit", to_json(level.path_t)},
      {"g", to_json(level.map)},
      {"gt", to_json(level.map_t)},
      {"triangles", triangles},
      {"retraction", {{"leaves", level.new_leaves}, {"leaves_t", level.new_leaves_t}}},
  };
}

Json to_json(const HeightFunction& h) {
  Json bps = Json::array();
  for (const auto& b : h.breakpoints()) bps.push_back({{"param", to_json(b.param)}, {"value", to_json(b.value)}});
  return {{"breakpoints", bps}};
}

Json to_json(const HeightReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) {
    violations.push_back(
        {{"s", to_json(v.s)}, {"t", to_json(v.t)}, {"lhs_squared", to_json(v.lhs_squared)}, {"rhs", to_json(v.rhs)}});
  }
  Json slack = nullptr;
  if (report.min_slack_squared) {
    slack = {{"squared", to_json(*report.min_slack_squared)},
             {"s", to_json(report.min_slack_s)},
             {"t", to_json(report.min_slack_t)}};
  }
  return {
      {"grid", {{"points", report.grid_points}, {"refine", report.refine}}},
      {"pairs_checked", report.pairs_checked},
      {"violation_count", report.violation_count},
      {"violations", violations},
      {"min_slack", slack},
      {"passed", report.passed()},
  };
}

Json to_json(const ClassReport& report) {
  Json violations = Json::array();
  for (const auto& [s, t] : report.violations) violations.push_back({{"s", to_json(s)}, {"t", to_json(t)}});
  return {
      {"grid_points", report.grid_points},
      {"related_pairs", report.related_pairs},
      {"violation_count", report.violation_count},
      {"violations", violations},
      {"passed", report.passed()},
  };
}

Json to_json(const Verdict& verdict) {
  Json out = {{"kind", to_string(verdict.kind)}, {"reason", verdict.reason}};
  if (verdict.witness) {
    const auto& w = *verdict.witness;
    out["witness"] = {
        {"tree", to_json(*w.tree)}, {"path", to_json(w.path)},   {"map", to_json(w.map)},
        {"height", to_json(w.height)}, {"check", to_json(w.check)},
    };
  }
  if (verdict.winding_point) {
    out["winding_point"] = to_json(*verdict.winding_point);
    out["winding"] = verdict.winding;
  }
  return out;
}

Json to_json(const Check& check) {
  Json out = {{"name", check.name}, {"passed", check.passed}};
  if (check.n > 0) out["n"] = check.n;
  if (!check.detail.empty()) out["detail"] = check.detail;
  return out;
}

Json to_json(const Certificate& cert) {
  Json out = {{"n", cert.n}, {"side", cert.tilde ? "Et" : "E"}, {"passed", cert.passed()}};
  if (!cert.error.empty()) out["error"] = cert.error;
  if (cert.witness) {
    out["loop_breakpoints"] = cert.witness->path.size();
    out["height_breakpoints"] = cert.witness->height.size();
    out["check"] = to_json(cert.witness->check);
  }
  out["classes"] = to_json(cert.classes);
  return out;
}

Json to_json(const SuiteReport& report) {
  auto section = [](const std::vector<Check>& checks) {
    Json list = Json::array();
    bool ok = true;
    for (const auto& c : checks) {
      list.push_back(to_json(c));
      ok = ok && c.passed;
    }
    return Json{{"passed", ok}, {"checks", list}};
  };
  Json certs = Json::array();
  bool certs_ok = true;
  bool classes_ok = true;
  for (const auto& c : report.certificates) {
    certs.push_back(to_json(c));
    certs_ok = certs_ok && c.error.empty() && c.witness && c.witness->check.passed();
    classes_ok = classes_ok && c.classes.passed();
  }
  return {
      {"hypotheses", section(report.hypotheses)},
      {"gap_bound", section(report.gap_bound)},
      {"retraction", section(report.retraction)},
      {"isometry", section(report.isometry)},
      {"density", section(report.density)},
      {"counts", section(report.counts)},
      {"containment", section(report.containment)},
      {"certificates", {{"passed", certs_ok}, {"levels", certs}}},
      {"class_consistency", {{"passed", classes_ok}}},
      {"verdicts",
       {{"passed", report.verdicts_passed()},
        {"alpha_gamma", to_json(report.alpha_gamma)},
        {"beta_gamma", to_json(report.beta_gamma)},
        {"alpha_beta", to_json(report.alpha_beta)}}},
      {"passed", report.passed()},
  };
}

Dyadic dyadic_from_json(const Json& j) {
  return guarded("dyadic", [&] {
    if (j.is_number_integer()) return Dyadic(j.get<long long>());
    if (j.is_string()) return Dyadic::parse(j.get<std::string>());
    const auto& num = j.at("num");
    const auto& exp = j.at("exp");
    if (!num.is_string() || !is_integer_text(num.get<std::string>())) throw FormatError("num must be a decimal string");
    if (!exp.is_number_integer()) throw FormatError("exp must be an integer");
    return Dyadic(BigInt(num.get<std::string>()), exp.get<std::int64_t>());
  });
}

Quad quad_from_json(const Json& j) {
  if (j.is_object() && j.contains("rat")) return Quad(dyadic_from_json(j.at("rat")), dyadic_from_json(j.at("irr")));
  return Quad(dyadic_from_json(j));
}

Point2 point_from_json(const Json& j) {
  return guarded("point", [&] {
    if (j.is_array()) {
      if (j.size() != 2) throw FormatError("a point needs two coordinates");
      return Point2{dyadic_from_json(j[0]), dyadic_from_json(j[1])};
    }
    return Point2{dyadic_from_json(j.at("x")), dyadic_from_json(j.at("y"))};
  });
}

MetricTree tree_from_json(const Json& j) {
  return guarded("tree", [&] {
    VertexId root = vertex_from_json(j.at("root"));
    auto ids = vertices_from_json(j.at("vertices"));
    std::size_t bound = root + std::size_t{1};
    for (VertexId v : ids) bound = std::max<std::size_t>(bound, v + std::size_t{1});
    std::vector<bool> present(bound, false);
    for (VertexId v : ids) {
      if (present[v]) throw FormatError("duplicate vertex " + std::to_string(v));
      present[v] = true;
    }
    if (!present[root]) throw FormatError("root is not a vertex");
    std::vector<std::optional<MetricTree::ParentLink>> parents(bound);
    for (const auto& e : j.at("parents")) {
      VertexId v = vertex_from_json(e.at("vertex"));
      if (v >= bound || !present[v]) throw FormatError("edge at unknown vertex " + std::to_string(v));
      if (parents[v]) throw FormatError("vertex " + std::to_string(v) + " has two parents");
      parents[v] = MetricTree::ParentLink{vertex_from_json(e.at("parent")), quad_from_json(e.at("length"))};
    }
    return MetricTree::from_parents(root, parents, present);
  });
}

TreePath tree_path_from_json(const Json& j, std::shared_ptr<const MetricTree> tree) {
  return guarded("tree path", [&] {
    std::vector<TreePath::Breakpoint> bps;
    for (const auto& b : j.at("breakpoints")) bps.push_back({dyadic_from_json(b.at("param")), vertex_from_json(b.at("vertex"))});
    return TreePath(std::move(tree), std::move(bps));
  });
}

PlanarMap map_from_json(const Json& j, std::shared_ptr<const MetricTree> tree) {
  return guarded("planar map", [&] {
    std::vector<std::optional<Point2>> images(tree->id_bound());
    for (const auto& e : j.at("images")) {
      VertexId v = vertex_from_json(e.at("vertex"));
      if (!tree->contains(v)) throw FormatError("image for unknown vertex " + std::to_string(v));
      images[v] = point_from_json(e.at("point"));
    }
    return PlanarMap(std::move(tree), std::move(images), quad_from_json(j.at("lipschitz")));
  });
}

OrderedTriangle triangle_from_json(const Json& j) {
  return OrderedTriangle{point_from_json(j.at("a")), point_from_json(j.at("b")), point_from_json(j.at("c"))};
}

TowerLevel level_from_json(const Json& j) {
  return guarded("level", [&] {
    std::shared_ptr<const MetricTree> e = std::make_shared<MetricTree>(tree_from_json(j.at("E")));
    std::shared_ptr<const MetricTree> et = std::make_shared<MetricTree>(tree_from_json(j.at("Et")));
    std::vector<OrderedTriangle> triangles;
    for (const auto& t : j.at("triangles")) triangles.push_back(triangle_from_json(t));
    const auto& r = j.at("retraction");
    auto leaves = vertices_from_json(r.at("leaves"));
    auto leaves_t = vertices_from_json(r.at("leaves_t"));
    for (VertexId v : leaves) {
      if (!e->contains(v)) throw FormatError("retraction leaf " + std::to_string(v) + " is not in E");
    }
    for (VertexId v : leaves_t) {
      if (!et->contains(v)) throw FormatError("retraction leaf " + std::to_string(v) + " is not in Et");
    }
    const auto& n = j.at("n");
    if (!n.is_number_integer() || n.get<int>() < 1) throw FormatError("n must be a positive integer");
    return TowerLevel{
        .n = n.get<int>(),
        .tree = e,
        .tree_t = et,
        .path = tree_path_from_json(j.at("pi"), e),
        .path_t = tree_path_from_json(j.at("pit"), et),
        .map = map_from_json(j.at("g"), e),
        .map_t = map_from_json(j.at("gt"), et),
        .triangles = std::move(triangles),
        .new_leaves = std::move(leaves),
        .new_leaves_t = std::move(leaves_t),
    };
  });
}

HeightFunction height_from_json(const Json& j) {
  return guarded("height function", [&] {
    std::vector<HeightFunction::Breakpoint> bps;
    for (const auto& b : j.at("breakpoints")) bps.push_back({dyadic_from_json(b.at("param")), quad_from_json(b.at("value"))});
    return HeightFunction(std::move(bps));
  });
}

PlanePath plane_path_from_json(const Json& j) {
  return guarded("loop", [&] {
    std::vector<PlanePath::Breakpoint> bps;
    if (j.contains("breakpoints")) {
      for (const auto& b : j.at("breakpoints")) bps.push_back({dyadic_from_json(b.at("param")), point_from_json(b.at("point"))});
      return PlanePath(std::move(bps));
    }
    const auto& pts = j.at("points");
    if (pts.size() < 2) throw FormatError("a loop needs at least two points");
    const std::size_t segments = pts.size() - 1;
    std::int64_t k = 0;
    while ((std::size_t{1} << k) < segments) ++k;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      Dyadic t = i == segments ? Dyadic(1) : Dyadic(static_cast<long long>(i)).scaled(-k);
      bps.push_back({t, point_from_json(pts[i])});
    }
    return PlanePath(std::move(bps));
  });
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

Json state_to_json(const std::vector<TowerLevel>& levels) {
  Json js = Json::array();
  Json meta = Json::array();
  for (const auto& level : levels) {
    js.push_back(to_json(level));
    meta.push_back({
        {"n", level.n},
        {"pi_breakpoints", level.path.size()},
        {"pit_breakpoints", level.path_t.size()},
        {"E_edges", level.tree->edge_count()},
        {"Et_edges", level.tree_t->edge_count()},
        {"triangles", level.triangles.size()},
    });
  }
  std::string digest = sha256_hex(js.dump());
  return {
      {"format_version", kStateFormatVersion},
      {"levels", std::move(js)},
      {"metadata", {{"level_count", levels.size()}, {"levels", std::move(meta)}}},
      {"digest", digest},
  };
}

std::string dump_state(const std::vector<TowerLevel>& levels) { return state_to_json(levels).dump(1) + "\n"; }

StateFile state_from_json(const Json& j) {
  return guarded("state", [&] {
    if (!j.is_object()) throw FormatError("expected an object");
    const auto& version = j.at("format_version");
    if (!version.is_number_integer() || version.get<int>() != kStateFormatVersion) {
      throw FormatError("unsupported format_version " + version.dump());
    }
    StateFile out;
    const auto& levels = j.at("levels");
    if (!levels.is_array() || levels.empty()) throw FormatError("levels must be a nonempty array");
    for (const auto& lj : levels) {
      out.levels.push_back(level_from_json(lj));
      if (out.levels.back().n != static_cast<int>(out.levels.size())) throw FormatError("levels must be numbered 1, 2, ...");
    }
    const auto& digest = j.at("digest");
    if (!digest.is_string()) throw FormatError("digest must be a string");
    out.digest = digest.get<std::string>();
    out.computed = sha256_hex(levels.dump());
    return out;
  });
}

StateFile load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  Json j;
  try {
    j = Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
  return state_from_json(j);
}

}  // namespace treelike
