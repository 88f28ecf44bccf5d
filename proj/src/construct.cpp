#include "treelike/construct.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace treelike {

namespace {

std::string str(const Point2& p) { return "(" + p.x.to_string() + ", " + p.y.to_string() + ")"; }

std::optional<VertexId> vertex_at_param(const TreePath& path, const Dyadic& t) {
  return path.tree().vertex_at(path.eval(t));
}

// Every vertex crossed by `path` on [r, s], with its parameter; nullopt
// unless path(r) and path(s) are vertices.
std::optional<std::vector<TreePath::Breakpoint>> walk(const TreePath& path, const Dyadic& r, const Dyadic& s) {
  auto vr = vertex_at_param(path, r);
  auto vs = vertex_at_param(path, s);
  if (!vr || !vs) return std::nullopt;
  std::vector<TreePath::Breakpoint> coarse{{r, *vr}};
  const auto& bps = path.breakpoints();
  auto it = std::upper_bound(bps.begin(), bps.end(), r, [](const Dyadic& v, const auto& b) { return v < b.param; });
  for (; it != bps.end() && it->param < s; ++it) coarse.push_back(*it);
  coarse.push_back({s, *vs});

  const MetricTree& tree = path.tree();
  std::vector<TreePath::Breakpoint> out{coarse.front()};
  for (std::size_t i = 1; i < coarse.size(); ++i) {
    const auto& b0 = coarse[i - 1];
    const auto& b1 = coarse[i];
    if (b0.vertex != b1.vertex && !tree.adjacent(b0.vertex, b1.vertex)) {
      auto arc = tree.arc(b0.vertex, b1.vertex);
      Quad total = tree.distance(b0.vertex, b1.vertex);
      for (std::size_t j = 1; j + 1 < arc.size(); ++j) {
        auto phi = quad_ratio(tree.distance(b0.vertex, arc[j]), total);
        if (!phi) throw std::domain_error("walk: crossing parameter leaves the dyadic rationals");
        out.push_back({b0.param + (b1.param - b0.param) * *phi, arc[j]});
      }
    }
    out.push_back(b1);
  }
  return out;
}

bool injective(const std::vector<TreePath::Breakpoint>& w) {
  std::vector<VertexId> ids;
  ids.reserve(w.size());
  for (const auto& b : w) ids.push_back(b.vertex);
  std::sort(ids.begin(), ids.end());
  return std::adjacent_find(ids.begin(), ids.end()) == ids.end();
}

// Images of walk entries in [lo, hi] lie on from -> to at the matching fraction.
bool linear_on(const std::vector<TreePath::Breakpoint>& w, const PlanarMap& g, const Dyadic& lo, const Dyadic& hi,
               const Point2& from, const Point2& to, std::string& witness) {
  for (const auto& b : w) {
    if (b.param < lo || b.param > hi) continue;
    auto phi = divide_exact(b.param - lo, hi - lo);
    Point2 expect = from + scale(to - from, *phi);
    if (g.image(b.vertex) != expect) {
      witness = "image at t=" + b.param.to_string() + " is " + str(g.image(b.vertex)) + ", linear would be " +
                str(expect);
      return false;
    }
  }
  return true;
}

}  // namespace

std::pair<Dyadic, Dyadic> TowerLevel::interval(std::size_t i) const {
  const auto e = static_cast<std::int64_t>(2 * (n - 1));
  return {Dyadic(static_cast<long long>(i - 1), e), Dyadic(static_cast<long long>(i), e)};
}

TowerLevel init_level1() {
  const Point2 a{0, 0};
  const Point2 b{0, 1};
  const Point2 c{1, 1};

  auto e = std::make_shared<MetricTree>();
  VertexId v0 = e->root();
  VertexId vh = e->attach_leaf(v0, Quad(1));
  VertexId v1 = e->attach_leaf(vh, Quad(1));

  auto et = std::make_shared<MetricTree>();
  VertexId w0 = et->root();
  VertexId w1 = et->attach_leaf(w0, Quad::sqrt2());

  std::vector<std::optional<Point2>> img(3);
  img[v0] = a;
  img[vh] = b;
  img[v1] = c;
  std::vector<std::optional<Point2>> img_t(2);
  img_t[w0] = a;
  img_t[w1] = c;

  std::shared_ptr<const MetricTree> ec = e;
  std::shared_ptr<const MetricTree> etc = et;
  return TowerLevel{
      .n = 1,
      .tree = ec,
      .tree_t = etc,
      .path = TreePath(ec, {{Dyadic(0), v0}, {Dyadic(1, 1), vh}, {Dyadic(1), v1}}),
      .path_t = TreePath(etc, {{Dyadic(0), w0}, {Dyadic(1), w1}}),
      .map = PlanarMap(ec, std::move(img)),
      .map_t = PlanarMap(etc, std::move(img_t)),
      .triangles = {OrderedTriangle{a, b, c}},
      .new_leaves = {},
      .new_leaves_t = {},
  };
}

ParameterizationReport check_parameterization(const TowerLevel& level, std::size_t i) {
  if (i < 1 || i > level.triangles.size()) throw std::out_of_range("triangle index out of range");
  ParameterizationReport rep;
  const OrderedTriangle& tri = level.triangles[i - 1];
  auto [r, s] = level.interval(i);
  Dyadic mid = midpoint(r, s);
  auto fail = [&](bool& flag, std::string why) {
    flag = false;
    rep.witnesses.push_back("interval " + std::to_string(i) + ": " + std::move(why));
  };

  auto w = walk(level.path, r, s);
  auto wt = walk(level.path_t, r, s);
  auto vm = vertex_at_param(level.path, mid);
  if (!w) fail(rep.injective, "path(r) or path(s) is not a vertex");
  if (!wt) fail(rep.injective, "tilde path(r) or tilde path(s) is not a vertex");
  if (!vm) fail(rep.injective, "path at the midpoint is not a vertex");
  if (!rep.injective) return rep;
  if (!injective(*w)) fail(rep.injective, "path is not injective on [" + r.to_string() + ", " + s.to_string() + "]");
  if (!injective(*wt)) fail(rep.injective, "tilde path is not injective");

  auto expect = [&](const Point2& got, const Point2& want, const char* what) {
    if (got != want) fail(rep.endpoints, std::string(what) + " maps to " + str(got) + ", expected " + str(want));
  };
  expect(level.map.image(w->front().vertex), tri.a, "path(r)");
  expect(level.map_t.image(wt->front().vertex), tri.a, "tilde path(r)");
  expect(level.map.image(*vm), tri.b, "path(mid)");
  expect(level.map.image(w->back().vertex), tri.c, "path(s)");
  expect(level.map_t.image(wt->back().vertex), tri.c, "tilde path(s)");

  std::string why;
  if (!linear_on(*w, level.map, r, mid, tri.a, tri.b, why)) fail(rep.linear, "first leg: " + why);
  if (!linear_on(*w, level.map, mid, s, tri.b, tri.c, why)) fail(rep.linear, "second leg: " + why);
  if (!linear_on(*wt, level.map_t, r, s, tri.a, tri.c, why)) fail(rep.linear, "hypotenuse: " + why);
  return rep;
}

SubdivisionStep::SubdivisionStep(const TowerLevel& source)
    : source_(source), tree_(*source.tree), tree_t_(*source.tree_t), images_(source.map.images()),
      images_t_(source.map_t.images()) {
  path_.reserve(8 * source.triangles.size() + 1);
  path_t_.reserve(4 * source.triangles.size() + 1);
  triangles_.reserve(4 * source.triangles.size());
}

VertexId SubdivisionStep::midpoint_vertex(MetricTree& tree, std::vector<std::optional<Point2>>& images, VertexId u,
                                          VertexId v, const Point2& image) {
  TreeLocation loc = tree.point_on_arc(u, v, tree.distance(u, v).half());
  VertexId id;
  if (auto existing = tree.vertex_at(loc)) {
    id = *existing;
  } else {
    auto phi = quad_ratio(loc.offset, tree.edge_length(loc.vertex));
    id = tree.subdivide_edge(loc.vertex, *phi);
  }
  if (images.size() <= id) images.resize(id + 1);
  if (images[id] && *images[id] != image) {
    throw std::logic_error("midpoint vertex " + std::to_string(id) + " already maps to " + str(*images[id]));
  }
  images[id] = image;
  return id;
}

void SubdivisionStep::subdivide_interval(std::size_t i) {
  if (i != next_) throw std::invalid_argument("intervals must be subdivided in order");
  auto rep = check_parameterization(source_, i);
  if (!rep.ok()) {
    std::ostringstream msg;
    msg << "maps do not parametrize triangle " << i << ":";
    for (const auto& w : rep.witnesses) msg << " " << w << ";";
    throw std::invalid_argument(msg.str());
  }
  const OrderedTriangle& tri = source_.triangles[i - 1];
  auto [r, s] = source_.interval(i);
  const Point2 d = midpoint(tri.a, tri.b);
  const Point2 e = midpoint(tri.b, tri.c);
  const Point2 f = midpoint(tri.a, tri.c);

  VertexId vr = *vertex_at_param(source_.path, r);
  VertexId vm = *vertex_at_param(source_.path, midpoint(r, s));
  VertexId vs = *vertex_at_param(source_.path, s);
  Quad leg = tree_.distance(vr, vm).half();
  VertexId u1 = midpoint_vertex(tree_, images_, vr, vm, d);
  VertexId w1 = tree_.attach_leaf(u1, leg);
  VertexId u2 = midpoint_vertex(tree_, images_, vm, vs, e);
  VertexId w2 = tree_.attach_leaf(u2, leg);
  images_.resize(std::max<std::size_t>(images_.size(), w2 + 1));
  images_[w1] = f;
  images_[w2] = f;
  leaves_.push_back(w1);
  leaves_.push_back(w2);

  VertexId tr = *vertex_at_param(source_.path_t, r);
  VertexId ts = *vertex_at_param(source_.path_t, s);
  Quad hyp = tree_t_.distance(tr, ts).half();
  VertexId tu = midpoint_vertex(tree_t_, images_t_, tr, ts, f);
  VertexId tw = tree_t_.attach_leaf(tu, hyp);
  images_t_.resize(std::max<std::size_t>(images_t_.size(), tw + 1));
  images_t_[tw] = tri.b;
  leaves_t_.push_back(tw);

  auto at = [&](int k) { return (r * Dyadic(8 - k) + s * Dyadic(k)).scaled(-3); };
  for (auto [k, v] : {std::pair{0, vr}, {1, u1}, {2, w1}, {3, u1}, {4, vm}, {5, u2}, {6, w2}, {7, u2}}) {
    path_.push_back({at(k), v});
  }
  for (auto [k, v] : {std::pair{0, tr}, {2, tu}, {4, tw}, {6, tu}}) path_t_.push_back({at(k), v});

  triangles_.push_back({tri.a, d, f});
  triangles_.push_back({f, d, tri.b});
  triangles_.push_back({tri.b, e, f});
  triangles_.push_back({f, e, tri.c});
  ++next_;
}

TowerLevel SubdivisionStep::finish() && {
  if (next_ != source_.triangles.size() + 1) throw std::logic_error("not every interval was subdivided");
  path_.push_back({Dyadic(1), source_.path.end()});
  path_t_.push_back({Dyadic(1), source_.path_t.end()});
  tree_.refresh();
  tree_t_.refresh();
  std::shared_ptr<const MetricTree> e = std::make_shared<MetricTree>(std::move(tree_));
  std::shared_ptr<const MetricTree> et = std::make_shared<MetricTree>(std::move(tree_t_));
  return TowerLevel{
      .n = source_.n + 1,
      .tree = e,
      .tree_t = et,
      .path = TreePath(e, std::move(path_)),
      .path_t = TreePath(et, std::move(path_t_)),
      .map = PlanarMap(e, std::move(images_)),
      .map_t = PlanarMap(et, std::move(images_t_)),
      .triangles = std::move(triangles_),
      .new_leaves = std::move(leaves_),
      .new_leaves_t = std::move(leaves_t_),
  };
}

TowerLevel subdivide_level(const TowerLevel& level) {
  SubdivisionStep step(level);
  for (std::size_t i = 1; i <= level.triangles.size(); ++i) step.subdivide_interval(i);
  return std::move(step).finish();
}

std::vector<TowerLevel> build_tower(int levels) {
  if (levels < 1) throw std::invalid_argument("build_tower: need at least one level");
  std::vector<TowerLevel> out;
  out.reserve(static_cast<std::size_t>(levels));
  out.push_back(init_level1());
  while (static_cast<int>(out.size()) < levels) out.push_back(subdivide_level(out.back()));
  return out;
}

}  // namespace treelike
