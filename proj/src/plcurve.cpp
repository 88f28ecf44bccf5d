#include "treelike/plcurve.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace treelike {

Point2 operator+(const Point2& p, const Point2& q) { return {p.x + q.x, p.y + q.y}; }
Point2 operator-(const Point2& p, const Point2& q) { return {p.x - q.x, p.y - q.y}; }
Point2 scale(const Point2& p, const Dyadic& k) { return {p.x * k, p.y * k}; }
Point2 midpoint(const Point2& p, const Point2& q) { return {midpoint(p.x, q.x), midpoint(p.y, q.y)}; }
Dyadic dot(const Point2& p, const Point2& q) { return p.x * q.x + p.y * q.y; }
Dyadic cross(const Point2& p, const Point2& q) { return p.x * q.y - p.y * q.x; }

Dyadic squared_distance(const Point2& p, const Point2& q) {
  Point2 d = p - q;
  return dot(d, d);
}

int orientation(const Point2& o, const Point2& a, const Point2& b) { return cross(a - o, b - o).sign(); }

bool on_segment(const Point2& p, const Point2& a, const Point2& b) {
  if (orientation(a, b, p) != 0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

namespace {

template <typename Breakpoint>
void check_params(const std::vector<Breakpoint>& bps, const char* what) {
  if (bps.size() < 2) throw std::invalid_argument(std::string(what) + ": needs at least two breakpoints");
  if (!bps.front().param.is_zero() || bps.back().param != Dyadic(1)) {
    throw std::invalid_argument(std::string(what) + ": parameters must run from 0 to 1");
  }
  for (std::size_t i = 1; i < bps.size(); ++i) {
    if (!(bps[i - 1].param < bps[i].param)) {
      throw std::invalid_argument(std::string(what) + ": parameters must be strictly increasing at index " +
                                  std::to_string(i));
    }
  }
}

// Index k of the segment [p_k, p_{k+1}] holding t, or of the breakpoint equal to t.
template <typename Breakpoint>
std::pair<std::size_t, bool> locate(const std::vector<Breakpoint>& bps, const Dyadic& t) {
  if (t.sign() < 0 || t > Dyadic(1)) throw std::out_of_range("parameter " + t.to_string() + " outside [0, 1]");
  auto it = std::upper_bound(bps.begin(), bps.end(), t, [](const Dyadic& v, const Breakpoint& b) { return v < b.param; });
  auto k = static_cast<std::size_t>(it - bps.begin()) - 1;
  return {k, bps[k].param == t};
}

Dyadic segment_fraction(const Dyadic& t, const Dyadic& t0, const Dyadic& t1) {
  auto phi = divide_exact(t - t0, t1 - t0);
  if (!phi) throw std::domain_error("interpolation at " + t.to_string() + " leaves the dyadic rationals");
  return *phi;
}

template <typename Breakpoint, typename Path>
std::vector<Breakpoint> concat_reverse(const std::vector<Breakpoint>& first, const std::vector<Breakpoint>& second) {
  std::vector<Breakpoint> out;
  out.reserve(first.size() + second.size() - 1);
  for (const auto& b : first) {
    Breakpoint c = b;
    c.param = b.param.half();
    out.push_back(std::move(c));
  }
  for (std::size_t i = second.size() - 1; i-- > 0;) {
    Breakpoint c = second[i];
    c.param = Dyadic(1) - second[i].param.half();
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

TreePath::TreePath(std::shared_ptr<const MetricTree> tree, std::vector<Breakpoint> breakpoints)
    : tree_(std::move(tree)), breakpoints_(std::move(breakpoints)) {
  check_params(breakpoints_, "TreePath");
  for (const auto& b : breakpoints_) {
    if (!tree_->contains(b.vertex)) throw std::invalid_argument("TreePath: unknown vertex " + std::to_string(b.vertex));
  }
}

TreeLocation TreePath::eval(const Dyadic& t) const {
  auto [k, exact] = locate(breakpoints_, t);
  if (exact) return {breakpoints_[k].vertex, Quad()};
  const auto& b0 = breakpoints_[k];
  const auto& b1 = breakpoints_[k + 1];
  Dyadic phi = segment_fraction(t, b0.param, b1.param);
  Quad along = tree_->distance(b0.vertex, b1.vertex) * Quad(phi);
  return tree_->point_on_arc(b0.vertex, b1.vertex, along);
}

bool TreePath::is_simplicial() const {
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    VertexId u = breakpoints_[i - 1].vertex;
    VertexId v = breakpoints_[i].vertex;
    if (u != v && !tree_->adjacent(u, v)) return false;
  }
  return true;
}

TreePath TreePath::refined() const {
  std::vector<Breakpoint> out;
  out.push_back(breakpoints_.front());
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    const auto& b0 = breakpoints_[i - 1];
    const auto& b1 = breakpoints_[i];
    if (b0.vertex != b1.vertex && !tree_->adjacent(b0.vertex, b1.vertex)) {
      auto arc = tree_->arc(b0.vertex, b1.vertex);
      Quad total = tree_->distance(b0.vertex, b1.vertex);
      Dyadic width = b1.param - b0.param;
      for (std::size_t j = 1; j + 1 < arc.size(); ++j) {
        auto phi = quad_ratio(tree_->distance(b0.vertex, arc[j]), total);
        if (!phi) throw std::domain_error("refined breakpoint leaves the dyadic rationals");
        out.push_back({b0.param + width * *phi, arc[j]});
      }
    }
    out.push_back(b1);
  }
  return TreePath(tree_, std::move(out));
}

TreePath TreePath::in_tree(std::shared_ptr<const MetricTree> tree) const { return TreePath(std::move(tree), breakpoints_); }

TreePath TreePath::reversed() const {
  std::vector<Breakpoint> out(breakpoints_.rbegin(), breakpoints_.rend());
  for (auto& b : out) b.param = Dyadic(1) - b.param;
  return TreePath(tree_, std::move(out));
}

PlanePath::PlanePath(std::vector<Breakpoint> breakpoints) : breakpoints_(std::move(breakpoints)) {
  check_params(breakpoints_, "PlanePath");
}

Point2 PlanePath::eval(const Dyadic& t) const {
  auto [k, exact] = locate(breakpoints_, t);
  if (exact) return breakpoints_[k].point;
  const auto& b0 = breakpoints_[k];
  const auto& b1 = breakpoints_[k + 1];
  Dyadic phi = segment_fraction(t, b0.param, b1.param);
  return b0.point + scale(b1.point - b0.point, phi);
}

PlanePath PlanePath::reversed() const {
  std::vector<Breakpoint> out(breakpoints_.rbegin(), breakpoints_.rend());
  for (auto& b : out) b.param = Dyadic(1) - b.param;
  return PlanePath(std::move(out));
}

PlanarMap::PlanarMap(std::shared_ptr<const MetricTree> tree, std::vector<std::optional<Point2>> images, Quad lipschitz)
    : tree_(std::move(tree)), images_(std::move(images)), lipschitz_(std::move(lipschitz)) {
  if (lipschitz_.sign() <= 0) throw std::invalid_argument("PlanarMap: Lipschitz constant must be positive");
  if (images_.size() < tree_->id_bound()) images_.resize(tree_->id_bound());
  for (VertexId v : tree_->vertices()) {
    if (!images_[v]) throw std::invalid_argument("PlanarMap: vertex " + std::to_string(v) + " has no image");
  }
}

const Point2& PlanarMap::image(VertexId v) const {
  if (!tree_->contains(v) || v >= images_.size() || !images_[v]) {
    throw std::invalid_argument("PlanarMap: no image for vertex " + std::to_string(v));
  }
  return *images_[v];
}

Point2 PlanarMap::image(const TreeLocation& p) const {
  tree_->validate(p);
  if (p.offset.is_zero()) return image(p.vertex);
  VertexId up = *tree_->parent(p.vertex);
  auto phi = quad_ratio(p.offset, tree_->edge_length(p.vertex));
  if (!phi) throw std::domain_error("PlanarMap: location is not a dyadic fraction of its edge");
  const Point2& a = image(p.vertex);
  return a + scale(image(up) - a, *phi);
}

std::vector<VertexId> PlanarMap::lipschitz_violations() const {
  std::vector<VertexId> out;
  for (VertexId v : tree_->vertices()) {
    if (v == tree_->root()) continue;
    Dyadic sq = squared_distance(image(v), image(*tree_->parent(v)));
    if (cmp_sqrt_vs_quad(sq, lipschitz_ * tree_->edge_length(v)) > 0) out.push_back(v);
  }
  return out;
}

std::vector<VertexId> PlanarMap::non_isometric_edges() const {
  std::vector<VertexId> out;
  for (VertexId v : tree_->vertices()) {
    if (v == tree_->root()) continue;
    Dyadic sq = squared_distance(image(v), image(*tree_->parent(v)));
    if (cmp_sqrt_vs_quad(sq, tree_->edge_length(v)) != 0) out.push_back(v);
  }
  return out;
}

PlanePath map_path(const TreePath& path, const PlanarMap& g) {
  if (path.tree_ptr() != g.tree_ptr() && !(path.tree() == g.tree())) {
    throw std::invalid_argument("map_path: path and map live on different trees");
  }
  TreePath fine = path.is_simplicial() ? path : path.refined();
  std::vector<PlanePath::Breakpoint> out;
  out.reserve(fine.size());
  for (const auto& b : fine.breakpoints()) out.push_back({b.param, g.image(b.vertex)});
  return PlanePath(std::move(out));
}

TreePath loop_concat_reverse(const TreePath& first, const TreePath& second) {
  if (first.tree_ptr() != second.tree_ptr() && !(first.tree() == second.tree())) {
    throw std::invalid_argument("loop_concat_reverse: paths live on different trees");
  }
  if (first.end() != second.end()) throw std::invalid_argument("loop_concat_reverse: endpoints differ");
  return TreePath(first.tree_ptr(), concat_reverse<TreePath::Breakpoint, TreePath>(first.breakpoints(), second.breakpoints()));
}

PlanePath loop_concat_reverse(const PlanePath& first, const PlanePath& second) {
  if (first.end() != second.end()) throw std::invalid_argument("loop_concat_reverse: endpoints differ");
  return PlanePath(concat_reverse<PlanePath::Breakpoint, PlanePath>(first.breakpoints(), second.breakpoints()));
}

SupDistance sup_distance(const PlanePath& p, const PlanePath& q, const std::optional<Quad>& bound) {
  std::vector<Dyadic> params;
  params.reserve(p.size() + q.size());
  for (const auto& b : p.breakpoints()) params.push_back(b.param);
  for (const auto& b : q.breakpoints()) params.push_back(b.param);
  std::sort(params.begin(), params.end());
  params.erase(std::unique(params.begin(), params.end()), params.end());

  SupDistance out;
  for (const auto& t : params) {
    Dyadic d = squared_distance(p.eval(t), q.eval(t));
    if (d > out.squared) {
      out.squared = std::move(d);
      out.attained_at = t;
    }
  }
  if (bound) out.within_bound = cmp_sqrt_vs_quad(out.squared, *bound) <= 0;
  return out;
}

std::optional<Quad> segment_length(const Point2& a, const Point2& b) {
  Dyadic dx = abs(b.x - a.x);
  Dyadic dy = abs(b.y - a.y);
  if (dx.is_zero()) return Quad(dy);
  if (dy.is_zero()) return Quad(dx);
  if (dx == dy) return Quad(Dyadic(0), dx);
  return std::nullopt;
}

Quad path_length(const PlanePath& p) {
  Quad total;
  const auto& bps = p.breakpoints();
  for (std::size_t i = 1; i < bps.size(); ++i) {
    auto len = segment_length(bps[i - 1].point, bps[i].point);
    if (!len) {
      throw std::domain_error("path_length: segment " + std::to_string(i) + " is neither axis-parallel nor diagonal");
    }
    total += *len;
  }
  return total;
}

bool OrderedTriangle::is_isosceles_right() const {
  Dyadic leg = squared_distance(a, b);
  return leg.sign() > 0 && dot(a - b, c - b).is_zero() && leg == squared_distance(c, b);
}

bool OrderedTriangle::contains(const Point2& p) const {
  int s = orientation(a, b, c);
  if (s == 0) throw std::invalid_argument("degenerate triangle");
  for (auto [u, v] : {std::pair{&a, &b}, {&b, &c}, {&c, &a}}) {
    int o = orientation(*u, *v, p);
    if (o != 0 && o != s) return false;
  }
  return true;
}

bool density_check(std::span<const Point2> samples, const OrderedTriangle& triangle, const Quad& radius,
                   unsigned grid) {
  if (radius.sign() <= 0) throw std::invalid_argument("density_check: radius must be positive");
  if (grid < 1) throw std::invalid_argument("density_check: grid must be at least 1");

  // Bucket samples into square cells of side 2^-k >= radius; any sample
  // within `radius` of a point then sits in one of the 3x3 surrounding cells.
  std::int64_t k = 0;
  while (Quad(Dyadic::pow2(-k)) < radius) --k;
  while (Quad(Dyadic::pow2(-(k + 1))) >= radius) ++k;
  using Cell = std::pair<BigInt, BigInt>;
  std::map<Cell, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    buckets[{samples[i].x.floor_scaled(k), samples[i].y.floor_scaled(k)}].push_back(i);
  }

  const auto g = static_cast<std::int64_t>(grid);
  auto lo = [&](auto get) {
    Dyadic m = std::min({get(triangle.a), get(triangle.b), get(triangle.c)});
    return BigInt(-((-m).floor_scaled(g)));  // ceil
  };
  auto hi = [&](auto get) {
    return std::max({get(triangle.a), get(triangle.b), get(triangle.c)}).floor_scaled(g);
  };
  auto gx = [](const Point2& p) { return p.x; };
  auto gy = [](const Point2& p) { return p.y; };

  for (BigInt ix = lo(gx); ix <= hi(gx); ++ix) {
    for (BigInt iy = lo(gy); iy <= hi(gy); ++iy) {
      Point2 p{Dyadic(ix, g), Dyadic(iy, g)};
      if (!triangle.contains(p)) continue;
      BigInt cx = p.x.floor_scaled(k);
      BigInt cy = p.y.floor_scaled(k);
      bool covered = false;
      for (int dx = -1; dx <= 1 && !covered; ++dx) {
        for (int dy = -1; dy <= 1 && !covered; ++dy) {
          auto it = buckets.find({cx + dx, cy + dy});
          if (it == buckets.end()) continue;
          for (std::size_t i : it->second) {
            if (cmp_sqrt_vs_quad(squared_distance(p, samples[i]), radius) <= 0) {
              covered = true;
              break;
            }
          }
        }
      }
      if (!covered) return false;
    }
  }
  return true;
}

}  // namespace treelike
