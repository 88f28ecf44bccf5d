#include "treelike/decide.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace treelike {

namespace {

using Breakpoints = std::vector<PlanePath::Breakpoint>;

std::string str(const Point2& p) { return "(" + p.x.to_string() + ", " + p.y.to_string() + ")"; }

// Splits every segment at the loop vertices lying strictly inside it.
Breakpoints split_at_vertices(const Breakpoints& bps) {
  std::vector<Point2> vertices;
  for (const auto& b : bps) vertices.push_back(b.point);
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());

  Breakpoints out{bps.front()};
  for (std::size_t k = 1; k < bps.size(); ++k) {
    const auto& [t0, a] = bps[k - 1];
    const auto& [t1, b] = bps[k];
    if (a != b) {
      std::vector<std::pair<Dyadic, Point2>> inside;
      for (const Point2& q : vertices) {
        if (q == a || q == b || !on_segment(q, a, b)) continue;
        auto phi = a.x != b.x ? divide_exact(q.x - a.x, b.x - a.x) : divide_exact(q.y - a.y, b.y - a.y);
        if (!phi) {
          throw std::invalid_argument("vertex " + str(q) + " splits a segment at a non-dyadic parameter");
        }
        inside.emplace_back(*phi, q);
      }
      std::sort(inside.begin(), inside.end());
      for (auto& [phi, q] : inside) out.push_back({t0 + (t1 - t0) * phi, q});
    }
    out.push_back(bps[k]);
  }
  return out;
}

void reject_crossings(const Breakpoints& bps) {
  for (std::size_t i = 1; i < bps.size(); ++i) {
    const Point2& a = bps[i - 1].point;
    const Point2& b = bps[i].point;
    if (a == b) continue;
    for (std::size_t j = i + 1; j < bps.size(); ++j) {
      const Point2& c = bps[j - 1].point;
      const Point2& d = bps[j].point;
      if (c == d) continue;
      if (orientation(a, b, c) * orientation(a, b, d) < 0 && orientation(c, d, a) * orientation(c, d, b) < 0) {
        throw std::invalid_argument("segments " + std::to_string(i) + " and " + std::to_string(j) +
                                    " cross at an interior point");
      }
    }
  }
}

// Vertices of the loop with repeated consecutive points dropped; closed (front == back).
std::vector<Point2> cleaned_cycle(const Breakpoints& bps) {
  std::vector<Point2> pts;
  for (const auto& b : bps) {
    if (pts.empty() || pts.back() != b.point) pts.push_back(b.point);
  }
  return pts;
}

bool is_simple_closed(const std::vector<Point2>& cycle) {
  if (cycle.size() < 4) return false;  // at least three distinct corners plus closure
  std::vector<Point2> corners(cycle.begin(), cycle.end() - 1);
  std::sort(corners.begin(), corners.end());
  return std::adjacent_find(corners.begin(), corners.end()) == corners.end();
}

Point2 interior_witness(const PlanePath& loop, const std::vector<Point2>& cycle, int& winding) {
  // the lowest, then leftmost, corner of a simple polygon is strictly convex;
  // points just inside along the bisector of its two edges are interior
  const std::size_t m = cycle.size() - 1;
  std::size_t k = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (std::tie(cycle[i].y, cycle[i].x) < std::tie(cycle[k].y, cycle[k].x)) k = i;
  }
  const Point2& v = cycle[k];
  Point2 dir = (cycle[(k + m - 1) % m] - v) + (cycle[(k + 1) % m] - v);
  for (std::int64_t e = 1; e <= 256; ++e) {
    Point2 p = v + scale(dir, Dyadic::pow2(-e));
    try {
      winding = winding_number(loop, p);
    } catch (const std::invalid_argument&) {
      continue;  // on the loop
    }
    if (winding != 0) return p;
  }
  throw std::logic_error("no interior point found near a convex corner");
}

}  // namespace

const char* to_string(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::kTreeLike: return "TreeLike";
    case Verdict::Kind::kNotTreeLike: return "NotTreeLike";
    case Verdict::Kind::kInconclusive: return "Inconclusive";
  }
  return "?";
}

int winding_number(const PlanePath& loop, const Point2& p) {
  const auto& bps = loop.breakpoints();
  int w = 0;
  for (std::size_t i = 1; i < bps.size(); ++i) {
    const Point2& a = bps[i - 1].point;
    const Point2& b = bps[i].point;
    if (on_segment(p, a, b)) throw std::invalid_argument("winding_number: point " + str(p) + " lies on the loop");
    if (a.y <= p.y) {
      if (b.y > p.y && orientation(a, b, p) > 0) ++w;
    } else if (b.y <= p.y && orientation(a, b, p) < 0) {
      --w;
    }
  }
  return w;
}

Verdict decide_polygonal_loop(const PlanePath& loop) {
  if (loop.start() != loop.end()) throw std::invalid_argument("decide_polygonal_loop: path is not a loop");
  const Breakpoints bps = split_at_vertices(loop.breakpoints());
  reject_crossings(bps);

  Verdict out;
  const auto cycle = cleaned_cycle(bps);
  if (is_simple_closed(cycle)) {
    out.kind = Verdict::Kind::kNotTreeLike;
    out.reason = "simple closed curve";
    out.winding_point = interior_witness(loop, cycle, out.winding);
    return out;
  }

  // Free reduction of the edge word; every push grows the reduction tree by
  // one edge, every cancellation walks back to the parent.
  auto tree = std::make_shared<MetricTree>();
  std::vector<std::optional<Point2>> images{bps.front().point};
  std::vector<VertexId> stack{tree->root()};
  std::vector<TreePath::Breakpoint> path{{bps.front().param, tree->root()}};
  for (std::size_t k = 1; k < bps.size(); ++k) {
    const Point2& a = bps[k - 1].point;
    const Point2& b = bps[k].point;
    if (a != b) {
      if (stack.size() > 1 && *images[stack[stack.size() - 2]] == b) {
        stack.pop_back();
      } else {
        Quad len;
        if (auto exact = segment_length(a, b)) {
          len = *exact;
        } else {
          len = Quad(abs(b.x - a.x) + abs(b.y - a.y));  // l1 length, still >= euclidean
        }
        VertexId v = tree->attach_leaf(stack.back(), len);
        images.resize(v + 1);
        images[v] = b;
        stack.push_back(v);
      }
    }
    path.push_back({bps[k].param, stack.back()});
  }
  if (stack.size() > 1) {
    out.kind = Verdict::Kind::kInconclusive;
    out.reason = "edge word does not reduce to the empty word";
    return out;
  }

  std::shared_ptr<const MetricTree> shared = tree;
  TreePath tree_path(shared, std::move(path));
  PlanarMap map(shared, std::move(images));
  HeightFunction h = height_from_tree_path(tree_path, Quad(1));
  HeightReport check = verify_height_function(loop, h, 0);
  out.kind = Verdict::Kind::kTreeLike;
  out.reason = "edge word reduces to the empty word";
  out.witness = TreeWitness{shared, std::move(tree_path), std::move(map), std::move(h), std::move(check)};
  return out;
}

}  // namespace treelike
