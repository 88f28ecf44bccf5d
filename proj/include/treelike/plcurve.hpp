#ifndef TREELIKE_PLCURVE_HPP
#define TREELIKE_PLCURVE_HPP

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "treelike/exactnum.hpp"
#include "treelike/mtree.hpp"

namespace treelike {

struct Point2 {
  Dyadic x;
  Dyadic y;

  friend bool operator==(const Point2&, const Point2&) = default;
  friend auto operator<=>(const Point2&, const Point2&) = default;
};

Point2 operator+(const Point2& p, const Point2& q);
Point2 operator-(const Point2& p, const Point2& q);
Point2 scale(const Point2& p, const Dyadic& k);
Point2 midpoint(const Point2& p, const Point2& q);
Dyadic dot(const Point2& p, const Point2& q);
Dyadic cross(const Point2& p, const Point2& q);
Dyadic squared_distance(const Point2& p, const Point2& q);
// Sign of the turn o -> a -> b (positive is counterclockwise).
int orientation(const Point2& o, const Point2& a, const Point2& b);
// True when p lies on the closed segment [a, b].
bool on_segment(const Point2& p, const Point2& a, const Point2& b);

/*
 * A path in a metric tree given by vertex-valued breakpoints. Between two
 * breakpoints the path runs along the geodesic arc at constant speed, so a
 * segment covers one edge in the simplicial case and several edges when an
 * older path is read inside a refined tree.
 */
class TreePath {
 public:
  struct Breakpoint {
    Dyadic param;
    VertexId vertex;
    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
  };

  TreePath(std::shared_ptr<const MetricTree> tree, std::vector<Breakpoint> breakpoints);

  const MetricTree& tree() const { return *tree_; }
  const std::shared_ptr<const MetricTree>& tree_ptr() const { return tree_; }
  const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }
  std::size_t size() const { return breakpoints_.size(); }
  VertexId start() const { return breakpoints_.front().vertex; }
  VertexId end() const { return breakpoints_.back().vertex; }

  TreeLocation eval(const Dyadic& t) const;
  // Consecutive breakpoints are equal or adjacent vertices.
  bool is_simplicial() const;
  // Same path with a breakpoint at every vertex crossed; simplicial.
  TreePath refined() const;
  // The same breakpoints read in another tree that contains these ids.
  TreePath in_tree(std::shared_ptr<const MetricTree> tree) const;
  TreePath reversed() const;

  friend bool operator==(const TreePath& a, const TreePath& b) {
    return a.breakpoints_ == b.breakpoints_;
  }

 private:
  std::shared_ptr<const MetricTree> tree_;
  std::vector<Breakpoint> breakpoints_;
};

class PlanePath {
 public:
  struct Breakpoint {
    Dyadic param;
    Point2 point;
    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
  };

  explicit PlanePath(std::vector<Breakpoint> breakpoints);

  const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }
  std::size_t size() const { return breakpoints_.size(); }
  const Point2& start() const { return breakpoints_.front().point; }
  const Point2& end() const { return breakpoints_.back().point; }

  Point2 eval(const Dyadic& t) const;
  PlanePath reversed() const;

  friend bool operator==(const PlanePath&, const PlanePath&) = default;

 private:
  std::vector<Breakpoint> breakpoints_;
};

/*
 * Vertex images of a map from a tree to the plane, linear on edges, with a
 * declared Lipschitz constant.
 */
class PlanarMap {
 public:
  PlanarMap(std::shared_ptr<const MetricTree> tree, std::vector<std::optional<Point2>> images,
            Quad lipschitz = Quad(1));

  const MetricTree& tree() const { return *tree_; }
  const std::shared_ptr<const MetricTree>& tree_ptr() const { return tree_; }
  const Quad& lipschitz() const { return lipschitz_; }
  const std::vector<std::optional<Point2>>& images() const { return images_; }
  const Point2& image(VertexId v) const;
  Point2 image(const TreeLocation& p) const;

  // Edges (by child id) whose image is longer than lipschitz * length.
  std::vector<VertexId> lipschitz_violations() const;
  // Edges whose image length differs from the edge length.
  std::vector<VertexId> non_isometric_edges() const;

 private:
  std::shared_ptr<const MetricTree> tree_;
  std::vector<std::optional<Point2>> images_;
  Quad lipschitz_;
};

PlanePath map_path(const TreePath& path, const PlanarMap& g);

// t -> first(2t) on [0, 1/2], second(2 - 2t) on [1/2, 1].
TreePath loop_concat_reverse(const TreePath& first, const TreePath& second);
PlanePath loop_concat_reverse(const PlanePath& first, const PlanePath& second);

struct SupDistance {
  Dyadic squared;      // max over t of |p(t) - q(t)|^2
  Dyadic attained_at;  // a parameter where it is attained
  std::optional<bool> within_bound;  // sup <= bound, when a bound was given
};

// Exact: |p - q| is convex on each piece of the common refinement, so the
// maximum sits on a breakpoint of p or q.
SupDistance sup_distance(const PlanePath& p, const PlanePath& q, const std::optional<Quad>& bound = std::nullopt);

// Total length; every segment must be axis-parallel or diagonal.
Quad path_length(const PlanePath& p);
// Euclidean length of one segment, for axis-parallel or diagonal ones.
std::optional<Quad> segment_length(const Point2& a, const Point2& b);

struct OrderedTriangle {
  Point2 a;
  Point2 b;  // right angle
  Point2 c;

  bool is_isosceles_right() const;
  Dyadic leg_squared() const { return squared_distance(a, b); }
  // Closed convex hull membership.
  bool contains(const Point2& p) const;

  friend bool operator==(const OrderedTriangle&, const OrderedTriangle&) = default;
};

// Every point of the grid of pitch 2^-grid inside the triangle is within
// `radius` of some sample.
bool density_check(std::span<const Point2> samples, const OrderedTriangle& triangle, const Quad& radius,
                   unsigned grid);

}  // namespace treelike

#endif  // TREELIKE_PLCURVE_HPP
