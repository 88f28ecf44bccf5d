#ifndef TREELIKE_CONSTRUCT_HPP
#define TREELIKE_CONSTRUCT_HPP

#include <memory>
#include <string>
#include <vector>

#include "treelike/mtree.hpp"
#include "treelike/plcurve.hpp"

namespace treelike {

/*
 * One level of the tower: the trees E_n (legs side) and Et_n (hypotenuse
 * side), their simplicial paths and planar maps, and the ordered triangle
 * list. Level n > 1 also records the leaves attached when it was produced,
 * which define the collapsing retractions back to level n - 1.
 */
struct TowerLevel {
  int n = 1;
  std::shared_ptr<const MetricTree> tree;
  std::shared_ptr<const MetricTree> tree_t;
  TreePath path;
  TreePath path_t;
  PlanarMap map;
  PlanarMap map_t;
  std::vector<OrderedTriangle> triangles;
  std::vector<VertexId> new_leaves;
  std::vector<VertexId> new_leaves_t;

  // [(i-1)/4^(n-1), i/4^(n-1)] for 1-based i.
  std::pair<Dyadic, Dyadic> interval(std::size_t i) const;
  PlanePath curve() const { return map_path(path, map); }
  PlanePath curve_t() const { return map_path(path_t, map_t); }
  // Collapse onto the previous level (n > 1).
  Retraction retraction() const { return leaf_collapse_retraction(tree, new_leaves); }
  Retraction retraction_t() const { return leaf_collapse_retraction(tree_t, new_leaves_t); }
};

TowerLevel init_level1();

struct ParameterizationReport {
  bool injective = true;           // condition (1), including the vertex requirements
  bool endpoints = true;           // condition (2)
  bool linear = true;              // condition (3)
  std::vector<std::string> witnesses;

  bool ok() const { return injective && endpoints && linear; }
};

// Checks that the level's maps parametrize triangles[i-1] on interval(i).
ParameterizationReport check_parameterization(const TowerLevel& level, std::size_t i);

/*
 * Builds level n+1 from level n one interval at a time. Intervals must be
 * processed in order 1..4^(n-1) so that vertex ids are deterministic.
 */
class SubdivisionStep {
 public:
  explicit SubdivisionStep(const TowerLevel& source);

  // Subdivides interval i (1-based); throws std::invalid_argument when the
  // source maps do not parametrize triangle i on it.
  void subdivide_interval(std::size_t i);
  std::size_t next_interval() const { return next_; }
  TowerLevel finish() &&;

 private:
  VertexId midpoint_vertex(MetricTree& tree, std::vector<std::optional<Point2>>& images, VertexId u, VertexId v,
                           const Point2& image);

  const TowerLevel& source_;
  std::size_t next_ = 1;
  MetricTree tree_;
  MetricTree tree_t_;
  std::vector<std::optional<Point2>> images_;
  std::vector<std::optional<Point2>> images_t_;
  std::vector<TreePath::Breakpoint> path_;
  std::vector<TreePath::Breakpoint> path_t_;
  std::vector<OrderedTriangle> triangles_;
  std::vector<VertexId> leaves_;
  std::vector<VertexId> leaves_t_;
};

TowerLevel subdivide_level(const TowerLevel& level);
std::vector<TowerLevel> build_tower(int levels);

}  // namespace treelike

#endif  // TREELIKE_CONSTRUCT_HPP
