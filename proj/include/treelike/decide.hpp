#ifndef TREELIKE_DECIDE_HPP
#define TREELIKE_DECIDE_HPP

#include <memory>
#include <optional>
#include <string>

#include "treelike/height.hpp"
#include "treelike/plcurve.hpp"

namespace treelike {

// Signed number of turns of `loop` around p (counterclockwise positive).
// Throws std::invalid_argument when p lies on the loop.
int winding_number(const PlanePath& loop, const Point2& p);

// A tree factorization loop = map o path with a certified height function.
struct TreeWitness {
  std::shared_ptr<const MetricTree> tree;
  TreePath path;
  PlanarMap map;
  HeightFunction height;
  HeightReport check;
};

struct Verdict {
  enum class Kind { kTreeLike, kNotTreeLike, kInconclusive };

  Kind kind = Kind::kInconclusive;
  std::string reason;
  std::optional<TreeWitness> witness;  // kTreeLike
  std::optional<Point2> winding_point;  // kNotTreeLike: a point the loop winds around
  int winding = 0;
};

const char* to_string(Verdict::Kind kind);

/*
 * Decides polygonal loops whose segments meet only along shared vertices or
 * shared sub-segments. Breakpoints lying inside other segments are split
 * first; a proper crossing of two segment interiors is rejected with
 * std::invalid_argument.
 *
 *  - simple closed curve: not tree-like (it cannot factor through a tree);
 *  - edge word of the image graph reduces to the empty word: tree-like,
 *    with the reduction tree as witness;
 *  - otherwise inconclusive.
 */
Verdict decide_polygonal_loop(const PlanePath& loop);

}  // namespace treelike

#endif  // TREELIKE_DECIDE_HPP
