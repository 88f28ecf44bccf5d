#ifndef TREELIKE_HEIGHT_HPP
#define TREELIKE_HEIGHT_HPP

#include <memory>
#include <optional>
#include <vector>

#include "treelike/exactnum.hpp"
#include "treelike/mtree.hpp"
#include "treelike/plcurve.hpp"

namespace treelike {

/*
 * Piecewise-linear height function on [0, 1]. Values are nonnegative; the
 * tree-derived heights vanish at the basepoint, and adding a constant
 * restores strict positivity without changing any height inequality.
 */
class HeightFunction {
 public:
  struct Breakpoint {
    Dyadic param;
    Quad value;
    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
  };

  explicit HeightFunction(std::vector<Breakpoint> breakpoints);

  const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }
  std::size_t size() const { return breakpoints_.size(); }
  Quad eval(const Dyadic& t) const;

  friend bool operator==(const HeightFunction&, const HeightFunction&) = default;

 private:
  std::vector<Breakpoint> breakpoints_;
};

// h(t) = L * d(path(0), path(t)). A breakpoint is added wherever a segment
// passes its closest point to path(0) in its interior, so h is exactly the
// piecewise-linear function t -> L * d(path(0), path(t)).
HeightFunction height_from_tree_path(const TreePath& loop, const Quad& lipschitz);

// Union of the loop and height breakpoints, with `refine` rounds of
// midpoint insertion.
std::vector<Dyadic> verification_grid(const PlanePath& loop, const HeightFunction& h, unsigned refine);

struct PairViolation {
  Dyadic s;
  Dyadic t;
  Dyadic lhs_squared;  // |loop(t) - loop(s)|^2
  Quad rhs;            // h(t) + h(s) - 2 inf h on [s, t]
};

struct HeightReport {
  std::size_t grid_points = 0;
  unsigned refine = 0;
  std::uint64_t pairs_checked = 0;
  std::uint64_t violation_count = 0;
  std::vector<PairViolation> violations;  // first few, in grid order
  // Smallest rhs^2 - lhs^2 over s < t; it has the sign of rhs - lhs since
  // both are nonnegative. Unset when no pair was checked.
  std::optional<Quad> min_slack_squared;
  Dyadic min_slack_s;
  Dyadic min_slack_t;

  bool passed() const { return violation_count == 0; }
};

/*
 * Checks d(loop(s), loop(t)) <= h(s) + h(t) - 2 inf_[s,t] h for every grid
 * pair s < t. The grid holds every breakpoint of h, so the infimum over
 * [s, t] is the minimum of the grid values in between. Exact on the grid;
 * `workers` > 1 splits rows across threads.
 */
HeightReport verify_height_function(const PlanePath& loop, const HeightFunction& h, unsigned refine,
                                    unsigned workers = 1, std::size_t max_violations = 16);

struct ClassReport {
  std::size_t grid_points = 0;
  std::uint64_t related_pairs = 0;  // pairs s < t with s ~_h t
  std::uint64_t violation_count = 0;
  std::vector<std::pair<Dyadic, Dyadic>> violations;

  bool passed() const { return violation_count == 0; }
};

// For grid pairs with h(s) = h(t) = inf_[s,t] h, checks loop(s) = loop(t).
ClassReport class_consistency_check(const PlanePath& loop, const HeightFunction& h, unsigned refine,
                                    std::size_t max_violations = 16);

// s ~_h t for s <= t.
bool related(const HeightFunction& h, const Dyadic& s, const Dyadic& t);

/*
 * The tree [0,1]/~_h for a piecewise-linear h: rooted at the class of the
 * global minimum, depth of a class = h - min h. Only the root, the leaves
 * (local maxima) and branch points (merging local minima) are vertices.
 */
class QuotientTree {
 public:
  explicit QuotientTree(const HeightFunction& h);

  const MetricTree& tree() const { return *tree_; }
  const std::shared_ptr<const MetricTree>& tree_ptr() const { return tree_; }
  const Quad& base_height() const { return base_; }
  // Class of each breakpoint of h, in order.
  const std::vector<TreeLocation>& breakpoint_classes() const { return classes_; }
  // Class of an arbitrary parameter.
  TreeLocation class_of(const Dyadic& t) const;

 private:
  HeightFunction h_;
  std::shared_ptr<const MetricTree> tree_;
  Quad base_;
  std::vector<TreeLocation> classes_;
};

QuotientTree quotient_dendrite(const HeightFunction& h);

}  // namespace treelike

#endif  // TREELIKE_HEIGHT_HPP
