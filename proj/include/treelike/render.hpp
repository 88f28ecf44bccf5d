#ifndef TREELIKE_RENDER_HPP
#define TREELIKE_RENDER_HPP

#include <set>
#include <string>
#include <vector>

#include "treelike/construct.hpp"

namespace treelike {

enum class CurveSet { kAlpha, kBeta, kGamma, kTrees };

// "alpha", "beta", "gamma_n" (or "gamma"), "trees"; throws
// std::invalid_argument for anything else.
std::set<CurveSet> parse_curve_list(const std::string& list);

struct RenderOptions {
  int level = 0;          // 1-based; 0 means the top level
  unsigned scale = 400;   // pixels per unit
  std::set<CurveSet> curves{CurveSet::kGamma};
};

/*
 * SVG of the requested level: g_n pi_n in blue, gt_n pit_n in red, alpha
 * and beta dashed in the same colors, the triangles of A_n in grey, and
 * optionally both trees in a layered layout (depth downward, exact lengths
 * scaled).
 */
std::string render_svg(const std::vector<TowerLevel>& tower, const RenderOptions& options);

}  // namespace treelike

#endif  // TREELIKE_RENDER_HPP
