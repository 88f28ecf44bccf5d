#ifndef TREELIKE_MTREE_HPP
#define TREELIKE_MTREE_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "treelike/exactnum.hpp"

namespace treelike {

using VertexId = std::uint32_t;

// A point on the closed edge from `vertex` to its parent, `offset` measured
// from `vertex`. The root only admits offset 0.
struct TreeLocation {
  VertexId vertex = 0;
  Quad offset;

  friend bool operator==(const TreeLocation&, const TreeLocation&) = default;
};

/*
 * Rooted metric simplicial tree. Vertices are dense integer ids; ids stay
 * stable under subdivision and leaf attachment, so an older tree embeds in
 * a refined one by identity on ids. Each vertex caches its exact depth and
 * its hop count to the root.
 */
class MetricTree {
 public:
  MetricTree();  // a single root vertex, id 0

  // Rebuilds from parent links; parents[v] is nullopt for the root and for
  // ids that are not in the tree. Throws on cycles, missing parents, or
  // nonpositive lengths.
  struct ParentLink {
    VertexId parent;
    Quad length;
  };
  static MetricTree from_parents(VertexId root, const std::vector<std::optional<ParentLink>>& parents,
                                 const std::vector<bool>& present);

  VertexId root() const { return root_; }
  bool contains(VertexId v) const { return v < nodes_.size() && nodes_[v].alive; }
  std::size_t vertex_count() const { return alive_; }
  std::size_t edge_count() const { return alive_ - 1; }
  // One past the largest id ever allocated.
  std::size_t id_bound() const { return nodes_.size(); }
  std::vector<VertexId> vertices() const;

  std::optional<VertexId> parent(VertexId v) const;
  const Quad& edge_length(VertexId v) const;
  const Quad& depth(VertexId v) const;
  std::uint32_t hops(VertexId v) const;
  bool is_leaf(VertexId v) const;
  std::size_t child_count(VertexId v) const;
  bool adjacent(VertexId u, VertexId v) const;

  VertexId attach_leaf(VertexId at, const Quad& length);
  // Splits the edge above `child`; `fraction` is measured from `child`.
  VertexId subdivide_edge(VertexId child, const Dyadic& fraction);

  VertexId lca(VertexId u, VertexId v) const;
  Quad distance(VertexId u, VertexId v) const;
  Quad distance(const TreeLocation& p, const TreeLocation& q) const;
  Quad depth(const TreeLocation& p) const;

  // Throws std::invalid_argument unless p lies on this tree.
  void validate(const TreeLocation& p) const;
  // The vertex at p, if p sits on one.
  std::optional<VertexId> vertex_at(const TreeLocation& p) const;

  // Point on the ancestor chain of v at the given depth (0 <= depth <= depth(v)).
  TreeLocation ancestor_at_depth(VertexId v, const Quad& depth) const;
  // Point at distance `along` from u on the arc u -> v.
  TreeLocation point_on_arc(VertexId u, VertexId v, const Quad& along) const;
  // Vertices of the arc u -> v in order, both ends included.
  std::vector<VertexId> arc(VertexId u, VertexId v) const;

  // A copy with the listed leaves (and their pendant edges) removed.
  MetricTree without_leaves(std::span<const VertexId> leaves) const;

  // Rebuilds cached hop counts; call before sharing a tree across threads.
  void refresh() const { ensure_hops(); }

  // Ids of children, built on demand (O(n)).
  std::vector<std::vector<VertexId>> child_lists() const;

  friend bool operator==(const MetricTree& a, const MetricTree& b);

 private:
  struct Node {
    bool alive = true;
    VertexId parent = 0;
    std::uint32_t hops = 0;
    std::uint32_t children = 0;
    Quad length;
    Quad depth;
  };

  const Node& node(VertexId v) const;
  // Hop counts go stale after subdivision and are rebuilt on first use.
  // Trees are fully refreshed before being shared (see refresh()).
  void ensure_hops() const;

  mutable std::vector<Node> nodes_;
  mutable bool hops_valid_ = true;
  VertexId root_ = 0;
  std::size_t alive_ = 1;
};

/*
 * Leaf-collapsing monotone retraction: pendant edges of the listed leaves
 * are collapsed onto their attachment vertices; the identity elsewhere.
 */
class Retraction {
 public:
  Retraction(std::shared_ptr<const MetricTree> source, std::vector<VertexId> leaves);

  const MetricTree& source() const { return *source_; }
  const MetricTree& target() const { return target_; }
  const std::vector<VertexId>& collapsed_leaves() const { return leaves_; }

  // The image, expressed as a location in the source tree that lies in the target.
  TreeLocation apply(const TreeLocation& p) const;
  // Largest collapsed edge; 0 for the identity.
  Quad sup_displacement() const;

 private:
  std::shared_ptr<const MetricTree> source_;
  std::vector<VertexId> leaves_;
  std::vector<bool> collapsed_;
  MetricTree target_;
};

Retraction leaf_collapse_retraction(std::shared_ptr<const MetricTree> source, std::vector<VertexId> leaves);

}  // namespace treelike

#endif  // TREELIKE_MTREE_HPP
