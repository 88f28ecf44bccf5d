#include "treelike/mtree.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace treelike {

namespace {

[[noreturn]] void unknown_vertex(VertexId v) {
  throw std::invalid_argument("unknown vertex " + std::to_string(v));
}

}  // namespace

MetricTree::MetricTree() : nodes_(1) {}

MetricTree MetricTree::from_parents(VertexId root, const std::vector<std::optional<ParentLink>>& parents,
                                    const std::vector<bool>& present) {
  if (parents.size() != present.size()) throw std::invalid_argument("parent/presence size mismatch");
  if (root >= present.size() || !present[root]) throw std::invalid_argument("root is not a vertex");
  if (parents[root]) throw std::invalid_argument("root has a parent");

  MetricTree t;
  t.root_ = root;
  t.nodes_.assign(present.size(), Node{});
  t.alive_ = 0;
  for (std::size_t v = 0; v < present.size(); ++v) {
    t.nodes_[v].alive = present[v];
    if (!present[v]) continue;
    ++t.alive_;
    if (v == root) continue;
    const auto& link = parents[v];
    if (!link) throw std::invalid_argument("vertex " + std::to_string(v) + " has no parent");
    if (link->parent >= present.size() || !present[link->parent]) unknown_vertex(link->parent);
    if (link->length.sign() <= 0) {
      throw std::invalid_argument("edge above vertex " + std::to_string(v) + " has nonpositive length");
    }
    t.nodes_[v].parent = link->parent;
    t.nodes_[v].length = link->length;
    ++t.nodes_[link->parent].children;
  }

  // depths, with cycle detection: 0 unvisited, 1 in progress, 2 done
  std::vector<std::uint8_t> state(present.size(), 0);
  state[root] = 2;
  std::vector<VertexId> chain;
  for (std::size_t s = 0; s < present.size(); ++s) {
    if (!present[s] || state[s] == 2) continue;
    chain.clear();
    VertexId v = static_cast<VertexId>(s);
    while (state[v] == 0) {
      state[v] = 1;
      chain.push_back(v);
      v = t.nodes_[v].parent;
    }
    if (state[v] == 1) throw std::invalid_argument("parent links contain a cycle");
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      Node& n = t.nodes_[*it];
      const Node& p = t.nodes_[n.parent];
      n.depth = p.depth + n.length;
      n.hops = p.hops + 1;
      state[*it] = 2;
    }
  }
  return t;
}

const MetricTree::Node& MetricTree::node(VertexId v) const {
  if (!contains(v)) unknown_vertex(v);
  return nodes_[v];
}

std::vector<VertexId> MetricTree::vertices() const {
  std::vector<VertexId> out;
  out.reserve(alive_);
  for (VertexId v = 0; v < nodes_.size(); ++v) {
    if (nodes_[v].alive) out.push_back(v);
  }
  return out;
}

std::optional<VertexId> MetricTree::parent(VertexId v) const {
  const Node& n = node(v);
  if (v == root_) return std::nullopt;
  return n.parent;
}

const Quad& MetricTree::edge_length(VertexId v) const {
  const Node& n = node(v);
  if (v == root_) throw std::invalid_argument("the root has no parent edge");
  return n.length;
}

const Quad& MetricTree::depth(VertexId v) const { return node(v).depth; }
std::uint32_t MetricTree::hops(VertexId v) const {
  ensure_hops();
  return node(v).hops;
}

void MetricTree::ensure_hops() const {
  if (hops_valid_) return;
  // parents were allocated before some children but not all (subdivision
  // inserts above), so resolve along chains
  std::vector<bool> done(nodes_.size(), false);
  done[root_] = true;
  nodes_[root_].hops = 0;
  std::vector<VertexId> chain;
  for (VertexId s = 0; s < nodes_.size(); ++s) {
    if (!nodes_[s].alive || done[s]) continue;
    chain.clear();
    for (VertexId v = s; !done[v]; v = nodes_[v].parent) chain.push_back(v);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      nodes_[*it].hops = nodes_[nodes_[*it].parent].hops + 1;
      done[*it] = true;
    }
  }
  hops_valid_ = true;
}
std::size_t MetricTree::child_count(VertexId v) const { return node(v).children; }
bool MetricTree::is_leaf(VertexId v) const { return v != root_ && node(v).children == 0; }

bool MetricTree::adjacent(VertexId u, VertexId v) const {
  return (u != root_ && node(u).parent == v) || (v != root_ && node(v).parent == u);
}

VertexId MetricTree::attach_leaf(VertexId at, const Quad& length) {
  const Node& base = node(at);
  if (length.sign() <= 0) throw std::invalid_argument("leaf length must be positive, got " + length.to_string());
  Node leaf;
  leaf.parent = at;
  leaf.length = length;
  leaf.depth = base.depth + length;
  leaf.hops = base.hops + 1;  // stale if hops_valid_ is false; recomputed then
  nodes_.push_back(std::move(leaf));
  ++nodes_[at].children;
  ++alive_;
  return static_cast<VertexId>(nodes_.size() - 1);
}

VertexId MetricTree::subdivide_edge(VertexId child, const Dyadic& fraction) {
  if (child == root_) throw std::invalid_argument("the root has no parent edge to subdivide");
  const Node& c = node(child);
  if (fraction.sign() <= 0 || fraction >= Dyadic(1)) {
    throw std::invalid_argument("subdivision fraction must lie in (0, 1), got " + fraction.to_string());
  }
  Quad lower = c.length * Quad(fraction);  // from child to the new vertex
  Node mid;
  mid.parent = c.parent;
  mid.length = c.length - lower;
  mid.depth = c.depth - lower;
  mid.hops = c.hops;
  mid.children = 1;
  nodes_.push_back(std::move(mid));
  auto id = static_cast<VertexId>(nodes_.size() - 1);
  Node& cm = nodes_[child];
  cm.parent = id;
  cm.length = lower;
  ++alive_;
  hops_valid_ = false;  // everything below `child` moved one hop down
  return id;
}

std::vector<std::vector<VertexId>> MetricTree::child_lists() const {
  std::vector<std::vector<VertexId>> kids(nodes_.size());
  for (VertexId v = 0; v < nodes_.size(); ++v) {
    if (nodes_[v].alive && v != root_) kids[nodes_[v].parent].push_back(v);
  }
  return kids;
}

VertexId MetricTree::lca(VertexId u, VertexId v) const {
  node(u);
  node(v);
  if (!hops_valid_) {
    // mid-construction: depths are exact and strictly increase away from the root
    while (u != v) {
      auto c = nodes_[u].depth <=> nodes_[v].depth;
      if (c != std::strong_ordering::less) u = nodes_[u].parent;
      if (c != std::strong_ordering::greater) v = nodes_[v].parent;
    }
    return u;
  }
  while (nodes_[u].hops > nodes_[v].hops) u = nodes_[u].parent;
  while (nodes_[v].hops > nodes_[u].hops) v = nodes_[v].parent;
  while (u != v) {
    u = nodes_[u].parent;
    v = nodes_[v].parent;
  }
  return u;
}

Quad MetricTree::distance(VertexId u, VertexId v) const {
  VertexId w = lca(u, v);
  return nodes_[u].depth + nodes_[v].depth - nodes_[w].depth.scaled(1);
}

void MetricTree::validate(const TreeLocation& p) const {
  const Node& n = node(p.vertex);
  if (p.offset.sign() < 0) throw std::invalid_argument("negative offset on tree location");
  if (p.vertex == root_) {
    if (!p.offset.is_zero()) throw std::invalid_argument("root location must have offset 0");
  } else if (p.offset > n.length) {
    throw std::invalid_argument("offset exceeds edge length at vertex " + std::to_string(p.vertex));
  }
}

std::optional<VertexId> MetricTree::vertex_at(const TreeLocation& p) const {
  validate(p);
  if (p.offset.is_zero()) return p.vertex;
  if (p.offset == nodes_[p.vertex].length) return nodes_[p.vertex].parent;
  return std::nullopt;
}

Quad MetricTree::depth(const TreeLocation& p) const {
  validate(p);
  return nodes_[p.vertex].depth - p.offset;
}

Quad MetricTree::distance(const TreeLocation& p, const TreeLocation& q) const {
  validate(p);
  validate(q);
  if (p.vertex == q.vertex) return abs(p.offset - q.offset);
  // The geodesic leaves each interior point through one end of its edge;
  // the shortest of the four end-to-end combinations is the tree distance.
  auto ends = [&](const TreeLocation& x) {
    std::vector<std::pair<VertexId, Quad>> e{{x.vertex, x.offset}};
    if (x.vertex != root_ && !x.offset.is_zero()) e.emplace_back(nodes_[x.vertex].parent, nodes_[x.vertex].length - x.offset);
    return e;
  };
  std::optional<Quad> best;
  for (const auto& [a, da] : ends(p)) {
    for (const auto& [b, db] : ends(q)) {
      Quad d = da + distance(a, b) + db;
      if (!best || d < *best) best = std::move(d);
    }
  }
  return *best;
}

TreeLocation MetricTree::ancestor_at_depth(VertexId v, const Quad& depth) const {
  const Node* n = &node(v);
  if (depth.sign() < 0 || depth > n->depth) throw std::invalid_argument("depth outside the root path");
  while (v != root_) {
    const Quad& up = nodes_[n->parent].depth;
    if (up < depth) break;
    if (up == depth) return {n->parent, Quad()};
    v = n->parent;
    n = &nodes_[v];
  }
  return {v, n->depth - depth};
}

TreeLocation MetricTree::point_on_arc(VertexId u, VertexId v, const Quad& along) const {
  VertexId w = lca(u, v);
  Quad up = nodes_[u].depth - nodes_[w].depth;
  Quad total = up + nodes_[v].depth - nodes_[w].depth;
  if (along.sign() < 0 || along > total) throw std::invalid_argument("point beyond the end of the arc");
  if (along <= up) return ancestor_at_depth(u, nodes_[u].depth - along);
  return ancestor_at_depth(v, nodes_[v].depth - (total - along));
}

std::vector<VertexId> MetricTree::arc(VertexId u, VertexId v) const {
  VertexId w = lca(u, v);
  std::vector<VertexId> head;
  for (VertexId x = u; x != w; x = nodes_[x].parent) head.push_back(x);
  head.push_back(w);
  std::vector<VertexId> tail;
  for (VertexId x = v; x != w; x = nodes_[x].parent) tail.push_back(x);
  head.insert(head.end(), tail.rbegin(), tail.rend());
  return head;
}

MetricTree MetricTree::without_leaves(std::span<const VertexId> leaves) const {
  MetricTree t = *this;
  for (VertexId v : leaves) {
    if (!t.is_leaf(v)) throw std::invalid_argument("vertex " + std::to_string(v) + " is not a leaf");
  }
  for (VertexId v : leaves) {
    if (!t.nodes_[v].alive) continue;
    t.nodes_[v].alive = false;
    --t.nodes_[t.nodes_[v].parent].children;
    --t.alive_;
  }
  return t;
}

bool operator==(const MetricTree& a, const MetricTree& b) {
  if (a.root_ != b.root_ || a.nodes_.size() != b.nodes_.size()) return false;
  for (std::size_t v = 0; v < a.nodes_.size(); ++v) {
    const auto& x = a.nodes_[v];
    const auto& y = b.nodes_[v];
    if (x.alive != y.alive) return false;
    if (!x.alive || v == a.root_) continue;
    if (x.parent != y.parent || x.length != y.length) return false;
  }
  return true;
}

Retraction::Retraction(std::shared_ptr<const MetricTree> source, std::vector<VertexId> leaves)
    : source_(std::move(source)), leaves_(std::move(leaves)), collapsed_(source_->id_bound(), false),
      target_(source_->without_leaves(leaves_)) {
  for (VertexId v : leaves_) collapsed_[v] = true;
}

TreeLocation Retraction::apply(const TreeLocation& p) const {
  source_->validate(p);
  if (collapsed_[p.vertex]) return {*source_->parent(p.vertex), Quad()};
  return p;
}

Quad Retraction::sup_displacement() const {
  Quad best;
  for (VertexId v : leaves_) best = max(best, source_->edge_length(v));
  return best;
}

Retraction leaf_collapse_retraction(std::shared_ptr<const MetricTree> source, std::vector<VertexId> leaves) {
  return Retraction(std::move(source), std::move(leaves));
}

}  // namespace treelike
