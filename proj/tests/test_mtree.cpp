#include <gtest/gtest.h>

#include <map>
#include <random>

#include "oracle.hpp"
#include "treelike/construct.hpp"
#include "treelike/mtree.hpp"

using namespace treelike;

namespace {

Quad half_sqrt2() { return {Dyadic(0), Dyadic::parse("1/2")}; }

// Distance by walking the adjacency graph, independent of depths and LCA.
Quad walk_distance(const MetricTree& t, VertexId from, VertexId to) {
  std::map<VertexId, std::vector<std::pair<VertexId, Quad>>> adj;
  for (VertexId v : t.vertices()) {
    if (auto p = t.parent(v)) {
      adj[v].push_back({*p, t.edge_length(v)});
      adj[*p].push_back({v, t.edge_length(v)});
    }
  }
  std::map<VertexId, Quad> dist{{from, Quad()}};
  std::vector<VertexId> stack{from};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (auto& [w, len] : adj[v]) {
      if (dist.count(w)) continue;
      dist[w] = dist[v] + len;
      stack.push_back(w);
    }
  }
  return dist.at(to);
}

MetricTree random_tree(std::mt19937_64& rng, int steps) {
  MetricTree t;
  for (int i = 0; i < steps; ++i) {
    auto ids = t.vertices();
    VertexId v = ids[rng() % ids.size()];
    if (rng() % 3 == 0 && v != t.root()) {
      t.subdivide_edge(v, Dyadic::pow2(-1 - static_cast<int>(rng() % 3)));
    } else {
      Quad len = rng() % 2 ? Quad(Dyadic::pow2(-static_cast<int>(rng() % 3))) : Quad(Dyadic(0), Dyadic::pow2(-static_cast<int>(rng() % 3)));
      t.attach_leaf(v, len);
    }
  }
  return t;
}

}  // namespace

TEST(AttachLeaf, Examples) {
  TowerLevel l1 = init_level1();
  MetricTree et = *l1.tree_t;
  VertexId mid = et.subdivide_edge(1, Dyadic::parse("1/2"));
  VertexId w = et.attach_leaf(mid, half_sqrt2());
  EXPECT_EQ(et.depth(w), Quad::sqrt2());

  MetricTree t;
  VertexId leaf = t.attach_leaf(t.root(), Quad(1));
  EXPECT_EQ(t.depth(leaf), Quad(1));
  EXPECT_THROW(t.attach_leaf(t.root(), Quad()), std::invalid_argument);
  EXPECT_THROW(t.attach_leaf(t.root(), Quad(-1)), std::invalid_argument);
  EXPECT_THROW(t.attach_leaf(42, Quad(1)), std::invalid_argument);
}

TEST(SubdivideEdge, Examples) {
  TowerLevel l1 = init_level1();
  MetricTree e = *l1.tree;
  const VertexId v0 = 0, vh = 1;
  VertexId u1 = e.subdivide_edge(vh, Dyadic::parse("1/2"));
  EXPECT_EQ(e.depth(u1), Quad(Dyadic::parse("1/2")));
  e.subdivide_edge(vh, Dyadic::parse("1/2"));
  e.subdivide_edge(u1, Dyadic::parse("1/2"));
  EXPECT_EQ(e.distance(v0, vh), Quad(1));
  EXPECT_EQ(e.distance(v0, 2), Quad(2));
  EXPECT_THROW(e.subdivide_edge(vh, Dyadic(1)), std::invalid_argument);
  EXPECT_THROW(e.subdivide_edge(vh, Dyadic(0)), std::invalid_argument);
  EXPECT_THROW(e.subdivide_edge(v0, Dyadic::parse("1/2")), std::invalid_argument);
}

TEST(GeodesicDistance, Examples) {
  auto tower = build_tower(2);
  EXPECT_EQ(tower[0].tree->distance(0, 2), Quad(2));
  EXPECT_EQ(tower[0].tree_t->distance(0, 1), Quad::sqrt2());
  const VertexId w1 = tower[1].new_leaves.front();
  EXPECT_EQ(tower[1].tree->distance(0, w1), Quad(1));
  EXPECT_EQ(walk_distance(*tower[1].tree, 0, w1), Quad(1));
}

TEST(GeodesicDistance, Locations) {
  auto tower = build_tower(1);
  const MetricTree& e = *tower[0].tree;
  TreeLocation p{1, Quad(Dyadic::parse("1/4"))};  // 3/4 from the root
  TreeLocation r{2, Quad(Dyadic::parse("1/2"))};  // 3/2 from the root
  EXPECT_EQ(e.distance(p, r), Quad(Dyadic::parse("3/4")));
  EXPECT_EQ(e.distance(p, p), Quad());
  EXPECT_EQ(e.depth(r), Quad(Dyadic::parse("3/2")));
  EXPECT_THROW(e.validate(TreeLocation{1, Quad(2)}), std::invalid_argument);
  EXPECT_THROW(e.validate(TreeLocation{0, Quad(1)}), std::invalid_argument);
}

TEST(GeodesicDistance, MatchesGraphWalk) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    MetricTree t = random_tree(rng, 25);
    auto ids = t.vertices();
    for (int i = 0; i < 40; ++i) {
      VertexId u = ids[rng() % ids.size()], v = ids[rng() % ids.size()];
      ASSERT_EQ(t.distance(u, v), walk_distance(t, u, v));
      EXPECT_EQ(t.distance(u, v), t.distance(v, u));
      EXPECT_EQ(t.distance(u, v).is_zero(), u == v);
    }
  }
}

TEST(GeodesicDistance, FourPointCondition) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    MetricTree t = random_tree(rng, 30);
    auto ids = t.vertices();
    for (int i = 0; i < 200; ++i) {
      VertexId x = ids[rng() % ids.size()], y = ids[rng() % ids.size()];
      VertexId z = ids[rng() % ids.size()], w = ids[rng() % ids.size()];
      Quad a = t.distance(x, y) + t.distance(z, w);
      Quad b = t.distance(x, z) + t.distance(y, w);
      Quad c = t.distance(x, w) + t.distance(y, z);
      EXPECT_LE(a, max(b, c));
      EXPECT_LE(t.distance(x, z), t.distance(x, y) + t.distance(y, z));
    }
  }
}

TEST(SubdivideEdge, PreservesAllDistances) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    MetricTree t = random_tree(rng, 12);
    auto ids = t.vertices();
    std::map<std::pair<VertexId, VertexId>, Quad> before;
    for (VertexId u : ids) {
      for (VertexId v : ids) before[{u, v}] = t.distance(u, v);
    }
    for (int k = 0; k < 6; ++k) {
      auto now = t.vertices();
      VertexId c = now[1 + rng() % (now.size() - 1)];
      t.subdivide_edge(c, Dyadic::pow2(-1 - static_cast<int>(rng() % 2)));
    }
    for (auto& [uv, d] : before) ASSERT_EQ(t.distance(uv.first, uv.second), d);
  }
}

TEST(FromParents, RejectsBadInput) {
  using L = MetricTree::ParentLink;
  std::vector<bool> present{true, true, true};
  EXPECT_NO_THROW(MetricTree::from_parents(0, {std::nullopt, L{0, Quad(1)}, L{1, Quad(1)}}, present));
  EXPECT_THROW(MetricTree::from_parents(0, {std::nullopt, L{2, Quad(1)}, L{1, Quad(1)}}, present), std::invalid_argument);
  EXPECT_THROW(MetricTree::from_parents(0, {std::nullopt, L{0, Quad(0)}, L{1, Quad(1)}}, present), std::invalid_argument);
  EXPECT_THROW(MetricTree::from_parents(0, {std::nullopt, std::nullopt, L{1, Quad(1)}}, present), std::invalid_argument);
}

TEST(LeafCollapse, Examples) {
  auto tower = build_tower(2);
  const auto& l2 = tower[1];
  ASSERT_EQ(l2.new_leaves.size(), 2u);
  ASSERT_EQ(l2.new_leaves_t.size(), 1u);
  EXPECT_EQ(leaf_collapse_retraction(l2.tree, l2.new_leaves).sup_displacement(), Quad(Dyadic::parse("1/2")));
  EXPECT_EQ(leaf_collapse_retraction(l2.tree_t, l2.new_leaves_t).sup_displacement(), half_sqrt2());
  Retraction id = leaf_collapse_retraction(l2.tree, {});
  EXPECT_EQ(id.sup_displacement(), Quad());
  EXPECT_EQ(id.target(), *l2.tree);
  EXPECT_THROW(leaf_collapse_retraction(l2.tree, {0}), std::invalid_argument);
  EXPECT_THROW(leaf_collapse_retraction(l2.tree, {3}), std::invalid_argument);  // u1 is not a leaf
}

TEST(LeafCollapse, LipschitzIdentityAndMonotone) {
  auto tower = build_tower(4);
  for (std::size_t k = 1; k < tower.size(); ++k) {
    for (bool tilde : {false, true}) {
      const auto& tree = tilde ? tower[k].tree_t : tower[k].tree;
      Retraction r = tilde ? tower[k].retraction_t() : tower[k].retraction();
      const MetricTree& tgt = r.target();
      // identity on the target
      for (VertexId v : tgt.vertices()) EXPECT_EQ(r.apply({v, Quad()}), (TreeLocation{v, Quad()}));
      // preimage of a target vertex: itself plus adjacent collapsed leaves
      for (VertexId v : tree->vertices()) {
        TreeLocation img = r.apply({v, Quad()});
        if (!tgt.contains(v)) {
          EXPECT_TRUE(tree->adjacent(v, img.vertex));
          EXPECT_TRUE(img.offset.is_zero());
        }
      }
      // 1-Lipschitz on sampled locations, including mid-edge ones
      std::mt19937_64 rng(21 + k);
      auto ids = tree->vertices();
      auto sample = [&] {
        VertexId v = ids[1 + rng() % (ids.size() - 1)];
        Dyadic f = Dyadic(static_cast<long long>(rng() % 9)).scaled(-3);
        return TreeLocation{v, tree->edge_length(v) * Quad(f)};
      };
      for (int i = 0; i < 300; ++i) {
        TreeLocation p = sample(), q = sample();
        EXPECT_LE(tree->distance(r.apply(p), r.apply(q)), tree->distance(p, q));
        EXPECT_LE(tree->distance(r.apply(p), p), r.sup_displacement());
      }
    }
  }
}

TEST(MetricTree, ArcAndPointOnArc) {
  auto tower = build_tower(2);
  const MetricTree& e = *tower[1].tree;
  const VertexId w1 = tower[1].new_leaves[0], w2 = tower[1].new_leaves[1];
  auto arc = e.arc(w1, w2);
  ASSERT_GE(arc.size(), 4u);
  EXPECT_EQ(arc.front(), w1);
  EXPECT_EQ(arc.back(), w2);
  Quad total;
  for (std::size_t i = 1; i < arc.size(); ++i) {
    EXPECT_TRUE(e.adjacent(arc[i - 1], arc[i]));
    total += e.distance(arc[i - 1], arc[i]);
  }
  EXPECT_EQ(total, e.distance(w1, w2));
  TreeLocation mid = e.point_on_arc(w1, w2, e.distance(w1, w2).half());
  EXPECT_EQ(e.distance(mid, {w1, Quad()}), e.distance(w1, w2).half());
  EXPECT_EQ(e.distance(mid, {w2, Quad()}), e.distance(w1, w2).half());
}
