#include "treelike/suite.hpp"

#include <functional>
#include <sstream>
#include <unordered_map>

namespace treelike {

namespace {

std::string str(const Point2& p) { return "(" + p.x.to_string() + ", " + p.y.to_string() + ")"; }

// Runs `body`; an empty string means pass. Exceptions count as failures.
Check run_check(std::string name, int n, const std::function<std::string()>& body) {
  Check c{std::move(name), n, true, {}};
  try {
    c.detail = body();
  } catch (const std::exception& e) {
    c.detail = std::string("exception: ") + e.what();
  }
  c.passed = c.detail.empty();
  return c;
}

Quad leg(int n) { return Quad(Dyadic::pow2(1 - n)); }
Quad hyp(int n) { return Quad(Dyadic(0), Dyadic::pow2(1 - n)); }

std::uint64_t pow4(int k) { return std::uint64_t{1} << (2 * k); }

std::string edge_length_error(const MetricTree& tree, const Quad& want) {
  for (VertexId v : tree.vertices()) {
    if (v == tree.root()) continue;
    if (tree.edge_length(v) != want) {
      return "edge above " + std::to_string(v) + " has length " + tree.edge_length(v).to_string() + ", expected " +
             want.to_string();
    }
  }
  return {};
}

// Vertices of `next` strictly between c and its parent in `prev`, bottom up;
// nullopt unless they are all new.
std::optional<std::vector<VertexId>> inner_arc(const MetricTree& prev, const MetricTree& next, VertexId c) {
  const VertexId p = *prev.parent(c);
  std::vector<VertexId> inner;
  auto x = next.parent(c);
  while (x && *x != p) {
    if (prev.contains(*x)) return std::nullopt;
    inner.push_back(*x);
    x = next.parent(*x);
  }
  if (!x) return std::nullopt;
  return inner;
}

// Removing `leaves` from `next` must leave a subdivision of `prev`.
std::string retract_error(const MetricTree& prev, const MetricTree& next, const std::vector<VertexId>& leaves) {
  if (prev.root() != next.root()) return "roots differ";
  std::unordered_map<VertexId, std::size_t> leaf_children;
  std::vector<bool> is_collapsed(next.id_bound(), false);
  for (VertexId w : leaves) {
    if (!next.contains(w) || !next.is_leaf(w) || w == next.root()) return "vertex " + std::to_string(w) + " is not a leaf";
    if (prev.contains(w)) return "collapsed leaf " + std::to_string(w) + " belongs to the previous level";
    if (is_collapsed[w]) return "leaf " + std::to_string(w) + " listed twice";
    is_collapsed[w] = true;
    ++leaf_children[*next.parent(w)];
  }
  std::size_t inner_total = 0;
  for (VertexId c : prev.vertices()) {
    if (!next.contains(c)) return "vertex " + std::to_string(c) + " is missing";
    if (c == prev.root()) continue;
    auto inner = inner_arc(prev, next, c);
    if (!inner) return "edge above " + std::to_string(c) + " is not subdivided in place";
    for (VertexId x : *inner) {
      auto it = leaf_children.find(x);
      std::size_t kept = next.child_count(x) - (it == leaf_children.end() ? 0 : it->second);
      if (kept != 1) return "subdivision vertex " + std::to_string(x) + " branches after collapsing";
    }
    inner_total += inner->size();
    const VertexId p = *prev.parent(c);
    if (next.depth(c) - next.depth(p) != prev.edge_length(c)) {
      return "edge above " + std::to_string(c) + " changed length";
    }
  }
  if (prev.vertex_count() + inner_total + leaves.size() != next.vertex_count()) {
    return "vertices outside the subdivided previous tree and the collapsed leaves";
  }
  return {};
}

std::string restriction_error(const MetricTree& prev, const PlanarMap& gprev, const MetricTree& next,
                              const PlanarMap& gnext) {
  for (VertexId v : prev.vertices()) {
    if (gnext.image(v) != gprev.image(v)) return "vertex " + std::to_string(v) + " moved to " + str(gnext.image(v));
    if (v == prev.root()) continue;
    const VertexId p = *prev.parent(v);
    auto inner = inner_arc(prev, next, v);
    if (!inner) return "edge above " + std::to_string(v) + " is not subdivided in place";
    for (VertexId x : *inner) {
      auto phi = quad_ratio(next.depth(v) - next.depth(x), prev.edge_length(v));
      if (!phi) return "vertex " + std::to_string(x) + " is not at a dyadic fraction of its edge";
      Point2 want = gprev.image(v) + scale(gprev.image(p) - gprev.image(v), *phi);
      if (gnext.image(x) != want) return "vertex " + std::to_string(x) + " maps off the old edge";
    }
  }
  return {};
}

std::string displacement_error(const TowerLevel& level) {
  auto r = level.retraction();
  auto rt = level.retraction_t();
  if (r.sup_displacement() != leg(level.n)) return "displacement " + r.sup_displacement().to_string();
  if (rt.sup_displacement() != hyp(level.n)) return "tilde displacement " + rt.sup_displacement().to_string();
  return {};
}

std::size_t interval_count(const TowerLevel& level) { return pow4(level.n - 1); }

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
  return out;
}

}  // namespace

std::vector<Check> check_hypotheses(const std::vector<TowerLevel>& tower, std::size_t index) {
  const TowerLevel& level = tower.at(index);
  const TowerLevel* prev = index > 0 ? &tower[index - 1] : nullptr;
  const int n = level.n;
  std::vector<Check> out;

  out.push_back(run_check("(1) edge lengths", n, [&] {
    std::string e = edge_length_error(*level.tree, leg(n));
    if (e.empty()) e = edge_length_error(*level.tree_t, hyp(n));
    return e;
  }));
  if (prev) {
    out.push_back(run_check("(2) monotone retract", n, [&] {
      std::string e = retract_error(*prev->tree, *level.tree, level.new_leaves);
      if (!e.empty()) return "E: " + e;
      e = retract_error(*prev->tree_t, *level.tree_t, level.new_leaves_t);
      return e.empty() ? e : "Et: " + e;
    }));
    out.push_back(run_check("(3) retraction displacement", n, [&] { return displacement_error(level); }));
  }
  out.push_back(run_check("(4) 1-Lipschitz", n, [&]() -> std::string {
    if (level.map.lipschitz() != Quad(1) || level.map_t.lipschitz() != Quad(1)) return "declared constant is not 1";
    auto v = level.map.lipschitz_violations();
    if (!v.empty()) return "g stretches the edge above " + std::to_string(v.front());
    auto vt = level.map_t.lipschitz_violations();
    if (!vt.empty()) return "gt stretches the edge above " + std::to_string(vt.front());
    return {};
  }));
  if (prev) {
    out.push_back(run_check("(5) restriction", n, [&] {
      std::string e = restriction_error(*prev->tree, prev->map, *level.tree, level.map);
      if (!e.empty()) return "g: " + e;
      e = restriction_error(*prev->tree_t, prev->map_t, *level.tree_t, level.map_t);
      return e.empty() ? e : "gt: " + e;
    }));
  }
  out.push_back(run_check("(6) triangles", n, [&]() -> std::string {
    if (level.triangles.size() != interval_count(level)) {
      return std::to_string(level.triangles.size()) + " triangles, expected " + std::to_string(interval_count(level));
    }
    const Dyadic leg_sq = Dyadic::pow2(2 - 2 * n);
    for (std::size_t i = 0; i < level.triangles.size(); ++i) {
      const auto& t = level.triangles[i];
      if (!t.is_isosceles_right()) return "triangle " + std::to_string(i + 1) + " is not isosceles right at b";
      if (t.leg_squared() != leg_sq) return "triangle " + std::to_string(i + 1) + " has squared leg " + t.leg_squared().to_string();
    }
    return {};
  }));
  out.push_back(run_check("(7) parametrization", n, [&]() -> std::string {
    if (level.triangles.size() != interval_count(level)) return "triangle count does not match the partition";
    for (std::size_t i = 1; i <= level.triangles.size(); ++i) {
      auto rep = check_parameterization(level, i);
      if (!rep.ok()) return join(rep.witnesses);
    }
    return {};
  }));
  return out;
}

Check check_gap_bound(const TowerLevel& level) {
  const int n = level.n;
  return run_check("gap bound", n, [&]() -> std::string {
    auto sd = sup_distance(level.curve(), level.curve_t(), hyp(n));
    const Dyadic bound = Dyadic::pow2(3 - 2 * n);
    if (sd.squared > bound || sd.within_bound != true) {
      return "squared sup distance " + sd.squared.to_string() + " at t = " + sd.attained_at.to_string() + " exceeds " +
             bound.to_string();
    }
    return {};
  });
}

Check check_retraction_displacement(const TowerLevel& level) {
  return run_check("retraction displacement", level.n, [&] { return displacement_error(level); });
}

Check check_isometry(const TowerLevel& level) {
  return run_check("edge isometry", level.n, [&]() -> std::string {
    auto v = level.map.non_isometric_edges();
    if (!v.empty()) return "g is not isometric on the edge above " + std::to_string(v.front());
    auto vt = level.map_t.non_isometric_edges();
    if (!vt.empty()) return "gt is not isometric on the edge above " + std::to_string(vt.front());
    return {};
  });
}

Check check_density(const TowerLevel& level) {
  const int n = level.n;
  return run_check("density", n, [&]() -> std::string {
    std::vector<Point2> samples;
    const PlanePath curve = level.curve();
    for (const auto& b : curve.breakpoints()) samples.push_back(b.point);
    const OrderedTriangle base{{0, 0}, {0, 1}, {1, 1}};
    if (!density_check(samples, base, hyp(n), static_cast<unsigned>(n + 1))) {
      return "some grid point of pitch 1/2^" + std::to_string(n + 1) + " is farther than " + hyp(n).to_string() +
             " from every sample";
    }
    return {};
  });
}

Check check_counts(const std::vector<TowerLevel>& tower, std::size_t index) {
  const TowerLevel& level = tower.at(index);
  const int n = level.n;
  return run_check("counts and lengths", n, [&]() -> std::string {
    std::uint64_t e = 2, et = 1;
    if (index > 0) {
      e = 2 * tower[index - 1].tree->edge_count() + 2 * pow4(n - 2);
      et = 2 * tower[index - 1].tree_t->edge_count() + pow4(n - 2);
    }
    std::ostringstream err;
    if (level.tree->edge_count() != e) err << "E has " << level.tree->edge_count() << " edges, expected " << e << "; ";
    if (level.tree_t->edge_count() != et) err << "Et has " << level.tree_t->edge_count() << " edges, expected " << et << "; ";
    if (level.path.size() != 2 * pow4(n - 1) + 1) err << "pi has " << level.path.size() << " breakpoints; ";
    if (level.path_t.size() != pow4(n - 1) + 1) err << "pit has " << level.path_t.size() << " breakpoints; ";
    Quad len = path_length(level.curve());
    Quad len_t = path_length(level.curve_t());
    if (len != Quad(Dyadic::pow2(n))) err << "length of g pi is " << len.to_string() << "; ";
    if (len_t != Quad(Dyadic(0), Dyadic::pow2(n - 1))) err << "length of gt pit is " << len_t.to_string() << "; ";
    std::string s = err.str();
    if (!s.empty()) s.resize(s.size() - 2);
    return s;
  });
}

Check check_containment(const std::vector<TowerLevel>& tower, std::size_t index) {
  const TowerLevel& level = tower.at(index);
  const int n = level.n;
  return run_check("containment", n, [&]() -> std::string {
    const std::size_t count = level.triangles.size();
    auto inside = [&](const Dyadic& t, const Point2& p) {
      BigInt k = t.floor_scaled(2 * (n - 1));
      auto i = static_cast<std::size_t>(k);  // 0-based interval with t in [i, i+1) / 4^(n-1)
      bool ok = true;
      if (i < count) ok = level.triangles[i].contains(p);
      if (ok && i > 0 && t.scaled(2 * (n - 1)) == Dyadic(static_cast<long long>(i))) ok = level.triangles[i - 1].contains(p);
      return ok;
    };
    for (std::size_t m = index; m < tower.size(); ++m) {
      for (const PlanePath& curve : {tower[m].curve(), tower[m].curve_t()}) {
        for (const auto& b : curve.breakpoints()) {
          if (!inside(b.param, b.point)) {
            return "level " + std::to_string(tower[m].n) + " point " + str(b.point) + " at t = " + b.param.to_string() +
                   " leaves its level-" + std::to_string(n) + " triangle";
          }
        }
      }
    }
    return {};
  });
}

unsigned default_refine(int n) { return n <= 4 ? 1 : 0; }

Certificate certify(const std::vector<TowerLevel>& tower, std::size_t index, bool tilde, unsigned refine,
                    unsigned workers) {
  const TowerLevel& level = tower.at(index);
  const auto& tree = tilde ? level.tree_t : level.tree;
  const TreePath& first = tilde ? tower.front().path_t : tower.front().path;
  const TreePath& path = tilde ? level.path_t : level.path;
  const PlanarMap& map = tilde ? level.map_t : level.map;
  tree->refresh();

  TreePath loop = loop_concat_reverse(first.in_tree(tree), path);
  HeightFunction h = height_from_tree_path(loop, map.lipschitz());
  PlanePath plane = map_path(loop, map);
  HeightReport check = verify_height_function(plane, h, refine, workers);
  ClassReport classes = class_consistency_check(plane, h, refine);
  return Certificate{
      .n = level.n,
      .tilde = tilde,
      .witness = TreeWitness{tree, std::move(loop), map, std::move(h), std::move(check)},
      .loop = std::move(plane),
      .classes = std::move(classes),
      .error = {},
  };
}

PlanePath alpha_beta_loop(const TowerLevel& level1) { return loop_concat_reverse(level1.curve(), level1.curve_t()); }

bool SuiteReport::verdicts_passed() const {
  return alpha_gamma.kind == Verdict::Kind::kTreeLike && beta_gamma.kind == Verdict::Kind::kTreeLike &&
         alpha_beta.kind == Verdict::Kind::kNotTreeLike;
}

bool SuiteReport::passed() const {
  for (const auto* family : {&hypotheses, &gap_bound, &retraction, &isometry, &density, &counts, &containment}) {
    for (const Check& c : *family) {
      if (!c.passed) return false;
    }
  }
  for (const Certificate& c : certificates) {
    if (!c.passed()) return false;
  }
  return verdicts_passed();
}

SuiteReport run_suite(const std::vector<TowerLevel>& tower, const SuiteOptions& options) {
  if (tower.empty()) throw std::invalid_argument("run_suite: empty tower");
  SuiteReport rep;
  for (std::size_t i = 0; i < tower.size(); ++i) {
    const TowerLevel& level = tower[i];
    for (auto& c : check_hypotheses(tower, i)) rep.hypotheses.push_back(std::move(c));
    rep.gap_bound.push_back(check_gap_bound(level));
    if (level.n >= 2) {
      rep.retraction.push_back(check_retraction_displacement(level));
      rep.density.push_back(check_density(level));
    }
    rep.isometry.push_back(check_isometry(level));
    rep.counts.push_back(check_counts(tower, i));
    rep.containment.push_back(check_containment(tower, i));
  }

  for (std::size_t i = 0; i < tower.size(); ++i) {
    const unsigned refine = options.refine.value_or(default_refine(tower[i].n));
    for (bool tilde : {false, true}) {
      try {
        rep.certificates.push_back(certify(tower, i, tilde, refine, options.workers));
      } catch (const std::exception& e) {
        Certificate bad;
        bad.n = tower[i].n;
        bad.tilde = tilde;
        bad.error = e.what();
        rep.certificates.push_back(std::move(bad));
      }
    }
  }

  auto factored = [&](bool tilde) {
    Verdict v;
    const Certificate& top = rep.certificates[2 * (tower.size() - 1) + (tilde ? 1 : 0)];
    if (top.passed()) {
      v.kind = Verdict::Kind::kTreeLike;
      v.reason = std::string("factors through ") + (tilde ? "Et_" : "E_") + std::to_string(top.n) +
                 " with a verified height function";
      v.witness = top.witness;
    } else {
      v.reason = "the level certificate failed";
    }
    return v;
  };
  rep.alpha_gamma = factored(false);
  rep.beta_gamma = factored(true);
  try {
    rep.alpha_beta = decide_polygonal_loop(alpha_beta_loop(tower.front()));
  } catch (const std::exception& e) {
    rep.alpha_beta.reason = e.what();
  }
  return rep;
}

}  // namespace treelike
