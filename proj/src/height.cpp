#include "treelike/height.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace treelike {

namespace {

// Range minimum over a fixed array; O(1) queries after O(n log n) setup.
class SparseMin {
 public:
  explicit SparseMin(const std::vector<Quad>& values) {
    table_.push_back(values);
    for (std::size_t w = 1; 2 * w <= values.size(); w *= 2) {
      const auto& prev = table_.back();
      std::vector<Quad> next(prev.size() - w);
      for (std::size_t i = 0; i < next.size(); ++i) next[i] = min(prev[i], prev[i + w]);
      table_.push_back(std::move(next));
    }
  }

  // min over [i, j], i <= j
  const Quad& query(std::size_t i, std::size_t j) const {
    std::size_t len = j - i + 1;
    std::size_t k = 0;
    while ((std::size_t{2} << k) <= len) ++k;
    return min(table_[k][i], table_[k][j + 1 - (std::size_t{1} << k)]);
  }

 private:
  std::vector<std::vector<Quad>> table_;
};

}  // namespace

HeightFunction::HeightFunction(std::vector<Breakpoint> breakpoints) : breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.size() < 2) throw std::invalid_argument("HeightFunction: needs at least two breakpoints");
  if (!breakpoints_.front().param.is_zero() || breakpoints_.back().param != Dyadic(1)) {
    throw std::invalid_argument("HeightFunction: parameters must run from 0 to 1");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (i > 0 && !(breakpoints_[i - 1].param < breakpoints_[i].param)) {
      throw std::invalid_argument("HeightFunction: parameters must be strictly increasing");
    }
    if (breakpoints_[i].value.sign() < 0) throw std::invalid_argument("HeightFunction: negative value");
  }
}

Quad HeightFunction::eval(const Dyadic& t) const {
  if (t.sign() < 0 || t > Dyadic(1)) throw std::out_of_range("parameter " + t.to_string() + " outside [0, 1]");
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t,
                             [](const Dyadic& v, const Breakpoint& b) { return v < b.param; });
  const auto& b0 = *(it - 1);
  if (b0.param == t) return b0.value;
  const auto& b1 = *it;
  auto phi = divide_exact(t - b0.param, b1.param - b0.param);
  if (!phi) throw std::domain_error("height interpolation at " + t.to_string() + " leaves the dyadic rationals");
  return b0.value + (b1.value - b0.value) * Quad(*phi);
}

HeightFunction height_from_tree_path(const TreePath& loop, const Quad& lipschitz) {
  if (lipschitz.sign() <= 0) throw std::invalid_argument("height_from_tree_path: Lipschitz constant must be positive");
  if (loop.start() != loop.end()) throw std::invalid_argument("height_from_tree_path: path is not a loop");
  const MetricTree& tree = loop.tree();
  const VertexId base = loop.start();
  auto height = [&](VertexId v) { return lipschitz * tree.distance(base, v); };

  const auto& bps = loop.breakpoints();
  std::vector<HeightFunction::Breakpoint> out;
  out.reserve(bps.size());
  out.push_back({bps.front().param, height(bps.front().vertex)});
  for (std::size_t i = 1; i < bps.size(); ++i) {
    VertexId u = bps[i - 1].vertex;
    VertexId v = bps[i].vertex;
    if (u != v && !tree.adjacent(u, v)) {
      // closest point of the arc u-v to the base is the median of the three
      VertexId m = tree.lca(u, v);
      for (VertexId c : {tree.lca(u, base), tree.lca(v, base)}) {
        if (tree.hops(c) > tree.hops(m)) m = c;
      }
      if (m != u && m != v) {
        auto phi = quad_ratio(tree.distance(u, m), tree.distance(u, v));
        if (!phi) throw std::domain_error("height_from_tree_path: turning point leaves the dyadic rationals");
        out.push_back({bps[i - 1].param + (bps[i].param - bps[i - 1].param) * *phi, height(m)});
      }
    }
    out.push_back({bps[i].param, height(v)});
  }
  return HeightFunction(std::move(out));
}

std::vector<Dyadic> verification_grid(const PlanePath& loop, const HeightFunction& h, unsigned refine) {
  std::vector<Dyadic> grid;
  grid.reserve(loop.size() + h.size());
  for (const auto& b : loop.breakpoints()) grid.push_back(b.param);
  for (const auto& b : h.breakpoints()) grid.push_back(b.param);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (unsigned r = 0; r < refine; ++r) {
    std::vector<Dyadic> finer;
    finer.reserve(2 * grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (i > 0) finer.push_back(midpoint(grid[i - 1], grid[i]));
      finer.push_back(grid[i]);
    }
    grid = std::move(finer);
  }
  return grid;
}

HeightReport verify_height_function(const PlanePath& loop, const HeightFunction& h, unsigned refine,
                                    unsigned workers, std::size_t max_violations) {
  const std::vector<Dyadic> grid = verification_grid(loop, h, refine);
  const std::size_t n = grid.size();
  std::vector<Point2> pts(n);
  std::vector<Quad> hs(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i] = loop.eval(grid[i]);
    hs[i] = h.eval(grid[i]);
  }

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::vector<HeightReport> partial(workers);
  auto run = [&](unsigned w) {
    HeightReport& rep = partial[w];
    for (std::size_t i = w; i < n; i += workers) {
      Quad lowest = hs[i];
      for (std::size_t j = i + 1; j < n; ++j) {
        if (hs[j] < lowest) lowest = hs[j];
        Quad rhs = hs[i] + hs[j] - lowest.scaled(1);
        Dyadic lhs = squared_distance(pts[i], pts[j]);
        Quad slack = rhs.squared() - Quad(lhs);
        ++rep.pairs_checked;
        if (slack.sign() < 0) {
          ++rep.violation_count;
          if (rep.violations.size() < max_violations) rep.violations.push_back({grid[i], grid[j], lhs, rhs});
        }
        if (!rep.min_slack_squared || slack < *rep.min_slack_squared) {
          rep.min_slack_squared = std::move(slack);
          rep.min_slack_s = grid[i];
          rep.min_slack_t = grid[j];
        }
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }

  HeightReport out;
  out.grid_points = n;
  out.refine = refine;
  for (auto& p : partial) {
    out.pairs_checked += p.pairs_checked;
    out.violation_count += p.violation_count;
    out.violations.insert(out.violations.end(), p.violations.begin(), p.violations.end());
    if (p.min_slack_squared && (!out.min_slack_squared || *p.min_slack_squared < *out.min_slack_squared ||
                                (*p.min_slack_squared == *out.min_slack_squared &&
                                 std::tie(p.min_slack_s, p.min_slack_t) < std::tie(out.min_slack_s, out.min_slack_t)))) {
      out.min_slack_squared = p.min_slack_squared;
      out.min_slack_s = p.min_slack_s;
      out.min_slack_t = p.min_slack_t;
    }
  }
  std::sort(out.violations.begin(), out.violations.end(),
            [](const PairViolation& a, const PairViolation& b) { return std::tie(a.s, a.t) < std::tie(b.s, b.t); });
  if (out.violations.size() > max_violations) out.violations.resize(max_violations);
  return out;
}

ClassReport class_consistency_check(const PlanePath& loop, const HeightFunction& h, unsigned refine,
                                    std::size_t max_violations) {
  const std::vector<Dyadic> grid = verification_grid(loop, h, refine);
  const std::size_t n = grid.size();
  std::vector<Quad> hs(n);
  for (std::size_t i = 0; i < n; ++i) hs[i] = h.eval(grid[i]);
  SparseMin rmq(hs);

  // group grid indices by exact height (canonical forms compare structurally)
  auto key_less = [&](std::size_t a, std::size_t b) {
    const Quad& x = hs[a];
    const Quad& y = hs[b];
    auto xe = std::pair(x.rat().exp(), x.irr().exp());
    auto ye = std::pair(y.rat().exp(), y.irr().exp());
    if (xe != ye) return xe < ye;
    return std::tie(x.rat().num(), x.irr().num()) < std::tie(y.rat().num(), y.irr().num());
  };
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), key_less);

  ClassReport rep;
  rep.grid_points = n;
  auto close_run = [&](std::size_t first, std::size_t count, const std::vector<std::size_t>& members) {
    rep.related_pairs += count * (count - 1) / 2;
    Point2 anchor = loop.eval(grid[first]);
    for (std::size_t m : members) {
      if (m == first) continue;
      if (loop.eval(grid[m]) != anchor) {
        ++rep.violation_count;
        if (rep.violations.size() < max_violations) rep.violations.emplace_back(grid[first], grid[m]);
      }
    }
  };
  std::vector<std::size_t> run;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t i = order[k];
    bool extends = !run.empty() && hs[run.back()] == hs[i] && rmq.query(run.back(), i) == hs[i];
    if (!extends) {
      if (run.size() > 1) close_run(run.front(), run.size(), run);
      run.clear();
    }
    run.push_back(i);
  }
  if (run.size() > 1) close_run(run.front(), run.size(), run);
  return rep;
}

bool related(const HeightFunction& h, const Dyadic& s, const Dyadic& t) {
  if (t < s) return related(h, t, s);
  Quad hs = h.eval(s);
  if (h.eval(t) != hs) return false;
  for (const auto& b : h.breakpoints()) {
    if (s < b.param && b.param < t && b.value < hs) return false;
  }
  return true;
}

QuotientTree::QuotientTree(const HeightFunction& h) : h_(h) {
  // Merge tree of superlevel sets by a monotone stack over the breakpoints:
  // the stack holds the chain of classes from the current minimum up to the
  // current point, strictly increasing in height.
  const auto& bps = h.breakpoints();
  std::vector<Quad> height;
  std::vector<long> parent;
  std::vector<long> stack;
  std::vector<long> cls(bps.size());
  for (std::size_t k = 0; k < bps.size(); ++k) {
    const Quad& v = bps[k].value;
    long popped = -1;
    while (!stack.empty() && height[stack.back()] > v) {
      popped = stack.back();
      stack.pop_back();
    }
    if (!stack.empty() && height[stack.back()] == v) {
      cls[k] = stack.back();
      continue;
    }
    long x = static_cast<long>(height.size());
    height.push_back(v);
    parent.push_back(stack.empty() ? -1 : stack.back());
    if (popped >= 0) parent[popped] = x;
    stack.push_back(x);
    cls[k] = x;
  }
  const long root = stack.front();
  base_ = height[root];

  // keep the root, leaves and branch points; splice out chain vertices
  std::vector<std::vector<long>> kids(height.size());
  for (long x = 0; x < static_cast<long>(height.size()); ++x) {
    if (parent[x] >= 0) kids[parent[x]].push_back(x);
  }
  auto kept = [&](long x) { return x == root || kids[x].size() != 1; };
  std::vector<long> new_id(height.size(), -1);
  VertexId next = 0;
  new_id[root] = next++;
  for (long x = 0; x < static_cast<long>(height.size()); ++x) {
    if (x != root && kept(x)) new_id[x] = next++;
  }
  std::vector<std::optional<MetricTree::ParentLink>> links(next);
  for (long x = 0; x < static_cast<long>(height.size()); ++x) {
    if (x == root || !kept(x)) continue;
    long up = parent[x];
    while (!kept(up)) up = parent[up];
    links[new_id[x]] = MetricTree::ParentLink{static_cast<VertexId>(new_id[up]), height[x] - height[up]};
  }
  tree_ = std::make_shared<const MetricTree>(MetricTree::from_parents(0, links, std::vector<bool>(next, true)));

  classes_.reserve(bps.size());
  for (std::size_t k = 0; k < bps.size(); ++k) {
    long y = cls[k];
    while (!kept(y)) y = kids[y].front();
    classes_.push_back({static_cast<VertexId>(new_id[y]), height[y] - height[cls[k]]});
  }
}

TreeLocation QuotientTree::class_of(const Dyadic& t) const {
  const auto& bps = h_.breakpoints();
  if (t.sign() < 0 || t > Dyadic(1)) throw std::out_of_range("parameter " + t.to_string() + " outside [0, 1]");
  auto it = std::upper_bound(bps.begin(), bps.end(), t, [](const Dyadic& v, const auto& b) { return v < b.param; });
  auto k = static_cast<std::size_t>(it - bps.begin()) - 1;
  if (bps[k].param == t) return classes_[k];
  // h is linear on the piece, so the deeper end's root path passes through t's class
  std::size_t deep = bps[k + 1].value > bps[k].value ? k + 1 : k;
  const TreeLocation& c = classes_[deep];
  return tree_->ancestor_at_depth(c.vertex, h_.eval(t) - base_);
}

QuotientTree quotient_dendrite(const HeightFunction& h) { return QuotientTree(h); }

}  // namespace treelike
