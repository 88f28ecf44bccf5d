#include "treelike/render.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace treelike {

namespace {

constexpr const char* kBlue = "#1f5fbf";
constexpr const char* kRed = "#c8102e";
constexpr double kMargin = 20;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct Frame {
  double x0;
  double y0;
  double scale;
  // Plane coordinates with y up.
  std::string at(const Point2& p) const {
    return fmt(x0 + p.x.to_double() * scale) + "," + fmt(y0 + (1 - p.y.to_double()) * scale);
  }
};

void polyline(std::ostringstream& out, const Frame& f, const PlanePath& path, const char* color, double width,
              bool dashed) {
  out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << fmt(width) << "\"";
  if (dashed) out << " stroke-dasharray=\"6,4\"";
  out << " stroke-linejoin=\"round\" points=\"";
  for (std::size_t i = 0; i < path.size(); ++i) out << (i ? " " : "") << f.at(path.breakpoints()[i].point);
  out << "\"/>\n";
}

// Layered layout: leaves spread left to right in depth-first order, inner
// vertices centred over their children, y = depth.
struct TreeLayout {
  std::vector<double> x;
  std::vector<double> depth;
  double width = 0;
  double height = 0;
};

TreeLayout layout(const MetricTree& tree, double leaf_gap) {
  auto kids = tree.child_lists();
  TreeLayout out;
  out.x.assign(tree.id_bound(), 0);
  out.depth.assign(tree.id_bound(), 0);
  double next_leaf = 0;
  std::vector<std::pair<VertexId, bool>> stack{{tree.root(), false}};
  while (!stack.empty()) {
    auto [v, done] = stack.back();
    stack.pop_back();
    if (done) {
      const auto& k = kids[v];
      out.x[v] = (out.x[k.front()] + out.x[k.back()]) / 2;
      continue;
    }
    out.depth[v] = tree.depth(v).to_double();
    out.height = std::max(out.height, out.depth[v]);
    if (kids[v].empty()) {
      out.x[v] = next_leaf;
      next_leaf += leaf_gap;
      continue;
    }
    stack.push_back({v, true});
    for (auto it = kids[v].rbegin(); it != kids[v].rend(); ++it) stack.push_back({*it, false});
  }
  out.width = std::max(0.0, next_leaf - leaf_gap);
  return out;
}

void draw_tree(std::ostringstream& out, const MetricTree& tree, double x0, double y0, double scale, const char* color,
               const std::string& label) {
  TreeLayout lay = layout(tree, 8);
  out << "  <text x=\"" << fmt(x0) << "\" y=\"" << fmt(y0 - 6) << "\" font-family=\"sans-serif\" font-size=\"12\">"
      << label << "</text>\n";
  out << "  <g stroke=\"" << color << "\" stroke-width=\"1.2\">\n";
  for (VertexId v : tree.vertices()) {
    if (v == tree.root()) continue;
    VertexId p = *tree.parent(v);
    out << "    <line x1=\"" << fmt(x0 + lay.x[p]) << "\" y1=\"" << fmt(y0 + lay.depth[p] * scale) << "\" x2=\""
        << fmt(x0 + lay.x[v]) << "\" y2=\"" << fmt(y0 + lay.depth[v] * scale) << "\"/>\n";
  }
  out << "  </g>\n  <g fill=\"#222\">\n";
  for (VertexId v : tree.vertices()) {
    out << "    <circle cx=\"" << fmt(x0 + lay.x[v]) << "\" cy=\"" << fmt(y0 + lay.depth[v] * scale) << "\" r=\"1.6\"/>\n";
  }
  out << "  </g>\n";
}

}  // namespace

std::set<CurveSet> parse_curve_list(const std::string& list) {
  std::set<CurveSet> out;
  std::stringstream in(list);
  std::string name;
  while (std::getline(in, name, ',')) {
    if (name == "alpha") {
      out.insert(CurveSet::kAlpha);
    } else if (name == "beta") {
      out.insert(CurveSet::kBeta);
    } else if (name == "gamma_n" || name == "gamma") {
      out.insert(CurveSet::kGamma);
    } else if (name == "trees") {
      out.insert(CurveSet::kTrees);
    } else {
      throw std::invalid_argument("unknown curve '" + name + "' (expected alpha, beta, gamma_n, trees)");
    }
  }
  if (out.empty()) throw std::invalid_argument("empty curve list");
  return out;
}

std::string render_svg(const std::vector<TowerLevel>& tower, const RenderOptions& options) {
  if (tower.empty()) throw std::invalid_argument("render: empty tower");
  const int top = static_cast<int>(tower.size());
  const int n = options.level == 0 ? top : options.level;
  if (n < 1 || n > top) throw std::invalid_argument("render: level " + std::to_string(n) + " is not in the state");
  if (options.scale < 1) throw std::invalid_argument("render: scale must be at least 1");
  const TowerLevel& level = tower[n - 1];
  const double s = options.scale;
  const bool has = options.curves.count(CurveSet::kAlpha) || options.curves.count(CurveSet::kBeta) ||
                   options.curves.count(CurveSet::kGamma);

  std::ostringstream body;
  double width = 2 * kMargin;
  double height = 2 * kMargin;
  const double stroke = std::max(0.6, s / 300.0);
  if (has) {
    Frame f{kMargin, kMargin, s};
    width += s;
    height += s;
    body << "  <g fill=\"none\" stroke=\"#bbb\" stroke-width=\"0.5\">\n";
    for (const auto& t : level.triangles) {
      body << "    <polygon points=\"" << f.at(t.a) << " " << f.at(t.b) << " " << f.at(t.c) << "\"/>\n";
    }
    body << "  </g>\n";
    if (options.curves.count(CurveSet::kGamma)) {
      polyline(body, f, level.curve(), kBlue, stroke, false);
      polyline(body, f, level.curve_t(), kRed, stroke, false);
    }
    if (options.curves.count(CurveSet::kAlpha)) polyline(body, f, tower.front().curve(), kBlue, stroke * 1.5, true);
    if (options.curves.count(CurveSet::kBeta)) polyline(body, f, tower.front().curve_t(), kRed, stroke * 1.5, true);
  }
  if (options.curves.count(CurveSet::kTrees)) {
    const double x0 = has ? width : kMargin;
    const double y0 = kMargin + 14;
    TreeLayout le = layout(*level.tree, 8);
    TreeLayout lt = layout(*level.tree_t, 8);
    draw_tree(body, *level.tree, x0, y0, s, kBlue, "E_" + std::to_string(n));
    const double y1 = y0 + le.height * s + 40;
    draw_tree(body, *level.tree_t, x0, y1, s, kRed, "Et_" + std::to_string(n));
    width = x0 + std::max(le.width, lt.width) + kMargin;
    height = std::max(height, y1 + lt.height * s + kMargin);
  }

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height) << "\">\n"
      << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body.str() << "</svg>\n";
  return out.str();
}

}  // namespace treelike
