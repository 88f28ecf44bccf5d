#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "treelike/render.hpp"
#include "treelike/serialize.hpp"
#include "treelike/suite.hpp"

namespace py = pybind11;
using namespace treelike;

namespace {

PlanePath loop_from_points(const std::vector<std::pair<std::string, std::string>>& points) {
  Json j;
  j["points"] = Json::array();
  for (const auto& [x, y] : points) j["points"].push_back({x, y});
  return plane_path_from_json(j);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact tower of metric trees with planar maps, and tree-like certificates.";

  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  py::class_<Dyadic>(m, "Dyadic")
      .def(py::init([](long long v) { return Dyadic(v); }))
      .def(py::init(&Dyadic::parse))
      .def_static("pow2", &Dyadic::pow2)
      .def_property_readonly("exp", &Dyadic::exp)
      .def("__float__", &Dyadic::to_double)
      .def("__str__", &Dyadic::to_string)
      .def("__repr__", [](const Dyadic& d) { return "Dyadic('" + d.to_string() + "')"; })
      .def("__add__", [](const Dyadic& a, const Dyadic& b) { return a + b; })
      .def("__sub__", [](const Dyadic& a, const Dyadic& b) { return a - b; })
      .def("__mul__", [](const Dyadic& a, const Dyadic& b) { return a * b; })
      .def("__neg__", [](const Dyadic& a) { return -a; })
      .def("__eq__", [](const Dyadic& a, const Dyadic& b) { return a == b; })
      .def("__lt__", [](const Dyadic& a, const Dyadic& b) { return a < b; })
      .def("__le__", [](const Dyadic& a, const Dyadic& b) { return a <= b; })
      .def("__hash__", [](const Dyadic& a) { return std::hash<std::string>{}(a.to_string()); });

  py::class_<Quad>(m, "Quad")
      .def(py::init([](const Dyadic& r, const Dyadic& i) { return Quad(r, i); }), py::arg("rat"),
           py::arg("irr") = Dyadic(0))
      .def_static("sqrt2", &Quad::sqrt2)
      .def_property_readonly("rat", &Quad::rat)
      .def_property_readonly("irr", &Quad::irr)
      .def("sign", &Quad::sign)
      .def("__float__", &Quad::to_double)
      .def("__str__", &Quad::to_string)
      .def("__repr__", [](const Quad& q) { return "Quad('" + q.to_string() + "')"; })
      .def("__add__", [](const Quad& a, const Quad& b) { return a + b; })
      .def("__sub__", [](const Quad& a, const Quad& b) { return a - b; })
      .def("__mul__", [](const Quad& a, const Quad& b) { return a * b; })
      .def("__eq__", [](const Quad& a, const Quad& b) { return a == b; })
      .def("__lt__", [](const Quad& a, const Quad& b) { return a < b; });

  m.def("build_state", [](int levels) { return dump_state(build_tower(levels)); }, py::arg("levels") = 6,
        "State file text for levels 1..levels.");

  m.def(
      "verify_state",
      [](const std::string& state, std::optional<unsigned> refine, unsigned workers) {
        StateFile st = state_from_json(Json::parse(state));
        SuiteReport rep;
        {
          py::gil_scoped_release release;
          rep = run_suite(st.levels, SuiteOptions{refine, workers});
        }
        Json j = to_json(rep);
        j["integrity"] = {{"passed", st.digest_ok()}, {"stored", st.digest}, {"computed", st.computed}};
        j["passed"] = rep.passed() && st.digest_ok();
        return j.dump();
      },
      py::arg("state"), py::arg("refine") = py::none(), py::arg("workers") = 1, "Report JSON text for a state.");

  m.def(
      "render_svg",
      [](const std::string& state, int level, unsigned scale, const std::string& curves) {
        RenderOptions opt;
        opt.level = level;
        opt.scale = scale;
        opt.curves = parse_curve_list(curves);
        return render_svg(state_from_json(Json::parse(state)).levels, opt);
      },
      py::arg("state"), py::arg("level") = 0, py::arg("scale") = 400, py::arg("curves") = "gamma_n");

  m.def(
      "decide",
      [](const std::vector<std::pair<std::string, std::string>>& points) {
        return to_json(decide_polygonal_loop(loop_from_points(points))).dump();
      },
      py::arg("points"), "Verdict JSON text for a closed polygon given as (x, y) strings.");

  m.def(
      "winding_number",
      [](const std::vector<std::pair<std::string, std::string>>& points, const std::string& x, const std::string& y) {
        return winding_number(loop_from_points(points), Point2{Dyadic::parse(x), Dyadic::parse(y)});
      },
      py::arg("points"), py::arg("x"), py::arg("y"));

  m.def("level_counts", [](int levels) {
    std::vector<py::dict> out;
    for (const auto& l : build_tower(levels)) {
      py::dict d;
      d["n"] = l.n;
      d["E_edges"] = l.tree->edge_count();
      d["Et_edges"] = l.tree_t->edge_count();
      d["pi_breakpoints"] = l.path.size();
      d["pit_breakpoints"] = l.path_t.size();
      d["triangles"] = l.triangles.size();
      out.push_back(d);
    }
    return out;
  });
}
