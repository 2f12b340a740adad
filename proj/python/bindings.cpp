#include "tamecert/cli.hpp"
#include "tamecert/errors.hpp"
#include "tamecert/inverse.hpp"
#include "tamecert/tameness.hpp"

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace tamecert;

namespace {

std::vector<double> to_vector(std::span<const double> v) {
  return {v.begin(), v.end()};
}

} // namespace

PYBIND11_MODULE(_tamecert, m) {
  m.doc() = "Spectral composition operators with tameness certificates";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<GridConfig>(m, "GridConfig")
      .def(py::init([](int degree, int samples, int max_order) {
             return GridConfig{degree, samples, max_order};
           }),
           py::arg("degree") = 64, py::arg("samples") = 257,
           py::arg("max_order") = 8)
      .def_readwrite("degree", &GridConfig::degree)
      .def_readwrite("samples", &GridConfig::samples)
      .def_readwrite("max_order", &GridConfig::max_order);

  py::class_<Grid, std::shared_ptr<Grid>>(m, "Grid")
      .def_static("get", [](const GridConfig &c) {
        return std::const_pointer_cast<Grid>(Grid::get(c));
      })
      .def_property_readonly("config", &Grid::config)
      .def_property_readonly("nodes",
                             [](const Grid &g) { return to_vector(g.nodes()); });

  py::class_<SmoothFn>(m, "SmoothFn")
      .def(py::init([](std::shared_ptr<Grid> g, std::vector<double> c) {
             return SmoothFn(g, std::move(c));
           }),
           py::arg("grid"), py::arg("coeffs"))
      .def_static("zero", [](std::shared_ptr<Grid> g) { return SmoothFn::zero(g); })
      .def_static("constant", [](std::shared_ptr<Grid> g, double c) {
        return SmoothFn::constant(g, c);
      })
      .def_static("identity",
                  [](std::shared_ptr<Grid> g) { return SmoothFn::identity(g); })
      .def_static(
          "from_values",
          [](std::shared_ptr<Grid> g, std::vector<double> v) { return project(g, v); },
          "Project samples taken at the grid nodes.")
      .def_property_readonly("coeffs",
                             [](const SmoothFn &f) { return to_vector(f.coeffs()); })
      .def_property_readonly("aliasing_warning", &SmoothFn::aliasing_warning)
      .def("__call__", &SmoothFn::eval)
      .def("derivative", py::overload_cast<int>(&SmoothFn::derivative, py::const_),
           py::arg("order") = 1)
      .def("node_values", &SmoothFn::node_values, py::arg("order") = 0)
      .def("sup_abs", &SmoothFn::sup_abs, py::arg("order") = 0)
      .def("sup_abs_all", &SmoothFn::sup_abs_all)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(double() * py::self)
      .def("__mul__", [](const SmoothFn &f, double t) { return t * f; });

  py::class_<Grading>(m, "Grading")
      .def(py::init<std::vector<double>>())
      .def_static("constant", &Grading::constant)
      .def_property_readonly("values", &Grading::values)
      .def_property_readonly("max_order", &Grading::max_order)
      .def("scaled", &Grading::scaled)
      .def("__len__", &Grading::size)
      .def("__getitem__", &Grading::operator[]);

  m.def("gauge_norm",
        [](const SmoothFn &x, const Grading &g) { return gauge_norm(x, g).value(); });

  py::class_<Kernel2>(m, "Kernel2");
  py::class_<BivarFn, Kernel2>(m, "BivarFn")
      .def_static("parse", &BivarFn::parse)
      .def_static("constant", &BivarFn::constant)
      .def("__call__", &BivarFn::eval, py::arg("s"), py::arg("eta"))
      .def("partial", &BivarFn::partial)
      .def("__str__", &BivarFn::to_string);

  py::class_<CompOp>(m, "CompOp")
      .def(py::init([](const BivarFn &phi, const GridConfig &g) {
             return CompOp(phi, g);
           }),
           py::arg("phi"), py::arg("grid") = GridConfig{})
      .def_property_readonly(
          "grid", [](const CompOp &op) { return std::const_pointer_cast<Grid>(op.grid()); })
      .def("apply", &CompOp::apply)
      .def("deriv_apply", &CompOp::deriv_apply)
      .def("ell_apply", &CompOp::ell_apply)
      .def("f1_apply", &CompOp::f1_apply);

  py::class_<GeneratorFamily>(m, "GeneratorFamily")
      .def_property_readonly("l0", &GeneratorFamily::l0)
      .def_property_readonly("B0", &GeneratorFamily::B0)
      .def_property_readonly("n", &GeneratorFamily::n)
      .def_property_readonly("chi_zero", &GeneratorFamily::chi_zero)
      .def("canonical", &GeneratorFamily::canonical)
      .def("is_member",
           [](const GeneratorFamily &g, const Grading &mm) {
             std::string why;
             const bool ok = g.is_member(mm, &why);
             return py::make_tuple(ok, why);
           })
      .def("merge", &GeneratorFamily::merge)
      .def("absorb", [](const GeneratorFamily &g, std::vector<double> b) {
        const auto a = g.absorb(b);
        return py::make_tuple(a.m, a.epsilon);
      });

  m.def(
      "build_generator",
      [](const CompOp &op, const SmoothFn &x, int l0, int N, int quad_nodes) {
        return build_generator(op, x, l0, N, quad_nodes);
      },
      py::arg("op"), py::arg("x"), py::arg("l0"), py::arg("N"),
      py::arg("quad_nodes") = kDefaultQuadNodes);

  m.def("jet_derivative", &jet_derivative, py::arg("chi1"), py::arg("u"),
        py::arg("v"), py::arg("order"), py::arg("s"));

  py::class_<ColoReport>(m, "ColoReport")
      .def_readonly("passed", &ColoReport::passed)
      .def_readonly("epsilon", &ColoReport::epsilon)
      .def_readonly("worst_ratio", &ColoReport::worst_ratio)
      .def_readonly("samples", &ColoReport::samples);

  m.def("colo_check", &colo_check, py::arg("op"), py::arg("y0"),
        py::arg("epsilon"), py::arg("m"), py::arg("samples") = kDefaultDiskSamples,
        py::arg("seed") = 0);
  m.def("contraction_ratio", &contraction_ratio, py::arg("op"), py::arg("y0"),
        py::arg("m"), py::arg("pairs") = kDefaultPairs, py::arg("seed") = 0);

  py::class_<InversionResult>(m, "InversionResult")
      .def_readonly("y", &InversionResult::y)
      .def_readonly("increments", &InversionResult::increments)
      .def_readonly("ratios", &InversionResult::ratios)
      .def_readonly("residual_sup", &InversionResult::residual_sup)
      .def_readonly("v0_gauge", &InversionResult::v0_gauge)
      .def_readonly("converged", &InversionResult::converged)
      .def_readonly("failure", &InversionResult::failure)
      .def_property_readonly("certified", &InversionResult::certified);

  m.def("newton_invert", &newton_invert, py::arg("op"), py::arg("y0"),
        py::arg("x"), py::arg("m"), py::arg("epsilon") = 0.5,
        py::arg("tol") = kDefaultTol, py::arg("maxiter") = kDefaultMaxIter);

  m.def(
      "selftest",
      [] {
        std::ostringstream os;
        const int code = cmd_selftest(SelftestOptions{}, os);
        return py::make_tuple(code, os.str());
      },
      "Run the built-in suites; returns (exit code, report).");
}
