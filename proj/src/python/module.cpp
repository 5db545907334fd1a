#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gronwall/demos.hpp"
#include "gronwall/io.hpp"

namespace py = pybind11;
using gronwall::io::Json;

namespace {

// Every entry point speaks JSON text; the Python layer owns dict conversion.
std::string check_m(const std::string& measure, std::optional<double> a) {
  auto mu = gronwall::io::measure_from_json(gronwall::io::parse(measure));
  if (a) return gronwall::io::to_json(gronwall::check_condition_M_a(mu, *a), *a).dump();
  Json out = gronwall::io::to_json(gronwall::check_condition_M(mu));
  out["sigma_finite"] = gronwall::io::to_json(gronwall::sigma_finite_certificate(mu));
  return out.dump();
}

std::string semifinite(const std::string& measure) {
  auto mu = gronwall::io::measure_from_json(gronwall::io::parse(measure));
  return gronwall::io::measure_to_json(gronwall::semi_finite_part(mu)).dump();
}

std::string integrate(const std::string& function, const std::string& measure,
                      const std::string& interval, bool absolute) {
  auto f = gronwall::io::function_from_json(gronwall::io::parse(function));
  auto mu = gronwall::io::measure_from_json(gronwall::io::parse(measure));
  auto I = gronwall::io::interval_from_json(gronwall::io::parse(interval));
  auto r = absolute ? gronwall::integrate_abs(f, mu, I) : gronwall::integrate(f, mu, I);
  return gronwall::io::to_json(r).dump();
}

std::string solve(const std::string& measure, const std::string& function, double a, double b) {
  auto mu = gronwall::io::measure_from_json(gronwall::io::parse(measure));
  auto f = gronwall::io::function_from_json(gronwall::io::parse(function));
  return gronwall::io::function_to_json(gronwall::solve_forward(mu, f, a, b)).dump();
}

std::string counterexample(const std::string& measure, double a, std::optional<double> b) {
  auto mu = gronwall::io::measure_from_json(gronwall::io::parse(measure));
  return gronwall::io::to_json(gronwall::build_counterexample(mu, a, b)).dump();
}

std::string demo(const std::string& name, std::optional<int> count) {
  auto outcome = gronwall::run_demo(name, count);
  Json out;
  out["name"] = outcome.name;
  out["passed"] = outcome.passed;
  out["report"] = outcome.report;
  return out.dump();
}

}  // namespace

PYBIND11_MODULE(_gronwall, m) {
  m.doc() = "Condition (M), semi-finite parts and product-integral counterexamples";

  static py::exception<gronwall::Error> error(m, "GronwallError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const gronwall::Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
      exc.attr("kind") = gronwall::to_string(e.kind());
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  m.def("check_m", &check_m, py::arg("measure"), py::arg("a") = py::none());
  m.def("semifinite", &semifinite, py::arg("measure"));
  m.def("integrate", &integrate, py::arg("function"), py::arg("measure"), py::arg("interval"),
        py::arg("absolute") = false);
  m.def("solve", &solve, py::arg("measure"), py::arg("function"), py::arg("a"), py::arg("b"));
  m.def("counterexample", &counterexample, py::arg("measure"), py::arg("a"), py::arg("b") = py::none());
  m.def("demo", &demo, py::arg("name"), py::arg("count") = py::none());
  m.def("demo_names", [] { return gronwall::demo_names(); });
}
