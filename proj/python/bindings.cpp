#include <optional>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cvsearch/document.hpp"
#include "cvsearch/error.hpp"
#include "cvsearch/metrics.hpp"
#include "validate.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace cvsearch;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

// A 1-d array of length m is one qunat; an m-by-m array is two.
Wavefunction from_array(const ComplexArray& a) {
  if (a.ndim() == 1) {
    const auto g = make_grid(static_cast<int>(a.shape(0)), 1);
    return Wavefunction(g, std::vector<Complex>(a.data(), a.data() + a.size()));
  }
  if (a.ndim() == 2 && a.shape(0) == a.shape(1)) {
    const auto g = make_grid(static_cast<int>(a.shape(0)), 2);
    return Wavefunction(g, std::vector<Complex>(a.data(), a.data() + a.size()));
  }
  throw Error(ErrorKind::InvalidParameter, "state must be a vector of length m or an m-by-m array");
}

py::array_t<Complex> to_array(const Wavefunction& psi) {
  const auto m = static_cast<py::ssize_t>(psi.grid().points());
  std::vector<py::ssize_t> shape = psi.grid().qunats() == 1 ? std::vector<py::ssize_t>{m}
                                                             : std::vector<py::ssize_t>{m, m};
  py::array_t<Complex> out(shape);
  std::copy(psi.amplitudes().begin(), psi.amplitudes().end(), out.mutable_data());
  return out;
}

Region window(const GridSpec& g, const std::vector<double>& center, double width) {
  Region r;
  for (int a = 0; a < g.qunats(); ++a) {
    const double c = center.size() == 1 ? center[0] : center.at(static_cast<std::size_t>(a));
    r.axes.push_back(Interval{c, width});
  }
  return r;
}

py::object parse_json(const std::string& text) {
  return py::module_::import("json").attr("loads")(text);
}

std::string dump_json(const py::object& obj) {
  return py::module_::import("json").attr("dumps")(obj).cast<std::string>();
}

}  // namespace

PYBIND11_MODULE(_cvsearch, m) {
  m.doc() = "Continuous-variable Grover search on a self-conjugate grid";
  m.attr("__version__") = kVersion;

  static py::exception<Error> error(m, "CvsearchError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error(( std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  m.def("coordinates", [](int points) {
    const auto g = make_grid(points, 1);
    py::array_t<double> x(std::vector<py::ssize_t>{points});
    auto out = x.mutable_unchecked<1>();
    for (int j = 0; j < points; ++j) out(j) = g.coordinate(j);
    return x;
  }, "points"_a, "Grid coordinates x_j = (j - m/2) dx with dx = sqrt(pi/m).");

  m.def("fourier", [](const ComplexArray& psi) { return to_array(fourier_apply(from_array(psi))); },
        "psi"_a, "Exact transform on the self-conjugate grid.");
  m.def("fourier_adjoint", [](const ComplexArray& psi) { return to_array(fourier_adjoint_apply(from_array(psi))); },
        "psi"_a, "Adjoint (inverse) of the exact transform.");
  m.def("gft", [](const ComplexArray& psi, double theta) {
    const auto w = from_array(psi);
    return to_array(make_transform(w.grid(), theta).apply(w));
  }, "psi"_a, "theta"_a, "Generalized transform at angle theta (unitarized kernel away from pi/2).");

  m.def("fubini_study_distance", [](const ComplexArray& a, const ComplexArray& b) {
    return fubini_study_distance(from_array(a), from_array(b));
  }, "a"_a, "b"_a);

  m.def("success_probability", [](const ComplexArray& psi, std::vector<double> target_center,
                                  double target_width, double theta) {
    const auto w = from_array(psi);
    return success_probability(w, window(w.grid(), target_center, target_width), make_transform(w.grid(), theta));
  }, "psi"_a, "target_center"_a, "target_width"_a, "theta"_a = kHalfPi);

  m.def("grover_iterate", [](const ComplexArray& psi, std::vector<double> target_center, double target_width,
                             std::optional<std::vector<double>> diffusion_center, double diffusion_width,
                             std::optional<ComplexArray> diffusion_state, double theta) {
    const auto w = from_array(psi);
    const auto& g = w.grid();
    Diffusion d;
    if (diffusion_state) {
      d = StateDiffusion{from_array(*diffusion_state)};
    } else if (diffusion_center) {
      d = IntervalDiffusion{window(g, *diffusion_center, diffusion_width)};
    } else {
      throw Error(ErrorKind::InvalidParameter, "give diffusion_center or diffusion_state");
    }
    return to_array(grover_iterate(w, window(g, target_center, target_width), d, make_transform(g, theta)));
  }, "psi"_a, "target_center"_a, "target_width"_a, "diffusion_center"_a = py::none(),
     "diffusion_width"_a = 0.0, "diffusion_state"_a = py::none(), "theta"_a = kHalfPi,
     "One application of -D F^H I_target F.");

  m.def("run", [](const py::object& config) {
    const auto c = config_from_json(nlohmann::json::parse(dump_json(config)));
    const auto doc = make_run_document(c, run_search(c));
    return parse_json(to_json(doc).dump());
  }, "config"_a, "Runs a search from a configuration dict and returns the run document.");

  m.def("sweep", [](const std::string& vary, const std::vector<std::string>& values, const py::object& base,
                    bool parallel) {
    SweepPlan plan;
    plan.vary = parse_sweep_axis(vary);
    for (const auto& v : values) plan.values.push_back(Quantity::parse(v));
    plan.base = config_from_json(nlohmann::json::parse(dump_json(base)));
    const auto rows = run_sweep(plan, parallel);
    return parse_json(to_json(rows, plan).dump());
  }, "vary"_a, "values"_a, "base"_a = py::dict(), "parallel"_a = true);

  m.def("validate", [](int points, int qunats, std::optional<double> theta) {
    return parse_json(tools::run_validation(points, qunats, theta).dump());
  }, "grid_size"_a, "qunats"_a = 1, "theta"_a = py::none());
}
