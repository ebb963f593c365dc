#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "amod/calibration.hpp"
#include "amod/config.hpp"
#include "amod/errors.hpp"
#include "amod/field_io.hpp"
#include "amod/report.hpp"
#include "amod/verify.hpp"

namespace py = pybind11;
using namespace amod;

namespace {

using ComplexArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;
using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<py::ssize_t> grid_shape(const GridSpec& g) { return std::vector<py::ssize_t>(g.dim, g.samples); }

std::vector<cplx> take(const GridSpec& g, const ComplexArray& a) {
  if (a.ndim() != g.dim) throw std::invalid_argument("array has " + std::to_string(a.ndim()) + " axes, grid has " +
                                                     std::to_string(g.dim));
  for (int d = 0; d < g.dim; ++d)
    if (a.shape(d) != g.samples) throw std::invalid_argument("array shape does not match the grid samples");
  return {a.data(), a.data() + a.size()};
}

ComplexArray give(const GridSpec& g, const std::vector<cplx>& v) {
  ComplexArray out(grid_shape(g));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

SampledField field(const GridSpec& g, const ComplexArray& a) { return SampledField(g, take(g, a)); }

SpaceParams make_space(double alpha, double s, std::vector<double> p, double q) {
  SpaceParams sp;
  sp.alpha = alpha;
  sp.s = s;
  sp.p = MixedExponents(std::move(p));
  sp.q = q;
  sp.validate();
  return sp;
}

py::dict report_dict(const ExperimentReport& rep) {
  py::list rows;
  for (const auto& r : rep.rows) {
    py::dict d;
    d["member"] = r.member;
    d["kind"] = r.kind;
    d["lambda"] = r.lambda;
    d["omega"] = r.omega;
    d["chirp"] = r.chirp;
    d["theta"] = r.theta;
    d["order"] = r.order;
    d["input_norm"] = r.input_norm;
    d["output_norm"] = r.output_norm;
    d["ratio"] = r.ratio;
    d["asserted"] = r.asserted;
    d["note"] = r.note;
    rows.append(d);
  }
  py::dict checks;
  for (const auto& c : rep.checks) checks[py::str(c.name)] = py::make_tuple(c.value, c.bound, c.passed, c.asserted);
  py::dict out;
  out["experiment"] = rep.experiment;
  out["symbol"] = rep.symbol;
  out["rows"] = rows;
  out["checks"] = checks;
  out["guards"] = rep.guards;
  out["min_ratio"] = rep.min_ratio;
  out["median_ratio"] = rep.median_ratio;
  out["max_ratio"] = rep.max_ratio;
  out["passed"] = rep.passed();
  return out;
}

}  // namespace

PYBIND11_MODULE(_amod, m) {
  m.doc() = "Mixed-norm alpha-modulation spaces on sampled periodic grids";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<GuardViolation>(m, "GuardViolation", PyExc_ArithmeticError);
  py::register_exception<ResourceGuard>(m, "ResourceGuard", PyExc_MemoryError);

  py::class_<GridSpec>(m, "Grid")
      .def(py::init<int, double, int>(), py::arg("dim"), py::arg("half_width"), py::arg("samples"))
      .def_readonly("dim", &GridSpec::dim)
      .def_readonly("half_width", &GridSpec::half_width)
      .def_readonly("samples", &GridSpec::samples)
      .def_property_readonly("step", &GridSpec::step)
      .def_property_readonly("freq_step", &GridSpec::freq_step)
      .def_property_readonly("nyquist", &GridSpec::nyquist)
      .def("nodes", [](const GridSpec& g) {
        RealArray out(std::vector<py::ssize_t>{g.samples});
        for (int j = 0; j < g.samples; ++j) out.mutable_data()[j] = g.node(j);
        return out;
      })
      .def("frequencies", [](const GridSpec& g) {
        RealArray out(std::vector<py::ssize_t>{g.samples});
        for (int i = 0; i < g.samples; ++i) out.mutable_data()[i] = g.freq_node(i);
        return out;
      })
      .def("__eq__", [](const GridSpec& a, const GridSpec& b) { return a == b; })
      .def("__repr__", [](const GridSpec& g) {
        return "Grid(dim=" + std::to_string(g.dim) + ", half_width=" + format_number(g.half_width) +
               ", samples=" + std::to_string(g.samples) + ")";
      });

  m.def("desk_grid", &desk_grid, py::arg("dim"));

  m.def(
      "forward_transform",
      [](const GridSpec& g, const ComplexArray& f) { return give(g, forward_transform(field(g, f)).values); },
      py::arg("grid"), py::arg("values"), "Centered spectrum; axis index i means m = i - N/2.");
  m.def(
      "inverse_transform",
      [](const GridSpec& g, const ComplexArray& F) { return give(g, inverse_transform(Spectrum(g, take(g, F))).values); },
      py::arg("grid"), py::arg("spectrum"));

  m.def(
      "mixed_norm",
      [](const GridSpec& g, const ComplexArray& f, std::vector<double> p) {
        return mixed_norm(field(g, f), MixedExponents(std::move(p)));
      },
      py::arg("grid"), py::arg("values"), py::arg("p"), "Iterated norm, innermost over axis 0.");
  m.def(
      "iterated_maximal",
      [](const GridSpec& g, const ComplexArray& f, double theta) {
        const SampledField M = iterated_maximal(field(g, f), theta);
        RealArray out(grid_shape(g));
        for (std::size_t i = 0; i < M.size(); ++i) out.mutable_data()[i] = M.values[i].real();
        return out;
      },
      py::arg("grid"), py::arg("values"), py::arg("theta") = 1.0);

  m.def(
      "partition_deviation",
      [](const GridSpec& g, double alpha) {
        CoveringParams cp;
        cp.alpha = alpha;
        return partition_sum(build_bapu(alpha >= 1.0 ? dyadic_covering(g) : make_covering(cp, g)));
      },
      py::arg("grid"), py::arg("alpha"), "Max |sum psi_k - 1| over the covered nodes.");

  m.def(
      "modulation_norm",
      [](const GridSpec& g, const ComplexArray& f, double alpha, double s, std::vector<double> p, double q) {
        const SpaceParams sp = make_space(alpha, s, std::move(p), q);
        return modulation_norm(field(g, f), make_bapu(sp, g), sp);
      },
      py::arg("grid"), py::arg("values"), py::arg("alpha") = 0.5, py::arg("s") = 0.0, py::arg("p") = std::vector{2.0},
      py::arg("q") = 2.0);
  m.def(
      "band_profile",
      [](const GridSpec& g, const ComplexArray& f, double alpha, double s, std::vector<double> p, double q) {
        const SpaceParams sp = make_space(alpha, s, std::move(p), q);
        const BandProfile prof = band_profile(field(g, f), make_bapu(sp, g), sp);
        py::list rows;
        for (const auto& r : prof.rows) rows.append(py::make_tuple(r.index, r.scale, r.band_norm, r.weighted));
        return rows;
      },
      py::arg("grid"), py::arg("values"), py::arg("alpha") = 0.5, py::arg("s") = 0.0, py::arg("p") = std::vector{2.0},
      py::arg("q") = 2.0, "List of (k, a_k, band_norm, weighted_term).");

  m.def(
      "apply",
      [](const std::string& symbol, const GridSpec& g, const ComplexArray& f, const std::string& path) {
        const SymbolSpec sigma = parse_symbol_ref(symbol).build(g);
        return give(g, apply(sigma, field(g, f), parse_apply_path(path)).values);
      },
      py::arg("symbol"), py::arg("grid"), py::arg("values"), py::arg("path") = "auto",
      "Apply a catalog symbol such as 'bessel(b=2)' or 'oscillatory(rho=0.5)'.");
  m.def(
      "plan",
      [](const std::string& symbol, const GridSpec& g, const std::string& path) {
        const ApplicationPlan p = plan_application(parse_symbol_ref(symbol).build(g), g, parse_apply_path(path));
        return py::make_tuple(to_string(p.path), p.cost);
      },
      py::arg("symbol"), py::arg("grid"), py::arg("path") = "auto", "(path, cost) chosen for the symbol.");
  m.def(
      "bessel_lift", [](const GridSpec& g, const ComplexArray& f, double b) { return give(g, bessel_lift(field(g, f), b).values); },
      py::arg("grid"), py::arg("values"), py::arg("b"));
  m.def("symbols", &catalog::names);

  m.def(
      "read_field",
      [](const std::string& path) {
        const SampledField f = read_field(path);
        return py::make_tuple(f.grid, give(f.grid, f.values));
      },
      py::arg("path"));
  m.def(
      "write_field", [](const std::string& path, const GridSpec& g, const ComplexArray& f) { write_field(path, field(g, f)); },
      py::arg("path"), py::arg("grid"), py::arg("values"));

  m.def(
      "lifting_experiment",
      [](double b, double alpha, double s, std::vector<double> p, double q, int jobs) {
        const GridSpec g = desk_grid(static_cast<int>(p.size()));
        ExperimentOptions opt;
        opt.jobs = jobs;
        const SpaceParams sp = make_space(alpha, s, std::move(p), q);
        ExperimentReport rep;
        {
          py::gil_scoped_release release;
          rep = lifting_experiment(TestFamily::standard(g), b, sp, opt);
        }
        return report_dict(rep);
      },
      py::arg("b"), py::arg("alpha") = 0.5, py::arg("s") = 2.0, py::arg("p") = std::vector{2.0, 4.0},
      py::arg("q") = 2.0, py::arg("jobs") = 1, "Lifting ratios on the standard family of the desk grid.");

  py::module_ cal = m.def_submodule("calibration");
  cal.attr("lifting_spread") = calibration::kLiftingSpread;
  cal.attr("boundedness_ratio") = calibration::kBoundednessRatio;
  cal.attr("maximal_ratio") = calibration::kMaximalRatio;
  cal.attr("smoothing") = calibration::kSmoothing;
}
