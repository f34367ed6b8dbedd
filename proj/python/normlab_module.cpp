#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "normlab/commands.hpp"
#include "normlab/domain.hpp"
#include "normlab/errors.hpp"
#include "normlab/holo_expr.hpp"
#include "normlab/metric.hpp"
#include "normlab/rescaling.hpp"

namespace py = pybind11;
using namespace normlab;

namespace {

using Coords = std::vector<Complex>;

CPoint to_point(const Coords& c) { return CPoint(c); }
Coords from_point(const CPoint& p) { return Coords(p.begin(), p.end()); }

Domain make_ball(const Coords& center, double radius) { return Ball(to_point(center), radius); }
Domain make_polydisc(const Coords& center, std::vector<double> radii) {
  return Polydisc(to_point(center), std::move(radii));
}

py::dict run_cli_command(const std::string& command, const std::string& config_json,
                         std::optional<std::uint64_t> seed, const std::string& format) {
  CommandOptions opt;
  opt.seed = seed;
  opt.format = format == "json" ? OutputFormat::Json
               : format == "csv" ? OutputFormat::Csv
                                 : OutputFormat::Both;
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(config_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw py::value_error(std::string("config is not valid JSON: ") + e.what());
  }
  CommandOutput out;
  {
    py::gil_scoped_release release;
    out = run_command(command, cfg, opt);
  }
  py::dict files;
  for (const auto& [name, contents] : out.files) files[py::str(name)] = contents;
  py::dict result;
  result["exit_code"] = out.exit_code;
  result["files"] = files;
  result["summary"] = out.summary;
  return result;
}

}  // namespace

PYBIND11_MODULE(_normlab, m) {
  m.doc() = "Normality laboratory: sharp function, Kobayashi bounds and rescaling runs";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  auto eval = py::register_exception<EvalError>(m, "EvalError", PyExc_ArithmeticError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  (void)base;
  (void)eval;

  py::class_<HoloExpr>(m, "HoloExpr")
      .def_property_readonly("dimension", &HoloExpr::dimension)
      .def("__str__", [](const HoloExpr& e) { return to_string(e); })
      .def("__repr__", [](const HoloExpr& e) { return "HoloExpr('" + to_string(e) + "')"; })
      .def("__eq__", [](const HoloExpr& a, const HoloExpr& b) { return structurally_equal(a, b); });

  m.def("parse", &parse, py::arg("source"), py::arg("dimension"));
  m.def("evaluate", [](const HoloExpr& f, const Coords& z) { return evaluate(f, to_point(z)); },
        py::arg("f"), py::arg("z"));
  m.def(
      "evaluate_jet",
      [](const HoloExpr& f, const Coords& z) {
        Jet j = evaluate_jet(f, to_point(z));
        return py::make_tuple(j.value, j.gradient);
      },
      py::arg("f"), py::arg("z"), "Returns (value, gradient).");
  m.def(
      "affine_pullback",
      [](const HoloExpr& f, const Coords& base, Complex scale) {
        return affine_pullback(f, to_point(base), scale);
      },
      py::arg("f"), py::arg("base"), py::arg("scale"));

  m.def("sharp", [](const HoloExpr& f, const Coords& z) { return sharp(f, to_point(z)); },
        py::arg("f"), py::arg("z"));
  m.def(
      "sharp_fd",
      [](const HoloExpr& f, const Coords& z, std::size_t samples, std::optional<double> h,
         std::uint64_t seed) {
        const CPoint p = to_point(z);
        return sharp_fd(f, p, samples, h ? *h : default_fd_step(p), seed);
      },
      py::arg("f"), py::arg("z"), py::arg("sphere_samples") = 256, py::arg("h") = py::none(),
      py::arg("seed") = 0);
  m.def(
      "levi_log1p_closed",
      [](const HoloExpr& f, const Coords& z, const Coords& v) {
        return levi_log1p_closed(f, to_point(z), to_point(v));
      },
      py::arg("f"), py::arg("z"), py::arg("v"));

  py::class_<Domain>(m, "Domain")
      .def_static("ball", &make_ball, py::arg("center"), py::arg("radius"))
      .def_static("polydisc", &make_polydisc, py::arg("center"), py::arg("radii"))
      .def_property_readonly("dimension", &Domain::dimension)
      .def_property_readonly("center", [](const Domain& d) { return from_point(d.center()); })
      .def("contains", [](const Domain& d, const Coords& p) { return contains(d, to_point(p)); })
      .def("boundary_distance",
           [](const Domain& d, const Coords& p) { return boundary_distance(d, to_point(p)); })
      .def("inscribed_ball",
           [](const Domain& d, const Coords& p) {
             const Ball b = inscribed_ball(d, to_point(p));
             return py::make_tuple(from_point(b.center()), b.radius());
           })
      .def("circumscribed_ball", [](const Domain& d) {
        const Ball b = circumscribed_ball(d);
        return py::make_tuple(from_point(b.center()), b.radius());
      });

  m.def(
      "kobayashi_ball",
      [](const Coords& center, double radius, const Coords& z, const Coords& v) {
        return kobayashi_ball(Ball(to_point(center), radius), to_point(z), to_point(v));
      },
      py::arg("center"), py::arg("radius"), py::arg("z"), py::arg("v"));
  m.def(
      "kobayashi_upper",
      [](const Coords& center, double radius, const Coords& z, const Coords& v) {
        return kobayashi_upper(Ball(to_point(center), radius), to_point(z), to_point(v));
      },
      py::arg("center"), py::arg("radius"), py::arg("z"), py::arg("v"));
  m.def(
      "kobayashi_domain_bounds",
      [](const Domain& d, const Coords& z, const Coords& v) {
        const auto b = kobayashi_domain_bounds(d, to_point(z), to_point(v));
        return py::make_tuple(b.lower, b.upper);
      },
      py::arg("domain"), py::arg("z"), py::arg("v"));

  m.def(
      "rescale_sharp_identity_check",
      [](const HoloExpr& f, const Coords& center, double rho, const std::vector<Coords>& pts) {
        std::vector<CPoint> test;
        for (const auto& p : pts) test.push_back(to_point(p));
        return rescale_sharp_identity_check(f, to_point(center), rho, test);
      },
      py::arg("f"), py::arg("center"), py::arg("rho"), py::arg("test_points"));

  m.def(
      "remark_counterexample",
      [](int n_max, double R) {
        const CounterexampleReport rep = remark_counterexample(n_max, R);
        py::list rows;
        for (const auto& r : rep.rows) {
          py::dict row;
          row["n"] = r.n;
          row["ratio"] = py::make_tuple(r.ratio_num, r.ratio_den);
          row["sup_dev"] = r.sup_dev;
          row["bound"] = r.bound;
          rows.append(row);
        }
        py::dict out;
        out["rows"] = rows;
        out["verdict"] = to_string(rep.convergence.verdict);
        out["constant_limit_one"] = rep.constant_limit_one;
        out["ratio_divergent"] = rep.ratio_divergent;
        out["refutes_converse"] = rep.refutes_converse;
        return out;
      },
      py::arg("n_max"), py::arg("R") = 1.0);

  m.def("run_command", &run_cli_command, py::arg("command"), py::arg("config_json"),
        py::arg("seed") = py::none(), py::arg("format") = "both",
        "Runs a CLI subcommand in-process. Returns {exit_code, files, summary}.");
}
