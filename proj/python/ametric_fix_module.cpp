#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ametric/cli/commands.hpp"
#include "ametric/core.hpp"
#include "ametric/sampling.hpp"
#include "ametric/solver.hpp"
#include "ametric/spaces.hpp"
#include "ametric/zamfirescu.hpp"

namespace py = pybind11;
using namespace ametric;

namespace {

// Python callers pass points as floats or sequences of floats.
Point to_point(const py::handle& obj) {
  if (py::isinstance<py::float_>(obj) || py::isinstance<py::int_>(obj)) return {obj.cast<double>()};
  return obj.cast<Point>();
}

std::vector<Point> to_points(const py::sequence& seq) {
  std::vector<Point> out;
  for (const auto& item : seq) out.push_back(to_point(item));
  return out;
}

py::dict to_dict(const cli::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump()).cast<py::dict>();
}

MapSpec spec_from_kwargs(const std::string& kind, const py::kwargs& kw) {
  MapSpec spec;
  spec.kind = map_kind_from_string(kind);
  auto get = [&](const char* key, double& out) {
    if (kw.contains(key)) out = kw[key].cast<double>();
  };
  get("lambda_", spec.lambda);
  get("alpha", spec.alpha);
  get("beta", spec.beta);
  get("c0", spec.c0);
  if (kw.contains("breakpoints")) spec.breakpoints = kw["breakpoints"].cast<std::vector<double>>();
  if (kw.contains("pieces")) {
    for (auto [slope, intercept] : kw["pieces"].cast<std::vector<std::pair<double, double>>>())
      spec.pieces.push_back({slope, intercept});
  }
  if (kw.contains("image")) spec.table = kw["image"].cast<std::vector<std::size_t>>();
  return spec;
}

}  // namespace

PYBIND11_MODULE(ametric_fix, m) {
  m.doc() = "A-metric spaces, A-Zamfirescu certificates and Picard iteration";

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_RuntimeError);

  py::class_<AMetricSpace>(m, "AMetricSpace")
      .def_property_readonly("t", &AMetricSpace::t)
      .def_property_readonly("name", &AMetricSpace::name)
      .def_property_readonly("eq_tol", &AMetricSpace::eq_tol)
      .def_property_readonly("is_finite", &AMetricSpace::is_finite)
      .def_property_readonly("finite_size", &AMetricSpace::finite_size)
      .def("contains", [](const AMetricSpace& s, py::handle p) { return s.contains(to_point(p)); });

  py::class_<SelfMap>(m, "SelfMap")
      .def_property_readonly("name", &SelfMap::name)
      .def("__call__", [](const SelfMap& f, py::handle x) { return f(to_point(x)); });

  m.def(
      "make_absdiff_space",
      [](int t, std::size_t d, std::optional<Point> lo, std::optional<Point> hi, double eq_tol) {
        if (lo && hi) return make_absdiff_space(Arity(t), d, *lo, *hi, eq_tol);
        return make_absdiff_space(Arity(t), d, eq_tol);
      },
      py::arg("t"), py::arg("d") = 1, py::arg("lo") = py::none(), py::arg("hi") = py::none(),
      py::arg("eq_tol") = 1e-12);
  m.def("make_lifted_space", [](int t, MetricTable table) { return make_lifted_space(Arity(t), std::move(table)); },
        py::arg("t"), py::arg("table"));
  m.def("lift_table", [](int t, MetricTable table) { return lift_table(Arity(t), std::move(table)); },
        py::arg("t"), py::arg("table"));
  m.def(
      "make_map",
      [](const std::string& kind, const AMetricSpace& space, const py::kwargs& kw) {
        return make_map(spec_from_kwargs(kind, kw), space);
      },
      py::arg("kind"), py::arg("space"));

  m.def("eval", [](const AMetricSpace& s, const py::sequence& pts) { return eval(s, to_points(pts)); });
  m.def("rep_distance", [](const AMetricSpace& s, py::handle x, py::handle y) {
    return rep_distance(s, to_point(x), to_point(y));
  });

  py::class_<CheckReport>(m, "CheckReport")
      .def_readonly("name", &CheckReport::name)
      .def_readonly("checked", &CheckReport::checked)
      .def_readonly("max_gap", &CheckReport::max_gap)
      .def_property_readonly("passed", &CheckReport::passed)
      .def_property_readonly("n_violations", [](const CheckReport& r) { return r.violations.size(); })
      .def("to_dict", [](const CheckReport& r) { return to_dict(cli::to_json(r)); });

  auto sampled = [](auto check) {
    return [check](const AMetricSpace& s, std::size_t width, std::size_t count, std::uint64_t seed,
                   double tol) {
      return check(s, sample_tuples(s, width, count, seed), Tolerance{tol});
    };
  };
  m.def(
      "check_axioms",
      [](const AMetricSpace& s, std::size_t count, std::uint64_t seed, double tol) {
        return check_axioms(s, sample_axiom_tuples(s, count, seed), Tolerance{tol});
      },
      py::arg("space"), py::arg("count") = 1000, py::arg("seed") = 0, py::arg("tol") = 1e-9);
  m.def(
      "check_symmetry",
      [sampled](const AMetricSpace& s, std::size_t count, std::uint64_t seed, double tol) {
        return sampled([](auto&&... a) { return check_symmetry(a...); })(s, 2, count, seed, tol);
      },
      py::arg("space"), py::arg("count") = 1000, py::arg("seed") = 0, py::arg("tol") = 1e-9);
  m.def(
      "check_triangle_lemma",
      [sampled](const AMetricSpace& s, std::size_t count, std::uint64_t seed, double tol) {
        return sampled([](auto&&... a) { return check_triangle_lemma(a...); })(s, 3, count, seed, tol);
      },
      py::arg("space"), py::arg("count") = 1000, py::arg("seed") = 0, py::arg("tol") = 1e-9);

  py::class_<ZamfirescuCertificate>(m, "ZamfirescuCertificate")
      .def_readonly("t", &ZamfirescuCertificate::t)
      .def_readonly("a", &ZamfirescuCertificate::a)
      .def_readonly("b", &ZamfirescuCertificate::b)
      .def_readonly("c", &ZamfirescuCertificate::c)
      .def_readonly("delta", &ZamfirescuCertificate::delta)
      .def_readonly("valid", &ZamfirescuCertificate::valid)
      .def_readonly("exhaustive", &ZamfirescuCertificate::exhaustive)
      .def_readonly("n_pairs", &ZamfirescuCertificate::n_pairs)
      .def("to_dict", [](const ZamfirescuCertificate& c) { return to_dict(cli::to_json(c)); });

  m.def(
      "branch_constants",
      [](const AMetricSpace& s, const SelfMap& f, py::handle x, py::handle y) {
        const auto bc = branch_constants(s, f, to_point(x), to_point(y));
        return py::make_tuple(bc.a_req, bc.b_req, bc.c_req);
      },
      py::arg("space"), py::arg("f"), py::arg("x"), py::arg("y"));
  m.def(
      "classify",
      [](const AMetricSpace& s, const SelfMap& f, std::size_t n_pairs, std::uint64_t seed) {
        return classify(s, f, sample_pairs(s, n_pairs, seed));
      },
      py::arg("space"), py::arg("f"), py::arg("n_pairs") = 1000, py::arg("seed") = 0);
  m.def("compute_delta", [](double a, double b, double c, int t) { return compute_delta(a, b, c, Arity(t)); },
        py::arg("a"), py::arg("b"), py::arg("c"), py::arg("t"));
  m.def(
      "verify_lemma1",
      [](const AMetricSpace& s, const SelfMap& f, double delta, std::size_t n_pairs, std::uint64_t seed,
         double tol) { return verify_lemma1(s, f, delta, sample_pairs(s, n_pairs, seed), Tolerance{tol}); },
      py::arg("space"), py::arg("f"), py::arg("delta"), py::arg("n_pairs") = 1000, py::arg("seed") = 0,
      py::arg("tol") = 1e-9);

  py::class_<PicardTrace>(m, "PicardTrace")
      .def_readonly("iterates", &PicardTrace::iterates)
      .def_readonly("steps", &PicardTrace::steps)
      .def_readonly("bound", &PicardTrace::bound)
      .def_readonly("delta", &PicardTrace::delta)
      .def_readonly("limit", &PicardTrace::limit)
      .def_property_readonly("status", [](const PicardTrace& t) { return to_string(t.status); })
      .def("to_csv", &trace_to_csv);

  m.def(
      "picard_run",
      [](const AMetricSpace& s, const SelfMap& f, py::handle x0, double delta, double eps,
         std::size_t max_iter, std::optional<double> bound_eps) {
        StopRule rule;
        rule.eps = eps;
        rule.max_iter = max_iter;
        rule.bound_eps = bound_eps;
        return picard_run(s, f, to_point(x0), delta, rule);
      },
      py::arg("space"), py::arg("f"), py::arg("x0"), py::arg("delta"), py::arg("eps") = 1e-12,
      py::arg("max_iter") = 10'000, py::arg("bound_eps") = py::none());
  m.def("tail_bound", [](double delta, int t, double d0, std::size_t n) { return tail_bound(delta, Arity(t), d0, n); },
        py::arg("delta"), py::arg("t"), py::arg("d0"), py::arg("n"));
  m.def("verify_decay", [](const PicardTrace& tr, double tol) { return verify_decay(tr, Tolerance{tol}); },
        py::arg("trace"), py::arg("tol") = 1e-9);
  m.def(
      "verify_cauchy",
      [](const PicardTrace& tr, const AMetricSpace& s, double tol) {
        return to_dict(cli::to_json(verify_cauchy(tr, s, Tolerance{tol})));
      },
      py::arg("trace"), py::arg("space"), py::arg("tol") = 1e-9);
  m.def(
      "uniqueness_probe",
      [](const AMetricSpace& s, const SelfMap& f, const py::sequence& starts, double delta, double eps) {
        StopRule rule;
        rule.eps = eps;
        const auto probe = uniqueness_probe(s, f, to_points(starts), delta, rule);
        return py::make_tuple(probe.check, probe.consensus);
      },
      py::arg("space"), py::arg("f"), py::arg("starts"), py::arg("delta"), py::arg("eps") = 1e-12);
  m.def("brute_force_fixed_points", &brute_force_fixed_points, py::arg("space"), py::arg("f"));

  m.def(
      "run_command",
      [](const std::string& command, const std::filesystem::path& config,
         const std::filesystem::path& out_dir, std::optional<std::uint64_t> seed) {
        const auto result = cli::run_from_file(cli::command_from_string(command), config, out_dir, seed);
        std::vector<std::string> paths;
        for (const auto& p : result.outputs) paths.push_back(p.string());
        return py::make_tuple(result.exit_code, paths);
      },
      py::arg("command"), py::arg("config"), py::arg("out_dir") = ".", py::arg("seed") = py::none(),
      "Run axioms | classify | solve | verify on a JSON config; returns (exit_code, written paths).");
}
