#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nullframe/error.hpp"
#include "nullframe/manifest.hpp"
#include "nullframe/parallel.hpp"
#include "nullframe/report.hpp"

namespace py = pybind11;
using namespace nullframe;

namespace {

// JSON crosses the boundary as text; the Python side decodes it.
std::string dump(const json& j) { return j.dump(); }

CheckOptions options(int points, std::uint64_t seed, double tol, double fd_tol, int lm_draws,
                     std::optional<int> threads, bool theorems) {
  CheckOptions o;
  o.points = points;
  o.seed = seed;
  o.tol = tol;
  o.fd_tol = fd_tol;
  o.lm_draws = lm_draws;
  o.threads = threads.value_or(default_thread_count());
  o.theorems = theorems;
  return o;
}

py::dict decomposition_dict(const Decomposition& d) {
  py::dict out;
  out["t"] = d.t;
  out["point"] = d.point;
  out["classification"] = d.classification.to_string();
  out["frame"] = d.frame;
  out["rad"] = d.rad;
  out["stm"] = d.stm;
  out["stmperp"] = d.stmperp;
  out["ltr"] = d.ltr;
  const auto& g = d.generic;
  out["b0"] = g.b0;
  out["bprime"] = g.bprime;
  out["mu"] = g.mu;
  out["rad_invariant"] = g.rad_invariant;
  out["mu_invariant"] = g.mu_invariant;
  out["ltr_invariant"] = g.ltr_invariant;
  out["screen_generic"] = g.screen_generic;
  out["proper"] = g.proper;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "nullframe native core";
  m.attr("__version__") = NULLFRAME_VERSION;

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<SignatureError>(m, "SignatureError", PyExc_ValueError);
  py::register_exception<GeometryError>(m, "GeometryError", PyExc_RuntimeError);

  py::class_<ManifoldSpec>(m, "Spec")
      .def_readonly("name", &ManifoldSpec::name)
      .def_readonly("param_dim", &ManifoldSpec::param_dim)
      .def_readonly("ambient_dim", &ManifoldSpec::ambient_dim)
      .def_readonly("notes", &ManifoldSpec::notes)
      .def_property_readonly("timelike_positions",
                             [](const ManifoldSpec& s) {
                               std::vector<int> out;
                               for (int p : s.metric.timelike_positions()) out.push_back(p + 1);
                               return out;
                             })
      .def_property_readonly("bronze", [](const ManifoldSpec& s) { return s.bronze.matrix; })
      .def_property_readonly("domain", [](const ManifoldSpec& s) { return s.domain; })
      .def("__repr__", [](const ManifoldSpec& s) {
        return "<nullframe.Spec " + s.name + " dim " + std::to_string(s.ambient_dim) + ">";
      });

  m.def("builtin_names", &builtin_names);
  m.def("_builtin_manifest", [](const std::string& name) { return dump(builtin_manifest(name)); });
  m.def("_spec_from_text", [](const std::string& text) { return spec_from_json(parse_manifest_text(text)); });
  m.def("load", &load_manifest_or_builtin, py::arg("path_or_name"));

  m.def("decompose", [](const ManifoldSpec& spec, const Vec& t) { return decomposition_dict(decompose(spec, t)); },
        py::arg("spec"), py::arg("t"));
  m.def("verify_bronze", &verify_bronze, py::arg("J"));
  m.def(
      "verify_compatibility",
      [](const Mat& J, const std::vector<int>& eps) { return verify_compatibility(J, SignatureMetric(eps)).max(); },
      py::arg("J"), py::arg("eps"));
  m.def("halton_points", &halton_points, py::arg("domain"), py::arg("count"), py::arg("start") = 1,
        py::arg("inset") = 0.05);

  m.def(
      "_infer_signature",
      [](const std::string& src, std::optional<int> index) {
        SignatureListing out = infer_manifest_signature(load_document_or_builtin(src), index);
        std::vector<std::pair<std::vector<int>, int>> rows;
        for (const auto& c : out.candidates) {
          std::vector<int> pos;
          for (int p : c.timelike) pos.push_back(p + 1);
          rows.emplace_back(pos, c.kernel_dim);
        }
        return rows;
      },
      py::arg("path_or_name"), py::arg("index") = std::nullopt);

  auto run = [](bool check) {
    return [check](const std::string& src, int points, std::uint64_t seed, double tol, double fd_tol, int lm_draws,
                   std::optional<int> threads, bool theorems) {
      json doc = load_document_or_builtin(src);
      ManifoldSpec spec = spec_from_json(doc);
      CheckOptions o = options(points, seed, tol, fd_tol, lm_draws, threads, theorems);
      CheckResult res;
      {
        py::gil_scoped_release release;
        res = check ? run_check(spec, doc, o) : run_identities(spec, doc, o);
      }
      return std::make_pair(res.exit_code(), dump(res.document));
    };
  };
  m.def("_check", run(true), py::arg("path_or_name"), py::arg("points") = 20, py::arg("seed") = 0,
        py::arg("tol") = 1e-8, py::arg("fd_tol") = 1e-6, py::arg("lm_draws") = 2, py::arg("threads") = std::nullopt,
        py::arg("theorems") = true);
  m.def("_identities", run(false), py::arg("path_or_name"), py::arg("points") = 20, py::arg("seed") = 0,
        py::arg("tol") = 1e-8, py::arg("fd_tol") = 1e-6, py::arg("lm_draws") = 5, py::arg("threads") = std::nullopt,
        py::arg("theorems") = false);
}
