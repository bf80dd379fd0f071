#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "contactlax/errors.hpp"
#include "contactlax/io.hpp"

namespace py = pybind11;
using namespace contactlax;

namespace {

EquationForm form_of(const std::string& s) {
  if (s == "coefficients") return EquationForm::coefficients;
  if (s == "residues") return EquationForm::residues;
  throw ParameterError("unknown equation form '" + s + "'");
}

CCPath path_of(const std::string& s) {
  if (s == "lifted") return CCPath::lifted;
  if (s == "bracket") return CCPath::bracket;
  throw ParameterError("unknown derivation path '" + s + "'");
}

std::vector<std::string> names(const std::vector<FieldId>& fs) {
  std::vector<std::string> out;
  for (const auto& f : fs) out.push_back(f.str());
  return out;
}

std::vector<std::string> strs(const std::vector<JetQuotient>& qs) {
  std::vector<std::string> out;
  for (const auto& q : qs) out.push_back(q.str());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "contactlax core bindings";

  static py::exception<Error> base(m, "Error");
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<StructuralError>(m, "StructuralError", base.ptr());
  py::register_exception<CoverageError>(m, "CoverageError", base.ptr());
  py::register_exception<DerivationError>(m, "DerivationError", base.ptr());
  py::register_exception<TransformDegenerateError>(m, "TransformDegenerateError", base.ptr());
  py::register_exception<CompileError>(m, "CompileError", base.ptr());
  py::register_exception<IncompatibleGaugeError>(m, "IncompatibleGaugeError", base.ptr());
  py::register_exception<TheoremVerificationError>(m, "TheoremVerificationError", base.ptr());
  static py::exception<NumericalAbort> abort_exc(m, "NumericalAbort", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NumericalAbort& e) {
      py::object exc = py::reinterpret_borrow<py::object>(abort_exc)(e.what());
      exc.attr("step") = e.step();
      PyErr_SetObject(abort_exc.ptr(), exc.ptr());
    } catch (const PoleError& e) {
      PyErr_SetString(base.ptr(), e.what());
    }
  });

  py::class_<LaxPair>(m, "LaxPair")
      .def_property_readonly("family", [](const LaxPair& l) { return family_name(l.family); })
      .def_readonly("m", &LaxPair::m)
      .def_readonly("n", &LaxPair::n)
      .def_property_readonly("fields", [](const LaxPair& l) { return names(l.fields); })
      .def_property_readonly("F", [](const LaxPair& l) { return l.F.str(); })
      .def_property_readonly("G", [](const LaxPair& l) { return l.G.str(); })
      .def("latex", [](const LaxPair& l) { return std::make_pair(latex(l.F), latex(l.G)); })
      .def("to_json", [](const LaxPair& l) { return to_json(l).dump(); })
      .def_static("from_json", [](const std::string& s) { return laxpair_from_json(Json::parse(s)); })
      .def("__repr__", [](const LaxPair& l) {
        return "<LaxPair " + family_name(l.family) + "(" + std::to_string(l.m) + "," + std::to_string(l.n) + ")>";
      });

  py::class_<PDESystem>(m, "PDESystem")
      .def_property_readonly("unknowns", [](const PDESystem& s) { return names(s.unknowns); })
      .def_property_readonly("independents", &PDESystem::independents)
      .def_property_readonly("frame", [](const PDESystem& s) { return frame_name(s.frame); })
      .def_property_readonly("equations", [](const PDESystem& s) { return strs(s.equations); })
      .def_property_readonly("labels", [](const PDESystem& s) { return s.provenance.labels; })
      .def_property_readonly("dropped_zero", [](const PDESystem& s) { return s.provenance.dropped_zero; })
      .def("determinedness", [](const PDESystem& s) { return to_json(determinedness_report(s)).dump(); })
      .def("latex", [](const PDESystem& s) { return latex(s); })
      .def("to_json", [](const PDESystem& s) { return to_json(s).dump(); })
      .def_static("from_json", [](const std::string& s) { return system_from_json(Json::parse(s)); })
      .def("__len__", [](const PDESystem& s) { return s.equations.size(); });

  m.def("make_family", [](const std::string& f, int mm, int nn) { return make_family(parse_family(f), mm, nn); },
        py::arg("family"), py::arg("m"), py::arg("n"));
  m.def(
      "make_custom",
      [](const std::vector<std::string>& F, const std::vector<std::string>& G, const std::vector<std::string>& fields) {
        auto side = [](const std::vector<std::string>& c) {
          std::vector<JetQuotient> q;
          for (const auto& s : c) q.push_back(parse_quotient(s));
          return PRational(PPoly(std::move(q)));
        };
        std::vector<FieldId> ids(fields.begin(), fields.end());
        return make_custom(side(F), side(G), ids);
      },
      py::arg("F"), py::arg("G"), py::arg("fields"),
      "Polynomial pair from coefficient lists in ascending powers of p.");
  m.def(
      "compatibility_condition",
      [](const LaxPair& l, const std::string& path) { return to_json(compatibility_condition(l, path_of(path))).dump(); },
      py::arg("lax"), py::arg("path") = "lifted");
  m.def(
      "paths_agree",
      [](const LaxPair& l) {
        return compatibility_condition(l, CCPath::lifted).equals(compatibility_condition(l, CCPath::bracket));
      },
      py::arg("lax"), "Both derivation paths give the same rational function of p.");
  m.def(
      "derive", [](const LaxPair& l, const std::string& form, const std::string& path) {
        return derive(l, form_of(form), path_of(path));
      },
      py::arg("lax"), py::arg("form") = "coefficients", py::arg("path") = "lifted");
  m.def(
      "ck_transform",
      [](const PDESystem& s, std::uint64_t seed) {
        CKWitness w;
        PDESystem out = ck_transform(s, seed, &w);
        return std::make_pair(out, w.determinant.get_str());
      },
      py::arg("system"), py::arg("seed") = 1);
  m.def("ck_inverse", &ck_inverse, py::arg("system"));
  m.def(
      "reduce_2plus1",
      [](const LaxPair& l, const std::string& form) {
        Reduction r = reduce_2plus1(l, form_of(form));
        return std::make_pair(r.lax, r.system);
      },
      py::arg("lax"), py::arg("form") = "coefficients");
  m.def(
      "reduction_commutes", [](const LaxPair& l, const std::string& form) { return reduction_commutes(l, form_of(form)); },
      py::arg("lax"), py::arg("form") = "coefficients");

  m.def(
      "check_ab", [](const std::string& a0, const std::string& b0) {
        return check_ab(parse_quotient(a0), parse_quotient(b0)).str();
      },
      py::arg("a0"), py::arg("b0"));
  m.def(
      "verify_theorem1", [](int mm, int nn) { return to_json(verify_theorem1(mm, nn)).dump(); }, py::arg("m"),
      py::arg("n"));
  m.def(
      "match_printed_rls",
      [](int mm, int nn, const std::string& golden, int points) {
        Golden g = load_golden(golden.empty() ? default_golden_path() : golden);
        return to_json(match_printed_rls(derive(make_rat(mm, nn), EquationForm::residues), mm, nn, g, points)).dump();
      },
      py::arg("m"), py::arg("n"), py::arg("golden") = "", py::arg("points") = 20);
  m.def("normal_form", [](const std::string& e) { return parse_quotient(e).str(); }, py::arg("expr"));
  m.def("to_latex", [](const std::string& e) { return latex(parse_quotient(e)); }, py::arg("expr"));

  m.def("rat11_ck_system", &rat11_ck_system);
  m.def(
      "simulate",
      [](const PDESystem& sys, const std::string& init, int grid, long steps, double dt, const std::string& spatial,
         double guard) {
        CompiledSystem cs = compile_system(sys);
        InitialData data = parse_initial_data(init);
        Grid g({grid, grid, grid}, cs.size());
        fill_grid(g, cs, data);
        IntegrateOptions opt;
        opt.steps = steps;
        opt.dt = dt;
        opt.spatial = parse_spatial(spatial);
        opt.pole_guard = guard;
        Trajectory tr = [&] {
          py::gil_scoped_release release;
          return integrate(cs, g, opt);
        }();
        std::map<std::string, std::vector<double>> fields;
        for (std::size_t i = 0; i < cs.size(); ++i) fields[cs.unknowns()[i].str()] = tr.state.fields[i];
        return std::make_pair(monitor_csv(tr.monitors), fields);
      },
      py::arg("system"), py::arg("init"), py::arg("grid") = 16, py::arg("steps") = 100, py::arg("dt") = 0.01,
      py::arg("spatial") = "spectral", py::arg("guard") = 0.1);
  m.def(
      "convergence",
      [](const PDESystem& sys, const std::string& exact, const std::string& kind, const std::vector<int>& ns,
         const std::vector<long>& steps, double T_end, const std::string& spatial) {
        CompiledSystem cs = compile_system(sys);
        InitialData ex = parse_initial_data(exact);
        py::gil_scoped_release release;
        ConvergenceReport r = kind == "temporal"
                                  ? temporal_convergence(cs, ex, ns.at(0), T_end, steps, parse_spatial(spatial))
                                  : spatial_convergence(cs, ex, ns, T_end, steps.at(0), parse_spatial(spatial));
        return to_json(r).dump();
      },
      py::arg("system"), py::arg("exact"), py::arg("kind"), py::arg("ns"), py::arg("steps"), py::arg("T_end"),
      py::arg("spatial") = "spectral");
}
