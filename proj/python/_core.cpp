#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "confdim/dimension.hpp"
#include "confdim/tangents.hpp"

namespace py = pybind11;
using namespace confdim;

namespace {

ExecOptions exec(std::uint64_t budget, unsigned threads) {
    ExecOptions ex;
    if (budget > 0) ex.word_budget = budget;
    ex.threads = threads;
    return ex;
}

py::dict pair_dict(const NearIdentityPair& p) {
    py::dict d;
    d["v"] = p.v.to_string();
    d["w"] = p.w.to_string();
    d["distance"] = p.distance;
    d["gap_at_x1"] = p.gap_at_x1;
    d["orientation"] = p.orientation;
    return d;
}

py::dict separation_dict(const SeparationReport& s) {
    py::list best;
    for (const auto& p : s.best_pairs) best.append(p ? py::object(pair_dict(*p)) : py::none());
    std::vector<int> mult;
    for (const auto& m : s.multiplicities) mult.push_back(m.max_count);
    py::dict d;
    d["verdict"] = verdict_name(s.verdict);
    d["b_grid"] = s.b_grid;
    d["multiplicity"] = mult;
    d["ilc_decay"] = s.ilc_decay;
    d["best_pairs"] = best;
    d["exact_overlaps"] = s.exact_overlaps.size();
    d["gamma_observed"] = s.gamma_observed;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Dimension estimates and separation diagnostics for conformal interval IFS.";

    static py::exception<Error> error_type(m, "ConfdimError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
            inst.attr("kind") = kind_name(e.kind());
            inst.attr("index") = e.index();
            PyErr_SetObject(error_type.ptr(), inst.ptr());
        }
    });

    py::class_<IfsSystem>(m, "System")
        .def_static("from_text", [](const std::string& text) { return load_system(text); }, py::arg("text"))
        .def_static("from_file", [](const std::string& path) { return load_system_file(path); }, py::arg("path"))
        .def_property_readonly("size", &IfsSystem::size)
        .def_property_readonly("x0", &IfsSystem::x0)
        .def_property_readonly("x1", &IfsSystem::x1)
        .def_property_readonly("f1_index", &IfsSystem::f1_index)
        .def_property_readonly("all_affine", &IfsSystem::all_affine)
        .def_property_readonly("rescaled", [](const IfsSystem& s) { return s.validation().rescaled; })
        .def_property_readonly("fixed_points", [](const IfsSystem& s) { return s.validation().fixed_points; })
        .def_property_readonly("contraction_constants",
                               [](const IfsSystem& s) { return s.validation().contraction_constants; })
        .def_property_readonly("warnings", [](const IfsSystem& s) { return s.validation().warnings; })
        .def("__len__", &IfsSystem::size);

    py::class_<DimensionEstimate>(m, "DimensionEstimate")
        .def_readonly("value", &DimensionEstimate::value)
        .def_readonly("raw_value", &DimensionEstimate::raw_value)
        .def_readonly("residual", &DimensionEstimate::residual)
        .def_readonly("scales_used", &DimensionEstimate::scales_used)
        .def_readonly("warnings", &DimensionEstimate::warnings)
        .def_property_readonly("method", [](const DimensionEstimate& d) { return method_name(d.method); })
        .def_property_readonly("fit_points", [](const DimensionEstimate& d) {
            std::vector<std::pair<double, double>> out;
            for (const auto& p : d.fit_points) out.emplace_back(p.x, p.y);
            return out;
        })
        .def("__repr__", [](const DimensionEstimate& d) {
            return std::string("<DimensionEstimate ") + method_name(d.method) + " " + std::to_string(d.value) + ">";
        });

    m.def("bowen_dimension",
          [](const IfsSystem& s, int depth, double tol, std::uint64_t budget, unsigned threads) {
              return bowen_dimension(s, depth > 0 ? depth : default_bowen_depth(s), tol, exec(budget, threads));
          },
          py::arg("system"), py::arg("depth") = 0, py::arg("tol") = 1e-10, py::arg("budget") = 0,
          py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
    m.def("box_dimension",
          [](const IfsSystem& s, std::vector<double> resolutions, std::uint64_t budget, unsigned threads) {
              if (resolutions.empty()) resolutions = default_box_resolutions(s);
              return box_dimension(s, resolutions, exec(budget, threads));
          },
          py::arg("system"), py::arg("resolutions") = std::vector<double>{}, py::arg("budget") = 0,
          py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
    m.def("assouad_estimate",
          [](const IfsSystem& s, int window_decades, int ratio_decades, std::uint64_t budget, unsigned threads) {
              return assouad_estimate(s, window_decades, ratio_decades, exec(budget, threads));
          },
          py::arg("system"), py::arg("window_decades") = 2, py::arg("ratio_decades") = 3, py::arg("budget") = 0,
          py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());

    m.def("separation",
          [](const IfsSystem& s, int depth, double theta_fail, double theta_hold, std::uint64_t budget,
             unsigned threads) {
              SeparationParams p;
              if (depth > 0) p.depth = depth;
              p.theta_fail = theta_fail;
              p.theta_hold = theta_hold;
              SeparationReport r;
              {
                  py::gil_scoped_release release;
                  r = separation_verdict(s, p, exec(budget, threads));
              }
              return separation_dict(r);
          },
          py::arg("system"), py::arg("depth") = 0, py::arg("theta_fail") = 1e-4, py::arg("theta_hold") = 1e-2,
          py::arg("budget") = 0, py::arg("threads") = 1);

    m.def("tangent",
          [](const IfsSystem& s, int i, int depth, std::uint64_t budget) {
              TangentParams tp;
              TangentWitness w;
              {
                  py::gil_scoped_release release;
                  auto pairs = select_tangent_pairs(s, depth, 0, tp, exec(budget, 1));
                  w = build_tangent_attempt(s, pairs, i, tp);
              }
              py::list steps;
              for (const auto& st : w.steps) {
                  py::dict d;
                  d["n"] = st.n;
                  d["pair"] = st.pair_index;
                  d["m"] = st.m;
                  d["point"] = st.point;
                  d["increment"] = st.increment;
                  steps.append(d);
              }
              py::dict d;
              d["i"] = i;
              d["epsilon"] = w.epsilon;
              d["side"] = side_name(w.side);
              d["steps"] = steps;
              d["left_gap"] = w.left_gap;
              d["alpha"] = w.alpha;
              d["failed_step"] = w.failed_step ? py::object(py::int_(*w.failed_step)) : py::none();
              d["T_word"] = w.T_word.to_string();
              return d;
          },
          py::arg("system"), py::arg("i"), py::arg("depth") = 10, py::arg("budget") = 0);

    m.def("report",
          [](const IfsSystem& s, std::uint64_t budget, unsigned threads) {
              DichotomyReport r;
              {
                  py::gil_scoped_release release;
                  r = dichotomy_report(s, {}, exec(budget, threads));
              }
              py::dict d;
              d["branch"] = branch_name(r.branch);
              d["dim_h_full"] = r.dim_h_full;
              d["hausdorff"] = r.hausdorff;
              d["bowen"] = r.bowen;
              d["box"] = r.box;
              d["assouad"] = r.assouad;
              d["separation"] = separation_dict(r.separation);
              return d;
          },
          py::arg("system"), py::arg("budget") = 0, py::arg("threads") = 1);
}
