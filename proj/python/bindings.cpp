#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <memory>

#include "modalnf/dynamics.hpp"
#include "modalnf/engine.hpp"
#include "modalnf/errors.hpp"
#include "modalnf/problem.hpp"
#include "modalnf/serialize.hpp"
#include "modalnf/verify.hpp"

namespace py = pybind11;
using namespace modalnf;

namespace {

using PyState = std::map<int, std::complex<double>>;

struct Transform {
    std::shared_ptr<ProblemSpec> spec;
    SpectralModel model;
    ModalSeries f;
    NormalFormResult result;
};

StateVector to_state(const SpectralModel& model, const PyState& x) {
    StateVector s = StateVector::zeros(model.modes());
    for (const auto& [j, z] : x) {
        if (!model.modes().contains(j)) throw MissingMode("mode " + std::to_string(j) + " is not in the model");
        s[j] = z;
    }
    return s;
}

MultiIndex to_index(const std::map<int, int>& q) {
    return MultiIndex(std::vector<MultiIndex::Entry>(q.begin(), q.end()));
}

const ModalSeries& pick(const Transform& tr, const std::string& which) {
    if (which == "xi") return tr.result.state.xi;
    if (which == "F") return tr.result.state.F;
    if (which == "R") return tr.result.state.R;
    throw py::value_error("series must be one of 'xi', 'F', 'R'");
}

Transform transform(std::shared_ptr<ProblemSpec> spec, std::optional<int> order,
                    std::optional<std::string> strategy) {
    SpectralModel model = spec->model();
    ModalSeries f = spec->nonlinearity();
    const EngineOptions opts{strategy ? parse_strategy(*strategy) : spec->strategy};
    NormalFormResult result = run(model, f, order.value_or(spec->order), opts);
    return {std::move(spec), std::move(model), std::move(f), std::move(result)};
}

py::dict check_dict(const CheckResult& c) {
    py::dict d;
    d["name"] = c.name;
    d["status"] = std::string(to_string(c.status));
    d["detail"] = c.detail;
    d["margin"] = c.margin;
    return d;
}

}  // namespace

PYBIND11_MODULE(_modalnf, m) {
    m.doc() = "Exact normal forms for diagonal-linear modal ODE systems";

    static py::exception<Error> base(m, "ModalnfError");
    static py::exception<ParseError> parse(m, "ParseError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ParseError& e) {
            py::set_error(parse, e.what());
        } catch (const Error& e) {
            py::set_error(base, (e.kind() + ": " + e.what()).c_str());
        }
    });

    py::class_<ProblemSpec, std::shared_ptr<ProblemSpec>>(m, "Problem")
        .def_property_readonly("modes", [](const ProblemSpec& s) { return s.modes.labels(); })
        .def_property_readonly("order", [](const ProblemSpec& s) { return s.order; })
        .def_property_readonly("strategy", [](const ProblemSpec& s) { return std::string(to_string(s.strategy)); })
        .def_property_readonly("eigenvalues",
                               [](const ProblemSpec& s) {
                                   std::map<int, std::complex<double>> out;
                                   for (const auto& [j, a] : s.eigenvalues) out[j] = a.to_complex();
                                   return out;
                               })
        .def("classes",
             [](const ProblemSpec& s) {
                 const SpectralModel model = s.model();
                 std::map<int, std::string> out;
                 for (int j : model.modes().labels()) {
                     switch (model.classify_mode(j)) {
                         case ModeClass::centre: out[j] = "c"; break;
                         case ModeClass::stable: out[j] = "s"; break;
                         case ModeClass::unstable: out[j] = "u"; break;
                     }
                 }
                 return out;
             })
        .def("text", [](const ProblemSpec& s) { return serialize_problem(s); })
        .def("__eq__", [](const ProblemSpec& a, const ProblemSpec& b) { return a == b; });

    m.def("parse_problem", [](const std::string& text) { return std::make_shared<ProblemSpec>(parse_problem(text)); },
          py::arg("text"));
    m.def("load_problem", [](const std::string& path) { return std::make_shared<ProblemSpec>(load_problem(path)); },
          py::arg("path"));

    py::class_<Transform>(m, "Transform")
        .def_property_readonly("order", [](const Transform& t) { return t.result.state.order; })
        .def_property_readonly("strategy", [](const Transform& t) { return std::string(to_string(t.result.strategy)); })
        .def_property_readonly("problem", [](const Transform& t) { return t.spec; })
        .def("series_text", [](const Transform& t, const std::string& which) { return write_series(pick(t, which)); },
             py::arg("which"))
        .def("ledger_json", [](const Transform& t) { return write_ledger(t.result); })
        .def("term_count", [](const Transform& t, const std::string& which) { return pick(t, which).size(); },
             py::arg("which"))
        .def(
            "coefficient",
            [](const Transform& t, const std::string& which, int target, const std::map<int, int>& q) {
                return pick(t, which).coeff(target, to_index(q)).str();
            },
            py::arg("which"), py::arg("target"), py::arg("q"),
            "Exact time polynomial of one term, as text")
        .def(
            "coefficient_values",
            [](const Transform& t, const std::string& which, int target, const std::map<int, int>& q) {
                const TimePoly c = pick(t, which).coeff(target, to_index(q));
                std::vector<std::complex<double>> out;
                for (const auto& x : c.coeffs()) out.push_back(x.to_complex());
                return out;
            },
            py::arg("which"), py::arg("target"), py::arg("q"), "Coefficients of t^0, t^1, ... as complex numbers")
        .def("separated", [](const Transform& t) { return verify_separation(t.result.state.F, t.model); })
        .def(
            "verify",
            [](const Transform& t, unsigned long long seed) {
                py::list out;
                for (const auto& c : verify_fixtures(t.model, t.f, fixtures_from(t.result), seed)) out.append(check_dict(c));
                return out;
            },
            py::arg("seed") = 20261018ULL)
        .def(
            "integrate",
            [](const Transform& t, const PyState& x0, double t0, double t1, double dt) {
                const Trajectory tr = integrate(t.model, t.result.state.F, to_state(t.model, x0), t0, t1, dt);
                std::vector<std::pair<double, PyState>> out;
                for (const auto& s : tr.samples) out.emplace_back(s.t, s.state.entries());
                return out;
            },
            py::arg("x0"), py::arg("t0") = 0.0, py::arg("t1") = 1.0, py::arg("dt") = 1e-3)
        .def(
            "conjugacy",
            [](const Transform& t, const PyState& x0, double t0, double t1, double dt, bool include_residual) {
                const ConjugacyReport r =
                    check_conjugacy(t.model, t.f, t.result, to_state(t.model, x0), t0, t1, dt, include_residual);
                py::dict d;
                d["max_defect"] = r.max_defect;
                d["t_at_max"] = r.t_at_max;
                d["samples"] = r.samples_checked;
                return d;
            },
            py::arg("x0"), py::arg("t0") = 0.0, py::arg("t1") = 1.0, py::arg("dt") = 1e-3,
            py::arg("include_residual") = true)
        .def(
            "decay",
            [](const Transform& t, const PyState& x0, double horizon, double dt) {
                const DecayReport r = decay_check(t.result, t.model, to_state(t.model, x0), horizon, dt);
                py::list bounds;
                for (const auto& b : r.bounds) {
                    py::dict d;
                    d["name"] = b.name;
                    d["holds"] = b.holds;
                    d["worst_ratio"] = b.worst_ratio;
                    d["samples"] = b.samples;
                    bounds.append(d);
                }
                py::dict d;
                d["all_hold"] = r.all_hold();
                d["max_tilde_norm"] = r.max_tilde_norm;
                d["bounds"] = bounds;
                return d;
            },
            py::arg("x0"), py::arg("horizon"), py::arg("dt") = 1e-3)
        .def(
            "manifold",
            [](const Transform& t, const std::string& which, int samples, double radius, double t_min, double t_max,
               unsigned long long seed) {
                py::list out;
                for (const auto& p : invariant_subset_sample(t.result, t.model, parse_subspace(which), samples, radius,
                                                             {t_min, t_max, seed}))
                    out.append(py::make_tuple(p.t, p.v.entries(), p.x.entries()));
                return out;
            },
            py::arg("which") = "c", py::arg("samples") = 100, py::arg("radius") = 0.01, py::arg("t_min") = 0.0,
            py::arg("t_max") = 1.0, py::arg("seed") = 20261018ULL);

    m.def("transform", &transform, py::arg("problem"), py::arg("order") = py::none(),
          py::arg("strategy") = py::none());
}
