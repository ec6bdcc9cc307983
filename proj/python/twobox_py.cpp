#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twobox/axioms.hpp"
#include "twobox/catalog.hpp"
#include "twobox/classify.hpp"
#include "twobox/errors.hpp"
#include "twobox/positivity.hpp"
#include "twobox/report.hpp"
#include "twobox/tbx.hpp"

namespace py = pybind11;
using namespace twobox;

namespace {

Tolerance tolerance(double eq_tol) {
    Tolerance t;
    if (eq_tol > 0) t.eq_tol = eq_tol;
    t.validate();
    return t;
}

std::vector<std::vector<Complex>> rows(const ComplexMatrix& m) {
    std::vector<std::vector<Complex>> out(m.rows(), std::vector<Complex>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

// Python-side handle; the library shares structures as pointers to const.
struct Handle {
    StructurePtr s;
};

Handle wrap(StructurePtr s) { return {std::move(s)}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "2-box structures of subfactor planar algebras";

    static py::exception<Error> error(m, "TwoBoxError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::handle(error.ptr())(e.what());
            exc.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    py::class_<Handle>(m, "Structure")
        .def_property_readonly("name", [](const Handle& h) { return h.s->name(); })
        .def_property_readonly("dim", [](const Handle& h) { return h.s->dim(); })
        .def_property_readonly("delta", [](const Handle& h) { return h.s->delta(); })
        .def_property_readonly("labels", [](const Handle& h) { return h.s->labels(); })
        .def_property_readonly("trace", [](const Handle& h) { return h.s->trace_vector(); })
        .def(
            "product", [](const Handle& h, std::size_t i, std::size_t j) { return h.s->product_row(i, j); },
            py::arg("i"), py::arg("j"), "Coefficients of b_i . b_j.")
        .def(
            "coproduct", [](const Handle& h, std::size_t i, std::size_t j) { return h.s->coproduct_row(i, j); },
            py::arg("i"), py::arg("j"), "Coefficients of b_i * b_j.")
        .def("to_tbx", [](const Handle& h) { return serialize(*h.s); })
        .def("__repr__", [](const Handle& h) {
            return "<Structure " + h.s->name() + " dim=" + std::to_string(h.s->dim()) + ">";
        });

    m.def("catalog_names", &catalog_names);
    m.def(
        "named", [](const std::string& name, const std::map<std::string, std::string>& params) { return wrap(named(name, params)); },
        py::arg("name"), py::arg("params") = std::map<std::string, std::string>{});
    m.def(
        "parse", [](const std::string& text, bool force) { return wrap(parse(text, {{}, force})); }, py::arg("text"),
        py::arg("force") = false);
    m.def(
        "free_product", [](const Handle& a, const Handle& b) { return wrap(free_product(a.s, b.s)); }, py::arg("a"),
        py::arg("b"));
    m.def(
        "tensor_product", [](const Handle& a, const Handle& b) { return wrap(tensor_product(a.s, b.s)); }, py::arg("a"),
        py::arg("b"));
    m.def(
        "fourier_dual", [](const Handle& h) { return wrap(fourier_dual(h.s)); }, py::arg("s"));

    m.def(
        "verify",
        [](const Handle& h, double tol) {
            const AxiomReport r = verify_axioms(h.s, tolerance(tol));
            py::list checks;
            for (const auto& c : r.checks) checks.append(py::make_tuple(c.name, c.passed, c.residual));
            return py::make_tuple(r.passed(), checks);
        },
        py::arg("s"), py::arg("tol") = 0.0, "(passed, [(check, passed, residual), ...])");
    m.def(
        "classify_json", [](const Handle& h, double tol) { return verdict_json(classify_dim4(h.s, tolerance(tol))); },
        py::arg("s"), py::arg("tol") = 0.0);
    m.def(
        "report_json", [](const Handle& h, double tol) { return report_json(h.s, tolerance(tol)); }, py::arg("s"),
        py::arg("tol") = 0.0);
    m.def(
        "report_text", [](const Handle& h, double tol) { return report_text(h.s, tolerance(tol)); }, py::arg("s"),
        py::arg("tol") = 0.0);
    m.def(
        "new_part_dimension", [](const Handle& h) { return new_part_dimension(h.s); }, py::arg("s"));
    m.def(
        "biprojection_traces",
        [](const Handle& h) {
            std::vector<double> out;
            for (const auto& b : enumerate_biprojections(h.s)) out.push_back(b.trace);
            return out;
        },
        py::arg("s"));
    m.def(
        "find_isomorphism",
        [](const Handle& a, const Handle& b) -> std::optional<std::vector<std::vector<Complex>>> {
            const auto phi = find_isomorphism(a.s, b.s);
            if (!phi) return std::nullopt;
            return rows(*phi);
        },
        py::arg("a"), py::arg("b"), "Coefficient matrix of an isomorphism a -> b, or None.");
}
