#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tsb/adams/scenario.hpp"
#include "tsb/cohomology/models.hpp"
#include "tsb/ext/les.hpp"
#include "tsb/module/dsl.hpp"
#include "tsb/steenrod/subalgebra.hpp"

namespace py = pybind11;
using namespace tsb;

namespace {

std::shared_ptr<const module::GradedModule> load(const std::string& source)
{
    auto m = source.find('(') != std::string::npos ? adams::build_module(source) : module::load_module(source);
    m.validate();
    return std::make_shared<const module::GradedModule>(std::move(m));
}

ext::ExtChart resolve(const std::string& source, int s_max, int t_max, int algebra)
{
    auto m = load(source);
    if (algebra >= 0 && algebra < m->algebra())
        m = std::make_shared<const module::GradedModule>(module::restrict(*m, algebra));
    ext::Resolution r(m, {s_max, t_max});
    return ext::ExtChart::from_resolution(r, m->name());
}

std::vector<std::string> basis(int n, int degree)
{
    std::vector<std::string> out;
    for (const auto& m : steenrod::SubAlgebra::get(n).basis(degree))
        out.push_back(steenrod::to_string(m));
    return out;
}

std::vector<std::string> adem(const std::string& word)
{
    std::vector<std::string> out;
    for (const auto& w : steenrod::to_admissible(steenrod::adem_reduce(steenrod::parse_word(word))))
        out.push_back(steenrod::word_to_string(w));
    return out;
}

std::string twist(const std::string& model, const std::string& mu, int cap)
{
    auto m = cohomology::named_model(model, cap).twisted(mu);
    const auto rep = m.verify_action();
    if (!rep.ok)
        throw adams::InvariantBreach("twisted action fails: " + rep.to_string());
    return module::serialize_module(m);
}

}  // namespace

PYBIND11_MODULE(_tsb, m)
{
    m.doc() = "Steenrod algebra, Ext charts and Adams spectral sequences for twisted string bordism";

    py::register_exception<module::ModuleError>(m, "ModuleError", PyExc_ValueError);
    py::register_exception<cohomology::ModelError>(m, "ModelError", PyExc_ValueError);
    py::register_exception<adams::ScenarioError>(m, "ScenarioError", PyExc_ValueError);
    py::register_exception<adams::StaleLocation>(m, "StaleLocation", PyExc_ValueError);
    py::register_exception<adams::Contradiction>(m, "Contradiction", PyExc_RuntimeError);
    py::register_exception<adams::InvariantBreach>(m, "InvariantBreach", PyExc_RuntimeError);

    m.def("algebra_dimension", [](int n) { return steenrod::SubAlgebra::get(n).dimension(); }, py::arg("n"),
          "Dimension of A(n) for n <= 2.");
    m.def("basis", &basis, py::arg("n"), py::arg("degree"), "Milnor basis of A(n) in one degree.");
    m.def("adem", &adem, py::arg("word"), "Admissible form of a word such as 'Sq2 Sq2'.");

    py::class_<ext::ExtChart>(m, "ExtChart")
        .def_property_readonly("name", &ext::ExtChart::name)
        .def_property_readonly("s_max", &ext::ExtChart::s_max)
        .def_property_readonly("t_max", &ext::ExtChart::t_max)
        .def("dim", &ext::ExtChart::dim, py::arg("s"), py::arg("t"))
        .def("support", &ext::ExtChart::support)
        .def("labels", &ext::ExtChart::labels, py::arg("s"), py::arg("t"))
        .def("h_rank", [](const ext::ExtChart& c, int i, int s, int t) { return c.h(i, s, t).rank(); },
             py::arg("i"), py::arg("s"), py::arg("t"))
        .def("to_text", &ext::ExtChart::to_text)
        .def("to_json", &ext::ExtChart::to_json)
        .def("to_svg", &ext::ExtChart::to_svg, py::arg("max_stem") = -1)
        .def_static("from_json", &ext::ExtChart::from_json, py::arg("text"))
        .def("__eq__", [](const ext::ExtChart& a, const ext::ExtChart& b) { return a == b; });

    m.def("resolve", &resolve, py::arg("module"), py::arg("s_max") = 10, py::arg("t_max") = 24,
          py::arg("algebra") = -1,
          "Ext chart of a module given as builtin:NAME, a file path or a module expression.");
    m.def("twist", &twist, py::arg("model"), py::arg("mu"), py::arg("cap") = 14,
          "Twisted module T(X, mu) as module text; raises InvariantBreach when the action fails.");
    m.def("char_number",
          [](const std::string& ring, const std::string& expr, const std::map<std::string, std::string>& classes) {
              return cohomology::char_number(cohomology::witness_ring(ring), expr, classes);
          },
          py::arg("ring"), py::arg("expr"), py::arg("classes") = std::map<std::string, std::string>{},
          "Integral characteristic number in a witness ring (hp2, hp2xs4, s4).");

    py::class_<adams::AbelianGroup>(m, "AbelianGroup")
        .def_readonly("free_rank", &adams::AbelianGroup::free_rank)
        .def_readonly("torsion", &adams::AbelianGroup::torsion)
        .def("__str__", &adams::AbelianGroup::to_string)
        .def("__eq__", [](const adams::AbelianGroup& a, const adams::AbelianGroup& b) { return a == b; })
        .def_static("parse", &adams::AbelianGroup::parse, py::arg("text"));

    py::class_<adams::AbutmentReport::Entry>(m, "DegreeEntry")
        .def_readonly("assumptions", &adams::AbutmentReport::Entry::assumptions)
        .def_readonly("candidates", &adams::AbutmentReport::Entry::candidates);

    py::class_<adams::AbutmentReport::Degree>(m, "Degree")
        .def_readonly("degree", &adams::AbutmentReport::Degree::degree)
        .def_readonly("entries", &adams::AbutmentReport::Degree::entries)
        .def_readonly("extension_open", &adams::AbutmentReport::Degree::extension_open)
        .def_readonly("under_resolved", &adams::AbutmentReport::Degree::under_resolved);

    py::class_<adams::AbutmentReport>(m, "Report")
        .def_readonly("title", &adams::AbutmentReport::title)
        .def_readonly("degrees", &adams::AbutmentReport::degrees)
        .def_readonly("scans", &adams::AbutmentReport::scans)
        .def_readonly("branches", &adams::AbutmentReport::branches)
        .def("degree", [](const adams::AbutmentReport& r, int n) -> py::object {
            const auto* d = r.degree(n);
            return d ? py::cast(*d) : py::none();
        })
        .def("to_text", &adams::AbutmentReport::to_text)
        .def("to_json", &adams::AbutmentReport::to_json)
        .def_static("from_json", &adams::AbutmentReport::from_json, py::arg("text"));

    m.def("run_scenario",
          [](const std::string& path) { return adams::run_scenario_file(path).report; }, py::arg("path"),
          "Runs a scenario file (or builtin:het, builtin:chl, builtin:spin) and returns its report.");
    m.def("run_scenario_text",
          [](const std::string& text) { return adams::run_scenario(adams::parse_scenario(text)).report; },
          py::arg("text"), "Runs a scenario given as text.");
}
