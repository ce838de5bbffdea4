#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hfsmdec/decomposition.hpp"
#include "hfsmdec/hierarchy.hpp"
#include "hfsmdec/random_fsm.hpp"
#include "hfsmdec/text_io.hpp"
#include "hfsmdec/verify.hpp"

namespace py = pybind11;
using namespace hfsmdec;

namespace {

Fsm make_fsm(const std::vector<StateId>& states, const std::vector<Symbol>& alphabet,
             const std::vector<std::tuple<StateId, Symbol, StateId>>& transitions,
             const StateId& start) {
    Fsm z;
    for (const auto& q : states) z.add_state(q);
    for (const auto& x : alphabet) z.add_symbol(x);
    z.start = start;
    for (const auto& [src, sym, dst] : transitions) z.add_transition(src, sym, dst);
    z.validate();
    return z;
}

std::vector<std::tuple<StateId, Symbol, StateId>> fsm_transitions(const Fsm& z) {
    std::vector<std::tuple<StateId, Symbol, StateId>> out;
    for (const auto& [q, outmap] : z.delta) {
        for (const auto& [x, t] : outmap) out.emplace_back(q, x, t);
    }
    return out;
}

std::vector<StateSet> tree_modules(const DecompTree& tree) {
    std::vector<StateSet> out;
    for (int t = tree.sink_count; t < tree.node_count(); ++t) out.push_back(down_set(tree, t));
    return out;
}

}  // namespace

PYBIND11_MODULE(_hfsmdec, m) {
    m.doc() = "thin modular decomposition of finite state machines";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

    py::class_<Fsm>(m, "Fsm")
        .def(py::init(&make_fsm), py::arg("states"), py::arg("alphabet"), py::arg("transitions"),
             py::arg("start"))
        .def_readonly("states", &Fsm::states)
        .def_readonly("alphabet", &Fsm::alphabet)
        .def_readonly("start", &Fsm::start)
        .def_property_readonly("transitions", &fsm_transitions)
        .def("next", [](const Fsm& z, const StateId& q, const Symbol& x) { return z.next(q, x); })
        .def("arc_count", &Fsm::arc_count)
        .def("__eq__", [](const Fsm& a, const Fsm& b) { return a == b; })
        .def("__repr__", [](const Fsm& z) {
            return "<Fsm " + std::to_string(z.states.size()) + " states, " +
                   std::to_string(z.arc_count()) + " arcs>";
        });

    py::class_<NestingArc>(m, "NestingArc")
        .def(py::init([](const std::string& parent, const StateId& host, const std::string& child) {
                 return NestingArc{parent, host, child};
             }),
             py::arg("parent"), py::arg("state"), py::arg("child"))
        .def_readonly("parent", &NestingArc::parent)
        .def_readonly("state", &NestingArc::host)
        .def_readonly("child", &NestingArc::child);

    py::class_<Hfsm>(m, "Hfsm")
        .def(py::init([](const std::map<std::string, Fsm>& machines, const std::string& root,
                         const std::vector<NestingArc>& nesting) {
                 Hfsm z;
                 z.machines = machines;
                 z.root = root;
                 z.nesting = nesting;
                 if (!machines.empty()) z.alphabet = machines.begin()->second.alphabet;
                 z.validate();
                 return z;
             }),
             py::arg("machines"), py::arg("root"), py::arg("nesting"))
        .def_readonly("alphabet", &Hfsm::alphabet)
        .def_readonly("root", &Hfsm::root)
        .def_readonly("machines", &Hfsm::machines)
        .def_readonly("nesting", &Hfsm::nesting)
        .def("order", &Hfsm::order)
        .def("__repr__", [](const Hfsm& z) {
            return "<Hfsm order " + std::to_string(z.order()) + ">";
        });

    py::class_<GvGraph>(m, "GvGraph")
        .def_readonly("focus", &GvGraph::focus)
        .def_readonly("nodes", &GvGraph::nodes)
        .def_readonly("succ", &GvGraph::succ)
        .def_readonly("pred", &GvGraph::pred);

    py::class_<DecompTree>(m, "DecompTree")
        .def_property_readonly("sink_count", [](const DecompTree& t) { return t.sink_count; })
        .def("node_count", &DecompTree::node_count)
        .def("internal_count", &DecompTree::internal_count)
        .def("arc_count", &DecompTree::arc_count)
        .def("down_set", [](const DecompTree& t, int node) { return down_set(t, node); })
        .def("dimension", [](const DecompTree& t) { return dimension(t); })
        .def("modules", &tree_modules, "member sets of the internal nodes")
        .def("is_thin_module", [](const DecompTree& t, const StateSet& m) {
            return is_thin_module_via_tree(t, m);
        })
        .def("minimal_decomposition", [](const DecompTree& t, const StateSet& m) {
            std::vector<StateSet> out;
            for (int node : minimal_decomposition(t, m)) out.push_back(down_set(t, node));
            return out;
        })
        .def("to_dot", [](const DecompTree& t, bool annotate) { return decomp_tree_to_dot(t, annotate); },
             py::arg("annotate") = false)
        .def("to_json", [](const DecompTree& t) { return decomp_tree_to_json(t); });

    py::class_<CanonicalFsm>(m, "CanonicalFsm")
        .def_readonly("state_count", &CanonicalFsm::state_count)
        .def_readonly("transitions", &CanonicalFsm::transitions)
        .def("__eq__", [](const CanonicalFsm& a, const CanonicalFsm& b) { return a == b; })
        .def("__lt__", [](const CanonicalFsm& a, const CanonicalFsm& b) { return a < b; })
        .def("__hash__", [](const CanonicalFsm& c) {
            size_t h = std::hash<int>()(c.state_count);
            for (const auto& [a, x, b] : c.transitions) {
                h = h * 1000003 + std::hash<int>()(a) * 31 + std::hash<std::string>()(x) * 7 +
                    std::hash<int>()(b);
            }
            return h;
        })
        .def("__repr__", [](const CanonicalFsm& c) { return canonical_to_string(c); });

    // machine operations
    m.def("eval", [](const Fsm& z, const Word& w) { return eval(z, w); }, py::arg("fsm"), py::arg("word"));
    m.def("accessible_part", &accessible_part);
    m.def("is_accessible", &is_accessible);
    m.def("reverse_bfs_order", &reverse_bfs_order);
    m.def("quotient", &quotient, py::arg("fsm"), py::arg("partition"));
    m.def("contract", &contract, py::arg("fsm"), py::arg("sets"));
    m.def("restrict", &restrict_to, py::arg("fsm"), py::arg("members"));
    m.def("expand", &expand, py::arg("outer"), py::arg("state"), py::arg("inner"));
    m.def("equivalent", &equivalent);
    m.def("block_label", &block_label);

    // module predicates and oracles
    m.def("analyze", [](const Fsm& z, const StateSet& s) {
        ModuleSet ms = analyze(z, s);
        py::dict out;
        out["members"] = ms.members;
        out["entrances"] = ms.entrances;
        out["exits"] = ms.exits;
        return out;
    });
    m.def("is_module", &is_module);
    m.def("is_module_abstract", &is_module_abstract);
    m.def("is_thin_module", &is_thin_module);
    m.def("module_start_node", &module_start_node);
    m.def("overlapping", &overlapping);
    m.def("family_overlapping", &family_overlapping);
    m.def("enumerate_thin_modules", &enumerate_thin_modules, py::arg("fsm"),
          py::arg("max_states") = kDefaultOracleBound);
    m.def("enumerate_indecomposable_thin", &enumerate_indecomposable_thin, py::arg("fsm"),
          py::arg("max_states") = kDefaultOracleBound);
    m.def("representative", &representative);
    m.def("representative_oracle", &representative_oracle, py::arg("fsm"), py::arg("state"),
          py::arg("max_states") = kDefaultOracleBound);
    m.def("is_strong", &is_strong, py::arg("fsm"), py::arg("members"),
          py::arg("max_states") = kDefaultOracleBound);

    // decomposition
    m.def("build_gv", &build_gv, py::arg("fsm"), py::arg("focus"));
    m.def("up_set", &up_set, py::arg("gv"), py::arg("state"));
    m.def("build_decomposition_tree", &build_decomposition_tree);

    // hierarchies
    m.def("flat_hfsm", &flat_hfsm, py::arg("fsm"), py::arg("name") = "M");
    m.def("nested_start", &nested_start);
    m.def("hierarchical_step", &hierarchical_step);
    m.def("eval_hfsm", &eval_hfsm);
    m.def("expand_one", &expand_one);
    m.def("flatten", &flatten);
    m.def("hfsm_equivalent", &hfsm_equivalent);
    m.def("is_thin_hfsm", &is_thin_hfsm);
    m.def("refines", &refines);

    m.def("canonical_form", &canonical_form);
    m.def("maximal_thin_submodules", &maximal_thin_submodules, py::arg("fsm"), py::arg("members"),
          py::arg("max_states") = kDefaultOracleBound);
    m.def("contracted_form", &contracted_form);
    m.def("core", [](const Hfsm& z) {
        std::vector<std::pair<CanonicalFsm, int>> out;
        for (const auto& [c, count] : core(z)) out.emplace_back(c, count);
        return out;
    });
    m.def("hfsm_dimension", &hfsm_dimension);
    m.def("maximize", &maximize);
    m.def("is_maximal", &is_maximal);

    // io
    m.def("parse_fsm_text", [](const std::string& text) {
        NamedFsm f = parse_fsm_text(text);
        return std::make_pair(f.name, f.fsm);
    });
    m.def("serialize_fsm_text", [](const std::string& name, const Fsm& z) {
        return serialize_fsm_text({name, z});
    });
    m.def("parse_hfsm_json", &parse_hfsm_json);
    m.def("serialize_hfsm_json", &serialize_hfsm_json);
    m.def("fsm_to_dot", &fsm_to_dot, py::arg("fsm"), py::arg("show_modules") = false);

    // random instances
    m.def("random_accessible_fsm", [](unsigned long long seed, int n, int k, double density) {
        Rng rng(seed);
        return random_accessible_fsm(rng, n, k, density);
    }, py::arg("seed"), py::arg("n"), py::arg("k"), py::arg("density") = 0.5);
    m.def("random_thin_hfsm", [](unsigned long long seed, int total_states, int k, int nest_attempts) {
        Rng rng(seed);
        return random_thin_hfsm(rng, total_states, k, nest_attempts);
    }, py::arg("seed"), py::arg("total_states"), py::arg("k"), py::arg("nest_attempts"));

    m.def("verify_random", [](unsigned long long seed, int count, int max_n, int max_k) {
        VerifyOptions opt;
        opt.seed = seed;
        opt.count = count;
        opt.max_n = max_n;
        opt.max_k = max_k;
        VerifyReport r = verify_random(opt);
        return std::make_pair(r.all_passed(), r.to_string());
    }, py::arg("seed") = 7, py::arg("count") = 25, py::arg("max_n") = 6, py::arg("max_k") = 3);
}
