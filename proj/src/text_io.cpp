#include "hfsmdec/text_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hfsmdec/decomposition.hpp"
#include "hfsmdec/module_theory.hpp"

namespace hfsmdec {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::string stripped = line.substr(0, line.find('#'));
    std::istringstream in(stripped);
    std::vector<std::string> toks;
    std::string tok;
    while (in >> tok) toks.push_back(tok);
    return toks;
}

}  // namespace

NamedFsm parse_fsm_text(const std::string& text) {
    NamedFsm out;
    bool saw_name = false, saw_start = false;
    StateId start;
    std::vector<std::tuple<int, StateId, Symbol, StateId>> trans;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto where = [&] { return "line " + std::to_string(lineno); };
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        const std::string& directive = toks[0];
        if (directive == "fsm") {
            if (toks.size() != 2) throw ParseError(where(), "expected: fsm <name>");
            if (saw_name) throw ParseError(where(), "duplicate fsm directive");
            out.name = toks[1];
            saw_name = true;
        } else if (directive == "alphabet") {
            if (toks.size() < 2) throw ParseError(where(), "expected: alphabet <sym>...");
            for (size_t i = 1; i < toks.size(); ++i) {
                if (!valid_token(toks[i])) throw ParseError(where(), "invalid symbol '" + toks[i] + "'");
                out.fsm.alphabet.insert(toks[i]);
            }
        } else if (directive == "states") {
            if (toks.size() < 2) throw ParseError(where(), "expected: states <id>...");
            for (size_t i = 1; i < toks.size(); ++i) {
                if (!valid_token(toks[i])) throw ParseError(where(), "invalid state id '" + toks[i] + "'");
                out.fsm.states.insert(toks[i]);
            }
        } else if (directive == "start") {
            if (toks.size() != 2) throw ParseError(where(), "expected: start <id>");
            if (saw_start) throw ParseError(where(), "duplicate start directive");
            start = toks[1];
            saw_start = true;
        } else if (directive == "trans") {
            if (toks.size() != 4) throw ParseError(where(), "expected: trans <src> <sym> <dst>");
            trans.emplace_back(lineno, toks[1], toks[2], toks[3]);
        } else {
            throw ParseError(where(), "unknown directive '" + directive + "'");
        }
    }
    if (!saw_name) throw ParseError("line " + std::to_string(lineno), "missing fsm directive");
    if (!saw_start) throw ParseError("line " + std::to_string(lineno), "missing start directive");
    if (!out.fsm.states.count(start)) {
        throw ParseError("start", "'" + start + "' is not a declared state");
    }
    out.fsm.start = start;
    for (const auto& [ln, src, sym, dst] : trans) {
        try {
            out.fsm.add_transition(src, sym, dst);
        } catch (const InputError& e) {
            throw ParseError("line " + std::to_string(ln), e.what());
        }
    }
    out.fsm.validate();
    return out;
}

std::string serialize_fsm_text(const NamedFsm& m) {
    std::ostringstream out;
    out << "fsm " << m.name << "\n";
    out << "alphabet";
    for (const auto& x : m.fsm.alphabet) out << " " << x;
    out << "\n";
    out << "states";
    for (const auto& q : m.fsm.states) out << " " << q;
    out << "\n";
    out << "start " << m.fsm.start << "\n";
    for (const auto& [q, outmap] : m.fsm.delta) {
        for (const auto& [x, t] : outmap) {
            out << "trans " << q << " " << x << " " << t << "\n";
        }
    }
    return out.str();
}

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

NamedFsm load_fsm_file(const std::string& path) {
    return parse_fsm_text(slurp(path));
}

Hfsm parse_hfsm_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("json", e.what());
    }
    auto require = [&](const nlohmann::json& obj, const char* field, const std::string& path) {
        if (!obj.contains(field)) throw ParseError(path + "." + field, "missing field");
        return obj.at(field);
    };

    Hfsm out;
    for (const auto& x : require(j, "alphabet", "$")) {
        if (!x.is_string() || !valid_token(x.get<std::string>())) {
            throw ParseError("$.alphabet", "symbols must be nonempty tokens");
        }
        out.alphabet.insert(x.get<std::string>());
    }
    out.root = require(j, "root", "$").get<std::string>();

    const auto& machines = require(j, "machines", "$");
    for (size_t i = 0; i < machines.size(); ++i) {
        std::string path = "$.machines[" + std::to_string(i) + "]";
        const auto& jm = machines.at(i);
        std::string name = require(jm, "name", path).get<std::string>();
        if (out.machines.count(name)) throw ParseError(path + ".name", "duplicate machine '" + name + "'");
        Fsm fsm;
        fsm.alphabet = out.alphabet;
        for (const auto& q : require(jm, "states", path)) {
            if (!q.is_string() || !valid_token(q.get<std::string>())) {
                throw ParseError(path + ".states", "state ids must be nonempty tokens");
            }
            fsm.states.insert(q.get<std::string>());
        }
        fsm.start = require(jm, "start", path).get<std::string>();
        if (!fsm.states.count(fsm.start)) {
            throw ParseError(path + ".start", "'" + fsm.start + "' is not a state of '" + name + "'");
        }
        const auto& jt = require(jm, "transitions", path);
        for (size_t k = 0; k < jt.size(); ++k) {
            const auto& triple = jt.at(k);
            std::string tpath = path + ".transitions[" + std::to_string(k) + "]";
            if (!triple.is_array() || triple.size() != 3) {
                throw ParseError(tpath, "expected [src, sym, dst]");
            }
            try {
                fsm.add_transition(triple.at(0).get<std::string>(), triple.at(1).get<std::string>(),
                                   triple.at(2).get<std::string>());
            } catch (const InputError& e) {
                throw ParseError(tpath, e.what());
            }
        }
        out.machines.emplace(name, std::move(fsm));
    }

    const auto& nesting = require(j, "nesting", "$");
    for (size_t i = 0; i < nesting.size(); ++i) {
        std::string path = "$.nesting[" + std::to_string(i) + "]";
        const auto& ja = nesting.at(i);
        out.nesting.push_back({require(ja, "parent", path).get<std::string>(),
                               require(ja, "state", path).get<std::string>(),
                               require(ja, "child", path).get<std::string>()});
    }
    try {
        out.validate();
    } catch (const InputError& e) {
        throw ParseError("$", e.what());
    }
    return out;
}

std::string serialize_hfsm_json(const Hfsm& z) {
    nlohmann::ordered_json j;
    j["alphabet"] = z.alphabet;
    j["root"] = z.root;
    j["machines"] = nlohmann::ordered_json::array();
    for (const auto& [name, fsm] : z.machines) {
        nlohmann::ordered_json jm;
        jm["name"] = name;
        jm["states"] = fsm.states;
        jm["start"] = fsm.start;
        auto trans = nlohmann::ordered_json::array();
        for (const auto& [q, outmap] : fsm.delta) {
            for (const auto& [x, t] : outmap) {
                trans.push_back({q, x, t});
            }
        }
        jm["transitions"] = std::move(trans);
        j["machines"].push_back(std::move(jm));
    }
    auto arcs = nlohmann::ordered_json::array();
    std::vector<NestingArc> sorted = z.nesting;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& arc : sorted) {
        arcs.push_back({{"parent", arc.parent}, {"state", arc.host}, {"child", arc.child}});
    }
    j["nesting"] = std::move(arcs);
    return j.dump(2) + "\n";
}

Hfsm load_hfsm_file(const std::string& path) {
    return parse_hfsm_json(slurp(path));
}

Hfsm load_any_file(const std::string& path) {
    if (ends_with(path, ".fsm")) {
        NamedFsm m = load_fsm_file(path);
        return flat_hfsm(m.fsm, m.name);
    }
    return load_hfsm_file(path);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << content;
}

namespace {

struct ClusterEmitter {
    const std::vector<StateSet>& modules;          // sorted by size descending
    const std::map<StateId, int>& node_id;
    std::vector<std::vector<int>> children;        // immediate containment
    std::ostringstream& out;

    void emit(int i, const std::string& indent) {
        out << indent << "subgraph cluster_" << i << " {\n";
        out << indent << "  color=grey;\n";
        StateSet remaining = modules[i];
        for (int c : children[i]) {
            emit(c, indent + "  ");
            for (const auto& q : modules[c]) remaining.erase(q);
        }
        for (const auto& q : remaining) out << indent << "  n" << node_id.at(q) << ";\n";
        out << indent << "}\n";
    }
};

}  // namespace

std::string fsm_to_dot(const Fsm& z, bool show_modules) {
    std::ostringstream out;
    out << "digraph fsm {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=circle];\n";
    std::map<StateId, int> node_id;
    int next_id = 0;
    for (const auto& q : z.states) node_id[q] = next_id++;
    out << "  start_marker [shape=point, label=\"\"];\n";

    if (show_modules && is_accessible(z)) {
        // Strong non-trivial modules never overlap each other, so they form
        // a laminar family and can be drawn as nested clusters.
        DecompTree tree = build_decomposition_tree(z);
        std::vector<StateSet> all;
        for (int t = tree.sink_count; t < tree.node_count(); ++t) {
            StateSet m = down_set(tree, t);
            if (m.size() < z.states.size()) all.push_back(std::move(m));
        }
        std::vector<StateSet> strong;
        for (const auto& m : all) {
            bool ok = true;
            for (const auto& other : all) {
                if (&m != &other && overlapping(m, other)) {
                    ok = false;
                    break;
                }
            }
            if (ok) strong.push_back(m);
        }
        std::sort(strong.begin(), strong.end(), [](const StateSet& a, const StateSet& b) {
            if (a.size() != b.size()) return a.size() > b.size();
            return a < b;
        });
        int n = static_cast<int>(strong.size());
        std::vector<int> parent(n, -1);
        for (int i = 0; i < n; ++i) {
            for (int j = i - 1; j >= 0; --j) {  // smallest strict superset wins
                if (strong[j].size() > strong[i].size() &&
                    std::includes(strong[j].begin(), strong[j].end(), strong[i].begin(),
                                  strong[i].end())) {
                    if (parent[i] < 0 || strong[j].size() < strong[parent[i]].size()) parent[i] = j;
                }
            }
        }
        ClusterEmitter emitter{strong, node_id, std::vector<std::vector<int>>(n), out};
        for (int i = 0; i < n; ++i) {
            if (parent[i] >= 0) emitter.children[parent[i]].push_back(i);
        }
        for (int i = 0; i < n; ++i) {
            if (parent[i] < 0) emitter.emit(i, "  ");
        }
    }

    for (const auto& q : z.states) {
        out << "  n" << node_id.at(q) << " [label=\"" << q << "\"];\n";
    }
    out << "  start_marker -> n" << node_id.at(z.start) << ";\n";
    for (const auto& [q, outmap] : z.delta) {
        for (const auto& [x, t] : outmap) {
            out << "  n" << node_id.at(q) << " -> n" << node_id.at(t) << " [label=\"" << x << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace hfsmdec
