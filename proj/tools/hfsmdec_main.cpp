#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hfsmdec/decomposition.hpp"
#include "hfsmdec/hierarchy.hpp"
#include "hfsmdec/text_io.hpp"
#include "hfsmdec/verify.hpp"

namespace {

using namespace hfsmdec;

constexpr int kExitOk = 0;
constexpr int kExitFalse = 1;       // a queried property does not hold
constexpr int kExitBadInput = 2;    // parse or validation failure
constexpr int kExitInternal = 3;    // broken invariant

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_file(out_path, text);
    }
}

StateSet parse_state_list(const Fsm& z, const std::string& csv) {
    StateSet out;
    size_t pos = 0;
    while (pos <= csv.size()) {
        size_t comma = csv.find(',', pos);
        std::string tok = csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) {
            if (!z.has_state(tok)) throw InputError("'" + tok + "' is not a state");
            out.insert(tok);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw InputError("empty state list");
    return out;
}

Word parse_word(const Fsm& z, const std::vector<std::string>& args) {
    Word w;
    for (const auto& arg : args) {
        if (z.alphabet.count(arg)) {
            w.push_back(arg);
            continue;
        }
        // Convenience: a run of single-character symbols may be written as
        // one token, e.g. "xxy".
        bool splittable = true;
        for (char c : arg) {
            if (!z.alphabet.count(std::string(1, c))) {
                splittable = false;
                break;
            }
        }
        if (!splittable) throw InputError("'" + arg + "' is not a symbol of the machine");
        for (char c : arg) w.push_back(std::string(1, c));
    }
    return w;
}

int run(int argc, char** argv) {
    CLI::App app{"thin modular decomposition of finite state machines"};
    app.require_subcommand(1);

    std::string input, input_b, out_path, format = "dot", states_csv;
    std::vector<std::string> word_args;
    bool annotate = false, show_modules = false;

    auto* decompose = app.add_subcommand("decompose", "build and print the decomposition tree");
    decompose->add_option("input", input, "machine file (.fsm text or hfsm json)")->required();
    decompose->add_option("--format", format, "dot|json")->check(CLI::IsMember({"dot", "json"}));
    decompose->add_flag("--annotate", annotate, "label internal nodes with their member sets");
    decompose->add_option("-o,--output", out_path, "write to file instead of stdout");

    auto* maximize_cmd = app.add_subcommand("maximize", "maximally nest an equivalent hierarchy");
    maximize_cmd->add_option("input", input, "machine file")->required();
    maximize_cmd->add_option("-o,--output", out_path, "write to file instead of stdout");

    auto* flatten_cmd = app.add_subcommand("flatten", "expand a hierarchy to its flat machine");
    flatten_cmd->add_option("input", input, "machine file")->required();
    flatten_cmd->add_option("-o,--output", out_path, "write to file instead of stdout");

    auto* check = app.add_subcommand("check-module", "test a state set for moduleness");
    check->add_option("input", input, "machine file (.fsm)")->required();
    check->add_option("--states", states_csv, "comma-separated state ids")->required();

    auto* core_cmd = app.add_subcommand("core", "canonical contracted forms with multiplicities");
    core_cmd->add_option("input", input, "machine file")->required();

    auto* eval_cmd = app.add_subcommand("eval", "run the machine on a word");
    eval_cmd->add_option("input", input, "machine file")->required();
    eval_cmd->add_option("word", word_args, "symbols (single-char symbols may be concatenated)");

    auto* equiv_cmd = app.add_subcommand("equiv", "exit 0 when the two machines are equivalent");
    equiv_cmd->add_option("input", input, "machine file")->required();
    equiv_cmd->add_option("input_b", input_b, "machine file")->required();

    auto* stats_cmd = app.add_subcommand("stats", "sizes and decomposition statistics");
    stats_cmd->add_option("input", input, "machine file")->required();

    auto* dot_cmd = app.add_subcommand("dot", "render the machine graph");
    dot_cmd->add_option("input", input, "machine file")->required();
    dot_cmd->add_flag("--show-modules", show_modules, "draw strong modules as clusters");
    dot_cmd->add_option("-o,--output", out_path, "write to file instead of stdout");

    VerifyOptions vopt;
    bool random_mode = false;
    auto* verify_cmd = app.add_subcommand("verify", "run the property suite");
    verify_cmd->add_option("input", input, "machine file (omit with --random)");
    verify_cmd->add_flag("--random", random_mode, "verify a random corpus instead of a file");
    verify_cmd->add_option("--seed", vopt.seed, "corpus seed")->envname("HFSMDEC_SEED");
    verify_cmd->add_option("--count", vopt.count, "number of random machines");
    verify_cmd->add_option("--max-n", vopt.max_n, "max states per random machine");
    verify_cmd->add_option("--max-k", vopt.max_k, "max symbols per random machine");
    verify_cmd->add_option("--oracle-bound", vopt.oracle_bound, "state cap for exhaustive oracles");
    verify_cmd->add_option("--hfsm-count", vopt.hfsm_count, "number of random hierarchies");
    verify_cmd->add_option("--counterexample-dir", vopt.counterexample_dir,
                           "where to write failing machines");

    CLI11_PARSE(app, argc, argv);

    if (decompose->parsed()) {
        Hfsm z = load_any_file(input);
        Fsm flat = accessible_part(flatten(z));
        DecompTree tree = build_decomposition_tree(flat);
        emit(format == "dot" ? decomp_tree_to_dot(tree, annotate) : decomp_tree_to_json(tree) + "\n",
             out_path);
        return kExitOk;
    }
    if (maximize_cmd->parsed()) {
        Hfsm z = load_any_file(input);
        emit(serialize_hfsm_json(maximize(z)), out_path);
        return kExitOk;
    }
    if (flatten_cmd->parsed()) {
        Hfsm z = load_any_file(input);
        emit(serialize_fsm_text({z.root, flatten(z)}), out_path);
        return kExitOk;
    }
    if (check->parsed()) {
        NamedFsm m = load_fsm_file(input);
        StateSet set = parse_state_list(m.fsm, states_csv);
        bool mod = is_module(m.fsm, set);
        bool thin = mod && is_thin_module(m.fsm, set);
        std::cout << "module: " << (mod ? "yes" : "no");
        std::cout << ", thin: " << (thin ? "yes" : "no");
        if (mod) std::cout << ", entrance: " << module_start_node(m.fsm, set);
        std::cout << "\n";
        return mod ? kExitOk : kExitFalse;
    }
    if (core_cmd->parsed()) {
        Hfsm z = load_any_file(input);
        std::cout << core_to_string(core(z));
        return kExitOk;
    }
    if (eval_cmd->parsed()) {
        Hfsm z = load_any_file(input);
        Fsm flat = flatten(z);
        auto result = eval(flat, parse_word(flat, word_args));
        std::cout << (result ? *result : std::string("undefined")) << "\n";
        return kExitOk;
    }
    if (equiv_cmd->parsed()) {
        bool eq = hfsm_equivalent(load_any_file(input), load_any_file(input_b));
        std::cout << (eq ? "equivalent" : "not equivalent") << "\n";
        return eq ? kExitOk : kExitFalse;
    }
    if (stats_cmd->parsed()) {
        Hfsm z = load_any_file(input);
        Fsm flat = flatten(z);
        Fsm acc = accessible_part(flat);
        DecompTree tree = build_decomposition_tree(acc);
        std::cout << "machines: " << z.order() << "\n";
        std::cout << "states: " << flat.states.size() << "\n";
        std::cout << "symbols: " << flat.alphabet.size() << "\n";
        std::cout << "arcs: " << flat.arc_count() << "\n";
        std::cout << "accessible: " << (flat.states.size() == acc.states.size() ? "yes" : "no") << "\n";
        std::cout << "dimension: " << dimension(tree) << "\n";
        std::cout << "indecomposable thin modules: " << tree.node_count() << "\n";
        std::cout << "tree arcs: " << tree.arc_count() << "\n";
        if (z.order() > 1) {
            std::cout << "thin hierarchy: " << (is_thin_hfsm(z) ? "yes" : "no") << "\n";
            std::cout << "hierarchy dimension: " << hfsm_dimension(z) << "\n";
        }
        return kExitOk;
    }
    if (dot_cmd->parsed()) {
        Hfsm z = load_any_file(input);
        emit(fsm_to_dot(flatten(z), show_modules), out_path);
        return kExitOk;
    }
    if (verify_cmd->parsed()) {
        VerifyReport report;
        if (random_mode) {
            report = verify_random(vopt);
        } else if (!input.empty()) {
            Hfsm z = load_any_file(input);
            report = z.order() > 1 ? verify_hfsm(z, vopt) : verify_machine(z.machines.begin()->second, vopt);
        } else {
            throw InputError("verify needs a machine file or --random");
        }
        std::cout << report.to_string();
        std::cout << (report.all_passed() ? "all properties passed" : "PROPERTY FAILURES") << "\n";
        return report.all_passed() ? kExitOk : kExitFalse;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
