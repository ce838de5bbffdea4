#include "hfsmdec/random_fsm.hpp"

#include <algorithm>

#include "hfsmdec/decomposition.hpp"

namespace hfsmdec {

namespace {

std::string padded(int i, int width) {
    std::string s = std::to_string(i);
    return "q" + std::string(width - std::min<int>(width, s.size()), '0') + s;
}

}  // namespace

Fsm random_accessible_fsm(Rng& rng, int n, int k, double density) {
    if (n < 1) throw InputError("need at least one state");
    if (k < 1 || k > 26) throw InputError("symbol count must be in 1..26");
    int width = static_cast<int>(std::to_string(n - 1).size());
    Fsm z;
    for (int x = 0; x < k; ++x) z.alphabet.insert(std::string(1, static_cast<char>('a' + x)));
    std::vector<StateId> ids(n);
    for (int i = 0; i < n; ++i) {
        ids[i] = padded(i, width);
        z.states.insert(ids[i]);
    }
    z.start = ids[0];

    std::vector<Symbol> symbols(z.alphabet.begin(), z.alphabet.end());
    std::vector<std::vector<int>> free_slots(n);
    for (int i = 0; i < n; ++i) {
        for (int x = 0; x < k; ++x) free_slots[i].push_back(x);
    }
    for (int i = 1; i < n; ++i) {
        // Attach to any earlier state with a spare symbol.
        std::vector<int> candidates;
        for (int j = 0; j < i; ++j) {
            if (!free_slots[j].empty()) candidates.push_back(j);
        }
        int p = candidates[std::uniform_int_distribution<size_t>(0, candidates.size() - 1)(rng)];
        auto& slots = free_slots[p];
        size_t si = std::uniform_int_distribution<size_t>(0, slots.size() - 1)(rng);
        int x = slots[si];
        slots.erase(slots.begin() + si);
        z.add_transition(ids[p], symbols[x], ids[i]);
    }
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> target(0, n - 1);
    for (int i = 0; i < n; ++i) {
        for (int x : free_slots[i]) {
            if (coin(rng) < density) {
                z.add_transition(ids[i], symbols[x], ids[target(rng)]);
            }
        }
    }
    return z;
}

Word random_word(Rng& rng, const std::set<Symbol>& alphabet, int max_len) {
    std::vector<Symbol> symbols(alphabet.begin(), alphabet.end());
    int len = std::uniform_int_distribution<int>(0, max_len)(rng);
    Word w;
    w.reserve(len);
    std::uniform_int_distribution<size_t> pick(0, symbols.size() - 1);
    for (int i = 0; i < len; ++i) w.push_back(symbols[pick(rng)]);
    return w;
}

Hfsm random_thin_hfsm(Rng& rng, int total_states, int k, int nest_attempts, double density) {
    Fsm base = random_accessible_fsm(rng, total_states, k, density);
    Hfsm z = flat_hfsm(base, "root");
    for (int attempt = 0; attempt < nest_attempts; ++attempt) {
        std::vector<std::string> names;
        for (const auto& [name, fsm] : z.machines) names.push_back(name);
        const std::string& name = names[std::uniform_int_distribution<size_t>(0, names.size() - 1)(rng)];
        Fsm machine = z.machines.at(name);
        DecompTree tree = build_decomposition_tree(machine);
        std::vector<StateSet> candidates;
        for (int t = tree.sink_count; t < tree.node_count(); ++t) {
            StateSet m = down_set(tree, t);
            if (m.size() < machine.states.size()) candidates.push_back(std::move(m));
        }
        if (candidates.empty()) continue;
        const StateSet& m = candidates[std::uniform_int_distribution<size_t>(0, candidates.size() - 1)(rng)];
        StateId block = block_label(m);
        std::string child_name = name + "/" + std::to_string(attempt);
        Fsm inner = restrict_to(machine, m);
        z.machines[name] = contract(machine, {m});
        z.machines.emplace(child_name, inner);
        for (auto& arc : z.nesting) {
            if (arc.parent == name && m.count(arc.host)) arc.parent = child_name;
        }
        z.nesting.push_back({name, block, child_name});
    }
    z.validate();
    return z;
}

}  // namespace hfsmdec
