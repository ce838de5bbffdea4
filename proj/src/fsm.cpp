#include "hfsmdec/fsm.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

namespace hfsmdec {

bool valid_token(const std::string& tok) {
    if (tok.empty()) return false;
    for (char c : tok) {
        if (c == '#' || std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::optional<StateId> Fsm::next(const StateId& q, const Symbol& x) const {
    auto it = delta.find(q);
    if (it == delta.end()) return std::nullopt;
    auto jt = it->second.find(x);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
}

int Fsm::arc_count() const {
    int n = 0;
    for (const auto& [q, out] : delta) n += static_cast<int>(out.size());
    return n;
}

void Fsm::add_state(const StateId& q) {
    if (!valid_token(q)) throw InputError("invalid state id '" + q + "'");
    states.insert(q);
}

void Fsm::add_symbol(const Symbol& x) {
    if (!valid_token(x)) throw InputError("invalid symbol '" + x + "'");
    alphabet.insert(x);
}

void Fsm::add_transition(const StateId& src, const Symbol& x, const StateId& dst) {
    if (!has_state(src)) throw InputError("transition source '" + src + "' is not a state");
    if (!has_state(dst)) throw InputError("transition target '" + dst + "' is not a state");
    if (!alphabet.count(x)) throw InputError("transition symbol '" + x + "' is not in the alphabet");
    auto& out = delta[src];
    if (out.count(x)) {
        throw InputError("duplicate transition (" + src + ", " + x + "): machines are deterministic");
    }
    out.emplace(x, dst);
}

void Fsm::validate() const {
    if (states.empty()) throw InputError("machine has no states");
    for (const auto& q : states) {
        if (!valid_token(q)) throw InputError("invalid state id '" + q + "'");
    }
    for (const auto& x : alphabet) {
        if (!valid_token(x)) throw InputError("invalid symbol '" + x + "'");
    }
    if (!states.count(start)) throw InputError("start state '" + start + "' is not a state");
    for (const auto& [q, out] : delta) {
        if (!states.count(q)) throw InputError("transition source '" + q + "' is not a state");
        for (const auto& [x, t] : out) {
            if (!alphabet.count(x)) throw InputError("transition symbol '" + x + "' is not in the alphabet");
            if (!states.count(t)) throw InputError("transition target '" + t + "' is not a state");
        }
    }
}

std::optional<StateId> eval(const Fsm& z, const Word& w) {
    for (const auto& x : w) {
        if (!z.alphabet.count(x)) throw InputError("symbol '" + x + "' is not in the alphabet");
    }
    std::optional<StateId> cur = z.start;
    for (const auto& x : w) {
        cur = z.next(*cur, x);
        if (!cur) return std::nullopt;
    }
    return cur;
}

std::vector<StateId> bfs_order(const Fsm& z) {
    std::vector<StateId> order;
    std::set<StateId> seen{z.start};
    std::deque<StateId> queue{z.start};
    while (!queue.empty()) {
        StateId q = queue.front();
        queue.pop_front();
        order.push_back(q);
        auto it = z.delta.find(q);
        if (it == z.delta.end()) continue;
        for (const auto& [x, t] : it->second) {  // symbols in lexicographic order
            if (seen.insert(t).second) queue.push_back(t);
        }
    }
    return order;
}

bool is_accessible(const Fsm& z) {
    return bfs_order(z).size() == z.states.size();
}

Fsm accessible_part(const Fsm& z) {
    auto order = bfs_order(z);
    StateSet keep(order.begin(), order.end());
    Fsm out;
    out.states = keep;
    out.alphabet = z.alphabet;
    out.start = z.start;
    for (const auto& q : keep) {
        auto it = z.delta.find(q);
        if (it != z.delta.end()) out.delta[q] = it->second;
    }
    return out;
}

std::vector<StateId> reverse_bfs_order(const Fsm& z) {
    auto order = bfs_order(z);
    if (order.size() != z.states.size()) throw InputError("machine is not accessible");
    std::reverse(order.begin(), order.end());
    return order;
}

StateId block_label(const StateSet& members) {
    std::string label = "{";
    bool first = true;
    for (const auto& m : members) {
        if (!first) label += ",";
        label += m;
        first = false;
    }
    label += "}";
    return label;
}

Fsm quotient(const Fsm& z, const Partition& p) {
    // The partition must cover the states exactly, with disjoint nonempty blocks.
    std::map<StateId, int> block_of;
    for (int i = 0; i < static_cast<int>(p.size()); ++i) {
        if (p[i].empty()) throw InputError("partition block " + std::to_string(i) + " is empty");
        for (const auto& q : p[i]) {
            if (!z.has_state(q)) throw InputError("partition member '" + q + "' is not a state");
            if (!block_of.emplace(q, i).second) {
                throw InputError("partition blocks overlap at '" + q + "'");
            }
        }
    }
    if (block_of.size() != z.states.size()) throw InputError("partition does not cover all states");

    std::vector<StateId> label(p.size());
    std::set<StateId> used_labels;
    for (size_t i = 0; i < p.size(); ++i) {
        label[i] = p[i].size() == 1 ? *p[i].begin() : block_label(p[i]);
        if (!used_labels.insert(label[i]).second) {
            throw InputError("block label '" + label[i] + "' collides with another block");
        }
    }

    Fsm out;
    out.alphabet = z.alphabet;
    for (const auto& l : label) out.states.insert(l);
    out.start = label[block_of.at(z.start)];

    for (size_t i = 0; i < p.size(); ++i) {
        const StateSet& blk = p[i];
        if (blk.size() == 1) {
            const StateId& q = *blk.begin();
            auto it = z.delta.find(q);
            if (it == z.delta.end()) continue;
            for (const auto& [x, t] : it->second) {
                out.delta[label[i]][x] = label[block_of.at(t)];
            }
            continue;
        }
        // A merged block must behave like a single state.
        StateSet entrances;
        for (const auto& [u, outmap] : z.delta) {
            if (blk.count(u)) continue;
            for (const auto& [x, t] : outmap) {
                if (blk.count(t)) entrances.insert(t);
            }
        }
        bool start_inside = blk.count(z.start) > 0;
        if (start_inside ? !(entrances.empty() || (entrances.size() == 1 && entrances.count(z.start)))
                         : entrances.size() > 1) {
            throw QuotientUndefined("block " + label[i] + " has more than one entrance");
        }
        for (const auto& x : z.alphabet) {
            std::set<int> targets;
            bool all_have_arc = true;
            for (const auto& q : blk) {
                auto t = z.next(q, x);
                if (!t) {
                    all_have_arc = false;
                } else if (!blk.count(*t)) {
                    targets.insert(block_of.at(*t));
                }
            }
            if (targets.size() > 1) {
                throw QuotientUndefined("block " + label[i] + " exits on '" + x +
                                        "' towards more than one block");
            }
            if (targets.size() == 1) {
                if (!all_have_arc) {
                    throw QuotientUndefined("block " + label[i] + " exits on '" + x +
                                            "' but not every member has an arc on it");
                }
                out.delta[label[i]][x] = label[*targets.begin()];
            }
        }
    }
    return out;
}

Fsm contract(const Fsm& z, const std::vector<StateSet>& sets) {
    Partition p;
    StateSet merged;
    for (const auto& s : sets) {
        if (s.empty()) throw InputError("cannot contract an empty set");
        for (const auto& q : s) {
            if (!merged.insert(q).second) throw InputError("contracted sets overlap at '" + q + "'");
        }
        p.push_back(s);
    }
    for (const auto& q : z.states) {
        if (!merged.count(q)) p.push_back({q});
    }
    return quotient(z, p);
}

Fsm restrict_to(const Fsm& z, const StateSet& m) {
    if (m.empty()) throw InputError("cannot restrict to an empty set");
    for (const auto& q : m) {
        if (!z.has_state(q)) throw InputError("restriction member '" + q + "' is not a state");
    }
    Fsm out;
    out.states = m;
    out.alphabet = z.alphabet;
    for (const auto& q : m) {
        auto it = z.delta.find(q);
        if (it == z.delta.end()) continue;
        for (const auto& [x, t] : it->second) {
            if (m.count(t)) out.delta[q][x] = t;
        }
    }
    if (m.count(z.start)) {
        out.start = z.start;
    } else {
        std::map<StateId, int> in_arcs;
        for (const auto& q : m) in_arcs[q] = 0;
        for (const auto& [u, outmap] : z.delta) {
            if (m.count(u)) continue;
            for (const auto& [x, t] : outmap) {
                if (m.count(t)) ++in_arcs[t];
            }
        }
        // Head of a maximal number of arcs from outside; smallest id wins ties.
        StateId best = *m.begin();
        int best_count = -1;
        for (const auto& [q, c] : in_arcs) {
            if (c > best_count) {
                best = q;
                best_count = c;
            }
        }
        out.start = best;
    }
    return out;
}

Fsm expand(const Fsm& outer, const StateId& v, const Fsm& inner) {
    if (!outer.has_state(v)) throw InputError("expansion site '" + v + "' is not a state");
    for (const auto& q : outer.states) {
        if (q != v && inner.has_state(q)) {
            throw InputError("state '" + q + "' appears in both machines");
        }
    }
    Fsm out;
    out.alphabet = outer.alphabet;
    out.alphabet.insert(inner.alphabet.begin(), inner.alphabet.end());
    for (const auto& q : outer.states) {
        if (q != v) out.states.insert(q);
    }
    out.states.insert(inner.states.begin(), inner.states.end());
    out.start = (v == outer.start) ? inner.start : outer.start;

    // Arcs towards v land on inner's start (including v's own self-loops).
    auto redirect = [&](const StateId& t) { return t == v ? inner.start : t; };

    for (const auto& q : out.states) {
        if (inner.has_state(q)) {
            auto it = inner.delta.find(q);
            if (it != inner.delta.end()) {
                for (const auto& [x, t] : it->second) out.delta[q][x] = t;
            }
            auto host = outer.delta.find(v);
            if (host != outer.delta.end()) {
                for (const auto& [x, t] : host->second) {
                    if (!out.delta[q].count(x)) out.delta[q][x] = redirect(t);
                }
            }
            if (out.delta[q].empty()) out.delta.erase(q);
        } else {
            auto it = outer.delta.find(q);
            if (it == outer.delta.end()) continue;
            for (const auto& [x, t] : it->second) out.delta[q][x] = redirect(t);
        }
    }
    return out;
}

bool fsm_equal(const Fsm& a, const Fsm& b) {
    return a.states == b.states && a.delta == b.delta && a.start == b.start;
}

bool equivalent(const Fsm& a, const Fsm& b) {
    return fsm_equal(accessible_part(a), accessible_part(b));
}

}  // namespace hfsmdec
