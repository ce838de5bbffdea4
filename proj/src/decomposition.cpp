#include "hfsmdec/decomposition.hpp"

#include <algorithm>
#include <sstream>

#include "hfsmdec/module_theory.hpp"

namespace hfsmdec {

namespace {

// Index-based view of a machine: states and symbols numbered in
// lexicographic order, delta flattened with -1 for "undefined".
struct DenseFsm {
    int n = 0, k = 0;
    std::vector<StateId> id_of;
    std::vector<Symbol> sym_of;
    std::vector<int> delta;  // n*k
    int start = 0;

    int next(int q, int x) const { return delta[q * k + x]; }

    static DenseFsm from(const Fsm& z) {
        DenseFsm d;
        d.n = static_cast<int>(z.states.size());
        d.k = static_cast<int>(z.alphabet.size());
        d.id_of.assign(z.states.begin(), z.states.end());
        d.sym_of.assign(z.alphabet.begin(), z.alphabet.end());
        std::map<StateId, int> sidx;
        std::map<Symbol, int> xidx;
        for (int i = 0; i < d.n; ++i) sidx[d.id_of[i]] = i;
        for (int i = 0; i < d.k; ++i) xidx[d.sym_of[i]] = i;
        d.delta.assign(static_cast<size_t>(d.n) * d.k, -1);
        for (const auto& [q, outmap] : z.delta) {
            for (const auto& [x, t] : outmap) {
                d.delta[sidx.at(q) * d.k + xidx.at(x)] = sidx.at(t);
            }
        }
        d.start = sidx.at(z.start);
        return d;
    }

    // Breadth-first order from the start, arcs in symbol order.
    std::vector<int> bfs() const {
        std::vector<int> order;
        std::vector<char> seen(n, 0);
        order.reserve(n);
        order.push_back(start);
        seen[start] = 1;
        for (size_t head = 0; head < order.size(); ++head) {
            int q = order[head];
            for (int x = 0; x < k; ++x) {
                int t = next(q, x);
                if (t >= 0 && !seen[t]) {
                    seen[t] = 1;
                    order.push_back(t);
                }
            }
        }
        return order;
    }
};

struct DenseArc {
    int from, to;
    char tag;
};

// One focus graph, rebuilt per focus state with shared buffers.
struct DenseGv {
    int focus = 0;
    std::vector<char> alive;          // per state, survives pruning
    std::vector<std::vector<int>> succ, pred;

    void clear(int n) {
        alive.assign(n, 0);
        succ.assign(n, {});
        pred.assign(n, {});
    }
};

class GvBuilder {
public:
    explicit GvBuilder(const DenseFsm& d)
        : d_(d),
          walk_pos_(d.k, std::vector<int>(d.n, -1)),
          walk_stamp_(d.k, std::vector<long long>(d.n, 0)),
          seen_(d.n, 0) {}

    // Rules (a)-(e); arcs may repeat, adjacency is deduplicated below.
    void build(int v, DenseGv& gv, std::vector<DenseArc>* tagged = nullptr) {
        arcs_.clear();
        walks_.assign(d_.k, {});
        ++stamp_;
        for (int x = 0; x < d_.k; ++x) compute_walk(v, x);

        for (int u = 0; u < d_.n; ++u) {
            for (int x = 0; x < d_.k; ++x) {
                int w = d_.next(u, x);
                if (w >= 0) {
                    if (w == v) continue;
                    add(u, w, 'a');
                    int pos = walk_pos_at(w, x);
                    if (pos >= 1) {
                        // w sits on the x-walk out of v; its walk
                        // predecessor is forced into any module with u.
                        add(walks_[x][pos - 1], u, 'c');
                    } else {
                        add(w, u, 'b');
                    }
                } else {
                    add(walks_[x].back(), u, 'd');
                }
            }
        }
        // A node of an x-cycle avoiding v pulls the whole cycle in (the
        // cycle arcs are retained), leaving no room for an x-exit, so the
        // x-walk out of v is forced in as well.
        for (int x = 0; x < d_.k; ++x) {
            for (int u : cycle_nodes(v, x)) add(walks_[x].back(), u, 'e');
        }

        gv.clear(d_.n);
        gv.focus = v;
        for (int q = 0; q < d_.n; ++q) gv.alive[q] = 1;
        if (v != d_.start) prune(v, gv);

        for (const auto& a : arcs_) {
            if (gv.alive[a.from] && gv.alive[a.to]) {
                gv.succ[a.from].push_back(a.to);
                gv.pred[a.to].push_back(a.from);
            }
        }
        for (int q = 0; q < d_.n; ++q) {
            dedupe(gv.succ[q]);
            dedupe(gv.pred[q]);
        }
        if (tagged) *tagged = arcs_;
    }

    // Ancestors of q (inclusive) over the pruned graph.
    std::vector<int> up_set(const DenseGv& gv, int q) {
        ++seen_epoch_;
        std::vector<int> out{q};
        mark_seen(q);
        for (size_t head = 0; head < out.size(); ++head) {
            for (int p : gv.pred[out[head]]) {
                if (!was_seen(p)) {
                    mark_seen(p);
                    out.push_back(p);
                }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    void compute_walk(int v, int x) {
        auto& walk = walks_[x];
        int cur = v;
        while (cur >= 0 && walk_stamp_[x][cur] != stamp_) {
            walk_stamp_[x][cur] = stamp_;
            walk_pos_[x][cur] = static_cast<int>(walk.size());
            walk.push_back(cur);
            cur = d_.next(cur, x);
        }
    }

    int walk_pos_at(int q, int x) const {
        return walk_stamp_[x][q] == stamp_ ? walk_pos_[x][q] : -1;
    }

    // Nodes on x-cycles, skipping any cycle through v itself (such a cycle
    // may legitimately be split by an exit on the walk).
    std::vector<int> cycle_nodes(int v, int x) {
        std::vector<int> out;
        color_.assign(d_.n, 0);
        std::vector<int> walk;
        for (int s = 0; s < d_.n; ++s) {
            if (color_[s]) continue;
            walk.clear();
            int cur = s;
            while (cur >= 0 && color_[cur] == 0) {
                color_[cur] = 1;
                walk.push_back(cur);
                cur = d_.next(cur, x);
            }
            if (cur >= 0 && color_[cur] == 1) {
                bool has_v = false;
                size_t from = 0;
                while (walk[from] != cur) ++from;
                for (size_t i = from; i < walk.size(); ++i) {
                    if (walk[i] == v) has_v = true;
                }
                if (!has_v) {
                    for (size_t i = from; i < walk.size(); ++i) out.push_back(walk[i]);
                }
            }
            for (int q : walk) color_[q] = 2;
        }
        return out;
    }

    void add(int from, int to, char tag) {
        if (from != to) arcs_.push_back({from, to, tag});
    }

    void prune(int v, DenseGv& gv) {
        // Drop everything reachable from the global start, itself included.
        std::vector<std::vector<int>> tmp(d_.n);
        for (const auto& a : arcs_) tmp[a.from].push_back(a.to);
        std::vector<int> queue{d_.start};
        gv.alive[d_.start] = 0;
        for (size_t head = 0; head < queue.size(); ++head) {
            for (int t : tmp[queue[head]]) {
                if (gv.alive[t]) {
                    gv.alive[t] = 0;
                    queue.push_back(t);
                }
            }
        }
        if (!gv.alive[v]) throw InternalError("focus state pruned from its own graph");
    }

    static void dedupe(std::vector<int>& xs) {
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    }

    void mark_seen(int q) { seen_[q] = seen_epoch_; }
    bool was_seen(int q) const { return seen_[q] == seen_epoch_; }

    const DenseFsm& d_;
    std::vector<DenseArc> arcs_;
    std::vector<std::vector<int>> walks_;
    std::vector<std::vector<int>> walk_pos_;        // per symbol
    std::vector<std::vector<long long>> walk_stamp_;
    std::vector<int> color_;
    std::vector<int> seen_;
    long long stamp_ = 0;
    int seen_epoch_ = 0;
};

// Iterative Tarjan over the surviving nodes; emits components sink-first,
// so reversing the result gives a topological order with sources first.
std::vector<std::vector<int>> strongly_connected_components(const DenseGv& gv, int n) {
    std::vector<int> index(n, -1), low(n, 0), on_stack(n, 0);
    std::vector<int> stack;
    std::vector<std::vector<int>> sccs;
    int counter = 0;

    struct Frame {
        int node;
        size_t child = 0;
    };
    std::vector<Frame> call;

    for (int root = 0; root < n; ++root) {
        if (!gv.alive[root] || index[root] >= 0) continue;
        call.push_back({root});
        while (!call.empty()) {
            Frame& f = call.back();
            int q = f.node;
            if (f.child == 0) {
                index[q] = low[q] = counter++;
                stack.push_back(q);
                on_stack[q] = 1;
            }
            bool descended = false;
            while (f.child < gv.succ[q].size()) {
                int t = gv.succ[q][f.child++];
                if (index[t] < 0) {
                    call.push_back({t});
                    descended = true;
                    break;
                }
                if (on_stack[t]) low[q] = std::min(low[q], index[t]);
            }
            if (descended) continue;
            if (low[q] == index[q]) {
                std::vector<int> comp;
                while (true) {
                    int t = stack.back();
                    stack.pop_back();
                    on_stack[t] = 0;
                    comp.push_back(t);
                    if (t == q) break;
                }
                std::sort(comp.begin(), comp.end());
                sccs.push_back(std::move(comp));
            }
            call.pop_back();
            if (!call.empty()) {
                int parent = call.back().node;
                low[parent] = std::min(low[parent], low[q]);
            }
        }
    }
    return sccs;
}

// Tree maintenance on dense node indices.
struct TreeBuilder {
    std::vector<DecompTree::Node> nodes;
    std::vector<int> size;              // |down-set|
    std::vector<int> counter, counter_stamp, visited_stamp;
    std::vector<int> queue, visited;
    int epoch = 0;
    int sink_count = 0;

    void init(int n) {
        nodes.assign(n, {});
        size.assign(n, 1);
        sink_count = n;
    }

    void grow_scratch() {
        counter.resize(nodes.size(), 0);
        counter_stamp.resize(nodes.size(), 0);
        visited_stamp.resize(nodes.size(), 0);
    }

    // Upward sweep from the member sinks: a node joins once all of its
    // children have, so everything visited lies inside the new module.
    // Returns the maximal visited nodes.
    std::vector<int> apices(const std::vector<int>& member_sinks) {
        grow_scratch();
        ++epoch;
        queue.clear();
        visited.clear();
        for (int s : member_sinks) {
            queue.push_back(s);
            visited_stamp[s] = epoch;
        }
        for (size_t head = 0; head < queue.size(); ++head) {
            int t = queue[head];
            visited.push_back(t);
            for (int p : nodes[t].parents) {
                if (counter_stamp[p] != epoch) {
                    counter_stamp[p] = epoch;
                    counter[p] = static_cast<int>(nodes[p].children.size());
                }
                if (--counter[p] == 0) {
                    visited_stamp[p] = epoch;
                    queue.push_back(p);
                }
            }
        }
        std::vector<int> out;
        for (int t : visited) {
            bool covered = false;
            for (int p : nodes[t].parents) {
                if (visited_stamp[p] == epoch) {
                    covered = true;
                    break;
                }
            }
            if (!covered) out.push_back(t);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    int add(const std::vector<int>& member_sinks) {
        std::vector<int> aps = apices(member_sinks);
        if (aps.size() == 1 && size[aps[0]] == static_cast<int>(member_sinks.size())) {
            throw InputError("module already present in the tree");
        }
        int id = static_cast<int>(nodes.size());
        nodes.push_back({});
        size.push_back(static_cast<int>(member_sinks.size()));
        nodes[id].children = aps;
        for (int a : aps) nodes[a].parents.push_back(id);
        return id;
    }
};

std::vector<int> sinks_of(const DecompTree& tree, const StateSet& m) {
    std::vector<int> sinks;
    sinks.reserve(m.size());
    for (const auto& q : m) {
        auto it = tree.sink_of.find(q);
        if (it == tree.sink_of.end()) throw InputError("'" + q + "' is not a state of this tree");
        sinks.push_back(it->second);
    }
    return sinks;
}

DecompTree finish_tree(TreeBuilder&& tb, const DenseFsm& d) {
    DecompTree tree;
    tree.nodes = std::move(tb.nodes);
    tree.sink_count = d.n;
    tree.sink_label = d.id_of;
    for (int i = 0; i < d.n; ++i) tree.sink_of[d.id_of[i]] = i;
    return tree;
}

}  // namespace

GvGraph build_gv(const Fsm& z, const StateId& v) {
    z.validate();
    if (!z.has_state(v)) throw InputError("'" + v + "' is not a state");
    if (!is_accessible(z)) throw InputError("machine is not accessible");

    DenseFsm d = DenseFsm::from(z);
    int vi = static_cast<int>(std::lower_bound(d.id_of.begin(), d.id_of.end(), v) - d.id_of.begin());
    GvBuilder builder(d);
    DenseGv gv;
    std::vector<DenseArc> tagged;
    builder.build(vi, gv, &tagged);

    GvGraph out;
    out.focus = v;
    for (int q = 0; q < d.n; ++q) {
        if (gv.alive[q]) out.nodes.insert(d.id_of[q]);
    }
    for (const auto& a : tagged) {
        if (!gv.alive[a.from] || !gv.alive[a.to]) continue;
        const StateId& from = d.id_of[a.from];
        const StateId& to = d.id_of[a.to];
        out.succ[from].insert(to);
        out.pred[to].insert(from);
        out.arc_case.emplace(std::make_pair(from, to), a.tag);
    }
    return out;
}

StateSet up_set(const GvGraph& g, const StateId& q) {
    if (!g.nodes.count(q)) throw InputError("'" + q + "' was pruned from the focus graph");
    StateSet out{q};
    std::vector<StateId> queue{q};
    for (size_t head = 0; head < queue.size(); ++head) {
        auto it = g.pred.find(queue[head]);
        if (it == g.pred.end()) continue;
        for (const auto& p : it->second) {
            if (out.insert(p).second) queue.push_back(p);
        }
    }
    return out;
}

int DecompTree::arc_count() const {
    int n = 0;
    for (const auto& node : nodes) n += static_cast<int>(node.children.size());
    return n;
}

DecompTree build_decomposition_tree(const Fsm& z) {
    z.validate();
    DenseFsm d = DenseFsm::from(z);
    std::vector<int> order = d.bfs();
    if (static_cast<int>(order.size()) != d.n) throw InputError("machine is not accessible");
    std::reverse(order.begin(), order.end());

    TreeBuilder tb;
    tb.init(d.n);
    GvBuilder builder(d);
    DenseGv gv;
    std::vector<char> used(d.n, 0);

    for (int v : order) {
        builder.build(v, gv);
        auto sccs = strongly_connected_components(gv, d.n);
        // Components in topological order, sources first.
        for (auto it = sccs.rbegin(); it != sccs.rend(); ++it) {
            const auto& comp = *it;
            if (comp.size() == 1 && comp[0] == v) continue;
            int q = -1;
            for (int cand : comp) {
                if (!used[cand]) {
                    q = cand;
                    break;
                }
            }
            if (q < 0) continue;  // exhausted components yield nothing new
            std::vector<int> members = builder.up_set(gv, q);
            tb.add(members);
            for (int m : members) {
                if (m != v) used[m] = 1;
            }
        }
    }
    return finish_tree(std::move(tb), d);
}

void add_module(DecompTree& tree, const StateSet& members) {
    if (members.empty()) throw InputError("cannot insert an empty module");
    std::vector<int> sinks = sinks_of(tree, members);
    if (sinks.size() == 1) throw InputError("module already present in the tree");

    TreeBuilder tb;
    tb.sink_count = tree.sink_count;
    tb.size.assign(tree.node_count(), 1);
    for (int t = tree.sink_count; t < tree.node_count(); ++t) {
        tb.size[t] = static_cast<int>(down_set(tree, t).size());
    }
    tb.nodes = std::move(tree.nodes);
    tb.add(sinks);
    tree.nodes = std::move(tb.nodes);
}

StateSet down_set(const DecompTree& tree, int t) {
    if (t < 0 || t >= tree.node_count()) throw InputError("tree node out of range");
    StateSet out;
    std::vector<int> queue{t};
    std::set<int> seen{t};
    for (size_t head = 0; head < queue.size(); ++head) {
        int cur = queue[head];
        if (tree.is_sink(cur)) {
            out.insert(tree.sink_label[cur]);
            continue;
        }
        for (int c : tree.nodes[cur].children) {
            if (seen.insert(c).second) queue.push_back(c);
        }
    }
    return out;
}

int dimension(const DecompTree& tree) {
    return tree.internal_count();
}

std::vector<int> covering_apices(const DecompTree& tree, const StateSet& m) {
    if (m.empty()) throw InputError("empty state set");
    std::vector<int> sinks = sinks_of(tree, m);
    TreeBuilder tb;
    tb.nodes = tree.nodes;
    tb.sink_count = tree.sink_count;
    return tb.apices(sinks);
}

bool is_thin_module_via_tree(const DecompTree& tree, const StateSet& m) {
    std::vector<int> aps = covering_apices(tree, m);
    std::vector<StateSet> downs;
    downs.reserve(aps.size());
    StateSet covered;
    for (int a : aps) {
        downs.push_back(down_set(tree, a));
        covered.insert(downs.back().begin(), downs.back().end());
    }
    if (covered != m) throw InternalError("apex sweep failed to cover its own sinks");
    return family_overlapping(downs);
}

std::vector<int> minimal_decomposition(const DecompTree& tree, const StateSet& m) {
    if (!is_thin_module_via_tree(tree, m)) throw InputError("not a thin module");
    return covering_apices(tree, m);
}

std::string decomp_tree_to_dot(const DecompTree& tree, bool annotate) {
    std::ostringstream out;
    out << "digraph decomposition_tree {\n";
    out << "  node [shape=circle];\n";
    for (int t = 0; t < tree.node_count(); ++t) {
        if (tree.is_sink(t)) {
            out << "  n" << t << " [label=\"" << tree.sink_label[t] << "\"];\n";
        } else if (annotate) {
            out << "  n" << t << " [label=\"" << block_label(down_set(tree, t)) << "\"];\n";
        } else {
            out << "  n" << t << " [label=\"\"];\n";
        }
    }
    for (int t = 0; t < tree.node_count(); ++t) {
        for (int c : tree.nodes[t].children) {
            out << "  n" << t << " -> n" << c << ";\n";
        }
    }
    out << "}\n";
    return out.str();
}

std::string decomp_tree_to_json(const DecompTree& tree) {
    std::ostringstream out;
    out << "{\"nodes\":[";
    for (int t = 0; t < tree.node_count(); ++t) {
        if (t) out << ",";
        out << "{\"id\":" << t;
        if (tree.is_sink(t)) out << ",\"state\":\"" << tree.sink_label[t] << "\"";
        out << ",\"members\":[";
        bool first = true;
        for (const auto& q : down_set(tree, t)) {
            if (!first) out << ",";
            out << "\"" << q << "\"";
            first = false;
        }
        out << "]}";
    }
    out << "],\"arcs\":[";
    bool first = true;
    for (int t = 0; t < tree.node_count(); ++t) {
        for (int c : tree.nodes[t].children) {
            if (!first) out << ",";
            out << "[" << t << "," << c << "]";
            first = false;
        }
    }
    out << "]}";
    return out.str();
}

}  // namespace hfsmdec
