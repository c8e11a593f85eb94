#include "treeflow/oracles.hpp"

#include <algorithm>

#include "treeflow/flow_engine.hpp"

namespace treeflow {

namespace {

bool feasible_by_subsets(const Instance& inst,
                         const std::vector<long long>& x) {
    for (int ti = 0; ti < int(inst.terminals.size()); ++ti) {
        int s = inst.terminals[ti];
        long long need = 2 * inst.demand(ti);
        if (need == 0) continue;
        for (unsigned mask = 0; mask < (1u << inst.n); ++mask) {
            if (!(mask >> s & 1)) continue;
            bool valid = true;
            for (int tj = 0; tj < int(inst.terminals.size()) && valid; ++tj)
                if (tj != ti && (mask >> inst.terminals[tj] & 1)) valid = false;
            if (!valid) continue;
            long long cut = 0;
            for (int e = 0; e < int(inst.edges.size()); ++e) {
                bool iu = mask >> inst.edges[e].u & 1;
                bool iv = mask >> inst.edges[e].v & 1;
                if (iu != iv) cut += x[e];
            }
            if (cut < need) return false;
        }
    }
    return true;
}

bool feasible_by_min_cut(const Instance& inst,
                         const std::vector<long long>& x) {
    for (int ti = 0; ti < int(inst.terminals.size()); ++ti) {
        long long need = 2 * inst.demand(ti);
        if (need == 0) continue;
        DirectedNetwork net;
        net.node_count = inst.n;
        int sink = net.add_node();
        for (int e = 0; e < int(inst.edges.size()); ++e) {
            net.add_edge(inst.edges[e].u, inst.edges[e].v, 0, x[e]);
            net.add_edge(inst.edges[e].v, inst.edges[e].u, 0, x[e]);
        }
        for (int tj = 0; tj < int(inst.terminals.size()); ++tj)
            if (tj != ti)
                net.add_edge(inst.terminals[tj], sink, 0, DirectedNetwork::kInfCap);
        if (max_flow(net, inst.terminals[ti], sink).value < need) return false;
    }
    return true;
}

}  // namespace

bool support_feasible(const Instance& inst, const std::vector<long long>& x,
                      bool via_min_cut) {
    if (x.size() != inst.edges.size()) throw InvalidInput("support size mismatch");
    if (via_min_cut || inst.n > 12) return feasible_by_min_cut(inst, x);
    return feasible_by_subsets(inst, x);
}

LBruteResult brute_force_L(const Instance& inst, OracleBudget budget) {
    inst.validate();
    long long count = 1;
    for (const auto& e : inst.edges) {
        count *= 2 * e.cap + 1;
        if (count > budget.max_enumeration) throw TooLarge();
    }
    int m = int(inst.edges.size());
    std::vector<long long> x(m, 0);
    bool found = false;
    LBruteResult best;
    while (true) {
        if (support_feasible(inst, x, inst.n > 12)) {
            long long cost = 0;
            for (int e = 0; e < m; ++e) cost += inst.edges[e].cost * x[e];
            if (!found || Rat(cost, 2) < best.value ||
                (Rat(cost, 2) == best.value && x < best.support_halves)) {
                best.support_halves = x;
                best.value = Rat(cost, 2);
                found = true;
            }
        }
        int e = m - 1;
        while (e >= 0 && x[e] == 2 * inst.edges[e].cap) x[e--] = 0;
        if (e < 0) break;
        ++x[e];
    }
    if (!found) throw Infeasible("no feasible support");
    return best;
}

std::pair<TreePoint, Rat> brute_force_lconvex(const TwoSeparable& g,
                                              OracleBudget budget) {
    if (!g.tree) throw InvalidInput("missing tree");
    const Tree& T = *g.tree;
    long long count = 1;
    for (int i = 0; i < g.n; ++i) {
        count *= T.n;
        if (count > budget.max_enumeration) throw TooLarge();
    }
    auto value_at = [&](const TreePoint& x) -> Rat {
        Rat v = g.offset;
        for (const auto& u : g.unary) {
            const Rat& t = u.values.at(x[u.i]);
            if (t.inf) return Rat::infinity();
            v = v + t;
        }
        for (const auto& p : g.pairs) v = v + p.h.at(T.distance(x[p.i], x[p.j]));
        for (const auto& a : g.anchored)
            v = v + a.h.at(T.distance(x[a.i], a.z) + T.distance(x[a.j], a.w));
        return v;
    };
    TreePoint x(g.n, 0);
    bool found = false;
    TreePoint bx;
    Rat bv;
    while (true) {
        Rat v = value_at(x);
        if (!v.inf && (!found || v < bv)) {
            bx = x;
            bv = v;
            found = true;
        }
        int i = g.n - 1;
        while (i >= 0 && x[i] == T.n - 1) x[i--] = 0;
        if (i < 0) break;
        ++x[i];
    }
    if (!found) {
        if (g.n == 0) return {{}, g.offset};
        throw EmptyDomain();
    }
    return {bx, bv};
}

MultiwayBrute brute_force_multiway(const Instance& inst, OracleBudget budget) {
    inst.validate();
    int k = int(inst.terminals.size());
    std::vector<int> nonterm;
    for (int i = 0; i < inst.n; ++i)
        if (inst.terminal_index(i) < 0) nonterm.push_back(i);
    long long count = 1;
    for (size_t i = 0; i < nonterm.size(); ++i) {
        count *= k;
        if (count > budget.max_enumeration) throw TooLarge();
    }
    std::vector<int> part(inst.n);
    for (int s : inst.terminals) part[s] = s;
    MultiwayBrute best;
    bool found = false;
    std::vector<int> choice(nonterm.size(), 0);
    while (true) {
        for (size_t i = 0; i < nonterm.size(); ++i)
            part[nonterm[i]] = inst.terminals[choice[i]];
        long long cut = 0;
        for (const auto& e : inst.edges)
            if (part[e.u] != part[e.v]) cut += e.cap;
        if (!found || cut < best.value ||
            (cut == best.value && part < best.partition)) {
            best.partition = part;
            best.value = cut;
            found = true;
        }
        int i = int(nonterm.size()) - 1;
        while (i >= 0 && choice[i] == k - 1) choice[i--] = 0;
        if (i < 0) break;
        ++choice[i];
    }
    return best;
}

}  // namespace treeflow
