#include "treeflow/multiflow.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <memory>
#include <numeric>
#include <set>

namespace treeflow {

void Instance::validate() const {
    if (n <= 0) throw InvalidInput("instance needs at least one node");
    if (terminals.empty()) throw InvalidInput("no terminals");
    std::set<int> seen;
    for (int s : terminals) {
        if (s < 0 || s >= n) throw InvalidInput("terminal out of range");
        if (!seen.insert(s).second) throw InvalidInput("duplicate terminal");
    }
    for (const auto& e : edges) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw InvalidInput("edge endpoint out of range");
        if (e.u == e.v) throw InvalidInput("self-loop");
        if (e.cap < 0 || e.cost < 0) throw InvalidInput("negative capacity or cost");
    }
    if (!demands.empty() && demands.size() != terminals.size())
        throw InvalidInput("demand vector size mismatch");
    for (long long r : demands)
        if (r < 0) throw InvalidInput("negative demand");
}

int Instance::terminal_index(int node) const {
    for (int i = 0; i < int(terminals.size()); ++i)
        if (terminals[i] == node) return i;
    return -1;
}

long long Instance::max_cost() const {
    long long a = 0;
    for (const auto& e : edges) a = std::max(a, e.cost);
    return a;
}

bool Potential::is_proper(const Instance& inst) const {
    for (int ti = 0; ti < int(inst.terminals.size()); ++ti) {
        int s = inst.terminals[ti];
        if (h[s] > 0 && leg[s] != s) return false;
        for (int i = 0; i < inst.n; ++i)
            if (h[i] > 0 && leg[i] == s && h[i] > h[s]) return false;
    }
    return true;
}

bool Potential::integral() const {
    for (long long x : h)
        if (x % 2 != 0) return false;
    return true;
}

long long dist_halves(const Potential& p, int i, int j) {
    int li = p.h[i] > 0 ? p.leg[i] : -1;
    int lj = p.h[j] > 0 ? p.leg[j] : -1;
    if (li == lj || li < 0 || lj < 0) return std::llabs(p.h[i] - p.h[j]);
    return p.h[i] + p.h[j];
}

long long dual_halves(const Instance& inst, const Potential& p) {
    long long v = 0;
    for (int ti = 0; ti < int(inst.terminals.size()); ++ti)
        v += inst.demand(ti) * p.h[inst.terminals[ti]];
    for (int e = 0; e < int(inst.edges.size()); ++e) {
        const auto& ed = inst.edges[e];
        v -= ed.cap * std::max(0LL, dist_halves(p, ed.u, ed.v) - 2 * ed.cost);
    }
    return v;
}

Rat dual_objective(const Instance& inst, const Potential& p) {
    return Rat(dual_halves(inst, p), 2);
}

long long omega_halves(const Instance& inst, const Potential& p) {
    return -dual_halves(inst, p);
}

std::vector<long long> Multiflow::terminal_flow_halves(const Instance& inst) const {
    std::vector<long long> f(inst.terminals.size(), 0);
    for (const auto& P : paths) {
        int a = inst.terminal_index(P.nodes.front());
        int b = inst.terminal_index(P.nodes.back());
        if (a < 0 || b < 0) throw InvalidInput("path endpoint is not a terminal");
        f[a] += P.lambda_halves;
        f[b] += P.lambda_halves;
    }
    return f;
}

long long Multiflow::value_halves() const {
    long long v = 0;
    for (const auto& P : paths) v += P.lambda_halves;
    return v;
}

std::vector<long long> flow_support(const Instance& inst, const Multiflow& f) {
    std::vector<long long> x(inst.edges.size(), 0);
    // parallel edges between the same endpoints, for greedy assignment
    std::map<std::pair<int, int>, std::vector<int>> by_ends;
    for (int e = 0; e < int(inst.edges.size()); ++e) {
        auto key = std::minmax(inst.edges[e].u, inst.edges[e].v);
        by_ends[{key.first, key.second}].push_back(e);
    }
    for (const auto& P : f.paths) {
        if (P.nodes.size() < 2) throw InvalidInput("path too short");
        bool have_ids = P.edge_ids.size() == P.nodes.size() - 1;
        for (int k = 0; k + 1 < int(P.nodes.size()); ++k) {
            int u = P.nodes[k], v = P.nodes[k + 1];
            int chosen = -1;
            if (have_ids) {
                chosen = P.edge_ids[k];
                auto key = std::minmax(u, v);
                if (chosen < 0 || chosen >= int(inst.edges.size()) ||
                    std::minmax(inst.edges[chosen].u, inst.edges[chosen].v) != key)
                    throw InvalidInput("path edge id does not match step");
            } else {
                auto key = std::minmax(u, v);
                auto it = by_ends.find({key.first, key.second});
                if (it == by_ends.end()) throw InvalidInput("path step is not an edge");
                long long best_room = -1;
                for (int e : it->second) {
                    long long room = 2 * inst.edges[e].cap - x[e];
                    if (room > best_room) {
                        best_room = room;
                        chosen = e;
                    }
                }
            }
            x[chosen] += P.lambda_halves;
        }
    }
    for (int e = 0; e < int(inst.edges.size()); ++e)
        if (x[e] > 2 * inst.edges[e].cap) throw CapacityViolated();
    return x;
}

long long primal_cost_halves(const Instance& inst, const Multiflow& f) {
    auto x = flow_support(inst, f);
    long long c = 0;
    for (int e = 0; e < int(inst.edges.size()); ++e) c += inst.edges[e].cost * x[e];
    return c;
}

Rat primal_cost(const Instance& inst, const Multiflow& f) {
    return Rat(primal_cost_halves(inst, f), 2);
}

std::pair<Instance, long long> perturb_costs(const Instance& inst) {
    long long cz = 0;
    bool any_zero = false;
    for (const auto& e : inst.edges)
        if (e.cost == 0) {
            any_zero = true;
            cz += e.cap;
        }
    if (!any_zero) return {inst, 1};
    long long scale = 2 * cz + 1;
    Instance out = inst;
    for (auto& e : out.edges) e.cost = e.cost == 0 ? 1 : scale * e.cost;
    return {out, scale};
}

std::vector<std::pair<long long, std::vector<char>>> terminal_min_cuts(const Instance& inst) {
    std::vector<std::pair<long long, std::vector<char>>> out;
    for (int ti = 0; ti < int(inst.terminals.size()); ++ti) {
        DirectedNetwork net;
        net.node_count = inst.n;
        int sink = net.add_node();
        for (const auto& e : inst.edges) {
            net.add_edge(e.u, e.v, 0, e.cap);
            net.add_edge(e.v, e.u, 0, e.cap);
        }
        for (int tj = 0; tj < int(inst.terminals.size()); ++tj)
            if (tj != ti)
                net.add_edge(inst.terminals[tj], sink, 0, DirectedNetwork::kInfCap);
        FlowResult res = max_flow(net, inst.terminals[ti], sink);
        std::vector<char> cut(res.cut_side.begin(), res.cut_side.begin() + inst.n);
        out.push_back({res.value, std::move(cut)});
    }
    return out;
}

FeasibilityReport check_feasibility(const Instance& inst) {
    FeasibilityReport rep;
    auto cuts = terminal_min_cuts(inst);
    for (int ti = 0; ti < int(inst.terminals.size()); ++ti) {
        rep.kappa.push_back(cuts[ti].first);
        if (rep.feasible && cuts[ti].first < inst.demand(ti)) {
            rep.feasible = false;
            rep.violated_terminal = ti;
            rep.witness_cut = cuts[ti].second;
        }
    }
    return rep;
}

// ---------------------------------------------------------------- D_p

DoubleCoverNetwork build_double_cover(const Instance& inst, const Potential& p) {
    for (const auto& e : inst.edges)
        if (e.cost <= 0) throw CostNotPositive();
    if (int(p.h.size()) != inst.n || int(p.leg.size()) != inst.n)
        throw InvalidInput("potential size mismatch");
    if (!p.is_proper(inst)) throw InvalidInput("potential must be proper");
    for (int ti = 0; ti < int(inst.terminals.size()); ++ti) {
        int s = inst.terminals[ti];
        if (p.h[s] > 0 && p.leg[s] != s)
            throw InvalidInput("terminal potential off its own leg");
    }

    int k = int(inst.terminals.size());
    DoubleCoverNetwork d;
    std::vector<int> plus_id(inst.n, -1), minus_id(inst.n, -1);
    std::vector<std::vector<int>> u0_plus(inst.n), u0_minus(inst.n);
    auto new_node = [&](int node, int sign, int leg) {
        d.labels.push_back({node, sign, leg});
        return d.node_count++;
    };
    // group of a node: terminal index of its U_s, or -1 for U_0
    std::vector<int> group(inst.n, -1);
    for (int i = 0; i < inst.n; ++i) {
        int ti = inst.terminal_index(i);
        if (ti >= 0) {
            group[i] = ti;
            plus_id[i] = new_node(i, +1, -1);
            minus_id[i] = new_node(i, -1, -1);
        } else if (p.h[i] > 0) {
            group[i] = inst.terminal_index(p.leg[i]);
            if (group[i] < 0) throw InvalidInput("potential leg is not a terminal");
            plus_id[i] = new_node(i, +1, -1);
            minus_id[i] = new_node(i, -1, -1);
        } else {
            for (int s = 0; s < k; ++s) {
                u0_plus[i].push_back(new_node(i, +1, inst.terminals[s]));
                u0_minus[i].push_back(new_node(i, -1, inst.terminals[s]));
            }
        }
    }

    auto add_arc = [&](int tail, int head, long long lo, long long hi,
                       DoubleCoverNetwork::ArcKind kind, int edge, int term) {
        d.arcs.push_back({tail, head, lo, hi, kind, edge, term});
        return int(d.arcs.size()) - 1;
    };

    d.edge_class.assign(inst.edges.size(), 0);
    d.edge_arcs.assign(inst.edges.size(), {-1, -1});
    for (int e = 0; e < int(inst.edges.size()); ++e) {
        const auto& ed = inst.edges[e];
        long long D = dist_halves(p, ed.u, ed.v);
        if (D < 2 * ed.cost) continue;
        d.edge_class[e] = D == 2 * ed.cost ? 1 : 2;
        long long lo = d.edge_class[e] == 2 ? ed.cap : 0;
        int i = ed.u, j = ed.v;
        int a_plus, a_minus;
        if (group[i] >= 0 && group[j] >= 0 && group[i] != group[j]) {
            // legs of distinct terminals: cross edges
            a_plus = add_arc(plus_id[i], minus_id[j], lo, ed.cap,
                             DoubleCoverNetwork::ArcKind::Pair, e, -1);
            a_minus = add_arc(plus_id[j], minus_id[i], lo, ed.cap,
                              DoubleCoverNetwork::ArcKind::Pair, e, -1);
        } else {
            // same leg (or one endpoint at the origin): orient from the
            // deeper node toward the shallower on the + side
            if (p.h[i] < p.h[j]) std::swap(i, j);
            assert(p.h[i] > p.h[j]);
            int s = group[i];
            assert(s >= 0);
            int jp = group[j] >= 0 ? plus_id[j] : u0_plus[j][s];
            int jm = group[j] >= 0 ? minus_id[j] : u0_minus[j][s];
            a_plus = add_arc(plus_id[i], jp, lo, ed.cap,
                             DoubleCoverNetwork::ArcKind::Pair, e, -1);
            a_minus = add_arc(jm, minus_id[i], lo, ed.cap,
                              DoubleCoverNetwork::ArcKind::Pair, e, -1);
        }
        d.edge_arcs[e] = {a_plus, a_minus};
    }
    for (int i = 0; i < inst.n; ++i) {
        if (u0_plus[i].empty()) continue;
        for (int s = 0; s < k; ++s)
            for (int t = 0; t < k; ++t)
                if (s != t)
                    add_arc(u0_plus[i][s], u0_minus[i][t], 0, DoubleCoverNetwork::kInf,
                            DoubleCoverNetwork::ArcKind::Internal, -1, -1);
    }
    d.terminal_arc.resize(k);
    for (int ti = 0; ti < k; ++ti) {
        int s = inst.terminals[ti];
        long long r = inst.demand(ti);
        long long hi = p.h[s] == 0 ? DoubleCoverNetwork::kInf : r;
        d.terminal_arc[ti] = add_arc(minus_id[s], plus_id[s], r, hi,
                                     DoubleCoverNetwork::ArcKind::Terminal, -1, ti);
    }
    return d;
}

// ------------------------------------------------- circulation machinery

namespace {

struct Tilde {
    DirectedNetwork net;
    int a_plus = 0, a_minus = 0;
    std::vector<int> residual_edge;  // per dcn arc, -1 when lower == upper
    long long trivial = 0;           // c(δ{a⁺}) = Σ lower bounds
};

Tilde build_tilde(const DoubleCoverNetwork& d) {
    Tilde t;
    t.net.node_count = d.node_count;
    t.a_plus = t.net.add_node();
    t.a_minus = t.net.add_node();
    t.residual_edge.assign(d.arcs.size(), -1);
    for (int a = 0; a < int(d.arcs.size()); ++a) {
        const auto& arc = d.arcs[a];
        if (arc.lower > 0) {
            t.net.add_edge(arc.tail, t.a_minus, 0, arc.lower);
            t.net.add_edge(t.a_plus, arc.head, 0, arc.lower);
            t.trivial += arc.lower;
        }
        if (arc.upper == DoubleCoverNetwork::kInf)
            t.residual_edge[a] =
                t.net.add_edge(arc.tail, arc.head, 0, DirectedNetwork::kInfCap);
        else if (arc.upper - arc.lower > 0)
            t.residual_edge[a] =
                t.net.add_edge(arc.tail, arc.head, 0, arc.upper - arc.lower);
    }
    return t;
}

std::vector<long long> phi_from_flow(const DoubleCoverNetwork& d, const Tilde& t,
                                     const std::vector<long long>& flow) {
    std::vector<long long> phi(d.arcs.size());
    for (int a = 0; a < int(d.arcs.size()); ++a)
        phi[a] = d.arcs[a].lower +
                 (t.residual_edge[a] >= 0 ? flow[t.residual_edge[a]] : 0);
    return phi;
}

// capacity of the cut whose source side is {a⁺} ∪ {dcn nodes in X}
long long cut_capacity(const Tilde& t, const std::vector<char>& X) {
    auto inside = [&](int v) {
        return v == t.a_plus || (v < int(X.size()) && X[v]);
    };
    long long cap = 0;
    for (const auto& e : t.net.edges)
        if (inside(e.tail) && !inside(e.head))
            cap += e.upper == DirectedNetwork::kInfCap ? t.net.inf_value() : e.upper;
    return cap;
}

void properize(const Instance& inst, Potential& p) {
    for (int ti = 0; ti < int(inst.terminals.size()); ++ti) {
        int s = inst.terminals[ti];
        for (int i = 0; i < inst.n; ++i) {
            if (i == s || p.h[i] == 0 || p.leg[i] != s) continue;
            if (p.h[i] > p.h[s]) {
                p.h[i] = p.h[s];
                if (p.h[i] == 0) p.leg[i] = -1;
            }
        }
    }
}

// p^X for a legal cut X (given as a dcn node set)
Potential apply_cut(const Instance& inst, const Potential& p,
                    const DoubleCoverNetwork& d, const std::vector<char>& X) {
    Potential q = p;
    for (int v = 0; v < d.node_count; ++v) {
        if (!X[v]) continue;
        const auto& lb = d.labels[v];
        if (lb.leg >= 0) {
            // copy i^{s±} of a U_0 node: only the s+ copy moves the node
            if (lb.sign > 0) {
                assert(q.h[lb.node] == 0);
                q.leg[lb.node] = lb.leg;
                q.h[lb.node] = 1;
            }
        } else if (lb.sign > 0) {
            if (q.h[lb.node] == 0) {
                // only terminals carry ± copies at the origin
                assert(inst.terminal_index(lb.node) >= 0);
                q.leg[lb.node] = lb.node;
            }
            q.h[lb.node] += 1;
        } else {
            q.h[lb.node] -= 1;
            assert(q.h[lb.node] >= 0);
            if (q.h[lb.node] == 0) q.leg[lb.node] = -1;
        }
    }
    return q;
}

int ceil_log2(long long x) {
    int l = 0;
    while ((1LL << l) < x) ++l;
    return l;
}

struct DualRun {
    Potential p;
    std::vector<int> phase_steps;
};

// proximity scaling applied to the dual only; valid for any
// nonnegative integer costs (cost positivity is needed only by D_p)
DualRun scaling_dual(const Instance& inst) {
    int n = inst.n, k = int(inst.terminals.size());
    long long aeff = std::max(inst.max_cost(), 1LL);
    int L = ceil_log2(1LL * n * aeff);
    std::vector<std::pair<int, long long>> cur(n, {-1, 0});  // (leg index, rung)
    DualRun out;
    for (int sigma = L - 1; sigma >= -1; --sigma) {
        long long H = 1LL << (L - sigma);
        StarTree st = star_tree(k, sigma, int(H));
        auto tp = std::make_shared<const Tree>(st.tree);
        TwoSeparable g;
        g.tree = tp;
        g.n = n;
        for (int ti = 0; ti < k; ++ti) {
            UnaryTreeTerm u;
            u.i = inst.terminals[ti];
            u.values.assign(tp->n, Rat::infinity());
            long long r = inst.demand(ti);
            for (long long j = 0; j <= H; ++j) {
                Rat val = sigma >= 0 ? Rat(-((r * j) << sigma)) : Rat(-r * j, 2);
                u.values[st.vertex(ti, int(j))] = val;
            }
            g.unary.push_back(std::move(u));
        }
        for (const auto& e : inst.edges) {
            PairTerm pt;
            pt.i = e.u;
            pt.j = e.v;
            std::vector<Rat> tab(2 * H + 3);
            for (long long z = 0; z <= 2 * H + 2; ++z)
                tab[z] = sigma >= 0
                             ? Rat(e.cap * std::max(0LL, (z << sigma) - e.cost))
                             : Rat(e.cap * std::max(0LL, z - 2 * e.cost), 2);
            pt.h = OneDimConvex(std::move(tab)).evenized();
            g.pairs.push_back(std::move(pt));
        }
        TreePoint x0(n);
        for (int i = 0; i < n; ++i)
            x0[i] = cur[i].second == 0 ? 0
                                       : st.vertex(cur[i].first, int(2 * cur[i].second));
        auto [xmin, trace] = steepest_descent(g, x0);
        assert(trace.steps() <= 6 * n + 6);
        out.phase_steps.push_back(trace.steps());
        for (int i = 0; i < n; ++i)
            cur[i] = {st.leg_of(xmin[i]), st.rung_of(xmin[i])};
    }
    Potential p = Potential::zero(n);
    for (int i = 0; i < n; ++i) {
        p.h[i] = cur[i].second;  // rungs at σ = -1 are half-units
        p.leg[i] = cur[i].second > 0 ? inst.terminals[cur[i].first] : -1;
    }
    properize(inst, p);
    out.p = p;
    return out;
}

Potential certificate_potential(const Instance& inst, long long scale,
                                const Potential& perturbed_p) {
    if (scale == 1) return perturbed_p;
    if (inst.max_cost() == 0) return Potential::zero(inst.n);
    return scaling_dual(inst).p;
}

std::vector<long long> support_from_phi(const Instance& inst,
                                        const DoubleCoverNetwork& d,
                                        const std::vector<long long>& phi) {
    std::vector<long long> x(inst.edges.size(), 0);
    for (int e = 0; e < int(inst.edges.size()); ++e)
        if (d.edge_arcs[e][0] >= 0)
            x[e] = phi[d.edge_arcs[e][0]] + phi[d.edge_arcs[e][1]];
    return x;
}

}  // namespace

Multiflow extract_multiflow(const Instance& inst, const Potential& p,
                            const DoubleCoverNetwork& d,
                            const std::vector<long long>& phi) {
    (void)p;
    DirectedNetwork mirror;
    mirror.node_count = d.node_count;
    for (const auto& arc : d.arcs)
        mirror.add_edge(arc.tail, arc.head, 0, DirectedNetwork::kInfCap);
    auto cycles = decompose_circulation(mirror, phi);

    std::map<std::pair<std::vector<int>, std::vector<int>>, long long> agg;
    for (const auto& cyc : cycles) {
        std::vector<int> term_pos;
        for (int idx = 0; idx < int(cyc.edge_ids.size()); ++idx)
            if (d.arcs[cyc.edge_ids[idx]].kind ==
                DoubleCoverNetwork::ArcKind::Terminal)
                term_pos.push_back(idx);
        if (term_pos.size() < 2)
            throw NotCirculation("cycle does not link two terminals");
        int parts = int(term_pos.size());
        for (int r = 0; r < parts; ++r) {
            int from = term_pos[r];
            int to = term_pos[(r + 1) % parts];
            int s = inst.terminals[d.arcs[cyc.edge_ids[from]].terminal];
            int t = inst.terminals[d.arcs[cyc.edge_ids[to]].terminal];
            if (s == t) throw NotCirculation("path returns to the same terminal");
            std::vector<int> nodes{s};
            std::vector<int> eids;
            int len = int(cyc.edge_ids.size());
            for (int idx = (from + 1) % len; idx != to; idx = (idx + 1) % len) {
                const auto& arc = d.arcs[cyc.edge_ids[idx]];
                int node = d.labels[arc.head].node;
                if (node != nodes.back()) {
                    nodes.push_back(node);
                    if (arc.edge < 0)
                        throw NotCirculation("node change without an edge");
                    eids.push_back(arc.edge);
                }
            }
            if (nodes.back() != t || nodes.size() < 2)
                throw NotCirculation("broken terminal-to-terminal path");
            if (nodes.back() < nodes.front()) {
                std::reverse(nodes.begin(), nodes.end());
                std::reverse(eids.begin(), eids.end());
            }
            agg[{std::move(nodes), std::move(eids)}] += cyc.coeff;
        }
    }
    Multiflow f;
    for (auto& [key, lam] : agg) {
        MultiflowPath P;
        P.nodes = key.first;
        P.edge_ids = key.second;
        P.lambda_halves = lam;
        f.paths.push_back(std::move(P));
    }
    return f;
}

VerifyReport verify_optimality(const Instance& inst, const Multiflow& f,
                               const Potential& p) {
    VerifyReport rep;
    auto fail = [&](std::string msg) {
        rep.ok = false;
        if (rep.violation.empty()) rep.violation = std::move(msg);
    };
    std::vector<long long> x;
    try {
        x = flow_support(inst, f);
    } catch (const Error& e) {
        fail(std::string("support: ") + e.what());
        return rep;
    }
    for (int e = 0; e < int(inst.edges.size()); ++e) {
        long long D = dist_halves(p, inst.edges[e].u, inst.edges[e].v);
        long long a2 = 2 * inst.edges[e].cost;
        if (D > a2 && x[e] != 2 * inst.edges[e].cap)
            fail("condition (1): unsaturated edge with D > a, edge " + std::to_string(e));
        if (D < a2 && x[e] != 0)
            fail("condition (2): flow on edge with D < a, edge " + std::to_string(e));
    }
    for (const auto& P : f.paths) {
        if (P.lambda_halves <= 0) {
            fail("nonpositive path weight");
            continue;
        }
        int s = P.nodes.front(), t = P.nodes.back();
        if (inst.terminal_index(s) < 0 || inst.terminal_index(t) < 0 || s == t) {
            fail("path endpoints are not distinct terminals");
            continue;
        }
        long long along = 0;
        for (int k = 0; k + 1 < int(P.nodes.size()); ++k)
            along += dist_halves(p, P.nodes[k], P.nodes[k + 1]);
        if (along != dist_halves(p, s, t)) fail("condition (3): non-geodesic path");
    }
    auto fs = f.terminal_flow_halves(inst);
    for (int ti = 0; ti < int(inst.terminals.size()); ++ti) {
        if (fs[ti] < 2 * inst.demand(ti)) fail("demand not met");
        if (p.h[inst.terminals[ti]] > 0 && fs[ti] != 2 * inst.demand(ti))
            fail("condition (4): excess flow at a raised terminal");
    }
    long long cost = 0;
    for (int e = 0; e < int(inst.edges.size()); ++e) cost += inst.edges[e].cost * x[e];
    if (cost != dual_halves(inst, p)) fail("primal != dual");
    return rep;
}

namespace {

Solution finish_solution(const Instance& inst, const Instance& pert, long long scale,
                         const Potential& pert_p, Solution sol) {
    DoubleCoverNetwork d = build_double_cover(pert, pert_p);
    Tilde t = build_tilde(d);
    FlowResult res = max_flow(t.net, t.a_plus, t.a_minus);
    if (res.value != t.trivial)
        throw Error("internal: computed potential is not dual optimal");
    auto phi = phi_from_flow(d, t, res.flow);
    sol.flow = extract_multiflow(pert, pert_p, d, phi);
    sol.support_halves = support_from_phi(inst, d, phi);
    assert(flow_support(inst, sol.flow) == sol.support_halves);
    sol.perturb_scale = scale;
    sol.potential = certificate_potential(inst, scale, pert_p);
    sol.value_halves = primal_cost_halves(inst, sol.flow);
    sol.certified = verify_optimality(inst, sol.flow, sol.potential).ok;
    return sol;
}

}  // namespace

Solution solve_scaling(const Instance& inst) {
    inst.validate();
    if (inst.tag == ProblemTag::MCMF) return solve_mcmf(inst, true);
    FeasibilityReport rep = check_feasibility(inst);
    if (!rep.feasible) throw Infeasible("demand exceeds a terminal cut");
    auto [pert, scale] = perturb_costs(inst);
    DualRun run = scaling_dual(pert);
    Solution sol;
    sol.phase_steps = run.phase_steps;
    return finish_solution(inst, pert, scale, run.p, std::move(sol));
}

Solution solve_descent(const Instance& inst) {
    inst.validate();
    if (inst.tag == ProblemTag::MCMF) return solve_mcmf(inst, false);
    FeasibilityReport rep = check_feasibility(inst);
    if (!rep.feasible) throw Infeasible("demand exceeds a terminal cut");
    auto [pert, scale] = perturb_costs(inst);

    long long sum_c = 0, sum_r = 0;
    for (const auto& e : pert.edges) sum_c += e.cap;
    for (int ti = 0; ti < int(pert.terminals.size()); ++ti) sum_r += pert.demand(ti);
    long long guard = 200 + 8LL * pert.n * std::max(pert.max_cost(), 1LL) *
                                (sum_c + sum_r + 1);

    Solution sol;
    Potential p = Potential::zero(inst.n);
    int iter = 0;
    while (true) {
        if (iter > guard) throw Error("internal: descent did not terminate");
        DoubleCoverNetwork d = build_double_cover(pert, p);
        Tilde t = build_tilde(d);
        FlowResult res = max_flow(t.net, t.a_plus, t.a_minus);
        if (res.value == t.trivial) break;  // minimal min cut is {a⁺}

        std::vector<char> X(res.cut_side.begin(),
                            res.cut_side.begin() + d.node_count);
        std::vector<char> X1 = X, X2 = X;  // integral / non-integral halves
        for (int v = 0; v < d.node_count; ++v) {
            if (!X[v]) continue;
            if (p.h[d.labels[v].node] % 2 != 0) X1[v] = 0;
            else X2[v] = 0;
        }
        long long c1 = cut_capacity(t, X1), c2 = cut_capacity(t, X2);
        // lowering (Ideal) side first on even iterations
        std::vector<std::pair<long long, const std::vector<char>*>> order;
        if (iter % 2 == 0) order = {{c1, &X1}, {c2, &X2}};
        else order = {{c2, &X2}, {c1, &X1}};
        const std::vector<char>* chosen = nullptr;
        long long ccap = 0;
        for (auto& [cc, Xp] : order)
            if (cc < t.trivial) {
                chosen = Xp;
                ccap = cc;
                break;
            }
        if (!chosen) throw Error("internal: no improving legal cut");
        Potential q = apply_cut(pert, p, d, *chosen);
        DescentStep step{omega_halves(pert, p), omega_halves(pert, q), ccap,
                         t.trivial};
        assert(step.omega_after - step.omega_before ==
               step.cut_capacity - step.trivial_cut_capacity);
        sol.descent_steps.push_back(step);
        properize(pert, q);
        p = std::move(q);
        ++iter;
    }
    return finish_solution(inst, pert, scale, p, std::move(sol));
}

McmfReduction reduce_mcmf(const Instance& inst) {
    inst.validate();
    auto cuts = terminal_min_cuts(inst);
    McmfReduction R;
    int k = int(inst.terminals.size());
    R.reduced.n = inst.n + k;
    R.reduced.terminals = inst.terminals;
    R.reduced.tag = ProblemTag::N;
    std::vector<int> bar(inst.n, -1);
    for (int ti = 0; ti < k; ++ti) {
        R.kappa.push_back(cuts[ti].first);
        bar[inst.terminals[ti]] = inst.n + ti;
        R.bar_node.push_back(inst.n + ti);
    }
    for (const auto& e : inst.edges) {
        int u = bar[e.u] >= 0 ? bar[e.u] : e.u;
        int v = bar[e.v] >= 0 ? bar[e.v] : e.v;
        R.reduced.edges.push_back({u, v, e.cap, e.cost});
    }
    for (int ti = 0; ti < k; ++ti)
        R.reduced.edges.push_back(
            {inst.terminals[ti], R.bar_node[ti], R.kappa[ti], 0});
    R.reduced.demands = R.kappa;
    return R;
}

Solution solve_mcmf(const Instance& inst, bool use_scaling) {
    McmfReduction R = reduce_mcmf(inst);
    Solution rsol = use_scaling ? solve_scaling(R.reduced) : solve_descent(R.reduced);

    std::vector<int> bar_owner(R.reduced.n, -1);
    for (int ti = 0; ti < int(inst.terminals.size()); ++ti)
        bar_owner[R.bar_node[ti]] = inst.terminals[ti];

    Solution sol;
    sol.perturb_scale = rsol.perturb_scale;
    sol.phase_steps = rsol.phase_steps;
    sol.descent_steps = rsol.descent_steps;
    int m = int(inst.edges.size());
    for (const auto& P : rsol.flow.paths) {
        MultiflowPath Q;
        Q.lambda_halves = P.lambda_halves;
        for (int idx = 0; idx < int(P.nodes.size()); ++idx) {
            int node = P.nodes[idx];
            if (bar_owner[node] >= 0) node = bar_owner[node];
            if (Q.nodes.empty() || Q.nodes.back() != node) {
                Q.nodes.push_back(node);
                if (Q.nodes.size() >= 2) {
                    // the reduced edge for this step: skip the ti-s̄ bridges
                    int eid = P.edge_ids[idx - 1];
                    assert(eid < m);
                    Q.edge_ids.push_back(eid);
                }
            }
        }
        if (Q.nodes.size() >= 2) sol.flow.paths.push_back(std::move(Q));
    }
    sol.support_halves = flow_support(inst, sol.flow);
    sol.value_halves = primal_cost_halves(inst, sol.flow);
    sol.potential.leg.assign(rsol.potential.leg.begin(),
                             rsol.potential.leg.begin() + inst.n);
    sol.potential.h.assign(rsol.potential.h.begin(),
                           rsol.potential.h.begin() + inst.n);
    long long kappa_sum = std::accumulate(R.kappa.begin(), R.kappa.end(), 0LL);
    sol.certified = rsol.certified && sol.flow.value_halves() == kappa_sum;
    return sol;
}

Rat lovasz_cherkassky_value(const Instance& inst) {
    auto cuts = terminal_min_cuts(inst);
    long long total = 0;
    for (auto& [kappa, cut] : cuts) total += kappa;
    return Rat(total, 2);
}

MultiwayResult multiway_cut(const Instance& inst) {
    inst.validate();
    int k = int(inst.terminals.size());
    auto cuts = terminal_min_cuts(inst);
    std::vector<std::vector<char>> X;
    long long kappa_sum = 0;
    for (auto& [kappa, cut] : cuts) {
        X.push_back(cut);
        kappa_sum += kappa;
    }
    // disjointize pairwise (simultaneous difference keeps both minimal)
    for (int s = 0; s < k; ++s)
        for (int t = s + 1; t < k; ++t) {
            for (int i = 0; i < inst.n; ++i) {
                if (X[s][i] && X[t][i]) {
                    X[s][i] = 0;
                    X[t][i] = 0;
                }
            }
        }

    MultiwayResult out;
    out.assignment.assign(inst.n, -1);
    for (int s = 0; s < k; ++s)
        for (int i = 0; i < inst.n; ++i)
            if (X[s][i]) out.assignment[i] = inst.terminals[s];

    // star hosting the relaxation: vertices 0..k-1 = terminals (Black
    // leaves), k = center (White); rooted at a leaf
    std::vector<std::pair<int, int>> tre;
    for (int s = 0; s < k; ++s) tre.push_back({s, k});
    auto tp = std::make_shared<const Tree>(
        k >= 2 ? Tree(k + 1, tre, 0) : Tree(2, {{0, 1}}, 0));

    std::vector<int> coord(inst.n, -1);
    std::vector<int> coord_node;
    for (int i = 0; i < inst.n; ++i)
        if (inst.terminal_index(i) < 0) {
            coord[i] = int(coord_node.size());
            coord_node.push_back(i);
        }

    TwoSeparable omega;
    omega.tree = tp;
    omega.n = int(coord_node.size());
    for (const auto& e : inst.edges) {
        int tu = inst.terminal_index(e.u), tv = inst.terminal_index(e.v);
        if (tu >= 0 && tv >= 0) {
            omega.offset += Rat(e.cap);  // distinct terminals: always cut
        } else if (tu >= 0 || tv >= 0) {
            int ti = tu >= 0 ? tu : tv;
            int i = tu >= 0 ? e.v : e.u;
            omega.unary.push_back(make_distance_unary(
                *tp, coord[i], ti,
                OneDimConvex({Rat(0), Rat(e.cap, 2), Rat(e.cap)})));
        } else {
            PairTerm pt;
            pt.i = coord[e.u];
            pt.j = coord[e.v];
            pt.h = OneDimConvex({Rat(0), Rat(e.cap, 2), Rat(e.cap),
                                 Rat(3 * e.cap, 2), Rat(2 * e.cap)});
            omega.pairs.push_back(pt);
        }
    }

    TreePoint xstar(omega.n);
    for (int c = 0; c < omega.n; ++c) {
        int a = out.assignment[coord_node[c]];
        xstar[c] = a < 0 ? k : inst.terminal_index(a);
    }
    if (k < 2)
        for (auto& v : xstar) v = 0;  // single terminal: everything with it
    out.relaxation = eval(omega, xstar);
    assert(out.relaxation == Rat(kappa_sum, 2));

    Rat best = Rat::infinity();
    TreePoint best_round;
    for (int ti = 0; ti < k; ++ti) {
        TreePoint r = two_approx_round(omega, xstar, ti);
        Rat v = eval(omega, r);
        if (v < best) {
            best = v;
            best_round = r;
        }
    }
    out.partition.assign(inst.n, -1);
    for (int ti = 0; ti < k; ++ti) out.partition[inst.terminals[ti]] = inst.terminals[ti];
    for (int c = 0; c < omega.n; ++c)
        out.partition[coord_node[c]] = inst.terminals[k < 2 ? 0 : best_round[c]];
    long long cut = 0;
    for (const auto& e : inst.edges)
        if (out.partition[e.u] != out.partition[e.v]) cut += e.cap;
    out.cut_value = cut;
    assert(Rat(cut) == best);
    return out;
}

std::vector<long long> fix_half_integral(const Instance& inst,
                                         const std::vector<long long>& x,
                                         const Potential& p) {
    for (const auto& e : inst.edges)
        if (e.cost <= 0) throw CostNotPositive();
    if (x.size() != inst.edges.size()) throw InvalidInput("support size mismatch");
    DoubleCoverNetwork d = build_double_cover(inst, p);

    int m = int(inst.edges.size());
    for (int e = 0; e < m; ++e) {
        if (x[e] < 0 || x[e] > 2 * inst.edges[e].cap) throw NotOptimalPair();
        if (d.edge_class[e] == 0 && x[e] != 0) throw NotOptimalPair();
        if (d.edge_class[e] == 2 && x[e] != 2 * inst.edges[e].cap)
            throw NotOptimalPair();
    }

    // circulation test in half-units: every dcn capacity doubled, the two
    // arcs of edge e pinned to the interval bounds[e]
    std::vector<std::array<long long, 2>> bounds(m);
    for (int e = 0; e < m; ++e) bounds[e] = {x[e], x[e]};
    auto feasible = [&]() {
        DirectedNetwork net;
        net.node_count = d.node_count;
        for (const auto& arc : d.arcs) {
            long long lo, hi;
            switch (arc.kind) {
                case DoubleCoverNetwork::ArcKind::Pair:
                    lo = bounds[arc.edge][0];
                    hi = bounds[arc.edge][1];
                    break;
                case DoubleCoverNetwork::ArcKind::Internal:
                    lo = 0;
                    hi = DirectedNetwork::kInfCap;
                    break;
                default:
                    lo = 2 * arc.lower;
                    hi = arc.upper == DoubleCoverNetwork::kInf
                             ? DirectedNetwork::kInfCap
                             : 2 * arc.upper;
            }
            net.add_edge(arc.tail, arc.head, lo,
                         hi == DirectedNetwork::kInfCap ? hi : std::max(lo, hi));
        }
        return feasible_circulation(net).has_value();
    };
    if (!feasible()) throw NotOptimalPair();

    std::vector<long long> xt = x;
    // release the not-yet-processed non-integral edges to their unit box
    for (int e = 0; e < m; ++e)
        if (x[e] % 2 != 0) bounds[e] = {x[e] - 1, x[e] + 1};
    for (int e = 0; e < m; ++e) {
        if (x[e] % 2 == 0) continue;
        bool done = false;
        for (long long v : {x[e] - 1, x[e] + 1}) {
            if (v < 0 || v > 2 * inst.edges[e].cap) continue;
            bounds[e] = {v, v};
            if (feasible()) {
                xt[e] = v;
                done = true;
                break;
            }
        }
        if (!done) {
            bounds[e] = {x[e], x[e]};
            if (!feasible()) throw NotOptimalPair();
        }
    }
    return xt;
}

}  // namespace treeflow
