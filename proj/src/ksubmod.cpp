#include "treeflow/ksubmod.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace treeflow {

SkPoint meet(const SkPoint& x, const SkPoint& y) {
    SkPoint r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] == y[i] ? x[i] : 0;
    return r;
}

SkPoint square_join(const SkPoint& x, const SkPoint& y) {
    SkPoint r(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) r[i] = y[i];
        else if (y[i] == 0 || y[i] == x[i]) r[i] = x[i];
        else r[i] = 0;  // incomparable nonzero pair collapses
    }
    return r;
}

BasicTerm BasicTerm::epsilon(int i, int a, Rat w) {
    BasicTerm t;
    t.kind = Kind::Epsilon;
    t.i = i;
    t.a = a;
    t.weight = w;
    return t;
}
BasicTerm BasicTerm::theta(int i, int a, Rat w) {
    BasicTerm t;
    t.kind = Kind::Theta;
    t.i = i;
    t.a = a;
    t.weight = w;
    return t;
}
BasicTerm BasicTerm::mu(int i, int j, int a, int a2, Rat w) {
    BasicTerm t;
    t.kind = Kind::Mu;
    t.i = i;
    t.j = j;
    t.a = a;
    t.a2 = a2;
    t.weight = w;
    return t;
}
BasicTerm BasicTerm::delta(int i, int j, std::vector<int> sigma, Rat w) {
    BasicTerm t;
    t.kind = Kind::DeltaSigma;
    t.i = i;
    t.j = j;
    t.sigma = std::move(sigma);
    t.weight = w;
    return t;
}
BasicTerm BasicTerm::unary(int i, std::vector<Rat> table, Rat w) {
    BasicTerm t;
    t.kind = Kind::UnaryTable;
    t.i = i;
    t.table = std::move(table);
    t.weight = w;
    return t;
}

Rat BasicTerm::raw(int u, int v) const {
    switch (kind) {
        case Kind::UnaryTable:
            return table[u];
        case Kind::Epsilon:
            return Rat(u == a && a != 0 ? 1 : 0);
        case Kind::Theta:
            if (u == a && a != 0) return Rat(-1);
            if (u == 0) return Rat(0);
            return Rat(1);
        case Kind::DeltaSigma:
            if (v == sigma[u]) return Rat(0);
            if ((u == 0) != (v == 0)) return Rat(1);
            return Rat(2);
        case Kind::Mu:
            if ((u == a && a != 0) || (v == a2 && a2 != 0) || (u == 0 && v == 0))
                return Rat(0);
            if ((v == 0 && u != a) || (u == 0 && v != a2)) return Rat(1);
            return Rat(2);
    }
    return Rat(0);
}

void TermSum::validate() const {
    int n = domain.size();
    for (const auto& t : terms) {
        if (t.weight < Rat(0) || t.weight.inf) throw InvalidInput("negative or infinite weight");
        auto chk = [&](int c) {
            if (c < 0 || c >= n) throw InvalidInput("term coordinate out of range");
        };
        switch (t.kind) {
            case BasicTerm::Kind::UnaryTable:
                chk(t.i);
                if (int(t.table.size()) != domain.arities[t.i] + 1)
                    throw InvalidInput("unary table size mismatch");
                break;
            case BasicTerm::Kind::Epsilon:
                chk(t.i);
                if (t.a <= 0 || t.a > domain.arities[t.i])
                    throw InvalidInput("epsilon needs a in 1..k");
                break;
            case BasicTerm::Kind::Theta:
                chk(t.i);
                if (t.a < 0 || t.a > domain.arities[t.i])
                    throw InvalidInput("theta label out of range");
                break;
            case BasicTerm::Kind::DeltaSigma: {
                chk(t.i);
                chk(t.j);
                if (t.i == t.j) throw InvalidInput("delta needs distinct coordinates");
                int k = domain.arities[t.i];
                if (domain.arities[t.j] != k || int(t.sigma.size()) != k + 1 ||
                    t.sigma[0] != 0)
                    throw InvalidInput("delta permutation invalid");
                std::vector<char> hit(k + 1, 0);
                for (int u = 0; u <= k; ++u) {
                    if (t.sigma[u] < 0 || t.sigma[u] > k || hit[t.sigma[u]])
                        throw InvalidInput("delta permutation invalid");
                    hit[t.sigma[u]] = 1;
                }
                break;
            }
            case BasicTerm::Kind::Mu:
                chk(t.i);
                chk(t.j);
                if (t.i == t.j) throw InvalidInput("mu needs distinct coordinates");
                if (t.a < 0 || t.a > domain.arities[t.i] || t.a2 < 0 ||
                    t.a2 > domain.arities[t.j])
                    throw InvalidInput("mu labels out of range");
                break;
        }
    }
}

Rat eval(const TermSum& f, const SkPoint& x) {
    Rat total = f.offset;
    for (const auto& t : f.terms) {
        if (t.weight == Rat(0)) continue;
        Rat v = (t.kind == BasicTerm::Kind::DeltaSigma || t.kind == BasicTerm::Kind::Mu)
                    ? t.raw(x[t.i], x[t.j])
                    : t.raw(x[t.i]);
        if (v.inf) return Rat::infinity();
        total += t.weight * v;
    }
    return total;
}

UnaryDecomp normalize_unary(const std::vector<Rat>& table) {
    UnaryDecomp d;
    int k = int(table.size()) - 1;
    int finite_count = 0, finite_at = -1;
    for (int u = 0; u <= k; ++u)
        if (!table[u].inf) {
            ++finite_count;
            finite_at = u;
        }
    if (finite_count == 0) throw AllInfinite();

    if (table[0].inf) {
        // one-variable k-submodularity forces a single finite entry
        if (finite_count > 1)
            throw InvalidInput("table with f(0)=inf and two finite entries is not k-submodular");
        d.forced = finite_at;
        d.offset = table[finite_at];
        return d;
    }

    // minimizer among finite entries
    int a = 0;
    for (int u = 0; u <= k; ++u)
        if (!table[u].inf && table[u] < table[a]) a = u;

    d.offset = table[0];
    if (a != 0) {
        d.theta_a = a;
        d.theta_w = table[0] - table[a];
    }
    for (int b = 1; b <= k; ++b) {
        if (b == a) continue;
        if (table[b].inf) {
            d.forbidden.push_back(b);
            continue;
        }
        Rat w = table[b] - table[0] - (table[0] - table[a]);
        if (w < Rat(0))
            throw InvalidInput("unary table is not k-submodular: f(b)+f(a) < 2f(0)");
        if (w != Rat(0)) d.eps.push_back({b, w});
    }
    return d;
}

namespace {

// flat list of gadget atoms produced while rewriting a TermSum
struct Atoms {
    const SkDomain* dom;
    Rat K = Rat(0);
    struct Eps { int i, a; Rat w; };
    struct Th { int i, a; Rat w; };  // a != 0
    struct I0 { int i, u; };
    struct De { int i, j; const std::vector<int>* sigma; Rat w; };
    struct MuG { int i, j, a, a2; Rat w; };  // a != 0
    std::vector<Eps> eps;
    std::vector<Th> th;
    std::vector<I0> i0;
    std::vector<De> de;
    std::vector<MuG> mu;

    void add_eps(int i, int a, Rat w) {
        if (w != Rat(0)) eps.push_back({i, a, w});
    }
    void add_theta(int i, int a, Rat w) {
        if (w == Rat(0)) return;
        if (a == 0) {  // theta_0 = sum of eps_b
            for (int b = 1; b <= dom->arities[i]; ++b) add_eps(i, b, w);
        } else {
            th.push_back({i, a, w});
            K -= w;  // gadget cost = w*theta + w
        }
    }
    void add_unary_table(int i, const std::vector<Rat>& table, Rat w);
    void add_mu(int i, int j, int a, int a2, Rat w) {
        if (w == Rat(0)) return;
        if (a == 0 && a2 == 0) {
            // mu_{0,0}(u,v) = [u!=0] + [v!=0]
            for (int b = 1; b <= dom->arities[i]; ++b) add_eps(i, b, w);
            for (int b = 1; b <= dom->arities[j]; ++b) add_eps(j, b, w);
            return;
        }
        if (a == 0) {  // mu is symmetric under swapping the two sides
            std::swap(i, j);
            std::swap(a, a2);
        }
        mu.push_back({i, j, a, a2, w});
        if (a2 == 0) {
            // the two-edge-family gadget covers mu_{a,0} only up to the
            // unary gap [u not in {0,a}]; add it as eps edges
            for (int b = 1; b <= dom->arities[i]; ++b)
                if (b != a) add_eps(i, b, w);
        }
    }
};

void Atoms::add_unary_table(int i, const std::vector<Rat>& table, Rat w) {
    if (w == Rat(0)) return;
    UnaryDecomp d = normalize_unary(table);
    assert(d.forced < 0 && "forced coordinates handled before atom emission");
    K += w * d.offset;
    if (d.theta_a != 0) add_theta(i, d.theta_a, w * d.theta_w);
    for (auto& [b, bw] : d.eps) add_eps(i, b, w * bw);
    for (int u : d.forbidden) i0.push_back({i, u});
}

long long lcm_den(const Atoms& at) {
    long long l = 1;
    auto acc = [&](const Rat& w) { l = std::lcm(l, w.den); };
    for (auto& e : at.eps) acc(e.w);
    for (auto& e : at.th) acc(e.w);
    for (auto& e : at.de) acc(e.w);
    for (auto& e : at.mu) acc(e.w);
    return l;
}

}  // namespace

RepNetwork build_network(const TermSum& f) {
    f.validate();
    int n = f.domain.size();

    // Pass 1: discover hard-fixed coordinates (unary tables with f(0)=inf).
    std::vector<int> fixed(n, -1);
    Rat fixed_offset(0);
    for (const auto& t : f.terms) {
        if (t.kind != BasicTerm::Kind::UnaryTable || t.weight == Rat(0)) continue;
        UnaryDecomp d = normalize_unary(t.table);
        if (d.forced >= 0) {
            if (fixed[t.i] >= 0 && fixed[t.i] != d.forced) throw AllInfinite();
            fixed[t.i] = d.forced;
            fixed_offset += t.weight * d.offset;
        }
    }

    // Pass 2: substitute fixes and emit gadget atoms.
    Atoms at;
    at.dom = &f.domain;
    at.K = f.offset + fixed_offset;
    auto plug_binary = [&](const BasicTerm& t) {
        bool fi = fixed[t.i] >= 0, fj = fixed[t.j] >= 0;
        if (fi && fj) {
            at.K += t.weight * t.raw(fixed[t.i], fixed[t.j]);
            return;
        }
        if (fi || fj) {
            int free_coord = fi ? t.j : t.i;
            int k = f.domain.arities[free_coord];
            std::vector<Rat> table(k + 1);
            for (int w = 0; w <= k; ++w)
                table[w] = fi ? t.raw(fixed[t.i], w) : t.raw(w, fixed[t.j]);
            at.add_unary_table(free_coord, table, t.weight);
            return;
        }
        if (t.kind == BasicTerm::Kind::DeltaSigma) {
            if (t.weight != Rat(0)) at.de.push_back({t.i, t.j, &t.sigma, t.weight});
        } else {
            at.add_mu(t.i, t.j, t.a, t.a2, t.weight);
        }
    };
    for (const auto& t : f.terms) {
        switch (t.kind) {
            case BasicTerm::Kind::UnaryTable:
                if (fixed[t.i] >= 0) {
                    if (t.table[0].inf) break;  // forcing table, counted in pass 1
                    if (t.table[fixed[t.i]].inf) throw AllInfinite();
                    at.K += t.weight * t.table[fixed[t.i]];
                } else {
                    at.add_unary_table(t.i, t.table, t.weight);
                }
                break;
            case BasicTerm::Kind::Epsilon:
                if (fixed[t.i] >= 0) at.K += t.weight * t.raw(fixed[t.i]);
                else at.add_eps(t.i, t.a, t.weight);
                break;
            case BasicTerm::Kind::Theta:
                if (fixed[t.i] >= 0) at.K += t.weight * t.raw(fixed[t.i]);
                else at.add_theta(t.i, t.a, t.weight);
                break;
            case BasicTerm::Kind::DeltaSigma:
            case BasicTerm::Kind::Mu:
                plug_binary(t);
                break;
        }
    }

    // Assemble the network.
    RepNetwork rep;
    rep.domain = f.domain;
    rep.fixed = fixed;
    rep.K = at.K;
    rep.scale = lcm_den(at);
    DirectedNetwork& net = rep.net;
    rep.s = net.add_node();
    rep.t = net.add_node();
    rep.vnode.assign(n, {});
    for (int i = 0; i < n; ++i) {
        rep.vnode[i].assign(f.domain.arities[i], -1);
        if (fixed[i] >= 0) continue;
        for (int u = 1; u <= f.domain.arities[i]; ++u)
            rep.vnode[i][u - 1] = net.add_node();
    }
    auto V = [&](int i, int u) { return rep.vnode[i][u - 1]; };
    auto cap = [&](const Rat& w) { return w.scaled(rep.scale); };

    for (auto& e : at.i0)
        net.add_edge(V(e.i, e.u), rep.t, 0, DirectedNetwork::kInfCap);
    for (auto& e : at.eps) net.add_edge(V(e.i, e.a), rep.t, 0, cap(e.w));
    for (auto& e : at.th) {
        net.add_edge(rep.s, V(e.i, e.a), 0, cap(e.w));
        for (int u = 1; u <= f.domain.arities[e.i]; ++u)
            if (u != e.a) net.add_edge(V(e.i, u), rep.t, 0, cap(e.w));
    }
    for (auto& e : at.de) {
        for (int u = 1; u <= f.domain.arities[e.i]; ++u) {
            int su = (*e.sigma)[u];
            net.add_edge(V(e.i, u), V(e.j, su), 0, cap(e.w));
            net.add_edge(V(e.j, su), V(e.i, u), 0, cap(e.w));
        }
    }
    for (auto& e : at.mu) {
        // a != 0 here; edges v_j^u -> v_i^a for u != a2, and (if a2 != 0)
        // v_i^u -> v_j^{a2} for u != a
        for (int u = 1; u <= f.domain.arities[e.j]; ++u)
            if (u != e.a2) net.add_edge(V(e.j, u), V(e.i, e.a), 0, cap(e.w));
        if (e.a2 != 0)
            for (int u = 1; u <= f.domain.arities[e.i]; ++u)
                if (u != e.a) net.add_edge(V(e.i, u), V(e.j, e.a2), 0, cap(e.w));
    }
    return rep;
}

long long RepNetwork::cut_of_point(const SkPoint& x) const {
    std::vector<char> side(net.node_count, 0);
    side[s] = 1;
    for (int i = 0; i < domain.size(); ++i)
        if (x[i] != 0 && vnode[i][x[i] - 1] >= 0) side[vnode[i][x[i] - 1]] = 1;
    long long total = 0;
    for (size_t e = 0; e < net.edges.size(); ++e)
        if (side[net.edges[e].tail] && !side[net.edges[e].head])
            total += net.effective_upper(int(e));
    return total;
}

SkPoint RepNetwork::point_of_cut(const std::vector<char>& side) const {
    SkPoint x(domain.size(), 0);
    for (int i = 0; i < domain.size(); ++i) {
        if (fixed[i] >= 0) {
            x[i] = fixed[i];
            continue;
        }
        for (int u = 1; u <= domain.arities[i]; ++u)
            if (side[vnode[i][u - 1]]) {
                if (x[i] != 0) throw NotRepresentable("illegal minimal cut");
                x[i] = u;
            }
    }
    return x;
}

MinResult minimize(const TermSum& f) {
    RepNetwork rep = build_network(f);
    if (rep.net.edges.empty()) {
        SkPoint x(f.domain.size(), 0);
        for (int i = 0; i < f.domain.size(); ++i)
            if (rep.fixed[i] >= 0) x[i] = rep.fixed[i];
        return {x, eval(f, x)};
    }
    FlowResult fr = max_flow(rep.net, rep.s, rep.t);
    SkPoint x = rep.point_of_cut(fr.cut_side);
    Rat value = Rat(fr.value, rep.scale) + rep.K;
    assert(value == eval(f, x));
    return {x, value};
}

void for_each_point(const SkDomain& dom, const std::function<void(const SkPoint&)>& fn) {
    SkPoint x(dom.size(), 0);
    while (true) {
        fn(x);
        int i = 0;
        while (i < dom.size() && x[i] == dom.arities[i]) x[i++] = 0;
        if (i == dom.size()) return;
        ++x[i];
    }
}

MinResult brute_force_min(const TermSum& f, long long budget) {
    long long count = 1;
    for (int k : f.domain.arities) {
        count *= k + 1;
        if (count > budget) throw TooLarge();
    }
    MinResult best;
    best.value = Rat::infinity();
    for_each_point(f.domain, [&](const SkPoint& x) {
        Rat v = eval(f, x);
        if (v < best.value) {
            best.value = v;
            best.point = x;
        }
    });
    if (best.value.inf) throw AllInfinite();
    return best;
}

bool check_ksubmodular(const std::function<Rat(const SkPoint&)>& f,
                       const SkDomain& dom, long long budget) {
    long long count = 1;
    for (int k : dom.arities) {
        count *= k + 1;
        if (count * count > budget) throw TooLarge();
    }
    std::vector<SkPoint> pts;
    for_each_point(dom, [&](const SkPoint& x) { pts.push_back(x); });
    for (const auto& x : pts)
        for (const auto& y : pts) {
            Rat lhs = f(x) + f(y);
            if (lhs.inf) continue;
            Rat rhs = f(meet(x, y)) + f(square_join(x, y));
            if (lhs < rhs) return false;
        }
    return true;
}

}  // namespace treeflow
