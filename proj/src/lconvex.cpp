#include "treeflow/lconvex.hpp"

#include <algorithm>
#include <cassert>

namespace treeflow {

bool OneDimConvex::is_convex() const {
    for (int t = 1; t + 1 < int(values.size()); ++t)
        if (delta2(t) < Rat(0)) return false;
    return true;
}

bool OneDimConvex::is_nondecreasing() const {
    for (int t = 1; t < int(values.size()); ++t)
        if (delta(t) < Rat(0)) return false;
    return true;
}

bool OneDimConvex::is_even() const {
    for (int t = 1; t + 1 < int(values.size()); t += 2)
        if (values[t] * Rat(2) != values[t - 1] + values[t + 1]) return false;
    return true;
}

OneDimConvex OneDimConvex::evenized() const {
    std::vector<Rat> v = values;
    if (v.size() % 2 == 0) v.pop_back();  // top odd argument has no h(t+1)
    for (int t = 1; t < int(v.size()); t += 2)
        v[t] = (values[t - 1] + values[t + 1]) * Rat(1, 2);
    return OneDimConvex(std::move(v));
}

UnaryTreeTerm make_distance_unary(const Tree& t, int i, int z, OneDimConvex h) {
    UnaryTreeTerm u;
    u.i = i;
    u.anchor = z;
    u.values.resize(t.n);
    for (int v = 0; v < t.n; ++v) u.values[v] = h.at(t.distance(v, z));
    u.anchor_h = std::move(h);
    return u;
}

void TwoSeparable::validate_lconvex() const {
    const Tree& T = *tree;
    for (const auto& p : pairs) {
        if (p.i < 0 || p.i >= n || p.j < 0 || p.j >= n || p.i == p.j)
            throw InvalidInput("pair term coordinates");
        if (!p.h.is_convex() || !p.h.is_nondecreasing() || !p.h.is_even())
            throw NotLConvex("pair term must be even nondecreasing convex");
    }
    for (const auto& a : anchored) {
        if (a.i < 0 || a.i >= n || a.j < 0 || a.j >= n || a.i == a.j)
            throw InvalidInput("anchored term coordinates");
        if (T.black(a.z) != T.black(a.w))
            throw NotLConvex("anchors must share a color class");
        if (!a.h.is_convex() || !a.h.is_nondecreasing() || !a.h.is_even())
            throw NotLConvex("anchored term must be even nondecreasing convex");
    }
    for (const auto& u : unary) {
        if (u.i < 0 || u.i >= n || int(u.values.size()) != T.n)
            throw InvalidInput("unary term shape");
        // finite part must be path-connected and discretely convex along
        // every path
        for (int a = 0; a < T.n; ++a) {
            if (u.values[a].inf) continue;
            for (int b = 0; b < T.n; ++b) {
                if (u.values[b].inf) continue;
                auto pth = T.path(a, b);
                for (int v : pth)
                    if (u.values[v].inf)
                        throw NotLConvex("unary term has a non-convex domain");
                for (int k = 1; k + 1 < int(pth.size()); ++k)
                    if (u.values[pth[k - 1]] + u.values[pth[k + 1]] <
                        u.values[pth[k]] * Rat(2))
                        throw NotLConvex("unary term is not convex on the tree");
            }
        }
    }
}

Rat eval(const TwoSeparable& g, const TreePoint& x) {
    const Tree& T = *g.tree;
    Rat total = g.offset;
    for (const auto& u : g.unary) {
        if (u.values[x[u.i]].inf) return Rat::infinity();
        total += u.values[x[u.i]];
    }
    for (const auto& p : g.pairs) total += p.h.at(T.distance(x[p.i], x[p.j]));
    for (const auto& a : g.anchored)
        total += a.h.at(T.distance(x[a.i], a.z) + T.distance(x[a.j], a.w));
    return total;
}

TwoSeparable evenize(const TwoSeparable& g) {
    TwoSeparable r = g;
    for (auto& p : r.pairs) p.h = p.h.evenized();
    for (auto& a : r.anchored) a.h = a.h.evenized();
    // anchored unary terms f(d(., z)) evenize as well; free-form tables
    // (anchor < 0) are kept, they are already convex on the tree
    for (auto& u : r.unary)
        if (u.anchor >= 0)
            u = make_distance_unary(*r.tree, u.i, u.anchor, u.anchor_h.evenized());
    return r;
}

namespace {

struct LocalBuilder {
    const Tree& T;
    bool low_is_white;  // Filter side boxes grow at White vertices
    LocalProblem out;

    LocalBuilder(const TwoSeparable& g, const TreePoint& x, Side side)
        : T(*g.tree), low_is_white(side == Side::Filter) {
        out.box.resize(g.n);
        out.f.domain.arities.resize(g.n);
        for (int i = 0; i < g.n; ++i) {
            out.box[i] = low(x[i]) ? grow(x[i]) : std::vector<int>{x[i]};
            out.f.domain.arities[i] = int(out.box[i].size()) - 1;
        }
        out.f.offset = g.offset;
    }

    bool low(int v) const { return T.black(v) != low_is_white; }
    std::vector<int> grow(int v) const {
        std::vector<int> r{v};
        r.insert(r.end(), T.adj[v].begin(), T.adj[v].end());
        return r;
    }
    int label(int i, int vertex) const {
        for (int l = 0; l < int(out.box[i].size()); ++l)
            if (out.box[i][l] == vertex) return l;
        throw NotLConvex("vertex not in local box");
    }

    void add_weighted_theta(int i, int a, const Rat& w) {
        if (w < Rat(0)) throw NotLConvex("negative local theta weight");
        if (w != Rat(0)) out.f.terms.push_back(BasicTerm::theta(i, a, w));
    }
    void add_weighted_mu(int i, int j, int a, int b, const Rat& w) {
        if (w < Rat(0)) throw NotLConvex("negative local mu weight");
        if (w != Rat(0)) out.f.terms.push_back(BasicTerm::mu(i, j, a, b, w));
    }

    void unary(const UnaryTreeTerm& u, int xi) {
        std::vector<Rat> table;
        for (int v : out.box[u.i]) table.push_back(u.values[v]);
        (void)xi;
        out.f.terms.push_back(BasicTerm::unary(u.i, std::move(table)));
    }

    // pair term h(d(s,t)) on box_i x box_j around (u, v)
    void pair(const PairTerm& p, int u, int v) {
        const OneDimConvex& h = p.h;
        bool lu = low(u), lv = low(v);
        int D = T.distance(u, v);
        if (!lu && !lv) {
            out.f.offset += h.at(D);
            return;
        }
        if (lu != lv) {
            if (D % 2 != 1) throw NotLConvex("pair parity");
            out.f.offset += h.at(D);
            if (lu)
                add_weighted_theta(p.i, label(p.i, T.step_toward(u, v)), h.delta(D));
            else
                add_weighted_theta(p.j, label(p.j, T.step_toward(v, u)), h.delta(D));
            return;
        }
        // both low
        if (u == v) {
            out.f.offset += h.at(0);
            int k = int(out.box[p.i].size()) - 1;
            std::vector<int> sigma(k + 1);
            for (int l = 0; l <= k; ++l) sigma[l] = label(p.j, out.box[p.i][l]);
            Rat w = h.delta(1);
            if (w < Rat(0)) throw NotLConvex("negative delta weight");
            if (w != Rat(0))
                out.f.terms.push_back(BasicTerm::delta(p.i, p.j, sigma, w));
            return;
        }
        if (D % 2 != 0 || D < 2) throw NotLConvex("pair parity");
        out.f.offset += h.at(D);
        int a = label(p.i, T.step_toward(u, v));
        int b = label(p.j, T.step_toward(v, u));
        add_weighted_theta(p.i, a, h.delta(D));
        add_weighted_theta(p.j, b, h.delta(D));
        add_weighted_mu(p.i, p.j, a, b, h.delta2(D));
    }

    // anchored term h(d(s,z) + d(t,w)) around (u, v)
    void anchored(const AnchoredTerm& t, int u, int v) {
        const OneDimConvex& h = t.h;
        bool lu = low(u), lv = low(v);
        int D = T.distance(u, t.z) + T.distance(v, t.w);
        if (!lu && !lv) {
            out.f.offset += h.at(D);
            return;
        }
        auto toward = [&](int coord, int from, int anchor) {
            return from == anchor ? 0 : label(coord, T.step_toward(from, anchor));
        };
        if (lu != lv) {
            if (D % 2 != 1) throw NotLConvex("anchored parity");
            out.f.offset += h.at(D);
            if (lu)
                add_weighted_theta(t.i, toward(t.i, u, t.z), h.delta(D));
            else
                add_weighted_theta(t.j, toward(t.j, v, t.w), h.delta(D));
            return;
        }
        if (D % 2 != 0) throw NotLConvex("anchored parity");
        if (D == 0) {
            // u = z, v = w: h(d(s,z)+d(t,w)) = h([s!=u] + [t!=v]); with h
            // even this is h(0) plus (h(1)-h(0)) per moved coordinate
            out.f.offset += h.at(0);
            Rat w = h.at(1) - h.at(0);
            if (w < Rat(0)) throw NotLConvex("decreasing anchored term");
            if (w != Rat(0)) {
                for (int b = 1; b <= out.f.domain.arities[t.i]; ++b)
                    out.f.terms.push_back(BasicTerm::epsilon(t.i, b, w));
                for (int b = 1; b <= out.f.domain.arities[t.j]; ++b)
                    out.f.terms.push_back(BasicTerm::epsilon(t.j, b, w));
            }
            return;
        }
        out.f.offset += h.at(D);
        int a = toward(t.i, u, t.z);
        int b = toward(t.j, v, t.w);
        add_weighted_theta(t.i, a, h.delta(D));
        add_weighted_theta(t.j, b, h.delta(D));
        add_weighted_mu(t.i, t.j, a, b, h.delta2(D));
    }
};

}  // namespace

LocalProblem local_term_sum(const TwoSeparable& g, const TreePoint& x, Side side) {
    LocalBuilder b(g, x, side);
    for (const auto& u : g.unary) b.unary(u, x[u.i]);
    for (const auto& p : g.pairs) b.pair(p, x[p.i], x[p.j]);
    for (const auto& a : g.anchored) b.anchored(a, x[a.i], x[a.j]);
    return std::move(b.out);
}

std::pair<TreePoint, DescentTrace> steepest_descent(const TwoSeparable& g,
                                                    const TreePoint& x0) {
    TreePoint x = x0;
    Rat cur = eval(g, x);
    if (cur.inf) throw EmptyDomain("start outside dom");
    DescentTrace trace;
    trace.iterates.push_back(x);
    trace.values.push_back(cur);
    while (true) {
        LocalProblem ip = local_term_sum(g, x, Side::Ideal);
        LocalProblem fp = local_term_sum(g, x, Side::Filter);
        MinResult mi = minimize(ip.f);
        MinResult mf = minimize(fp.f);
        Side side = mi.value <= mf.value ? Side::Ideal : Side::Filter;
        const MinResult& best = side == Side::Ideal ? mi : mf;
        const LocalProblem& prob = side == Side::Ideal ? ip : fp;
        if (!(best.value < cur)) break;
        for (int i = 0; i < g.n; ++i) x[i] = prob.box[i][best.point[i]];
        cur = best.value;
        assert(cur == eval(g, x));
        trace.iterates.push_back(x);
        trace.sides.push_back(side);
        trace.values.push_back(cur);
    }
    return {x, trace};
}

TreePoint two_approx_round(const TwoSeparable& omega, const TreePoint& xstar, int y) {
    const Tree& T = *omega.tree;
    if (!omega.anchored.empty())
        throw NotMultifacility("anchored terms present");
    if (omega.offset < Rat(0)) throw NotMultifacility("negative offset");
    for (const auto& u : omega.unary) {
        if (u.anchor < 0 || !T.black(u.anchor))
            throw NotMultifacility("unary term without a Black anchor");
        if (!u.anchor_h.is_nondecreasing() || u.anchor_h.at(0) < Rat(0) ||
            !u.anchor_h.is_convex())
            throw NotMultifacility("unary term not nonneg nondecreasing convex");
    }
    for (const auto& p : omega.pairs)
        if (!p.h.is_nondecreasing() || p.h.at(0) < Rat(0) || !p.h.is_convex())
            throw NotMultifacility("pair term not nonneg nondecreasing convex");
    return round_toward(T, xstar, y);
}

std::pair<TreePoint, Rat> brute_force_tree_min(const TwoSeparable& g,
                                               bool black_only, long long budget) {
    const Tree& T = *g.tree;
    long long count = 1;
    for (int i = 0; i < g.n; ++i) {
        count *= T.n;
        if (count > budget) throw TooLarge();
    }
    TreePoint x(g.n, 0), best;
    Rat best_val = Rat::infinity();
    std::function<void(int)> rec = [&](int i) {
        if (i == g.n) {
            Rat v = eval(g, x);
            if (v < best_val) {
                best_val = v;
                best = x;
            }
            return;
        }
        for (int u = 0; u < T.n; ++u) {
            if (black_only && !T.black(u)) continue;
            x[i] = u;
            rec(i + 1);
        }
    };
    rec(0);
    if (best_val.inf) throw EmptyDomain("objective is everywhere infinite");
    return {best, best_val};
}

bool check_persistency(const TwoSeparable& omega, long long budget) {
    const Tree& T = *omega.tree;
    TwoSeparable bar = evenize(omega);
    auto [x, relax_val] = brute_force_tree_min(bar, /*black_only=*/false, budget);
    auto [yb, opt] = brute_force_tree_min(omega, /*black_only=*/true, budget);
    (void)yb;
    // search F(x) ∩ B^n for a point attaining opt
    std::vector<std::vector<int>> choices(omega.n);
    for (int i = 0; i < omega.n; ++i) {
        if (T.black(x[i])) choices[i] = {x[i]};
        else choices[i] = T.adj[x[i]];
    }
    TreePoint y(omega.n);
    bool found = false;
    std::function<void(int)> rec = [&](int i) {
        if (found) return;
        if (i == omega.n) {
            found = eval(omega, y) == opt;
            return;
        }
        for (int u : choices[i]) {
            y[i] = u;
            rec(i + 1);
        }
    };
    rec(0);
    return found;
}

bool check_proximity(const TwoSeparable& omega, long long budget) {
    const Tree& T = *omega.tree;
    auto [gy, gopt] = brute_force_tree_min(omega, false, budget);
    auto [by, bopt] = brute_force_tree_min(omega, true, budget);
    (void)gy;
    (void)by;
    // collect global minimizers once
    std::vector<TreePoint> globals;
    {
        TreePoint x(omega.n, 0);
        std::function<void(int)> rec = [&](int i) {
            if (i == omega.n) {
                if (eval(omega, x) == gopt) globals.push_back(x);
                return;
            }
            for (int u = 0; u < T.n; ++u) {
                x[i] = u;
                rec(i + 1);
            }
        };
        rec(0);
    }
    // every Black minimizer must have a global minimizer within l_inf 2n
    bool ok = true;
    TreePoint x(omega.n, 0);
    std::function<void(int)> rec = [&](int i) {
        if (!ok) return;
        if (i == omega.n) {
            if (eval(omega, x) != bopt) return;
            for (const auto& y : globals) {
                int d = 0;
                for (int c = 0; c < omega.n; ++c)
                    d = std::max(d, T.distance(x[c], y[c]));
                if (d <= 2 * omega.n) return;
            }
            ok = false;
            return;
        }
        for (int u = 0; u < T.n; ++u) {
            if (!T.black(u)) continue;
            x[i] = u;
            rec(i + 1);
        }
    };
    rec(0);
    return ok;
}

}  // namespace treeflow
