#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "treeflow/multiflow.hpp"

using namespace treeflow;

namespace {

Instance k13(long long r = 1) {
    Instance in;
    in.n = 4;
    in.terminals = {1, 2, 3};
    in.edges = {{0, 1, 1, 1}, {0, 2, 1, 1}, {0, 3, 1, 1}};
    in.demands = {r, r, r};
    return in;
}

Instance triangle(long long r) {
    Instance in;
    in.n = 3;
    in.terminals = {0, 1, 2};
    in.edges = {{0, 1, 1, 1}, {1, 2, 1, 1}, {0, 2, 1, 1}};
    in.demands = {r, r, r};
    return in;
}

// s = 0, t = 1 joined by two disjoint length-2 paths through 2 and 3
Instance diamond() {
    Instance in;
    in.n = 4;
    in.terminals = {0, 1};
    in.edges = {{0, 2, 1, 1}, {2, 1, 1, 1}, {0, 3, 1, 1}, {3, 1, 1, 1}};
    in.demands = {1, 1};
    return in;
}

Potential legs_at(const Instance& in, long long halves) {
    Potential p = Potential::zero(in.n);
    for (int s : in.terminals) {
        p.h[s] = halves;
        p.leg[s] = halves > 0 ? s : -1;
    }
    return p;
}

void check_solution(const Instance& in, const Solution& sol) {
    CHECK(sol.certified);
    CHECK(verify_optimality(in, sol.flow, sol.potential).ok);
    CHECK(sol.potential.is_proper(in));
    auto x = flow_support(in, sol.flow);
    CHECK(x == sol.support_halves);
    for (int e = 0; e < int(in.edges.size()); ++e) {
        CHECK(x[e] >= 0);
        CHECK(x[e] <= 2 * in.edges[e].cap);
    }
    auto fs = sol.flow.terminal_flow_halves(in);
    for (int ti = 0; ti < int(in.terminals.size()); ++ti)
        CHECK(fs[ti] >= 2 * in.demand(ti));
    CHECK(sol.value_halves == primal_cost_halves(in, sol.flow));
    CHECK(sol.value_halves == dual_halves(in, sol.potential));
}

Instance random_instance(std::mt19937& rng) {
    Instance in;
    in.n = std::uniform_int_distribution<int>(2, 6)(rng);
    int m = std::uniform_int_distribution<int>(1, 8)(rng);
    for (int e = 0; e < m; ++e) {
        int u = std::uniform_int_distribution<int>(0, in.n - 1)(rng);
        int v = std::uniform_int_distribution<int>(0, in.n - 1)(rng);
        if (u == v) continue;
        long long c = std::uniform_int_distribution<int>(0, 2)(rng);
        long long a = std::uniform_int_distribution<int>(0, 2)(rng);
        in.edges.push_back({u, v, c, a});
    }
    int k = std::uniform_int_distribution<int>(2, std::min(3, in.n))(rng);
    std::vector<int> perm(in.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    in.terminals.assign(perm.begin(), perm.begin() + k);
    auto rep = check_feasibility(in);
    for (int ti = 0; ti < k; ++ti) {
        long long want = std::uniform_int_distribution<int>(0, 3)(rng);
        in.demands.push_back(std::min(want, rep.kappa[ti]));
    }
    return in;
}

}  // namespace

TEST_CASE("potential distances and dual objective") {
    Instance in = k13();
    Potential p = legs_at(in, 2);
    CHECK(dist_halves(p, 0, 1) == 2);
    CHECK(dist_halves(p, 1, 2) == 4);   // across two legs
    CHECK(dist_halves(p, 1, 1) == 0);
    CHECK(dual_halves(in, p) == 6);     // 3·1 − 3·(1−1)⁺, in halves
    CHECK(dual_objective(in, p) == Rat(3));
    CHECK(p.integral());
    CHECK(p.is_proper(in));

    Potential ph = legs_at(in, 1);
    CHECK(dual_halves(in, ph) == 3);
    CHECK(dual_objective(in, ph) == Rat(3, 2));
    CHECK(!ph.integral());

    CHECK(dual_halves(in, Potential::zero(in.n)) == 0);
    CHECK(omega_halves(in, ph) == -3);

    // same-leg distances
    Potential q = Potential::zero(in.n);
    q.leg = {1, 1, -1, -1};
    q.h = {1, 2, 0, 0};
    CHECK(dist_halves(q, 0, 1) == 1);
    CHECK(dist_halves(q, 0, 2) == 1);
}

TEST_CASE("flow support and primal cost") {
    Instance in = k13();
    Multiflow f;
    f.paths = {{{1, 0, 2}, {}, 1}, {{2, 0, 3}, {}, 1}, {{1, 0, 3}, {}, 1}};
    auto x = flow_support(in, f);
    CHECK(x == std::vector<long long>{2, 2, 2});
    CHECK(primal_cost_halves(in, f) == 6);
    CHECK(primal_cost(in, f) == Rat(3));
    CHECK(f.terminal_flow_halves(in) == std::vector<long long>{2, 2, 2});
    CHECK(f.value_halves() == 3);

    Multiflow tri;
    tri.paths = {{{0, 1}, {}, 2}, {{1, 2}, {}, 2}, {{0, 2}, {}, 2}};
    CHECK(primal_cost_halves(triangle(2), tri) == 6);

    CHECK(primal_cost_halves(in, Multiflow{}) == 0);

    Multiflow big;
    big.paths = {{{1, 0, 2}, {}, 3}};  // 3 halves > cap 1 on both edges
    CHECK_THROWS_AS(flow_support(in, big), CapacityViolated);
}

TEST_CASE("cost perturbation") {
    Instance in = k13();
    auto [same, s1] = perturb_costs(in);
    CHECK(s1 == 1);
    CHECK(same.edges[0].cost == 1);

    Instance z = k13();
    z.edges[0].cost = 0;
    z.edges[0].cap = 3;  // C(Z) = 3
    auto [pert, s7] = perturb_costs(z);
    CHECK(s7 == 7);
    CHECK(pert.edges[0].cost == 1);
    CHECK(pert.edges[1].cost == 7);
    CHECK(pert.edges[2].cost == 7);

    Instance all0 = k13();
    for (auto& e : all0.edges) e.cost = 0;
    auto [p0, s] = perturb_costs(all0);
    for (auto& e : p0.edges) CHECK(e.cost == 1);
}

TEST_CASE("feasibility and terminal cuts") {
    Instance in = k13();
    auto rep = check_feasibility(in);
    CHECK(rep.feasible);
    CHECK(rep.kappa == std::vector<long long>{1, 1, 1});

    Instance bad = k13();
    bad.demands[0] = 2;
    auto r2 = check_feasibility(bad);
    CHECK(!r2.feasible);
    CHECK(r2.violated_terminal == 0);
    // witness is the minimal cut {s1}
    std::vector<char> want(4, 0);
    want[1] = 1;
    CHECK(r2.witness_cut == want);

    Instance zero = k13(0);
    CHECK(check_feasibility(zero).feasible);
}

TEST_CASE("double cover network shapes") {
    Instance in = k13();

    // p ≡ 0: only terminal and internal arcs, no pair arcs
    DoubleCoverNetwork d0 = build_double_cover(in, Potential::zero(in.n));
    int pair = 0, internal = 0, terminal = 0;
    for (auto& a : d0.arcs) {
        if (a.kind == DoubleCoverNetwork::ArcKind::Pair) ++pair;
        if (a.kind == DoubleCoverNetwork::ArcKind::Internal) ++internal;
        if (a.kind == DoubleCoverNetwork::ArcKind::Terminal) ++terminal;
    }
    CHECK(pair == 0);
    CHECK(internal == 6);  // node 0 has copies for 3 terminals
    CHECK(terminal == 3);
    for (int ti = 0; ti < 3; ++ti) {
        const auto& a = d0.arcs[d0.terminal_arc[ti]];
        CHECK(a.lower == 1);
        CHECK(a.upper == DoubleCoverNetwork::kInf);  // p_s = 0
    }
    CHECK(d0.edge_class == std::vector<char>{0, 0, 0});

    // optimal integral p: every edge tight (E_=), bounds [0, c]
    DoubleCoverNetwork d1 = build_double_cover(in, legs_at(in, 2));
    CHECK(d1.edge_class == std::vector<char>{1, 1, 1});
    for (int e = 0; e < 3; ++e) {
        for (int side : {0, 1}) {
            const auto& a = d1.arcs[d1.edge_arcs[e][side]];
            CHECK(a.lower == 0);
            CHECK(a.upper == 1);
        }
    }
    for (int ti = 0; ti < 3; ++ti) {
        const auto& a = d1.arcs[d1.terminal_arc[ti]];
        CHECK(a.lower == 1);
        CHECK(a.upper == 1);  // p_s ≠ 0
    }

    // deep p: E_> edges get lower = upper = c
    DoubleCoverNetwork d2 = build_double_cover(in, legs_at(in, 4));
    CHECK(d2.edge_class == std::vector<char>{2, 2, 2});
    for (int e = 0; e < 3; ++e) {
        const auto& a = d2.arcs[d2.edge_arcs[e][0]];
        CHECK(a.lower == 1);
        CHECK(a.upper == 1);
    }

    Instance zc = k13();
    zc.edges[1].cost = 0;
    CHECK_THROWS_AS(build_double_cover(zc, Potential::zero(4)), CostNotPositive);
}

TEST_CASE("scaling solver on the spec instances") {
    Instance in = k13();
    Solution sol = solve_scaling(in);
    CHECK(sol.value_halves == 6);
    CHECK(sol.support_halves == std::vector<long long>{2, 2, 2});
    CHECK(sol.flow.terminal_flow_halves(in) == std::vector<long long>{2, 2, 2});
    for (int steps : sol.phase_steps) CHECK(steps <= 6 * in.n + 6);
    check_solution(in, sol);

    Instance tri = triangle(2);
    Solution st = solve_scaling(tri);
    CHECK(st.value_halves == 6);
    check_solution(tri, st);

    Instance zero = k13(0);
    Solution sz = solve_scaling(zero);
    CHECK(sz.value_halves == 0);
    CHECK(sz.flow.paths.empty());
    CHECK(dual_halves(zero, sz.potential) == 0);
    check_solution(zero, sz);
}

TEST_CASE("descent solver matches and satisfies the step identity") {
    for (Instance in : {k13(), triangle(2), triangle(1), diamond()}) {
        Solution sd = solve_descent(in);
        Solution ss = solve_scaling(in);
        CHECK(sd.value_halves == ss.value_halves);
        check_solution(in, sd);
        auto [pert, scale] = perturb_costs(in);
        (void)pert;
        CHECK(scale == 1);
        for (const auto& st : sd.descent_steps) {
            CHECK(st.omega_after < st.omega_before);  // strict descent
            CHECK(st.omega_after - st.omega_before ==
                  st.cut_capacity - st.trivial_cut_capacity);
            CHECK(st.cut_capacity < st.trivial_cut_capacity);
        }
    }
}

TEST_CASE("infeasible demand throws") {
    Instance bad = k13();
    bad.demands[2] = 5;
    CHECK_THROWS_AS(solve_scaling(bad), Infeasible);
    CHECK_THROWS_AS(solve_descent(bad), Infeasible);
}

TEST_CASE("verify_optimality rejects bad certificates") {
    Instance in = k13();
    for (auto& e : in.edges) e.cap = 2;  // room for a detour
    Potential p = legs_at(in, 2);
    Multiflow good;
    good.paths = {{{1, 0, 2}, {}, 1}, {{2, 0, 3}, {}, 1}, {{1, 0, 3}, {}, 1}};
    CHECK(verify_optimality(in, good, p).ok);

    Multiflow detour = good;
    detour.paths[0].nodes = {1, 0, 3, 0, 2};
    auto rep = verify_optimality(in, detour, p);
    CHECK(!rep.ok);
    CHECK(rep.violation.find("condition (3)") != std::string::npos);

    // zero potential has a duality gap against a positive-cost flow
    auto gap = verify_optimality(in, good, Potential::zero(in.n));
    CHECK(!gap.ok);

    Multiflow loop = good;
    loop.paths[0].nodes = {1, 0, 1};
    CHECK(!verify_optimality(in, loop, p).ok);
}

TEST_CASE("cross-solver agreement on random instances") {
    std::mt19937 rng(20260823);
    for (int it = 0; it < 25; ++it) {
        Instance in = random_instance(rng);
        CAPTURE(it);
        Solution a = solve_scaling(in);
        Solution b = solve_descent(in);
        CHECK(a.value_halves == b.value_halves);
        check_solution(in, a);
        check_solution(in, b);
        long long aprime = std::max(1LL, perturb_costs(in).first.max_cost());
        for (long long h : a.potential.h) CHECK(h <= 2 * in.n * aprime);
        for (int steps : a.phase_steps) CHECK(steps <= 6 * in.n + 6);
    }
}

TEST_CASE("minimum-cost maximum free multiflow") {
    Instance in = k13();
    in.tag = ProblemTag::MCMF;
    McmfReduction R = reduce_mcmf(in);
    CHECK(R.kappa == std::vector<long long>{1, 1, 1});
    CHECK(R.reduced.n == 7);
    CHECK(R.reduced.demands == R.kappa);
    // original edges re-pointed at the bar copies, plus three bridges
    CHECK(R.reduced.edges.size() == 6);
    for (int ti = 0; ti < 3; ++ti) {
        const auto& e = R.reduced.edges[3 + ti];
        CHECK(e.cap == 1);
        CHECK(e.cost == 0);
    }

    for (bool use_scaling : {true, false}) {
        Solution sol = solve_mcmf(in, use_scaling);
        CHECK(sol.certified);
        CHECK(sol.flow.value_halves() == 3);  // v_f = 3/2
        CHECK(sol.value_halves == 6);         // cost 3
        CHECK(lovasz_cherkassky_value(in) == Rat(3, 2));
        auto x = flow_support(in, sol.flow);
        CHECK(x == sol.support_halves);
        for (const auto& P : sol.flow.paths) {
            CHECK(in.terminal_index(P.nodes.front()) >= 0);
            CHECK(in.terminal_index(P.nodes.back()) >= 0);
            CHECK(P.nodes.front() != P.nodes.back());
        }
    }

    Instance tri = triangle(0);
    tri.tag = ProblemTag::MCMF;
    Solution ts = solve_mcmf(tri, true);
    CHECK(ts.certified);
    CHECK(ts.flow.value_halves() == 6);  // v_f = 3 = Σκ/2
    CHECK(ts.value_halves == 6);
    CHECK(lovasz_cherkassky_value(tri) == Rat(3));

    // isolated terminal: κ = 0 there
    Instance iso = k13();
    iso.n = 5;
    iso.terminals.push_back(4);
    iso.demands = {};
    iso.tag = ProblemTag::MCMF;
    McmfReduction Ri = reduce_mcmf(iso);
    CHECK(Ri.kappa == std::vector<long long>{1, 1, 1, 0});
    Solution si = solve_mcmf(iso, true);
    CHECK(si.certified);
    CHECK(si.flow.value_halves() == 3);
}

TEST_CASE("multiway cut") {
    Instance in = k13(0);
    in.tag = ProblemTag::MULTIWAY;
    MultiwayResult r = multiway_cut(in);
    CHECK(r.relaxation == Rat(3, 2));
    CHECK(r.cut_value == 2);
    for (int s : in.terminals) CHECK(r.partition[s] == s);

    // two terminals: exact min cut
    Instance two;
    two.n = 3;
    two.terminals = {0, 2};
    two.edges = {{0, 1, 2, 0}, {1, 2, 1, 0}};
    two.tag = ProblemTag::MULTIWAY;
    MultiwayResult r2 = multiway_cut(two);
    CHECK(r2.relaxation == Rat(1));
    CHECK(r2.cut_value == 1);
    CHECK(r2.partition[1] == 0);  // node 1 lands with the cheap side's source

    // 4-cycle with two opposite terminals
    Instance cyc;
    cyc.n = 4;
    cyc.terminals = {0, 2};
    cyc.edges = {{0, 1, 1, 0}, {1, 2, 1, 0}, {2, 3, 1, 0}, {3, 0, 1, 0}};
    cyc.tag = ProblemTag::MULTIWAY;
    MultiwayResult r3 = multiway_cut(cyc);
    CHECK(r3.relaxation == Rat(2));
    CHECK(r3.cut_value == 2);

    // random instances: relax ≤ opt ≤ cut ≤ 2·opt (opt by enumeration)
    std::mt19937 rng(7);
    for (int it = 0; it < 40; ++it) {
        Instance ri = random_instance(rng);
        ri.demands.clear();
        ri.tag = ProblemTag::MULTIWAY;
        int k = int(ri.terminals.size());
        std::vector<int> nonterm;
        for (int i = 0; i < ri.n; ++i)
            if (ri.terminal_index(i) < 0) nonterm.push_back(i);
        long long opt = -1;
        std::vector<int> part(ri.n);
        for (int ti = 0; ti < k; ++ti) part[ri.terminals[ti]] = ri.terminals[ti];
        int combos = 1;
        for (size_t i = 0; i < nonterm.size(); ++i) combos *= k;
        for (int mask = 0; mask < combos; ++mask) {
            int m = mask;
            for (int v : nonterm) {
                part[v] = ri.terminals[m % k];
                m /= k;
            }
            long long cut = 0;
            for (const auto& e : ri.edges)
                if (part[e.u] != part[e.v]) cut += e.cap;
            if (opt < 0 || cut < opt) opt = cut;
        }
        MultiwayResult rr = multiway_cut(ri);
        CAPTURE(it);
        CHECK(rr.relaxation <= Rat(opt));
        CHECK(rr.cut_value >= opt);
        CHECK(Rat(rr.cut_value) <= Rat(2) * Rat(opt));
    }
}

TEST_CASE("half-integral support fixing") {
    // integral support: unchanged
    Instance in = k13();
    Solution sol = solve_scaling(in);
    auto xt = fix_half_integral(in, sol.support_halves, sol.potential);
    CHECK(xt == sol.support_halves);

    // triangle with r ≡ 1: the all-half support is the unique optimum
    Instance tri = triangle(1);
    Solution st = solve_scaling(tri);
    CHECK(st.value_halves == 3);  // cost 3/2
    CHECK(st.support_halves == std::vector<long long>{1, 1, 1});
    auto xtri = fix_half_integral(tri, st.support_halves, st.potential);
    CHECK(xtri == std::vector<long long>{1, 1, 1});

    // diamond: the all-half support can be rerouted onto one path
    Instance dia = diamond();
    Potential p = legs_at(dia, 2);
    std::vector<long long> xh{1, 1, 1, 1};
    Multiflow fh;
    fh.paths = {{{0, 2, 1}, {}, 1}, {{0, 3, 1}, {}, 1}};
    REQUIRE(verify_optimality(dia, fh, p).ok);
    auto xd = fix_half_integral(dia, xh, p);
    CHECK(xd == std::vector<long long>{0, 0, 2, 2});

    // a support violating the E_< condition is rejected
    CHECK_THROWS_AS(fix_half_integral(dia, {2, 2, 2, 2}, p), NotOptimalPair);
    Potential deep = legs_at(dia, 4);
    CHECK_THROWS_AS(fix_half_integral(dia, {1, 1, 1, 1}, deep), NotOptimalPair);

    Instance zc = diamond();
    zc.edges[0].cost = 0;
    CHECK_THROWS_AS(fix_half_integral(zc, xh, p), CostNotPositive);
}

TEST_CASE("instance validation") {
    Instance in = k13();
    CHECK_NOTHROW(in.validate());
    Instance loop = k13();
    loop.edges.push_back({2, 2, 1, 1});
    CHECK_THROWS_AS(loop.validate(), InvalidInput);
    Instance noterm = k13();
    noterm.terminals.clear();
    CHECK_THROWS_AS(noterm.validate(), InvalidInput);
    Instance dup = k13();
    dup.terminals = {1, 1, 2};
    CHECK_THROWS_AS(dup.validate(), InvalidInput);
    Instance negd = k13();
    negd.demands = {1, -1, 0};
    CHECK_THROWS_AS(negd.validate(), InvalidInput);
}
