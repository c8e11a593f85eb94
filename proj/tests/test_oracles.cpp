#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <numeric>
#include <random>

#include "treeflow/oracles.hpp"

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

Instance random_instance(std::mt19937& rng) {
    Instance in;
    in.n = std::uniform_int_distribution<int>(2, 6)(rng);
    int m = std::uniform_int_distribution<int>(1, 6)(rng);
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
        long long want = std::uniform_int_distribution<int>(0, 2)(rng);
        in.demands.push_back(std::min(want, rep.kappa[ti]));
    }
    return in;
}

std::shared_ptr<const Tree> path_tree(int len) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v + 1 < len; ++v) edges.push_back({v, v + 1});
    return std::make_shared<const Tree>(len, edges, 0);
}

OneDimConvex linear_halves(long long w, int len) {
    std::vector<Rat> tab(len);
    for (int z = 0; z < len; ++z) tab[z] = Rat(w * z, 2);
    return OneDimConvex(tab);
}

TwoSeparable random_objective(std::mt19937& rng, bool lconvex_valid) {
    TwoSeparable g;
    int len = std::uniform_int_distribution<int>(2, 6)(rng);
    g.tree = path_tree(len);
    g.n = std::uniform_int_distribution<int>(1, 3)(rng);
    int diam = len - 1;
    int terms = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int t = 0; t < terms; ++t) {
        long long w = std::uniform_int_distribution<int>(0, 3)(rng);
        if (std::uniform_int_distribution<int>(0, 1)(rng)) {
            PairTerm p;
            p.i = std::uniform_int_distribution<int>(0, g.n - 1)(rng);
            p.j = std::uniform_int_distribution<int>(0, g.n - 1)(rng);
            if (p.i == p.j) continue;
            p.h = linear_halves(w, diam + 3);
            g.pairs.push_back(p);
        } else {
            // anchored unary f(d(. , z)); anchors Black (even positions)
            int z = 2 * std::uniform_int_distribution<int>(0, (len - 1) / 2)(rng);
            int i = std::uniform_int_distribution<int>(0, g.n - 1)(rng);
            if (!lconvex_valid) {
                // free-form random table: fine for oracle-vs-oracle checks
                UnaryTreeTerm u;
                u.i = i;
                for (int v = 0; v < len; ++v)
                    u.values.push_back(
                        Rat(std::uniform_int_distribution<int>(0, 9)(rng), 2));
                g.unary.push_back(u);
            } else {
                g.unary.push_back(
                    make_distance_unary(*g.tree, i, z, linear_halves(w, diam + 2)));
            }
        }
    }
    g.offset = Rat(std::uniform_int_distribution<int>(0, 4)(rng), 2);
    return g;
}

}  // namespace

TEST_CASE("exhaustive problem (L) golden values") {
    auto r1 = brute_force_L(k13());
    CHECK(r1.value == Rat(3));
    CHECK(r1.support_halves == std::vector<long long>{2, 2, 2});

    auto r2 = brute_force_L(triangle(2));
    CHECK(r2.value == Rat(3));

    auto r3 = brute_force_L(triangle(1));
    CHECK(r3.value == Rat(3, 2));
    CHECK(r3.support_halves == std::vector<long long>{1, 1, 1});

    auto r0 = brute_force_L(k13(0));
    CHECK(r0.value == Rat(0));
    CHECK(r0.support_halves == std::vector<long long>{0, 0, 0});

    CHECK_THROWS_AS(brute_force_L(k13(2)), Infeasible);

    Instance big = k13();
    for (auto& e : big.edges) e.cap = 200;
    big.edges.push_back({0, 1, 200, 1});
    CHECK_THROWS_AS(brute_force_L(big), TooLarge);
}

TEST_CASE("cut-checking paths agree: subsets vs min-cut") {
    std::mt19937 rng(99);
    for (int it = 0; it < 60; ++it) {
        Instance in = random_instance(rng);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<long long> x;
            for (const auto& e : in.edges)
                x.push_back(std::uniform_int_distribution<long long>(
                    0, 2 * e.cap)(rng));
            CHECK(support_feasible(in, x, false) == support_feasible(in, x, true));
        }
    }
}

TEST_CASE("solvers match the (L) oracle on random instances") {
    std::mt19937 rng(424242);
    for (int it = 0; it < 12; ++it) {
        Instance in = random_instance(rng);
        CAPTURE(it);
        auto oracle = brute_force_L(in);
        Solution sol = solve_scaling(in);
        CHECK(Rat(sol.value_halves, 2) == oracle.value);
        CHECK(sol.certified);
    }
}

TEST_CASE("exhaustive tree minimization") {
    // single unary distance term: minimized exactly at the anchor
    auto tp = path_tree(5);
    TwoSeparable g;
    g.tree = tp;
    g.n = 1;
    g.unary.push_back(make_distance_unary(*tp, 0, 2, linear_halves(2, 6)));
    auto [pt, val] = brute_force_lconvex(g);
    CHECK(pt == TreePoint{2});
    CHECK(val == Rat(0));

    TwoSeparable empty;
    empty.tree = tp;
    empty.n = 0;
    empty.offset = Rat(7, 2);
    CHECK(brute_force_lconvex(empty).second == Rat(7, 2));

    TwoSeparable big;
    big.tree = path_tree(6);
    big.n = 12;
    CHECK_THROWS_AS(brute_force_lconvex(big), TooLarge);

    // independent evaluator agrees with the library's exhaustive search
    std::mt19937 rng(5);
    for (int it = 0; it < 60; ++it) {
        TwoSeparable h = random_objective(rng, false);
        CAPTURE(it);
        auto mine = brute_force_lconvex(h);
        auto lib = brute_force_tree_min(h, false);
        CHECK(mine.second == lib.second);
        CHECK(eval(h, mine.first) == mine.second);
    }

    // and steepest descent reaches the oracle minimum on valid instances
    for (int it = 0; it < 40; ++it) {
        TwoSeparable h = random_objective(rng, true);
        CAPTURE(it);
        h.validate_lconvex();
        auto mine = brute_force_lconvex(h);
        auto [xmin, trace] = steepest_descent(h, TreePoint(h.n, 0));
        CHECK(eval(h, xmin) == mine.second);
    }
}

TEST_CASE("exhaustive multiway cut") {
    Instance in = k13(0);
    in.tag = ProblemTag::MULTIWAY;
    auto r = brute_force_multiway(in);
    CHECK(r.value == 2);
    for (int s : in.terminals) CHECK(r.partition[s] == s);

    // matches the rounded solver within its guarantee
    std::mt19937 rng(11);
    for (int it = 0; it < 30; ++it) {
        Instance ri = random_instance(rng);
        ri.demands.clear();
        ri.tag = ProblemTag::MULTIWAY;
        auto brute = brute_force_multiway(ri);
        auto sol = multiway_cut(ri);
        CHECK(sol.relaxation <= Rat(brute.value));
        CHECK(sol.cut_value >= brute.value);
        CHECK(Rat(sol.cut_value) <= Rat(2) * Rat(brute.value));
    }

    Instance big;
    big.n = 30;
    big.terminals = {0, 1, 2};
    big.edges = {{0, 1, 1, 1}};
    CHECK_THROWS_AS(brute_force_multiway(big), TooLarge);
}
