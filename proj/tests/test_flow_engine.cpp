#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>

#include "treeflow/flow_engine.hpp"

using namespace treeflow;

namespace {

// every (s,t)-cut capacity, by subset enumeration
long long min_cut_by_enumeration(const DirectedNetwork& net, int s, int t) {
    long long best = -1;
    int n = net.node_count;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (!(mask >> s & 1) || (mask >> t & 1)) continue;
        long long cap = 0;
        for (size_t e = 0; e < net.edges.size(); ++e)
            if ((mask >> net.edges[e].tail & 1) && !(mask >> net.edges[e].head & 1))
                cap += net.effective_upper(int(e));
        if (best < 0 || cap < best) best = cap;
    }
    return best;
}

}  // namespace

TEST_CASE("single edge") {
    DirectedNetwork net;
    int s = net.add_node(), t = net.add_node();
    net.add_edge(s, t, 0, 5);
    auto r = max_flow(net, s, t);
    CHECK(r.value == 5);
    auto cut = minimal_min_cut(net, s, t);
    CHECK(cut[s]);
    CHECK(!cut[t]);
    CHECK(std::count(cut.begin(), cut.end(), 1) == 1);
}

TEST_CASE("parallel edges sum") {
    DirectedNetwork net;
    int s = net.add_node(), t = net.add_node();
    net.add_edge(s, t, 0, 2);
    net.add_edge(s, t, 0, 3);
    CHECK(max_flow(net, s, t).value == 5);
}

TEST_CASE("diamond with cross edge") {
    DirectedNetwork net;
    int s = net.add_node(), t = net.add_node();
    int a = net.add_node(), b = net.add_node();
    net.add_edge(s, a, 0, 1);
    net.add_edge(s, b, 0, 1);
    net.add_edge(a, t, 0, 1);
    net.add_edge(b, t, 0, 1);
    net.add_edge(a, b, 0, 1);
    CHECK(max_flow(net, s, t).value == 2);
    CHECK(max_flow(net, s, t).value == min_cut_by_enumeration(net, s, t));
}

TEST_CASE("minimal min cut on paths") {
    DirectedNetwork net;
    int s = net.add_node(), t = net.add_node(), a = net.add_node();
    net.add_edge(s, a, 0, 1);
    net.add_edge(a, t, 0, 2);
    auto cut = minimal_min_cut(net, s, t);
    CHECK(cut == std::vector<char>{1, 0, 0});

    DirectedNetwork net2;
    s = net2.add_node();
    t = net2.add_node();
    a = net2.add_node();
    net2.add_edge(s, a, 0, 2);
    net2.add_edge(a, t, 0, 1);
    CHECK(minimal_min_cut(net2, s, t) == std::vector<char>{1, 0, 1});
}

TEST_CASE("infinite capacity encoding") {
    DirectedNetwork net;
    int s = net.add_node(), t = net.add_node(), a = net.add_node();
    net.add_edge(s, a, 0, 3);
    net.add_edge(a, t, 0, DirectedNetwork::kInfCap);
    CHECK(net.inf_value() == 4);
    CHECK(max_flow(net, s, t).value == 3);
}

TEST_CASE("circulation forced by bounds") {
    DirectedNetwork net;
    int a = net.add_node(), b = net.add_node();
    net.add_edge(a, b, 3, 3);
    net.add_edge(b, a, 3, 3);
    auto phi = feasible_circulation(net);
    REQUIRE(phi.has_value());
    CHECK((*phi)[0] == 3);
    CHECK((*phi)[1] == 3);
}

TEST_CASE("infeasible circulation") {
    DirectedNetwork net;
    int a = net.add_node(), b = net.add_node();
    net.add_edge(a, b, 2, 2);
    net.add_edge(b, a, 0, 1);
    CHECK(!feasible_circulation(net).has_value());
}

TEST_CASE("triangle circulation with lower bound") {
    DirectedNetwork net;
    int a = net.add_node(), b = net.add_node(), c = net.add_node();
    net.add_edge(a, b, 1, 2);
    net.add_edge(b, c, 0, 2);
    net.add_edge(c, a, 0, 2);
    auto phi = feasible_circulation(net);
    REQUIRE(phi.has_value());
    CHECK((*phi)[0] == (*phi)[1]);
    CHECK((*phi)[1] == (*phi)[2]);
    CHECK((*phi)[0] >= 1);
    CHECK((*phi)[0] <= 2);
}

TEST_CASE("decompose circulation reconstructs flow") {
    DirectedNetwork net;
    int a = net.add_node(), b = net.add_node(), c = net.add_node(), d = net.add_node();
    net.add_edge(a, b, 0, 10);
    net.add_edge(b, a, 0, 10);
    net.add_edge(c, d, 0, 10);
    net.add_edge(d, c, 0, 10);
    std::vector<long long> phi{3, 3, 1, 1};
    auto cycles = decompose_circulation(net, phi);
    std::vector<long long> sum(net.edges.size(), 0);
    for (const auto& cy : cycles) {
        CHECK(cy.nodes.front() == cy.nodes.back());
        for (int e : cy.edge_ids) sum[e] += cy.coeff;
    }
    CHECK(sum == phi);

    CHECK(decompose_circulation(net, {0, 0, 0, 0}).empty());
    CHECK_THROWS_AS(decompose_circulation(net, {1, 0, 0, 0}), NotCirculation);
}

TEST_CASE("random networks: maxflow equals enumerated min cut; cut minimality") {
    std::mt19937 rng(20240817);
    for (int iter = 0; iter < 300; ++iter) {
        int n = 3 + int(rng() % 6);  // up to 8 nodes
        DirectedNetwork net;
        for (int i = 0; i < n; ++i) net.add_node();
        int m = 1 + int(rng() % (2 * n));
        for (int e = 0; e < m; ++e) {
            int u = int(rng() % n), v = int(rng() % n);
            if (u == v) continue;
            net.add_edge(u, v, 0, 1 + rng() % 5);
        }
        int s = 0, t = 1;
        auto r = max_flow(net, s, t);
        CHECK(r.value == min_cut_by_enumeration(net, s, t));

        // minimal min cut is a subset of every enumerated minimum cut
        auto cut = minimal_min_cut(net, s, t);
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            if (!(mask >> s & 1) || (mask >> t & 1)) continue;
            long long cap = 0;
            for (size_t e = 0; e < net.edges.size(); ++e)
                if ((mask >> net.edges[e].tail & 1) &&
                    !(mask >> net.edges[e].head & 1))
                    cap += net.effective_upper(int(e));
            if (cap != r.value) continue;
            for (int v = 0; v < n; ++v)
                if (cut[v]) CHECK((mask >> v & 1));
        }

        // permuting edge insertion order leaves the minimal cut unchanged
        DirectedNetwork perm;
        perm.node_count = net.node_count;
        std::vector<int> order(net.edges.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        for (int e : order) perm.edges.push_back(net.edges[e]);
        CHECK(minimal_min_cut(perm, s, t) == cut);
    }
}

TEST_CASE("random circulations: feasibility matches exhaustive search") {
    std::mt19937 rng(7);
    for (int iter = 0; iter < 200; ++iter) {
        int n = 2 + int(rng() % 3);
        DirectedNetwork net;
        for (int i = 0; i < n; ++i) net.add_node();
        int m = 1 + int(rng() % 5);
        for (int e = 0; e < m; ++e) {
            int u = int(rng() % n), v = int(rng() % n);
            if (u == v) continue;
            long long lo = rng() % 3, hi = lo + rng() % 3;
            net.add_edge(u, v, lo, hi);
        }
        auto phi = feasible_circulation(net);
        // exhaustive search over all integral flows in bounds
        bool exists = false;
        std::vector<long long> f(net.edges.size());
        std::function<void(size_t)> rec = [&](size_t e) {
            if (exists) return;
            if (e == net.edges.size()) {
                std::vector<long long> bal(n, 0);
                for (size_t i = 0; i < f.size(); ++i) {
                    bal[net.edges[i].tail] += f[i];
                    bal[net.edges[i].head] -= f[i];
                }
                exists = std::all_of(bal.begin(), bal.end(),
                                     [](long long b) { return b == 0; });
                return;
            }
            for (long long v = net.edges[e].lower; v <= net.edges[e].upper; ++v) {
                f[e] = v;
                rec(e + 1);
            }
        };
        rec(0);
        CHECK(phi.has_value() == exists);
        if (phi) {
            std::vector<long long> bal(n, 0);
            for (size_t i = 0; i < phi->size(); ++i) {
                CHECK((*phi)[i] >= net.edges[i].lower);
                CHECK((*phi)[i] <= net.edges[i].upper);
                bal[net.edges[i].tail] += (*phi)[i];
                bal[net.edges[i].head] -= (*phi)[i];
            }
            for (long long b : bal) CHECK(b == 0);
            // decomposition is bit-exact
            auto cycles = decompose_circulation(net, *phi);
            std::vector<long long> sum(net.edges.size(), 0);
            for (const auto& cy : cycles)
                for (int e : cy.edge_ids) sum[e] += cy.coeff;
            CHECK(sum == *phi);
        }
    }
}

TEST_CASE("dimacs dump shape") {
    DirectedNetwork net;
    int s = net.add_node(), t = net.add_node();
    net.add_edge(s, t, 0, 5);
    auto text = to_dimacs(net, s, t);
    CHECK(text.find("p max 2 1") != std::string::npos);
    CHECK(text.find("a 1 2 5") != std::string::npos);
}
