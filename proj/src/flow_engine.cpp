#include "treeflow/flow_engine.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <sstream>

namespace treeflow {

long long DirectedNetwork::inf_value() const {
    long long total = 0;
    for (const auto& e : edges) {
        if (e.upper != kInfCap) total += e.upper;
        total += e.lower;
    }
    return total + 1;
}

namespace {

// Residual-arc Dinic.  Arcs are created in edge insertion order, so
// augmentation is deterministic; the minimal min cut is order-independent
// anyway (residual reachability), which the tests double-check.
struct Dinic {
    struct Arc {
        int to;
        long long cap;
        int rev;
    };
    int n;
    std::vector<std::vector<Arc>> adj;
    std::vector<int> level, it;

    explicit Dinic(int n) : n(n), adj(n), level(n), it(n) {}

    // returns (index of forward arc) for later flow read-back
    std::pair<int, int> add(int u, int v, long long cap) {
        adj[u].push_back({v, cap, int(adj[v].size())});
        adj[v].push_back({u, 0, int(adj[u].size()) - 1});
        return {u, int(adj[u].size()) - 1};
    }

    bool bfs(int s, int t) {
        std::fill(level.begin(), level.end(), -1);
        std::queue<int> q;
        level[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (const Arc& a : adj[u])
                if (a.cap > 0 && level[a.to] < 0) {
                    level[a.to] = level[u] + 1;
                    q.push(a.to);
                }
        }
        return level[t] >= 0;
    }

    long long dfs(int u, int t, long long f) {
        if (u == t) return f;
        for (int& i = it[u]; i < int(adj[u].size()); ++i) {
            Arc& a = adj[u][i];
            if (a.cap > 0 && level[a.to] == level[u] + 1) {
                long long d = dfs(a.to, t, std::min(f, a.cap));
                if (d > 0) {
                    a.cap -= d;
                    adj[a.to][a.rev].cap += d;
                    return d;
                }
            }
        }
        return 0;
    }

    long long run(int s, int t) {
        long long total = 0;
        while (bfs(s, t)) {
            std::fill(it.begin(), it.end(), 0);
            while (long long f = dfs(s, t, LLONG_MAX_SAFE)) total += f;
        }
        return total;
    }

    static constexpr long long LLONG_MAX_SAFE = (1LL << 62);

    std::vector<char> reachable(int s) const {
        std::vector<char> seen(n, 0);
        std::queue<int> q;
        seen[s] = 1;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (const Arc& a : adj[u])
                if (a.cap > 0 && !seen[a.to]) {
                    seen[a.to] = 1;
                    q.push(a.to);
                }
        }
        return seen;
    }
};

}  // namespace

FlowResult max_flow(const DirectedNetwork& net, int s, int t) {
    if (s == t) throw InvalidInput("max_flow: s == t");
    for (const auto& e : net.edges)
        if (e.lower != 0) throw InvalidInput("max_flow: nonzero lower bound");

    Dinic d(net.node_count);
    std::vector<std::pair<int, int>> where;
    where.reserve(net.edges.size());
    for (size_t i = 0; i < net.edges.size(); ++i) {
        const auto& e = net.edges[i];
        where.push_back(d.add(e.tail, e.head, net.effective_upper(int(i))));
    }

    FlowResult res;
    res.value = d.run(s, t);
    res.flow.resize(net.edges.size());
    for (size_t i = 0; i < net.edges.size(); ++i) {
        auto [u, idx] = where[i];
        res.flow[i] = net.effective_upper(int(i)) - d.adj[u][idx].cap;
    }
    res.cut_side = d.reachable(s);
    assert(!res.cut_side[t]);
    return res;
}

std::vector<char> minimal_min_cut(const DirectedNetwork& net, int s, int t) {
    return max_flow(net, s, t).cut_side;
}

std::optional<std::vector<long long>> feasible_circulation(const DirectedNetwork& net) {
    // Shift flow by the lower bounds; route the resulting excess/deficit
    // through a super source/sink and demand saturation.
    DirectedNetwork aux;
    aux.node_count = net.node_count + 2;
    int ss = net.node_count, tt = net.node_count + 1;
    std::vector<long long> excess(net.node_count, 0);
    for (const auto& e : net.edges) {
        long long up = e.upper == DirectedNetwork::kInfCap
                           ? DirectedNetwork::kInfCap
                           : e.upper - e.lower;
        aux.edges.push_back({e.tail, e.head, 0, up});
        excess[e.head] += e.lower;
        excess[e.tail] -= e.lower;
    }
    long long need = 0;
    for (int v = 0; v < net.node_count; ++v) {
        if (excess[v] > 0) {
            aux.edges.push_back({ss, v, 0, excess[v]});
            need += excess[v];
        } else if (excess[v] < 0) {
            aux.edges.push_back({v, tt, 0, -excess[v]});
        }
    }
    if (need == 0) {
        // No lower bounds anywhere: the zero circulation works.
        std::vector<long long> phi(net.edges.size());
        for (size_t i = 0; i < net.edges.size(); ++i) phi[i] = net.edges[i].lower;
        return phi;
    }
    FlowResult fr = max_flow(aux, ss, tt);
    if (fr.value != need) return std::nullopt;
    std::vector<long long> phi(net.edges.size());
    for (size_t i = 0; i < net.edges.size(); ++i)
        phi[i] = net.edges[i].lower + fr.flow[i];
    return phi;
}

std::vector<Cycle> decompose_circulation(const DirectedNetwork& net,
                                         const std::vector<long long>& phi) {
    if (phi.size() != net.edges.size())
        throw NotCirculation("flow vector size mismatch");
    std::vector<long long> bal(net.node_count, 0);
    for (size_t i = 0; i < net.edges.size(); ++i) {
        if (phi[i] < 0) throw NotCirculation("negative flow");
        bal[net.edges[i].tail] += phi[i];
        bal[net.edges[i].head] -= phi[i];
    }
    for (long long b : bal)
        if (b != 0) throw NotCirculation("conservation fails");

    std::vector<long long> rem = phi;
    // out[v] = indices of edges leaving v with remaining flow
    std::vector<std::vector<int>> out(net.node_count);
    for (size_t i = 0; i < net.edges.size(); ++i)
        if (rem[i] > 0) out[net.edges[i].tail].push_back(int(i));

    std::vector<Cycle> cycles;
    for (int start_edge = 0; start_edge < int(net.edges.size()); ++start_edge) {
        while (rem[start_edge] > 0) {
            // walk forward along positive-flow edges until a node repeats
            std::vector<int> path_edges;
            std::vector<int> visited_at(net.node_count, -1);
            int u = net.edges[start_edge].tail;
            visited_at[u] = 0;
            int cur = u;
            while (true) {
                auto& lst = out[cur];
                while (!lst.empty() && rem[lst.back()] == 0) lst.pop_back();
                assert(!lst.empty() && "positive excess must continue");
                int e = lst.back();
                path_edges.push_back(e);
                cur = net.edges[e].head;
                if (visited_at[cur] >= 0) break;
                visited_at[cur] = int(path_edges.size());
            }
            // the cycle is the suffix of path_edges starting where cur was seen
            Cycle c;
            c.coeff = (1LL << 62);
            for (int i = visited_at[cur]; i < int(path_edges.size()); ++i) {
                c.edge_ids.push_back(path_edges[i]);
                c.coeff = std::min(c.coeff, rem[path_edges[i]]);
            }
            for (int e : c.edge_ids) rem[e] -= c.coeff;
            c.nodes.push_back(net.edges[c.edge_ids.front()].tail);
            for (int e : c.edge_ids) c.nodes.push_back(net.edges[e].head);
            cycles.push_back(std::move(c));
        }
    }
    return cycles;
}

std::string to_dimacs(const DirectedNetwork& net, int s, int t) {
    std::ostringstream os;
    os << "p max " << net.node_count << " " << net.edges.size() << "\n";
    os << "n " << s + 1 << " s\n";
    os << "n " << t + 1 << " t\n";
    for (size_t i = 0; i < net.edges.size(); ++i) {
        const auto& e = net.edges[i];
        os << "a " << e.tail + 1 << " " << e.head + 1 << " "
           << net.effective_upper(int(i)) << "\n";
    }
    return os.str();
}

}  // namespace treeflow
