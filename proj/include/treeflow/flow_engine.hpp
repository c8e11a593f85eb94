#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treeflow/errors.hpp"

namespace treeflow {

// Directed network with integer lower/upper capacities.  upper == kInfCap
// marks an "infinite" edge; it is replaced internally by
// 1 + sum(all finite bounds) so arithmetic stays in int64.
struct NetEdge {
    int tail = 0;
    int head = 0;
    long long lower = 0;
    long long upper = 0;
};

struct DirectedNetwork {
    static constexpr long long kInfCap = -1;

    int node_count = 0;
    std::vector<NetEdge> edges;

    int add_node() { return node_count++; }
    int add_edge(int tail, int head, long long lower, long long upper) {
        if (tail == head) throw InvalidInput("self-loop");
        if (tail < 0 || tail >= node_count || head < 0 || head >= node_count)
            throw InvalidInput("edge endpoint out of range");
        if (upper != kInfCap && lower > upper)
            throw InvalidInput("lower > upper");
        edges.push_back({tail, head, lower, upper});
        return int(edges.size()) - 1;
    }

    // 1 + sum of all finite bounds: larger than any cut made of finite edges.
    long long inf_value() const;
    long long effective_upper(int e) const {
        return edges[e].upper == kInfCap ? inf_value() : edges[e].upper;
    }
};

struct FlowResult {
    long long value = 0;
    std::vector<long long> flow;   // per edge, in input order
    std::vector<char> cut_side;    // source side of the minimal min cut
};

// Dinic max-flow.  Requires all lower bounds zero.
FlowResult max_flow(const DirectedNetwork& net, int s, int t);

// Source side of the unique inclusion-minimal minimum (s,t)-cut
// (residual-reachable set from s).
std::vector<char> minimal_min_cut(const DirectedNetwork& net, int s, int t);

// Integral circulation within [lower, upper], or nullopt when none exists.
// Standard excess/deficit super-source/super-sink reduction.
std::optional<std::vector<long long>> feasible_circulation(const DirectedNetwork& net);

struct Cycle {
    std::vector<int> edge_ids;  // consecutive edges of the directed cycle
    std::vector<int> nodes;     // node sequence, nodes.front() == nodes.back()
    long long coeff = 0;
};

// Write phi as a nonnegative combination of directed cycles.
std::vector<Cycle> decompose_circulation(const DirectedNetwork& net,
                                         const std::vector<long long>& phi);

// Debug dump in DIMACS max-flow format (lower bounds ignored).
std::string to_dimacs(const DirectedNetwork& net, int s, int t);

}  // namespace treeflow
