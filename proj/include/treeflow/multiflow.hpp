#pragma once

#include <array>
#include <string>
#include <vector>

#include "treeflow/flow_engine.hpp"
#include "treeflow/lconvex.hpp"
#include "treeflow/rational.hpp"

namespace treeflow {

enum class ProblemTag { N, MCMF, MULTIWAY };

// Undirected multiflow network with terminals and (for problem N) demands.
struct Instance {
    struct Edge {
        int u = 0, v = 0;
        long long cap = 0, cost = 0;
    };

    int n = 0;
    std::vector<int> terminals;
    std::vector<Edge> edges;
    std::vector<long long> demands;  // aligned with terminals; empty = all 0
    ProblemTag tag = ProblemTag::N;

    void validate() const;  // throws InvalidInput
    int terminal_index(int node) const;  // -1 if not a terminal
    long long demand(int terminal_idx) const {
        return demands.empty() ? 0 : demands[terminal_idx];
    }
    long long max_cost() const;
};

// Point assignment V -> star 𝒯: each node sits on a terminal's leg
// (leg = terminal node id) or at the origin (leg = -1), at a depth
// counted in half-units.
struct Potential {
    std::vector<int> leg;
    std::vector<long long> h;  // D(0, p_i) in halves; 0 forces leg = -1

    static Potential zero(int n) { return {std::vector<int>(n, -1), std::vector<long long>(n, 0)}; }
    bool is_proper(const Instance& inst) const;
    bool integral() const;  // all heights even
};

// D(p_i, p_j) in halves
long long dist_halves(const Potential& p, int i, int j);

long long dual_halves(const Instance& inst, const Potential& p);
Rat dual_objective(const Instance& inst, const Potential& p);
// negated dual objective in halves; equals -dual_halves for potentials respecting
// the leg constraints (which the representation makes structural)
long long omega_halves(const Instance& inst, const Potential& p);

struct MultiflowPath {
    std::vector<int> nodes;  // terminal ... terminal, distinct endpoints
    std::vector<int> edge_ids;  // optional: instance edge per step
    long long lambda_halves = 0;
};

struct Multiflow {
    std::vector<MultiflowPath> paths;
    std::vector<long long> terminal_flow_halves(const Instance& inst) const;
    long long value_halves() const;  // 2 v_f = Σ λ in halves
};

// per-edge support in halves; throws CapacityViolated
std::vector<long long> flow_support(const Instance& inst, const Multiflow& f);
long long primal_cost_halves(const Instance& inst, const Multiflow& f);
Rat primal_cost(const Instance& inst, const Multiflow& f);

// Zero-cost edges become cost 1, the rest are scaled by 2C(Z)+1; returns
// (instance, scale).  scale == 1 means the instance was untouched.
std::pair<Instance, long long> perturb_costs(const Instance& inst);

struct FeasibilityReport {
    bool feasible = true;
    std::vector<long long> kappa;        // min (s, S∖{s})-cut per terminal
    int violated_terminal = -1;          // terminal index
    std::vector<char> witness_cut;       // node set X with c(δX) < r(s)
};
FeasibilityReport check_feasibility(const Instance& inst);

// minimal min (s, S∖{s})-cut values and source-side node sets
std::vector<std::pair<long long, std::vector<char>>> terminal_min_cuts(const Instance& inst);

struct DoubleCoverNetwork {
    enum class ArcKind { Pair, Internal, Terminal };
    struct Arc {
        int tail = 0, head = 0;
        long long lower = 0, upper = 0;  // upper == kInf means unbounded
        ArcKind kind = ArcKind::Pair;
        int edge = -1;      // instance edge for Pair arcs
        int terminal = -1;  // terminal index for Terminal arcs
    };
    static constexpr long long kInf = -1;

    struct Label {
        int node = -1;  // original node
        int sign = 0;   // +1 / -1
        int leg = -1;   // for U_0 copies: terminal id of the copy
    };

    int node_count = 0;
    std::vector<Arc> arcs;
    std::vector<Label> labels;
    std::vector<char> edge_class;               // 0 skipped, 1 E_=, 2 E_>
    std::vector<std::array<int, 2>> edge_arcs;  // arc ids per edge or {-1,-1}
    std::vector<int> terminal_arc;              // arc id of s⁻s⁺ per terminal
};

// Double-cover residual construction; requires positive costs and proper
// half-integral p.
DoubleCoverNetwork build_double_cover(const Instance& inst, const Potential& p);

// f_φ from an integral circulation on the double cover (capacities in
// original units, so cycle coefficients q give λ = q/2).
Multiflow extract_multiflow(const Instance& inst, const Potential& p,
                            const DoubleCoverNetwork& dcn,
                            const std::vector<long long>& phi);

struct VerifyReport {
    bool ok = true;
    std::string violation;
};
// Complementary-slackness conditions (1)-(4) plus exact primal = dual.
VerifyReport verify_optimality(const Instance& inst, const Multiflow& f,
                               const Potential& p);

struct DescentStep {
    long long omega_before = 0, omega_after = 0;  // halves, before properizing
    long long cut_capacity = 0, trivial_cut_capacity = 0;  // c(δX_j), c(δ{a⁺})
};

struct Solution {
    Multiflow flow;
    Potential potential;
    std::vector<long long> support_halves;
    long long value_halves = 0;  // 2 × optimal cost
    bool certified = false;
    long long perturb_scale = 1;
    std::vector<int> phase_steps;          // scaling solver
    std::vector<DescentStep> descent_steps;  // descent solver
};

Solution solve_scaling(const Instance& inst);  // throws Infeasible
Solution solve_descent(const Instance& inst);  // throws Infeasible

struct McmfReduction {
    Instance reduced;                // tag N
    std::vector<long long> kappa;
    std::vector<int> bar_node;       // s̄ id per terminal
};
McmfReduction reduce_mcmf(const Instance& inst);
// reduce, solve (scaling or descent), contract s s̄ back
Solution solve_mcmf(const Instance& inst, bool use_scaling);

Rat lovasz_cherkassky_value(const Instance& inst);

struct MultiwayResult {
    Rat relaxation;               // optimal relaxation value
    std::vector<int> assignment;  // per node: terminal id or -1 (center)
    std::vector<int> partition;   // per node: terminal id after rounding
    long long cut_value = 0;
};
MultiwayResult multiway_cut(const Instance& inst);

// Greedy integer-fixing of a half-integral optimal support (halves
// in, halves out); requires (x, p) jointly optimal and positive costs.
std::vector<long long> fix_half_integral(const Instance& inst,
                                         const std::vector<long long>& support_halves,
                                         const Potential& p);

}  // namespace treeflow
