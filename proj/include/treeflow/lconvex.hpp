#pragma once

#include <memory>
#include <vector>

#include "treeflow/ksubmod.hpp"
#include "treeflow/rational.hpp"
#include "treeflow/trees.hpp"

namespace treeflow {

// Convex function on a bounded integer interval [0, N], by value table.
// delta/delta2 use the even extension h(-1) := h(1) so the anchored
// D = 0 case stays well-defined.
struct OneDimConvex {
    std::vector<Rat> values;

    OneDimConvex() = default;
    explicit OneDimConvex(std::vector<Rat> v) : values(std::move(v)) {}

    int max_arg() const { return int(values.size()) - 1; }
    Rat at(int t) const {
        if (t < 0 || t > max_arg()) throw InvalidInput("OneDimConvex out of range");
        return values[t];
    }
    Rat delta(int t) const {  // h(t) - h(t-1)
        if (t == 0) return values.at(0) - values.at(1);
        return at(t) - at(t - 1);
    }
    Rat delta2(int t) const {  // h(t+1) - 2h(t) + h(t-1)
        if (t == 0) return (values.at(1) - values.at(0)) * Rat(2);
        return at(t + 1) - at(t) * Rat(2) + at(t - 1);
    }

    bool is_convex() const;
    bool is_nondecreasing() const;
    bool is_even() const;  // h(t) = (h(t-1)+h(t+1))/2 at odd t

    // (h(t-1)+h(t+1))/2 at odd arguments; drops the last entry when the
    // table length makes the top odd argument undefined.
    OneDimConvex evenized() const;
};

struct UnaryTreeTerm {
    int i = 0;
    std::vector<Rat> values;  // per tree vertex, may contain INF
    // provenance for multifacility terms f(d(. , anchor)); anchor < 0 when
    // the table is free-form
    int anchor = -1;
    OneDimConvex anchor_h;
};

struct PairTerm {
    int i = 0, j = 0;
    OneDimConvex h;  // contributes h(d(x_i, x_j))
};

struct AnchoredTerm {
    int i = 0, j = 0;
    int z = 0, w = 0;
    OneDimConvex h;  // contributes h(d(x_i, z) + d(x_j, w))
};

struct TwoSeparable {
    std::shared_ptr<const Tree> tree;
    int n = 0;
    std::vector<UnaryTreeTerm> unary;
    std::vector<PairTerm> pairs;
    std::vector<AnchoredTerm> anchored;
    Rat offset = Rat(0);

    // L-convexity preconditions: pair/anchored tables even nondecreasing
    // convex, anchors in one color class, unary tables convex on the tree
    // with connected finite part.  O(n^3) path checks; for small trees.
    void validate_lconvex() const;
};

// f(d(., z)) as a unary term with anchor provenance
UnaryTreeTerm make_distance_unary(const Tree& t, int i, int z, OneDimConvex h);

using TreePoint = std::vector<int>;

Rat eval(const TwoSeparable& g, const TreePoint& x);

// replace pair/anchored tables by their evenizations
TwoSeparable evenize(const TwoSeparable& g);

enum class Side { Ideal, Filter };

struct LocalProblem {
    TermSum f;                          // over the local box as S_k
    std::vector<std::vector<int>> box;  // box[i][label] = tree vertex, label 0 = x_i
};

// Exact k-submodular expression of g restricted to I(x) or F(x).
LocalProblem local_term_sum(const TwoSeparable& g, const TreePoint& x, Side side);

struct DescentTrace {
    std::vector<TreePoint> iterates;  // x0 .. xm
    std::vector<Side> sides;          // side chosen at each move
    std::vector<Rat> values;          // g at each iterate
    int steps() const { return int(iterates.size()) - 1; }
};

// Steepest descent over I(x) ∪ F(x); ties resolved toward Ideal, the
// canonical (minimal-cut) k-submodular minimizer within a side.
std::pair<TreePoint, DescentTrace> steepest_descent(const TwoSeparable& g,
                                                    const TreePoint& x0);

// Round a relaxation minimizer toward Black vertex y; valid only for
// multifacility objectives (anchored unary + pair terms, all nonnegative
// nondecreasing).
TreePoint two_approx_round(const TwoSeparable& omega, const TreePoint& xstar, int y);

// test helpers (exhaustive; throw TooLarge over budget)
std::pair<TreePoint, Rat> brute_force_tree_min(const TwoSeparable& g,
                                               bool black_only,
                                               long long budget = 2000000);
bool check_persistency(const TwoSeparable& omega, long long budget = 2000000);
bool check_proximity(const TwoSeparable& omega, long long budget = 2000000);

}  // namespace treeflow
