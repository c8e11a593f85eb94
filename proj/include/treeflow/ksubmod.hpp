#pragma once

#include <functional>
#include <vector>

#include "treeflow/flow_engine.hpp"
#include "treeflow/rational.hpp"

namespace treeflow {

// Product domain S_{k1} x ... x S_{kn}: coordinate i takes values
// 0..k_i, where 0 is the unique minimum and nonzero values are
// pairwise incomparable.
struct SkDomain {
    std::vector<int> arities;
    int size() const { return int(arities.size()); }
};

using SkPoint = std::vector<int>;

// u ∧ v and u ⊔ v per coordinate: meet is 0 unless equal; join of
// incomparable nonzero values collapses to 0.
SkPoint meet(const SkPoint& x, const SkPoint& y);
SkPoint square_join(const SkPoint& x, const SkPoint& y);

struct BasicTerm {
    enum class Kind { UnaryTable, Epsilon, Theta, DeltaSigma, Mu };
    Kind kind;
    int i = -1, j = -1;
    int a = 0, a2 = 0;          // Epsilon/Theta: a; Mu: (a, a2)
    std::vector<int> sigma;     // DeltaSigma: sigma[u], sigma[0] == 0
    std::vector<Rat> table;     // UnaryTable: values for u = 0..k_i
    Rat weight = Rat(1);

    static BasicTerm epsilon(int i, int a, Rat w);
    static BasicTerm theta(int i, int a, Rat w);
    static BasicTerm mu(int i, int j, int a, int a2, Rat w);
    static BasicTerm delta(int i, int j, std::vector<int> sigma, Rat w);
    static BasicTerm unary(int i, std::vector<Rat> table, Rat w = Rat(1));

    // value of the unweighted term at a point (coordinates already plugged)
    Rat raw(int u, int v = 0) const;
};

struct TermSum {
    SkDomain domain;
    std::vector<BasicTerm> terms;
    Rat offset = Rat(0);

    void validate() const;  // arity/range/weight checks, throws InvalidInput
};

Rat eval(const TermSum& f, const SkPoint& x);

// Decomposition of a one-variable table into
//   offset + w_theta * theta_a + sum_b w_b * eps_b
// plus hard data: values forbidden by infinite entries, or the whole
// coordinate forced when table[0] is infinite.
struct UnaryDecomp {
    Rat offset = Rat(0);
    int theta_a = 0;            // 0 means no theta term
    Rat theta_w = Rat(0);
    std::vector<std::pair<int, Rat>> eps;  // (b, weight)
    std::vector<int> forbidden;            // values with infinite entries
    int forced = -1;                       // >=0: coordinate pinned there
};

UnaryDecomp normalize_unary(const std::vector<Rat>& table);

// Representation network of a TermSum: min cuts <-> domain points via
// phi(x) = {s} ∪ {v_i^{x_i} : x_i != 0}.
struct RepNetwork {
    DirectedNetwork net;
    int s = 0, t = 1;
    std::vector<std::vector<int>> vnode;  // vnode[i][u-1], -1 if coordinate fixed
    long long scale = 1;                  // capacities = scale * rational weights
    Rat K = Rat(0);                       // f(x) = c(δφ(x))/scale + K
    std::vector<int> fixed;               // per coordinate: forced value or -1
    SkDomain domain;

    // capacity of the cut whose source side realizes point x
    long long cut_of_point(const SkPoint& x) const;
    SkPoint point_of_cut(const std::vector<char>& side) const;
};

RepNetwork build_network(const TermSum& f);

struct MinResult {
    SkPoint point;
    Rat value;
};

// Exact minimization by one max-flow on the representation network,
// with the minimal min cut as the canonical minimizer.
MinResult minimize(const TermSum& f);

MinResult brute_force_min(const TermSum& f, long long budget = 1000000);

// Exhaustive pairwise check of f(x)+f(y) >= f(x∧y)+f(x⊔y).
bool check_ksubmodular(const std::function<Rat(const SkPoint&)>& f,
                       const SkDomain& dom, long long budget = 1000000);

// iterate all points of the domain
void for_each_point(const SkDomain& dom, const std::function<void(const SkPoint&)>& fn);

}  // namespace treeflow
