#pragma once

#include <utility>
#include <vector>

#include "treeflow/lconvex.hpp"
#include "treeflow/multiflow.hpp"
#include "treeflow/rational.hpp"

namespace treeflow {

// Brute-force ground truth.  Written against the problem definitions only;
// shares nothing with the solvers beyond the data types and the generic
// max-flow routine.
struct OracleBudget {
    long long max_enumeration = 10'000'000;
};

struct LBruteResult {
    std::vector<long long> support_halves;  // lexicographically first optimum
    Rat value;
};
// Exhaustive problem (L): minimize Σ a(e) x(e) over half-integral supports
// 0 ≤ x ≤ c with x(δX) ≥ r(s) on every (s, S∖{s})-cut.  Throws TooLarge
// when Π(2c(e)+1) exceeds the budget.
LBruteResult brute_force_L(const Instance& inst, OracleBudget budget = {});

// Cut-constraint check for a fixed support, by node-subset enumeration
// (n ≤ 12) or by per-terminal min-cut; exposed so tests can cross-check
// the two paths against each other.
bool support_feasible(const Instance& inst, const std::vector<long long>& x_halves,
                      bool via_min_cut);

// Exhaustive minimization of a 2-separable objective over Tⁿ, with its own
// evaluator.  Lexicographically first minimizer.
std::pair<TreePoint, Rat> brute_force_lconvex(const TwoSeparable& g,
                                              OracleBudget budget = {});

struct MultiwayBrute {
    std::vector<int> partition;  // terminal id per node
    long long value = 0;
};
// Exhaustive multiway cut over all kⁿ assignments of non-terminals.
MultiwayBrute brute_force_multiway(const Instance& inst, OracleBudget budget = {});

}  // namespace treeflow
