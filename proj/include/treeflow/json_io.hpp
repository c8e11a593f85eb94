#pragma once

#include <string>

#include "treeflow/ksubmod.hpp"
#include "treeflow/lconvex.hpp"
#include "treeflow/multiflow.hpp"

namespace treeflow {

// Exact rational rendering: "p", "p/q", or "inf".
Rat rat_from_string(const std::string& s);  // throws InvalidInput

// { "n":, "terminals": [...], "edges": [{"u","v","cap","cost"}],
//   "demands": {"<terminal>": r}, "problem": "N"|"MCMF"|"MULTIWAY" }
Instance instance_from_json(const std::string& text);  // throws InvalidInput
std::string instance_to_json(const Instance& inst);

// { "value_halves":, "value":, "paths": [{"nodes", "lambda_halves"}],
//   "support_halves": {"<edge-index>":}, "potential":
//   [{"leg": id|null, "height_halves":}], "certified": }
std::string solution_to_json(const Solution& sol);
// reads flow + potential + claims back (edge ids of paths are re-derived)
Solution solution_from_json(const std::string& text);

// { "arities": [...], "terms": [{"kind", ..., "weight": "p/q"}],
//   "offset": "p/q" }
TermSum term_sum_from_json(const std::string& text);
std::string term_sum_to_json(const TermSum& f);

// { "tree": {"n", "edges": [[u,v]...], "root"}, "n",
//   "unary": [{"i", "values": [...]}] , "pairs": [{"i","j","h": [...]}],
//   "anchored": [{"i","j","z","w","h": [...]}], "offset" }
TwoSeparable two_separable_from_json(const std::string& text);
std::string two_separable_to_json(const TwoSeparable& g);

}  // namespace treeflow
