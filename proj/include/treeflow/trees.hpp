#pragma once

#include <utility>
#include <vector>

#include "treeflow/errors.hpp"

namespace treeflow {

enum class Color : char { Black, White };

// Finite tree with the proper 2-coloring induced by declaring the root
// Black.  The partial order has u < v exactly when u, v are adjacent and
// u is White, v is Black.
struct Tree {
    int n = 0;
    std::vector<std::vector<int>> adj;
    std::vector<Color> color;
    std::vector<int> parent;  // -1 at root
    std::vector<int> depth;

    Tree() = default;
    // edges must form a tree on {0..n-1}; root is colored Black.
    Tree(int n, const std::vector<std::pair<int, int>>& edges, int root = 0);

    bool black(int v) const { return color[v] == Color::Black; }

    int distance(int u, int v) const;

    // (bullet, circ): near-midpoints of the u-v path; bullet Black,
    // circ White and adjacent when d(u,v) is odd, equal otherwise.
    std::pair<int, int> midpoint_pair(int u, int v) const;

    // vertices of the u->v path, inclusive
    std::vector<int> path(int u, int v) const;

    // neighbor of u on the path toward v (u != v)
    int step_toward(int u, int v) const;

    // {x} ∪ neighbors if x is Black, else {x}; x first.
    std::vector<int> ideal(int x) const;
    // {x} ∪ neighbors if x is White, else {x}; x first.
    std::vector<int> filter(int x) const;
};

// Edge subdivision T*: original vertices keep their ids and become Black,
// each edge gets a White midpoint; distances double.
Tree subdivide(const Tree& t);

// Componentwise rounding toward the Black vertex y: Black components stay,
// White components move to their neighbor nearer y.
std::vector<int> round_toward(const Tree& t, const std::vector<int>& x, int y);

// Subdivided star hosting the scaled dual grid: origin (vertex 0, Black)
// plus `legs` legs of `height` rungs each.  Rung j on leg l has dense id
// 1 + l*height + (j-1).
struct StarTree {
    Tree tree;
    int legs = 0;
    int height = 0;
    int sigma = 0;  // grid spacing is 2^sigma, sigma >= -1

    int vertex(int leg, int rung) const {  // rung 0 = origin
        return rung == 0 ? 0 : 1 + leg * height + (rung - 1);
    }
    int leg_of(int v) const { return v == 0 ? -1 : (v - 1) / height; }
    int rung_of(int v) const { return v == 0 ? 0 : (v - 1) % height + 1; }
};

StarTree star_tree(int legs, int sigma, int height);

}  // namespace treeflow
