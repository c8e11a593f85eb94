#include "treeflow/trees.hpp"

#include <algorithm>
#include <cassert>
#include <queue>

namespace treeflow {

Tree::Tree(int n, const std::vector<std::pair<int, int>>& edges, int root) : n(n) {
    if (n <= 0) throw InvalidInput("empty tree");
    if (int(edges.size()) != n - 1) throw InvalidInput("tree needs n-1 edges");
    adj.assign(n, {});
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n || u == v)
            throw InvalidInput("bad tree edge");
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    color.assign(n, Color::Black);
    parent.assign(n, -2);
    depth.assign(n, 0);
    std::queue<int> q;
    parent[root] = -1;
    q.push(root);
    int seen = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        ++seen;
        color[u] = depth[u] % 2 == 0 ? Color::Black : Color::White;
        for (int v : adj[u])
            if (parent[v] == -2) {
                parent[v] = u;
                depth[v] = depth[u] + 1;
                q.push(v);
            }
    }
    if (seen != n) throw InvalidInput("edges do not form a tree");
}

int Tree::distance(int u, int v) const {
    int d = 0;
    while (u != v) {
        if (depth[u] < depth[v]) std::swap(u, v);
        u = parent[u];
        ++d;
    }
    return d;
}

std::vector<int> Tree::path(int u, int v) const {
    std::vector<int> up, down;
    while (u != v) {
        if (depth[u] >= depth[v]) {
            up.push_back(u);
            u = parent[u];
        } else {
            down.push_back(v);
            v = parent[v];
        }
    }
    up.push_back(u);
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
}

int Tree::step_toward(int u, int v) const {
    assert(u != v);
    return path(u, v)[1];
}

std::pair<int, int> Tree::midpoint_pair(int u, int v) const {
    auto p = path(u, v);
    int d = int(p.size()) - 1;
    if (d % 2 == 0) {
        int m = p[d / 2];
        return {m, m};
    }
    int a = p[d / 2], b = p[d / 2 + 1];  // adjacent, one Black one White
    if (!black(a)) std::swap(a, b);
    return {a, b};  // (bullet Black, circ White)
}

std::vector<int> Tree::ideal(int x) const {
    std::vector<int> r{x};
    if (black(x)) r.insert(r.end(), adj[x].begin(), adj[x].end());
    return r;
}

std::vector<int> Tree::filter(int x) const {
    std::vector<int> r{x};
    if (!black(x)) r.insert(r.end(), adj[x].begin(), adj[x].end());
    return r;
}

Tree subdivide(const Tree& t) {
    std::vector<std::pair<int, int>> edges;
    int next = t.n;
    for (int u = 0; u < t.n; ++u)
        for (int v : t.adj[u])
            if (u < v) {
                edges.push_back({u, next});
                edges.push_back({next, v});
                ++next;
            }
    // root at the original root so original vertices are all Black
    int root = 0;
    for (int v = 0; v < t.n; ++v)
        if (t.parent[v] == -1) root = v;
    Tree r(next, edges, root);
    for (int v = 0; v < t.n; ++v) assert(r.black(v));
    return r;
}

std::vector<int> round_toward(const Tree& t, const std::vector<int>& x, int y) {
    if (!t.black(y)) throw InvalidInput("round target must be Black");
    std::vector<int> z = x;
    for (int& xi : z)
        if (!t.black(xi)) xi = (xi == y) ? y : t.step_toward(xi, y);
    return z;
}

StarTree star_tree(int legs, int sigma, int height) {
    if (legs < 1 || height < 1 || sigma < -1) throw InvalidInput("bad star tree");
    std::vector<std::pair<int, int>> edges;
    StarTree st;
    st.legs = legs;
    st.height = height;
    st.sigma = sigma;
    for (int l = 0; l < legs; ++l) {
        edges.push_back({0, st.vertex(l, 1)});
        for (int j = 1; j < height; ++j)
            edges.push_back({st.vertex(l, j), st.vertex(l, j + 1)});
    }
    st.tree = Tree(1 + legs * height, edges, /*root=*/0);
    return st;
}

}  // namespace treeflow
