#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cardest/histogram.hpp"
#include "cardest/relation.hpp"

namespace cardest {

// Symmetric matrix of pairwise mutual-information weights (nats).
struct MiGraph {
    std::size_t n = 0;
    std::vector<double> weights;  // n*n, diagonal unused

    double at(std::size_t i, std::size_t j) const { return weights[i * n + j]; }
    void set(std::size_t i, std::size_t j, double w) {
        weights[i * n + j] = w;
        weights[j * n + i] = w;
    }
};

struct TreeEdge {
    std::size_t a;
    std::size_t b;
};

// Rooted tree over attribute indices; parent[root] == -1.
struct TreeStructure {
    std::size_t root = 0;
    std::vector<int> parent;

    std::size_t size() const { return parent.size(); }
};

// MI between two columns on their coarse histogram cells: each value maps to
// its own MCV cell or to the containing bucket, and the sum runs over the
// empirical joint cell distribution. Zero-probability terms contribute
// nothing; tiny negative rounding residue is clamped away.
inline double mutual_information(const std::vector<Value>& col_a, const std::vector<Value>& col_b,
                                 const EndBiasedHistogram& hist_a,
                                 const EndBiasedHistogram& hist_b) {
    if (col_a.size() != col_b.size())
        throw std::invalid_argument("mutual_information: column length mismatch");
    if (col_a.empty()) throw std::invalid_argument("mutual_information: empty columns");

    const std::size_t na = hist_a.cell_count(), nb = hist_b.cell_count();
    std::vector<double> joint(na * nb, 0.0);
    const double w = 1.0 / static_cast<double>(col_a.size());
    for (std::size_t r = 0; r < col_a.size(); ++r) {
        const auto ca = hist_a.locate(col_a[r]);
        const auto cb = hist_b.locate(col_b[r]);
        if (!ca || !cb)
            throw std::invalid_argument("mutual_information: value not covered by binning histogram");
        joint[*ca * nb + *cb] += w;
    }

    std::vector<double> pa(na, 0.0), pb(nb, 0.0);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) {
            pa[i] += joint[i * nb + j];
            pb[j] += joint[i * nb + j];
        }

    double mi = 0.0;
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) {
            const double pxy = joint[i * nb + j];
            if (pxy > 0.0) mi += pxy * std::log(pxy / (pa[i] * pb[j]));
        }
    return std::max(mi, 0.0);
}

// Pairwise MI over the sample's columns, bucketized with the same (k, j)
// configuration the CPDs use.
inline MiGraph build_mi_graph(const Relation& sample, std::size_t k, std::size_t j) {
    const std::size_t n = sample.schema.size();
    if (n < 2) throw std::invalid_argument("build_mi_graph: need at least 2 attributes");
    if (sample.row_count == 0) throw std::invalid_argument("build_mi_graph: empty sample");

    std::vector<EndBiasedHistogram> hists;
    hists.reserve(n);
    for (std::size_t i = 0; i < n; ++i) hists.push_back(build_end_biased(sample.columns[i], k, j));

    MiGraph g;
    g.n = n;
    g.weights.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t jj = i + 1; jj < n; ++jj)
            g.set(i, jj, mutual_information(sample.columns[i], sample.columns[jj], hists[i], hists[jj]));
    return g;
}

// Maximum-total-weight spanning tree, Kruskal over edges sorted by
// (weight desc, index pair asc). The deterministic order fixes tie-breaking
// across runs and platforms.
inline std::vector<TreeEdge> max_spanning_tree(const MiGraph& g) {
    if (g.n < 2) throw std::invalid_argument("max_spanning_tree: need at least 2 nodes");

    struct E {
        double w;
        std::size_t a, b;
    };
    std::vector<E> edges;
    edges.reserve(g.n * (g.n - 1) / 2);
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = i + 1; j < g.n; ++j) edges.push_back({g.at(i, j), i, j});
    std::sort(edges.begin(), edges.end(), [](const E& x, const E& y) {
        if (x.w != y.w) return x.w > y.w;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });

    std::vector<std::size_t> group(g.n);
    std::iota(group.begin(), group.end(), 0);
    auto find = [&](std::size_t x) {
        while (group[x] != x) {
            group[x] = group[group[x]];
            x = group[x];
        }
        return x;
    };

    std::vector<TreeEdge> tree;
    tree.reserve(g.n - 1);
    for (const E& e : edges) {
        const std::size_t ra = find(e.a), rb = find(e.b);
        if (ra == rb) continue;
        group[ra] = rb;
        tree.push_back({e.a, e.b});
        if (tree.size() == g.n - 1) break;
    }
    return tree;
}

// Directs an undirected spanning tree away from the chosen root.
inline TreeStructure root_tree(const std::vector<TreeEdge>& edges, std::size_t root,
                               std::size_t node_count) {
    if (root >= node_count) throw std::invalid_argument("root_tree: root out of range");
    if (edges.size() + 1 != node_count)
        throw std::invalid_argument("root_tree: edge count does not match a spanning tree");

    std::vector<std::vector<std::size_t>> adj(node_count);
    for (const TreeEdge& e : edges) {
        if (e.a >= node_count || e.b >= node_count)
            throw std::invalid_argument("root_tree: edge endpoint out of range");
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }

    TreeStructure t;
    t.root = root;
    t.parent.assign(node_count, -1);
    std::vector<char> seen(node_count, 0);
    std::vector<std::size_t> stack{root};
    seen[root] = 1;
    std::size_t visited = 1;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v : adj[u]) {
            if (seen[v]) continue;
            seen[v] = 1;
            ++visited;
            t.parent[v] = static_cast<int>(u);
            stack.push_back(v);
        }
    }
    // n-1 edges + connected == tree.
    if (visited != node_count)
        throw std::invalid_argument("root_tree: edges do not form a connected tree");
    return t;
}

}  // namespace cardest
