#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "covertime/rng.hpp"

namespace covertime {

/// Simple undirected graph with edge ids. Adjacency rows carry (neighbour,
/// edge id) so spanning-tree sampling can map walks back to edges.
class Graph {
  public:
    Graph() = default;
    Graph(uint32_t n, std::vector<std::pair<uint32_t, uint32_t>> edges);

    static Graph cycle(uint32_t n);
    static Graph complete(uint32_t n);
    /// Uniform simple d-regular graph via configuration-model rejection.
    static Graph random_regular(uint32_t n, uint32_t d, RngStream& rng);
    static Graph from_edge_list_file(const std::string& path);

    uint32_t num_vertices() const { return n_; }
    uint32_t num_edges() const { return static_cast<uint32_t>(edges_.size()); }
    const std::vector<std::pair<uint32_t, uint32_t>>& edges() const { return edges_; }
    const std::vector<std::pair<uint32_t, uint32_t>>& adjacency(uint32_t v) const {
        return adj_[v];
    }
    uint32_t degree(uint32_t v) const { return static_cast<uint32_t>(adj_[v].size()); }

    bool connected() const;
    bool regular() const;

    /// Generator tag when built from one ("cycle", "complete", "random_regular", "").
    const std::string& tag() const { return tag_; }

  private:
    uint32_t n_ = 0;
    std::vector<std::pair<uint32_t, uint32_t>> edges_;
    std::vector<std::vector<std::pair<uint32_t, uint32_t>>> adj_;
    std::string tag_;
};

/// Union-find with path halving; used by the edge-process experiments.
class UnionFind {
  public:
    explicit UnionFind(uint32_t n) : parent_(n), components_(n) {
        for (uint32_t i = 0; i < n; ++i) parent_[i] = i;
    }

    uint32_t find(uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns true when the edge merged two components.
    bool unite(uint32_t a, uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[a] = b;
        --components_;
        return true;
    }

    uint32_t components() const { return components_; }

  private:
    std::vector<uint32_t> parent_;
    uint32_t components_;
};

/// Samples a uniform spanning tree by loop-erased random walks and returns
/// its edge ids. `scratch_next` and `scratch_in_tree` must have num_vertices
/// entries; they are reset internally so callers can reuse them across draws.
std::vector<uint32_t> sample_spanning_tree(const Graph& g, RngStream& rng,
                                           std::vector<int64_t>& scratch_next,
                                           std::vector<uint8_t>& scratch_in_tree);

}  // namespace covertime
