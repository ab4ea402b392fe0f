#include "covertime/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace covertime {

Graph::Graph(uint32_t n, std::vector<std::pair<uint32_t, uint32_t>> edges)
    : n_(n), edges_(std::move(edges)), adj_(n) {
    std::set<std::pair<uint32_t, uint32_t>> seen;
    for (uint32_t id = 0; id < edges_.size(); ++id) {
        auto [u, v] = edges_[id];
        if (u >= n_ || v >= n_) throw std::invalid_argument("graph: endpoint out of range");
        if (u == v) throw std::invalid_argument("graph: self-loop not allowed");
        auto key = std::minmax(u, v);
        if (!seen.insert({key.first, key.second}).second)
            throw std::invalid_argument("graph: duplicate edge");
        adj_[u].push_back({v, id});
        adj_[v].push_back({u, id});
    }
}

Graph Graph::cycle(uint32_t n) {
    if (n < 3) throw std::invalid_argument("cycle: need n >= 3");
    std::vector<std::pair<uint32_t, uint32_t>> e;
    e.reserve(n);
    for (uint32_t i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
    Graph g(n, std::move(e));
    g.tag_ = "cycle";
    return g;
}

Graph Graph::complete(uint32_t n) {
    if (n < 2) throw std::invalid_argument("complete: need n >= 2");
    std::vector<std::pair<uint32_t, uint32_t>> e;
    e.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = i + 1; j < n; ++j) e.push_back({i, j});
    Graph g(n, std::move(e));
    g.tag_ = "complete";
    return g;
}

Graph Graph::random_regular(uint32_t n, uint32_t d, RngStream& rng) {
    if (d >= n || (static_cast<uint64_t>(n) * d) % 2 != 0)
        throw std::invalid_argument("random_regular: need d < n and n*d even");
    const uint64_t stubs = static_cast<uint64_t>(n) * d;
    std::vector<uint32_t> perm(stubs);
    for (uint32_t attempt = 0; attempt < 1000000; ++attempt) {
        for (uint64_t i = 0; i < stubs; ++i) perm[i] = static_cast<uint32_t>(i / d);
        // Fisher-Yates over the stub list, then pair consecutive entries.
        for (uint64_t i = stubs - 1; i > 0; --i) {
            const uint64_t j = rng.uniform_below(i + 1);
            std::swap(perm[i], perm[j]);
        }
        bool simple = true;
        std::set<std::pair<uint32_t, uint32_t>> seen;
        std::vector<std::pair<uint32_t, uint32_t>> e;
        e.reserve(stubs / 2);
        for (uint64_t i = 0; i + 1 < stubs && simple; i += 2) {
            uint32_t u = perm[i], v = perm[i + 1];
            if (u == v) {
                simple = false;
                break;
            }
            auto key = std::minmax(u, v);
            if (!seen.insert({key.first, key.second}).second) {
                simple = false;
                break;
            }
            e.push_back({u, v});
        }
        if (!simple) continue;
        Graph g(n, std::move(e));
        if (!g.connected()) continue;
        g.tag_ = "random_regular";
        return g;
    }
    throw std::runtime_error("random_regular: rejection sampling did not converge");
}

Graph Graph::from_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list: " + path);
    std::vector<std::pair<uint32_t, uint32_t>> e;
    uint32_t maxv = 0;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        uint64_t u, v;
        if (!(ls >> u >> v)) continue;
        e.push_back({static_cast<uint32_t>(u), static_cast<uint32_t>(v)});
        maxv = std::max(maxv, static_cast<uint32_t>(std::max(u, v)));
    }
    if (e.empty()) throw std::runtime_error("edge list is empty: " + path);
    return Graph(maxv + 1, std::move(e));
}

bool Graph::connected() const {
    if (n_ == 0) return false;
    std::vector<uint8_t> seen(n_, 0);
    std::vector<uint32_t> stack{0};
    seen[0] = 1;
    uint32_t visited = 1;
    while (!stack.empty()) {
        const uint32_t v = stack.back();
        stack.pop_back();
        for (auto [w, id] : adj_[v]) {
            (void)id;
            if (!seen[w]) {
                seen[w] = 1;
                ++visited;
                stack.push_back(w);
            }
        }
    }
    return visited == n_;
}

bool Graph::regular() const {
    if (n_ == 0) return false;
    for (uint32_t v = 1; v < n_; ++v)
        if (adj_[v].size() != adj_[0].size()) return false;
    return true;
}

std::vector<uint32_t> sample_spanning_tree(const Graph& g, RngStream& rng,
                                           std::vector<int64_t>& scratch_next,
                                           std::vector<uint8_t>& scratch_in_tree) {
    const uint32_t n = g.num_vertices();
    scratch_next.assign(n, -1);
    scratch_in_tree.assign(n, 0);
    scratch_in_tree[0] = 1;
    std::vector<uint32_t> tree_edges;
    tree_edges.reserve(n - 1);
    for (uint32_t start = 1; start < n; ++start) {
        if (scratch_in_tree[start]) continue;
        uint32_t u = start;
        while (!scratch_in_tree[u]) {
            const auto& row = g.adjacency(u);
            const auto& step = row[rng.uniform_below(row.size())];
            scratch_next[u] = (static_cast<int64_t>(step.first) << 32) | step.second;
            u = step.first;
        }
        u = start;
        while (!scratch_in_tree[u]) {
            scratch_in_tree[u] = 1;
            const int64_t packed = scratch_next[u];
            tree_edges.push_back(static_cast<uint32_t>(packed & 0xFFFFFFFF));
            u = static_cast<uint32_t>(packed >> 32);
        }
    }
    return tree_edges;
}

}  // namespace covertime
