#include "jumpforge/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "jumpforge/errors.hpp"

namespace jumpforge {

GraphSpec::GraphSpec(int n_vertices, std::vector<std::pair<int, int>> edges)
    : n_vertices_(n_vertices), edges_(std::move(edges)) {
    if (n_vertices < 1) throw ConfigError("graph needs at least one vertex");
    std::set<std::pair<int, int>> seen;
    for (const auto& [u, v] : edges_) {
        if (u < 0 || v < 0 || u >= n_vertices || v >= n_vertices)
            throw ConfigError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range");
        if (u == v) throw ConfigError("self-loop on vertex " + std::to_string(u));
        if (!seen.insert({std::min(u, v), std::max(u, v)}).second)
            throw ConfigError("duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    }
}

int GraphSpec::degree(int v) const {
    return static_cast<int>(std::count_if(edges_.begin(), edges_.end(),
                                          [v](const auto& e) { return e.first == v || e.second == v; }));
}

std::vector<int> GraphSpec::neighbors(int v) const {
    std::vector<int> out;
    for (const auto& [a, b] : edges_) {
        if (a == v) out.push_back(b);
        if (b == v) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool GraphSpec::connected() const {
    std::vector<int> parent(static_cast<std::size_t>(n_vertices_));
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const auto& [a, b] : edges_) parent[root(a)] = root(b);
    const int r0 = root(0);
    for (int v = 1; v < n_vertices_; ++v)
        if (root(v) != r0) return false;
    return true;
}

GraphSpec parse_edge_list(std::istream& in) {
    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> seen;
    int max_vertex = -1;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long long u = 0, v = 0;
        if (!(ls >> u)) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw ParseError(lineno, "expected a vertex pair 'u v'");
            continue;
        }
        std::string rest;
        if (!(ls >> v) || (ls >> rest)) throw ParseError(lineno, "expected exactly two vertex indices");
        if (u < 0 || v < 0 || u > 1'000'000 || v > 1'000'000)
            throw ParseError(lineno, "vertex index out of range");
        if (u == v) throw ParseError(lineno, "self-loop on vertex " + std::to_string(u));
        const std::pair<int, int> e{static_cast<int>(std::min(u, v)), static_cast<int>(std::max(u, v))};
        if (!seen.insert(e).second) throw ParseError(lineno, "duplicate edge");
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
        max_vertex = std::max({max_vertex, static_cast<int>(u), static_cast<int>(v)});
    }
    if (edges.empty()) throw ParseError(lineno, "edge list is empty");
    return GraphSpec(max_vertex + 1, std::move(edges));
}

GraphSpec path_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    return GraphSpec(n, std::move(edges));
}

GraphSpec grid_graph(int rows, int cols) {
    if (rows < 1 || cols < 1) throw ConfigError("grid dimensions must be positive");
    std::vector<std::pair<int, int>> edges;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const int v = r * cols + c;
            if (c + 1 < cols) edges.emplace_back(v, v + 1);
            if (r + 1 < rows) edges.emplace_back(v, v + cols);
        }
    return GraphSpec(rows * cols, std::move(edges));
}

std::vector<GraphSpec> connected_graphs(int n) {
    if (n < 1 || n > 5) throw ConfigError("graph enumeration supports 1 to 5 vertices");
    std::vector<std::pair<int, int>> slots;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) slots.emplace_back(u, v);
    std::vector<int> perm(static_cast<std::size_t>(n));

    // Canonical form: smallest edge bitmask over all vertex relabelings.
    auto canonical = [&](unsigned mask) {
        std::iota(perm.begin(), perm.end(), 0);
        unsigned best = ~0u;
        do {
            unsigned m = 0;
            for (std::size_t s = 0; s < slots.size(); ++s) {
                if (!(mask >> s & 1u)) continue;
                const int p = perm[slots[s].first], q = perm[slots[s].second];
                const std::pair<int, int> e{std::min(p, q), std::max(p, q)};
                for (std::size_t t = 0; t < slots.size(); ++t)
                    if (slots[t] == e) m |= 1u << t;
            }
            best = std::min(best, m);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    };

    std::set<unsigned> classes;
    std::vector<GraphSpec> out;
    for (unsigned mask = 0; mask < (1u << slots.size()); ++mask) {
        std::vector<std::pair<int, int>> edges;
        for (std::size_t s = 0; s < slots.size(); ++s)
            if (mask >> s & 1u) edges.push_back(slots[s]);
        GraphSpec g(n, edges);
        if (!g.connected()) continue;
        if (classes.insert(canonical(mask)).second) out.push_back(std::move(g));
    }
    return out;
}

}  // namespace jumpforge
