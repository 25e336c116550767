#pragma once

#include <istream>
#include <utility>
#include <vector>

namespace jumpforge {

/// Simple undirected graph on vertices 0..n-1. Edge (u, v) keeps its listed
/// orientation: u is the first BS input when the edge is entangled.
class GraphSpec {
public:
    GraphSpec() = default;
    /// Throws ConfigError on self-loops, duplicates or out-of-range vertices.
    GraphSpec(int n_vertices, std::vector<std::pair<int, int>> edges);

    int n_vertices() const noexcept { return n_vertices_; }
    const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
    std::size_t n_edges() const noexcept { return edges_.size(); }

    int degree(int v) const;
    std::vector<int> neighbors(int v) const;
    bool connected() const;

private:
    int n_vertices_ = 0;
    std::vector<std::pair<int, int>> edges_;
};

/// Edge list text: one "u v" pair per line, 0-indexed, '#' starts a comment.
/// The vertex count is the largest index plus one. Errors carry line numbers.
GraphSpec parse_edge_list(std::istream& in);

GraphSpec path_graph(int n);
/// rows x cols nearest-neighbour grid, vertex r * cols + c.
GraphSpec grid_graph(int rows, int cols);

/// One representative per isomorphism class of connected graphs on n vertices
/// (n <= 5).
std::vector<GraphSpec> connected_graphs(int n);

}  // namespace jumpforge
