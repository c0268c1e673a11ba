#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kdsp/digraph.hpp"

namespace kdsp {

using Colour = std::uint32_t;
using Level = std::int32_t;
inline constexpr Level kUnlevelled = -1;

/// Undirected edge, stored with u < v.
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    Edge() = default;
    Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

    auto operator<=>(const Edge&) const = default;
};

/// Simple undirected graph on vertices 0..n-1.
class Graph {
public:
    Graph() = default;
    /// Deduplicates edges. Throws InputError on self-loops or out-of-range endpoints.
    Graph(std::size_t n, std::span<const Edge> edges);

    std::size_t vertex_count() const { return adjacency_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    std::span<const Vertex> neighbours(Vertex v) const { return adjacency_[v]; }
    bool has_edge(Vertex a, Vertex b) const;

    bool operator==(const Graph& other) const { return edges_ == other.edges_ && vertex_count() == other.vertex_count(); }

private:
    std::vector<Edge> edges_;
    std::vector<std::vector<Vertex>> adjacency_;
};

/// A graph with k level partitions, one per colour. Levels are not validated on
/// construction (see validate_shortest_graph); only their shape is.
class ShortestGraph {
public:
    ShortestGraph() = default;
    /// levels[c][v] is the colour-c level of v or kUnlevelled.
    ShortestGraph(Graph graph, std::vector<std::vector<Level>> levels);

    const Graph& graph() const { return graph_; }
    std::size_t vertex_count() const { return graph_.vertex_count(); }
    std::size_t colour_count() const { return levels_.size(); }

    Level level(Colour c, Vertex v) const { return levels_[c][v]; }
    bool levelled(Colour c, Vertex v) const { return levels_[c][v] != kUnlevelled; }
    const std::vector<Level>& levels(Colour c) const { return levels_[c]; }
    const std::vector<std::vector<Level>>& all_levels() const { return levels_; }

    /// Whether {a,b} is an edge of colour c (levels differ by exactly one).
    bool has_colour(Colour c, Vertex a, Vertex b) const;

    /// Edges of colour c oriented from the lower to the higher level.
    const Digraph& colour_dag(Colour c) const { return dags_[c]; }
    /// reach(c).test(u, v): a colour-c path leads from u to v.
    const BitMatrix& reach(Colour c) const { return reach_[c]; }

    bool operator==(const ShortestGraph& other) const {
        return graph_ == other.graph_ && levels_ == other.levels_;
    }

private:
    Graph graph_;
    std::vector<std::vector<Level>> levels_;
    std::vector<Digraph> dags_;
    std::vector<BitMatrix> reach_;
};

struct Violation {
    enum class Clause {
        skips_level,     ///< some colour separates the endpoints by more than one level
        no_colour,       ///< no colour separates the endpoints by exactly one level
    };
    Edge edge;
    Clause clause;
    std::optional<Colour> colour;  ///< the offending colour for skips_level
};

using ValidationReport = std::vector<Violation>;

ValidationReport validate_shortest_graph(const ShortestGraph& sg);

enum class Order { less, equal, greater, incomparable };

Order compare_in_colour(const ShortestGraph& sg, Colour c, Vertex u, Vertex v);

/// A vertex sequence intended to be monotone in one colour, low level first.
struct ColouredPath {
    Colour colour = 0;
    std::vector<Vertex> vertices;

    std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
    Vertex front() const { return vertices.front(); }
    Vertex back() const { return vertices.back(); }
    bool operator==(const ColouredPath&) const = default;
};

bool is_colour_path(const ShortestGraph& sg, Colour c, std::span<const Vertex> vertices);
inline bool is_colour_path(const ShortestGraph& sg, const ColouredPath& p) {
    return is_colour_path(sg, p.colour, p.vertices);
}

struct PathPartition {
    ColouredPath whole;
    std::vector<ColouredPath> parts;
};

/// Parts chain end-to-start, concatenate to `whole`, and share no vertex beyond
/// the chaining points.
bool is_valid_partition(const PathPartition& partition);

enum class Sign { plus, minus };

/// Names a bi-coloured component: the index-th component of G^{sign}_{a,b},
/// in the order produced by `components`.
struct ComponentRef {
    Colour colour_a = 0;
    Colour colour_b = 0;
    Sign sign = Sign::plus;
    std::uint32_t index = 0;

    auto operator<=>(const ComponentRef&) const = default;
};

std::string to_string(const ComponentRef& ref);

struct Request {
    Vertex s = 0;
    Vertex t = 0;
    Colour colour = 0;
    std::vector<ComponentRef> forbidden;

    bool operator==(const Request&) const = default;
};

/// Checks the Request invariants apart from forbidden-list membership, which
/// needs the component catalog.
bool request_is_well_formed(const ShortestGraph& sg, const Request& request);

}  // namespace kdsp
