#include "kdsp/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_set>

#include "kdsp/errors.hpp"

namespace kdsp {

Graph::Graph(std::size_t n, std::span<const Edge> edges) : adjacency_(n) {
    edges_.reserve(edges.size());
    for (Edge e : edges) {
        if (e.u == e.v) throw InputError("self-loop at vertex " + std::to_string(e.u));
        if (e.v >= n) throw InputError("edge endpoint " + std::to_string(e.v) + " out of range");
        edges_.push_back(e);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    for (Edge e : edges_) {
        adjacency_[e.u].push_back(e.v);
        adjacency_[e.v].push_back(e.u);
    }
    for (auto& xs : adjacency_) std::sort(xs.begin(), xs.end());
}

bool Graph::has_edge(Vertex a, Vertex b) const {
    if (a >= adjacency_.size() || b >= adjacency_.size()) return false;
    const auto& xs = adjacency_[a];
    return std::binary_search(xs.begin(), xs.end(), b);
}

ShortestGraph::ShortestGraph(Graph graph, std::vector<std::vector<Level>> levels)
    : graph_(std::move(graph)), levels_(std::move(levels)) {
    const std::size_t n = graph_.vertex_count();
    for (const auto& row : levels_) {
        if (row.size() != n) throw InputError("level row size does not match vertex count");
        for (Level l : row)
            if (l < kUnlevelled) throw InputError("negative level");
    }
    dags_.reserve(levels_.size());
    reach_.reserve(levels_.size());
    for (Colour c = 0; c < levels_.size(); ++c) {
        Digraph dag(n);
        for (Edge e : graph_.edges()) {
            Level lu = levels_[c][e.u], lv = levels_[c][e.v];
            if (lu == kUnlevelled || lv == kUnlevelled) continue;
            if (lv == lu + 1) dag.add_arc(e.u, e.v);
            else if (lu == lv + 1) dag.add_arc(e.v, e.u);
        }
        dag.finalize();
        VertexSet unlevelled(n);
        for (Vertex v = 0; v < n; ++v)
            if (levels_[c][v] == kUnlevelled) unlevelled.set(v);
        reach_.push_back(transitive_closure(dag, &unlevelled));
        dags_.push_back(std::move(dag));
    }
}

bool ShortestGraph::has_colour(Colour c, Vertex a, Vertex b) const {
    if (!graph_.has_edge(a, b) || !levelled(c, a) || !levelled(c, b)) return false;
    return std::abs(level(c, a) - level(c, b)) == 1;
}

ValidationReport validate_shortest_graph(const ShortestGraph& sg) {
    ValidationReport report;
    for (Edge e : sg.graph().edges()) {
        bool crossing = false;
        for (Colour c = 0; c < sg.colour_count(); ++c) {
            if (!sg.levelled(c, e.u) || !sg.levelled(c, e.v)) continue;
            const Level gap = std::abs(sg.level(c, e.u) - sg.level(c, e.v));
            if (gap > 1) report.push_back({e, Violation::Clause::skips_level, c});
            if (gap == 1) crossing = true;
        }
        if (!crossing) report.push_back({e, Violation::Clause::no_colour, std::nullopt});
    }
    return report;
}

Order compare_in_colour(const ShortestGraph& sg, Colour c, Vertex u, Vertex v) {
    if (c >= sg.colour_count() || u >= sg.vertex_count() || v >= sg.vertex_count())
        return Order::incomparable;
    if (!sg.levelled(c, u) || !sg.levelled(c, v)) return Order::incomparable;
    const Level a = sg.level(c, u), b = sg.level(c, v);
    if (a < b) return Order::less;
    if (a > b) return Order::greater;
    return Order::equal;
}

bool is_colour_path(const ShortestGraph& sg, Colour c, std::span<const Vertex> vertices) {
    if (vertices.empty() || c >= sg.colour_count()) return false;
    for (Vertex v : vertices)
        if (v >= sg.vertex_count() || !sg.levelled(c, v)) return false;
    for (std::size_t q = 0; q + 1 < vertices.size(); ++q) {
        const Vertex a = vertices[q], b = vertices[q + 1];
        if (!sg.graph().has_edge(a, b)) return false;
        if (sg.level(c, b) != sg.level(c, a) + 1) return false;
    }
    // Strictly increasing levels rule out repeats.
    return true;
}

bool is_valid_partition(const PathPartition& partition) {
    const auto& whole = partition.whole.vertices;
    if (whole.empty() || partition.parts.empty()) return false;
    std::unordered_set<Vertex> seen(whole.begin(), whole.end());
    if (seen.size() != whole.size()) return false;

    std::vector<Vertex> joined;
    for (std::size_t q = 0; q < partition.parts.size(); ++q) {
        const auto& part = partition.parts[q].vertices;
        if (part.empty()) return false;
        if (q == 0) {
            joined = part;
            continue;
        }
        if (joined.back() != part.front()) return false;
        joined.insert(joined.end(), part.begin() + 1, part.end());
    }
    return joined == whole;
}

std::string to_string(const ComponentRef& ref) {
    return std::to_string(ref.colour_a) + " " + std::to_string(ref.colour_b) + " " +
           (ref.sign == Sign::plus ? "+" : "-") + " " + std::to_string(ref.index);
}

bool request_is_well_formed(const ShortestGraph& sg, const Request& request) {
    if (request.colour >= sg.colour_count()) return false;
    if (request.s >= sg.vertex_count() || request.t >= sg.vertex_count()) return false;
    if (!sg.levelled(request.colour, request.s) || !sg.levelled(request.colour, request.t))
        return false;
    for (const auto& ref : request.forbidden)
        if (ref.colour_a != request.colour && ref.colour_b != request.colour) return false;
    return true;
}

}  // namespace kdsp
