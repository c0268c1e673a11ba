#include "kdsp/layering.hpp"

#include <algorithm>
#include <cstdlib>
#include <queue>
#include <unordered_set>

#include "kdsp/errors.hpp"

namespace kdsp {

std::vector<Level> bfs_levels(const Graph& g, Vertex source) {
    if (source >= g.vertex_count()) throw PreconditionViolation("BFS source out of range");
    std::vector<Level> level(g.vertex_count(), kUnlevelled);
    std::queue<Vertex> frontier;
    level[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
        Vertex u = frontier.front();
        frontier.pop();
        for (Vertex w : g.neighbours(u)) {
            if (level[w] != kUnlevelled) continue;
            level[w] = level[u] + 1;
            frontier.push(w);
        }
    }
    return level;
}

ShortestGraph build_shortest_graph(const Graph& g, std::span<const Vertex> sources) {
    std::vector<std::vector<Level>> levels;
    levels.reserve(sources.size());
    for (Vertex s : sources) levels.push_back(bfs_levels(g, s));

    std::vector<Edge> kept;
    for (Edge e : g.edges()) {
        const bool crosses = std::any_of(levels.begin(), levels.end(), [&](const auto& row) {
            return row[e.u] != kUnlevelled && row[e.v] != kUnlevelled &&
                   std::abs(row[e.u] - row[e.v]) == 1;
        });
        if (crosses) kept.push_back(e);
    }
    return ShortestGraph(Graph(g.vertex_count(), kept), std::move(levels));
}

std::vector<Vertex> oriented_in_colour(const ShortestGraph& sg, Colour c,
                                       std::span<const Vertex> vertices) {
    std::vector<Vertex> result(vertices.begin(), vertices.end());
    if (result.size() > 1 && sg.level(c, result.front()) > sg.level(c, result.back()))
        std::reverse(result.begin(), result.end());
    return result;
}

namespace {

bool is_simple_path(const Graph& g, std::span<const Vertex> path) {
    if (path.empty()) return false;
    std::unordered_set<Vertex> seen;
    for (Vertex v : path)
        if (v >= g.vertex_count() || !seen.insert(v).second) return false;
    for (std::size_t q = 0; q + 1 < path.size(); ++q)
        if (!g.has_edge(path[q], path[q + 1])) return false;
    return true;
}

}  // namespace

bool classify_shortest_path(const ShortestGraph& sg, Colour c, std::span<const Vertex> path) {
    if (c >= sg.colour_count()) throw PreconditionViolation("colour out of range");
    if (!is_simple_path(sg.graph(), path)) throw PreconditionViolation("not a path of the graph");
    const Vertex first = path.front(), last = path.back();
    if (!sg.levelled(c, first) || !sg.levelled(c, last))
        throw PreconditionViolation("path endpoints must be levelled");
    const auto gap = static_cast<std::size_t>(std::abs(sg.level(c, first) - sg.level(c, last)));
    if (gap <= 1 || gap != path.size() - 1)
        throw PreconditionViolation("path length must equal a level gap greater than one");
    const auto oriented = oriented_in_colour(sg, c, path);
    return is_colour_path(sg, c, oriented);
}

bool cross_colour_check(const ShortestGraph& sg, Colour i, Colour j,
                        std::span<const Vertex> path_i, std::span<const Vertex> path_j) {
    if (!is_colour_path(sg, i, path_i)) throw PreconditionViolation("first path is not of colour i");
    if (!is_colour_path(sg, j, path_j)) throw PreconditionViolation("second path is not of colour j");
    const auto ends = [](std::span<const Vertex> p) {
        return std::minmax(p.front(), p.back());
    };
    if (ends(path_i) != ends(path_j)) throw PreconditionViolation("paths have different endpoints");

    const auto check = [&](Colour c, std::span<const Vertex> p) {
        for (Vertex v : p)
            if (!sg.levelled(c, v)) return false;
        return is_colour_path(sg, c, oriented_in_colour(sg, c, p));
    };
    return check(i, path_j) && check(j, path_i);
}

}  // namespace kdsp
