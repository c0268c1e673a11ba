#pragma once

#include <span>
#include <vector>

#include "kdsp/graph.hpp"

namespace kdsp {

/// BFS distances from `source`; unreachable vertices carry kUnlevelled.
std::vector<Level> bfs_levels(const Graph& g, Vertex source);

/// One colour per source (duplicates allowed). Keeps exactly the edges that join
/// consecutive levels of at least one BFS.
ShortestGraph build_shortest_graph(const Graph& g, std::span<const Vertex> sources);

/// Witness check that a path whose length equals the colour-c level gap of its
/// endpoints (gap > 1) is a colour-c path once oriented. Always true on valid
/// shortest graphs. Throws PreconditionViolation when the input is not such a path.
bool classify_shortest_path(const ShortestGraph& sg, Colour c, std::span<const Vertex> path);

/// For a colour-i path and a colour-j path with the same endpoints, whether each
/// is also a path of the other colour (oriented per colour). Throws
/// PreconditionViolation when either input is not a path of its colour or the
/// endpoints differ.
bool cross_colour_check(const ShortestGraph& sg, Colour i, Colour j,
                        std::span<const Vertex> path_i, std::span<const Vertex> path_j);

/// `vertices` reversed if that puts them in increasing colour-c level order.
std::vector<Vertex> oriented_in_colour(const ShortestGraph& sg, Colour c,
                                       std::span<const Vertex> vertices);

}  // namespace kdsp
