#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kdsp/bicolored.hpp"
#include "kdsp/graph.hpp"

namespace kdsp {

/// Colour-c reachability avoiding a forbidden vertex set (endpoints included).
struct ReachIndex {
    Colour colour = 0;
    VertexSet forbidden;
    BitMatrix matrix;

    bool reaches(Vertex u, Vertex v) const { return matrix.test(u, v); }
};

/// Throws PreconditionViolation if some component does not carry `colour`.
ReachIndex build_reach_index(const ShortestGraph& sg, Colour colour,
                             std::span<const BiColouredComponent* const> forbidden);
ReachIndex build_reach_index(const ShortestGraph& sg, Colour colour, VertexSet forbidden);

/// One request of the product search: a colour-`colour` path from `source` to
/// `target` (source at the lower level) avoiding `forbidden`.
struct BlindTrack {
    Colour colour = 0;
    Vertex source = 0;
    Vertex target = 0;
    VertexSet forbidden;  ///< empty or sized to the vertex count
};

struct BlindOptions {
    std::size_t state_limit = std::size_t{1} << 22;
};

struct BlindStats {
    std::size_t states_visited = 0;
};

/// Breadth-first search of the product digraph over l-tuples of positions.
/// Returns one low-to-high path per track, or nullopt when the target tuple is
/// unreachable. Terminals must be pairwise distinct (a track may have
/// source == target). Throws StateBudgetExceeded past `state_limit` tuples.
std::optional<std::vector<ColouredPath>> solve_blind_tracks(const ShortestGraph& sg,
                                                            std::span<const BlindTrack> tracks,
                                                            const BlindOptions& options = {},
                                                            BlindStats* stats = nullptr);

/// Request-level entry point: resolves forbidden lists through `catalog` and
/// orients each request low-to-high in its colour.
std::optional<std::vector<ColouredPath>> solve_blind(const ShortestGraph& sg,
                                                     const ComponentCatalog& catalog,
                                                     std::span<const Request> requests,
                                                     const BlindOptions& options = {},
                                                     BlindStats* stats = nullptr);

using TerminalPair = std::pair<Vertex, Vertex>;

/// Vertex-disjoint directed paths in an acyclic digraph, one per pair, or
/// nullopt. Throws CyclicInput on a cycle, PreconditionViolation on shared terminals.
std::optional<std::vector<std::vector<Vertex>>> solve_dag_disjoint(const Digraph& dag,
                                                                   std::span<const TerminalPair> pairs,
                                                                   const BlindOptions& options = {});

}  // namespace kdsp
