#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kdsp/bicolored.hpp"
#include "kdsp/blind_solver.hpp"
#include "kdsp/graph.hpp"

namespace kdsp {

using PathVisitor = std::function<bool(std::span<const Vertex>)>;

/// Every s-t path of length d(s,t), each once. `visit` returns false to stop.
/// Throws Disconnected.
void enumerate_shortest_paths(const Graph& g, Vertex s, Vertex t, const PathVisitor& visit);

/// Every simple s-t path of length at most d(s,t) + slack.
void enumerate_near_shortest_paths(const Graph& g, Vertex s, Vertex t, unsigned slack,
                                   const PathVisitor& visit);

/// Colour-c paths from the lower to the higher of {s, t}, avoiding `blocked`
/// (terminals included). Nothing is visited when the two are not comparable.
void enumerate_colour_paths(const ShortestGraph& sg, Colour c, Vertex s, Vertex t,
                            const VertexSet* blocked, const PathVisitor& visit);

struct OracleOptions {
    std::size_t path_cap = 2'000'000;  ///< candidate paths visited, over the whole search
};

/// Exact decision by backtracking over candidate paths, requests in order.
/// Paths run s to t. Throws Disconnected and EnumerationCapExceeded.
std::optional<std::vector<std::vector<Vertex>>> oracle_solve(const Graph& g,
                                                             std::span<const TerminalPair> pairs,
                                                             unsigned slack = 0,
                                                             const OracleOptions& options = {});

/// Same search over colour paths of a shortest graph; paths run low to high.
std::optional<std::vector<ColouredPath>> oracle_solve_coloured(const ShortestGraph& sg,
                                                               const ComponentCatalog& catalog,
                                                               std::span<const Request> requests,
                                                               const OracleOptions& options = {});

/// Vertex-disjoint directed paths by brute force over all directed s-t paths.
/// Terminals must be pairwise distinct. Throws EnumerationCapExceeded.
std::optional<std::vector<std::vector<Vertex>>> oracle_solve_dag(const Digraph& dag,
                                                                 std::span<const TerminalPair> pairs,
                                                                 const OracleOptions& options = {});

struct CheckReport {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Paths may run either way between their terminals. Two paths may share a
/// vertex only when it is a terminal of both.
CheckReport check_solution(const Graph& g, std::span<const TerminalPair> pairs,
                           std::span<const std::vector<Vertex>> paths, unsigned slack = 0);

/// Coloured form: each path is a path of its request's colour between the
/// request terminals, avoiding the request's forbidden components.
CheckReport check_coloured_solution(const ShortestGraph& sg, const ComponentCatalog& catalog,
                                    std::span<const Request> requests,
                                    std::span<const ColouredPath> paths);

/// Directed form: arcs followed forwards, paths fully vertex-disjoint.
CheckReport check_dag_solution(const Digraph& dag, std::span<const TerminalPair> pairs,
                               std::span<const std::vector<Vertex>> paths);

}  // namespace kdsp
