#pragma once

#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "kdsp/blind_solver.hpp"
#include "kdsp/graph.hpp"

namespace kdsp {

/// Shortest graph from one BFS per pair source, requests
/// coloured by pair index. Throws Disconnected for an unconnected pair.
struct KdspInstance {
    ShortestGraph sg;
    std::vector<Request> requests;
};
KdspInstance to_kdsp(const Graph& g, std::span<const TerminalPair> pairs);

/// Terminal roles in request order (s then t). A vertex keeps its id for its
/// first role; every further role gets a fresh clone id appended after the
/// existing vertices. A request with s == t occupies a single role.
struct RoleAssignment {
    std::vector<Vertex> original;        ///< original[v'] for every vertex of the new graph
    std::vector<TerminalPair> terminals;  ///< per request, in new ids
};
RoleAssignment assign_roles(std::size_t n, std::span<const TerminalPair> terminals);

/// Vertices of the new graph are adjacent iff their originals are.
Graph expand_clones(const Graph& g, std::span<const Vertex> original);
ShortestGraph expand_clones(const ShortestGraph& sg, std::span<const Vertex> original);

struct TerminalSplit {
    ShortestGraph sg;
    std::vector<Request> requests;
    std::vector<Vertex> original;
};
/// Clones every vertex used as a terminal by more than one request so that
/// terminals become pairwise distinct. Component references stay valid: clones
/// join exactly the components of their original.
TerminalSplit split_terminals(const ShortestGraph& sg, std::span<const Request> requests);

struct GraphTerminalSplit {
    Graph g;
    std::vector<TerminalPair> pairs;
    std::vector<Vertex> original;
};
GraphTerminalSplit split_terminals(const Graph& g, std::span<const TerminalPair> pairs);

/// Maps every vertex through `original` (identity for ids outside its range).
std::vector<Vertex> map_back(std::span<const Vertex> path, std::span<const Vertex> original);

/// One oriented edge traversal that is not a forward step of its pair's BFS.
struct Detour {
    Vertex from = 0;
    Vertex to = 0;
    bool operator==(const Detour&) const = default;
};

/// One member of the slack-C stream: sub-requests on the shared shortest graph.
struct CapproxInstance {
    std::vector<Request> requests;
    std::vector<std::size_t> owner;               ///< original pair of each sub-request
    std::vector<std::vector<std::size_t>> pieces;  ///< per pair, its sub-requests in path order
    std::vector<std::vector<Detour>> detours;      ///< per pair, the fixed edges between pieces
};

/// Enumerates, for every pair, every ordered choice of at most `slack` detour
/// edges whose pieces fit in length d + slack, and every combination across
/// pairs whose pseudo-terminals do not collide. The first instance yielded is
/// the slack-0 one. Stops early when `visit` returns false.
void reduce_capprox(const Graph& g, std::span<const TerminalPair> pairs, unsigned slack,
                    const std::function<bool(const ShortestGraph&, const CapproxInstance&)>& visit);

/// Rebuilds one s-to-t walk per original pair from sub-request paths (each
/// given low-to-high in its colour).
std::vector<std::vector<Vertex>> assemble_capprox(const CapproxInstance& instance,
                                                  std::span<const ColouredPath> sub_paths);

/// DAG pairs turned into a 1-shortest graph by subdividing arcs.
struct DagReduction {
    ShortestGraph sg;
    std::vector<Request> requests;
    std::vector<Vertex> order;              ///< topological order of the DAG vertices
    std::size_t dag_vertex_count = 0;
    std::map<std::pair<Vertex, Vertex>, std::vector<Vertex>> arc_chain;  ///< arc -> vertices from tail to head
    std::vector<std::size_t> backward_pairs;  ///< pairs whose source follows the target; never solvable
};

/// Arc (v_a, v_b) at topological positions a < b becomes a path with b - a - 1
/// new vertices; levels are the positions. Throws CyclicInput.
DagReduction dag_to_1dsp(const Digraph& dag, std::span<const TerminalPair> pairs);

/// Drops subdivision vertices from a path of the reduced graph.
std::vector<Vertex> pull_back(const DagReduction& reduction, std::span<const Vertex> path);

}  // namespace kdsp
