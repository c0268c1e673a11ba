#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kdsp/blind_solver.hpp"
#include "kdsp/graph.hpp"

namespace kdsp {

/// raw: a plain graph with terminal pairs. layered: a shortest graph with
/// coloured requests. dag: arcs with terminal pairs.
enum class InstanceKind { raw, layered, dag };

std::string to_string(InstanceKind kind);
/// Throws InputError for anything but raw, layered, dag.
InstanceKind parse_instance_kind(std::string_view word);

struct Instance {
    InstanceKind kind = InstanceKind::raw;
    std::size_t vertex_count = 0;
    std::vector<Edge> edges;                        ///< raw and layered
    std::vector<std::pair<Vertex, Vertex>> arcs;    ///< dag
    std::vector<std::vector<Level>> levels;         ///< layered, one row per colour
    std::vector<Request> requests;                  ///< colour is the request index unless layered

    std::size_t colour_count() const { return kind == InstanceKind::layered ? levels.size() : requests.size(); }
    bool operator==(const Instance&) const = default;
};

Instance make_raw_instance(const Graph& g, std::span<const TerminalPair> pairs);
Instance make_layered_instance(const ShortestGraph& sg, std::span<const Request> requests);
Instance make_dag_instance(const Digraph& dag, std::span<const TerminalPair> pairs);

Graph graph_of(const Instance& instance);
ShortestGraph shortest_graph_of(const Instance& instance);
Digraph digraph_of(const Instance& instance);
std::vector<TerminalPair> pairs_of(const Instance& instance);

/// Text format, one record per line, `#` starts a comment:
///   n k l            header: vertices, colours, requests
///   e u v            undirected edge
///   a u v            arc (dag instances)
///   L c x0 .. x{n-1} colour-c levels, `-` for unlevelled (layered instances)
///   r s t [c]        request; the colour is required for layered instances
///   f i a b +|- j    request i forbids component j of colours a, b and that sign
/// Text starting with `{` is read as the JSON mirror. Throws InputError.
Instance parse_instance(std::string_view text);
std::string format_instance(const Instance& instance);
std::string format_instance_json(const Instance& instance);

struct Solution {
    std::vector<std::vector<Vertex>> paths;
    bool operator==(const Solution&) const = default;
};

///   solution l
///   p i v0 v1 ...
Solution parse_solution(std::string_view text);
std::string format_solution(const Solution& solution);
std::string format_solution_json(const Solution& solution);

std::string read_file(const std::string& path);

}  // namespace kdsp
