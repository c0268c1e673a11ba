#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace kdsp {

using Vertex = std::uint32_t;
using VertexSet = boost::dynamic_bitset<>;

/// Simple directed graph on dense ids; out-lists are kept sorted and deduplicated.
class Digraph {
public:
    Digraph() = default;
    explicit Digraph(std::size_t n) : out_(n), in_(n) {}
    Digraph(std::size_t n, std::span<const std::pair<Vertex, Vertex>> arcs);

    std::size_t vertex_count() const { return out_.size(); }
    std::size_t arc_count() const;

    /// Adds u -> v. Call finalize() before querying after the last insertion.
    void add_arc(Vertex u, Vertex v);
    void finalize();

    std::span<const Vertex> successors(Vertex v) const { return out_[v]; }
    std::span<const Vertex> predecessors(Vertex v) const { return in_[v]; }
    bool has_arc(Vertex u, Vertex v) const;

    std::vector<std::pair<Vertex, Vertex>> arcs() const;

private:
    std::vector<std::vector<Vertex>> out_;
    std::vector<std::vector<Vertex>> in_;
};

/// Kahn's algorithm, smallest ready id first. Empty optional when a cycle exists.
std::optional<std::vector<Vertex>> topological_order(const Digraph& dag);

/// Row u holds every v reachable from u by a directed path (u itself included)
/// whose vertices all avoid `blocked`. Rows of blocked vertices are empty.
/// Requires an acyclic input.
class BitMatrix {
public:
    BitMatrix() = default;
    explicit BitMatrix(std::size_t n) : rows_(n, VertexSet(n)) {}

    std::size_t size() const { return rows_.size(); }
    bool test(Vertex u, Vertex v) const { return rows_[u].test(v); }
    const VertexSet& row(Vertex u) const { return rows_[u]; }
    VertexSet& row(Vertex u) { return rows_[u]; }

    /// Column v as a set: every u with test(u, v).
    VertexSet column(Vertex v) const;

private:
    std::vector<VertexSet> rows_;
};

BitMatrix transitive_closure(const Digraph& dag, const VertexSet* blocked = nullptr);

}  // namespace kdsp
