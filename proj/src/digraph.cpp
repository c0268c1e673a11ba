#include "kdsp/digraph.hpp"

#include <algorithm>
#include <queue>

#include "kdsp/errors.hpp"

namespace kdsp {

Digraph::Digraph(std::size_t n, std::span<const std::pair<Vertex, Vertex>> arcs)
    : out_(n), in_(n) {
    for (auto [u, v] : arcs) add_arc(u, v);
    finalize();
}

void Digraph::add_arc(Vertex u, Vertex v) {
    if (u >= out_.size() || v >= out_.size())
        throw InputError("arc endpoint out of range");
    out_[u].push_back(v);
    in_[v].push_back(u);
}

void Digraph::finalize() {
    auto tidy = [](std::vector<Vertex>& xs) {
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    };
    for (auto& xs : out_) tidy(xs);
    for (auto& xs : in_) tidy(xs);
}

std::size_t Digraph::arc_count() const {
    std::size_t total = 0;
    for (const auto& xs : out_) total += xs.size();
    return total;
}

bool Digraph::has_arc(Vertex u, Vertex v) const {
    if (u >= out_.size()) return false;
    return std::binary_search(out_[u].begin(), out_[u].end(), v);
}

std::vector<std::pair<Vertex, Vertex>> Digraph::arcs() const {
    std::vector<std::pair<Vertex, Vertex>> result;
    for (Vertex u = 0; u < out_.size(); ++u)
        for (Vertex v : out_[u]) result.emplace_back(u, v);
    return result;
}

std::optional<std::vector<Vertex>> topological_order(const Digraph& dag) {
    const std::size_t n = dag.vertex_count();
    std::vector<std::size_t> indegree(n);
    for (Vertex v = 0; v < n; ++v) indegree[v] = dag.predecessors(v).size();

    std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> ready;
    for (Vertex v = 0; v < n; ++v)
        if (indegree[v] == 0) ready.push(v);

    std::vector<Vertex> order;
    order.reserve(n);
    while (!ready.empty()) {
        Vertex u = ready.top();
        ready.pop();
        order.push_back(u);
        for (Vertex w : dag.successors(u))
            if (--indegree[w] == 0) ready.push(w);
    }
    if (order.size() != n) return std::nullopt;
    return order;
}

VertexSet BitMatrix::column(Vertex v) const {
    VertexSet col(rows_.size());
    for (Vertex u = 0; u < rows_.size(); ++u)
        if (rows_[u].test(v)) col.set(u);
    return col;
}

BitMatrix transitive_closure(const Digraph& dag, const VertexSet* blocked) {
    auto order = topological_order(dag);
    if (!order) throw CyclicInput("transitive closure requires an acyclic digraph");

    BitMatrix closure(dag.vertex_count());
    for (auto it = order->rbegin(); it != order->rend(); ++it) {
        Vertex u = *it;
        if (blocked && blocked->test(u)) continue;
        VertexSet& row = closure.row(u);
        row.set(u);
        for (Vertex w : dag.successors(u)) row |= closure.row(w);
    }
    return closure;
}

}  // namespace kdsp
