#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kdsp/bicolored.hpp"
#include "kdsp/generate.hpp"
#include "kdsp/graph.hpp"
#include "kdsp/layering.hpp"
#include "kdsp/oracle.hpp"

namespace test {

using namespace kdsp;

inline Graph make_graph(std::size_t n, std::initializer_list<std::pair<Vertex, Vertex>> edges) {
    std::vector<Edge> list;
    for (auto [u, v] : edges) list.emplace_back(u, v);
    return Graph(n, list);
}

inline Graph path_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    return Graph(n, edges);
}

inline Graph cycle_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n; ++v) edges.emplace_back(v, static_cast<Vertex>((v + 1) % n));
    return Graph(n, edges);
}

// Centre 0; leaves 1..leaves.
inline Graph star_graph(std::size_t leaves) {
    std::vector<Edge> edges;
    for (Vertex v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
    return Graph(leaves + 1, edges);
}

inline ShortestGraph layered(const Graph& g, std::vector<Vertex> sources) {
    return build_shortest_graph(g, sources);
}

// Independent colour-path enumeration: plain DFS over graph edges by level.
inline std::vector<std::vector<Vertex>> colour_paths(const ShortestGraph& sg, Colour c, Vertex from, Vertex to,
                                                     const VertexSet* blocked = nullptr) {
    std::vector<std::vector<Vertex>> out;
    if (!sg.levelled(c, from) || !sg.levelled(c, to) || sg.level(c, from) > sg.level(c, to)) return out;
    const auto bad = [&](Vertex v) { return blocked && blocked->test(v); };
    if (bad(from) || bad(to)) return out;
    std::vector<Vertex> path{from};
    std::function<void()> go = [&] {
        const Vertex u = path.back();
        if (u == to) {
            out.push_back(path);
            return;
        }
        for (Vertex w = 0; w < sg.vertex_count(); ++w)
            if (sg.graph().has_edge(u, w) && sg.levelled(c, w) && sg.level(c, w) == sg.level(c, u) + 1 &&
                sg.level(c, w) <= sg.level(c, to) && !bad(w)) {
                path.push_back(w);
                go();
                path.pop_back();
            }
    };
    go();
    return out;
}

inline bool shares_non_common_terminal(const std::vector<Vertex>& a, Vertex as, Vertex at,
                                       const std::vector<Vertex>& b, Vertex bs, Vertex bt) {
    for (Vertex v : a)
        if (std::find(b.begin(), b.end(), v) != b.end() && !((v == as || v == at) && (v == bs || v == bt)))
            return true;
    return false;
}

// Visits every tuple of colour paths solving `requests` (low to high), pairwise
// sharing only common terminals. Stops when `visit` returns false.
inline void for_each_solution(const ShortestGraph& sg, const ComponentCatalog& catalog,
                              const std::vector<Request>& requests,
                              const std::function<bool(const std::vector<ColouredPath>&)>& visit) {
    std::vector<std::vector<std::vector<Vertex>>> options;
    for (const Request& r : requests) {
        VertexSet blocked(sg.vertex_count());
        for (const auto& ref : r.forbidden) blocked |= catalog.get(ref).members;
        Vertex lo = r.s, hi = r.t;
        if (sg.level(r.colour, lo) > sg.level(r.colour, hi)) std::swap(lo, hi);
        options.push_back(colour_paths(sg, r.colour, lo, hi, &blocked));
    }
    std::vector<ColouredPath> chosen;
    bool stop = false;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (stop) return;
        if (i == requests.size()) {
            if (!visit(chosen)) stop = true;
            return;
        }
        for (const auto& p : options[i]) {
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j)
                ok = !shares_non_common_terminal(p, requests[i].s, requests[i].t, chosen[j].vertices,
                                                 requests[j].s, requests[j].t);
            if (!ok) continue;
            chosen.push_back({requests[i].colour, p});
            go(i + 1);
            chosen.pop_back();
            if (stop) return;
        }
    };
    go(0);
}

inline Instance layered_instance(std::uint64_t seed, std::size_t n, std::size_t k, std::size_t l, double p = 0.4) {
    GenParams params;
    params.vertices = n;
    params.colours = k;
    params.requests = l;
    params.edge_prob = p;
    Rng rng(seed);
    return random_layered_instance(params, rng);
}

}  // namespace test
