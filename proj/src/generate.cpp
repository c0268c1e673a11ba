#include "kdsp/generate.hpp"

#include <algorithm>
#include <numeric>

#include "kdsp/errors.hpp"
#include "kdsp/layering.hpp"

namespace kdsp {

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw PreconditionViolation("empty range");
    // Rejection sampling: std distributions differ between standard libraries.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
}

bool Rng::chance(double p) {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p;
}

namespace {

constexpr int kAttempts = 1000;

void require_size(const GenParams& params, std::size_t min_vertices) {
    if (params.vertices < min_vertices)
        throw PreconditionViolation("need at least " + std::to_string(min_vertices) + " vertices");
}

std::vector<Vertex> shuffled(std::size_t n, Rng& rng) {
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), Vertex{0});
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    return order;
}

}  // namespace

Graph random_graph(std::size_t n, double edge_prob, Rng& rng) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (rng.chance(edge_prob)) edges.emplace_back(u, v);
    return Graph(n, edges);
}

Instance random_layered_instance(const GenParams& params, Rng& rng) {
    require_size(params, 2);
    if (params.colours == 0) throw PreconditionViolation("need at least one colour");
    const auto n = params.vertices;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        const Graph g = random_graph(n, params.edge_prob, rng);
        std::vector<Vertex> sources;
        for (std::size_t c = 0; c < params.colours; ++c) sources.push_back(static_cast<Vertex>(rng.below(n)));
        const ShortestGraph sg = build_shortest_graph(g, sources);
        std::vector<Request> requests;
        for (std::size_t i = 0; i < params.requests; ++i) {
            const auto c = static_cast<Colour>(rng.below(params.colours));
            std::vector<TerminalPair> options;
            for (Vertex s = 0; s < n; ++s)
                for (Vertex t = 0; t < n; ++t)
                    if (s != t && sg.levelled(c, s) && sg.levelled(c, t) && sg.reach(c).test(s, t))
                        options.emplace_back(s, t);
            if (options.empty()) break;
            const auto [s, t] = options[rng.below(options.size())];
            // Either orientation is a valid request; keep both in the mix.
            if (rng.chance(0.5)) requests.push_back({s, t, c, {}});
            else requests.push_back({t, s, c, {}});
        }
        if (requests.size() == params.requests) return make_layered_instance(sg, requests);
    }
    throw PreconditionViolation("could not generate a layered instance; raise the edge probability");
}

Instance random_raw_instance(const GenParams& params, Rng& rng) {
    require_size(params, 2);
    const auto n = params.vertices;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        const Graph g = random_graph(n, params.edge_prob, rng);
        std::vector<std::vector<Vertex>> partners(n);
        std::vector<Vertex> sources;
        for (Vertex s = 0; s < n; ++s) {
            const auto levels = bfs_levels(g, s);
            for (Vertex t = 0; t < n; ++t)
                if (t != s && levels[t] != kUnlevelled) partners[s].push_back(t);
            if (!partners[s].empty()) sources.push_back(s);
        }
        if (sources.empty()) continue;
        std::vector<TerminalPair> pairs;
        for (std::size_t i = 0; i < params.requests; ++i) {
            const Vertex s = sources[rng.below(sources.size())];
            pairs.emplace_back(s, partners[s][rng.below(partners[s].size())]);
        }
        return make_raw_instance(g, pairs);
    }
    throw PreconditionViolation("could not generate a raw instance; raise the edge probability");
}

Instance random_dag_instance(const GenParams& params, Rng& rng) {
    require_size(params, 2 * params.requests);
    const auto n = params.vertices;
    const std::vector<Vertex> order = shuffled(n, rng);
    std::vector<std::pair<Vertex, Vertex>> arcs;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (rng.chance(params.edge_prob)) arcs.emplace_back(order[a], order[b]);
    const Digraph dag(n, arcs);
    const std::vector<Vertex> terminals = shuffled(n, rng);
    std::vector<std::size_t> position(n);
    for (std::size_t a = 0; a < n; ++a) position[order[a]] = a;
    std::vector<TerminalPair> pairs;
    for (std::size_t i = 0; i < params.requests; ++i) {
        Vertex s = terminals[2 * i], t = terminals[2 * i + 1];
        // Mostly forward pairs; a backward one is unsolvable outright.
        if ((position[s] > position[t]) == rng.chance(0.85)) std::swap(s, t);
        pairs.emplace_back(s, t);
    }
    return make_dag_instance(dag, pairs);
}

Instance random_instance(InstanceKind kind, const GenParams& params, std::uint64_t seed) {
    Rng rng(seed);
    switch (kind) {
        case InstanceKind::raw: return random_raw_instance(params, rng);
        case InstanceKind::layered: return random_layered_instance(params, rng);
        case InstanceKind::dag: return random_dag_instance(params, rng);
    }
    throw PreconditionViolation("unknown instance kind");
}

}  // namespace kdsp
