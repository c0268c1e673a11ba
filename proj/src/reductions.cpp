#include "kdsp/reductions.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "kdsp/errors.hpp"
#include "kdsp/layering.hpp"

namespace kdsp {

KdspInstance to_kdsp(const Graph& g, std::span<const TerminalPair> pairs) {
    std::vector<Vertex> sources;
    sources.reserve(pairs.size());
    for (auto [s, t] : pairs) {
        if (s >= g.vertex_count() || t >= g.vertex_count())
            throw PreconditionViolation("pair terminal out of range");
        sources.push_back(s);
    }
    KdspInstance result{build_shortest_graph(g, sources), {}};
    for (Colour i = 0; i < pairs.size(); ++i) {
        auto [s, t] = pairs[i];
        if (!result.sg.levelled(i, t)) throw Disconnected(s, t);
        result.requests.push_back({s, t, i, {}});
    }
    return result;
}

RoleAssignment assign_roles(std::size_t n, std::span<const TerminalPair> terminals) {
    RoleAssignment result;
    result.original.resize(n);
    for (Vertex v = 0; v < n; ++v) result.original[v] = v;

    std::vector<bool> claimed(n, false);
    const auto claim = [&](Vertex v) -> Vertex {
        if (v >= n) throw PreconditionViolation("terminal out of range");
        if (!claimed[v]) {
            claimed[v] = true;
            return v;
        }
        result.original.push_back(v);
        return static_cast<Vertex>(result.original.size() - 1);
    };
    for (auto [s, t] : terminals) {
        const Vertex s2 = claim(s);
        const Vertex t2 = s == t ? s2 : claim(t);
        result.terminals.emplace_back(s2, t2);
    }
    return result;
}

Graph expand_clones(const Graph& g, std::span<const Vertex> original) {
    if (original.size() == g.vertex_count()) return g;
    std::vector<std::vector<Vertex>> copies(g.vertex_count());
    for (Vertex w = 0; w < original.size(); ++w) copies[original[w]].push_back(w);
    std::vector<Edge> edges;
    for (Edge e : g.edges())
        for (Vertex a : copies[e.u])
            for (Vertex b : copies[e.v]) edges.emplace_back(a, b);
    return Graph(original.size(), edges);
}

ShortestGraph expand_clones(const ShortestGraph& sg, std::span<const Vertex> original) {
    if (original.size() == sg.vertex_count()) return sg;
    std::vector<std::vector<Level>> levels(sg.colour_count(), std::vector<Level>(original.size()));
    for (Colour c = 0; c < sg.colour_count(); ++c)
        for (Vertex w = 0; w < original.size(); ++w) levels[c][w] = sg.level(c, original[w]);
    return ShortestGraph(expand_clones(sg.graph(), original), std::move(levels));
}

TerminalSplit split_terminals(const ShortestGraph& sg, std::span<const Request> requests) {
    std::vector<TerminalPair> terminals;
    terminals.reserve(requests.size());
    for (const auto& r : requests) terminals.emplace_back(r.s, r.t);
    RoleAssignment roles = assign_roles(sg.vertex_count(), terminals);

    TerminalSplit result{expand_clones(sg, roles.original), {}, std::move(roles.original)};
    for (std::size_t i = 0; i < requests.size(); ++i) {
        Request r = requests[i];
        std::tie(r.s, r.t) = roles.terminals[i];
        result.requests.push_back(std::move(r));
    }
    return result;
}

GraphTerminalSplit split_terminals(const Graph& g, std::span<const TerminalPair> pairs) {
    RoleAssignment roles = assign_roles(g.vertex_count(), pairs);
    return {expand_clones(g, roles.original), std::move(roles.terminals), std::move(roles.original)};
}

std::vector<Vertex> map_back(std::span<const Vertex> path, std::span<const Vertex> original) {
    std::vector<Vertex> result;
    result.reserve(path.size());
    for (Vertex v : path) result.push_back(v < original.size() ? original[v] : v);
    return result;
}

namespace {

struct DetourPlan {
    std::vector<Detour> detours;
    std::vector<TerminalPair> pieces;
    std::set<Vertex> pseudo_terminals;  // piece endpoints other than the pair's own s and t
    std::set<Vertex> terminals;         // all piece endpoints
};

std::vector<DetourPlan> detour_plans(const Graph& g, const ShortestGraph& sg, Colour colour,
                                     TerminalPair pair, unsigned slack) {
    const auto [s, t] = pair;
    const auto& level = sg.levels(colour);
    const BitMatrix& reach = sg.reach(colour);
    const Level limit = level[t] - level[s] + static_cast<Level>(slack);

    std::vector<Detour> candidates;
    for (Edge e : g.edges())
        for (auto [u, v] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
            if (level[u] == kUnlevelled || level[v] == kUnlevelled) continue;
            if (level[v] != level[u] + 1) candidates.push_back({u, v});
        }

    std::vector<DetourPlan> plans;
    std::vector<Detour> chosen;
    const std::function<void(Vertex, Level)> extend = [&](Vertex cur, Level used) {
        if (reach.test(cur, t) && used + level[t] - level[cur] <= limit) {
            DetourPlan plan;
            plan.detours = chosen;
            Vertex start = s;
            for (const Detour& d : chosen) {
                plan.pieces.emplace_back(start, d.from);
                start = d.to;
            }
            plan.pieces.emplace_back(start, t);
            bool disjoint = true;
            for (auto [a, b] : plan.pieces) {
                std::set<Vertex> own{a, b};
                for (Vertex x : own) disjoint = disjoint && plan.terminals.insert(x).second;
            }
            if (disjoint) {
                for (Vertex x : plan.terminals)
                    if (x != s && x != t) plan.pseudo_terminals.insert(x);
                plans.push_back(std::move(plan));
            }
        }
        if (chosen.size() >= slack) return;
        for (const Detour& d : candidates) {
            if (!reach.test(cur, d.from)) continue;
            const Level next = used + level[d.from] - level[cur] + 1;
            if (next > limit) continue;
            chosen.push_back(d);
            extend(d.to, next);
            chosen.pop_back();
        }
    };
    extend(s, 0);
    std::stable_sort(plans.begin(), plans.end(),
                     [](const auto& a, const auto& b) { return a.detours.size() < b.detours.size(); });
    return plans;
}

}  // namespace

void reduce_capprox(const Graph& g, std::span<const TerminalPair> pairs, unsigned slack,
                    const std::function<bool(const ShortestGraph&, const CapproxInstance&)>& visit) {
    const KdspInstance base = to_kdsp(g, pairs);
    std::vector<std::vector<DetourPlan>> plans;
    for (Colour i = 0; i < pairs.size(); ++i) plans.push_back(detour_plans(g, base.sg, i, pairs[i], slack));

    std::vector<std::size_t> pick(pairs.size());
    bool keep_going = true;
    const std::function<void(std::size_t)> combine = [&](std::size_t i) {
        if (!keep_going) return;
        if (i == pairs.size()) {
            CapproxInstance instance;
            instance.pieces.resize(pairs.size());
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                const DetourPlan& plan = plans[p][pick[p]];
                for (auto [a, b] : plan.pieces) {
                    instance.pieces[p].push_back(instance.requests.size());
                    instance.requests.push_back({a, b, static_cast<Colour>(p), {}});
                    instance.owner.push_back(p);
                }
                instance.detours.push_back(plan.detours);
            }
            keep_going = visit(base.sg, instance);
            return;
        }
        for (std::size_t q = 0; q < plans[i].size() && keep_going; ++q) {
            const DetourPlan& plan = plans[i][q];
            bool clash = false;
            for (std::size_t p = 0; p < i && !clash; ++p) {
                const DetourPlan& other = plans[p][pick[p]];
                for (Vertex x : plan.pseudo_terminals) clash = clash || other.terminals.count(x);
                for (Vertex x : other.pseudo_terminals) clash = clash || plan.terminals.count(x);
            }
            if (clash) continue;
            pick[i] = q;
            combine(i + 1);
        }
    };
    combine(0);
}

std::vector<std::vector<Vertex>> assemble_capprox(const CapproxInstance& instance,
                                                  std::span<const ColouredPath> sub_paths) {
    if (sub_paths.size() != instance.requests.size())
        throw AssemblyMismatch("one path per sub-request expected");
    std::vector<std::vector<Vertex>> result;
    for (const auto& pieces : instance.pieces) {
        std::vector<Vertex> walk;
        for (std::size_t idx : pieces) {
            const Request& r = instance.requests[idx];
            std::vector<Vertex> piece = sub_paths[idx].vertices;
            if (piece.empty()) throw AssemblyMismatch("empty sub-path");
            if (piece.front() != r.s) std::reverse(piece.begin(), piece.end());
            if (piece.front() != r.s || piece.back() != r.t)
                throw AssemblyMismatch("sub-path does not join its terminals");
            walk.insert(walk.end(), piece.begin(), piece.end());
        }
        result.push_back(std::move(walk));
    }
    return result;
}

DagReduction dag_to_1dsp(const Digraph& dag, std::span<const TerminalPair> pairs) {
    auto order = topological_order(dag);
    if (!order) throw CyclicInput("dag_to_1dsp needs an acyclic digraph");
    const std::size_t n = dag.vertex_count();
    std::vector<Level> position(n);
    for (std::size_t q = 0; q < n; ++q) position[(*order)[q]] = static_cast<Level>(q);

    DagReduction result;
    result.order = *order;
    result.dag_vertex_count = n;
    std::vector<Level> level = position;
    std::vector<Edge> edges;
    for (auto [u, v] : dag.arcs()) {
        std::vector<Vertex> chain{u};
        for (Level step = position[u] + 1; step < position[v]; ++step) {
            chain.push_back(static_cast<Vertex>(level.size()));
            level.push_back(step);
        }
        chain.push_back(v);
        for (std::size_t q = 0; q + 1 < chain.size(); ++q) edges.emplace_back(chain[q], chain[q + 1]);
        result.arc_chain.emplace(std::pair{u, v}, std::move(chain));
    }
    result.sg = ShortestGraph(Graph(level.size(), edges), {level});
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [s, t] = pairs[i];
        if (s >= n || t >= n) throw PreconditionViolation("pair terminal out of range");
        if (position[s] > position[t]) result.backward_pairs.push_back(i);
        result.requests.push_back({s, t, 0, {}});
    }
    return result;
}

std::vector<Vertex> pull_back(const DagReduction& reduction, std::span<const Vertex> path) {
    std::vector<Vertex> result;
    for (Vertex v : path)
        if (v < reduction.dag_vertex_count) result.push_back(v);
    return result;
}

}  // namespace kdsp
