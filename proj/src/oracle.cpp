#include "kdsp/oracle.hpp"

#include <algorithm>
#include <deque>

#include "kdsp/errors.hpp"

namespace kdsp {

namespace {

std::vector<int> distances(const Graph& g, Vertex source) {
    std::vector<int> dist(g.vertex_count(), -1);
    std::deque<Vertex> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        const Vertex u = queue.front();
        queue.pop_front();
        for (Vertex w : g.neighbours(u))
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
    }
    return dist;
}

void require_vertex(const Graph& g, Vertex v) {
    if (v >= g.vertex_count()) throw PreconditionViolation("vertex out of range");
}

// Simple paths s..t of length <= limit, pruned by distance to t.
void bounded_paths(const Graph& g, Vertex s, Vertex t, int limit, const PathVisitor& visit) {
    const std::vector<int> to_target = distances(g, t);
    if (to_target[s] < 0) throw Disconnected(s, t);
    std::vector<Vertex> path{s};
    std::vector<char> on_path(g.vertex_count(), 0);
    on_path[s] = 1;
    bool stop = false;
    const std::function<void()> extend = [&] {
        const Vertex u = path.back();
        if (u == t) {
            if (!visit(path)) stop = true;
            return;
        }
        for (Vertex w : g.neighbours(u)) {
            if (stop) return;
            if (on_path[w] || to_target[w] < 0) continue;
            if (static_cast<int>(path.size()) + to_target[w] > limit) continue;
            on_path[w] = 1;
            path.push_back(w);
            extend();
            path.pop_back();
            on_path[w] = 0;
        }
    };
    extend();
}

bool is_terminal(const TerminalPair& p, Vertex v) { return p.first == v || p.second == v; }

// First vertex shared by the two paths that is not a terminal of both.
std::optional<Vertex> illegal_overlap(std::span<const Vertex> a, const TerminalPair& ta,
                                      std::span<const Vertex> b, const TerminalPair& tb) {
    for (Vertex v : a)
        if (std::find(b.begin(), b.end(), v) != b.end() && !(is_terminal(ta, v) && is_terminal(tb, v)))
            return v;
    return std::nullopt;
}

class Backtracker {
public:
    Backtracker(std::vector<TerminalPair> terminals, std::size_t cap)
        : terminals_(std::move(terminals)), cap_(cap) {}

    void add_candidates(std::vector<std::vector<Vertex>> paths) {
        visited_ += paths.size();
        if (visited_ > cap_) throw EnumerationCapExceeded("oracle path cap exceeded");
        candidates_.push_back(std::move(paths));
    }

    std::optional<std::vector<std::vector<Vertex>>> run() {
        chosen_.clear();
        if (search(0)) return chosen_;
        return std::nullopt;
    }

private:
    bool search(std::size_t i) {
        if (i == candidates_.size()) return true;
        for (const auto& path : candidates_[i]) {
            if (++visited_ > cap_) throw EnumerationCapExceeded("oracle path cap exceeded");
            bool fits = true;
            for (std::size_t j = 0; j < i && fits; ++j)
                fits = !illegal_overlap(path, terminals_[i], chosen_[j], terminals_[j]);
            if (!fits) continue;
            chosen_.push_back(path);
            if (search(i + 1)) return true;
            chosen_.pop_back();
        }
        return false;
    }

    std::vector<TerminalPair> terminals_;
    std::size_t cap_;
    std::size_t visited_ = 0;
    std::vector<std::vector<std::vector<Vertex>>> candidates_;
    std::vector<std::vector<Vertex>> chosen_;
};

std::vector<std::vector<Vertex>> collect(const std::function<void(const PathVisitor&)>& source,
                                         std::size_t cap) {
    std::vector<std::vector<Vertex>> out;
    source([&](std::span<const Vertex> p) {
        out.emplace_back(p.begin(), p.end());
        if (out.size() > cap) throw EnumerationCapExceeded("oracle path cap exceeded");
        return true;
    });
    return out;
}

void check_pairwise(std::span<const TerminalPair> terminals, std::span<const std::vector<Vertex>> paths,
                    CheckReport& report) {
    for (std::size_t i = 0; i < paths.size(); ++i)
        for (std::size_t j = i + 1; j < paths.size(); ++j)
            if (auto v = illegal_overlap(paths[i], terminals[i], paths[j], terminals[j])) {
                report.ok = false;
                report.violations.push_back("paths " + std::to_string(i) + " and " + std::to_string(j) +
                                            " share vertex " + std::to_string(*v));
            }
}

bool has_repeat(std::span<const Vertex> p) {
    std::vector<Vertex> sorted(p.begin(), p.end());
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

}  // namespace

void enumerate_shortest_paths(const Graph& g, Vertex s, Vertex t, const PathVisitor& visit) {
    enumerate_near_shortest_paths(g, s, t, 0, visit);
}

void enumerate_near_shortest_paths(const Graph& g, Vertex s, Vertex t, unsigned slack,
                                   const PathVisitor& visit) {
    require_vertex(g, s);
    require_vertex(g, t);
    const std::vector<int> from_source = distances(g, s);
    if (from_source[t] < 0) throw Disconnected(s, t);
    bounded_paths(g, s, t, from_source[t] + static_cast<int>(slack), visit);
}

void enumerate_colour_paths(const ShortestGraph& sg, Colour c, Vertex s, Vertex t,
                            const VertexSet* blocked, const PathVisitor& visit) {
    if (!sg.levelled(c, s) || !sg.levelled(c, t)) return;
    if (sg.level(c, s) > sg.level(c, t)) std::swap(s, t);
    const auto is_blocked = [&](Vertex v) { return blocked && v < blocked->size() && blocked->test(v); };
    if (is_blocked(s) || is_blocked(t)) return;
    const Level top = sg.level(c, t);
    std::vector<Vertex> path{s};
    bool stop = false;
    const std::function<void()> extend = [&] {
        const Vertex u = path.back();
        if (sg.level(c, u) == top) {
            if (u == t && !visit(path)) stop = true;
            return;
        }
        for (Vertex w : sg.graph().neighbours(u)) {
            if (stop) return;
            if (sg.level(c, w) != sg.level(c, u) + 1 || is_blocked(w)) continue;
            path.push_back(w);
            extend();
            path.pop_back();
        }
    };
    extend();
}

std::optional<std::vector<std::vector<Vertex>>> oracle_solve(const Graph& g,
                                                             std::span<const TerminalPair> pairs,
                                                             unsigned slack, const OracleOptions& options) {
    Backtracker search({pairs.begin(), pairs.end()}, options.path_cap);
    for (const auto& [s, t] : pairs)
        search.add_candidates(collect(
            [&](const PathVisitor& v) { enumerate_near_shortest_paths(g, s, t, slack, v); }, options.path_cap));
    return search.run();
}

std::optional<std::vector<ColouredPath>> oracle_solve_coloured(const ShortestGraph& sg,
                                                               const ComponentCatalog& catalog,
                                                               std::span<const Request> requests,
                                                               const OracleOptions& options) {
    std::vector<TerminalPair> terminals;
    for (const Request& r : requests) terminals.emplace_back(r.s, r.t);
    Backtracker search(terminals, options.path_cap);
    for (const Request& r : requests) {
        if (!request_is_well_formed(sg, r)) throw PreconditionViolation("malformed request");
        VertexSet blocked(sg.vertex_count());
        for (const auto& ref : r.forbidden) blocked |= catalog.get(ref).members;
        search.add_candidates(collect(
            [&](const PathVisitor& v) { enumerate_colour_paths(sg, r.colour, r.s, r.t, &blocked, v); },
            options.path_cap));
    }
    auto found = search.run();
    if (!found) return std::nullopt;
    std::vector<ColouredPath> result;
    for (std::size_t i = 0; i < requests.size(); ++i) result.push_back({requests[i].colour, (*found)[i]});
    return result;
}

std::optional<std::vector<std::vector<Vertex>>> oracle_solve_dag(const Digraph& dag,
                                                                 std::span<const TerminalPair> pairs,
                                                                 const OracleOptions& options) {
    std::vector<Vertex> terminals;
    for (const auto& [s, t] : pairs) {
        if (s >= dag.vertex_count() || t >= dag.vertex_count()) throw PreconditionViolation("vertex out of range");
        terminals.push_back(s);
        if (t != s) terminals.push_back(t);
    }
    std::sort(terminals.begin(), terminals.end());
    if (std::adjacent_find(terminals.begin(), terminals.end()) != terminals.end())
        throw PreconditionViolation("terminals must be distinct");

    // Distinct terminals make "terminal of both" impossible, so the overlap
    // rule below is plain disjointness.
    Backtracker search({pairs.begin(), pairs.end()}, options.path_cap);
    for (const auto& [s, t] : pairs) {
        search.add_candidates(collect(
            [&](const PathVisitor& visit) {
                std::vector<Vertex> path{s};
                bool stop = false;
                const std::function<void()> extend = [&] {
                    if (path.back() == t) {
                        if (!visit(path)) stop = true;
                        return;
                    }
                    for (Vertex w : dag.successors(path.back())) {
                        if (stop) return;
                        if (std::find(path.begin(), path.end(), w) != path.end()) continue;
                        path.push_back(w);
                        extend();
                        path.pop_back();
                    }
                };
                extend();
            },
            options.path_cap));
    }
    return search.run();
}

CheckReport check_dag_solution(const Digraph& dag, std::span<const TerminalPair> pairs,
                               std::span<const std::vector<Vertex>> paths) {
    CheckReport report;
    const auto fail = [&](std::string why) {
        report.ok = false;
        report.violations.push_back(std::move(why));
    };
    if (paths.size() != pairs.size()) {
        fail("expected " + std::to_string(pairs.size()) + " paths, got " + std::to_string(paths.size()));
        return report;
    }
    std::vector<int> owner(dag.vertex_count(), -1);
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const auto& p = paths[i];
        const std::string name = "path " + std::to_string(i);
        if (p.empty() || p.front() != pairs[i].first || p.back() != pairs[i].second) {
            fail(name + " does not run from " + std::to_string(pairs[i].first) + " to " +
                 std::to_string(pairs[i].second));
            continue;
        }
        if (std::any_of(p.begin(), p.end(), [&](Vertex v) { return v >= dag.vertex_count(); })) {
            fail(name + " leaves the graph");
            continue;
        }
        for (std::size_t q = 0; q + 1 < p.size(); ++q)
            if (!dag.has_arc(p[q], p[q + 1]))
                fail(name + " uses non-arc " + std::to_string(p[q]) + "->" + std::to_string(p[q + 1]));
        for (Vertex v : p) {
            if (owner[v] == static_cast<int>(i)) {
                fail(name + " repeats vertex " + std::to_string(v));
            } else if (owner[v] >= 0) {
                fail("paths " + std::to_string(owner[v]) + " and " + std::to_string(i) + " share vertex " +
                     std::to_string(v));
            }
            owner[v] = static_cast<int>(i);
        }
    }
    return report;
}

CheckReport check_solution(const Graph& g, std::span<const TerminalPair> pairs,
                           std::span<const std::vector<Vertex>> paths, unsigned slack) {
    CheckReport report;
    const auto fail = [&](std::string why) {
        report.ok = false;
        report.violations.push_back(std::move(why));
    };
    if (paths.size() != pairs.size()) {
        fail("expected " + std::to_string(pairs.size()) + " paths, got " + std::to_string(paths.size()));
        return report;
    }
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const auto& p = paths[i];
        const auto [s, t] = pairs[i];
        const std::string name = "path " + std::to_string(i);
        if (p.empty()) {
            fail(name + " is empty");
            continue;
        }
        if (std::any_of(p.begin(), p.end(), [&](Vertex v) { return v >= g.vertex_count(); })) {
            fail(name + " leaves the graph");
            continue;
        }
        const bool forward = p.front() == s && p.back() == t;
        const bool backward = p.front() == t && p.back() == s;
        if (!forward && !backward) fail(name + " does not join " + std::to_string(s) + " and " + std::to_string(t));
        for (std::size_t q = 0; q + 1 < p.size(); ++q)
            if (!g.has_edge(p[q], p[q + 1]))
                fail(name + " uses non-edge " + std::to_string(p[q]) + "-" + std::to_string(p[q + 1]));
        if (has_repeat(p)) fail(name + " is not simple");
        if (s < g.vertex_count() && t < g.vertex_count()) {
            const int d = distances(g, s)[t];
            if (d < 0)
                fail(name + " joins disconnected terminals");
            else if (p.size() - 1 > static_cast<std::size_t>(d) + slack)
                fail(name + " has length " + std::to_string(p.size() - 1) + ", allowed " +
                     std::to_string(d + slack));
        }
    }
    check_pairwise(pairs, paths, report);
    return report;
}

CheckReport check_coloured_solution(const ShortestGraph& sg, const ComponentCatalog& catalog,
                                    std::span<const Request> requests,
                                    std::span<const ColouredPath> paths) {
    CheckReport report;
    const auto fail = [&](std::string why) {
        report.ok = false;
        report.violations.push_back(std::move(why));
    };
    if (paths.size() != requests.size()) {
        fail("expected " + std::to_string(requests.size()) + " paths, got " + std::to_string(paths.size()));
        return report;
    }
    std::vector<TerminalPair> terminals;
    std::vector<std::vector<Vertex>> plain;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const Request& r = requests[i];
        std::vector<Vertex> p = paths[i].vertices;
        terminals.emplace_back(r.s, r.t);
        const std::string name = "path " + std::to_string(i);
        if (p.empty() || std::any_of(p.begin(), p.end(), [&](Vertex v) { return v >= sg.vertex_count(); }) ||
            r.colour >= sg.colour_count()) {
            fail(name + " is empty or leaves the graph");
            plain.push_back(std::move(p));
            continue;
        }
        if (p.size() > 1 && sg.level(r.colour, p.front()) > sg.level(r.colour, p.back()))
            std::reverse(p.begin(), p.end());
        const bool joins = (p.front() == r.s && p.back() == r.t) || (p.front() == r.t && p.back() == r.s);
        if (!joins) fail(name + " does not join " + std::to_string(r.s) + " and " + std::to_string(r.t));
        for (std::size_t q = 0; q + 1 < p.size(); ++q) {
            const Vertex a = p[q], b = p[q + 1];
            if (!sg.graph().has_edge(a, b) || !sg.levelled(r.colour, a) ||
                sg.level(r.colour, b) != sg.level(r.colour, a) + 1)
                fail(name + " step " + std::to_string(a) + "-" + std::to_string(b) + " is not a colour " +
                     std::to_string(r.colour) + " step");
        }
        for (const auto& ref : r.forbidden) {
            if (!catalog.contains(ref)) {
                fail("request " + std::to_string(i) + " forbids unknown component " + to_string(ref));
                continue;
            }
            const auto& comp = catalog.get(ref);
            for (Vertex v : p)
                if (comp.contains(v)) fail(name + " enters forbidden component " + to_string(ref) + " at " +
                                           std::to_string(v));
        }
        plain.push_back(std::move(p));
    }
    check_pairwise(terminals, plain, report);
    return report;
}

}  // namespace kdsp
