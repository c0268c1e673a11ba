#include "kdsp/blind_solver.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "kdsp/errors.hpp"
#include "kdsp/layering.hpp"

namespace kdsp {

ReachIndex build_reach_index(const ShortestGraph& sg, Colour colour, VertexSet forbidden) {
    if (colour >= sg.colour_count()) throw PreconditionViolation("colour out of range");
    if (forbidden.size() != sg.vertex_count()) forbidden.resize(sg.vertex_count());
    ReachIndex index;
    index.colour = colour;
    if (forbidden.none()) {
        index.matrix = sg.reach(colour);
    } else {
        VertexSet blocked = forbidden;
        for (Vertex v = 0; v < sg.vertex_count(); ++v)
            if (!sg.levelled(colour, v)) blocked.set(v);
        index.matrix = transitive_closure(sg.colour_dag(colour), &blocked);
    }
    index.forbidden = std::move(forbidden);
    return index;
}

ReachIndex build_reach_index(const ShortestGraph& sg, Colour colour,
                             std::span<const BiColouredComponent* const> forbidden) {
    VertexSet blocked(sg.vertex_count());
    for (const auto* comp : forbidden) {
        if (!comp->has_colour(colour))
            throw PreconditionViolation("forbidden component " + to_string(comp->ref) +
                                        " does not carry colour " + std::to_string(colour));
        blocked |= comp->members;
    }
    return build_reach_index(sg, colour, std::move(blocked));
}

namespace {

// One coordinate of the product digraph.
struct Lane {
    const Digraph* dag = nullptr;
    const BitMatrix* reach = nullptr;
    VertexSet to_target;            // v with a path v -> target
    Vertex source = 0;
    Vertex target = 0;
    std::vector<Vertex> candidates;  // vertices on some source -> target path
    std::unordered_map<Vertex, char16_t> position;
};

void require_distinct_terminals(std::span<const Lane> lanes) {
    std::map<Vertex, std::size_t> owner;
    for (std::size_t i = 0; i < lanes.size(); ++i)
        for (Vertex v : {lanes[i].source, lanes[i].target}) {
            auto [it, inserted] = owner.emplace(v, i);
            if (!inserted && it->second != i)
                throw PreconditionViolation("terminal " + std::to_string(v) +
                                            " is shared by two requests; split terminals first");
        }
}

// Forward BFS over tuples; arcs generated on the fly. Returns the vertex
// sequence of every lane, or nullopt.
std::optional<std::vector<std::vector<Vertex>>> product_search(std::vector<Lane>& lanes,
                                                               const BlindOptions& options,
                                                               BlindStats* stats) {
    require_distinct_terminals(lanes);
    const std::size_t count = lanes.size();
    if (count == 0) return std::vector<std::vector<Vertex>>{};

    for (auto& lane : lanes) {
        if (!lane.reach->test(lane.source, lane.target)) return std::nullopt;
        const VertexSet& from_source = lane.reach->row(lane.source);
        for (auto v = from_source.find_first(); v != VertexSet::npos; v = from_source.find_next(v)) {
            if (!lane.to_target.test(v)) continue;
            if (lane.candidates.size() >= 0xFFFF) throw StateBudgetExceeded("lane interval too large");
            lane.position.emplace(static_cast<Vertex>(v), static_cast<char16_t>(lane.candidates.size()));
            lane.candidates.push_back(static_cast<Vertex>(v));
        }
    }

    std::u16string start(count, u'\0'), goal(count, u'\0');
    for (std::size_t i = 0; i < count; ++i) {
        start[i] = lanes[i].position.at(lanes[i].source);
        goal[i] = lanes[i].position.at(lanes[i].target);
    }

    std::vector<std::u16string> states{start};
    std::vector<std::uint32_t> parent{0};
    std::vector<std::uint16_t> moved{0};
    std::unordered_map<std::u16string, std::uint32_t> seen{{start, 0}};

    std::optional<std::uint32_t> found;
    if (start == goal) found = 0;

    std::vector<Vertex> x(count);
    for (std::uint32_t id = 0; id < states.size() && !found; ++id) {
        const std::u16string current = states[id];
        for (std::size_t i = 0; i < count; ++i) x[i] = lanes[i].candidates[current[i]];

        for (std::size_t i = 0; i < count && !found; ++i) {
            if (x[i] == lanes[i].target) continue;
            // Leaving x[i] must not cut off any other lane's continuation. A vertex
            // in another lane's forbidden set is never on such a continuation.
            bool may_leave = true;
            for (std::size_t j = 0; j < count && may_leave; ++j) {
                if (j == i) continue;
                if (lanes[j].reach->test(x[j], x[i]) && lanes[j].to_target.test(x[i])) may_leave = false;
            }
            if (!may_leave) continue;

            for (Vertex y : lanes[i].dag->successors(x[i])) {
                if (!lanes[i].to_target.test(y)) continue;
                if (std::find(x.begin(), x.end(), y) != x.end()) continue;
                std::u16string next = current;
                next[i] = lanes[i].position.at(y);
                auto [it, inserted] = seen.emplace(next, static_cast<std::uint32_t>(states.size()));
                if (!inserted) continue;
                if (states.size() >= options.state_limit)
                    throw StateBudgetExceeded("product search exceeded " +
                                              std::to_string(options.state_limit) + " states");
                states.push_back(next);
                parent.push_back(id);
                moved.push_back(static_cast<std::uint16_t>(i));
                if (next == goal) {
                    found = it->second;
                    break;
                }
            }
        }
    }
    if (stats) stats->states_visited += states.size();
    if (!found) return std::nullopt;

    std::vector<std::uint32_t> chain;
    for (std::uint32_t id = *found; id != 0; id = parent[id]) chain.push_back(id);
    std::reverse(chain.begin(), chain.end());

    // Replay the moves; every prefix must stay disjoint from all others.
    std::vector<std::vector<Vertex>> paths(count);
    std::unordered_map<Vertex, std::size_t> occupied;
    for (std::size_t i = 0; i < count; ++i) {
        paths[i].push_back(lanes[i].source);
        occupied.emplace(lanes[i].source, i);
    }
    for (std::uint32_t id : chain) {
        const std::size_t i = moved[id];
        const Vertex y = lanes[i].candidates[states[id][i]];
        if (!occupied.emplace(y, i).second)
            throw std::logic_error("product path revisits vertex " + std::to_string(y));
        paths[i].push_back(y);
    }
    return paths;
}

}  // namespace

std::optional<std::vector<ColouredPath>> solve_blind_tracks(const ShortestGraph& sg,
                                                            std::span<const BlindTrack> tracks,
                                                            const BlindOptions& options,
                                                            BlindStats* stats) {
    std::vector<std::unique_ptr<BitMatrix>> owned;
    std::vector<Lane> lanes(tracks.size());
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        const BlindTrack& track = tracks[i];
        if (track.colour >= sg.colour_count() || track.source >= sg.vertex_count() ||
            track.target >= sg.vertex_count())
            throw PreconditionViolation("track out of range");
        Lane& lane = lanes[i];
        lane.dag = &sg.colour_dag(track.colour);
        if (track.forbidden.size() == 0 || track.forbidden.none()) {
            lane.reach = &sg.reach(track.colour);
        } else {
            VertexSet blocked = track.forbidden;
            blocked.resize(sg.vertex_count());
            owned.push_back(std::make_unique<BitMatrix>(transitive_closure(*lane.dag, &blocked)));
            lane.reach = owned.back().get();
        }
        lane.source = track.source;
        lane.target = track.target;
        lane.to_target = lane.reach->column(track.target);
    }

    auto paths = product_search(lanes, options, stats);
    if (!paths) return std::nullopt;
    std::vector<ColouredPath> result;
    result.reserve(tracks.size());
    for (std::size_t i = 0; i < tracks.size(); ++i)
        result.push_back({tracks[i].colour, std::move((*paths)[i])});
    return result;
}

std::optional<std::vector<ColouredPath>> solve_blind(const ShortestGraph& sg,
                                                     const ComponentCatalog& catalog,
                                                     std::span<const Request> requests,
                                                     const BlindOptions& options,
                                                     BlindStats* stats) {
    std::vector<BlindTrack> tracks;
    tracks.reserve(requests.size());
    for (const Request& r : requests) {
        if (!request_is_well_formed(sg, r)) throw PreconditionViolation("malformed request");
        BlindTrack track;
        track.colour = r.colour;
        track.source = r.s;
        track.target = r.t;
        if (sg.level(r.colour, r.s) > sg.level(r.colour, r.t)) std::swap(track.source, track.target);
        track.forbidden.resize(sg.vertex_count());
        for (const auto& ref : r.forbidden) track.forbidden |= catalog.get(ref).members;
        tracks.push_back(std::move(track));
    }
    return solve_blind_tracks(sg, tracks, options, stats);
}

std::optional<std::vector<std::vector<Vertex>>> solve_dag_disjoint(const Digraph& dag,
                                                                   std::span<const TerminalPair> pairs,
                                                                   const BlindOptions& options) {
    if (!topological_order(dag)) throw CyclicInput("solve_dag_disjoint needs an acyclic digraph");
    const BitMatrix reach = transitive_closure(dag);
    std::vector<Lane> lanes(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [s, t] = pairs[i];
        if (s >= dag.vertex_count() || t >= dag.vertex_count())
            throw PreconditionViolation("pair terminal out of range");
        lanes[i].dag = &dag;
        lanes[i].reach = &reach;
        lanes[i].source = s;
        lanes[i].target = t;
        lanes[i].to_target = reach.column(t);
    }
    return product_search(lanes, options, nullptr);
}

}  // namespace kdsp
