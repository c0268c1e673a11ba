#include "kdsp/full_solver.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "kdsp/errors.hpp"
#include "kdsp/layering.hpp"
#include "kdsp/oracle.hpp"
#include "kdsp/reductions.hpp"

namespace kdsp {

std::size_t SegmentScheme::total_segments() const {
    std::size_t total = 0;
    for (const auto& segs : requests) total += segs.size();
    return total;
}

std::string to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::solution: return "solution";
        case VerdictKind::no_solution_exhaustive: return "no-solution-exhaustive";
        case VerdictKind::budget_exceeded: return "budget-exceeded";
    }
    return "unknown";
}

namespace {

Request oriented(const ShortestGraph& sg, Request r) {
    if (sg.level(r.colour, r.s) > sg.level(r.colour, r.t)) std::swap(r.s, r.t);
    return r;
}

VertexSet forbidden_members(const ShortestGraph& sg, const ComponentCatalog& catalog,
                            std::span<const ComponentRef> refs) {
    VertexSet members(sg.vertex_count());
    for (const auto& ref : refs) members |= catalog.get(ref).members;
    return members;
}

// Vertices on some colour-c path from `from` to `to` under `reach`.
VertexSet interval(const BitMatrix& reach, Vertex from, Vertex to) {
    VertexSet result = reach.row(from);
    result &= reach.column(to);
    return result;
}

struct SegmentOption {
    Colour colour = 0;
    std::vector<ComponentRef> forbidden;
};

struct RequestPlan {
    Request request;
    VertexSet base_forbidden;
    BitMatrix reach;
    std::vector<Vertex> interval;  // by level, then id
    std::size_t max_segments = 0;
    std::map<std::size_t, std::vector<std::vector<Vertex>>> chains;  // by segment count
};

class SchemeEnumerator {
public:
    SchemeEnumerator(const ShortestGraph& sg, const ComponentCatalog& catalog,
                     std::span<const Request> requests, const SolveConfig& config)
        : sg_(sg), catalog_(catalog), config_(config), terminals_(sg.vertex_count()) {
        Level longest = 0;
        for (const Request& raw : requests) {
            if (!request_is_well_formed(sg, raw)) throw PreconditionViolation("malformed request");
            RequestPlan plan;
            plan.request = oriented(sg, raw);
            plan.base_forbidden = forbidden_members(sg, catalog, raw.forbidden);
            plan.reach = plan.base_forbidden.none()
                             ? sg.reach(raw.colour)
                             : transitive_closure(sg.colour_dag(raw.colour), &plan.base_forbidden);
            const Colour c = raw.colour;
            const VertexSet span = interval(plan.reach, plan.request.s, plan.request.t);
            for (auto v = span.find_first(); v != VertexSet::npos; v = span.find_next(v))
                plan.interval.push_back(static_cast<Vertex>(v));
            std::stable_sort(plan.interval.begin(), plan.interval.end(),
                             [&](Vertex a, Vertex b) { return sg.level(c, a) < sg.level(c, b); });
            const Level distance = sg.level(c, plan.request.t) - sg.level(c, plan.request.s);
            longest = std::max(longest, distance);
            plans_.push_back(std::move(plan));
            terminals_.set(raw.s);
            terminals_.set(raw.t);
        }
        segment_budget_ = config.exhaustive ? static_cast<std::size_t>(longest) + 1 : config.segment_budget;
        for (RequestPlan& plan : plans_) {
            const Colour c = plan.request.colour;
            const auto distance =
                static_cast<std::size_t>(sg.level(c, plan.request.t) - sg.level(c, plan.request.s));
            const bool satisfiable = plan.reach.test(plan.request.s, plan.request.t);
            plan.max_segments = satisfiable ? std::max<std::size_t>(1, std::min(segment_budget_, distance)) : 0;
        }
    }

    std::size_t segment_budget() const { return segment_budget_; }

    void run(const std::function<bool(const SegmentScheme&)>& visit) {
        if (plans_.empty()) {
            visit(SegmentScheme{});
            return;
        }
        std::size_t lowest = 0, highest = 0;
        for (const auto& plan : plans_) {
            if (plan.max_segments == 0) return;
            lowest += 1;
            highest += plan.max_segments;
        }
        visit_ = &visit;
        stopped_ = false;
        counts_.assign(plans_.size(), 0);
        for (std::size_t total = lowest; total <= highest && !stopped_; ++total)
            compose(0, total);
    }

private:
    // Segment counts per request summing to `remaining` over requests i..end.
    void compose(std::size_t i, std::size_t remaining) {
        if (stopped_) return;
        if (i == plans_.size()) {
            if (remaining == 0) pick_chains();
            return;
        }
        std::size_t rest_max = 0;
        for (std::size_t j = i + 1; j < plans_.size(); ++j) rest_max += plans_[j].max_segments;
        const std::size_t rest_min = plans_.size() - i - 1;
        for (std::size_t m = 1; m <= plans_[i].max_segments && m <= remaining && !stopped_; ++m) {
            const std::size_t rest = remaining - m;
            if (rest < rest_min || rest > rest_max) continue;
            counts_[i] = m;
            compose(i + 1, rest);
        }
    }

    const std::vector<std::vector<Vertex>>& chains(std::size_t i, std::size_t m) {
        RequestPlan& plan = plans_[i];
        auto it = plan.chains.find(m);
        if (it != plan.chains.end()) return it->second;
        std::vector<std::vector<Vertex>> found;
        const Request& r = plan.request;
        const Colour c = r.colour;
        if (m == 1) {
            found.push_back(r.s == r.t ? std::vector<Vertex>{r.s} : std::vector<Vertex>{r.s, r.t});
        } else {
            std::vector<Vertex> chain{r.s};
            const std::function<void(std::size_t)> grow = [&](std::size_t left) {
                const Vertex cur = chain.back();
                if (left == 1) {
                    if (plan.reach.test(cur, r.t) && cur != r.t) {
                        chain.push_back(r.t);
                        found.push_back(chain);
                        chain.pop_back();
                    }
                    return;
                }
                for (Vertex w : plan.interval) {
                    if (w == cur || terminals_.test(w) || !plan.reach.test(cur, w)) continue;
                    if (sg_.level(c, r.t) - sg_.level(c, w) < static_cast<Level>(left - 1)) continue;
                    chain.push_back(w);
                    grow(left - 1);
                    chain.pop_back();
                }
            };
            grow(m);
        }
        return plan.chains.emplace(m, std::move(found)).first->second;
    }

    void pick_chains() {
        chosen_chains_.assign(plans_.size(), nullptr);
        junctions_.clear();
        choose_chain(0);
    }

    void choose_chain(std::size_t i) {
        if (stopped_) return;
        if (i == plans_.size()) {
            build_segments();
            return;
        }
        for (const auto& chain : chains(i, counts_[i])) {
            if (stopped_) return;
            bool clash = false;
            for (std::size_t q = 1; q + 1 < chain.size() && !clash; ++q)
                clash = std::find(junctions_.begin(), junctions_.end(), chain[q]) != junctions_.end();
            if (clash) continue;
            const std::size_t mark = junctions_.size();
            for (std::size_t q = 1; q + 1 < chain.size(); ++q) junctions_.push_back(chain[q]);
            chosen_chains_[i] = &chain;
            choose_chain(i + 1);
            junctions_.resize(mark);
        }
    }

    const std::vector<SegmentOption>& options(std::size_t i, Vertex from, Vertex to) {
        const auto key = std::tuple{i, from, to};
        auto it = option_cache_.find(key);
        if (it != option_cache_.end()) return it->second;

        const RequestPlan& plan = plans_[i];
        const Colour c = plan.request.colour;
        std::vector<Colour> colours{c};
        for (Colour other = 0; other < sg_.colour_count(); ++other) {
            if (other == c || from == to) continue;
            const auto comps = catalog_.between(c, other);
            const bool shared = std::any_of(comps.begin(), comps.end(), [&](const auto* comp) {
                return comp->contains(from) && comp->contains(to);
            });
            const BitMatrix& r = sg_.reach(other);
            if (shared && (r.test(from, to) || r.test(to, from))) colours.push_back(other);
        }

        std::vector<SegmentOption> result;
        for (Colour a : colours) {
            const bool upward = sg_.level(a, from) <= sg_.level(a, to);
            const VertexSet span = interval(sg_.reach(a), upward ? from : to, upward ? to : from);
            std::vector<ComponentRef> admissible;
            for (const auto* comp : catalog_.with_colour(a)) {
                if (comp->contains(from) || comp->contains(to)) continue;
                VertexSet useful = comp->members;
                useful &= span;
                useful -= plan.base_forbidden;
                if (useful.any()) admissible.push_back(comp->ref);
            }
            // Subsets in order of size, then lexicographically.
            std::vector<std::size_t> idx;
            const std::function<void(std::size_t, std::size_t)> subsets = [&](std::size_t start,
                                                                               std::size_t size) {
                if (idx.size() == size) {
                    SegmentOption option{a, {}};
                    for (std::size_t q : idx) option.forbidden.push_back(admissible[q]);
                    result.push_back(std::move(option));
                    return;
                }
                for (std::size_t q = start; q < admissible.size(); ++q) {
                    idx.push_back(q);
                    subsets(q + 1, size);
                    idx.pop_back();
                }
            };
            const std::size_t cap = std::min(config_.forbidden_budget, admissible.size());
            for (std::size_t size = 0; size <= cap; ++size) subsets(0, size);
        }
        return option_cache_.emplace(key, std::move(result)).first->second;
    }

    void build_segments() {
        scheme_.requests.assign(plans_.size(), {});
        slots_.clear();
        for (std::size_t i = 0; i < plans_.size(); ++i) {
            const auto& chain = *chosen_chains_[i];
            const std::size_t segments = chain.size() == 1 ? 1 : chain.size() - 1;
            for (std::size_t q = 0; q < segments; ++q) {
                const Vertex from = chain[q];
                const Vertex to = chain.size() == 1 ? chain[0] : chain[q + 1];
                scheme_.requests[i].push_back({from, to, plans_[i].request.colour, {}});
                slots_.push_back({i, q, &options(i, from, to)});
            }
        }
        choose_option(0);
    }

    void choose_option(std::size_t slot) {
        if (stopped_) return;
        if (slot == slots_.size()) {
            if (!(*visit_)(scheme_)) stopped_ = true;
            return;
        }
        const Slot& s = slots_[slot];
        for (const SegmentOption& option : *s.options) {
            if (stopped_) return;
            Segment& seg = scheme_.requests[s.request][s.index];
            seg.colour = option.colour;
            seg.forbidden = option.forbidden;
            choose_option(slot + 1);
        }
    }

    struct Slot {
        std::size_t request;
        std::size_t index;
        const std::vector<SegmentOption>* options;
    };

    const ShortestGraph& sg_;
    const ComponentCatalog& catalog_;
    const SolveConfig& config_;
    VertexSet terminals_;
    std::vector<RequestPlan> plans_;
    std::size_t segment_budget_ = 1;

    const std::function<bool(const SegmentScheme&)>* visit_ = nullptr;
    bool stopped_ = false;
    std::vector<std::size_t> counts_;
    std::vector<const std::vector<Vertex>*> chosen_chains_;
    std::vector<Vertex> junctions_;
    std::map<std::tuple<std::size_t, Vertex, Vertex>, std::vector<SegmentOption>> option_cache_;
    SegmentScheme scheme_;
    std::vector<Slot> slots_;
};

enum class Outcome { solved, failed, over_budget };

struct Evaluation {
    Outcome outcome = Outcome::failed;
    std::vector<ColouredPath> paths;
    std::size_t states = 0;
};

// Splits junctions, runs the product search, and chains the pieces back.
Evaluation evaluate_scheme(const ShortestGraph& sg, const ComponentCatalog& catalog,
                           std::span<const Request> requests, const SegmentScheme& scheme,
                           const SolveConfig& config) {
    std::vector<TerminalPair> ends;
    std::vector<const Segment*> flat;
    std::vector<std::size_t> owner;
    for (std::size_t i = 0; i < scheme.requests.size(); ++i)
        for (const Segment& seg : scheme.requests[i]) {
            ends.emplace_back(seg.from, seg.to);
            flat.push_back(&seg);
            owner.push_back(i);
        }
    const RoleAssignment roles = assign_roles(sg.vertex_count(), ends);
    std::optional<ShortestGraph> expanded;
    if (roles.original.size() != sg.vertex_count()) expanded = expand_clones(sg, roles.original);
    const ShortestGraph& work = expanded ? *expanded : sg;

    std::vector<BlindTrack> tracks;
    tracks.reserve(flat.size());
    for (std::size_t q = 0; q < flat.size(); ++q) {
        const Segment& seg = *flat[q];
        VertexSet blocked = forbidden_members(sg, catalog, seg.forbidden);
        blocked |= forbidden_members(sg, catalog, requests[owner[q]].forbidden);
        BlindTrack track;
        track.colour = seg.colour;
        std::tie(track.source, track.target) = roles.terminals[q];
        if (work.level(seg.colour, track.source) > work.level(seg.colour, track.target))
            std::swap(track.source, track.target);
        track.forbidden.resize(work.vertex_count());
        if (blocked.any())
            for (Vertex w = 0; w < work.vertex_count(); ++w)
                if (blocked.test(roles.original[w])) track.forbidden.set(w);
        tracks.push_back(std::move(track));
    }

    Evaluation result;
    BlindStats stats;
    std::optional<std::vector<ColouredPath>> found;
    try {
        found = solve_blind_tracks(work, tracks, {config.state_budget}, &stats);
    } catch (const StateBudgetExceeded&) {
        result.outcome = Outcome::over_budget;
        result.states = config.state_budget;
        return result;
    }
    result.states = stats.states_visited;
    if (!found) return result;

    std::vector<ColouredPath> pieces;
    pieces.reserve(found->size());
    for (auto& path : *found) pieces.push_back({path.colour, map_back(path.vertices, roles.original)});
    result.paths = assemble(sg, requests, scheme, pieces);
    result.outcome = Outcome::solved;
    return result;
}

// Intervals of differently coloured requests share no vertex: the product
// search on the one-segment scheme is then exact.
bool single_scheme_decides(const ShortestGraph& sg, std::span<const Request> requests) {
    std::vector<VertexSet> spans;
    for (const Request& r : requests) {
        if (!r.forbidden.empty()) return false;
        spans.push_back(interval(sg.reach(r.colour), r.s, r.t));
    }
    for (std::size_t i = 0; i < requests.size(); ++i)
        for (std::size_t j = i + 1; j < requests.size(); ++j)
            if (requests[i].colour != requests[j].colour && spans[i].intersects(spans[j])) return false;
    return true;
}

SegmentScheme single_segment_scheme(std::span<const Request> requests) {
    SegmentScheme scheme;
    for (const Request& r : requests) scheme.requests.push_back({{r.s, r.t, r.colour, {}}});
    return scheme;
}

}  // namespace

void enumerate_schemes(const ShortestGraph& sg, const ComponentCatalog& catalog,
                       std::span<const Request> requests, const SolveConfig& config,
                       const std::function<bool(const SegmentScheme&)>& visit) {
    SchemeEnumerator enumerator(sg, catalog, requests, config);
    enumerator.run(visit);
}

std::size_t count_schemes(const ShortestGraph& sg, const ComponentCatalog& catalog,
                          std::span<const Request> requests, const SolveConfig& config) {
    std::size_t count = 0;
    enumerate_schemes(sg, catalog, requests, config, [&](const SegmentScheme&) {
        ++count;
        return true;
    });
    return count;
}

std::vector<ColouredPath> assemble(const ShortestGraph& sg, std::span<const Request> requests,
                                   const SegmentScheme& scheme,
                                   std::span<const ColouredPath> segment_paths) {
    if (scheme.requests.size() != requests.size())
        throw AssemblyMismatch("scheme and request counts differ");
    if (segment_paths.size() != scheme.total_segments())
        throw AssemblyMismatch("one path per segment expected");

    std::vector<ColouredPath> result;
    std::size_t next = 0;
    for (std::size_t i = 0; i < requests.size(); ++i) {
        const Request r = oriented(sg, requests[i]);
        std::vector<Vertex> whole;
        for (const Segment& seg : scheme.requests[i]) {
            std::vector<Vertex> piece = segment_paths[next++].vertices;
            if (piece.empty()) throw AssemblyMismatch("empty segment path");
            if (piece.front() != seg.from) std::reverse(piece.begin(), piece.end());
            if (piece.front() != seg.from || piece.back() != seg.to)
                throw AssemblyMismatch("segment path does not join its endpoints");
            if (whole.empty()) {
                whole = std::move(piece);
            } else {
                if (whole.back() != piece.front()) throw AssemblyMismatch("segments do not chain");
                whole.insert(whole.end(), piece.begin() + 1, piece.end());
            }
        }
        if (whole.empty() || whole.front() != r.s || whole.back() != r.t)
            throw AssemblyMismatch("assembled path does not join the request terminals");
        if (!is_colour_path(sg, r.colour, whole))
            throw AssemblyMismatch("assembled path is not a path of the request colour");
        result.push_back({r.colour, std::move(whole)});
    }
    return result;
}

SolveVerdict solve(const ShortestGraph& sg, std::span<const Request> requests, const SolveConfig& config) {
    if (config.segment_budget == 0 || config.state_budget == 0)
        throw PreconditionViolation("budgets must be positive");
    const ComponentCatalog input_catalog(sg);
    std::vector<Request> normal;
    for (const Request& r : requests) {
        if (!request_is_well_formed(sg, r)) throw PreconditionViolation("malformed request");
        for (const auto& ref : r.forbidden) (void)input_catalog.get(ref);
        normal.push_back(oriented(sg, r));
    }

    const TerminalSplit split = split_terminals(sg, normal);
    const ComponentCatalog catalog(split.sg);
    SolveVerdict verdict;
    SolveStats& stats = verdict.stats;

    const auto finish = [&](std::vector<ColouredPath> paths, std::optional<SegmentScheme> scheme) {
        for (auto& p : paths) p.vertices = map_back(p.vertices, split.original);
        const CheckReport report = check_coloured_solution(sg, input_catalog, normal, paths);
        if (!report.ok)
            throw AssemblyMismatch("solver produced an invalid solution: " + report.violations.front());
        verdict.kind = VerdictKind::solution;
        verdict.paths = std::move(paths);
        verdict.scheme = std::move(scheme);
        return verdict;
    };

    if (config.exhaustive && config.decisive_shortcut && single_scheme_decides(split.sg, split.requests)) {
        const SegmentScheme scheme = single_segment_scheme(split.requests);
        Evaluation eval = evaluate_scheme(split.sg, catalog, split.requests, scheme, config);
        stats.schemes_tried = 1;
        stats.states_visited = eval.states;
        stats.deepest_total_segments = scheme.total_segments();
        if (eval.outcome == Outcome::solved) {
            stats.decided_by_single_scheme = true;
            return finish(std::move(eval.paths), scheme);
        }
        if (eval.outcome == Outcome::failed) {
            stats.decided_by_single_scheme = true;
            verdict.kind = VerdictKind::no_solution_exhaustive;
            return verdict;
        }
        ++stats.state_budget_hits;
    }

    const unsigned threads = std::max(1u, config.threads);
    const std::size_t batch_size = threads == 1 ? 1 : threads * 8;
    std::vector<SegmentScheme> batch;
    std::optional<Evaluation> winner;
    std::optional<SegmentScheme> winning_scheme;

    const auto flush = [&]() {
        std::vector<Evaluation> results(batch.size());
        if (threads == 1 || batch.size() == 1) {
            for (std::size_t q = 0; q < batch.size(); ++q) {
                results[q] = evaluate_scheme(split.sg, catalog, split.requests, batch[q], config);
                if (results[q].outcome == Outcome::solved) {
                    results.resize(q + 1);
                    break;
                }
            }
        } else {
            std::atomic<std::size_t> cursor{0};
            std::atomic<std::size_t> best{batch.size()};
            std::exception_ptr failure;
            std::mutex failure_mutex;
            std::vector<std::jthread> workers;
            for (unsigned w = 0; w < threads; ++w)
                workers.emplace_back([&] {
                    for (std::size_t q = cursor++; q < batch.size(); q = cursor++) {
                        if (q > best.load()) continue;
                        try {
                            results[q] = evaluate_scheme(split.sg, catalog, split.requests, batch[q], config);
                        } catch (...) {
                            std::lock_guard lock(failure_mutex);
                            if (!failure) failure = std::current_exception();
                            continue;
                        }
                        if (results[q].outcome == Outcome::solved) {
                            std::size_t seen = best.load();
                            while (q < seen && !best.compare_exchange_weak(seen, q)) {}
                        }
                    }
                });
            workers.clear();
            if (failure) std::rethrow_exception(failure);
            if (best.load() < batch.size()) results.resize(best.load() + 1);
        }
        for (std::size_t q = 0; q < results.size(); ++q) {
            ++stats.schemes_tried;
            stats.states_visited += results[q].states;
            stats.deepest_total_segments = std::max(stats.deepest_total_segments, batch[q].total_segments());
            if (results[q].outcome == Outcome::over_budget) ++stats.state_budget_hits;
            if (results[q].outcome == Outcome::solved) {
                winner = std::move(results[q]);
                winning_scheme = batch[q];
                break;
            }
        }
        batch.clear();
        return !winner;
    };

    std::size_t offered = 0;
    enumerate_schemes(split.sg, catalog, split.requests, config, [&](const SegmentScheme& scheme) {
        if (offered++ >= config.scheme_budget) {
            stats.scheme_budget_hit = true;
            return false;
        }
        batch.push_back(scheme);
        if (batch.size() >= batch_size) return flush();
        return true;
    });
    if (!winner && !batch.empty()) flush();

    if (winner) {
        // Scheme endpoints live in split ids; the reported scheme uses them as-is.
        return finish(std::move(winner->paths), std::move(winning_scheme));
    }
    const bool complete = config.exhaustive && stats.state_budget_hits == 0 && !stats.scheme_budget_hit;
    verdict.kind = complete ? VerdictKind::no_solution_exhaustive : VerdictKind::budget_exceeded;
    return verdict;
}

}  // namespace kdsp
