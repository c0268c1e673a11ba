#include "doctest.h"

#include "kdsp/errors.hpp"
#include "kdsp/full_solver.hpp"
#include "support.hpp"

using namespace kdsp;
using test::make_graph;

namespace {

ShortestGraph two_separate_edges() {
    return ShortestGraph(test::path_graph(8), {{0, 1, 2, 3, 4, 5, 6, 7}, {kUnlevelled, 0, 1, 1, 1, 1, 2, kUnlevelled}});
}

std::size_t binomial(std::size_t n, std::size_t k) {
    std::size_t r = 1;
    for (std::size_t q = 1; q <= k; ++q) r = r * (n - k + q) / q;
    return r;
}

bool has_path(const ShortestGraph& sg, Colour c, Vertex a, Vertex b, const VertexSet* blocked = nullptr) {
    return !test::colour_paths(sg, c, a, b, blocked).empty();
}

// Scheme count from the rules, by plain recursion over vertex sequences.
std::size_t count_by_rules(const ShortestGraph& sg, std::vector<Request> requests, std::size_t budget,
                           std::size_t forbidden_budget) {
    const ComponentCatalog catalog(sg);
    std::set<Vertex> terminals;
    std::vector<VertexSet> blocked;
    for (Request& r : requests) {
        if (sg.level(r.colour, r.s) > sg.level(r.colour, r.t)) std::swap(r.s, r.t);
        terminals.insert(r.s);
        terminals.insert(r.t);
        VertexSet b(sg.vertex_count());
        for (const auto& ref : r.forbidden) b |= catalog.get(ref).members;
        blocked.push_back(b);
    }
    const auto options = [&](std::size_t i, Vertex from, Vertex to) {
        const Colour c = requests[i].colour;
        std::vector<Colour> colours{c};
        for (Colour o = 0; o < sg.colour_count(); ++o) {
            if (o == c || from == to) continue;
            bool shared = false;
            for (const auto* comp : catalog.between(c, o)) shared = shared || (comp->contains(from) && comp->contains(to));
            if (shared && (has_path(sg, o, from, to) || has_path(sg, o, to, from))) colours.push_back(o);
        }
        std::size_t total = 0;
        for (Colour a : colours) {
            const bool up = sg.level(a, from) <= sg.level(a, to);
            std::set<Vertex> span;
            for (const auto& p : test::colour_paths(sg, a, up ? from : to, up ? to : from)) span.insert(p.begin(), p.end());
            std::size_t admissible = 0;
            for (const auto* comp : catalog.with_colour(a)) {
                if (comp->contains(from) || comp->contains(to)) continue;
                bool useful = false;
                for (Vertex v : span) useful = useful || (comp->contains(v) && !blocked[i].test(v));
                admissible += useful;
            }
            for (std::size_t k = 0; k <= std::min(forbidden_budget, admissible); ++k) total += binomial(admissible, k);
        }
        return total;
    };

    std::size_t count = 0;
    std::set<Vertex> used;
    std::function<void(std::size_t, std::size_t)> per_request;
    std::function<void(std::size_t, std::vector<Vertex>&, std::size_t)> extend = [&](std::size_t i, std::vector<Vertex>& chain,
                                                                                   std::size_t weight) {
        const Request& r = requests[i];
        const Vertex last = chain.back();
        const std::size_t segments = chain.size() - 1;
        if (last == r.t && segments >= 1) {
            per_request(i + 1, weight);
            return;
        }
        if (segments >= budget) return;
        for (Vertex w = 0; w < sg.vertex_count(); ++w) {
            if (w == last || !has_path(sg, r.colour, last, w, &blocked[i]) || !has_path(sg, r.colour, w, r.t, &blocked[i]))
                continue;
            if (w != r.t && (terminals.count(w) || used.count(w))) continue;
            const std::size_t opts = options(i, last, w);
            if (w != r.t) used.insert(w);
            chain.push_back(w);
            extend(i, chain, weight * opts);
            chain.pop_back();
            if (w != r.t) used.erase(w);
        }
    };
    per_request = [&](std::size_t i, std::size_t weight) {
        if (i == requests.size()) {
            count += weight;
            return;
        }
        const Request& r = requests[i];
        if (r.s == r.t) {
            if (has_path(sg, r.colour, r.s, r.t, &blocked[i])) per_request(i + 1, weight * options(i, r.s, r.s));
            return;
        }
        std::vector<Vertex> chain{r.s};
        extend(i, chain, weight);
    };
    per_request(0, 1);
    return count;
}

Level longest(const ShortestGraph& sg, const std::vector<Request>& requests) {
    Level d = 0;
    for (const auto& r : requests) d = std::max(d, std::abs(sg.level(r.colour, r.t) - sg.level(r.colour, r.s)));
    return d;
}

}  // namespace

TEST_CASE("one segment per request: one scheme per admissible forbidden list") {
    const ShortestGraph sg = two_separate_edges();
    const ComponentCatalog catalog(sg);
    const std::vector<Request> request{{0, 7, 0, {}}};
    SolveConfig config;
    config.segment_budget = 1;
    config.forbidden_budget = 1;
    std::vector<SegmentScheme> schemes;
    enumerate_schemes(sg, catalog, request, config, [&](const SegmentScheme& s) {
        schemes.push_back(s);
        return true;
    });
    REQUIRE(schemes.size() == 3);
    for (const auto& s : schemes) {
        REQUIRE(s.requests.size() == 1);
        REQUIRE(s.requests[0].size() == 1);
        CHECK(s.requests[0][0].from == 0);
        CHECK(s.requests[0][0].to == 7);
        CHECK(s.requests[0][0].colour == 0);
    }
    CHECK(schemes[0].requests[0][0].forbidden.empty());
    CHECK(schemes[1].requests[0][0].forbidden == std::vector<ComponentRef>{{0, 1, Sign::plus, 0}});
    CHECK(schemes[2].requests[0][0].forbidden == std::vector<ComponentRef>{{0, 1, Sign::plus, 1}});
    config.forbidden_budget = 2;
    CHECK(count_schemes(sg, catalog, request, config) == 4);
}

TEST_CASE("two segments on a three-vertex path split at the midpoint") {
    const ShortestGraph sg = test::layered(test::path_graph(3), {0});
    const ComponentCatalog catalog(sg);
    SolveConfig config;
    config.segment_budget = 2;
    config.forbidden_budget = 0;
    std::vector<SegmentScheme> schemes;
    enumerate_schemes(sg, catalog, std::vector<Request>{{0, 2, 0, {}}}, config, [&](const SegmentScheme& s) {
        schemes.push_back(s);
        return true;
    });
    REQUIRE(schemes.size() == 2);
    CHECK(schemes[0].total_segments() == 1);
    REQUIRE(schemes[1].requests[0].size() == 2);
    CHECK(schemes[1].requests[0][0].to == 1);
    CHECK(schemes[1].requests[0][1].from == 1);
}

TEST_CASE("scheme counts match an independent enumeration") {
    std::size_t compared = 0;
    for (std::uint64_t seed = 0; seed < 80; ++seed) {
        Rng rng(seed);
        Instance inst = test::layered_instance(seed, 5, 1 + rng.below(2), 1 + rng.below(2), 0.5);
        const ShortestGraph sg = shortest_graph_of(inst);
        const ComponentCatalog catalog(sg);
        if (seed % 3 == 0)
            for (Request& r : inst.requests) {
                const auto comps = catalog.with_colour(r.colour);
                if (!comps.empty()) r.forbidden.push_back(comps[rng.below(comps.size())]->ref);
            }
        SolveConfig config;
        config.exhaustive = true;
        config.forbidden_budget = rng.below(3);
        const std::size_t budget = static_cast<std::size_t>(longest(sg, inst.requests)) + 1;
        CHECK_MESSAGE(count_schemes(sg, catalog, inst.requests, config) ==
                          count_by_rules(sg, inst.requests, budget, config.forbidden_budget),
                      "seed " << seed);
        config.exhaustive = false;
        config.segment_budget = 2;
        CHECK(count_schemes(sg, catalog, inst.requests, config) ==
              count_by_rules(sg, inst.requests, 2, config.forbidden_budget));
        ++compared;
    }
    CHECK(compared == 80);
}

TEST_CASE("schemes come in non-decreasing total segment count") {
    const Instance inst = test::layered_instance(7, 8, 2, 3, 0.3);
    const ShortestGraph sg = shortest_graph_of(inst);
    SolveConfig config;
    config.segment_budget = 3;
    std::size_t last = 0, seen = 0;
    enumerate_schemes(sg, ComponentCatalog(sg), inst.requests, config, [&](const SegmentScheme& s) {
        CHECK(s.total_segments() >= last);
        last = s.total_segments();
        return ++seen < 20000;
    });
    CHECK(seen > 0);
}

TEST_CASE("assemble") {
    const ShortestGraph sg = test::layered(test::path_graph(4), {0});
    const std::vector<Request> request{{0, 3, 0, {}}};
    const SegmentScheme single{{{{0, 3, 0, {}}}}};
    const std::vector<ColouredPath> whole{{0, {0, 1, 2, 3}}};
    CHECK(assemble(sg, request, single, whole) == whole);

    const SegmentScheme split{{{{0, 1, 0, {}}, {1, 3, 0, {}}}}};
    const std::vector<ColouredPath> pieces{{0, {0, 1}}, {0, {1, 2, 3}}};
    CHECK(assemble(sg, request, split, pieces) == whole);

    const std::vector<ColouredPath> broken{{0, {0, 1}}, {0, {2, 3}}};
    CHECK_THROWS_AS(assemble(sg, request, split, broken), AssemblyMismatch);
    CHECK_THROWS_AS(assemble(sg, request, split, whole), AssemblyMismatch);
}

TEST_CASE("solve on hand-built instances") {
    SUBCASE("disjoint requests on separate paths need one scheme") {
        const ShortestGraph sg = test::layered(make_graph(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}}), {0, 3});
        const std::vector<Request> requests{{0, 2, 0, {}}, {3, 5, 1, {}}};
        SolveConfig config;
        config.segment_budget = 1;
        const SolveVerdict v = solve(sg, requests, config);
        REQUIRE(v.kind == VerdictKind::solution);
        CHECK(v.stats.schemes_tried == 1);
        CHECK(v.paths[0].vertices == std::vector<Vertex>{0, 1, 2});
        CHECK(v.paths[1].vertices == std::vector<Vertex>{3, 4, 5});
    }
    SUBCASE("star centre cannot serve two requests") {
        const ShortestGraph sg = test::layered(test::star_graph(4), {1, 2});
        const std::vector<Request> requests{{1, 3, 0, {}}, {2, 4, 1, {}}};
        SolveConfig config;
        config.exhaustive = true;
        CHECK(solve(sg, requests, config).kind == VerdictKind::no_solution_exhaustive);
        config.decisive_shortcut = false;
        CHECK(solve(sg, requests, config).kind == VerdictKind::no_solution_exhaustive);
        config.exhaustive = false;
        CHECK(solve(sg, requests, config).kind == VerdictKind::budget_exceeded);
    }
    SUBCASE("requests sharing a terminal") {
        const ShortestGraph sg = test::layered(test::path_graph(5), {0});
        const std::vector<Request> requests{{0, 2, 0, {}}, {4, 2, 0, {}}};
        const SolveVerdict v = solve(sg, requests);
        REQUIRE(v.kind == VerdictKind::solution);
        CHECK(v.paths[0].vertices == std::vector<Vertex>{0, 1, 2});
        CHECK(v.paths[1].vertices == std::vector<Vertex>{2, 3, 4});
    }
    SUBCASE("malformed input") {
        const ShortestGraph sg = test::layered(make_graph(4, {{0, 1}, {1, 2}}), {0});
        CHECK_THROWS_AS(solve(sg, std::vector<Request>{{0, 3, 0, {}}}), PreconditionViolation);
        CHECK_THROWS_AS(solve(sg, std::vector<Request>{{0, 2, 0, {{0, 1, Sign::plus, 0}}}}), PreconditionViolation);
        SolveConfig zero;
        zero.segment_budget = 0;
        CHECK_THROWS_AS(solve(sg, std::vector<Request>{{0, 2, 0, {}}}, zero), PreconditionViolation);
    }
    SUBCASE("a state budget hit is never reported as infeasible") {
        const ShortestGraph sg = test::layered(test::star_graph(4), {1, 2});
        const std::vector<Request> requests{{1, 3, 0, {}}, {2, 4, 1, {}}};
        SolveConfig config;
        config.exhaustive = true;
        config.state_budget = 1;
        const SolveVerdict v = solve(sg, requests, config);
        CHECK(v.kind == VerdictKind::budget_exceeded);
        CHECK(v.stats.state_budget_hits > 0);
    }
}

TEST_CASE("exhaustive verdicts equal the oracle; solutions validate") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        Instance inst = test::layered_instance(seed, 4 + rng.below(5), 1 + rng.below(2), 1 + rng.below(3),
                                               0.2 + 0.1 * static_cast<double>(rng.below(4)));
        const ShortestGraph sg = shortest_graph_of(inst);
        const ComponentCatalog catalog(sg);
        if (seed % 4 == 0)
            for (Request& r : inst.requests) {
                const auto comps = catalog.with_colour(r.colour);
                if (!comps.empty()) r.forbidden.push_back(comps[rng.below(comps.size())]->ref);
            }
        const bool expected = oracle_solve_coloured(sg, catalog, inst.requests).has_value();
        for (const bool shortcut : {true, false}) {
            SolveConfig config;
            config.exhaustive = true;
            config.decisive_shortcut = shortcut;
            const SolveVerdict v = solve(sg, inst.requests, config);
            CHECK_MESSAGE(v.kind == (expected ? VerdictKind::solution : VerdictKind::no_solution_exhaustive),
                          "seed " << seed << " shortcut " << shortcut);
            if (v.kind == VerdictKind::solution) {
                CHECK(check_coloured_solution(sg, catalog, inst.requests, v.paths).ok);
                for (std::size_t i = 0; i < v.paths.size(); ++i)
                    CHECK(is_colour_path(sg, inst.requests[i].colour, v.paths[i].vertices));
            }
        }
    }
}

TEST_CASE("larger budgets keep solutions; non-exhaustive runs never claim infeasibility") {
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        Rng rng(seed);
        const Instance inst = test::layered_instance(300 + seed, 5 + rng.below(4), 2, 2 + rng.below(2), 0.3);
        const ShortestGraph sg = shortest_graph_of(inst);
        bool solved_before = false;
        for (std::size_t budget = 1; budget <= 3; ++budget) {
            SolveConfig config;
            config.segment_budget = budget;
            const SolveVerdict v = solve(sg, inst.requests, config);
            CHECK(v.kind != VerdictKind::no_solution_exhaustive);
            if (solved_before) CHECK(v.kind == VerdictKind::solution);
            solved_before = v.kind == VerdictKind::solution;
        }
    }
}

TEST_CASE("thread count does not change the answer") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const Instance inst = test::layered_instance(700 + seed, 8, 2, 3, 0.3);
        const ShortestGraph sg = shortest_graph_of(inst);
        SolveConfig one;
        one.exhaustive = true;
        one.decisive_shortcut = false;
        SolveConfig many = one;
        many.threads = 4;
        const SolveVerdict a = solve(sg, inst.requests, one), b = solve(sg, inst.requests, many);
        CHECK(a.kind == b.kind);
        CHECK(a.paths == b.paths);
        CHECK(a.scheme == b.scheme);
    }
}
