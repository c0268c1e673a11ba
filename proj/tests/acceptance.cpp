// Acceptance sweep: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "kdsp/bicolored.hpp"
#include "kdsp/errors.hpp"
#include "kdsp/full_solver.hpp"
#include "kdsp/generate.hpp"
#include "kdsp/layering.hpp"
#include "kdsp/oracle.hpp"
#include "kdsp/reductions.hpp"

using namespace kdsp;

namespace {

// Every Solution produced anywhere in the sweep goes through here.
struct SoundnessGate {
    std::size_t checked = 0;
    std::size_t failed = 0;
    std::string first_failure;

    void record(const CheckReport& report, const std::string& where) {
        ++checked;
        if (report.ok) return;
        if (failed++ == 0) first_failure = where + ": " + report.violations.front();
    }
} gate;

struct Result {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

SolveConfig exhaustive_config() {
    SolveConfig config;
    config.exhaustive = true;
    config.state_budget = std::size_t{1} << 22;
    return config;
}

std::string describe(std::uint64_t seed, const char* what) {
    return std::string(what) + " seed " + std::to_string(seed);
}

// 1: exhaustive solver verdicts equal the oracle's.
Result oracle_equivalence() {
    const auto start = Clock::now();
    std::size_t instances = 0, mismatches = 0, positive = 0;
    std::string first;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        Rng rng(1000 + seed);
        GenParams params;
        params.vertices = 4 + rng.below(5);
        params.colours = 1 + rng.below(2);
        params.requests = 1 + rng.below(3);
        params.edge_prob = 0.2 + 0.1 * static_cast<double>(rng.below(4));
        const Instance inst = random_layered_instance(params, rng);
        const ShortestGraph sg = shortest_graph_of(inst);
        const ComponentCatalog catalog(sg);
        const bool expected = oracle_solve_coloured(sg, catalog, inst.requests).has_value();
        ++instances;
        positive += expected;
        // With and without the one-scheme shortcut, so the full enumeration is exercised too.
        for (const bool shortcut : {true, false}) {
            SolveConfig config = exhaustive_config();
            config.decisive_shortcut = shortcut;
            const SolveVerdict verdict = solve(sg, inst.requests, config);
            if (verdict.kind == VerdictKind::solution)
                gate.record(check_coloured_solution(sg, catalog, inst.requests, verdict.paths),
                            describe(seed, "oracle-equivalence"));
            const bool agrees = expected ? verdict.kind == VerdictKind::solution
                                         : verdict.kind == VerdictKind::no_solution_exhaustive;
            if (!agrees && mismatches++ == 0)
                first = "seed " + std::to_string(seed) + (shortcut ? "" : " (no shortcut)") + ": solver " +
                        to_string(verdict.kind) + ", oracle " + (expected ? "feasible" : "infeasible");
        }
    }
    // Raw graphs through the one-colour-per-pair packaging, two pairs.
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(5000 + seed);
        GenParams params;
        params.vertices = 4 + rng.below(5);
        params.requests = 1 + rng.below(2);
        params.edge_prob = 0.3 + 0.1 * static_cast<double>(rng.below(4));
        const Instance inst = random_raw_instance(params, rng);
        const Graph g = graph_of(inst);
        const auto pairs = pairs_of(inst);
        const KdspInstance k = to_kdsp(g, pairs);
        const SolveVerdict verdict = solve(k.sg, k.requests, exhaustive_config());
        const bool expected = oracle_solve(g, pairs).has_value();
        ++instances;
        if (verdict.kind == VerdictKind::solution) {
            ++positive;
            std::vector<std::vector<Vertex>> paths;
            for (const auto& p : verdict.paths) paths.push_back(p.vertices);
            gate.record(check_solution(g, pairs, paths), describe(seed, "oracle-equivalence raw"));
        }
        const bool agrees = expected ? verdict.kind == VerdictKind::solution
                                     : verdict.kind == VerdictKind::no_solution_exhaustive;
        if (!agrees && mismatches++ == 0)
            first = "raw seed " + std::to_string(seed) + ": solver " + to_string(verdict.kind) + ", oracle " +
                    (expected ? "feasible" : "infeasible");
    }
    const double elapsed = seconds_since(start);
    Result r;
    r.pass = mismatches == 0 && instances >= 300 && elapsed < 300.0;
    r.detail = std::to_string(instances) + " instances (" + std::to_string(positive) + " feasible), " +
               std::to_string(mismatches) + " mismatches, " + std::to_string(elapsed) + " s (limit 300)";
    if (!first.empty()) r.detail += "; first: " + first;
    return r;
}

// 2: DAG product search against brute force.
Result dag_solver() {
    const auto start = Clock::now();
    std::size_t instances = 0, mismatches = 0, positive = 0;
    std::string first;
    for (std::uint64_t seed = 0; seed < 320; ++seed) {
        Rng rng(2000 + seed);
        GenParams params;
        params.requests = 1 + rng.below(3);
        params.vertices = std::max<std::size_t>(2 * params.requests, 4 + rng.below(7));
        params.edge_prob = 0.25 + 0.1 * static_cast<double>(rng.below(4));
        const Instance inst = random_dag_instance(params, rng);
        const Digraph dag = digraph_of(inst);
        const auto pairs = pairs_of(inst);
        const auto found = solve_dag_disjoint(dag, pairs);
        const auto expected = oracle_solve_dag(dag, pairs);
        ++instances;
        if (found) {
            ++positive;
            gate.record(check_dag_solution(dag, pairs, *found), describe(seed, "dag-solver"));
        }
        if (found.has_value() != expected.has_value() && mismatches++ == 0)
            first = "seed " + std::to_string(seed);
    }
    const double elapsed = seconds_since(start);
    Result r;
    r.pass = mismatches == 0 && instances >= 300 && elapsed < 120.0;
    r.detail = std::to_string(instances) + " DAGs (" + std::to_string(positive) + " feasible), " +
               std::to_string(mismatches) + " mismatches, " + std::to_string(elapsed) + " s (limit 120)";
    if (!first.empty()) r.detail += "; first: " + first;
    return r;
}

ShortestGraph sweep_graph(std::uint64_t seed, std::size_t max_vertices) {
    Rng rng(seed);
    const std::size_t n = 3 + rng.below(max_vertices - 2);
    const double p = 0.15 + 0.05 * static_cast<double>(rng.below(6));
    const Graph g = random_graph(n, p, rng);
    const std::size_t k = 2 + rng.below(2);
    std::vector<Vertex> sources;
    for (std::size_t c = 0; c < k; ++c) sources.push_back(static_cast<Vertex>(rng.below(n)));
    return build_shortest_graph(g, sources);
}

// 3: every member satisfies the offset equation of its component.
Result offset_equation() {
    std::size_t graphs = 0, components_seen = 0, vertex_checks = 0, violations = 0;
    for (std::uint64_t seed = 0; seed < 520; ++seed) {
        const ShortestGraph sg = sweep_graph(3000 + seed, 20);
        ++graphs;
        for (Colour a = 0; a < sg.colour_count(); ++a)
            for (Colour b = a + 1; b < sg.colour_count(); ++b)
                for (const auto& comp : components(sg, a, b)) {
                    ++components_seen;
                    for (Vertex x : comp.vertices) {
                        ++vertex_checks;
                        const Level la = sg.level(a, x), lb = sg.level(b, x);
                        const bool holds = comp.sign() == Sign::plus ? lb == la + comp.offset : lb == comp.offset - la;
                        if (!holds || la == kUnlevelled || lb == kUnlevelled) ++violations;
                    }
                }
    }
    Result r;
    r.pass = violations == 0 && graphs >= 500;
    r.detail = std::to_string(graphs) + " graphs, " + std::to_string(components_seen) + " components, " +
               std::to_string(vertex_checks) + " vertex checks, " + std::to_string(violations) + " violations";
    return r;
}

// 4: colour paths meet each component in one contiguous stretch.
Result contiguity() {
    std::size_t pairs = 0, violations = 0;
    std::string first;
    for (std::uint64_t seed = 0; seed < 520; ++seed) {
        const ShortestGraph sg = sweep_graph(3000 + seed, 20);
        const ComponentCatalog catalog(sg);
        for (Colour c = 0; c < sg.colour_count(); ++c) {
            const auto comps = catalog.with_colour(c);
            if (comps.empty()) continue;
            std::size_t budget = 400;  // paths per colour and graph
            for (Vertex s = 0; s < sg.vertex_count() && budget; ++s)
                for (Vertex t = 0; t < sg.vertex_count() && budget; ++t) {
                    if (s == t || !sg.reach(c).test(s, t)) continue;
                    enumerate_colour_paths(sg, c, s, t, nullptr, [&](std::span<const Vertex> p) {
                        const ColouredPath path{c, {p.begin(), p.end()}};
                        for (const auto* comp : comps) {
                            ++pairs;
                            std::vector<std::size_t> inside;
                            for (std::size_t q = 0; q < p.size(); ++q)
                                if (comp->contains(p[q])) inside.push_back(q);
                            const bool contiguous = inside.empty() || inside.back() - inside.front() + 1 == inside.size();
                            try {
                                const IndexRange range = path_component_intersection(sg, path, *comp);
                                const IndexRange expected = inside.empty() ? IndexRange{}
                                                                           : IndexRange{inside.front(), inside.back() + 1};
                                if (!contiguous || range.size() != expected.size() ||
                                    (!range.empty() && !(range == expected))) {
                                    if (violations++ == 0) first = "seed " + std::to_string(seed);
                                }
                            } catch (const NonContiguousIntersection&) {
                                if (violations++ == 0) first = "raised on seed " + std::to_string(seed);
                            }
                        }
                        return --budget > 0;
                    });
                }
        }
    }
    Result r;
    r.pass = violations == 0 && pairs >= 10'000;
    r.detail = std::to_string(pairs) + " path/component pairs, " + std::to_string(violations) + " violations";
    if (!first.empty()) r.detail += "; first: " + first;
    return r;
}

// 5: three shared vertices force exactly one conflicting component, holding them all.
Result conflicts() {
    std::size_t pairs = 0, violations = 0, graphs = 0;
    std::string first;
    for (std::uint64_t seed = 0; pairs < 3000 && seed < 5000; ++seed) {
        const ShortestGraph sg = sweep_graph(7000 + seed, 12);
        const ComponentCatalog catalog(sg);
        ++graphs;
        std::vector<std::vector<ColouredPath>> paths(sg.colour_count());
        for (Colour c = 0; c < sg.colour_count(); ++c)
            for (Vertex s = 0; s < sg.vertex_count(); ++s)
                for (Vertex t = 0; t < sg.vertex_count(); ++t)
                    if (s != t && sg.reach(c).test(s, t))
                        enumerate_colour_paths(sg, c, s, t, nullptr, [&](std::span<const Vertex> p) {
                            if (p.size() >= 3) paths[c].push_back({c, {p.begin(), p.end()}});
                            return paths[c].size() < 300;
                        });
        for (Colour a = 0; a < sg.colour_count(); ++a)
            for (Colour b = a + 1; b < sg.colour_count(); ++b)
                for (const auto& pa : paths[a])
                    for (const auto& pb : paths[b]) {
                        std::vector<Vertex> common;
                        for (Vertex v : pa.vertices)
                            if (std::find(pb.vertices.begin(), pb.vertices.end(), v) != pb.vertices.end())
                                common.push_back(v);
                        if (common.size() < 3) continue;
                        ++pairs;
                        const auto found = find_conflicting_component(sg, catalog, pa, pb);
                        const auto all = conflicting_components(sg, catalog, pa, pb);
                        bool ok = found.has_value() && all.size() == 1;
                        if (ok)
                            for (Vertex v : common) ok = ok && found->component.contains(v);
                        if (!ok && violations++ == 0)
                            first = "seed " + std::to_string(7000 + seed) + (found ? "" : " (no component)");
                    }
    }
    Result r;
    r.pass = violations == 0 && pairs >= 1000;
    r.detail = std::to_string(pairs) + " pairs with >= 3 shared vertices over " + std::to_string(graphs) +
               " graphs, " + std::to_string(violations) + " violations";
    if (!first.empty()) r.detail += "; first: " + first;
    return r;
}

// 6: the detour stream decides the slack-C problem.
Result slack_equivalence() {
    std::size_t instances = 0, mismatches = 0, positive = 0;
    std::string first;
    for (std::uint64_t seed = 0; seed < 140; ++seed) {
        Rng rng(4000 + seed);
        GenParams params;
        params.vertices = 4 + rng.below(4);
        params.requests = 1 + rng.below(2);
        params.edge_prob = 0.3 + 0.1 * static_cast<double>(rng.below(4));
        const unsigned slack = 1 + static_cast<unsigned>(rng.below(2));
        const Instance inst = random_raw_instance(params, rng);
        const Graph g = graph_of(inst);
        const auto pairs = pairs_of(inst);
        bool found = false, over_budget = false;
        reduce_capprox(g, pairs, slack, [&](const ShortestGraph& sg, const CapproxInstance& sub) {
            const SolveVerdict v = solve(sg, sub.requests, exhaustive_config());
            if (v.kind == VerdictKind::budget_exceeded) over_budget = true;
            if (v.kind != VerdictKind::solution) return true;
            const auto walks = assemble_capprox(sub, v.paths);
            gate.record(check_solution(g, pairs, walks, slack), describe(seed, "slack"));
            found = true;
            return false;
        });
        const bool expected = oracle_solve(g, pairs, slack).has_value();
        ++instances;
        positive += found;
        if ((found != expected || (!found && over_budget)) && mismatches++ == 0)
            first = "seed " + std::to_string(seed) + " slack " + std::to_string(slack) + ": stream " +
                    (found ? "feasible" : over_budget ? "budget" : "infeasible") + ", oracle " +
                    (expected ? "feasible" : "infeasible");
    }
    Result r;
    r.pass = mismatches == 0 && instances >= 100;
    r.detail = std::to_string(instances) + " instances (" + std::to_string(positive) + " feasible), " +
               std::to_string(mismatches) + " mismatches";
    if (!first.empty()) r.detail += "; first: " + first;
    return r;
}

// 7: DAG pairs before and after subdivision.
Result subdivision() {
    std::size_t instances = 0, mismatches = 0, positive = 0;
    std::string first;
    for (std::uint64_t seed = 0; seed < 220; ++seed) {
        Rng rng(6000 + seed);
        GenParams params;
        params.requests = 1 + rng.below(2);
        params.vertices = 4 + rng.below(5);
        params.edge_prob = 0.25 + 0.1 * static_cast<double>(rng.below(4));
        const Instance inst = random_dag_instance(params, rng);
        const Digraph dag = digraph_of(inst);
        const auto pairs = pairs_of(inst);
        const bool direct = solve_dag_disjoint(dag, pairs).has_value();
        const DagReduction reduction = dag_to_1dsp(dag, pairs);
        bool reduced = false;
        bool decided = true;
        if (reduction.backward_pairs.empty()) {
            const SolveVerdict v = solve(reduction.sg, reduction.requests, exhaustive_config());
            decided = v.kind != VerdictKind::budget_exceeded;
            if (v.kind == VerdictKind::solution) {
                reduced = true;
                std::vector<std::vector<Vertex>> pulled;
                for (const auto& p : v.paths) pulled.push_back(pull_back(reduction, p.vertices));
                gate.record(check_dag_solution(dag, pairs, pulled), describe(seed, "subdivision"));
            }
        }
        ++instances;
        positive += direct;
        if ((direct != reduced || !decided) && mismatches++ == 0) first = "seed " + std::to_string(seed);
    }
    Result r;
    r.pass = mismatches == 0 && instances >= 200;
    r.detail = std::to_string(instances) + " DAGs (" + std::to_string(positive) + " feasible), " +
               std::to_string(mismatches) + " mismatches";
    if (!first.empty()) r.detail += "; first: " + first;
    return r;
}

// 8: random configurations, forbidden lists and budgets; every Solution must validate.
Result soundness_fuzz() {
    std::size_t runs = 0, solutions = 0, crashes = 0;
    std::string first;
    for (std::uint64_t seed = 0; seed < 10'000; ++seed) {
        Rng rng(900'000 + seed);
        GenParams params;
        params.vertices = 3 + rng.below(7);
        params.colours = 1 + rng.below(3);
        params.requests = 1 + rng.below(3);
        params.edge_prob = 0.3 + 0.1 * static_cast<double>(rng.below(4));
        Instance inst = random_layered_instance(params, rng);
        const ShortestGraph sg = shortest_graph_of(inst);
        const ComponentCatalog catalog(sg);
        for (Request& r : inst.requests) {
            const auto comps = catalog.with_colour(r.colour);
            if (!comps.empty() && rng.chance(0.3)) r.forbidden.push_back(comps[rng.below(comps.size())]->ref);
        }
        SolveConfig config;
        config.segment_budget = 1 + rng.below(3);
        config.forbidden_budget = rng.below(3);
        config.exhaustive = rng.chance(0.3);
        config.state_budget = std::size_t{1} << (6 + rng.below(10));
        config.scheme_budget = 1 + rng.below(2000);
        ++runs;
        try {
            const SolveVerdict v = solve(sg, inst.requests, config);
            if (v.kind == VerdictKind::solution) {
                ++solutions;
                gate.record(check_coloured_solution(sg, catalog, inst.requests, v.paths), describe(seed, "fuzz"));
            }
        } catch (const std::exception& e) {
            if (crashes++ == 0) first = describe(seed, "fuzz") + ": " + e.what();
        }
    }
    Result r;
    r.pass = gate.failed == 0 && crashes == 0 && runs >= 10'000;
    r.detail = std::to_string(runs) + " fuzz runs (" + std::to_string(solutions) + " solutions), " +
               std::to_string(gate.checked) + " solutions checked across all criteria, " +
               std::to_string(gate.failed) + " invalid, " + std::to_string(crashes) + " exceptions";
    if (!gate.first_failure.empty()) r.detail += "; first invalid: " + gate.first_failure;
    if (!first.empty()) r.detail += "; first exception: " + first;
    return r;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Result()>>> criteria{
        {"1 oracle equivalence", oracle_equivalence},
        {"2 dag solver vs brute force", dag_solver},
        {"3 component offset equation", offset_equation},
        {"4 path/component contiguity", contiguity},
        {"5 unique conflicting component", conflicts},
        {"6 slack-C detour stream", slack_equivalence},
        {"7 dag subdivision", subdivision},
        {"8 soundness gate", soundness_fuzz},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Result r;
        const auto start = Clock::now();
        try {
            r = run();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %s: %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", name, r.detail.c_str(), seconds_since(start));
        std::fflush(stdout);
        failures += !r.pass;
    }
    return failures == 0 ? 0 : 1;
}
