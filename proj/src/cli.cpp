#include "kdsp/cli.hpp"

#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kdsp/bicolored.hpp"
#include "kdsp/errors.hpp"
#include "kdsp/full_solver.hpp"
#include "kdsp/generate.hpp"
#include "kdsp/instance_io.hpp"
#include "kdsp/layering.hpp"
#include "kdsp/oracle.hpp"
#include "kdsp/reductions.hpp"

namespace kdsp {

namespace {

using nlohmann::json;

struct Outcome {
    int code = kFound;
    std::string verdict;
    std::optional<Solution> solution;
    json extra = json::object();
};

void emit(const Outcome& outcome, bool as_json, std::ostream& out) {
    if (as_json) {
        json j = outcome.extra;
        j["verdict"] = outcome.verdict;
        j["exit"] = outcome.code;
        if (outcome.solution) j["paths"] = outcome.solution->paths;
        out << j.dump(2) << '\n';
        return;
    }
    out << "verdict " << outcome.verdict << '\n';
    if (outcome.solution) out << format_solution(*outcome.solution);
}

Solution plain(std::span<const ColouredPath> paths) {
    Solution sol;
    for (const auto& p : paths) sol.paths.push_back(p.vertices);
    return sol;
}

json stats_json(const SolveStats& s) {
    return {{"schemes_tried", s.schemes_tried},
            {"states_visited", s.states_visited},
            {"state_budget_hits", s.state_budget_hits},
            {"deepest_total_segments", s.deepest_total_segments},
            {"scheme_budget_hit", s.scheme_budget_hit},
            {"decided_by_single_scheme", s.decided_by_single_scheme}};
}

Outcome from_verdict(const SolveVerdict& v) {
    Outcome o;
    o.verdict = to_string(v.kind);
    o.code = v.kind == VerdictKind::solution ? kFound
             : v.kind == VerdictKind::no_solution_exhaustive ? kInfeasible
                                                             : kBudget;
    if (v.kind == VerdictKind::solution) o.solution = plain(v.paths);
    o.extra["stats"] = stats_json(v.stats);
    return o;
}

Outcome infeasible(std::string why) {
    Outcome o;
    o.code = kInfeasible;
    o.verdict = "no-solution";
    o.extra["reason"] = std::move(why);
    return o;
}

Outcome solve_dag_reduced(const Instance& inst, const SolveConfig& config) {
    const auto pairs = pairs_of(inst);
    const DagReduction reduction = dag_to_1dsp(digraph_of(inst), pairs);
    if (!reduction.backward_pairs.empty())
        return infeasible("pair " + std::to_string(reduction.backward_pairs.front()) +
                          " runs against the topological order");
    const SolveVerdict v = solve(reduction.sg, reduction.requests, config);
    Outcome o = from_verdict(v);
    if (o.solution)
        for (auto& p : o.solution->paths) p = pull_back(reduction, p);
    return o;
}

// Raw instances: one colour per pair; slack > 0 goes through the detour stream.
Outcome solve_raw(const Instance& inst, const SolveConfig& config, unsigned slack) {
    const Graph g = graph_of(inst);
    const auto pairs = pairs_of(inst);
    if (slack == 0) {
        const KdspInstance k = to_kdsp(g, pairs);
        return from_verdict(solve(k.sg, k.requests, config));
    }

    Outcome result;
    bool over_budget = false;
    std::size_t instances = 0;
    reduce_capprox(g, pairs, slack, [&](const ShortestGraph& sg, const CapproxInstance& sub) {
        ++instances;
        const SolveVerdict v = solve(sg, sub.requests, config);
        if (v.kind == VerdictKind::budget_exceeded) over_budget = true;
        if (v.kind != VerdictKind::solution) return true;
        Solution sol;
        sol.paths = assemble_capprox(sub, v.paths);
        const CheckReport report = check_solution(g, pairs, sol.paths, slack);
        if (!report.ok) throw AssemblyMismatch("detour assembly failed: " + report.violations.front());
        result.solution = std::move(sol);
        return false;
    });
    result.extra["instances_tried"] = instances;
    if (result.solution) {
        result.verdict = "solution";
        result.code = kFound;
    } else if (over_budget || !config.exhaustive) {
        result.verdict = "budget-exceeded";
        result.code = kBudget;
    } else {
        result.verdict = "no-solution-exhaustive";
        result.code = kInfeasible;
    }
    return result;
}

Outcome oracle_outcome(bool found) {
    Outcome o;
    o.code = found ? kFound : kInfeasible;
    o.verdict = found ? "solution" : "no-solution";
    return o;
}

std::vector<Vertex> parse_list(const std::string& text) {
    std::vector<Vertex> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(item, &used);
            if (used != item.size()) throw InputError("");
            values.push_back(static_cast<Vertex>(v));
        } catch (const std::exception&) {
            throw InputError("bad list entry '" + item + "'");
        }
    }
    return values;
}

void write_dot(const ShortestGraph& sg, std::span<const BiColouredComponent> comps, std::ostream& out) {
    out << "graph components {\n";
    for (const auto& e : sg.graph().edges()) out << "  " << e.u << " -- " << e.v << " [color=gray];\n";
    for (std::size_t q = 0; q < comps.size(); ++q)
        for (const auto& e : comps[q].edges)
            out << "  " << e.u << " -- " << e.v << " [label=\"" << to_string(comps[q].ref) << "\", penwidth=2];\n";
    out << "}\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Disjoint shortest paths on layered graphs"};
    app.require_subcommand(1);
    app.fallthrough();
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output");

    std::string input, solution_file, sources_text, colours_text;
    SolveConfig config;
    unsigned slack = 0;
    std::size_t oracle_cap = OracleOptions{}.path_cap;
    bool dot = false;

    auto* layer = app.add_subcommand("layer", "build the shortest graph of a raw instance");
    layer->add_option("input", input)->required();
    layer->add_option("--sources", sources_text, "comma-separated BFS sources (default: pair sources)");

    auto* comps = app.add_subcommand("components", "list bi-coloured components");
    comps->add_option("input", input)->required();
    comps->add_option("--colours", colours_text, "two colours i,j")->required();
    comps->add_flag("--dot", dot, "emit graphviz instead");

    auto* solve_cmd = app.add_subcommand("solve", "run the decomposition solver");
    solve_cmd->add_option("input", input)->required();
    solve_cmd->add_option("--budget", config.segment_budget, "segments per request")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--bf", config.forbidden_budget, "components per forbidden list");
    solve_cmd->add_flag("--exhaustive", config.exhaustive, "cover every decomposition; certifies infeasibility");
    bool no_shortcut = false;
    solve_cmd->add_flag("--no-shortcut", no_shortcut, "always enumerate schemes in exhaustive mode");
    solve_cmd->add_option("--slack", slack, "allowed extra length per path (raw instances)");
    solve_cmd->add_option("--states", config.state_budget, "product states per blind solve")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--schemes", config.scheme_budget, "schemes per solve");
    solve_cmd->add_option("--threads", config.threads, "worker threads")->check(CLI::PositiveNumber);

    auto* oracle_cmd = app.add_subcommand("oracle", "exact brute-force decision");
    oracle_cmd->add_option("input", input)->required();
    oracle_cmd->add_option("--slack", slack, "allowed extra length per path (raw instances)");
    oracle_cmd->add_option("--cap", oracle_cap, "candidate path cap");

    auto* dag_solve = app.add_subcommand("dag-solve", "disjoint paths in a DAG");
    dag_solve->add_option("input", input)->required();
    dag_solve->add_option("--states", config.state_budget, "product state budget")->check(CLI::PositiveNumber);
    bool via_reduction = false;
    dag_solve->add_flag("--via-reduction", via_reduction, "solve the subdivided layered instance instead");

    auto* dag_reduce = app.add_subcommand("dag-reduce", "subdivide a DAG into a layered instance");
    dag_reduce->add_option("input", input)->required();

    GenParams params;
    std::uint64_t seed = 0;
    std::string kind_text = "layered";
    auto* gen = app.add_subcommand("gen", "random instance");
    gen->add_option("--n", params.vertices, "vertices");
    gen->add_option("--k", params.colours, "colours (layered)");
    gen->add_option("--requests", params.requests, "requests");
    gen->add_option("--seed", seed, "64-bit seed");
    gen->add_option("--edge-prob", params.edge_prob, "edge probability")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--kind", kind_text, "raw, layered or dag")->check(CLI::IsMember({"raw", "layered", "dag"}));

    auto* check = app.add_subcommand("check", "validate a solution");
    check->add_option("input", input)->required();
    check->add_option("solution", solution_file)->required();
    check->add_option("--slack", slack, "allowed extra length per path (raw instances)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kFound;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kInputError;
    }

    try {
        if (*gen) {
            const Instance inst = random_instance(parse_instance_kind(kind_text), params, seed);
            out << (as_json ? format_instance_json(inst) : format_instance(inst));
            return kFound;
        }

        const Instance inst = parse_instance(read_file(input));

        if (*layer) {
            if (inst.kind != InstanceKind::raw) throw InputError("layer expects a raw instance");
            const Graph g = graph_of(inst);
            Instance result;
            if (sources_text.empty()) {
                const KdspInstance k = to_kdsp(g, pairs_of(inst));
                result = make_layered_instance(k.sg, k.requests);
            } else {
                const auto sources = parse_list(sources_text);
                for (Vertex s : sources)
                    if (s >= g.vertex_count()) throw InputError("source out of range");
                result = make_layered_instance(build_shortest_graph(g, sources), {});
            }
            out << (as_json ? format_instance_json(result) : format_instance(result));
            return kFound;
        }

        if (*comps) {
            const ShortestGraph sg = shortest_graph_of(inst);
            const auto colours = parse_list(colours_text);
            if (colours.size() != 2) throw InputError("--colours takes two colours");
            for (Colour c : colours)
                if (c >= sg.colour_count()) throw InputError("colour out of range");
            const auto found = components(sg, colours[0], colours[1]);
            if (dot) {
                write_dot(sg, found, out);
            } else if (as_json) {
                json list = json::array();
                for (const auto& comp : found)
                    list.push_back({{"ref", to_string(comp.ref)}, {"offset", comp.offset}, {"vertices", comp.vertices}});
                out << json{{"components", list}}.dump(2) << '\n';
            } else {
                for (const auto& comp : found) {
                    out << "component " << to_string(comp.ref) << " offset " << comp.offset << " vertices";
                    for (Vertex v : comp.vertices) out << ' ' << v;
                    out << '\n';
                }
            }
            return kFound;
        }

        if (*dag_reduce) {
            const DagReduction reduction = dag_to_1dsp(digraph_of(inst), pairs_of(inst));
            const Instance result = make_layered_instance(reduction.sg, reduction.requests);
            out << (as_json ? format_instance_json(result) : format_instance(result));
            for (std::size_t i : reduction.backward_pairs)
                err << "pair " << i << " runs against the topological order and has no solution\n";
            return kFound;
        }

        Outcome outcome;
        config.decisive_shortcut = !no_shortcut;
        if (*solve_cmd) {
            if (slack > 0 && inst.kind != InstanceKind::raw) throw InputError("--slack needs a raw instance");
            switch (inst.kind) {
                case InstanceKind::raw: outcome = solve_raw(inst, config, slack); break;
                case InstanceKind::layered:
                    outcome = from_verdict(solve(shortest_graph_of(inst), inst.requests, config));
                    break;
                case InstanceKind::dag: outcome = solve_dag_reduced(inst, config); break;
            }
        } else if (*oracle_cmd) {
            const OracleOptions options{oracle_cap};
            if (slack > 0 && inst.kind != InstanceKind::raw) throw InputError("--slack needs a raw instance");
            if (inst.kind == InstanceKind::raw) {
                auto found = oracle_solve(graph_of(inst), pairs_of(inst), slack, options);
                outcome = oracle_outcome(found.has_value());
                if (found) outcome.solution = Solution{*found};
            } else if (inst.kind == InstanceKind::layered) {
                const ShortestGraph sg = shortest_graph_of(inst);
                auto found = oracle_solve_coloured(sg, ComponentCatalog(sg), inst.requests, options);
                outcome = oracle_outcome(found.has_value());
                if (found) outcome.solution = plain(*found);
            } else {
                auto found = oracle_solve_dag(digraph_of(inst), pairs_of(inst), options);
                outcome = oracle_outcome(found.has_value());
                if (found) outcome.solution = Solution{*found};
            }
        } else if (*dag_solve) {
            if (via_reduction) {
                config.exhaustive = true;
                outcome = solve_dag_reduced(inst, config);
            } else {
                auto found = solve_dag_disjoint(digraph_of(inst), pairs_of(inst), {config.state_budget});
                outcome = oracle_outcome(found.has_value());
                if (found) outcome.solution = Solution{*found};
            }
        } else if (*check) {
            const Solution sol = parse_solution(read_file(solution_file));
            CheckReport report;
            switch (inst.kind) {
                case InstanceKind::raw: report = check_solution(graph_of(inst), pairs_of(inst), sol.paths, slack); break;
                case InstanceKind::layered: {
                    const ShortestGraph sg = shortest_graph_of(inst);
                    std::vector<ColouredPath> paths;
                    for (std::size_t i = 0; i < sol.paths.size(); ++i)
                        paths.push_back({i < inst.requests.size() ? inst.requests[i].colour : 0, sol.paths[i]});
                    report = check_coloured_solution(sg, ComponentCatalog(sg), inst.requests, paths);
                    break;
                }
                case InstanceKind::dag: report = check_dag_solution(digraph_of(inst), pairs_of(inst), sol.paths); break;
            }
            outcome.code = report.ok ? kFound : kInfeasible;
            outcome.verdict = report.ok ? "valid" : "invalid";
            outcome.extra["violations"] = report.violations;
            if (!as_json)
                for (const auto& v : report.violations) err << v << '\n';
        }
        emit(outcome, as_json, out);
        return outcome.code;
    } catch (const Disconnected& e) {
        emit(infeasible(e.what()), as_json, out);
        return kInfeasible;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const PreconditionViolation& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const CyclicInput& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const StateBudgetExceeded& e) {
        Outcome o{kBudget, "budget-exceeded", std::nullopt, {{"reason", e.what()}}};
        emit(o, as_json, out);
        return kBudget;
    } catch (const EnumerationCapExceeded& e) {
        Outcome o{kBudget, "budget-exceeded", std::nullopt, {{"reason", e.what()}}};
        emit(o, as_json, out);
        return kBudget;
    }
}

}  // namespace kdsp
