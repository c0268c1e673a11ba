#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kdsp/bicolored.hpp"
#include "kdsp/blind_solver.hpp"
#include "kdsp/graph.hpp"

namespace kdsp {

/// One guessed piece of a request: endpoints in the request's own orientation,
/// the colour it is solved in, and the components it must avoid.
struct Segment {
    Vertex from = 0;
    Vertex to = 0;
    Colour colour = 0;
    std::vector<ComponentRef> forbidden;

    bool operator==(const Segment&) const = default;
};

/// Per request, a chain of segments from s to t.
struct SegmentScheme {
    std::vector<std::vector<Segment>> requests;

    std::size_t total_segments() const;
    bool operator==(const SegmentScheme&) const = default;
};

struct SolveConfig {
    std::size_t segment_budget = 2;    ///< B: segments per request
    std::size_t forbidden_budget = 1;  ///< B_F: components per forbidden list
    std::size_t state_budget = std::size_t{1} << 20;  ///< product tuples per blind solve
    std::size_t scheme_budget = 5'000'000;            ///< schemes per solve call
    /// Lifts B to the longest request distance + 1 so every decomposition into
    /// single edges is covered; only then can infeasibility be certified.
    bool exhaustive = false;
    /// In exhaustive mode, decide from the one-segment scheme alone when no two
    /// requests of different colours share a vertex of their colour intervals.
    bool decisive_shortcut = true;
    unsigned threads = 1;
};

enum class VerdictKind { solution, no_solution_exhaustive, budget_exceeded };

std::string to_string(VerdictKind kind);

struct SolveStats {
    std::size_t schemes_tried = 0;
    std::size_t states_visited = 0;
    std::size_t state_budget_hits = 0;
    std::size_t deepest_total_segments = 0;
    bool scheme_budget_hit = false;
    bool decided_by_single_scheme = false;
};

struct SolveVerdict {
    VerdictKind kind = VerdictKind::budget_exceeded;
    std::vector<ColouredPath> paths;        ///< one per request, low-to-high in its colour
    std::optional<SegmentScheme> scheme;    ///< the scheme that produced the solution
    SolveStats stats;
};

/// Visits every scheme within the budgets, ordered by total segment count.
/// Requests are taken low-to-high in their colour. Junctions avoid every
/// request terminal and each other. A segment may switch to colour c' only when
/// a {c, c'} component holds both endpoints; its forbidden list draws from
/// components of its colour that avoid both endpoints and meet its interval.
/// `visit` returns false to stop.
void enumerate_schemes(const ShortestGraph& sg, const ComponentCatalog& catalog,
                       std::span<const Request> requests, const SolveConfig& config,
                       const std::function<bool(const SegmentScheme&)>& visit);

std::size_t count_schemes(const ShortestGraph& sg, const ComponentCatalog& catalog,
                          std::span<const Request> requests, const SolveConfig& config);

/// Concatenates per-segment paths (request-major, each low-to-high in its
/// segment colour) into one colour-c(i) path per request. Throws
/// AssemblyMismatch when endpoints do not chain or the result is not a path of
/// the request colour.
std::vector<ColouredPath> assemble(const ShortestGraph& sg, std::span<const Request> requests,
                                   const SegmentScheme& scheme,
                                   std::span<const ColouredPath> segment_paths);

/// Decides the k-DSP instance within the configured budgets. Shared terminals
/// are split internally. Every Solution is re-validated before it is returned.
SolveVerdict solve(const ShortestGraph& sg, std::span<const Request> requests,
                   const SolveConfig& config = {});

}  // namespace kdsp
