#pragma once

#include <cstdint>
#include <random>

#include "kdsp/instance_io.hpp"

namespace kdsp {

/// Seeded source of randomness with platform-independent draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);
    bool chance(double p);

private:
    std::mt19937_64 engine_;
};

struct GenParams {
    std::size_t vertices = 8;
    std::size_t colours = 2;    ///< BFS sources (layered instances)
    std::size_t requests = 2;
    double edge_prob = 0.35;
};

Graph random_graph(std::size_t n, double edge_prob, Rng& rng);

/// Shortest graph from random sources; each request joins two distinct vertices
/// comparable in its colour.
Instance random_layered_instance(const GenParams& params, Rng& rng);

/// Graph with connected, non-identical terminal pairs.
Instance random_raw_instance(const GenParams& params, Rng& rng);

/// DAG whose arcs follow a random vertex order; terminals pairwise distinct.
Instance random_dag_instance(const GenParams& params, Rng& rng);

Instance random_instance(InstanceKind kind, const GenParams& params, std::uint64_t seed);

}  // namespace kdsp
