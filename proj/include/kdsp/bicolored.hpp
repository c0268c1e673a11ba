#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kdsp/graph.hpp"

namespace kdsp {

/// A connected component of the edges carrying both colours a < b, split by
/// whether the two orientations agree (plus) or oppose (minus). For every member
/// x: level_b(x) = level_a(x) + offset (plus) or level_b(x) = offset - level_a(x) (minus).
struct BiColouredComponent {
    ComponentRef ref;
    std::vector<Vertex> vertices;  ///< sorted
    std::vector<Edge> edges;       ///< sorted
    Level offset = 0;
    VertexSet members;

    Colour colour_a() const { return ref.colour_a; }
    Colour colour_b() const { return ref.colour_b; }
    Sign sign() const { return ref.sign; }
    bool has_colour(Colour c) const { return c == ref.colour_a || c == ref.colour_b; }
    Colour other_colour(Colour c) const { return c == ref.colour_a ? ref.colour_b : ref.colour_a; }
    bool contains(Vertex v) const { return v < members.size() && members.test(v); }
};

/// Plus components first, then minus components; each group ordered by smallest edge.
/// Throws PreconditionViolation unless i != j and both are valid colours.
std::vector<BiColouredComponent> components(const ShortestGraph& sg, Colour i, Colour j);

/// All bi-coloured components of a shortest graph, computed once.
class ComponentCatalog {
public:
    ComponentCatalog() = default;
    explicit ComponentCatalog(const ShortestGraph& sg);

    std::span<const BiColouredComponent> all() const { return all_; }
    /// Throws PreconditionViolation for a reference that names no component.
    const BiColouredComponent& get(const ComponentRef& ref) const;
    bool contains(const ComponentRef& ref) const;
    /// Components of colours {i, j}, both signs.
    std::vector<const BiColouredComponent*> between(Colour i, Colour j) const;
    std::vector<const BiColouredComponent*> with_colour(Colour c) const;

private:
    std::vector<BiColouredComponent> all_;
};

/// Half-open range of path positions.
struct IndexRange {
    std::size_t first = 0;
    std::size_t last = 0;

    bool empty() const { return first >= last; }
    std::size_t size() const { return empty() ? 0 : last - first; }
    bool operator==(const IndexRange&) const = default;
};

/// Positions of `path` lying in `comp`, as one contiguous range. Throws
/// NonContiguousIntersection if they are not contiguous, and
/// PreconditionViolation if the path colour is not one of the component's.
IndexRange path_component_intersection(const ShortestGraph& sg, const ColouredPath& path,
                                       const BiColouredComponent& comp);

/// How witness paths inside a component are searched for.
enum class WitnessSearch {
    full_dag,         ///< colour reachability in the whole graph, witness vertex in S
    component_edges,  ///< reachability along the component's own edges only
};

struct Conflict {
    BiColouredComponent component;
    Vertex s1 = 0, t1 = 0;  ///< first and last vertex of P_i inside the component
    Vertex s2 = 0, t2 = 0;  ///< same for P_j
};

/// Whether `comp` is a conflicting component for the colour-i path p_i and the
/// colour-j path p_j. Fills `out` when it is.
bool is_conflicting_component(const ShortestGraph& sg, const ColouredPath& p_i,
                              const ColouredPath& p_j, const BiColouredComponent& comp,
                              WitnessSearch mode = WitnessSearch::full_dag,
                              Conflict* out = nullptr);

/// Every conflicting component of the pair (at most one on valid inputs).
std::vector<Conflict> conflicting_components(const ShortestGraph& sg, const ComponentCatalog& catalog,
                                             const ColouredPath& p_i, const ColouredPath& p_j,
                                             WitnessSearch mode = WitnessSearch::full_dag);

/// First conflicting component in catalog order, if any. Paths must have
/// different colours (PreconditionViolation otherwise).
std::optional<Conflict> find_conflicting_component(const ShortestGraph& sg,
                                                   const ColouredPath& p_i,
                                                   const ColouredPath& p_j);
std::optional<Conflict> find_conflicting_component(const ShortestGraph& sg,
                                                   const ComponentCatalog& catalog,
                                                   const ColouredPath& p_i,
                                                   const ColouredPath& p_j);

/// p_i sees p_j: some internal vertex of p_i continues to p_i's target along a
/// colour path through an internal vertex of p_j. Throws PreconditionViolation
/// unless p_i is a path of its colour and the two are internally vertex-disjoint.
bool sees(const ShortestGraph& sg, const ColouredPath& p_i, const ColouredPath& p_j);

/// Neither path sees the other.
bool is_blind(const ShortestGraph& sg, const ColouredPath& p_i, const ColouredPath& p_j);

/// No internal vertex of either path lies on the other.
bool internally_disjoint(std::span<const Vertex> a, std::span<const Vertex> b);

}  // namespace kdsp
