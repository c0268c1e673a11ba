#include "kdsp/bicolored.hpp"

#include <algorithm>
#include <queue>

#include "kdsp/errors.hpp"

namespace kdsp {

namespace {

// Connected pieces of `edges` (given sorted), ordered by smallest edge.
std::vector<std::vector<Edge>> split_connected(std::size_t n, const std::vector<Edge>& edges) {
    std::vector<std::vector<std::size_t>> incident(n);
    for (std::size_t q = 0; q < edges.size(); ++q) {
        incident[edges[q].u].push_back(q);
        incident[edges[q].v].push_back(q);
    }
    std::vector<bool> taken(edges.size(), false);
    std::vector<std::vector<Edge>> pieces;
    for (std::size_t start = 0; start < edges.size(); ++start) {
        if (taken[start]) continue;
        std::vector<Edge> piece;
        std::queue<std::size_t> todo;
        taken[start] = true;
        todo.push(start);
        while (!todo.empty()) {
            const Edge e = edges[todo.front()];
            todo.pop();
            piece.push_back(e);
            for (Vertex x : {e.u, e.v})
                for (std::size_t q : incident[x])
                    if (!taken[q]) {
                        taken[q] = true;
                        todo.push(q);
                    }
        }
        std::sort(piece.begin(), piece.end());
        pieces.push_back(std::move(piece));
    }
    return pieces;
}

BiColouredComponent make_component(const ShortestGraph& sg, ComponentRef ref,
                                   std::vector<Edge> edges) {
    BiColouredComponent comp;
    comp.ref = ref;
    comp.members.resize(sg.vertex_count());
    for (Edge e : edges) {
        comp.members.set(e.u);
        comp.members.set(e.v);
    }
    for (auto v = comp.members.find_first(); v != VertexSet::npos; v = comp.members.find_next(v))
        comp.vertices.push_back(static_cast<Vertex>(v));
    comp.edges = std::move(edges);
    const Vertex x = comp.vertices.front();
    comp.offset = ref.sign == Sign::plus ? sg.level(ref.colour_b, x) - sg.level(ref.colour_a, x)
                                         : sg.level(ref.colour_b, x) + sg.level(ref.colour_a, x);
    return comp;
}

}  // namespace

std::vector<BiColouredComponent> components(const ShortestGraph& sg, Colour i, Colour j) {
    if (i == j || i >= sg.colour_count() || j >= sg.colour_count())
        throw PreconditionViolation("components need two distinct valid colours");
    const Colour a = std::min(i, j), b = std::max(i, j);

    std::vector<Edge> plus, minus;
    for (Edge e : sg.graph().edges()) {
        if (!sg.has_colour(a, e.u, e.v) || !sg.has_colour(b, e.u, e.v)) continue;
        const Level da = sg.level(a, e.v) - sg.level(a, e.u);
        const Level db = sg.level(b, e.v) - sg.level(b, e.u);
        (da == db ? plus : minus).push_back(e);
    }

    std::vector<BiColouredComponent> result;
    for (Sign sign : {Sign::plus, Sign::minus}) {
        auto pieces = split_connected(sg.vertex_count(), sign == Sign::plus ? plus : minus);
        std::uint32_t index = 0;
        for (auto& piece : pieces)
            result.push_back(make_component(sg, {a, b, sign, index++}, std::move(piece)));
    }
    return result;
}

ComponentCatalog::ComponentCatalog(const ShortestGraph& sg) {
    for (Colour a = 0; a < sg.colour_count(); ++a)
        for (Colour b = a + 1; b < sg.colour_count(); ++b) {
            auto comps = components(sg, a, b);
            std::move(comps.begin(), comps.end(), std::back_inserter(all_));
        }
}

bool ComponentCatalog::contains(const ComponentRef& ref) const {
    return std::any_of(all_.begin(), all_.end(), [&](const auto& c) { return c.ref == ref; });
}

const BiColouredComponent& ComponentCatalog::get(const ComponentRef& ref) const {
    auto it = std::lower_bound(all_.begin(), all_.end(), ref,
                               [](const BiColouredComponent& c, const ComponentRef& r) { return c.ref < r; });
    if (it == all_.end() || it->ref != ref)
        throw PreconditionViolation("no bi-coloured component " + to_string(ref));
    return *it;
}

std::vector<const BiColouredComponent*> ComponentCatalog::between(Colour i, Colour j) const {
    const Colour a = std::min(i, j), b = std::max(i, j);
    std::vector<const BiColouredComponent*> result;
    for (const auto& c : all_)
        if (c.colour_a() == a && c.colour_b() == b) result.push_back(&c);
    return result;
}

std::vector<const BiColouredComponent*> ComponentCatalog::with_colour(Colour c) const {
    std::vector<const BiColouredComponent*> result;
    for (const auto& comp : all_)
        if (comp.has_colour(c)) result.push_back(&comp);
    return result;
}

IndexRange path_component_intersection(const ShortestGraph& sg, const ColouredPath& path,
                                       const BiColouredComponent& comp) {
    (void)sg;
    if (!comp.has_colour(path.colour))
        throw PreconditionViolation("path colour is not a colour of the component");
    std::optional<std::size_t> first;
    std::size_t last = 0;
    for (std::size_t q = 0; q < path.vertices.size(); ++q) {
        if (!comp.contains(path.vertices[q])) continue;
        if (first && last != q)
            throw NonContiguousIntersection("path meets component " + to_string(comp.ref) +
                                            " in more than one stretch");
        if (!first) first = q;
        last = q + 1;
    }
    if (!first) return {};
    return {*first, last};
}

namespace {

// Colour-c reachability restricted to the component's own edges.
BitMatrix component_reach(const ShortestGraph& sg, const BiColouredComponent& comp, Colour c) {
    Digraph dag(sg.vertex_count());
    for (Edge e : comp.edges) {
        if (sg.level(c, e.v) == sg.level(c, e.u) + 1) dag.add_arc(e.u, e.v);
        else dag.add_arc(e.v, e.u);
    }
    dag.finalize();
    return transitive_closure(dag);
}

}  // namespace

bool is_conflicting_component(const ShortestGraph& sg, const ColouredPath& p_i,
                              const ColouredPath& p_j, const BiColouredComponent& comp,
                              WitnessSearch mode, Conflict* out) {
    const Colour i = p_i.colour, j = p_j.colour;
    if (i == j || !comp.has_colour(i) || !comp.has_colour(j)) return false;

    const IndexRange r1 = path_component_intersection(sg, p_i, comp);
    const IndexRange r2 = path_component_intersection(sg, p_j, comp);
    if (r1.empty() || r2.empty()) return false;
    const Vertex s1 = p_i.vertices[r1.first], t1 = p_i.vertices[r1.last - 1];
    const Vertex s2 = p_j.vertices[r2.first], t2 = p_j.vertices[r2.last - 1];

    BitMatrix local_i, local_j;
    if (mode == WitnessSearch::component_edges) {
        local_i = component_reach(sg, comp, i);
        local_j = component_reach(sg, comp, j);
    }
    const BitMatrix& reach_i = mode == WitnessSearch::full_dag ? sg.reach(i) : local_i;
    const BitMatrix& reach_j = mode == WitnessSearch::full_dag ? sg.reach(j) : local_j;

    for (Vertex v : comp.vertices) {
        if (v == s1 || v == t1 || v == s2 || v == t2) continue;
        if (reach_i.test(s1, v) && reach_i.test(v, t1) && reach_j.test(s2, v) && reach_j.test(v, t2)) {
            if (out) *out = Conflict{comp, s1, t1, s2, t2};
            return true;
        }
    }
    return false;
}

std::vector<Conflict> conflicting_components(const ShortestGraph& sg, const ComponentCatalog& catalog,
                                             const ColouredPath& p_i, const ColouredPath& p_j,
                                             WitnessSearch mode) {
    if (p_i.colour == p_j.colour)
        throw PreconditionViolation("conflicts are defined for paths of different colours");
    std::vector<Conflict> result;
    for (const auto* comp : catalog.between(p_i.colour, p_j.colour)) {
        Conflict conflict;
        if (is_conflicting_component(sg, p_i, p_j, *comp, mode, &conflict))
            result.push_back(std::move(conflict));
    }
    return result;
}

std::optional<Conflict> find_conflicting_component(const ShortestGraph& sg,
                                                   const ComponentCatalog& catalog,
                                                   const ColouredPath& p_i,
                                                   const ColouredPath& p_j) {
    if (p_i.colour == p_j.colour)
        throw PreconditionViolation("conflicts are defined for paths of different colours");
    for (const auto* comp : catalog.between(p_i.colour, p_j.colour)) {
        Conflict conflict;
        if (is_conflicting_component(sg, p_i, p_j, *comp, WitnessSearch::full_dag, &conflict))
            return conflict;
    }
    return std::nullopt;
}

std::optional<Conflict> find_conflicting_component(const ShortestGraph& sg,
                                                   const ColouredPath& p_i,
                                                   const ColouredPath& p_j) {
    if (p_i.colour == p_j.colour)
        throw PreconditionViolation("conflicts are defined for paths of different colours");
    for (const auto& comp : components(sg, p_i.colour, p_j.colour)) {
        Conflict conflict;
        if (is_conflicting_component(sg, p_i, p_j, comp, WitnessSearch::full_dag, &conflict))
            return conflict;
    }
    return std::nullopt;
}

bool internally_disjoint(std::span<const Vertex> a, std::span<const Vertex> b) {
    const auto internal_hits = [](std::span<const Vertex> inner, std::span<const Vertex> other) {
        if (inner.size() < 3) return false;
        for (std::size_t q = 1; q + 1 < inner.size(); ++q)
            if (std::find(other.begin(), other.end(), inner[q]) != other.end()) return true;
        return false;
    };
    return !internal_hits(a, b) && !internal_hits(b, a);
}

bool sees(const ShortestGraph& sg, const ColouredPath& p_i, const ColouredPath& p_j) {
    if (!is_colour_path(sg, p_i)) throw PreconditionViolation("seeing path is not a path of its colour");
    if (p_j.vertices.empty()) throw PreconditionViolation("empty path");
    if (!internally_disjoint(p_i.vertices, p_j.vertices))
        throw PreconditionViolation("paths are not internally vertex-disjoint");

    const BitMatrix& reach = sg.reach(p_i.colour);
    const Vertex target = p_i.back();
    const auto& xs = p_i.vertices;
    const auto& ys = p_j.vertices;
    for (std::size_t a = 1; a + 1 < xs.size(); ++a)
        for (std::size_t b = 1; b + 1 < ys.size(); ++b)
            if (ys[b] < sg.vertex_count() && reach.test(xs[a], ys[b]) && reach.test(ys[b], target))
                return true;
    return false;
}

bool is_blind(const ShortestGraph& sg, const ColouredPath& p_i, const ColouredPath& p_j) {
    return !sees(sg, p_i, p_j) && !sees(sg, p_j, p_i);
}

}  // namespace kdsp
