#include "kdsp/instance_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "kdsp/errors.hpp"

namespace kdsp {

using nlohmann::json;

std::string to_string(InstanceKind kind) {
    switch (kind) {
        case InstanceKind::raw: return "raw";
        case InstanceKind::layered: return "layered";
        case InstanceKind::dag: return "dag";
    }
    return "raw";
}

InstanceKind parse_instance_kind(std::string_view word) {
    if (word == "raw") return InstanceKind::raw;
    if (word == "layered") return InstanceKind::layered;
    if (word == "dag") return InstanceKind::dag;
    throw InputError("unknown instance kind '" + std::string(word) + "'");
}

namespace {

std::vector<Request> pairs_as_requests(std::span<const TerminalPair> pairs) {
    std::vector<Request> requests;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        requests.push_back({pairs[i].first, pairs[i].second, static_cast<Colour>(i), {}});
    return requests;
}

class LineReader {
public:
    LineReader(std::string_view line, std::size_t number) : line_(line), number_(number) {}

    bool done() {
        skip_space();
        return pos_ >= line_.size();
    }

    std::string_view word() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
        if (start == pos_) fail("unexpected end of line");
        return line_.substr(start, pos_ - start);
    }

    std::uint64_t number() {
        const std::string_view w = word();
        std::uint64_t value = 0;
        const auto [end, ec] = std::from_chars(w.data(), w.data() + w.size(), value);
        if (ec != std::errc{} || end != w.data() + w.size()) fail("expected a number, got '" + std::string(w) + "'");
        return value;
    }

    void finish() {
        if (!done()) fail("trailing input");
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw InputError("line " + std::to_string(number_) + ": " + why);
    }

private:
    void skip_space() {
        while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
    }

    std::string_view line_;
    std::size_t number_;
    std::size_t pos_ = 0;
};

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t number = 0;
    while (!text.empty()) {
        const std::size_t cut = text.find('\n');
        std::string_view line = text.substr(0, cut);
        text = cut == std::string_view::npos ? std::string_view{} : text.substr(cut + 1);
        ++number;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        LineReader reader(line, number);
        if (reader.done()) continue;
        fn(reader);
    }
}

Vertex vertex_in(LineReader& in, std::size_t n) {
    const auto v = in.number();
    if (v >= n) in.fail("vertex " + std::to_string(v) + " out of range");
    return static_cast<Vertex>(v);
}

void check_instance(const Instance& inst) {
    const auto n = inst.vertex_count;
    const auto in_range = [n](Vertex v) { return v < n; };
    for (const auto& e : inst.edges)
        if (!in_range(e.v) || e.u == e.v) throw InputError("bad edge");
    for (const auto& [u, v] : inst.arcs)
        if (!in_range(u) || !in_range(v) || u == v) throw InputError("bad arc");
    if (inst.kind != InstanceKind::dag && !inst.arcs.empty()) throw InputError("arcs outside a dag instance");
    if (inst.kind == InstanceKind::dag && !inst.edges.empty()) throw InputError("edges inside a dag instance");
    if (inst.kind != InstanceKind::layered && !inst.levels.empty()) throw InputError("levels outside a layered instance");
    if (inst.kind == InstanceKind::layered && inst.levels.empty()) throw InputError("layered instance without levels");
    for (const auto& row : inst.levels) {
        if (row.size() != n) throw InputError("level row of wrong length");
        for (Level x : row)
            if (x < kUnlevelled) throw InputError("negative level");
    }
    for (std::size_t i = 0; i < inst.requests.size(); ++i) {
        const Request& r = inst.requests[i];
        if (!in_range(r.s) || !in_range(r.t)) throw InputError("request terminal out of range");
        if (inst.kind == InstanceKind::layered) {
            if (r.colour >= inst.levels.size()) throw InputError("request colour out of range");
        } else {
            if (r.colour != i) throw InputError("unlayered requests are coloured by their index");
            if (!r.forbidden.empty()) throw InputError("forbidden lists need a layered instance");
        }
        for (const auto& ref : r.forbidden)
            if (ref.colour_a >= ref.colour_b || ref.colour_b >= inst.levels.size())
                throw InputError("bad component reference");
    }
}

void normalise(Instance& inst) {
    std::sort(inst.edges.begin(), inst.edges.end());
    inst.edges.erase(std::unique(inst.edges.begin(), inst.edges.end()), inst.edges.end());
    std::sort(inst.arcs.begin(), inst.arcs.end());
    inst.arcs.erase(std::unique(inst.arcs.begin(), inst.arcs.end()), inst.arcs.end());
}

Instance parse_text(std::string_view text) {
    Instance inst;
    std::optional<std::array<std::uint64_t, 3>> header;
    std::map<std::uint64_t, std::vector<Level>> levels;
    std::vector<std::pair<std::uint64_t, ComponentRef>> forbids;
    std::optional<InstanceKind> declared;

    for_each_line(text, [&](LineReader& in) {
        if (!header) {
            const auto n = in.number(), k = in.number(), l = in.number();
            in.finish();
            header = {n, k, l};
            inst.vertex_count = n;
            return;
        }
        const std::string_view tag = in.word();
        const auto n = inst.vertex_count;
        if (tag == "kind") {
            declared = parse_instance_kind(in.word());
        } else if (tag == "e") {
            const Vertex u = vertex_in(in, n), v = vertex_in(in, n);
            if (u == v) in.fail("self-loop");
            inst.edges.emplace_back(u, v);
        } else if (tag == "a") {
            const Vertex u = vertex_in(in, n), v = vertex_in(in, n);
            if (u == v) in.fail("self-loop");
            inst.arcs.emplace_back(u, v);
        } else if (tag == "L") {
            const auto c = in.number();
            if (levels.count(c)) in.fail("colour " + std::to_string(c) + " levelled twice");
            std::vector<Level> row;
            for (std::size_t v = 0; v < n; ++v) {
                const std::string_view w = in.word();
                if (w == "-") {
                    row.push_back(kUnlevelled);
                    continue;
                }
                Level x = 0;
                const auto [end, ec] = std::from_chars(w.data(), w.data() + w.size(), x);
                if (ec != std::errc{} || end != w.data() + w.size() || x < 0) in.fail("bad level '" + std::string(w) + "'");
                row.push_back(x);
            }
            levels[c] = std::move(row);
        } else if (tag == "r") {
            Request r;
            r.s = vertex_in(in, n);
            r.t = vertex_in(in, n);
            r.colour = in.done() ? static_cast<Colour>(inst.requests.size()) : static_cast<Colour>(in.number());
            inst.requests.push_back(std::move(r));
        } else if (tag == "f") {
            const auto i = in.number();
            ComponentRef ref;
            ref.colour_a = static_cast<Colour>(in.number());
            ref.colour_b = static_cast<Colour>(in.number());
            const std::string_view sign = in.word();
            if (sign != "+" && sign != "-") in.fail("sign must be + or -");
            ref.sign = sign == "+" ? Sign::plus : Sign::minus;
            ref.index = static_cast<std::uint32_t>(in.number());
            forbids.emplace_back(i, ref);
        } else {
            in.fail("unknown record '" + std::string(tag) + "'");
        }
        in.finish();
    });
    if (!header) throw InputError("missing header");

    if (!inst.arcs.empty() && (!inst.edges.empty() || !levels.empty()))
        throw InputError("arcs cannot be mixed with edges or levels");
    const InstanceKind inferred = !inst.arcs.empty() ? InstanceKind::dag
                                  : !levels.empty()  ? InstanceKind::layered
                                                     : InstanceKind::raw;
    inst.kind = declared.value_or(inferred);

    for (std::uint64_t c = 0; c < levels.size(); ++c) {
        auto it = levels.find(c);
        if (it == levels.end()) throw InputError("levels of colour " + std::to_string(c) + " missing");
        inst.levels.push_back(std::move(it->second));
    }
    for (auto& [i, ref] : forbids) {
        if (i >= inst.requests.size()) throw InputError("forbidden list for unknown request");
        inst.requests[i].forbidden.push_back(ref);
    }
    const auto [n, k, l] = *header;
    if (l != inst.requests.size()) throw InputError("header announces " + std::to_string(l) + " requests");
    if (k != inst.colour_count()) throw InputError("header announces " + std::to_string(k) + " colours");
    normalise(inst);
    check_instance(inst);
    return inst;
}

json ref_json(const ComponentRef& ref) {
    return {ref.colour_a, ref.colour_b, ref.sign == Sign::plus ? "+" : "-", ref.index};
}

ComponentRef ref_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) throw InputError("component reference must be [a, b, sign, index]");
    ComponentRef ref;
    ref.colour_a = j[0].get<Colour>();
    ref.colour_b = j[1].get<Colour>();
    const auto sign = j[2].get<std::string>();
    if (sign != "+" && sign != "-") throw InputError("sign must be + or -");
    ref.sign = sign == "+" ? Sign::plus : Sign::minus;
    ref.index = j[3].get<std::uint32_t>();
    return ref;
}

Instance parse_json(std::string_view text) {
    try {
        const json j = json::parse(text);
        Instance inst;
        inst.kind = parse_instance_kind(j.at("kind").get<std::string>());
        inst.vertex_count = j.at("n").get<std::size_t>();
        for (const auto& e : j.value("edges", json::array())) inst.edges.emplace_back(e.at(0).get<Vertex>(), e.at(1).get<Vertex>());
        for (const auto& a : j.value("arcs", json::array())) inst.arcs.emplace_back(a.at(0).get<Vertex>(), a.at(1).get<Vertex>());
        for (const auto& row : j.value("levels", json::array())) {
            std::vector<Level> levels;
            for (const auto& x : row) levels.push_back(x.is_null() ? kUnlevelled : x.get<Level>());
            inst.levels.push_back(std::move(levels));
        }
        for (const auto& r : j.value("requests", json::array())) {
            Request req;
            req.s = r.at("s").get<Vertex>();
            req.t = r.at("t").get<Vertex>();
            req.colour = r.contains("colour") ? r.at("colour").get<Colour>() : static_cast<Colour>(inst.requests.size());
            for (const auto& f : r.value("forbidden", json::array())) req.forbidden.push_back(ref_from_json(f));
            inst.requests.push_back(std::move(req));
        }
        for (const auto& e : inst.edges)
            if (e.v >= inst.vertex_count || e.u == e.v) throw InputError("bad edge");
        normalise(inst);
        check_instance(inst);
        return inst;
    } catch (const json::exception& e) {
        throw InputError(std::string("bad JSON instance: ") + e.what());
    }
}

}  // namespace

Instance make_raw_instance(const Graph& g, std::span<const TerminalPair> pairs) {
    Instance inst;
    inst.kind = InstanceKind::raw;
    inst.vertex_count = g.vertex_count();
    inst.edges = g.edges();
    inst.requests = pairs_as_requests(pairs);
    return inst;
}

Instance make_layered_instance(const ShortestGraph& sg, std::span<const Request> requests) {
    Instance inst;
    inst.kind = InstanceKind::layered;
    inst.vertex_count = sg.vertex_count();
    inst.edges = sg.graph().edges();
    inst.levels = sg.all_levels();
    inst.requests.assign(requests.begin(), requests.end());
    return inst;
}

Instance make_dag_instance(const Digraph& dag, std::span<const TerminalPair> pairs) {
    Instance inst;
    inst.kind = InstanceKind::dag;
    inst.vertex_count = dag.vertex_count();
    inst.arcs = dag.arcs();
    normalise(inst);
    inst.requests = pairs_as_requests(pairs);
    return inst;
}

Graph graph_of(const Instance& instance) { return Graph(instance.vertex_count, instance.edges); }

ShortestGraph shortest_graph_of(const Instance& instance) {
    if (instance.kind != InstanceKind::layered) throw InputError("not a layered instance");
    return ShortestGraph(graph_of(instance), instance.levels);
}

Digraph digraph_of(const Instance& instance) {
    if (instance.kind != InstanceKind::dag) throw InputError("not a dag instance");
    return Digraph(instance.vertex_count, instance.arcs);
}

std::vector<TerminalPair> pairs_of(const Instance& instance) {
    std::vector<TerminalPair> pairs;
    for (const Request& r : instance.requests) pairs.emplace_back(r.s, r.t);
    return pairs;
}

Instance parse_instance(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return parse_json(text);
    return parse_text(text);
}

std::string format_instance(const Instance& inst) {
    std::ostringstream out;
    out << inst.vertex_count << ' ' << inst.colour_count() << ' ' << inst.requests.size() << '\n';
    if (inst.kind == InstanceKind::dag && inst.arcs.empty()) out << "kind dag\n";
    for (const auto& e : inst.edges) out << "e " << e.u << ' ' << e.v << '\n';
    for (const auto& [u, v] : inst.arcs) out << "a " << u << ' ' << v << '\n';
    for (std::size_t c = 0; c < inst.levels.size(); ++c) {
        out << "L " << c;
        for (Level x : inst.levels[c]) {
            out << ' ';
            if (x == kUnlevelled) out << '-';
            else out << x;
        }
        out << '\n';
    }
    for (const Request& r : inst.requests) {
        out << "r " << r.s << ' ' << r.t;
        if (inst.kind == InstanceKind::layered) out << ' ' << r.colour;
        out << '\n';
    }
    for (std::size_t i = 0; i < inst.requests.size(); ++i)
        for (const auto& ref : inst.requests[i].forbidden) out << "f " << i << ' ' << to_string(ref) << '\n';
    return out.str();
}

std::string format_instance_json(const Instance& inst) {
    json j;
    j["kind"] = to_string(inst.kind);
    j["n"] = inst.vertex_count;
    if (inst.kind != InstanceKind::dag) {
        j["edges"] = json::array();
        for (const auto& e : inst.edges) j["edges"].push_back({e.u, e.v});
    } else {
        j["arcs"] = json::array();
        for (const auto& [u, v] : inst.arcs) j["arcs"].push_back({u, v});
    }
    if (inst.kind == InstanceKind::layered) {
        j["levels"] = json::array();
        for (const auto& row : inst.levels) {
            json levels = json::array();
            for (Level x : row) levels.push_back(x == kUnlevelled ? json(nullptr) : json(x));
            j["levels"].push_back(std::move(levels));
        }
    }
    j["requests"] = json::array();
    for (const Request& r : inst.requests) {
        json req{{"s", r.s}, {"t", r.t}};
        if (inst.kind == InstanceKind::layered) req["colour"] = r.colour;
        if (!r.forbidden.empty()) {
            req["forbidden"] = json::array();
            for (const auto& ref : r.forbidden) req["forbidden"].push_back(ref_json(ref));
        }
        j["requests"].push_back(std::move(req));
    }
    return j.dump(2) + "\n";
}

Solution parse_solution(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') {
        try {
            const json j = json::parse(text);
            Solution sol;
            for (const auto& p : j.at("paths")) sol.paths.push_back(p.get<std::vector<Vertex>>());
            return sol;
        } catch (const json::exception& e) {
            throw InputError(std::string("bad JSON solution: ") + e.what());
        }
    }
    Solution sol;
    std::optional<std::uint64_t> count;
    std::vector<bool> seen;
    for_each_line(text, [&](LineReader& in) {
        const std::string_view tag = in.word();
        if (!count) {
            if (tag != "solution") in.fail("expected 'solution' header");
            count = in.number();
            sol.paths.resize(*count);
            seen.assign(*count, false);
        } else if (tag == "p") {
            const auto i = in.number();
            if (i >= *count) in.fail("path index out of range");
            if (seen[i]) in.fail("path " + std::to_string(i) + " given twice");
            seen[i] = true;
            while (!in.done()) sol.paths[i].push_back(static_cast<Vertex>(in.number()));
        } else {
            in.fail("unknown record '" + std::string(tag) + "'");
        }
        in.finish();
    });
    if (!count) throw InputError("missing solution header");
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw InputError("solution is missing a path");
    return sol;
}

std::string format_solution(const Solution& sol) {
    std::ostringstream out;
    out << "solution " << sol.paths.size() << '\n';
    for (std::size_t i = 0; i < sol.paths.size(); ++i) {
        out << "p " << i;
        for (Vertex v : sol.paths[i]) out << ' ' << v;
        out << '\n';
    }
    return out.str();
}

std::string format_solution_json(const Solution& sol) {
    return json{{"paths", sol.paths}}.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace kdsp
