#include "wfchef/patterns.hpp"

#include <algorithm>
#include <map>

#include "wfchef/error.hpp"

namespace wfchef {

namespace {

enum class direction { up, down };

std::span<const vertex_index> step(const workflow& w, vertex_index v, direction d) {
    return d == direction::up ? w.predecessors(v) : w.successors(v);
}

// Vertices reachable from `starts` by at least one step in direction d.
std::vector<bool> reach(const workflow& w, std::span<const vertex_index> starts, direction d) {
    std::vector<bool> seen(w.size(), false);
    std::vector<vertex_index> stack;
    for (vertex_index s : starts) {
        for (vertex_index n : step(w, s, d)) {
            if (!seen[n]) {
                seen[n] = true;
                stack.push_back(n);
            }
        }
    }
    while (!stack.empty()) {
        vertex_index v = stack.back();
        stack.pop_back();
        for (vertex_index n : step(w, v, d)) {
            if (!seen[n]) {
                seen[n] = true;
                stack.push_back(n);
            }
        }
    }
    return seen;
}

std::vector<vertex_index> closest_common(const workflow& w, vertex_index v, vertex_index other, direction d) {
    if (v >= w.size() || other >= w.size()) throw invalid_argument_error("vertex index out of range");
    if (v == other) throw invalid_argument_error("closest common ancestors/descendants need two distinct vertices");
    const vertex_index a[] = {v};
    const vertex_index b[] = {other};
    auto from_v = reach(w, a, d);
    auto from_other = reach(w, b, d);
    std::vector<bool> common(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) common[i] = from_v[i] && from_other[i];

    // Walk from both vertices, stopping at the first common vertex on each path.
    std::vector<bool> seen(w.size(), false);
    std::vector<bool> frontier(w.size(), false);
    std::vector<vertex_index> stack{v, other};
    seen[v] = seen[other] = true;
    while (!stack.empty()) {
        vertex_index x = stack.back();
        stack.pop_back();
        for (vertex_index n : step(w, x, d)) {
            if (seen[n]) continue;
            seen[n] = true;
            if (common[n]) frontier[n] = true;
            else stack.push_back(n);
        }
    }
    std::vector<vertex_index> out;
    for (vertex_index i = 0; i < w.size(); ++i)
        if (frontier[i]) out.push_back(i);
    return out;
}

std::vector<std::string> ids_of(const workflow& w, const std::vector<vertex_index>& vs) {
    std::vector<std::string> out;
    out.reserve(vs.size());
    for (auto v : vs) out.push_back(w.at(v).id);
    return out;
}

// Vertices strictly between the two boundary sets.
std::vector<bool> region_mask(const workflow& w, std::span<const vertex_index> ancestors, std::span<const vertex_index> descendants) {
    if (ancestors.empty() || descendants.empty()) throw invalid_argument_error("sub_dag needs nonempty ancestor and descendant sets");
    auto inside = reach(w, ancestors, direction::down);
    auto above = reach(w, descendants, direction::up);
    for (std::size_t i = 0; i < inside.size(); ++i) inside[i] = inside[i] && above[i];
    for (auto a : ancestors) inside.at(a) = false;
    for (auto d : descendants) inside.at(d) = false;
    return inside;
}

std::vector<vertex_index> component(const workflow& w, vertex_index v, const std::vector<bool>& inside) {
    if (v >= w.size() || !inside[v])
        throw invalid_argument_error("vertex '" + (v < w.size() ? w.at(v).id : std::to_string(v)) +
                                     "' is not on a path from the ancestors to the descendants");
    std::vector<bool> seen(w.size(), false);
    std::vector<vertex_index> members{v};
    std::vector<vertex_index> stack{v};
    seen[v] = true;
    while (!stack.empty()) {
        vertex_index x = stack.back();
        stack.pop_back();
        for (auto d : {direction::up, direction::down}) {
            for (vertex_index n : step(w, x, d)) {
                if (seen[n] || !inside[n]) continue;
                seen[n] = true;
                members.push_back(n);
                stack.push_back(n);
            }
        }
    }
    std::sort(members.begin(), members.end());
    return members;
}

// Third condition of the occurrence definition: boundary vertices with equal
// type hashes attach to exactly the same outside vertices.
bool boundaries_match(const workflow& w, const std::vector<vertex_hashes>& hashes, const std::vector<vertex_index>& first,
                      const std::vector<vertex_index>& second) {
    std::vector<bool> in_first(w.size(), false), in_second(w.size(), false);
    for (auto v : first) in_first[v] = true;
    for (auto v : second) in_second[v] = true;

    auto boundary = [&](const std::vector<vertex_index>& members, const std::vector<bool>& inside, direction d) {
        std::vector<vertex_index> out;
        for (auto v : members) {
            auto ns = step(w, v, d);
            if (std::none_of(ns.begin(), ns.end(), [&](vertex_index n) { return inside[n]; })) out.push_back(v);
        }
        return out;
    };
    for (auto d : {direction::up, direction::down}) {
        auto b1 = boundary(first, in_first, d);
        auto b2 = boundary(second, in_second, d);
        for (auto x : b1) {
            for (auto y : b2) {
                if (hashes[x].combined != hashes[y].combined) continue;
                auto nx = step(w, x, d);
                auto ny = step(w, y, d);
                if (!std::equal(nx.begin(), nx.end(), ny.begin(), ny.end())) return false;
            }
        }
    }
    return true;
}

} // namespace

pattern_hash pattern_hash_of(std::span<const vertex_index> members, const std::vector<vertex_hashes>& hashes) {
    std::vector<type_hash> set;
    set.reserve(members.size());
    for (auto v : members) set.push_back(hashes.at(v).combined);
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    digest_builder b;
    b.tag('P').u64(set.size());
    for (const auto& h : set) b.token(h);
    return b.finish();
}

pattern_occurrence make_occurrence(const workflow& w, const std::vector<vertex_hashes>& hashes, std::vector<vertex_index> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    std::vector<bool> inside(w.size(), false);
    for (auto v : members) inside.at(v) = true;

    pattern_occurrence po;
    po.host_workflow = w.name();
    po.hash = pattern_hash_of(members, hashes);
    for (auto v : members) {
        po.vertex_ids.push_back(w.at(v).id);
        auto ps = w.predecessors(v);
        auto cs = w.successors(v);
        if (std::none_of(ps.begin(), ps.end(), [&](vertex_index p) { return inside[p]; })) po.entries.push_back(w.at(v).id);
        if (std::none_of(cs.begin(), cs.end(), [&](vertex_index c) { return inside[c]; })) po.exits.push_back(w.at(v).id);
    }
    return po;
}

std::vector<vertex_index> closest_common_ancestors(const workflow& w, vertex_index v, vertex_index other) {
    return closest_common(w, v, other, direction::up);
}

std::vector<vertex_index> closest_common_descendants(const workflow& w, vertex_index v, vertex_index other) {
    return closest_common(w, v, other, direction::down);
}

std::vector<std::string> closest_common_ancestors(const workflow& w, std::string_view v, std::string_view other) {
    return ids_of(w, closest_common_ancestors(w, w.index_of(v), w.index_of(other)));
}

std::vector<std::string> closest_common_descendants(const workflow& w, std::string_view v, std::string_view other) {
    return ids_of(w, closest_common_descendants(w, w.index_of(v), w.index_of(other)));
}

pattern_occurrence sub_dag(const workflow& w, const std::vector<vertex_hashes>& hashes, vertex_index v,
                           std::span<const vertex_index> ancestors, std::span<const vertex_index> descendants) {
    return make_occurrence(w, hashes, component(w, v, region_mask(w, ancestors, descendants)));
}

std::vector<pattern_occurrence> detect_pattern_occurrences(const workflow& w) {
    return detect_pattern_occurrences(w, compute_type_hashes(w));
}

std::vector<pattern_occurrence> detect_pattern_occurrences(const workflow& w, const std::vector<vertex_hashes>& hashes) {
    const std::size_t n = w.size();
    if (hashes.size() != n) throw invalid_argument_error("type hashes do not match the workflow");

    // Vertices grouped by type hash, ascending; cursor skips visited ones.
    std::map<type_hash, std::vector<vertex_index>> groups;
    for (vertex_index v = 0; v < n; ++v) groups[hashes[v].combined].push_back(v);
    std::map<type_hash, std::size_t> cursor;

    std::vector<bool> visited(n, false);
    std::map<pattern_hash, std::vector<bool>> covered;
    std::vector<pattern_occurrence> out;

    for (vertex_index v = 0; v < n; ++v) {
        if (visited[v]) continue;
        visited[v] = true;

        const auto& group = groups[hashes[v].combined];
        auto& pos = cursor[hashes[v].combined];
        while (pos < group.size() && visited[group[pos]]) ++pos;
        if (pos == group.size()) continue;
        vertex_index other = group[pos];
        visited[other] = true;

        auto ancestors = closest_common_ancestors(w, v, other);
        auto descendants = closest_common_descendants(w, v, other);
        if (ancestors.empty() || descendants.empty()) continue;

        auto inside = region_mask(w, ancestors, descendants);
        auto first = component(w, v, inside);
        auto second = component(w, other, inside);

        std::vector<vertex_index> shared;
        std::set_intersection(first.begin(), first.end(), second.begin(), second.end(), std::back_inserter(shared));
        if (!shared.empty()) continue;

        auto hash = pattern_hash_of(first, hashes);
        if (pattern_hash_of(second, hashes) != hash) continue;
        if (!boundaries_match(w, hashes, first, second)) continue;

        auto& taken = covered[hash];
        if (taken.empty()) taken.assign(n, false);
        auto overlaps = [&](const std::vector<vertex_index>& m) {
            return std::any_of(m.begin(), m.end(), [&](vertex_index u) { return taken[u]; });
        };
        if (overlaps(first) || overlaps(second)) continue;
        for (auto u : first) taken[u] = true;
        for (auto u : second) taken[u] = true;

        out.push_back(make_occurrence(w, hashes, std::move(first)));
        out.push_back(make_occurrence(w, hashes, std::move(second)));
    }
    return out;
}

} // namespace wfchef
