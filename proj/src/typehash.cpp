#include "wfchef/typehash.hpp"

#include <algorithm>

namespace wfchef {

namespace {

template <class Neighbours, class Get>
type_hash directional_hash(char tag, const vertex& v, Neighbours neighbours, Get get) {
    std::vector<type_hash> children;
    children.reserve(neighbours.size());
    for (vertex_index n : neighbours) children.push_back(get(n));
    std::sort(children.begin(), children.end());
    children.erase(std::unique(children.begin(), children.end()), children.end());

    digest_builder b;
    b.tag(tag).u64(children.size());
    for (const auto& c : children) b.token(c);
    b.text(v.vtype);
    return b.finish();
}

} // namespace

std::vector<vertex_hashes> compute_type_hashes(const workflow& w) {
    std::vector<vertex_hashes> out(w.size());
    auto order = w.topological_order();

    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        vertex_index v = *it;
        out[v].top_down = directional_hash('D', w.at(v), w.successors(v), [&](vertex_index n) { return out[n].top_down; });
    }
    for (vertex_index v : order) {
        out[v].bottom_up = directional_hash('U', w.at(v), w.predecessors(v), [&](vertex_index n) { return out[n].bottom_up; });
    }
    for (auto& h : out) h.combined = digest_builder{}.tag('T').token(h.top_down).token(h.bottom_up).finish();
    return out;
}

std::optional<std::vector<debug_strings>> compute_debug_strings(const workflow& w, std::size_t max_vertices,
                                                                std::size_t max_length) {
    if (w.size() > max_vertices) return std::nullopt;
    const auto hashes = compute_type_hashes(w);
    std::vector<debug_strings> out(w.size());

    auto render = [&](vertex_index v, auto neighbours, auto hash_of, auto text_of) -> std::optional<std::string> {
        std::vector<std::pair<type_hash, vertex_index>> kids;
        for (vertex_index n : neighbours) kids.emplace_back(hash_of(n), n);
        std::sort(kids.begin(), kids.end());
        std::string s = "[";
        for (std::size_t i = 0; i < kids.size(); ++i) {
            if (i > 0 && kids[i].first == kids[i - 1].first) continue;
            if (s.size() > 1) s += ',';
            s += text_of(kids[i].second);
            if (s.size() > max_length) return std::nullopt;
        }
        s += ']';
        s += w.at(v).vtype;
        if (s.size() > max_length) return std::nullopt;
        return s;
    };

    auto order = w.topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        auto s = render(*it, w.successors(*it), [&](vertex_index n) { return hashes[n].top_down; },
                        [&](vertex_index n) -> const std::string& { return out[n].top_down; });
        if (!s) return std::nullopt;
        out[*it].top_down = std::move(*s);
    }
    for (vertex_index v : order) {
        auto s = render(v, w.predecessors(v), [&](vertex_index n) { return hashes[n].bottom_up; },
                        [&](vertex_index n) -> const std::string& { return out[n].bottom_up; });
        if (!s) return std::nullopt;
        out[v].bottom_up = std::move(*s);
    }
    for (auto& d : out) {
        d.combined = d.top_down + "|" + d.bottom_up;
        if (d.combined.size() > max_length) return std::nullopt;
    }
    return out;
}

workflow_type_hash workflow_type_hash_of(const workflow& w) { return workflow_type_hash_of(w, compute_type_hashes(w)); }

workflow_type_hash workflow_type_hash_of(const workflow& w, const std::vector<vertex_hashes>& hashes) {
    workflow_type_hash out;
    std::map<type_hash, std::size_t> counts;
    std::size_t total = 0;
    for (vertex_index v = 0; v < w.size(); ++v) {
        if (w.at(v).is_dummy) continue;
        ++counts[hashes[v].combined];
        ++total;
    }
    for (const auto& [h, c] : counts) {
        out.hashes.insert(h);
        out.frequencies.emplace(h, static_cast<double>(c) / static_cast<double>(total));
    }
    return out;
}

} // namespace wfchef
