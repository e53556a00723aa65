#include "fixtures.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace wfchef::testing {

namespace {

struct builder {
    workflow_draft draft;
    rng jitter;
    std::map<std::string, double> base_runtime;

    explicit builder(std::string name, std::uint64_t seed) : jitter(seed) { draft.name = std::move(name); }

    void task(const std::string& id, const std::string& type) {
        auto [it, fresh] = base_runtime.try_emplace(type, 5.0 + 5.0 * static_cast<double>(base_runtime.size()));
        vertex v;
        v.id = id;
        v.vtype = type;
        v.runtime = it->second * (0.5 + jitter.uniform01());
        v.input_bytes = 1000 + jitter.uniform_index(9000);
        v.output_bytes = 1000 + jitter.uniform_index(9000);
        draft.vertices.push_back(std::move(v));
    }
    void dep(const std::string& parent, const std::string& child) { draft.edges.push_back({parent, child}); }

    workflow done() { return workflow::create(std::move(draft)); }
};

std::string pad(std::size_t i) {
    std::string s = std::to_string(i);
    return std::string(s.size() < 4 ? 4 - s.size() : 0, '0') + s;
}

} // namespace

workflow make_workflow(const std::string& name, const std::vector<std::pair<std::string, std::string>>& vertices,
                       const std::vector<std::pair<std::string, std::string>>& edges) {
    workflow_draft d;
    d.name = name;
    for (const auto& [id, type] : vertices) d.vertices.push_back(vertex{id, type, {}, {}, {}, false});
    for (const auto& [p, c] : edges) d.edges.push_back({p, c});
    return workflow::create(std::move(d));
}

workflow diamond(const std::string& top, const std::string& left, const std::string& right, const std::string& bottom) {
    return make_workflow("diamond", {{"a", top}, {"b", left}, {"c", right}, {"d", bottom}},
                         {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}});
}

workflow nested_occurrences_fixture() {
    return make_workflow("nested",
                         {{"a_root", "red"},
                          {"b_left", "purple"},
                          {"c_right", "purple"},
                          {"d_blue1", "blue"},
                          {"e_green1", "green"},
                          {"f_blue2", "blue"},
                          {"g_green2", "green"},
                          {"h_blue3", "blue"},
                          {"i_green3", "green"},
                          {"j_orange1", "orange"},
                          {"k_orange2", "orange"},
                          {"z_sink", "yellow"}},
                         {{"a_root", "b_left"},
                          {"a_root", "c_right"},
                          {"a_root", "j_orange1"},
                          {"a_root", "k_orange2"},
                          {"b_left", "d_blue1"},
                          {"b_left", "f_blue2"},
                          {"c_right", "h_blue3"},
                          {"d_blue1", "e_green1"},
                          {"f_blue2", "g_green2"},
                          {"h_blue3", "i_green3"},
                          {"e_green1", "z_sink"},
                          {"g_green2", "z_sink"},
                          {"i_green3", "z_sink"},
                          {"j_orange1", "z_sink"},
                          {"k_orange2", "z_sink"}});
}

workflow lane_family_instance(const std::string& name, const std::vector<std::size_t>& lanes_per_chunk, std::uint64_t seed) {
    builder b(name, seed);
    b.task("mergeAll", "mapMerge");
    b.task("index", "maqIndex");
    b.task("pileup", "pileup");
    b.dep("mergeAll", "index");
    b.dep("index", "pileup");
    std::size_t lane_no = 0;
    for (std::size_t c = 0; c < lanes_per_chunk.size(); ++c) {
        const std::string split = "split_" + pad(c);
        const std::string merge = "merge_" + pad(c);
        b.task(split, "fastqSplit");
        b.task(merge, "mapMerge");
        b.dep(merge, "mergeAll");
        for (std::size_t l = 0; l < lanes_per_chunk[c]; ++l, ++lane_no) {
            const std::string k = pad(lane_no);
            b.task("filter_" + k, "filterContams");
            b.task("convert_" + k, "sol2sanger");
            b.task("bfq_" + k, "fastq2bfq");
            b.task("map_" + k, "map");
            b.dep(split, "filter_" + k);
            b.dep("filter_" + k, "convert_" + k);
            b.dep("convert_" + k, "bfq_" + k);
            b.dep("bfq_" + k, "map_" + k);
            b.dep("map_" + k, merge);
        }
    }
    return b.done();
}

workflow fork_join_instance(const std::string& name, std::size_t width1, std::size_t width2, std::uint64_t seed) {
    builder b(name, seed);
    b.task("fetch", "fetch");
    b.task("join", "join");
    b.task("report", "report");
    for (std::size_t i = 0; i < width1; ++i) {
        b.task("align_" + pad(i), "align");
        b.dep("fetch", "align_" + pad(i));
        b.dep("align_" + pad(i), "join");
    }
    for (std::size_t i = 0; i < width2; ++i) {
        b.task("analyze_" + pad(i), "analyze");
        b.task("plot_" + pad(i), "plot");
        b.dep("join", "analyze_" + pad(i));
        b.dep("analyze_" + pad(i), "plot_" + pad(i));
        b.dep("plot_" + pad(i), "report");
    }
    return b.done();
}

workflow random_dag(const std::string& name, std::size_t n, const std::vector<std::string>& types, double edge_probability,
                    rng& r) {
    workflow_draft d;
    d.name = name;
    for (std::size_t i = 0; i < n; ++i) {
        vertex v;
        v.id = "t" + pad(i);
        v.vtype = types[r.uniform_index(types.size())];
        v.runtime = static_cast<double>(1 + r.uniform_index(20));
        d.vertices.push_back(std::move(v));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (r.uniform01() < edge_probability) d.edges.push_back({d.vertices[i].id, d.vertices[j].id});
    return workflow::create(std::move(d));
}

workflow repeated_motif_dag(const std::string& name, std::size_t max_vertices, rng& r) {
    static const std::vector<std::string> types = {"p", "q", "r", "s"};
    // motif: a small random DAG over k vertices
    const std::size_t k = 1 + r.uniform_index(3);
    const std::size_t copies = 2 + r.uniform_index(2);
    std::vector<std::string> motif_types;
    std::vector<std::pair<std::size_t, std::size_t>> motif_edges;
    for (std::size_t i = 0; i < k; ++i) motif_types.push_back(types[r.uniform_index(types.size())]);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (r.uniform01() < 0.6) motif_edges.emplace_back(i, j);

    workflow_draft d;
    d.name = name;
    auto add = [&](const std::string& id, const std::string& type) {
        vertex v;
        v.id = id;
        v.vtype = type;
        v.runtime = static_cast<double>(1 + r.uniform_index(20));
        d.vertices.push_back(std::move(v));
    };
    // Ids are shuffled letters so visiting order is not the construction order.
    std::vector<std::string> names;
    for (char c = 'a'; c <= 'z'; ++c) names.emplace_back(1, c);
    for (std::size_t i = names.size(); i > 1; --i) std::swap(names[i - 1], names[r.uniform_index(i)]);
    std::size_t next = 0;
    auto fresh = [&] { return names.at(next++); };

    const std::string fork = fresh();
    const std::string join = fresh();
    add(fork, "fork");
    add(join, "join");
    d.edges.push_back({fork, join});
    for (std::size_t c = 0; c < copies && next + k <= max_vertices; ++c) {
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < k; ++i) {
            ids.push_back(fresh());
            add(ids.back(), motif_types[i]);
        }
        for (auto [i, j] : motif_edges) d.edges.push_back({ids[i], ids[j]});
        for (const auto& id : ids) {
            d.edges.push_back({fork, id});
            d.edges.push_back({id, join});
        }
    }
    while (next < max_vertices && r.uniform01() < 0.5) {
        const std::string id = fresh();
        add(id, types[r.uniform_index(types.size())]);
        // a single edge to or from an existing vertex
        const auto& other = d.vertices[r.uniform_index(d.vertices.size() - 1)].id;
        if (r.uniform01() < 0.5) d.edges.push_back({id, other});
        else d.edges.push_back({other, id});
    }
    return workflow::create(std::move(d));
}

workflow with_shuffled_ids(const workflow& w, rng& r) {
    std::vector<std::size_t> perm(w.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[r.uniform_index(i)]);
    std::map<std::string, std::string> rename;
    for (vertex_index v = 0; v < w.size(); ++v) rename[w.at(v).id] = "n" + pad(perm[v]);
    workflow_draft d = w.to_draft();
    for (auto& v : d.vertices) v.id = rename.at(v.id);
    for (auto& e : d.edges) e = {rename.at(e.parent), rename.at(e.child)};
    std::reverse(d.vertices.begin(), d.vertices.end());
    std::reverse(d.edges.begin(), d.edges.end());
    return workflow::create(std::move(d));
}

workflow with_random_runtimes(const workflow& w, rng& r, int max_runtime) {
    workflow_draft d = w.to_draft();
    for (auto& v : d.vertices)
        v.runtime = v.is_dummy ? 0.0 : static_cast<double>(1 + r.uniform_index(static_cast<std::size_t>(max_runtime)));
    return workflow::create(std::move(d));
}

} // namespace wfchef::testing
