#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wfchef {

using vertex_index = std::uint32_t;

enum class provenance { real_trace, synthetic, normalized };

std::string_view to_string(provenance p);
std::optional<provenance> provenance_from_string(std::string_view s);

inline constexpr std::string_view entry_vtype = "__entry__";
inline constexpr std::string_view exit_vtype = "__exit__";

struct vertex {
    std::string id;
    std::string vtype;
    std::optional<double> runtime;
    std::optional<std::uint64_t> input_bytes;
    std::optional<std::uint64_t> output_bytes;
    bool is_dummy = false;

    friend bool operator==(const vertex&, const vertex&) = default;
};

struct edge {
    std::string parent;
    std::string child;

    friend auto operator<=>(const edge&, const edge&) = default;
    friend bool operator==(const edge&, const edge&) = default;
};

// Unchecked description of a workflow, as read from a trace or assembled
// by hand. Turned into a `workflow` by workflow::create.
struct workflow_draft {
    std::string name;
    std::vector<vertex> vertices;
    std::vector<edge> edges;
    provenance origin = provenance::real_trace;
};

struct validation_issue {
    enum class kind {
        duplicate_id,
        dangling_edge,
        self_loop,
        cycle,
        empty_vtype,
        bad_dummy,
        negative_runtime,
        multiple_entries,
        multiple_exits,
    };
    kind what;
    std::string message;
};

using validation_report = std::vector<validation_issue>;

std::string_view to_string(validation_issue::kind k);

// Lists every violated invariant; empty iff the draft describes a valid
// workflow. The single-entry/single-exit invariant is only checked for
// drafts whose provenance is `normalized`.
validation_report validate(const workflow_draft& draft);

class workflow;
validation_report validate(const workflow& w);

// Typed DAG of tasks. Immutable once built: vertices are stored in
// ascending id order, so vertex_index order is id order, and adjacency
// lists are sorted.
class workflow {
public:
    workflow() = default;

    // Throws cycle_error for cyclic input and validation_error for any other
    // violated invariant. Duplicate edges collapse into one.
    static workflow create(workflow_draft draft);

    const std::string& name() const noexcept { return name_; }
    provenance origin() const noexcept { return origin_; }

    std::size_t size() const noexcept { return vertices_.size(); }
    // Number of non-dummy vertices; this is |w| for generation and recipes.
    std::size_t task_count() const noexcept { return task_count_; }
    std::size_t edge_count() const noexcept { return edge_count_; }
    bool empty() const noexcept { return vertices_.empty(); }

    std::span<const vertex> vertices() const noexcept { return vertices_; }
    const vertex& at(vertex_index v) const { return vertices_.at(v); }
    std::span<const vertex_index> successors(vertex_index v) const { return succ_.at(v); }
    std::span<const vertex_index> predecessors(vertex_index v) const { return pred_.at(v); }

    std::optional<vertex_index> find(std::string_view id) const;
    vertex_index index_of(std::string_view id) const; // throws unknown_vertex_error

    // Kahn order with ascending index tie-break.
    std::span<const vertex_index> topological_order() const noexcept { return topo_; }

    std::vector<vertex_index> sources() const;
    std::vector<vertex_index> sinks() const;

    std::vector<edge> edges() const; // sorted
    workflow_draft to_draft() const;

    workflow renamed(std::string name) const;
    workflow with_origin(provenance p) const;

private:
    std::string name_;
    provenance origin_ = provenance::real_trace;
    std::vector<vertex> vertices_;
    std::vector<std::vector<vertex_index>> succ_;
    std::vector<std::vector<vertex_index>> pred_;
    std::vector<vertex_index> topo_;
    std::unordered_map<std::string, vertex_index> by_id_;
    std::size_t task_count_ = 0;
    std::size_t edge_count_ = 0;
};

// Same vertices (all fields), same edges. Name and provenance are ignored.
bool graph_identical(const workflow& a, const workflow& b);

// Adds a dummy entry (resp. exit) vertex when there is more than one source
// (resp. sink). Returns the input unchanged when it already has a single
// entry and exit; otherwise the result has provenance `normalized` unless
// it was synthetic.
workflow normalize_entries_exits(const workflow& w);

// Trace-file subset, JSON. parse_workflow throws parse_error (with a JSON
// path), validation_error or cycle_error.
workflow parse_workflow(std::string_view document);
std::string write_workflow(const workflow& w);

workflow read_workflow_file(const std::string& path);
void write_workflow_file(const workflow& w, const std::string& path);

} // namespace wfchef
