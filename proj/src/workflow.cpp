#include "wfchef/workflow.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "trace_json.hpp"
#include "wfchef/error.hpp"

namespace wfchef {

std::string_view to_string(provenance p) {
    switch (p) {
    case provenance::real_trace: return "real-trace";
    case provenance::synthetic: return "synthetic";
    case provenance::normalized: return "normalized";
    }
    return "real-trace";
}

std::optional<provenance> provenance_from_string(std::string_view s) {
    if (s == "real-trace") return provenance::real_trace;
    if (s == "synthetic") return provenance::synthetic;
    if (s == "normalized") return provenance::normalized;
    return std::nullopt;
}

std::string_view to_string(validation_issue::kind k) {
    using kind = validation_issue::kind;
    switch (k) {
    case kind::duplicate_id: return "duplicate-id";
    case kind::dangling_edge: return "dangling-edge";
    case kind::self_loop: return "self-loop";
    case kind::cycle: return "cycle";
    case kind::empty_vtype: return "empty-vtype";
    case kind::bad_dummy: return "bad-dummy";
    case kind::negative_runtime: return "negative-runtime";
    case kind::multiple_entries: return "multiple-entries";
    case kind::multiple_exits: return "multiple-exits";
    }
    return "unknown";
}

namespace {

using adjacency = std::vector<std::vector<vertex_index>>;

// Returns one cycle (ids, first repeated at the end) among vertices that
// Kahn's algorithm could not order, or an empty vector when acyclic.
std::vector<vertex_index> find_cycle(const adjacency& succ, const std::vector<bool>& ordered) {
    const std::size_t n = succ.size();
    std::vector<int> state(n, 0); // 0 new, 1 on stack, 2 done
    std::vector<vertex_index> stack;
    for (vertex_index root = 0; root < n; ++root) {
        if (ordered[root] || state[root] != 0) continue;
        // iterative DFS keeping the current path in `stack`
        std::vector<std::pair<vertex_index, std::size_t>> frames{{root, 0}};
        state[root] = 1;
        stack.push_back(root);
        while (!frames.empty()) {
            auto& [v, next] = frames.back();
            if (next < succ[v].size()) {
                vertex_index c = succ[v][next++];
                if (ordered[c]) continue;
                if (state[c] == 1) {
                    auto it = std::find(stack.begin(), stack.end(), c);
                    std::vector<vertex_index> cycle(it, stack.end());
                    cycle.push_back(c);
                    return cycle;
                }
                if (state[c] == 0) {
                    state[c] = 1;
                    stack.push_back(c);
                    frames.emplace_back(c, 0);
                }
            } else {
                state[v] = 2;
                stack.pop_back();
                frames.pop_back();
            }
        }
    }
    return {};
}

std::vector<vertex_index> kahn_order(const adjacency& succ, const adjacency& pred) {
    const std::size_t n = succ.size();
    std::vector<std::size_t> indegree(n);
    std::priority_queue<vertex_index, std::vector<vertex_index>, std::greater<>> ready;
    for (vertex_index v = 0; v < n; ++v) {
        indegree[v] = pred[v].size();
        if (indegree[v] == 0) ready.push(v);
    }
    std::vector<vertex_index> order;
    order.reserve(n);
    while (!ready.empty()) {
        vertex_index v = ready.top();
        ready.pop();
        order.push_back(v);
        for (vertex_index c : succ[v]) {
            if (--indegree[c] == 0) ready.push(c);
        }
    }
    return order;
}

struct indexed_draft {
    std::vector<vertex> vertices; // id-sorted, first occurrence of each id
    adjacency succ;
    adjacency pred;
    std::unordered_map<std::string, vertex_index> by_id;
    validation_report issues;
    std::vector<std::string> cycle_ids;
};

indexed_draft index_draft(const workflow_draft& draft) {
    using kind = validation_issue::kind;
    indexed_draft out;

    std::vector<const vertex*> sorted;
    sorted.reserve(draft.vertices.size());
    for (const auto& v : draft.vertices) sorted.push_back(&v);
    std::stable_sort(sorted.begin(), sorted.end(), [](const vertex* a, const vertex* b) { return a->id < b->id; });

    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const vertex& v = *sorted[i];
        if (i > 0 && sorted[i - 1]->id == v.id) {
            if (i < 2 || sorted[i - 2]->id != v.id)
                out.issues.push_back({kind::duplicate_id, "duplicate vertex id '" + v.id + "'"});
            continue;
        }
        if (v.is_dummy) {
            if (v.vtype != entry_vtype && v.vtype != exit_vtype)
                out.issues.push_back({kind::bad_dummy, "dummy vertex '" + v.id + "' must have vtype __entry__ or __exit__"});
            if (v.runtime && *v.runtime != 0.0)
                out.issues.push_back({kind::bad_dummy, "dummy vertex '" + v.id + "' must have runtime 0"});
        } else if (v.vtype.empty()) {
            out.issues.push_back({kind::empty_vtype, "vertex '" + v.id + "' has an empty vtype"});
        }
        if (v.runtime && !(*v.runtime >= 0.0))
            out.issues.push_back({kind::negative_runtime, "vertex '" + v.id + "' has a negative runtime"});
        out.by_id.emplace(v.id, static_cast<vertex_index>(out.vertices.size()));
        out.vertices.push_back(v);
    }

    const std::size_t n = out.vertices.size();
    out.succ.assign(n, {});
    out.pred.assign(n, {});
    for (const auto& e : draft.edges) {
        auto p = out.by_id.find(e.parent);
        auto c = out.by_id.find(e.child);
        if (p == out.by_id.end() || c == out.by_id.end()) {
            const std::string& missing = p == out.by_id.end() ? e.parent : e.child;
            out.issues.push_back({kind::dangling_edge, "edge " + e.parent + " -> " + e.child + " references missing vertex '" + missing + "'"});
            continue;
        }
        if (p->second == c->second) {
            out.issues.push_back({kind::self_loop, "self loop on vertex '" + e.parent + "'"});
            continue;
        }
        out.succ[p->second].push_back(c->second);
        out.pred[c->second].push_back(p->second);
    }
    for (auto* lists : {&out.succ, &out.pred}) {
        for (auto& l : *lists) {
            std::sort(l.begin(), l.end());
            l.erase(std::unique(l.begin(), l.end()), l.end());
        }
    }

    auto order = kahn_order(out.succ, out.pred);
    if (order.size() != n) {
        std::vector<bool> ordered(n, false);
        for (auto v : order) ordered[v] = true;
        auto cycle = find_cycle(out.succ, ordered);
        std::string listing;
        for (auto v : cycle) {
            if (!listing.empty()) listing += " -> ";
            listing += out.vertices[v].id;
            out.cycle_ids.push_back(out.vertices[v].id);
        }
        out.issues.push_back({kind::cycle, "cycle: " + listing});
    }

    if (draft.origin == provenance::normalized && n > 0) {
        std::size_t sources = 0, sinks = 0;
        for (vertex_index v = 0; v < n; ++v) {
            sources += out.pred[v].empty();
            sinks += out.succ[v].empty();
        }
        if (sources != 1) out.issues.push_back({kind::multiple_entries, std::to_string(sources) + " entry vertices in a normalized workflow"});
        if (sinks != 1) out.issues.push_back({kind::multiple_exits, std::to_string(sinks) + " exit vertices in a normalized workflow"});
    }
    return out;
}

std::string unique_id(const workflow_draft& d, std::string base) {
    std::set<std::string_view> ids;
    for (const auto& v : d.vertices) ids.insert(v.id);
    std::string candidate = base;
    for (int k = 1; ids.count(candidate) != 0; ++k) candidate = base + std::to_string(k);
    return candidate;
}

} // namespace

validation_report validate(const workflow_draft& draft) { return index_draft(draft).issues; }

validation_report validate(const workflow& w) { return validate(w.to_draft()); }

workflow workflow::create(workflow_draft draft) {
    indexed_draft ix = index_draft(draft);
    if (!ix.issues.empty()) {
        for (const auto& issue : ix.issues) {
            if (issue.what == validation_issue::kind::cycle) throw cycle_error(issue.message, ix.cycle_ids);
        }
        throw validation_error(ix.issues.front().message);
    }
    workflow w;
    w.name_ = std::move(draft.name);
    w.origin_ = draft.origin;
    w.vertices_ = std::move(ix.vertices);
    w.succ_ = std::move(ix.succ);
    w.pred_ = std::move(ix.pred);
    w.by_id_ = std::move(ix.by_id);
    w.topo_ = kahn_order(w.succ_, w.pred_);
    for (const auto& v : w.vertices_) w.task_count_ += !v.is_dummy;
    for (const auto& s : w.succ_) w.edge_count_ += s.size();
    return w;
}

std::optional<vertex_index> workflow::find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

vertex_index workflow::index_of(std::string_view id) const {
    auto v = find(id);
    if (!v) throw unknown_vertex_error(std::string(id));
    return *v;
}

std::vector<vertex_index> workflow::sources() const {
    std::vector<vertex_index> out;
    for (vertex_index v = 0; v < size(); ++v)
        if (pred_[v].empty()) out.push_back(v);
    return out;
}

std::vector<vertex_index> workflow::sinks() const {
    std::vector<vertex_index> out;
    for (vertex_index v = 0; v < size(); ++v)
        if (succ_[v].empty()) out.push_back(v);
    return out;
}

std::vector<edge> workflow::edges() const {
    std::vector<edge> out;
    out.reserve(edge_count_);
    for (vertex_index p = 0; p < size(); ++p)
        for (vertex_index c : succ_[p]) out.push_back({vertices_[p].id, vertices_[c].id});
    return out;
}

workflow_draft workflow::to_draft() const { return {name_, vertices_, edges(), origin_}; }

workflow workflow::renamed(std::string name) const {
    workflow copy = *this;
    copy.name_ = std::move(name);
    return copy;
}

workflow workflow::with_origin(provenance p) const {
    workflow copy = *this;
    copy.origin_ = p;
    return copy;
}

bool graph_identical(const workflow& a, const workflow& b) {
    if (a.size() != b.size() || a.edge_count() != b.edge_count()) return false;
    if (!std::equal(a.vertices().begin(), a.vertices().end(), b.vertices().begin())) return false;
    return a.edges() == b.edges();
}

workflow normalize_entries_exits(const workflow& w) {
    auto sources = w.sources();
    auto sinks = w.sinks();
    if (sources.size() <= 1 && sinks.size() <= 1) return w;

    workflow_draft d = w.to_draft();
    if (sources.size() > 1) {
        vertex entry{unique_id(d, std::string(entry_vtype)), std::string(entry_vtype), 0.0, std::nullopt, std::nullopt, true};
        for (auto s : sources) d.edges.push_back({entry.id, w.at(s).id});
        d.vertices.push_back(std::move(entry));
    }
    if (sinks.size() > 1) {
        vertex exit{unique_id(d, std::string(exit_vtype)), std::string(exit_vtype), 0.0, std::nullopt, std::nullopt, true};
        for (auto s : sinks) d.edges.push_back({w.at(s).id, exit.id});
        d.vertices.push_back(std::move(exit));
    }
    if (d.origin != provenance::synthetic) d.origin = provenance::normalized;
    return workflow::create(std::move(d));
}

// ---------------------------------------------------------------------------
// trace-file subset

namespace detail {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw parse_error(path + ": " + what); }

const nlohmann::json& member(const nlohmann::json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing required field '") + key + "'");
    return *it;
}

std::uint64_t byte_count(const nlohmann::json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) fail(path, "must be a nonnegative integer");
    if (j.is_number_float()) {
        double d = j.get<double>();
        if (d >= 0.0 && d == static_cast<double>(static_cast<std::uint64_t>(d))) return static_cast<std::uint64_t>(d);
    }
    fail(path, "must be a nonnegative integer");
}

} // namespace

workflow workflow_from_json(const nlohmann::json& doc, const std::string& root) {
    if (!doc.is_object()) fail(root, "expected an object");
    workflow_draft d;
    const auto& name = member(doc, "name", root);
    if (!name.is_string()) fail(root + ".name", "must be a string");
    d.name = name.get<std::string>();
    d.origin = provenance::real_trace;
    if (auto it = doc.find("provenance"); it != doc.end()) {
        auto p = it->is_string() ? provenance_from_string(it->get<std::string>()) : std::nullopt;
        if (!p) fail(root + ".provenance", "must be one of real-trace, synthetic, normalized");
        d.origin = *p;
    }
    const auto& wf = member(doc, "workflow", root);
    if (!wf.is_object()) fail(root + ".workflow", "expected an object");
    const auto& tasks = member(wf, "tasks", root + ".workflow");
    if (!tasks.is_array()) fail(root + ".workflow.tasks", "expected an array");

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const std::string path = root + ".workflow.tasks[" + std::to_string(i) + "]";
        const auto& t = tasks[i];
        if (!t.is_object()) fail(path, "expected an object");
        vertex v;
        const auto& id = member(t, "name", path);
        if (!id.is_string()) fail(path + ".name", "must be a string");
        v.id = id.get<std::string>();
        const auto& type = member(t, "type", path);
        if (!type.is_string()) fail(path + ".type", "must be a string");
        v.vtype = type.get<std::string>();
        if (auto it = t.find("runtime"); it != t.end()) {
            if (!it->is_number() || !(it->get<double>() >= 0.0)) fail(path + ".runtime", "must be a number >= 0");
            v.runtime = it->get<double>();
        }
        if (auto it = t.find("bytesRead"); it != t.end()) v.input_bytes = byte_count(*it, path + ".bytesRead");
        if (auto it = t.find("bytesWritten"); it != t.end()) v.output_bytes = byte_count(*it, path + ".bytesWritten");
        if (auto it = t.find("dummy"); it != t.end()) {
            if (!it->is_boolean()) fail(path + ".dummy", "must be a boolean");
            v.is_dummy = it->get<bool>();
        }
        const auto& parents = member(t, "parents", path);
        if (!parents.is_array()) fail(path + ".parents", "expected an array");
        for (std::size_t k = 0; k < parents.size(); ++k) {
            if (!parents[k].is_string()) fail(path + ".parents[" + std::to_string(k) + "]", "must be a string");
            d.edges.push_back({parents[k].get<std::string>(), v.id});
        }
        d.vertices.push_back(std::move(v));
    }
    return workflow::create(std::move(d));
}

nlohmann::json workflow_to_json(const workflow& w) {
    nlohmann::json tasks = nlohmann::json::array();
    for (vertex_index i = 0; i < w.size(); ++i) {
        const vertex& v = w.at(i);
        nlohmann::json t;
        t["name"] = v.id;
        t["type"] = v.vtype;
        if (v.runtime) t["runtime"] = *v.runtime;
        if (v.input_bytes) t["bytesRead"] = *v.input_bytes;
        if (v.output_bytes) t["bytesWritten"] = *v.output_bytes;
        if (v.is_dummy) t["dummy"] = true;
        nlohmann::json parents = nlohmann::json::array();
        for (vertex_index p : w.predecessors(i)) parents.push_back(w.at(p).id);
        t["parents"] = std::move(parents);
        tasks.push_back(std::move(t));
    }
    nlohmann::json doc;
    doc["name"] = w.name();
    doc["provenance"] = std::string(to_string(w.origin()));
    doc["workflow"]["tasks"] = std::move(tasks);
    return doc;
}

} // namespace detail

workflow parse_workflow(std::string_view document) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("$: malformed JSON: ") + e.what());
    }
    return detail::workflow_from_json(doc, "$");
}

std::string write_workflow(const workflow& w) { return detail::workflow_to_json(w).dump(2) + "\n"; }

workflow read_workflow_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_workflow(buffer.str());
}

void write_workflow_file(const workflow& w, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write '" + path + "'");
    out << write_workflow(w);
}

} // namespace wfchef
