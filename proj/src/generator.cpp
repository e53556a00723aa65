#include "wfchef/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <tuple>

#include "wfchef/error.hpp"

namespace wfchef {

pattern_probabilities compute_pattern_probabilities(std::span<const pattern_occurrence> base_pos,
                                                    std::span<const pattern_occurrence> closest_pos) {
    pattern_probabilities out;
    if (base_pos.empty()) return out;

    std::map<pattern_hash, std::size_t> in_closest, in_base;
    for (const auto& po : closest_pos) ++in_closest[po.hash];
    for (const auto& po : base_pos) ++in_base[po.hash];
    const double tc = static_cast<double>(closest_pos.size());

    double total = 0.0;
    out.raw.reserve(base_pos.size());
    for (const auto& po : base_pos) {
        auto it = in_closest.find(po.hash);
        const double nc = it == in_closest.end() ? 0.0 : static_cast<double>(it->second);
        const double nb = static_cast<double>(in_base.at(po.hash));
        const double p = tc == 0.0 ? 0.0 : (nc / tc) / nb;
        out.raw.push_back(p);
        total += p;
    }

    if (total == 0.0) {
        out.how = pattern_probabilities::basis::uniform;
        out.normalized.assign(base_pos.size(), 1.0 / static_cast<double>(base_pos.size()));
        return out;
    }
    out.how = std::abs(total - 1.0) <= 1e-12 ? pattern_probabilities::basis::proportional
                                              : pattern_probabilities::basis::renormalized;
    out.normalized.reserve(out.raw.size());
    for (double p : out.raw) out.normalized.push_back(p / total);
    return out;
}

// ---------------------------------------------------------------------------

growing_workflow::growing_workflow(const workflow& base, std::span<const pattern_occurrence> base_pos)
    : growing_workflow(base, compute_type_hashes(base), base_pos) {}

growing_workflow::growing_workflow(const workflow& base, std::vector<vertex_hashes> base_hashes,
                                   std::span<const pattern_occurrence> base_pos)
    : base_(&base), base_hashes_(std::move(base_hashes)) {
    if (base_hashes_.size() != base.size()) throw invalid_argument_error("type hashes do not match the base workflow");
    const std::size_t n = base.size();
    vertices_.assign(base.vertices().begin(), base.vertices().end());
    succ_.resize(n);
    pred_.resize(n);
    origin_hash_.reserve(n);
    for (vertex_index v = 0; v < n; ++v) {
        auto s = base.successors(v);
        auto p = base.predecessors(v);
        succ_[v].assign(s.begin(), s.end());
        pred_[v].assign(p.begin(), p.end());
        origin_hash_.push_back(base_hashes_[v].combined);
        ids_.insert(vertices_[v].id);
    }
    task_count_ = base.task_count();
    for (const auto& po : base_pos) occurrences_[po.hash].push_back(place(po));
}

growing_workflow::placed growing_workflow::place(const pattern_occurrence& po) const {
    auto lookup = [&](const std::vector<std::string>& ids) {
        std::vector<vertex_index> out;
        out.reserve(ids.size());
        for (const auto& id : ids) {
            auto v = base_->find(id);
            if (!v) throw invalid_argument_error("occurrence vertex '" + id + "' is not in the base workflow");
            out.push_back(*v);
        }
        return out;
    };
    return placed{lookup(po.vertex_ids), lookup(po.entries), lookup(po.exits)};
}

std::size_t growing_workflow::occurrences_of(const pattern_hash& h) const {
    auto it = occurrences_.find(h);
    return it == occurrences_.end() ? 0 : it->second.size();
}

bool growing_workflow::reaches_any(std::span<const vertex_index> from, const std::vector<bool>& targets) const {
    std::vector<bool> seen(vertices_.size(), false);
    std::vector<vertex_index> stack(from.begin(), from.end());
    for (auto v : from) seen[v] = true;
    while (!stack.empty()) {
        vertex_index v = stack.back();
        stack.pop_back();
        if (targets[v]) return true;
        for (vertex_index c : succ_[v]) {
            if (!seen[c]) {
                seen[c] = true;
                stack.push_back(c);
            }
        }
    }
    return false;
}

std::vector<std::string> growing_workflow::add_po(const pattern_occurrence& po, rng& r) {
    auto found = occurrences_.find(po.hash);
    if (found == occurrences_.end() || found->second.empty())
        throw invalid_argument_error("no occurrence of pattern " + po.hash.hex() + " to graft next to");
    const placed source = place(po);
    auto& candidates = found->second;

    // Boundary of the copy when grafted next to `target`: outside parents
    // for every source entry, outside children for every source exit.
    using boundary = std::vector<std::vector<vertex_index>>;
    auto attach = [&](const placed& target, bool entries) {
        const auto& mine = entries ? source.entries : source.exits;
        const auto& theirs = entries ? target.entries : target.exits;
        boundary out;
        out.reserve(mine.size());
        for (vertex_index s : mine) {
            const auto want = base_hashes_[s].combined;
            auto match = std::find_if(theirs.begin(), theirs.end(), [&](vertex_index t) { return origin_hash_[t] == want; });
            std::span<const vertex_index> links;
            if (match != theirs.end()) links = entries ? std::span<const vertex_index>(pred_[*match]) : std::span<const vertex_index>(succ_[*match]);
            else links = entries ? base_->predecessors(s) : base_->successors(s);
            out.emplace_back(links.begin(), links.end());
        }
        return out;
    };

    const std::size_t first = r.uniform_index(candidates.size());
    boundary parents, children;
    bool grafted = false;
    for (std::size_t attempt = 0; attempt < candidates.size() && !grafted; ++attempt) {
        const placed& target = candidates[(first + attempt) % candidates.size()];
        parents = attach(target, true);
        children = attach(target, false);
        // The new edges run parents -> copy -> children; they close a cycle
        // only if some child already reaches some parent.
        std::vector<bool> is_parent(vertices_.size(), false);
        for (const auto& ps : parents)
            for (auto p : ps) is_parent[p] = true;
        std::vector<vertex_index> all_children;
        for (const auto& cs : children) all_children.insert(all_children.end(), cs.begin(), cs.end());
        grafted = !reaches_any(all_children, is_parent);
    }
    if (!grafted) throw internal_error("every grafting site for pattern " + po.hash.hex() + " would create a cycle");

    // Fresh ids: one counter value per grafted copy, skipping collisions.
    std::string suffix;
    for (;;) {
        suffix = "__rep" + std::to_string(next_copy_++);
        bool clash = std::any_of(source.members.begin(), source.members.end(),
                                 [&](vertex_index s) { return ids_.count(base_->at(s).id + suffix) != 0; });
        if (!clash) break;
    }

    std::map<vertex_index, vertex_index> copy_of;
    std::vector<std::string> new_ids;
    for (vertex_index s : source.members) {
        vertex v = base_->at(s);
        v.id += suffix;
        const auto idx = static_cast<vertex_index>(vertices_.size());
        copy_of.emplace(s, idx);
        ids_.insert(v.id);
        new_ids.push_back(v.id);
        task_count_ += !v.is_dummy;
        vertices_.push_back(std::move(v));
        origin_hash_.push_back(base_hashes_[s].combined);
        succ_.emplace_back();
        pred_.emplace_back();
    }
    auto link = [&](vertex_index p, vertex_index c) {
        succ_[p].push_back(c);
        pred_[c].push_back(p);
    };
    for (vertex_index s : source.members) {
        for (vertex_index c : base_->successors(s)) {
            auto it = copy_of.find(c);
            if (it != copy_of.end()) link(copy_of.at(s), it->second);
        }
    }
    for (std::size_t i = 0; i < source.entries.size(); ++i)
        for (vertex_index p : parents[i]) link(p, copy_of.at(source.entries[i]));
    for (std::size_t i = 0; i < source.exits.size(); ++i)
        for (vertex_index c : children[i]) link(copy_of.at(source.exits[i]), c);

    placed copy;
    for (vertex_index s : source.members) copy.members.push_back(copy_of.at(s));
    for (vertex_index s : source.entries) copy.entries.push_back(copy_of.at(s));
    for (vertex_index s : source.exits) copy.exits.push_back(copy_of.at(s));
    candidates.push_back(std::move(copy));
    return new_ids;
}

workflow growing_workflow::to_workflow(std::string name, provenance origin) const {
    workflow_draft d;
    d.name = std::move(name);
    d.origin = origin;
    d.vertices = vertices_;
    for (vertex_index p = 0; p < succ_.size(); ++p)
        for (vertex_index c : succ_[p]) d.edges.push_back({vertices_[p].id, vertices_[c].id});
    return workflow::create(std::move(d));
}

// ---------------------------------------------------------------------------

workflow replicate_pos(std::size_t n, const workflow& base, std::span<const pattern_occurrence> base_pos,
                       std::span<const pattern_occurrence> closest_pos, rng& r) {
    if (base.task_count() >= n) return base;
    if (base_pos.empty())
        throw not_scalable_error("base workflow '" + base.name() + "' has no pattern occurrences to replicate");
    const auto probabilities = compute_pattern_probabilities(base_pos, closest_pos);

    growing_workflow g(base, base_pos);
    while (g.task_count() < n) {
        const std::size_t pick = r.weighted_index(probabilities.normalized);
        g.add_po(base_pos[pick], r);
    }
    return g.to_workflow(base.name(), base.origin());
}

workflow assign_attributes(const workflow& g, const attribute_table& samples, rng& r) {
    workflow_draft d = g.to_draft();
    for (auto& v : d.vertices) {
        if (v.is_dummy) {
            v.runtime = 0.0;
            v.input_bytes.reset();
            v.output_bytes.reset();
            continue;
        }
        auto it = samples.find(v.vtype);
        if (it == samples.end() || it->second.empty())
            throw missing_attribute_error("no attribute samples for vtype '" + v.vtype + "'");
        const auto& s = it->second[r.uniform_index(it->second.size())];
        v.runtime = s.runtime;
        v.input_bytes = s.input_bytes;
        v.output_bytes = s.output_bytes;
    }
    return workflow::create(std::move(d));
}

generation_plan plan_generation(const recipe& r, std::size_t n) {
    if (r.instances.empty()) throw invalid_argument_error("recipe has no instances");
    if (n < r.smallest_size())
        throw invalid_argument_error("requested " + std::to_string(n) + " tasks, below the smallest training instance (" +
                                     std::to_string(r.smallest_size()) + ")");
    auto distance = [n](const recipe_instance& w) { return w.size > n ? w.size - n : n - w.size; };

    generation_plan plan;
    for (const auto& w : r.instances) {
        if (!plan.closest || std::make_tuple(distance(w), w.size, w.name) <
                                 std::make_tuple(distance(*plan.closest), plan.closest->size, plan.closest->name))
            plan.closest = &w;
    }

    double best_error = std::numeric_limits<double>::infinity();
    for (const auto& b : r.instances) {
        auto row = r.errors.find(b.name);
        if (row == r.errors.end()) continue;
        auto cell = row->second.find(plan.closest->name);
        if (cell == row->second.end()) continue;
        if (!plan.base || std::make_tuple(cell->second, b.size, b.name) < std::make_tuple(best_error, plan.base->size, plan.base->name)) {
            plan.base = &b;
            best_error = cell->second;
        }
    }
    if (!plan.base) plan.base = plan.closest;
    return plan;
}

workflow generate(const generation_request& request) {
    const recipe& rcp = request.source;
    const auto plan = plan_generation(rcp, request.num_tasks);
    rng r(request.seed);

    const auto& base_pos = rcp.pos.at(plan.base->name);
    const auto& closest_pos = rcp.pos.at(plan.closest->name);
    workflow g = replicate_pos(request.num_tasks, plan.base->graph, base_pos, closest_pos, r);
    g = assign_attributes(g, rcp.attributes, r);
    return g.renamed(plan.base->name + "-synthetic-" + std::to_string(request.num_tasks)).with_origin(provenance::synthetic);
}

} // namespace wfchef
