#include "wfchef/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <unordered_map>

#include "wfchef/error.hpp"

namespace wfchef {

thf_report thf_details(const workflow_type_hash& reference, const workflow_type_hash& other) {
    if (reference.frequencies.empty() || other.frequencies.empty())
        throw invalid_argument_error("THF is undefined for a workflow without tasks");
    std::set<type_hash> all = reference.hashes;
    all.insert(other.hashes.begin(), other.hashes.end());

    thf_report report;
    double sum = 0.0;
    for (const auto& h : all) {
        auto frequency = [&](const workflow_type_hash& w) {
            auto it = w.frequencies.find(h);
            return it == w.frequencies.end() ? 0.0 : it->second;
        };
        thf_residual r{h, frequency(reference), frequency(other)};
        const double d = r.reference_frequency - r.other_frequency;
        sum += d * d;
        report.residuals.push_back(r);
    }
    report.value = std::sqrt(sum / static_cast<double>(all.size()));
    return report;
}

thf_report thf_details(const workflow& reference, const workflow& other) {
    return thf_details(workflow_type_hash_of(reference), workflow_type_hash_of(other));
}

double thf(const workflow& reference, const workflow& other) { return thf_details(reference, other).value; }

namespace {

constexpr vertex_index unmatched = std::numeric_limits<vertex_index>::max();

class matcher {
public:
    matcher(const workflow& reference, const workflow& other)
        : ref_(reference), other_(other), ref_hashes_(compute_type_hashes(reference)),
          other_hashes_(compute_type_hashes(other)), to_other_(reference.size(), unmatched),
          to_ref_(other.size(), unmatched) {}

    void run() {
        std::map<type_hash, std::set<vertex_index>> by_hash;
        std::unordered_map<std::string, std::set<vertex_index>> by_type;
        for (vertex_index v = 0; v < other_.size(); ++v) {
            if (other_.at(v).is_dummy) continue;
            by_hash[other_hashes_[v].combined].insert(v);
            by_type[other_.at(v).vtype].insert(v);
        }
        auto take = [&](vertex_index u, vertex_index c) {
            to_other_[u] = c;
            to_ref_[c] = u;
            by_hash[other_hashes_[c].combined].erase(c);
            by_type[other_.at(c).vtype].erase(c);
        };

        // hashes held by exactly one task on each side anchor the rest
        std::map<type_hash, std::size_t> ref_count;
        for (vertex_index u = 0; u < ref_.size(); ++u)
            if (!ref_.at(u).is_dummy) ++ref_count[ref_hashes_[u].combined];
        for (vertex_index u = 0; u < ref_.size(); ++u) {
            if (ref_.at(u).is_dummy) continue;
            auto it = by_hash.find(ref_hashes_[u].combined);
            if (it != by_hash.end() && it->second.size() == 1 && ref_count[it->first] == 1) take(u, *it->second.begin());
        }

        for (vertex_index u : ref_.topological_order()) {
            if (ref_.at(u).is_dummy || to_other_[u] != unmatched) continue;
            auto it = by_hash.find(ref_hashes_[u].combined);
            if (it == by_hash.end() || it->second.empty()) continue;
            take(u, pick(u, it->second));
        }
        for (vertex_index u : ref_.topological_order()) {
            if (ref_.at(u).is_dummy || to_other_[u] != unmatched) continue;
            auto it = by_type.find(ref_.at(u).vtype);
            if (it == by_type.end() || it->second.empty()) continue;
            take(u, pick(u, it->second));
        }
        improve();
    }

    aed_report report() const {
        aed_report r;
        std::size_t ref_tasks = 0, ref_edges = 0, other_edges = 0, kept_edges = 0;
        for (vertex_index u = 0; u < ref_.size(); ++u) {
            if (ref_.at(u).is_dummy) continue;
            ++ref_tasks;
            if (to_other_[u] == unmatched) ++r.vertex_removals;
            else ++r.matched_vertices;
            for (vertex_index c : ref_.successors(u)) {
                if (ref_.at(c).is_dummy) continue;
                ++ref_edges;
                if (to_other_[u] != unmatched && to_other_[c] != unmatched && has_edge(other_, to_other_[u], to_other_[c]))
                    ++kept_edges;
            }
        }
        for (vertex_index v = 0; v < other_.size(); ++v) {
            if (other_.at(v).is_dummy) continue;
            if (to_ref_[v] == unmatched) ++r.vertex_additions;
            for (vertex_index c : other_.successors(v)) other_edges += !other_.at(c).is_dummy;
        }
        r.edge_removals = ref_edges - kept_edges;
        r.edge_additions = other_edges - kept_edges;
        r.value = static_cast<double>(r.edits()) / static_cast<double>(ref_tasks);
        return r;
    }

private:
    static constexpr std::size_t max_swap_class = 64;
    static constexpr int max_swap_passes = 4;

    // Kept edges touching u1 or u2, each counted once.
    std::size_t kept_around(vertex_index u1, vertex_index u2) const {
        std::size_t kept = 0;
        auto kept_edge = [&](vertex_index a, vertex_index b) {
            return !ref_.at(a).is_dummy && !ref_.at(b).is_dummy && to_other_[a] != unmatched && to_other_[b] != unmatched &&
                   has_edge(other_, to_other_[a], to_other_[b]);
        };
        for (vertex_index u : {u1, u2}) {
            for (vertex_index c : ref_.successors(u)) kept += kept_edge(u, c);
            for (vertex_index p : ref_.predecessors(u))
                if (u == u1 || p != u1) kept += kept_edge(p, u);
        }
        return kept;
    }

    // Swaps the images of equal-hash tasks while that keeps more edges.
    void improve() {
        std::map<type_hash, std::vector<vertex_index>> classes;
        for (vertex_index u = 0; u < ref_.size(); ++u)
            if (!ref_.at(u).is_dummy && to_other_[u] != unmatched) classes[ref_hashes_[u].combined].push_back(u);
        for (int pass = 0; pass < max_swap_passes; ++pass) {
            bool changed = false;
            for (const auto& [h, members] : classes) {
                if (members.size() < 2 || members.size() > max_swap_class) continue;
                for (std::size_t i = 0; i < members.size(); ++i)
                    for (std::size_t j = i + 1; j < members.size(); ++j) {
                        const vertex_index a = members[i], b = members[j];
                        const std::size_t before = kept_around(a, b);
                        std::swap(to_other_[a], to_other_[b]);
                        if (kept_around(a, b) > before) {
                            to_ref_[to_other_[a]] = a;
                            to_ref_[to_other_[b]] = b;
                            changed = true;
                        } else {
                            std::swap(to_other_[a], to_other_[b]);
                        }
                    }
            }
            if (!changed) break;
        }
    }

    static bool has_edge(const workflow& w, vertex_index a, vertex_index b) {
        auto s = w.successors(a);
        return std::binary_search(s.begin(), s.end(), b);
    }

    // Candidate with most neighbours matched onto its neighbours, then same
    // id, then closest degree, then lowest index.
    vertex_index pick(vertex_index u, const std::set<vertex_index>& candidates) const {
        std::unordered_map<vertex_index, std::size_t> score;
        for (vertex_index p : ref_.predecessors(u)) {
            if (to_other_[p] == unmatched) continue;
            for (vertex_index c : other_.successors(to_other_[p]))
                if (candidates.count(c) != 0) ++score[c];
        }
        for (vertex_index s : ref_.successors(u)) {
            if (to_other_[s] == unmatched) continue;
            for (vertex_index c : other_.predecessors(to_other_[s]))
                if (candidates.count(c) != 0) ++score[c];
        }
        const auto same_id = other_.find(ref_.at(u).id);
        auto degree_gap = [&](vertex_index c) {
            auto gap = [](std::size_t a, std::size_t b) { return a > b ? a - b : b - a; };
            return gap(ref_.predecessors(u).size(), other_.predecessors(c).size()) +
                   gap(ref_.successors(u).size(), other_.successors(c).size());
        };
        auto better = [&](vertex_index a, vertex_index b) {
            auto sa = score.count(a) ? score.at(a) : 0, sb = score.count(b) ? score.at(b) : 0;
            if (sa != sb) return sa > sb;
            bool ia = same_id && *same_id == a, ib = same_id && *same_id == b;
            if (ia != ib) return ia;
            auto ga = degree_gap(a), gb = degree_gap(b);
            if (ga != gb) return ga < gb;
            return a < b;
        };

        vertex_index best = *candidates.begin();
        if (same_id && candidates.count(*same_id) != 0 && better(*same_id, best)) best = *same_id;
        for (const auto& [c, s] : score) {
            (void)s;
            if (better(c, best)) best = c;
        }
        return best;
    }

    const workflow& ref_;
    const workflow& other_;
    std::vector<vertex_hashes> ref_hashes_;
    std::vector<vertex_hashes> other_hashes_;
    std::vector<vertex_index> to_other_;
    std::vector<vertex_index> to_ref_;
};

} // namespace

aed_report aed_details(const workflow& reference, const workflow& other) {
    if (reference.task_count() == 0) throw invalid_argument_error("AED is undefined for a reference workflow without tasks");
    matcher m(reference, other);
    m.run();
    return m.report();
}

double aed(const workflow& reference, const workflow& other) { return aed_details(reference, other).value; }

} // namespace wfchef
