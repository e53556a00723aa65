#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "wfchef/typehash.hpp"
#include "wfchef/workflow.hpp"

namespace wfchef {

struct thf_residual {
    type_hash hash;
    double reference_frequency = 0.0;
    double other_frequency = 0.0;
};

struct thf_report {
    double value = 0.0;
    std::vector<thf_residual> residuals; // one per hash of the union, ascending hash
};

// Root mean square of the frequency differences over the union of both
// workflows' non-dummy type hashes. Throws invalid_argument_error when
// either workflow has no task.
double thf(const workflow& reference, const workflow& other);
thf_report thf_details(const workflow& reference, const workflow& other);
thf_report thf_details(const workflow_type_hash& reference, const workflow_type_hash& other);

struct aed_report {
    double value = 0.0; // edits / reference task count
    std::size_t vertex_removals = 0;
    std::size_t vertex_additions = 0;
    std::size_t edge_removals = 0;
    std::size_t edge_additions = 0;
    std::size_t matched_vertices = 0;

    std::size_t edits() const noexcept { return vertex_removals + vertex_additions + edge_removals + edge_additions; }
};

// Approximate edit distance: an upper bound on the typed graph edit
// distance (vertex/edge insertions and deletions, unit cost, no
// relabelling), obtained from a greedy vertex matching that pairs equal
// type hashes first and equal vtypes second, preferring candidates whose
// neighbours are already matched to the vertex's neighbours, then refined
// by swapping images within small type-hash classes. Dummy vertices and
// their edges are ignored. Normalized by the reference task count; throws
// invalid_argument_error when the reference has no task.
double aed(const workflow& reference, const workflow& other);
aed_report aed_details(const workflow& reference, const workflow& other);

} // namespace wfchef
