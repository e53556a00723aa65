#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wfchef/rng.hpp"
#include "wfchef/workflow.hpp"

namespace wfchef::testing {

// (id, vtype) vertices and (parent, child) edges; runtimes left unset.
workflow make_workflow(const std::string& name, const std::vector<std::pair<std::string, std::string>>& vertices,
                       const std::vector<std::pair<std::string, std::string>>& edges);

// a -> {b, c} -> d with the given vtypes
workflow diamond(const std::string& top, const std::string& left, const std::string& right, const std::string& bottom);

// Two "purple" sub-workflows of different sizes under one root (5 and 3
// tasks), two "blue -> green" chains nested in the larger one, and two
// single "orange" tasks; 6 occurrences in 3 patterns.
workflow nested_occurrences_fixture();

// Lanes of filter -> convert -> index -> map between a split and a merge;
// one split/merge block per entry of `lanes_per_chunk`, all merged and
// post-processed by three global tasks. Tasks: sum(2 + 4 * lanes) + 3.
workflow lane_family_instance(const std::string& name, const std::vector<std::size_t>& lanes_per_chunk, std::uint64_t seed);

// stage one: `width1` parallel align tasks, joined; stage two: `width2`
// analyze -> plot chains, joined by a report. Tasks: width1 + 2 * width2 + 3.
workflow fork_join_instance(const std::string& name, std::size_t width1, std::size_t width2, std::uint64_t seed);

// Random typed DAG: each pair i < j gets an edge with probability
// `edge_probability`; vtypes drawn from `types`; integer runtimes 1..20.
workflow random_dag(const std::string& name, std::size_t n, const std::vector<std::string>& types, double edge_probability,
                    rng& r);

// Random DAG with repeated structure: a random motif copied `copies`
// times between shared fork and join vertices, plus some random noise.
workflow repeated_motif_dag(const std::string& name, std::size_t max_vertices, rng& r);

// Same graph with every id replaced through a random permutation of fresh names.
workflow with_shuffled_ids(const workflow& w, rng& r);

// Integer runtimes in [1, max_runtime] for every non-dummy vertex.
workflow with_random_runtimes(const workflow& w, rng& r, int max_runtime = 20);

} // namespace wfchef::testing
