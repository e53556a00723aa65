#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wfchef/typehash.hpp"
#include "wfchef/workflow.hpp"

namespace wfchef {

// Digest of the sorted set of member type hashes, TH(g).
using pattern_hash = digest;

struct pattern_occurrence {
    std::vector<std::string> vertex_ids; // ascending
    pattern_hash hash;
    std::vector<std::string> entries; // members without a parent inside the occurrence
    std::vector<std::string> exits;   // members without a child inside the occurrence
    std::string host_workflow;

    std::size_t size() const noexcept { return vertex_ids.size(); }

    friend bool operator==(const pattern_occurrence&, const pattern_occurrence&) = default;
};

pattern_hash pattern_hash_of(std::span<const vertex_index> members, const std::vector<vertex_hashes>& hashes);

// Builds an occurrence over `members` of w, deriving entries, exits and the hash.
pattern_occurrence make_occurrence(const workflow& w, const std::vector<vertex_hashes>& hashes,
                                   std::vector<vertex_index> members);

// Common ancestors a of v and other such that some path from a to v or to
// other meets no other common ancestor. Ascending; empty when the two have
// no common ancestor. Throws invalid_argument_error when v == other.
std::vector<vertex_index> closest_common_ancestors(const workflow& w, vertex_index v, vertex_index other);
std::vector<vertex_index> closest_common_descendants(const workflow& w, vertex_index v, vertex_index other);

// Id-based variants; throw unknown_vertex_error.
std::vector<std::string> closest_common_ancestors(const workflow& w, std::string_view v, std::string_view other);
std::vector<std::string> closest_common_descendants(const workflow& w, std::string_view v, std::string_view other);

// The connected component containing v of the vertices lying strictly
// between `ancestors` and `descendants` (reachable from some ancestor,
// reaching some descendant, and in neither set). Throws
// invalid_argument_error if v is not on such a path.
pattern_occurrence sub_dag(const workflow& w, const std::vector<vertex_hashes>& hashes, vertex_index v,
                           std::span<const vertex_index> ancestors, std::span<const vertex_index> descendants);

// One greedy pass over the vertices in ascending id order, pairing each
// unvisited vertex with the first unvisited vertex of equal type hash.
// Occurrences come in matched pairs: elements 2k and 2k+1 were found
// together, are disjoint, share a hash, and their type-hash-matched
// entries (resp. exits) have identical parents (resp. children). A pair
// overlapping an earlier occurrence of the same hash is dropped.
// Occurrences of different hashes may nest.
std::vector<pattern_occurrence> detect_pattern_occurrences(const workflow& w, const std::vector<vertex_hashes>& hashes);
std::vector<pattern_occurrence> detect_pattern_occurrences(const workflow& w);

} // namespace wfchef
