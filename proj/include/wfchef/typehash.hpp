#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wfchef/digest.hpp"
#include "wfchef/workflow.hpp"

namespace wfchef {

using type_hash = digest;

// Identifies the digest scheme; bumped whenever the canonical encoding changes.
inline constexpr std::string_view typehash_version = "sha256-framed-v1";

struct vertex_hashes {
    type_hash top_down;
    type_hash bottom_up;
    type_hash combined;

    friend bool operator==(const vertex_hashes&, const vertex_hashes&) = default;
};

// Per-vertex hashes, indexed by vertex_index (hence in ascending id order).
//
// top_down(v)  = H('D', sorted unique top_down of successors, type(v))
// bottom_up(v) = H('U', sorted unique bottom_up of predecessors, type(v))
// combined(v)  = H('T', top_down(v), bottom_up(v))
//
// Child lists are count-prefixed and the type is length-prefixed, so the
// encoding is unambiguous. Sorting is over digest bytes. Dummy vertices
// take part in the recursion like any other vertex.
std::vector<vertex_hashes> compute_type_hashes(const workflow& w);

struct debug_strings {
    std::string top_down;
    std::string bottom_up;
    std::string combined;
};

// Human-readable form of the same recursion: "[c1,c2]type" with children in
// the digest order used above, and "TD|BU" for the combined hash. Returns
// nullopt when w has more than `max_vertices` vertices or any string would
// exceed `max_length` characters.
std::optional<std::vector<debug_strings>> compute_debug_strings(const workflow& w, std::size_t max_vertices = 50,
                                                                std::size_t max_length = 1 << 16);

struct workflow_type_hash {
    std::set<type_hash> hashes;
    // count / number of non-dummy vertices
    std::map<type_hash, double> frequencies;

    friend bool operator==(const workflow_type_hash&, const workflow_type_hash&) = default;
};

workflow_type_hash workflow_type_hash_of(const workflow& w);
workflow_type_hash workflow_type_hash_of(const workflow& w, const std::vector<vertex_hashes>& hashes);

} // namespace wfchef
