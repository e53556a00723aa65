#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "wfchef/patterns.hpp"
#include "wfchef/recipe.hpp"
#include "wfchef/rng.hpp"
#include "wfchef/workflow.hpp"

namespace wfchef {

struct pattern_probabilities {
    enum class basis {
        proportional, // raw mass already sums to one
        renormalized, // some closest-instance patterns are missing from the base
        uniform,      // no shared pattern at all
    };
    // (nc / tc) / nb per base occurrence, in input order
    std::vector<double> raw;
    std::vector<double> normalized;
    basis how = basis::proportional;
};

// Empty when base_pos is empty.
pattern_probabilities compute_pattern_probabilities(std::span<const pattern_occurrence> base_pos,
                                                    std::span<const pattern_occurrence> closest_pos);

// A base workflow being grown by grafting copies of its occurrences.
class growing_workflow {
public:
    growing_workflow(const workflow& base, std::span<const pattern_occurrence> base_pos);
    growing_workflow(const workflow& base, std::vector<vertex_hashes> base_hashes, std::span<const pattern_occurrence> base_pos);

    std::size_t size() const noexcept { return vertices_.size(); }
    std::size_t task_count() const noexcept { return task_count_; }
    std::size_t occurrences_of(const pattern_hash& h) const;

    // Adds a fresh copy of `po` (an occurrence of the base) next to an
    // occurrence of the same pattern picked uniformly in the current graph,
    // grafted copies included. Each copied entry (resp. exit) gets the
    // outside parents (resp. children) of the type-hash-matched entry (resp.
    // exit) of that occurrence. New ids are "<source-id>__rep<k>". Returns
    // the new ids. Throws invalid_argument_error if the pattern is unknown.
    std::vector<std::string> add_po(const pattern_occurrence& po, rng& r);

    workflow to_workflow(std::string name, provenance origin) const;

private:
    struct placed {
        std::vector<vertex_index> members;
        std::vector<vertex_index> entries;
        std::vector<vertex_index> exits;
    };

    placed place(const pattern_occurrence& po) const;
    bool reaches_any(std::span<const vertex_index> from, const std::vector<bool>& targets) const;

    const workflow* base_;
    std::vector<vertex_hashes> base_hashes_;
    std::vector<vertex> vertices_;
    std::vector<type_hash> origin_hash_;
    std::vector<std::vector<vertex_index>> succ_;
    std::vector<std::vector<vertex_index>> pred_;
    std::unordered_set<std::string> ids_;
    std::map<pattern_hash, std::vector<placed>> occurrences_;
    std::size_t task_count_ = 0;
    std::size_t next_copy_ = 1;
};

// Grows base until it has at least n tasks, drawing base occurrences with
// compute_pattern_probabilities. Returns base unchanged when n <= |base|.
// Throws not_scalable_error when growth is needed but base has no occurrences.
workflow replicate_pos(std::size_t n, const workflow& base, std::span<const pattern_occurrence> base_pos,
                       std::span<const pattern_occurrence> closest_pos, rng& r);

// Draws runtime and byte counts for every non-dummy vertex uniformly from
// the samples of its vtype, in ascending id order. Dummies get runtime 0.
// Throws missing_attribute_error for a vtype without samples.
workflow assign_attributes(const workflow& g, const attribute_table& samples, rng& r);

struct generation_plan {
    const recipe_instance* closest = nullptr;
    const recipe_instance* base = nullptr;
};

// closest: minimal ||w| - n|, ties to the smaller instance (then name).
// base: minimal errors[b][closest], ties to the smaller base (then name);
// closest itself when it has no smaller instance.
generation_plan plan_generation(const recipe& r, std::size_t n);

struct generation_request {
    const recipe& source;
    std::size_t num_tasks;
    std::uint64_t seed;
};

workflow generate(const generation_request& request);

} // namespace wfchef
