#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wfchef/patterns.hpp"
#include "wfchef/typehash.hpp"
#include "wfchef/workflow.hpp"

namespace wfchef {

inline constexpr int recipe_schema_version = 1;

struct attribute_sample {
    std::optional<double> runtime;
    std::optional<std::uint64_t> input_bytes;
    std::optional<std::uint64_t> output_bytes;

    friend bool operator==(const attribute_sample&, const attribute_sample&) = default;
};

// vtype -> empirical task attributes
using attribute_table = std::map<std::string, std::vector<attribute_sample>>;

struct recipe_instance {
    std::string name;
    std::size_t size = 0; // task_count() of graph
    workflow_type_hash type_hash;
    workflow graph; // normalized
};

bool operator==(const recipe_instance& a, const recipe_instance& b);

struct recipe {
    int schema_version = recipe_schema_version;
    std::uint64_t seed = 0;
    unsigned samples = 1;
    std::vector<recipe_instance> instances; // training order
    std::map<std::string, std::vector<pattern_occurrence>> pos;
    // errors[base][target] for every |base| < |target|. +infinity marks a
    // base that cannot be grown (no occurrences); serialized as null.
    std::map<std::string, std::map<std::string, double>> errors;
    attribute_table attributes;

    const recipe_instance& instance(std::string_view name) const; // throws invalid_argument_error
    std::size_t smallest_size() const;

    friend bool operator==(const recipe&, const recipe&) = default;
};

struct recipe_options {
    std::uint64_t seed = 0;
    unsigned samples = 1;      // generations averaged per error entry
    unsigned jobs = 1;         // worker threads for the error matrix
    std::size_t attribute_cap = 10000; // reservoir size per vtype
};

// Normalizes every instance, detects occurrences, fills the error matrix
// (THF of target vs. base grown to |target|) and collects attribute
// samples. Throws invalid_argument_error for an empty set or duplicate names.
recipe build_recipe(std::vector<workflow> instances, const recipe_options& options = {});

// Seed of the k-th generation used for errors[base][target].
std::uint64_t error_sample_seed(std::uint64_t seed, std::string_view base, std::string_view target, unsigned sample);

// One error-matrix sample: THF(target, base grown to |target| with `seed`);
// +infinity when the base cannot be grown.
double replication_error(const recipe_instance& base, std::span<const pattern_occurrence> base_pos,
                         const recipe_instance& target, std::span<const pattern_occurrence> target_pos, std::uint64_t seed);

std::string save_recipe(const recipe& r);
// Throws recipe_version_error or corrupt_recipe_error.
recipe load_recipe(std::string_view document);

recipe read_recipe_file(const std::string& path);
void write_recipe_file(const recipe& r, const std::string& path);

} // namespace wfchef
