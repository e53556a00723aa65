#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "wfchef/workflow.hpp"

namespace wfchef {

struct platform {
    unsigned num_nodes = 4;
    unsigned cores_per_node = 48;

    unsigned total_cores() const noexcept { return num_nodes * cores_per_node; }
};

// Parses "NODESxCORES", e.g. "4x48". Throws invalid_argument_error.
platform parse_platform(std::string_view spec);

struct task_record {
    std::string id;
    std::string vtype;
    double start = 0.0;
    double finish = 0.0;
    unsigned node = 0;
    unsigned core = 0;

    friend bool operator==(const task_record&, const task_record&) = default;
};

struct execution_trace {
    std::vector<task_record> tasks; // ascending id
    double makespan = 0.0;

    friend bool operator==(const execution_trace&, const execution_trace&) = default;
};

// Greedy list scheduling on identical cores, runtime only. Whenever cores
// are free, ready tasks start in ascending id order on the lowest-index
// free core (node-major). Dummies run for zero time. Throws
// missing_attribute_error when a non-dummy task has no runtime.
execution_trace simulate(const workflow& w, const platform& p);

// |real - synthetic| / real. Throws invalid_argument_error when real is 0.
double makespan_rel_diff(const execution_trace& real, const execution_trace& synthetic);

// Start dates are paired per vtype, rank by rank after sorting each side
// ascending, truncated to the shorter list. Dummy vtypes and pairs whose
// real start is 0 are skipped. Returns the percentage
// 100 * sqrt(mean(((real - synthetic) / real)^2)). Throws
// invalid_argument_error when no pair remains.
double rmspe_start_dates(const execution_trace& real, const execution_trace& synthetic);

// CSV with header `id,type,start,finish,node,core`, six decimals, and a
// final `makespan,<seconds>` line. Fields containing commas or quotes are quoted.
std::string write_trace_csv(const execution_trace& trace);
execution_trace parse_trace_csv(std::string_view document); // throws parse_error

} // namespace wfchef
