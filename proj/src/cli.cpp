#include "wfchef/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <filesystem>
#include <sstream>

#include <CLI11.hpp>

#include "wfchef/error.hpp"
#include "wfchef/generator.hpp"
#include "wfchef/metrics.hpp"
#include "wfchef/patterns.hpp"
#include "wfchef/recipe.hpp"
#include "wfchef/simulator.hpp"
#include "wfchef/typehash.hpp"
#include "wfchef/workflow.hpp"

namespace wfchef::cli {

namespace {

inline constexpr std::string_view tool_version = "1.0.0";

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string one_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write '" + path + "'");
    out << content;
}

// Every trace is analysed in single-entry/single-exit form.
workflow load_trace(const std::string& path) { return normalize_entries_exits(read_workflow_file(path)); }

std::string sample_path(const std::string& out, unsigned i) {
    std::filesystem::path p(out);
    return (p.parent_path() / (p.stem().string() + "-" + std::to_string(i) + p.extension().string())).string();
}

struct options {
    std::string trace;
    std::vector<std::string> traces;
    std::string out;
    std::string recipe_path;
    std::string metric = "thf";
    std::string real;
    std::string synth;
    std::string platform_spec = "4x48";
    std::uint64_t seed = 0;
    std::size_t num_tasks = 0;
    unsigned samples = 1;
    unsigned jobs = 1;
    bool debug_strings = false;
    bool details = false;
    bool verbose = false;
};

int cmd_hash(const options& o, std::ostream& out, std::ostream& err) {
    workflow w = load_trace(o.trace);
    auto hashes = compute_type_hashes(w);
    std::optional<std::vector<debug_strings>> strings;
    if (o.debug_strings) {
        strings = compute_debug_strings(w);
        if (!strings) err << "note: debug strings are only emitted for workflows of at most 50 vertices\n";
    }
    for (vertex_index v = 0; v < w.size(); ++v) {
        out << w.at(v).id << '\t' << hashes[v].combined.hex();
        if (strings) out << '\t' << (*strings)[v].combined;
        out << '\n';
    }
    return exit_ok;
}

int cmd_patterns(const options& o, std::ostream& out) {
    workflow w = load_trace(o.trace);
    for (const auto& po : detect_pattern_occurrences(w)) {
        out << po.hash.hex() << '\t';
        for (std::size_t i = 0; i < po.vertex_ids.size(); ++i) out << (i ? "," : "") << po.vertex_ids[i];
        out << '\n';
    }
    return exit_ok;
}

int cmd_recipe_build(const options& o, std::ostream& out) {
    std::vector<workflow> instances;
    for (const auto& t : o.traces) instances.push_back(read_workflow_file(t));
    recipe r = build_recipe(std::move(instances), recipe_options{o.seed, o.samples, o.jobs});
    write_text(o.out, save_recipe(r));
    std::size_t occurrences = 0, entries = 0;
    for (const auto& [name, list] : r.pos) occurrences += list.size();
    for (const auto& [base, row] : r.errors) entries += row.size();
    out << "recipe: " << r.instances.size() << " instances, " << occurrences << " pattern occurrences, " << entries
        << " error entries\n";
    return exit_ok;
}

int cmd_generate(const options& o, std::ostream& out, std::ostream& err) {
    if (o.samples == 0) throw invalid_argument_error("--samples must be at least 1");
    recipe r = load_recipe(read_text(o.recipe_path));
    if (o.verbose) {
        auto plan = plan_generation(r, o.num_tasks);
        err << "closest: " << plan.closest->name << " (" << plan.closest->size << " tasks), base: " << plan.base->name << " ("
            << plan.base->size << " tasks)\n";
    }
    for (unsigned i = 0; i < o.samples; ++i) {
        workflow g = generate({r, o.num_tasks, o.seed + i});
        const std::string path = o.samples == 1 ? o.out : sample_path(o.out, i);
        write_workflow_file(g, path);
        out << path << '\t' << g.task_count() << '\n';
    }
    return exit_ok;
}

int cmd_metrics(const options& o, std::ostream& out) {
    workflow real = load_trace(o.real);
    workflow synth = load_trace(o.synth);
    if (o.metric == "thf") {
        auto report = thf_details(real, synth);
        out << fixed6(report.value) << '\n';
        if (o.details) {
            out << "hash\treal\tsynthetic\tresidual\n";
            for (const auto& r : report.residuals)
                out << r.hash.hex() << '\t' << fixed6(r.reference_frequency) << '\t' << fixed6(r.other_frequency) << '\t'
                    << fixed6(r.reference_frequency - r.other_frequency) << '\n';
        }
    } else {
        auto report = aed_details(real, synth);
        out << fixed6(report.value) << '\n';
        if (o.details) {
            out << "vertex_removals\t" << report.vertex_removals << '\n'
                << "vertex_additions\t" << report.vertex_additions << '\n'
                << "edge_removals\t" << report.edge_removals << '\n'
                << "edge_additions\t" << report.edge_additions << '\n'
                << "matched_vertices\t" << report.matched_vertices << '\n';
        }
    }
    return exit_ok;
}

int cmd_simulate(const options& o, std::ostream& out) {
    workflow w = load_trace(o.trace);
    out << write_trace_csv(simulate(w, parse_platform(o.platform_spec)));
    return exit_ok;
}

int cmd_compare(const options& o, std::ostream& out) {
    auto real = parse_trace_csv(read_text(o.real));
    auto synth = parse_trace_csv(read_text(o.synth));
    out << "makespan_rel_diff," << fixed6(makespan_rel_diff(real, synth)) << '\n';
    out << "rmspe_start_dates," << fixed6(rmspe_start_dates(real, synth)) << '\n';
    return exit_ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Learn workflow recipes from traces and generate synthetic workflows", "wfchef"};
    app.require_subcommand(0, 1);
    bool show_version = false;
    app.add_flag("--version", show_version, "Print tool, recipe schema and digest versions");
    options o;

    auto* hash = app.add_subcommand("hash", "Print the type hash of every vertex");
    hash->add_option("trace", o.trace, "Trace file")->required();
    hash->add_flag("--debug-strings", o.debug_strings, "Append canonical strings (workflows of at most 50 vertices)");

    auto* patterns = app.add_subcommand("patterns", "Print detected pattern occurrences");
    patterns->add_option("trace", o.trace, "Trace file")->required();

    auto* recipe_cmd = app.add_subcommand("recipe", "Recipe operations");
    recipe_cmd->require_subcommand(1);
    auto* build = recipe_cmd->add_subcommand("build", "Build a recipe from training traces");
    build->add_option("--out", o.out, "Output recipe file")->required();
    build->add_option("--seed", o.seed, "Random seed");
    build->add_option("--samples", o.samples, "Generations averaged per error entry")->check(CLI::PositiveNumber);
    build->add_option("--jobs", o.jobs, "Worker threads for the error matrix")->check(CLI::PositiveNumber);
    build->add_option("traces", o.traces, "Training trace files")->required();

    auto* gen = app.add_subcommand("generate", "Generate a synthetic workflow");
    gen->add_option("--recipe", o.recipe_path, "Recipe file")->required();
    gen->add_option("--num-tasks", o.num_tasks, "Requested number of tasks")->required();
    gen->add_option("--seed", o.seed, "Random seed");
    gen->add_option("--out", o.out, "Output trace file")->required();
    gen->add_option("--samples", o.samples, "Number of workflows, seeds seed..seed+k-1")->check(CLI::PositiveNumber);
    gen->add_flag("-v,--verbose", o.verbose, "Report the chosen closest and base instances");

    auto* metrics = app.add_subcommand("metrics", "Structural similarity of two traces");
    metrics->add_option("--metric", o.metric, "thf or aed")->check(CLI::IsMember({"thf", "aed"}));
    metrics->add_flag("--details", o.details, "Per-hash residuals (thf) or edit counts (aed)");
    metrics->add_option("real", o.real, "Reference trace")->required();
    metrics->add_option("synthetic", o.synth, "Synthetic trace")->required();

    auto* sim = app.add_subcommand("simulate", "Simulate a trace on a homogeneous cluster");
    sim->add_option("--platform", o.platform_spec, "NODESxCORES");
    sim->add_option("trace", o.trace, "Trace file")->required();

    auto* compare = app.add_subcommand("compare", "Compare two simulated execution traces");
    compare->add_option("--real", o.real, "Execution trace CSV of the real workflow")->required();
    compare->add_option("--synth", o.synth, "Execution trace CSV of the synthetic workflow")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: usage: " << one_line(e.what()) << '\n';
        return exit_usage;
    }

    if (show_version) {
        out << "wfchef " << tool_version << "\nrecipe-schema " << recipe_schema_version << "\ntypehash " << typehash_version << '\n';
        return exit_ok;
    }

    try {
        if (hash->parsed()) return cmd_hash(o, out, err);
        if (patterns->parsed()) return cmd_patterns(o, out);
        if (build->parsed()) return cmd_recipe_build(o, out);
        if (gen->parsed()) return cmd_generate(o, out, err);
        if (metrics->parsed()) return cmd_metrics(o, out);
        if (sim->parsed()) return cmd_simulate(o, out);
        if (compare->parsed()) return cmd_compare(o, out);
        err << "error: usage: no subcommand given (try --help)\n";
        return exit_usage;
    } catch (const internal_error& e) {
        err << "error: " << e.category() << ": " << one_line(e.what()) << '\n';
        return exit_internal;
    } catch (const error& e) {
        err << "error: " << e.category() << ": " << one_line(e.what()) << '\n';
        return exit_invalid_input;
    } catch (const std::exception& e) {
        err << "error: internal: " << one_line(e.what()) << '\n';
        return exit_internal;
    }
}

} // namespace wfchef::cli
