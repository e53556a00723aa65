#include "wfchef/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "wfchef/error.hpp"

namespace wfchef {

platform parse_platform(std::string_view spec) {
    auto x = spec.find('x');
    auto number = [&](std::string_view s) {
        unsigned value = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc{} || ptr != s.data() + s.size() || value == 0)
            throw invalid_argument_error("platform must be NODESxCORES with positive integers, got '" + std::string(spec) + "'");
        return value;
    };
    if (x == std::string_view::npos) number(""); // throws
    return platform{number(spec.substr(0, x)), number(spec.substr(x + 1))};
}

execution_trace simulate(const workflow& w, const platform& p) {
    if (p.num_nodes == 0 || p.cores_per_node == 0) throw invalid_argument_error("platform needs at least one node and one core");
    const std::size_t n = w.size();
    std::vector<double> duration(n, 0.0);
    for (vertex_index v = 0; v < n; ++v) {
        const vertex& x = w.at(v);
        if (x.is_dummy) continue;
        if (!x.runtime) throw missing_attribute_error("task '" + x.id + "' has no runtime");
        duration[v] = *x.runtime;
    }

    execution_trace trace;
    trace.tasks.resize(n);
    std::vector<std::size_t> waiting(n);
    std::set<vertex_index> ready;
    for (vertex_index v = 0; v < n; ++v) {
        waiting[v] = w.predecessors(v).size();
        if (waiting[v] == 0) ready.insert(v);
    }
    std::set<unsigned> free_cores;
    for (unsigned c = 0; c < p.total_cores(); ++c) free_cores.insert(c);

    // (finish time, task) of running tasks
    using running_task = std::pair<double, vertex_index>;
    std::priority_queue<running_task, std::vector<running_task>, std::greater<>> running;
    std::vector<unsigned> slot(n, 0);
    double now = 0.0;
    std::size_t done = 0;

    while (done < n) {
        while (!ready.empty() && !free_cores.empty()) {
            vertex_index v = *ready.begin();
            ready.erase(ready.begin());
            unsigned c = *free_cores.begin();
            free_cores.erase(free_cores.begin());
            slot[v] = c;
            auto& rec = trace.tasks[v];
            rec.id = w.at(v).id;
            rec.vtype = w.at(v).vtype;
            rec.start = now;
            rec.finish = now + duration[v];
            rec.node = c / p.cores_per_node;
            rec.core = c % p.cores_per_node;
            running.emplace(rec.finish, v);
        }
        if (running.empty()) throw internal_error("simulation stalled with unfinished tasks");
        // release everything finishing at the next event time
        now = running.top().first;
        while (!running.empty() && running.top().first == now) {
            vertex_index v = running.top().second;
            running.pop();
            ++done;
            free_cores.insert(slot[v]);
            for (vertex_index c : w.successors(v))
                if (--waiting[c] == 0) ready.insert(c);
        }
    }
    for (const auto& rec : trace.tasks) trace.makespan = std::max(trace.makespan, rec.finish);
    return trace;
}

double makespan_rel_diff(const execution_trace& real, const execution_trace& synthetic) {
    if (real.makespan == 0.0) throw invalid_argument_error("real makespan is zero");
    return std::abs(real.makespan - synthetic.makespan) / real.makespan;
}

double rmspe_start_dates(const execution_trace& real, const execution_trace& synthetic) {
    auto starts_by_type = [](const execution_trace& t) {
        std::map<std::string, std::vector<double>> out;
        for (const auto& rec : t.tasks) {
            if (rec.vtype == entry_vtype || rec.vtype == exit_vtype) continue;
            out[rec.vtype].push_back(rec.start);
        }
        for (auto& [type, starts] : out) std::sort(starts.begin(), starts.end());
        return out;
    };
    auto a = starts_by_type(real);
    auto b = starts_by_type(synthetic);

    double sum = 0.0;
    std::size_t pairs = 0;
    for (const auto& [type, real_starts] : a) {
        auto it = b.find(type);
        if (it == b.end()) continue;
        const std::size_t m = std::min(real_starts.size(), it->second.size());
        for (std::size_t i = 0; i < m; ++i) {
            if (real_starts[i] == 0.0) continue;
            const double e = (real_starts[i] - it->second[i]) / real_starts[i];
            sum += e * e;
            ++pairs;
        }
    }
    if (pairs == 0) throw invalid_argument_error("no start dates can be paired between the two traces");
    return 100.0 * std::sqrt(sum / static_cast<double>(pairs));
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    if (quoted) throw parse_error("line " + std::to_string(line_no) + ": unterminated quote");
    return fields;
}

double to_double(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw parse_error("line " + std::to_string(line_no) + ": bad number '" + s + "'");
    return v;
}

unsigned to_unsigned(const std::string& s, std::size_t line_no) {
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw parse_error("line " + std::to_string(line_no) + ": bad index '" + s + "'");
    return v;
}

} // namespace

std::string write_trace_csv(const execution_trace& trace) {
    std::string out = "id,type,start,finish,node,core\n";
    for (const auto& rec : trace.tasks) {
        out += csv_field(rec.id) + ',' + csv_field(rec.vtype) + ',' + fixed6(rec.start) + ',' + fixed6(rec.finish) + ',' +
               std::to_string(rec.node) + ',' + std::to_string(rec.core) + '\n';
    }
    out += "makespan," + fixed6(trace.makespan) + "\n";
    return out;
}

execution_trace parse_trace_csv(std::string_view document) {
    execution_trace trace;
    std::size_t line_no = 0;
    bool header = false, makespan = false;
    std::size_t pos = 0;
    while (pos < document.size()) {
        auto end = document.find('\n', pos);
        if (end == std::string_view::npos) end = document.size();
        std::string_view line = document.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        auto fields = split_csv_line(line, line_no);
        if (!header) {
            if (fields != std::vector<std::string>{"id", "type", "start", "finish", "node", "core"})
                throw parse_error("line 1: expected header id,type,start,finish,node,core");
            header = true;
            continue;
        }
        if (makespan) throw parse_error("line " + std::to_string(line_no) + ": data after the makespan line");
        if (fields.size() == 2 && fields[0] == "makespan") {
            trace.makespan = to_double(fields[1], line_no);
            makespan = true;
            continue;
        }
        if (fields.size() != 6) throw parse_error("line " + std::to_string(line_no) + ": expected 6 fields");
        trace.tasks.push_back({fields[0], fields[1], to_double(fields[2], line_no), to_double(fields[3], line_no),
                               to_unsigned(fields[4], line_no), to_unsigned(fields[5], line_no)});
    }
    if (!header) throw parse_error("empty trace");
    if (!makespan) throw parse_error("missing makespan line");
    return trace;
}

} // namespace wfchef
