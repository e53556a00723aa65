#include "wfchef/recipe.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "trace_json.hpp"
#include "wfchef/error.hpp"
#include "wfchef/generator.hpp"
#include "wfchef/metrics.hpp"
#include "wfchef/rng.hpp"

namespace wfchef {

bool operator==(const recipe_instance& a, const recipe_instance& b) {
    return a.name == b.name && a.size == b.size && a.type_hash == b.type_hash && a.graph.name() == b.graph.name() &&
           a.graph.origin() == b.graph.origin() && graph_identical(a.graph, b.graph);
}

const recipe_instance& recipe::instance(std::string_view name) const {
    for (const auto& i : instances)
        if (i.name == name) return i;
    throw invalid_argument_error("recipe has no instance named '" + std::string(name) + "'");
}

std::size_t recipe::smallest_size() const {
    if (instances.empty()) return 0;
    return std::min_element(instances.begin(), instances.end(), [](const auto& a, const auto& b) { return a.size < b.size; })->size;
}

std::uint64_t error_sample_seed(std::uint64_t seed, std::string_view base, std::string_view target, unsigned sample) {
    digest_builder b;
    b.tag('E').u64(seed).text(base).text(target).u64(sample);
    return b.finish().prefix64();
}

double replication_error(const recipe_instance& base, std::span<const pattern_occurrence> base_pos,
                         const recipe_instance& target, std::span<const pattern_occurrence> target_pos, std::uint64_t seed) {
    rng r(seed);
    try {
        workflow g = replicate_pos(target.size, base.graph, base_pos, target_pos, r);
        return thf_details(target.type_hash, workflow_type_hash_of(g)).value;
    } catch (const not_scalable_error&) {
        return std::numeric_limits<double>::infinity();
    }
}

namespace {

void collect_attributes(const std::vector<recipe_instance>& instances, std::uint64_t seed, std::size_t cap, attribute_table& out) {
    rng r(derive_seed(seed, "attributes"));
    std::map<std::string, std::size_t> seen;
    for (const auto& inst : instances) {
        for (const auto& v : inst.graph.vertices()) {
            if (v.is_dummy) continue;
            attribute_sample s{v.runtime, v.input_bytes, v.output_bytes};
            auto& bucket = out[v.vtype];
            std::size_t k = seen[v.vtype]++;
            if (bucket.size() < cap) {
                bucket.push_back(s);
            } else {
                // reservoir sampling, algorithm R
                std::size_t j = r.uniform_index(k + 1);
                if (j < cap) bucket[j] = s;
            }
        }
    }
}

} // namespace

recipe build_recipe(std::vector<workflow> instances, const recipe_options& options) {
    if (instances.empty()) throw invalid_argument_error("a recipe needs at least one workflow instance");
    if (options.samples == 0) throw invalid_argument_error("samples must be at least 1");
    if (options.attribute_cap == 0) throw invalid_argument_error("attribute cap must be at least 1");

    recipe r;
    r.seed = options.seed;
    r.samples = options.samples;

    std::set<std::string> names;
    std::vector<std::vector<vertex_hashes>> hashes;
    for (auto& w : instances) {
        if (!names.insert(w.name()).second) throw invalid_argument_error("duplicate workflow name '" + w.name() + "'");
        workflow g = normalize_entries_exits(w);
        hashes.push_back(compute_type_hashes(g));
        recipe_instance inst;
        inst.name = g.name();
        inst.size = g.task_count();
        inst.type_hash = workflow_type_hash_of(g, hashes.back());
        inst.graph = std::move(g);
        r.instances.push_back(std::move(inst));
    }
    for (std::size_t i = 0; i < r.instances.size(); ++i)
        r.pos[r.instances[i].name] = detect_pattern_occurrences(r.instances[i].graph, hashes[i]);

    struct job {
        std::size_t base;
        std::size_t target;
        double value = 0.0;
    };
    std::vector<job> jobs;
    for (std::size_t t = 0; t < r.instances.size(); ++t)
        for (std::size_t b = 0; b < r.instances.size(); ++b)
            if (r.instances[b].size < r.instances[t].size) jobs.push_back({b, t});

    auto evaluate = [&](job& j) {
        const auto& base = r.instances[j.base];
        const auto& target = r.instances[j.target];
        double sum = 0.0;
        for (unsigned k = 0; k < options.samples; ++k)
            sum += replication_error(base, r.pos.at(base.name), target, r.pos.at(target.name),
                                     error_sample_seed(options.seed, base.name, target.name, k));
        j.value = sum / static_cast<double>(options.samples);
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(jobs.size())));
    if (workers <= 1) {
        for (auto& j : jobs) evaluate(j);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> failures(workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < jobs.size(); i = next++) evaluate(jobs[i]);
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& f : failures)
            if (f) std::rethrow_exception(f);
    }
    for (const auto& j : jobs) r.errors[r.instances[j.base].name][r.instances[j.target].name] = j.value;

    collect_attributes(r.instances, options.seed, options.attribute_cap, r.attributes);
    return r;
}

// ---------------------------------------------------------------------------
// serialization

namespace {

using json = nlohmann::json;

json sample_to_json(const attribute_sample& s) {
    json j = json::object();
    if (s.runtime) j["runtime"] = *s.runtime;
    if (s.input_bytes) j["bytesRead"] = *s.input_bytes;
    if (s.output_bytes) j["bytesWritten"] = *s.output_bytes;
    return j;
}

[[noreturn]] void corrupt(const std::string& what) { throw corrupt_recipe_error(what); }

const json& field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) corrupt(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) corrupt(path + ": missing field '" + key + "'");
    return *it;
}

template <class T>
T get_as(const json& j, const std::string& path) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        corrupt(path + ": wrong type");
    }
}

} // namespace

std::string save_recipe(const recipe& r) {
    json doc;
    doc["version"] = r.schema_version;
    doc["seed"] = r.seed;
    doc["samples"] = r.samples;
    doc["typehash"] = std::string(typehash_version);

    json instances = json::array();
    for (const auto& inst : r.instances) {
        json freq = json::object();
        for (const auto& [h, f] : inst.type_hash.frequencies) freq[h.hex()] = f;
        instances.push_back({{"name", inst.name}, {"size", inst.size}, {"type_hash", std::move(freq)},
                             {"workflow", detail::workflow_to_json(inst.graph)}});
    }
    doc["instances"] = std::move(instances);

    json pos = json::object();
    for (const auto& [name, list] : r.pos) {
        json arr = json::array();
        for (const auto& po : list) arr.push_back({{"pattern_hash", po.hash.hex()}, {"vertices", po.vertex_ids}});
        pos[name] = std::move(arr);
    }
    doc["pos"] = std::move(pos);

    json errors = json::object();
    for (const auto& [base, row] : r.errors) {
        json jrow = json::object();
        for (const auto& [target, value] : row) jrow[target] = std::isfinite(value) ? json(value) : json(nullptr);
        errors[base] = std::move(jrow);
    }
    doc["errors"] = std::move(errors);

    json attributes = json::object();
    for (const auto& [vtype, samples] : r.attributes) {
        json arr = json::array();
        for (const auto& s : samples) arr.push_back(sample_to_json(s));
        attributes[vtype] = std::move(arr);
    }
    doc["attributes"] = std::move(attributes);
    return doc.dump() + "\n";
}

recipe load_recipe(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        corrupt(std::string("not a JSON document: ") + e.what());
    }
    if (!doc.is_object()) corrupt("$: expected an object");
    const auto& version = field(doc, "version", "$");
    if (!version.is_number_integer()) corrupt("$.version: expected an integer");
    if (version.get<int>() != recipe_schema_version)
        throw recipe_version_error("recipe schema version " + std::to_string(version.get<int>()) + ", expected " +
                                   std::to_string(recipe_schema_version));
    if (auto it = doc.find("typehash"); it != doc.end() && (!it->is_string() || it->get<std::string>() != typehash_version))
        throw recipe_version_error("recipe was built with a different type-hash scheme");

    recipe r;
    r.seed = get_as<std::uint64_t>(field(doc, "seed", "$"), "$.seed");
    r.samples = get_as<unsigned>(field(doc, "samples", "$"), "$.samples");

    const auto& instances = field(doc, "instances", "$");
    if (!instances.is_array()) corrupt("$.instances: expected an array");
    std::map<std::string, std::vector<vertex_hashes>> hashes;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const std::string path = "$.instances[" + std::to_string(i) + "]";
        recipe_instance inst;
        inst.name = get_as<std::string>(field(instances[i], "name", path), path + ".name");
        inst.size = get_as<std::size_t>(field(instances[i], "size", path), path + ".size");
        try {
            inst.graph = detail::workflow_from_json(field(instances[i], "workflow", path), path + ".workflow");
        } catch (const corrupt_recipe_error&) {
            throw;
        } catch (const error& e) {
            corrupt(e.what());
        }
        if (inst.graph.name() != inst.name) corrupt(path + ": instance name does not match its workflow");
        if (inst.graph.task_count() != inst.size) corrupt(path + ".size: does not match the workflow");
        auto& h = hashes[inst.name];
        h = compute_type_hashes(inst.graph);
        inst.type_hash = workflow_type_hash_of(inst.graph, h);

        const auto& freq = field(instances[i], "type_hash", path);
        if (!freq.is_object()) corrupt(path + ".type_hash: expected an object");
        workflow_type_hash stored;
        for (const auto& [hex, f] : freq.items()) {
            type_hash th;
            try {
                th = type_hash::from_hex(hex);
            } catch (const error&) {
                corrupt(path + ".type_hash: bad digest '" + hex + "'");
            }
            stored.hashes.insert(th);
            stored.frequencies[th] = get_as<double>(f, path + ".type_hash");
        }
        if (!(stored == inst.type_hash)) corrupt(path + ".type_hash: does not match the workflow");
        if (std::any_of(r.instances.begin(), r.instances.end(), [&](const auto& o) { return o.name == inst.name; }))
            corrupt(path + ".name: duplicate instance '" + inst.name + "'");
        r.instances.push_back(std::move(inst));
    }

    const auto& pos = field(doc, "pos", "$");
    if (!pos.is_object()) corrupt("$.pos: expected an object");
    for (const auto& inst : r.instances) {
        const std::string path = "$.pos." + inst.name;
        const auto& list = field(pos, inst.name.c_str(), "$.pos");
        if (!list.is_array()) corrupt(path + ": expected an array");
        auto& out = r.pos[inst.name];
        for (std::size_t k = 0; k < list.size(); ++k) {
            const std::string p = path + "[" + std::to_string(k) + "]";
            auto ids = get_as<std::vector<std::string>>(field(list[k], "vertices", p), p + ".vertices");
            if (ids.empty()) corrupt(p + ".vertices: empty occurrence");
            std::vector<vertex_index> members;
            for (const auto& id : ids) {
                auto v = inst.graph.find(id);
                if (!v) corrupt(p + ".vertices: unknown vertex '" + id + "'");
                members.push_back(*v);
            }
            auto po = make_occurrence(inst.graph, hashes.at(inst.name), std::move(members));
            if (po.hash.hex() != get_as<std::string>(field(list[k], "pattern_hash", p), p + ".pattern_hash"))
                corrupt(p + ".pattern_hash: does not match the vertices");
            out.push_back(std::move(po));
        }
    }
    if (pos.size() != r.instances.size()) corrupt("$.pos: entries for unknown instances");

    const auto& errors = field(doc, "errors", "$");
    if (!errors.is_object()) corrupt("$.errors: expected an object");
    for (const auto& [base, row] : errors.items()) {
        if (!row.is_object()) corrupt("$.errors." + base + ": expected an object");
        for (const auto& [target, value] : row.items()) {
            const std::string p = "$.errors." + base + "." + target;
            double v = value.is_null() ? std::numeric_limits<double>::infinity() : get_as<double>(value, p);
            if (!(v >= 0.0)) corrupt(p + ": negative error");
            r.errors[base][target] = v;
        }
    }
    for (const auto& b : r.instances) {
        for (const auto& t : r.instances) {
            bool expected = b.size < t.size;
            bool present = r.errors.count(b.name) && r.errors.at(b.name).count(t.name);
            if (expected != present) corrupt("$.errors: entry set does not match instance sizes at (" + b.name + ", " + t.name + ")");
        }
    }

    const auto& attributes = field(doc, "attributes", "$");
    if (!attributes.is_object()) corrupt("$.attributes: expected an object");
    for (const auto& [vtype, list] : attributes.items()) {
        const std::string p = "$.attributes." + vtype;
        if (!list.is_array()) corrupt(p + ": expected an array");
        auto& bucket = r.attributes[vtype];
        for (const auto& s : list) {
            if (!s.is_object()) corrupt(p + ": expected objects");
            attribute_sample a;
            if (auto it = s.find("runtime"); it != s.end()) a.runtime = get_as<double>(*it, p + ".runtime");
            if (auto it = s.find("bytesRead"); it != s.end()) a.input_bytes = get_as<std::uint64_t>(*it, p + ".bytesRead");
            if (auto it = s.find("bytesWritten"); it != s.end()) a.output_bytes = get_as<std::uint64_t>(*it, p + ".bytesWritten");
            bucket.push_back(a);
        }
    }
    return r;
}

recipe read_recipe_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_recipe(buffer.str());
}

void write_recipe_file(const recipe& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write '" + path + "'");
    out << save_recipe(r);
}

} // namespace wfchef
