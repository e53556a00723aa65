#include "doctest.h"

#include <algorithm>
#include <filesystem>

#include "fixtures.hpp"
#include "wfchef/error.hpp"
#include "wfchef/workflow.hpp"

using namespace wfchef;
using namespace wfchef::testing;

namespace {

bool has_issue(const validation_report& r, validation_issue::kind k) {
    return std::any_of(r.begin(), r.end(), [&](const validation_issue& i) { return i.what == k; });
}

workflow_draft draft_of(std::vector<std::pair<std::string, std::string>> vs, std::vector<std::pair<std::string, std::string>> es) {
    workflow_draft d;
    for (auto& [id, t] : vs) d.vertices.push_back(vertex{id, t, 1.0, {}, {}, false});
    for (auto& [p, c] : es) d.edges.push_back({p, c});
    return d;
}

} // namespace

TEST_CASE("parse two tasks") {
    auto w = parse_workflow(R"({"name":"x","workflow":{"tasks":[
        {"name":"a","type":"t1","parents":[]},
        {"name":"b","type":"t2","parents":["a"],"runtime":2.5,"bytesRead":10,"bytesWritten":20}]}})");
    CHECK(w.size() == 2);
    CHECK(w.edge_count() == 1);
    CHECK(w.origin() == provenance::real_trace);
    auto b = w.index_of("b");
    CHECK(w.at(b).vtype == "t2");
    CHECK(*w.at(b).runtime == 2.5);
    CHECK(*w.at(b).input_bytes == 10);
    CHECK(*w.at(b).output_bytes == 20);
    REQUIRE(w.predecessors(b).size() == 1);
    CHECK(w.at(w.predecessors(b)[0]).id == "a");
    CHECK(validate(w).empty());
}

TEST_CASE("parse errors") {
    SUBCASE("dangling parent") {
        CHECK_THROWS_AS(parse_workflow(R"({"name":"x","workflow":{"tasks":[{"name":"a","type":"t","parents":["zz"]}]}})"),
                        validation_error);
    }
    SUBCASE("cycle lists one cycle") {
        try {
            parse_workflow(R"({"name":"x","workflow":{"tasks":[
                {"name":"a","type":"t","parents":["b"]},{"name":"b","type":"t","parents":["a"]}]}})");
            FAIL("expected a cycle error");
        } catch (const cycle_error& e) {
            REQUIRE(e.cycle().size() == 3);
            CHECK(e.cycle().front() == e.cycle().back());
        }
    }
    SUBCASE("missing field names its path") {
        try {
            parse_workflow(R"({"name":"x","workflow":{"tasks":[{"name":"a","type":"t","parents":[]},{"name":"b","parents":[]}]}})");
            FAIL("expected a parse error");
        } catch (const parse_error& e) {
            CHECK(std::string(e.what()).find("$.workflow.tasks[1]") != std::string::npos);
        }
    }
    SUBCASE("malformed json") { CHECK_THROWS_AS(parse_workflow("{\"name\":"), parse_error); }
    SUBCASE("negative runtime") {
        CHECK_THROWS_AS(parse_workflow(R"({"name":"x","workflow":{"tasks":[{"name":"a","type":"t","runtime":-1,"parents":[]}]}})"),
                        parse_error);
    }
    SUBCASE("negative bytes") {
        CHECK_THROWS_AS(parse_workflow(R"({"name":"x","workflow":{"tasks":[{"name":"a","type":"t","bytesRead":-3,"parents":[]}]}})"),
                        parse_error);
    }
}

TEST_CASE("unknown fields are ignored") {
    auto w = parse_workflow(R"({"name":"x","schemaVersion":"1.3","workflow":{"machines":[],"tasks":[
        {"name":"a","type":"t","parents":[],"files":[{"link":"input"}]}]}})");
    CHECK(w.size() == 1);
    CHECK(write_workflow(w).find("files") == std::string::npos);
}

TEST_CASE("validate reports") {
    CHECK(validate(diamond("a", "b", "c", "d")).empty());

    auto dup = draft_of({{"a", "t"}, {"a", "u"}}, {});
    CHECK(has_issue(validate(dup), validation_issue::kind::duplicate_id));

    auto dangling = draft_of({{"a", "t"}}, {{"a", "b"}});
    CHECK(has_issue(validate(dangling), validation_issue::kind::dangling_edge));

    auto loop = draft_of({{"a", "t"}}, {{"a", "a"}});
    CHECK(has_issue(validate(loop), validation_issue::kind::self_loop));

    auto cyc = draft_of({{"a", "t"}, {"b", "t"}, {"c", "t"}}, {{"a", "b"}, {"b", "c"}, {"c", "a"}});
    CHECK(has_issue(validate(cyc), validation_issue::kind::cycle));
    CHECK_THROWS_AS(workflow::create(cyc), cycle_error);

    auto untyped = draft_of({{"a", ""}}, {});
    CHECK(has_issue(validate(untyped), validation_issue::kind::empty_vtype));

    auto two_roots = draft_of({{"a", "t"}, {"b", "t"}}, {});
    CHECK(validate(two_roots).empty());
    two_roots.origin = provenance::normalized;
    CHECK(has_issue(validate(two_roots), validation_issue::kind::multiple_entries));
    CHECK(has_issue(validate(two_roots), validation_issue::kind::multiple_exits));

    auto bad_dummy = draft_of({{"a", "t"}}, {});
    bad_dummy.vertices[0].is_dummy = true;
    CHECK(has_issue(validate(bad_dummy), validation_issue::kind::bad_dummy));

    CHECK_THROWS_AS(workflow::create(dup), validation_error);
}

TEST_CASE("vertices are stored in id order") {
    auto w = make_workflow("w", {{"c", "t"}, {"a", "t"}, {"b", "t"}}, {{"c", "a"}, {"c", "b"}});
    CHECK(w.at(0).id == "a");
    CHECK(w.at(1).id == "b");
    CHECK(w.at(2).id == "c");
    auto topo = w.topological_order();
    REQUIRE(topo.size() == 3);
    CHECK(topo[0] == 2);
    CHECK(topo[1] == 0);
    CHECK(topo[2] == 1);
    CHECK_THROWS_AS(w.index_of("zz"), unknown_vertex_error);
}

TEST_CASE("duplicate edges collapse") {
    auto w = make_workflow("w", {{"a", "t"}, {"b", "t"}}, {{"a", "b"}, {"a", "b"}});
    CHECK(w.edge_count() == 1);
}

TEST_CASE("normalize entries and exits") {
    SUBCASE("diamond unchanged") {
        auto d = diamond("a", "b", "c", "d");
        auto n = normalize_entries_exits(d);
        CHECK(graph_identical(d, n));
        CHECK(n.origin() == provenance::real_trace);
    }
    SUBCASE("two isolated vertices") {
        auto w = make_workflow("w", {{"a", "t"}, {"b", "t"}}, {});
        auto n = normalize_entries_exits(w);
        CHECK(n.size() == 4);
        CHECK(n.task_count() == 2);
        CHECK(n.sources().size() == 1);
        CHECK(n.sinks().size() == 1);
        CHECK(n.origin() == provenance::normalized);
        CHECK(n.at(n.sources()[0]).is_dummy);
        CHECK(n.at(n.sources()[0]).vtype == entry_vtype);
        CHECK(n.at(n.sinks()[0]).vtype == exit_vtype);
        CHECK(n.successors(n.sources()[0]).size() == 2);
        CHECK(n.predecessors(n.sinks()[0]).size() == 2);
        CHECK(validate(n).empty());
    }
    SUBCASE("three chains into one sink") {
        auto w = make_workflow("w", {{"a1", "a"}, {"a2", "a"}, {"a3", "a"}, {"b1", "b"}, {"b2", "b"}, {"b3", "b"}, {"z", "z"}},
                               {{"a1", "b1"}, {"a2", "b2"}, {"a3", "b3"}, {"b1", "z"}, {"b2", "z"}, {"b3", "z"}});
        auto n = normalize_entries_exits(w);
        CHECK(n.size() == 8);
        CHECK(n.sinks().size() == 1);
        CHECK(n.at(n.sinks()[0]).id == "z");
        CHECK(n.at(n.sources()[0]).vtype == entry_vtype);
    }
    SUBCASE("dummy id avoids collisions") {
        auto w = make_workflow("w", {{std::string(entry_vtype), "t"}, {"b", "t"}}, {});
        auto n = normalize_entries_exits(w);
        CHECK(n.size() == 4);
        CHECK(validate(n).empty());
    }
    SUBCASE("idempotent") {
        rng r(11);
        for (int i = 0; i < 30; ++i) {
            auto w = random_dag("r", 1 + r.uniform_index(12), {"x", "y"}, 0.2, r);
            auto once = normalize_entries_exits(w);
            auto twice = normalize_entries_exits(once);
            CHECK(graph_identical(once, twice));
            CHECK(once.sources().size() == 1);
            CHECK(once.sinks().size() == 1);
        }
    }
}

TEST_CASE("write and parse round trip") {
    rng r(5);
    for (int i = 0; i < 40; ++i) {
        auto w = random_dag("r" + std::to_string(i), 1 + r.uniform_index(15), {"x", "y", "z"}, 0.25, r);
        workflow_draft d = w.to_draft();
        for (auto& v : d.vertices) {
            if (r.uniform01() < 0.5) v.input_bytes = r.next() >> 12;
            if (r.uniform01() < 0.5) v.output_bytes = r.next() >> 12;
            if (r.uniform01() < 0.3) v.runtime.reset();
            else v.runtime = r.uniform01() * 1000.0;
        }
        auto src = normalize_entries_exits(workflow::create(d));
        auto back = parse_workflow(write_workflow(src));
        CHECK(graph_identical(src, back));
        CHECK(back.name() == src.name());
        CHECK(back.origin() == src.origin());
        CHECK(write_workflow(back) == write_workflow(src));
    }
}

TEST_CASE("dummies and empty names serialize") {
    auto n = normalize_entries_exits(make_workflow("", {{"a", "t"}, {"b", "t"}}, {}));
    const auto text = write_workflow(n);
    CHECK(text.find("\"dummy\": true") != std::string::npos);
    CHECK(text.find("\"name\": \"\"") != std::string::npos);
    auto back = parse_workflow(text);
    CHECK(back.name().empty());
    CHECK(graph_identical(n, back));
    CHECK(validate(back).empty());
}

TEST_CASE("file round trip") {
    auto w = lane_family_instance("lanes", {2, 3}, 1);
    const std::string path = std::string(WFCHEF_TEST_TMPDIR) + "/roundtrip.json";
    std::filesystem::create_directories(WFCHEF_TEST_TMPDIR);
    write_workflow_file(w, path);
    CHECK(graph_identical(read_workflow_file(path), w));
    CHECK_THROWS_AS(read_workflow_file(std::string(WFCHEF_TEST_TMPDIR) + "/missing.json"), error);
}
