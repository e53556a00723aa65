#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "wfchef/cli.hpp"
#include "wfchef/workflow.hpp"

using namespace wfchef;
using namespace wfchef::testing;

namespace {

struct result {
    int status;
    std::string out;
    std::string err;
};

result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int status = cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

std::string dir() {
    const std::string d = std::string(WFCHEF_TEST_TMPDIR) + "/cli";
    std::filesystem::create_directories(d);
    return d;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string save(const workflow& w, const std::string& file) {
    const std::string path = dir() + "/" + file;
    write_workflow_file(w, path);
    return path;
}

bool one_error_line(const std::string& err, const std::string& category) {
    return err.rfind("error: " + category + ": ", 0) == 0 && err.find('\n') == err.size() - 1;
}

} // namespace

TEST_CASE("cli version and usage") {
    auto v = run({"--version"});
    CHECK(v.status == 0);
    CHECK(v.out.find("recipe-schema 1") != std::string::npos);
    CHECK(v.out.find("typehash sha256-framed-v1") != std::string::npos);

    auto bad = run({"frobnicate"});
    CHECK(bad.status == 2);
    CHECK(one_error_line(bad.err, "usage"));
    CHECK(run({}).status == 2);
    CHECK(run({"generate", "--recipe", "x"}).status == 2);
    CHECK(run({"--help"}).status == 0);
}

TEST_CASE("cli recipe build and generate") {
    const auto a = save(lane_family_instance("epi-75", {4, 4, 4, 4}, 1), "epi-75.json");
    const auto b = save(lane_family_instance("epi-121", {9, 9, 10}, 2), "epi-121.json");
    const auto rec = dir() + "/recipe.json";
    auto built = run({"recipe", "build", "--out", rec, "--seed", "3", a, b});
    REQUIRE(built.status == 0);
    CHECK(built.out.find("recipe: 2 instances") == 0);

    const auto out1 = dir() + "/gen1.json";
    const auto out2 = dir() + "/gen2.json";
    REQUIRE(run({"generate", "--recipe", rec, "--num-tasks", "127", "--seed", "7", "--out", out1}).status == 0);
    REQUIRE(run({"generate", "--recipe", rec, "--num-tasks", "127", "--seed", "7", "--out", out2}).status == 0);
    CHECK(slurp(out1) == slurp(out2));
    auto g = read_workflow_file(out1);
    CHECK(g.task_count() >= 127);
    CHECK(g.origin() == provenance::synthetic);

    auto verbose = run({"generate", "--recipe", rec, "--num-tasks", "127", "--seed", "7", "--out", out2, "-v"});
    CHECK(verbose.err.find("closest: epi-121") != std::string::npos);

    const auto many = dir() + "/many.json";
    auto k = run({"generate", "--recipe", rec, "--num-tasks", "130", "--samples", "3", "--out", many});
    REQUIRE(k.status == 0);
    for (int i = 0; i < 3; ++i) CHECK(std::filesystem::exists(dir() + "/many-" + std::to_string(i) + ".json"));
    CHECK(slurp(dir() + "/many-0.json") != slurp(dir() + "/many-1.json"));

    auto small = run({"generate", "--recipe", rec, "--num-tasks", "5", "--out", out2});
    CHECK(small.status == 1);
    CHECK(one_error_line(small.err, "invalid-argument"));

    std::ofstream(dir() + "/broken.json") << "{\"version\": 0}";
    auto broken = run({"generate", "--recipe", dir() + "/broken.json", "--num-tasks", "100", "--out", out2});
    CHECK(broken.status == 1);
    CHECK(one_error_line(broken.err, "recipe-version"));
}

TEST_CASE("cli metrics, hash and patterns") {
    const auto w = save(lane_family_instance("w", {2, 3}, 1), "w.json");
    const auto v = save(lane_family_instance("v", {3, 3}, 1), "v.json");
    auto same = run({"metrics", "--metric", "thf", w, w});
    CHECK(same.status == 0);
    CHECK(same.out == "0.000000\n");
    CHECK(run({"metrics", "--metric", "aed", w, w}).out == "0.000000\n");
    auto details = run({"metrics", "--metric", "thf", "--details", w, v});
    CHECK(details.out.find("hash\treal\tsynthetic\tresidual") != std::string::npos);
    CHECK(run({"metrics", "--metric", "ged", w, w}).status == 2);

    auto h = run({"hash", "--debug-strings", w});
    CHECK(h.status == 0);
    CHECK(h.out.find("pileup") != std::string::npos);
    auto p = run({"patterns", w});
    CHECK(p.status == 0);
    CHECK_FALSE(p.out.empty());

    std::ofstream(dir() + "/cyclic.json")
        << R"({"name":"c","workflow":{"tasks":[{"name":"a","type":"t","parents":["b"]},{"name":"b","type":"t","parents":["a"]}]}})";
    auto cyc = run({"hash", dir() + "/cyclic.json"});
    CHECK(cyc.status == 1);
    CHECK(one_error_line(cyc.err, "cycle"));
    auto missing = run({"hash", dir() + "/nope.json"});
    CHECK(missing.status == 1);
    CHECK(one_error_line(missing.err, "io"));
}

TEST_CASE("cli simulate and compare") {
    const auto w = save(lane_family_instance("w", {2, 3}, 1), "sim.json");
    auto s = run({"simulate", "--platform", "1x2", w});
    REQUIRE(s.status == 0);
    CHECK(s.out.rfind("id,type,start,finish,node,core\n", 0) == 0);
    std::ofstream(dir() + "/a.csv") << s.out;
    auto c = run({"compare", "--real", dir() + "/a.csv", "--synth", dir() + "/a.csv"});
    CHECK(c.status == 0);
    CHECK(c.out == "makespan_rel_diff,0.000000\nrmspe_start_dates,0.000000\n");
    CHECK(run({"simulate", "--platform", "0x2", w}).status == 1);
}
