#include "doctest.h"
#include "support.hpp"

#include "cusp/artifacts.hpp"
#include "cusp/suites.hpp"

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

using namespace cusp;
using namespace testing;
using nlohmann::json;

namespace {

json free_ab_scene()
{
    return json::parse(R"({
        "name": "small",
        "group": {
            "factors": [{"symbol": "a", "order": "inf"}, {"symbol": "b", "order": "inf"}],
            "generators": ["a", "b"],
            "peripherals": [{"factor": "b", "letters": ["b"]}]
        },
        "r": 3,
        "R": 4
    })");
}

json even_b_scene()
{
    auto j = free_ab_scene();
    j["group"]["peripherals"][0]["letters"] = {"b", "b^2"};
    j["subgroup"] = json::parse(R"({
        "factors": [{"symbol": "a", "order": "inf"}, {"symbol": "c", "order": "inf"}],
        "generators": ["a", "c"],
        "peripherals": [{"factor": "c", "letters": ["c"]}],
        "images": {"a": "a", "c": "b^2"},
        "embeddings": [{"factor": "c", "target": "b"}]
    })");
    j["filling"] = json::parse(R"({"kernels": {"b": 6}, "sweep": [5, 6]})");
    return j;
}

std::string schema_path(const json &j)
{
    try {
        parse_scene(j);
    } catch (const SchemaError &e) {
        return e.path();
    }
    return "";
}

std::filesystem::path scratch(const std::string &name)
{
    auto dir = std::filesystem::temp_directory_path() / ("cusp-test-" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("scene parsing")
{
    const auto s = parse_scene(free_ab_scene());
    CHECK(s.name == "small");
    CHECK(s.group.factors.size() == 2);
    CHECK(s.group.peripheral_indices == std::vector<std::uint32_t>{1});
    CHECK(s.cone_depths == std::vector<int>{3});
    CHECK(s.seed == 1);

    const auto e = parse_scene(even_b_scene());
    REQUIRE(e.subgroup);
    REQUIRE(e.filling);
    CHECK(e.subgroup->peripherals.size() == 1);
    CHECK(e.filling->sweep == std::vector<std::uint64_t>{5, 6});
    CHECK(e.filling->kernels.kernel(1) == 6);
}

TEST_CASE("schema errors name the offending field")
{
    auto j = free_ab_scene();
    j["group"]["factors"][1]["order"] = "many";
    CHECK(schema_path(j) == "group.factors[1].order");

    j = free_ab_scene();
    j["group"]["factors"][1]["order"] = 1;
    CHECK(schema_path(j) == "group.factors[1].order");

    j = free_ab_scene();
    j["extra"] = 1;
    CHECK(schema_path(j) == "extra");

    j = free_ab_scene();
    j.erase("R");
    CHECK(schema_path(j) == "R");

    j = free_ab_scene();
    j["group"]["generators"][1] = "x";
    CHECK(schema_path(j) == "group.generators[1]");

    j = even_b_scene();
    j["subgroup"]["images"]["c"] = "a b";
    CHECK(schema_path(j) == "subgroup.images.c");

    j = even_b_scene();
    j["filling"]["sweep"][0] = -1;
    CHECK(schema_path(j) == "filling.sweep[0]");

    j = free_ab_scene();
    j["suites"] = {"transfer", "nonsense"};
    CHECK(schema_path(j) == "suites[1]");
}

TEST_CASE("suite requirements")
{
    auto j = free_ab_scene();
    j["r"] = 1;
    const auto low = parse_scene(j);
    try {
        check_suite_requirements(low, "transfer");
        FAIL("r = 1 accepted");
    } catch (const SchemaError &e) {
        CHECK(e.path() == "r");
    }
    CHECK_NOTHROW(check_suite_requirements(low, "horoball-shape"));

    const auto s = parse_scene(free_ab_scene());
    try {
        check_suite_requirements(s, "nonsense");
        FAIL("unknown suite accepted");
    } catch (const SpecError &e) {
        const std::string what = e.what();
        for (const auto &name : available_suites()) CHECK(what.find(name) != std::string::npos);
    }
    CHECK_THROWS_AS(check_suite_requirements(s, "uniform-qc"), SpecError);
    CHECK_THROWS_AS(check_suite_requirements(s, "filling"), SpecError);
    CHECK(needs_q("transfer"));
    CHECK_FALSE(needs_q("filling"));
}

TEST_CASE("reports are deterministic and versioned")
{
    auto j = free_ab_scene();
    j["fineness"] = json::parse(R"({"radii": [2, 3]})");
    const auto s = parse_scene(j);
    for (const auto *suite : {"horoball-shape", "fineness"}) {
        const auto a = run_suite(s, suite).to_json().dump();
        const auto b = run_suite(s, suite, 2).to_json().dump();
        CHECK(a == b);
        const auto r = json::parse(a);
        CHECK(r["schema"] == kReportSchema);
        CHECK(r["pass"] == true);
        CHECK(r["suite"] == suite);
        CHECK_FALSE(r["assertions"].empty());
    }
}

TEST_CASE("negative controls fail with a witness")
{
    auto small = free_ab_scene();
    small["corrupt"] = {{"remove_cone_edge", true}};
    small["fineness"] = json::parse(R"({"radii": [2, 3]})");
    auto line = small;
    line["horoball"] = {{"width", 8}, {"depth", 4}, {"cone_depth", 2}};
    auto filling = even_b_scene();
    filling["corrupt"] = {{"remove_cone_edge", true}};
    filling["filling"]["sweep"] = {6};
    filling["R"] = 5;

    const std::vector<std::pair<json, std::string>> cases{
        {line, "horoball-shape"}, {small, "transfer"}, {small, "fineness"}, {filling, "uniform-qc"}, {filling, "filling"}};
    for (const auto &[scene, suite] : cases) {
        CAPTURE(suite);
        const auto report = run_suite(parse_scene(scene), suite);
        CHECK_FALSE(report.pass());
        bool witnessed = false;
        for (const auto &a : report.assertions) witnessed = witnessed || (!a.pass && !a.witness.is_null());
        CHECK(witnessed);
    }
}

TEST_CASE("build manifest counts match the ball")
{
    const auto s = parse_scene(free_ab_scene());
    const auto dir = scratch("build");
    const auto manifest = write_build(s, dir, true);
    CHECK(manifest["schema"] == kManifestSchema);
    const auto ball = enumerate_ball(s.group, truncation_alphabet(s.group), s.R);
    CHECK(manifest["ball_elements"] == ball.size());
    const auto graphs = scene_graphs(s);
    REQUIRE(manifest["graphs"].size() == graphs.size());
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        const auto &entry = manifest["graphs"][i];
        const auto &g = graphs[i].graph;
        CHECK(entry["name"] == graphs[i].name);
        CHECK(entry["element_vertices"] == ball.size());
        CHECK(entry["vertices"] == g.size());
        CHECK(entry["edges"] == g.edge_count());
        const auto dump = json::parse(slurp(dir / entry["file"].get<std::string>()));
        CHECK(dump["vertices"].size() == g.size());
        CHECK(dump["edges"].size() == g.edge_count());
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("DOT export round-trips")
{
    const auto s = parse_scene(free_ab_scene());
    const auto dir = scratch("dot");
    const auto files = write_dot_files(s, dir);
    const auto graphs = scene_graphs(s);
    REQUIRE(files.size() == graphs.size());
    const std::regex node(R"re(^  v(\d+) \[label="((?:[^"\\]|\\.)*)", kind=(\w+), depth=(-?\d+)\];$)re");
    const std::regex edge(R"re(^  v(\d+) -- v(\d+) \[kind=(\w+)(?:, label="((?:[^"\\]|\\.)*)")?\];$)re");
    for (std::size_t i = 0; i < files.size(); ++i) {
        const auto &g = graphs[i].graph;
        std::istringstream in(slurp(dir / files[i]));
        std::string line;
        std::getline(in, line);
        CHECK(line == "graph space {");
        std::size_t nodes = 0, edges = 0, mismatched = 0;
        while (std::getline(in, line) && line != "}") {
            std::smatch m;
            if (std::regex_match(line, m, node)) {
                const auto v = static_cast<VertexId>(std::stoul(m[1]));
                mismatched += v >= g.size() || m[2].str() != vertex_name(g, v) || m[3].str() != to_string(g.vertex(v).kind) ||
                              std::stoi(m[4]) != g.vertex(v).depth;
                ++nodes;
            } else if (std::regex_match(line, m, edge)) {
                const auto u = static_cast<VertexId>(std::stoul(m[1]));
                const auto v = static_cast<VertexId>(std::stoul(m[2]));
                mismatched += u >= g.size() || v >= g.size() || !g.adjacent(u, v);
                ++edges;
            } else {
                ++mismatched;
            }
        }
        CHECK(line == "}");
        CHECK(mismatched == 0);
        CHECK(nodes == g.size());
        CHECK(edges == g.edge_count());
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("sweep tables")
{
    CHECK(sweep_csv({}) == "n,r,R,delta,lambda,injectivity_radius,h_filling\n");
    CHECK(sweep_json({}).empty());
    const auto e = parse_scene(even_b_scene());
    FillingChecks checks;
    const auto rows = sweep(*e.subgroup, {5, 6}, 3, 4, checks);
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].h_filling);
    CHECK(rows[1].h_filling);
    const auto csv = sweep_csv(rows);
    CHECK(csv.find("\n5,3,4,") != std::string::npos);
    CHECK(csv.find(",no\n") != std::string::npos);
    CHECK(csv.find(",yes\n") != std::string::npos);
    CHECK(sweep_json(rows).size() == 2);
}
