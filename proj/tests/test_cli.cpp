#include <cmath>

#include "ctlab/commands.hpp"
#include "doctest.h"

using namespace ctlab;
using nlohmann::json;

namespace {

json minimal_cone() {
    return json{{"schema", 1},
                {"name", "cone"},
                {"dimension", 2},
                {"geometry", "flat"},
                {"lamination", {{"leaves", json::array()}}},
                {"probes", {{{"region", 0}, {"boost", {0, 0}}},
                            {{"region", 0}, {"boost", {0.8, 0}}}}},
                {"seed", 11}};
}

}  // namespace

TEST_CASE("scenario parsing and validation") {
    Scenario s = parse_scenario_json(minimal_cone());
    CHECK(s.name == "cone");
    CHECK(s.probes.size() == 2);
    BuiltScenario bs = build_scenario(s);
    CHECK(bs.lines.size() == 2);
    CHECK(bs.dom.spine().vertices.size() == 1);

    // crossing leaves surface with their indices
    json bad = minimal_cone();
    bad["lamination"]["leaves"] = {{{"endpoints", {0.0, 3.141592653589793}}, {"weight", 1.0}},
                                   {{"endpoints", {1.5707963267948966, 4.71238898038469}},
                                    {"weight", 1.0}}};
    bad["probes"] = json::array();
    Scenario sbad = parse_scenario_json(bad);
    try {
        build_scenario(sbad);
        FAIL("expected CrossingLeaves");
    } catch (const CrossingLeaves& e) {
        CHECK(e.i == 0);
        CHECK(e.j == 1);
    }

    // ds geometry needs dimension 2
    json ds = minimal_cone();
    ds["geometry"] = "ds";
    ds["dimension"] = 3;
    CHECK_THROWS_AS(parse_scenario_json(ds), ValidationError);

    // a probe whose normal leaves the vertex's normal region
    json leafy = minimal_cone();
    leafy["lamination"]["leaves"] = {{{"endpoints", {1.5707963267948966, -1.5707963267948966}},
                                      {"weight", 1.0}}};
    leafy["probes"] = {{{"region", 0}, {"boost", {2.0, 0.0}}}};
    Scenario sleafy = parse_scenario_json(leafy);
    bool valid_somewhere = true;
    try {
        build_scenario(sleafy);
    } catch (const ValidationError&) {
        valid_somewhere = false;
    }
    // region 0 sits on the x<0 side, so a strong +x boost must fail on one
    // of the two orientations; flip if the first was accepted
    if (valid_somewhere) {
        leafy["probes"] = {{{"region", 0}, {"boost", {-2.0, 0.0}}}};
        CHECK_THROWS_AS(build_scenario(parse_scenario_json(leafy)), ValidationError);
    }
}

TEST_CASE("auto probes use the region representative") {
    json j = minimal_cone();
    j["lamination"]["leaves"] = {{{"endpoints", {1.5707963267948966, -1.5707963267948966}},
                                  {"weight", 1.0}}};
    j["probes"] = {{{"region", 0}}, {{"region", 1}}};
    BuiltScenario bs = build_scenario(parse_scenario_json(j));
    REQUIRE(bs.lines.size() == 2);
    for (const auto& line : bs.lines) CHECK(bs.dom.line_resolves(line));
    // the two auto normals straddle the leaf
    CHECK(bs.lines[0].N.v.x[0] * bs.lines[1].N.v.x[0] < 0);
}

TEST_CASE("missing or malformed scenario files raise parse errors") {
    CHECK_THROWS_AS(parse_scenario("no_such_file.json"), ParseError);
    CHECK_THROWS_AS(parse_scenario_json(json::array()), ParseError);
    json bad = minimal_cone();
    bad["schema"] = 99;
    CHECK_THROWS_AS(parse_scenario_json(bad), ParseError);
}

TEST_CASE("scenario hash is stable and seed-sensitive") {
    Scenario s1 = parse_scenario_json(minimal_cone());
    Scenario s2 = parse_scenario_json(minimal_cone());
    CHECK(scenario_hash(s1) == scenario_hash(s2));
    s2.seed = 999;
    CHECK(scenario_hash(s1) != scenario_hash(s2));
}

TEST_CASE("eval command reports the closed-form cone evaluation") {
    Scenario s = parse_scenario_json(minimal_cone());
    RunOptions opt;
    opt.out_dir = "cli_test_out";
    opt.point = MinkVec(2, 0, 0);
    Report rep = run_command("eval", s, opt);
    CHECK_FALSE(rep.any_fail());
    bool saw_point = false;
    for (const auto& c : rep.checks) {
        if (c.name == "eval_point") {
            saw_point = true;
            CHECK(c.values.at("T").get<double>() == doctest::Approx(2.0));
        }
        if (c.name.rfind("eval_probe_", 0) == 0) CHECK(c.status == "pass");
    }
    CHECK(saw_point);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
    json j = minimal_cone();
    j["sweeps"] = {{"past", {0.4, 0.2, 0.1}}};
    j["mesh"] = {{"h", 0.25}, {"refinements", 1}};
    Scenario s = parse_scenario_json(j);
    RunOptions o1;
    o1.out_dir = "cli_test_out";
    o1.threads = 1;
    RunOptions o2 = o1;
    o2.threads = 2;
    std::string r1 = run_command("sweep-past", s, o1).to_json().dump();
    std::string r2 = run_command("sweep-past", s, o2).to_json().dump();
    std::string r3 = run_command("sweep-past", s, o1).to_json().dump();
    CHECK(r1 == r2);
    CHECK(r1 == r3);
}

TEST_CASE("wick command needs a rescaled geometry") {
    Scenario s = parse_scenario_json(minimal_cone());
    RunOptions opt;
    opt.out_dir = "cli_test_out";
    CHECK_THROWS_AS(run_command("wick", s, opt), ValidationError);
}

TEST_CASE("module failures become fail records, not crashes") {
    json j = minimal_cone();
    j["probes"] = json::array();  // tree check needs probes
    Scenario s = parse_scenario_json(j);
    RunOptions opt;
    opt.out_dir = "cli_test_out";
    CHECK_THROWS_AS(run_command("check-tree", s, opt), ValidationError);
    // an internal numeric error surfaces as a fail record instead
    json j2 = minimal_cone();
    Scenario s2 = parse_scenario_json(j2);
    RunOptions opt2;
    opt2.out_dir = "cli_test_out";
    opt2.level = -1.0;  // invalid level reaches the levelset module
    Report rep = run_command("check-curvature", s2, opt2);
    CHECK(rep.any_fail());
    CHECK(rep.checks.size() == 1);
    CHECK(rep.checks[0].name == "command_error");
}
