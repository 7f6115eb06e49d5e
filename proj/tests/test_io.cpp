#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "neron/io.hpp"
#include "test_util.hpp"

using namespace nt;
using neron::Json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string corpus(const std::string& name) { return std::string(CORPUS_DIR) + "/" + name; }

} // namespace

TEST_CASE("problem parsing and round trip") {
    std::string text = slurp(corpus("cusp_n7.json"));
    ProblemFile pf = parse_problem(text);
    CHECK(pf.precision == 7);
    CHECK(!pf.artinian);
    CHECK(pf.unknowns == std::vector<std::string>{"Y1", "Y2"});
    CHECK(pf.ideal.size() == 1);

    // emit(parse(t)) reparses to an identical value
    Json emitted = emit_problem(pf);
    ProblemFile pf2 = parse_problem(emitted.dump());
    CHECK(emit_problem(pf2) == emitted);
}

TEST_CASE("problem validation errors") {
    CHECK_THROWS_AS(parse_problem("{"), Error);
    CHECK_THROWS_AS(parse_problem(R"({"precision": 0})"), Error);
    CHECK_THROWS_AS(parse_problem(R"({"precision": 5, "unknowns": ["Y1"], "ideal": [],
        "point": {"Y1": "x"}})"),
                    Error); // empty ideal
    CHECK_THROWS_AS(parse_problem(R"({"precision": 5, "unknowns": ["Y1", "Y1"],
        "ideal": ["Y1"], "point": {"Y1": "x"}})"),
                    Error); // duplicate unknown
    CHECK_THROWS_AS(parse_problem(R"({"precision": 5, "unknowns": ["Y1"],
        "ideal": ["Y1"], "point": {}})"),
                    Error); // missing point entry
    CHECK_THROWS_AS(parse_problem(R"({"precision": 5, "unknowns": ["x"],
        "ideal": ["x"], "point": {"x": "x"}})"),
                    Error); // unknown named x
}

TEST_CASE("series expression errors carry positions") {
    try {
        eval_series_expr("1 + &", 4);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ParseError);
        CHECK(std::string(e.what()).find("column") != std::string::npos);
    }
}

TEST_CASE("dvr pipeline: emitted results are deterministic and verify") {
    ProblemFile pf = parse_problem(slurp(corpus("cusp_n7.json")));
    DesingProblem p = build_dvr(pf);
    DesingResult r = desingularize(p);
    Json out1 = emit_result(p, r);
    Json out2 = emit_result(build_dvr(pf), desingularize(build_dvr(pf)));
    CHECK(out1.dump() == out2.dump()); // byte-identical across runs

    CHECK(out1.at("status") == "smooth");
    auto checks = verify_result(pf, out1);
    REQUIRE(!checks.empty());
    for (const auto& c : checks) {
        INFO(c.name, ": ", c.detail);
        CHECK(c.ok);
    }
}

TEST_CASE("localization result verifies") {
    ProblemFile pf = parse_problem(slurp(corpus("units_n10.json")));
    DesingProblem p = build_dvr(pf);
    DesingResult r = desingularize(p);
    Json out = emit_result(p, r);
    CHECK(out.at("status") == "localization");
    CHECK(out.at("inverted")[0] == "4*Y2^2");
    for (const auto& c : verify_result(pf, out)) {
        INFO(c.name, ": ", c.detail);
        CHECK(c.ok);
    }
}

TEST_CASE("failure branch result verifies") {
    ProblemFile pf = parse_problem(slurp(corpus("cusp4_n10.json")));
    DesingProblem p = build_dvr(pf);
    DesingResult r = desingularize(p);
    Json out = emit_result(p, r);
    CHECK(out.at("status") == "not-well-chosen");
    CHECK(out.at("message") == "y', N are not well chosen");
    for (const auto& c : verify_result(pf, out)) {
        INFO(c.name, ": ", c.detail);
        CHECK(c.ok);
    }
}

TEST_CASE("special pipeline: plain presentation result verifies") {
    ProblemFile pf = parse_problem(slurp(corpus("artinian_t2_plain.json")));
    SpecialProblem p = build_special(pf);
    SpecialResult r = special_desingularization(p);
    Json out = emit_result(p, r);
    CHECK(out.at("status") == "smooth");
    CHECK(out.at("eta") == "1");
    for (const auto& c : verify_result(pf, out)) {
        INFO(c.name, ": ", c.detail);
        CHECK(c.ok);
    }

    // the inner portion equals a standalone run of the flattened problem
    ProblemFile inner_pf = parse_problem(slurp(corpus("cusp_n7.json")));
    DesingProblem inner_p = build_dvr(inner_pf);
    Json inner_direct = emit_result(inner_p, desingularize(inner_p));
    CHECK(out.at("inner").dump() == inner_direct.dump());
}

TEST_CASE("corrupted results fail verification") {
    ProblemFile pf = parse_problem(slurp(corpus("cusp_n7.json")));
    DesingProblem p = build_dvr(pf);
    DesingResult r = desingularize(p);
    Json out = emit_result(p, r);

    SUBCASE("tampered relation") {
        std::string rel = out.at("relations")[0].get<std::string>();
        out["relations"][0] = rel + " + 1";
        bool all = true;
        for (const auto& c : verify_result(pf, out)) all = all && c.ok;
        CHECK(!all);
    }
    SUBCASE("tampered image") {
        out["pi"]["Y1"] = "x^2";
        bool all = true;
        for (const auto& c : verify_result(pf, out)) all = all && c.ok;
        CHECK(!all);
    }
    SUBCASE("tampered certificate order") {
        out["certificate"]["c"] = 4;
        bool all = true;
        for (const auto& c : verify_result(pf, out)) all = all && c.ok;
        CHECK(!all);
    }
}

TEST_CASE("polynomial parser rejects unknown identifiers with positions") {
    auto vt = xy_table({"Y1"});
    try {
        parse_polynomial("Y1 + Zq", vt);
        FAIL("expected an unknown-variable error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownVariable);
        CHECK(std::string(e.what()).find("Zq") != std::string::npos);
    }
}
