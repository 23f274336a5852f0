#include <doctest.h>

#include <fstream>
#include <sstream>

#include "staride/harness.hpp"

// Scenario execution: assertion dispatch across subject types, the built-in
// walkthroughs, drift checks between shipped files and built-in sources, and
// the property-suite aggregation.

using namespace staride;

namespace {

ExponentVector E(const std::string& s) { return ExponentVector::parse(s); }

Bounds small() { return Bounds{6, 3, 6, 20, 0}; }

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const StepReport& step(const ScenarioReport& r, const std::string& tag)
{
    for (const auto& s : r.steps)
        if (s.tag == tag) return s;
    REQUIRE(false);
    return r.steps.front();
}

} // namespace

TEST_CASE("assertion dispatch covers every subject type")
{
    const char* text = R"(vars y, z;
poly f = y + y*X;
upper U = u2z(f);
ideal I = gens(y);
ideal J = gens(y, z);
ideal JX = extend(J);
assert a1 member(I, y^2) expect proved;
assert a2 member(I, z) expect refuted;
assert a3 member(U, y) expect refuted;
assert a4 member(JX, y*z) expect proved;
assert a5 member(JX, 1) expect refuted;
assert a6 subset(I, J) expect proved;
assert a7 subset(J, I) expect refuted;
assert a8 equal(colon(R, colon(R, I)), I) expect proved;
assert a9 prime(I) expect proved;
assert a10 divisorial(U) expect proved;
assert a11 t_ideal(U) expect proved;
assert a12 strong(U) expect refuted;
assert a13 v_invertible(U) expect proved;
assert a14 maxdiv(U) expect proved;
assert a15 t_maximal(I) expect proved;
assert a16 prime(U) expect proved;
)";
    auto sc = compile(parse_file(text, "dispatch.star"), small());
    auto rep = run_scenario("dispatch", sc);
    REQUIRE(rep.steps.size() == 16);
    CHECK(rep.ok());
    for (const auto& s : rep.steps) {
        CHECK(s.ok);
        CHECK(s.verdict.exactness.exact);
    }

    CHECK(step(rep, "a1").verdict.evidence["element"] == "y^2");
    CHECK(step(rep, "a11").verdict.evidence["by"] == "divisorial ideals are t-ideals");
    CHECK(step(rep, "a12").verdict.evidence["witness"] == "(y)/(y + y*X)");
    CHECK(step(rep, "a12").verdict.evidence["reason"] ==
          "(R[X] : P) strictly exceeds (P : P)");
    CHECK(step(rep, "a8").operation == "equal(colon(R, colon(R, I)), I)");

    // mismatch detection: flip one expectation and the report flags it
    sc.assertions[0].expect = "refuted";
    auto bad = run_scenario("dispatch", sc);
    CHECK(!bad.ok());
    CHECK(!bad.steps[0].ok);
    CHECK(bad.steps[1].ok);
}

TEST_CASE("built-in walkthroughs replay end to end")
{
    auto ids = builtin_example_ids();
    REQUIRE(ids == std::vector<std::string>{"3.1", "3.2"});
    CHECK_THROWS_AS(builtin_example_source("9"), input_error);

    auto r1 = run_builtin_example("3.1", small());
    REQUIRE(r1.steps.size() == 8);
    CHECK(r1.ok());
    CHECK(r1.name == "3.1");
    CHECK(r1.steps.front().tag == "step1");
    CHECK(step(r1, "step5").verdict.is_refuted());
    CHECK(step(r1, "step8").operation == "not_t_maximal(P, QX, y, t)");
    // symbolic steps are exact; the invertibility, maximality, and
    // refutation steps hold within the enumeration bounds
    const bool exact31[] = {true, true, true, false, true, false, true, false};
    for (int i = 0; i < 8; ++i) CHECK(r1.steps[i].verdict.exactness.exact == exact31[i]);

    auto r2 = run_builtin_example("3.2", small());
    REQUIRE(r2.steps.size() == 8);
    CHECK(r2.ok());
    CHECK(step(r2, "step2").verdict.exactness.exact);
    CHECK(step(r2, "step2").verdict.evidence["forward"]["evidence"]["by"] == "symbolic");
    CHECK(step(r2, "step4").verdict.exactness.exact);

    // the appended native step: (R : P) is the polynomial ring in Z
    const auto& s8 = step(r2, "step8");
    CHECK(s8.operation == "colon_structure(P, Z)");
    CHECK(s8.verdict.is_proved());
    CHECK_FALSE(s8.verdict.exactness.exact);
    CHECK(s8.verdict.evidence["powers"] == 7);
    CHECK(s8.verdict.evidence["swept"] == 462);
    CHECK(s8.verdict.evidence["members"] == 165);
}

TEST_CASE("scenario files on disk match the built-in sources")
{
    const std::string dir = std::string(STARIDE_SOURCE_DIR) + "/scenarios/";
    for (auto [id, file] : {std::pair<std::string, std::string>{"3.1", "ex3_1.star"},
                            {"3.2", "ex3_2.star"}}) {
        auto shipped = parse_file(slurp(dir + file), file);
        auto builtin = parse_file(builtin_example_source(id), id);
        CHECK(print_file(shipped) == print_file(builtin));
    }
}

TEST_CASE("fixture files compile to the built-in catalog")
{
    const std::string dir = std::string(STARIDE_SOURCE_DIR) + "/fixtures/";
    std::vector<ClassifiedFixture> shipped;
    for (const char* file : {"free2.fix", "cone.fix", "support.fix"}) {
        auto sc = compile(parse_file(slurp(dir + file), file), small());
        for (auto& f : sc.fixtures) shipped.push_back(std::move(f));
    }
    auto native = builtin_fixtures();
    REQUIRE(shipped.size() == native.size());
    for (std::size_t i = 0; i < native.size(); ++i) {
        CHECK(shipped[i].name == native[i].name);
        CHECK(shipped[i].ideal->str() == native[i].ideal->str());
        CHECK(shipped[i].ideal->spec()->str() == native[i].ideal->spec()->str());
        CHECK(shipped[i].expected == native[i].expected);
        REQUIRE(shipped[i].witness.has_value() == native[i].witness.has_value());
        if (shipped[i].witness) {
            CHECK(shipped[i].witness->wider->str() == native[i].witness->wider->str());
            CHECK(shipped[i].witness->strict_member == native[i].witness->strict_member);
            CHECK(shipped[i].witness->cert_family == native[i].witness->cert_family);
        }
    }
}

TEST_CASE("suite aggregation over the default catalog")
{
    auto rep = run_suites(builtin_fixtures(), small());
    REQUIRE(rep.suites.size() == 3);
    CHECK(rep.suites[0].name == "star-axioms");
    CHECK(rep.suites[0].checks == 40);
    CHECK(rep.suites[1].name == "class-chain");
    CHECK(rep.suites[1].checks == 50);
    CHECK(rep.suites[2].name == "maximality-suite");
    CHECK(rep.suites[2].checks == 38);
    for (const auto& s : rep.suites) {
        CHECK(s.violations.empty());
        CHECK(s.bounded);
    }

    REQUIRE(rep.representations.size() == 2);
    CHECK(rep.representations[0]["fixture"] == "yI");
    CHECK(rep.representations[0]["x"] == "y^-1");
    CHECK(rep.representations[1]["fixture"] == "P");
    CHECK(rep.representations[1]["x"] == "Z");
    CHECK(rep.ok());

    auto j = rep.to_json();
    CHECK(j["schema"] == "staride-report/1");
    CHECK(j["kind"] == "suites");
    CHECK(j["ok"] == true);
    CHECK(rep.text().find("result: ok") != std::string::npos);
}

TEST_CASE("reports serialize deterministically and honor the timings flag")
{
    auto r1 = run_builtin_example("3.2", small());
    auto r2 = run_builtin_example("3.2", small());
    CHECK(r1.to_json(false).dump() == r2.to_json(false).dump());
    CHECK(r1.text() == r2.text());

    auto j = r1.to_json(false);
    CHECK(j["schema"] == "staride-report/1");
    CHECK(j["name"] == "3.2");
    CHECK(j["bounds"]["degree"] == 6);
    for (const auto& s : j["steps"]) CHECK(s["wall_ms"].is_null());
    auto jt = r1.to_json(true);
    for (const auto& s : jt["steps"]) CHECK(s["wall_ms"].is_number());

    CHECK(r1.text().find("result: ok (8/8 steps as expected)") != std::string::npos);
    CHECK(r1.text().find("(* = established within the enumeration bounds)") !=
          std::string::npos);
}
