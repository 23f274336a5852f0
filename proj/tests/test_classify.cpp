#include <doctest.h>

#include "staride/classify.hpp"
#include "specs.hpp"

// Classification layer: primality, maximal-divisorial recognition, witnessed
// t-maximality refutations, and the implication suite.

using namespace staride;
using staride::testspec::cone_t;
using staride::testspec::free2;
using staride::testspec::support_XT;

namespace {

ExponentVector E(const std::string& s) { return ExponentVector::parse(s); }

Bounds small() { return Bounds{6, 3, 6, 20, 0}; }

FracIdealPtr cone_Q(const MonoidSpecPtr& C)
{
    return FracIdeal::constraint(
        C,
        {ShiftAtom{E("1")},
         DegreeAtom{DegreeFunctional::of({Selector::scalar("y"), Selector::scalar("z")}), 1}},
        "Q");
}

FracIdealPtr supp_P(const MonoidSpecPtr& S)
{
    return FracIdeal::constraint(
        S, {ShiftAtom{E("1")}, SupportAtom{{Selector::family_all("X")}, E("1")}}, "P");
}

FracIdealPtr supp_M(const MonoidSpecPtr& S)
{
    return FracIdeal::constraint(
        S, {ShiftAtom{E("1")}, DegreeAtom{DegreeFunctional::total(), 1}}, "M");
}

NotTMaximalWitness wide_M(const MonoidSpecPtr& S)
{
    return NotTMaximalWitness{supp_M(S), E("Y"), "T"};
}

} // namespace

TEST_CASE("primality: symbolic routes, variable ideals, and pair search")
{
    auto F = free2();
    auto C = cone_t();
    auto S = support_XT();
    auto b = small();

    Verdict y = is_prime(FracIdeal::fingen(F, {E("y")}), b);
    REQUIRE(y.is_proved());
    CHECK(y.evidence["route"] == "variable-generated");
    CHECK(is_prime(FracIdeal::fingen(F, {E("y"), E("z")}), b).is_proved());

    Verdict ring = is_prime(FracIdeal::ring(F), b);
    REQUIRE(ring.is_refuted());
    CHECK(ring.evidence["reason"] == "prime ideals are proper");

    Verdict frac = is_prime(FracIdeal::fingen(F, {E("y^-1")}), b);
    REQUIRE(frac.is_refuted());
    CHECK(frac.evidence["reason"] == "prime ideals are integral");
    CHECK(frac.evidence["witness"] == "y^-1");

    Verdict y2 = is_prime(FracIdeal::fingen(F, {E("y^2")}), b);
    REQUIRE(y2.is_refuted());
    CHECK(y2.evidence["u"] == "y");
    CHECK(y2.evidence["v"] == "y");

    // The degree rule couples y-exponents to t-exponents, so the principal
    // ideal (y) stops being prime in the cone monoid.
    Verdict cy = is_prime(FracIdeal::fingen(C, {E("y")}), b);
    REQUIRE(cy.is_refuted());
    CHECK(cy.evidence["u"] == "z");
    CHECK(cy.evidence["v"] == "y*t[1]");
    CHECK(cy.evidence["product"] == "y*z*t[1]");

    Verdict q = is_prime(cone_Q(C), b);
    REQUIRE(q.is_proved());
    CHECK(q.evidence["route"] == "complement product closure");

    CHECK(is_prime(supp_P(S), b).is_proved());
    CHECK(is_prime(supp_M(S), b).is_proved());

    Verdict rp = is_prime(FracIdeal::colon(FracIdeal::ring(S), supp_P(S)), b);
    REQUIRE(rp.is_refuted());
    CHECK(rp.evidence["witness"] == "Z");

    // The symbolic route must agree with brute force on the constraint
    // fixtures: no refuting pair exists within bounds.
    CHECK_FALSE(find_nonprime_pair(cone_Q(C), b).has_value());
    CHECK_FALSE(find_nonprime_pair(supp_P(S), b).has_value());
    CHECK_FALSE(find_nonprime_pair(supp_M(S), b).has_value());
    auto pair = find_nonprime_pair(FracIdeal::fingen(F, {E("y^2")}), b);
    REQUIRE(pair.has_value());
    CHECK(pair->first.str() == "y");
    CHECK(pair->second.str() == "y");
}

TEST_CASE("maximal-divisorial representations M = x^-1 R ∩ R")
{
    auto F = free2();
    auto S = support_XT();
    auto b = small();

    auto ry = find_maxdiv_representation(FracIdeal::fingen(F, {E("y")}), b);
    REQUIRE(ry.has_value());
    CHECK(ry->x.str() == "y^-1");

    auto rp = find_maxdiv_representation(supp_P(S), b);
    REQUIRE(rp.has_value());
    CHECK(rp->x.str() == "Z");

    // Not divisorial, so no representation is attempted.
    CHECK_FALSE(find_maxdiv_representation(FracIdeal::fingen(F, {E("y"), E("z")}), b)
                    .has_value());
}

TEST_CASE("converse direction: (R : P) = R + xR classifies P as maximal divisorial")
{
    auto F = free2();
    auto S = support_XT();
    auto b = small();

    Verdict y = check_prop_max_converse(FracIdeal::fingen(F, {E("y")}), E("y^-1"), b);
    REQUIRE(y.is_proved());
    CHECK(y.exactness.exact);
    CHECK(y.evidence["classification"] == "maximal divisorial");

    // (R : P) is the whole polynomial ring in Z, so it strictly exceeds
    // R + ZR: the square of Z witnesses the failure.
    Verdict p = check_prop_max_converse(supp_P(S), E("Z"), b);
    REQUIRE(p.is_refuted());
    CHECK(p.exactness.exact);
    CHECK(p.evidence["detail"]["forward"]["evidence"]["witness"] == "Z^2");

    CHECK_THROWS_AS(
        check_prop_max_converse(FracIdeal::fingen(F, {E("y"), E("z")}), E("y^-1"), b),
        input_error);
}

TEST_CASE("maximal divisoriality: invertibility route and enlargement sweep")
{
    auto F = free2();
    auto C = cone_t();
    auto S = support_XT();
    auto b = small();

    Verdict y = is_maximal_divisorial(FracIdeal::fingen(F, {E("y")}), b);
    REQUIRE(y.is_proved());
    CHECK(y.exactness.exact);
    CHECK(y.evidence["route"] == "v-invertible divisorial prime");

    Verdict p = is_maximal_divisorial(supp_P(S), b);
    REQUIRE(p.is_proved());
    CHECK_FALSE(p.exactness.exact);
    CHECK(p.evidence["route"] == "enlargement sweep");
    CHECK(p.evidence["swept"] == 126);
    CHECK(p.evidence["caveat"] == "only monomial enlargements are examined");

    CHECK_THROWS_AS(is_maximal_divisorial(FracIdeal::fingen(F, {E("y^2")}), b),
                    input_error);
    CHECK_THROWS_AS(is_maximal_divisorial(FracIdeal::fingen(F, {E("y"), E("z")}), b),
                    input_error);
    CHECK_THROWS_AS(is_maximal_divisorial(cone_Q(C), b), input_error);

    // With the pair search blinded by a tight degree cap, the cone ideal (y)
    // reaches the sweep, which finds the enlargement by z: the dual of
    // (y, z) keeps t[1], an element outside R.
    Bounds tight = b;
    tight.degree = 1;
    tight.enlargement_degree = 2;
    auto cy = FracIdeal::fingen(C, {E("y")});
    CHECK(is_prime(cy, tight).is_inconclusive());
    Verdict swept = is_maximal_divisorial(cy, tight);
    REQUIRE(swept.is_refuted());
    CHECK(swept.exactness.exact);
    CHECK(swept.evidence["enlargement"] == "z");
    CHECK(swept.evidence["dual_witness"] == "t[1]");
}

TEST_CASE("witnessed refutation of t-maximality")
{
    auto S = support_XT();
    auto b = small();
    auto P = supp_P(S);

    Verdict ok = refute_t_maximal(P, wide_M(S), b);
    REQUIRE(ok.is_proved());
    CHECK_FALSE(ok.exactness.exact);
    CHECK(ok.evidence["strict_member"] == "Y");
    CHECK(ok.evidence["containment"]["exact"] == true);
    CHECK(ok.evidence["certificates"]["count"] == 20);
    CHECK(ok.evidence["certificates"]["family"] == "T");

    Verdict improper = refute_t_maximal(P, {FracIdeal::ring(S), E("Y"), "T"}, b);
    REQUIRE(improper.is_refuted());
    CHECK(improper.evidence["check"] == "properness");

    Verdict lax = refute_t_maximal(P, {supp_M(S), E("X[1]"), "T"}, b);
    REQUIRE(lax.is_refuted());
    CHECK(lax.evidence["check"] == "strict membership");

    Verdict fam = refute_t_maximal(P, {supp_M(S), E("Y"), "B"}, b);
    REQUIRE(fam.is_refuted());
    CHECK(fam.evidence["check"] == "certificates");
}

TEST_CASE("t-maximality: witness refutations, non-t-ideals, and the v-finite route")
{
    auto F = free2();
    auto C = cone_t();
    auto S = support_XT();
    auto b = small();

    Verdict y = is_t_maximal(FracIdeal::fingen(F, {E("y")}), std::nullopt, b);
    REQUIRE(y.is_proved());
    CHECK(y.exactness.exact);
    CHECK(y.evidence["by"] == "a v-finite maximal divisorial ideal is t-maximal");

    Verdict yz = is_t_maximal(FracIdeal::fingen(F, {E("y"), E("z")}), std::nullopt, b);
    REQUIRE(yz.is_refuted());
    CHECK(yz.evidence["reason"] == "t-maximal ideals are t-ideals");

    Verdict p = is_t_maximal(supp_P(S), wide_M(S), b);
    REQUIRE(p.is_refuted());
    CHECK_FALSE(p.exactness.exact);

    CHECK(is_t_maximal(supp_M(S), std::nullopt, b).is_inconclusive());
    CHECK(is_t_maximal(cone_Q(C), std::nullopt, b).is_inconclusive());
}

TEST_CASE("classification rows pin the counterexample shape")
{
    auto F = free2();
    auto S = support_XT();
    auto b = small();

    auto y = classify_ideal("(y)", FracIdeal::fingen(F, {E("y")}), std::nullopt, b);
    CHECK(y.noetherian_ambient);
    CHECK(y.at("prime").is_proved());
    CHECK(y.at("divisorial").is_proved());
    CHECK(y.at("strong").is_refuted());
    CHECK(y.at("v_invertible").is_proved());
    CHECK(y.at("maximal_divisorial").is_proved());
    CHECK(y.at("t_maximal").is_proved());

    // The headline row: strong, maximal divisorial, yet not t-maximal — and
    // v-finiteness stays undecided, so no implication is contradicted.
    auto p = classify_ideal("P", supp_P(S), wide_M(S), b);
    CHECK_FALSE(p.noetherian_ambient);
    CHECK(p.at("prime").is_proved());
    CHECK(p.at("divisorial").is_proved());
    CHECK(p.at("strong").is_proved());
    CHECK(p.at("proper_v_closure").is_proved());
    CHECK(p.at("v_invertible").is_refuted());
    CHECK(p.at("t_invertible").is_refuted());
    CHECK(p.at("v_finite").is_inconclusive());
    CHECK(p.at("maximal_divisorial").is_proved());
    CHECK(p.at("t_maximal").is_refuted());

    auto js = p.to_json();
    CHECK(js["ideal"] == "P");
    CHECK(js["predicates"]["t_maximal"]["verdict"] == "refuted");
}

TEST_CASE("implication suite: clean catalog, expectation mismatches, sentinel")
{
    auto F = free2();
    auto C = cone_t();
    auto S = support_XT();
    auto b = small();

    std::vector<ClassifiedFixture> fixtures;
    fixtures.push_back({"(y)",
                        FracIdeal::fingen(F, {E("y")}),
                        std::nullopt,
                        {{"prime", "proved"},
                         {"maximal_divisorial", "proved"},
                         {"t_maximal", "proved"}}});
    fixtures.push_back({"(y,z)",
                        FracIdeal::fingen(F, {E("y"), E("z")}),
                        std::nullopt,
                        {{"divisorial", "refuted"}, {"v_invertible", "proved"}}});
    fixtures.push_back({"Q", cone_Q(C), std::nullopt, {{"strong", "proved"}}});
    fixtures.push_back({"P",
                        supp_P(S),
                        wide_M(S),
                        {{"strong", "proved"},
                         {"maximal_divisorial", "proved"},
                         {"t_maximal", "refuted"},
                         {"v_finite", "inconclusive"}}});
    fixtures.push_back({"M", supp_M(S), std::nullopt, {{"prime", "proved"}}});

    SuiteReport rep = vtmax_suite(fixtures, b);
    CHECK(rep.name == "maximality-suite");
    CHECK(rep.checks == 38);
    CHECK(rep.violations.empty());
    CHECK(rep.bounded);
    CHECK(rep.verdict().is_proved());

    // A wrong expectation is reported as a named violation.
    fixtures[0].expected["t_maximal"] = "refuted";
    SuiteReport bad = vtmax_suite(fixtures, b);
    REQUIRE(bad.violations.size() == 1);
    CHECK(bad.violations[0]["fixture"] == "(y)");
    CHECK(bad.violations[0]["predicate"] == "t_maximal");
    CHECK(bad.violations[0]["expected"] == "refuted");
    CHECK(bad.violations[0]["actual"] == "proved");

    // The consistency sentinel fires on a hand-built contradictory row.
    ClassSummary forged;
    forged.name = "forged";
    for (const char* k : {"prime", "divisorial", "t_ideal", "strong",
                          "proper_v_closure", "v_finite", "v_invertible",
                          "t_invertible", "maximal_divisorial", "t_maximal"})
        forged.by_name[k] = Verdict::inconclusive(json::object(), b);
    forged.by_name["v_finite"] = Verdict::proved();
    forged.by_name["maximal_divisorial"] = Verdict::proved();
    forged.by_name["t_maximal"] = Verdict::refuted(json{{"witness", "forged"}});
    SuiteReport sentinel = vtmax_implications({forged});
    REQUIRE(sentinel.violations.size() == 1);
    CHECK(std::string(sentinel.violations[0]["check"]).find("sentinel") !=
          std::string::npos);
}
