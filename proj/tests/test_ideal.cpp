#include <doctest.h>

#include "specs.hpp"
#include "staride/ideal.hpp"

using namespace staride;
using testspec::cone_t;
using testspec::free2;
using testspec::support_XT;

namespace {

ExponentVector E(const char* s) { return ExponentVector::parse(s); }

Bounds small()
{
    Bounds b;
    b.degree = 6;
    b.window = 3;
    return b;
}

std::string gens_str(const FracIdealPtr& I)
{
    std::string s;
    for (const auto& g : I->gens()) {
        if (!s.empty()) s += ", ";
        s += g.str();
    }
    return s;
}

} // namespace

TEST_CASE("generator sieve drops redundant generators and sorts canonically")
{
    auto S = free2();
    auto I = FracIdeal::fingen(S, {E("y"), E("y^2"), E("y*z")});
    CHECK(gens_str(I) == "y");

    auto J = FracIdeal::fingen(S, {E("z^3"), E("y^2"), E("y*z")});
    CHECK(gens_str(J) == "y*z, y^2, z^3");

    CHECK_THROWS_AS(FracIdeal::fingen(S, {}), input_error);
    CHECK_THROWS_AS(FracIdeal::fingen(S, {E("w")}), input_error);
}

TEST_CASE("membership in finitely generated ideals is exact divisibility")
{
    Bounds b = small();
    auto S = free2();
    auto I = FracIdeal::fingen(S, {E("y^2"), E("y*z")});
    CHECK(I->membership(E("y^3"), b).value == Tri::True);
    CHECK(I->membership(E("y^2*z^-1"), b).value == Tri::False);
    CHECK(I->membership(E("z^2"), b).value == Tri::False);

    // With the degree rule in force, y*t[1] is not a multiple of y.
    auto C = cone_t();
    auto P1 = FracIdeal::fingen(C, {E("y")});
    CHECK(P1->membership(E("y*t[1]"), b).value == Tri::False);
    CHECK(P1->membership(E("y^2*t[1]"), b).value == Tri::True);
}

TEST_CASE("ring-numerator colons over the free monoid collapse to principal corners")
{
    Bounds b = small();
    auto S = free2();
    auto R = FracIdeal::ring(S);

    auto C1 = FracIdeal::colon(R, FracIdeal::fingen(S, {E("y"), E("z")}));
    CHECK(C1->is_ring());

    auto C2 = FracIdeal::colon(R, FracIdeal::fingen(S, {E("y")}));
    REQUIRE(C2->is_fingen());
    CHECK(gens_str(C2) == "y^-1");

    auto C3 = FracIdeal::colon(R, FracIdeal::fingen(S, {E("y^2"), E("y*z")}));
    REQUIRE(C3->is_fingen());
    CHECK(gens_str(C3) == "y^-1");

    // Principal denominator: a pure translate.
    auto C4 = FracIdeal::colon(FracIdeal::fingen(S, {E("y")}),
                               FracIdeal::fingen(S, {E("z")}));
    REQUIRE(C4->is_fingen());
    CHECK(gens_str(C4) == "y*z^-1");

    auto C5 = FracIdeal::colon(FracIdeal::fingen(S, {E("y"), E("z")}),
                               FracIdeal::fingen(S, {E("y")}));
    REQUIRE(C5->is_fingen());
    CHECK(gens_str(C5) == "1, y^-1*z");
    CHECK(C5->membership(E("y^-1*z"), b).value == Tri::True);
}

TEST_CASE("double duals over the free monoid")
{
    auto S = free2();
    auto R = FracIdeal::ring(S);
    auto dd = [&](std::vector<ExponentVector> gens) {
        auto I = FracIdeal::fingen(S, std::move(gens));
        return FracIdeal::colon(R, FracIdeal::colon(R, I));
    };

    auto V1 = dd({E("y^2"), E("y*z")});
    REQUIRE(V1->is_fingen());
    CHECK(gens_str(V1) == "y");

    auto V2 = dd({E("y^2"), E("z^2")});
    CHECK(V2->is_ring());

    auto V3 = dd({E("y")});
    REQUIRE(V3->is_fingen());
    CHECK(gens_str(V3) == "y");
}

TEST_CASE("translates act on every node shape")
{
    Bounds b = small();
    auto S = free2();
    auto I = FracIdeal::translate(FracIdeal::fingen(S, {E("y")}), E("z"));
    CHECK(gens_str(I) == "y*z");

    auto C = cone_t();
    auto deg1 = DegreeAtom{DegreeFunctional::of({Selector::scalar("y"), Selector::scalar("z")}), 1};
    auto Q = FracIdeal::constraint(C, {ShiftAtom{E("1")}, deg1}, "Q");
    auto yQ = FracIdeal::translate(Q, E("y"));
    CHECK(yQ->membership(E("y"), b).value == Tri::False);
    CHECK(yQ->membership(E("y^2"), b).value == Tri::True);
    CHECK(yQ->membership(E("y*t[1]"), b).value == Tri::False);
    CHECK(yQ->membership(E("y^2*t[1]"), b).value == Tri::True);
}

TEST_CASE("constraint ideals over the degree-rule monoid")
{
    Bounds b = small();
    auto C = cone_t();
    auto R = FracIdeal::ring(C);

    // (R : (y, z)) keeps its constraint form and contains every t variable.
    auto D = FracIdeal::colon(R, FracIdeal::fingen(C, {E("y"), E("z")}));
    REQUIRE(!D->is_fingen());
    CHECK(D->membership(E("t[1]"), b).value == Tri::True);
    CHECK(D->membership(E("t[1]*t[2]"), b).value == Tri::True);
    auto bad = D->membership(E("t[1]^2"), b);
    CHECK(bad.value == Tri::False);
    CHECK(bad.note["failed_atom"] == "shift(y)");

    // Q = proper part of the monoid ring cut out by deg >= 1.
    auto deg1 = DegreeAtom{DegreeFunctional::of({Selector::scalar("y"), Selector::scalar("z")}), 1};
    auto Q = FracIdeal::constraint(C, {ShiftAtom{E("1")}, deg1}, "Q");
    CHECK(Q->membership(E("y"), b).value == Tri::True);
    CHECK(Q->membership(E("t[1]"), b).value == Tri::False);
    CHECK(Q->membership(E("1"), b).value == Tri::False);
    auto samples = Q->sample_members(b);
    REQUIRE(samples.size() >= 6);
    CHECK(samples[0].str() == "y");
    CHECK(samples[1].str() == "z");
    CHECK(samples[2].str() == "y*z");
    CHECK(samples[3].str() == "y*t[1]");
}

TEST_CASE("colon membership is three-valued with re-checkable evidence")
{
    Bounds b = small();
    auto C = cone_t();
    auto R = FracIdeal::ring(C);
    auto deg1 = DegreeAtom{DegreeFunctional::of({Selector::scalar("y"), Selector::scalar("z")}), 1};
    auto Q = FracIdeal::constraint(C, {ShiftAtom{E("1")}, deg1}, "Q");
    auto RQ = FracIdeal::colon(R, Q);
    REQUIRE(RQ->is_colon_form());

    auto yes = RQ->membership(E("1"), b);
    CHECK(yes.value == Tri::True);
    CHECK(yes.note["by"] == "symbolic");
    CHECK(RQ->membership(E("y"), b).value == Tri::True);

    auto no = RQ->membership(E("t[1]"), b);
    CHECK(no.value == Tri::False);
    CHECK(no.note["multiplier"] == "y*t[1]");
    CHECK(RQ->membership(E("y^-1"), b).value == Tri::False);
}

TEST_CASE("support-rule monoid: the X-support ideal and its colon dual")
{
    Bounds b = small();
    auto S = support_XT();
    auto R = FracIdeal::ring(S);
    auto P = FracIdeal::constraint(
        S, {ShiftAtom{E("1")}, SupportAtom{{Selector::family_all("X")}, E("1")}}, "P");

    CHECK(P->membership(E("X[1]"), b).value == Tri::True);
    CHECK(P->membership(E("Y"), b).value == Tri::False);
    CHECK(P->membership(E("Z*X[2]"), b).value == Tri::True);
    auto samples = P->sample_members(b);
    REQUIRE(samples.size() >= 6);
    CHECK(samples[0].str() == "X[1]");
    CHECK(samples[1].str() == "X[2]");
    CHECK(samples[2].str() == "X[3]");
    CHECK(samples[3].str() == "Y*X[1]");

    auto RP = FracIdeal::colon(R, P);
    CHECK(RP->membership(E("1"), b).value == Tri::True);
    CHECK(RP->membership(E("Y"), b).value == Tri::True);
    CHECK(RP->membership(E("Z"), b).value == Tri::True);
    CHECK(RP->membership(E("Z^2"), b).value == Tri::True);

    auto noT = RP->membership(E("T[1]"), b);
    CHECK(noT.value == Tri::False);
    CHECK(noT.note["multiplier"] == "X[2]");
    CHECK(RP->membership(E("X[1]^-1"), b).value == Tri::False);
}

TEST_CASE("intersections fold single-generator parts into one conjunction")
{
    Bounds b = small();
    auto S = support_XT();
    auto W = FracIdeal::intersect(
        {FracIdeal::fingen(S, {E("Z^-1")}), FracIdeal::ring(S)}, "W");
    auto dnf = W->dnf_atoms();
    REQUIRE(dnf.has_value());
    REQUIRE(dnf->size() == 1);
    CHECK(dnf->front().size() == 2);

    CHECK(W->membership(E("X[1]"), b).value == Tri::True);
    CHECK(W->membership(E("Y"), b).value == Tri::False);
    CHECK(W->membership(E("Z^-1"), b).value == Tri::False);
    CHECK(W->membership(E("Z*X[1]"), b).value == Tri::True);
}

TEST_CASE("subset verdicts: generator route, symbolic route, sampled refutation")
{
    Bounds b = small();
    auto S = free2();
    auto A = FracIdeal::fingen(S, {E("y^2")});
    auto B = FracIdeal::fingen(S, {E("y")});
    CHECK(subset_up_to(A, B, b).is_proved());
    auto r = subset_up_to(B, A, b);
    REQUIRE(r.is_refuted());
    CHECK(r.evidence["witness"] == "y");

    auto C = cone_t();
    auto deg1 = DegreeAtom{DegreeFunctional::of({Selector::scalar("y"), Selector::scalar("z")}), 1};
    auto Q = FracIdeal::constraint(C, {ShiftAtom{E("1")}, deg1}, "Q");
    auto RC = FracIdeal::ring(C);
    CHECK(subset_up_to(Q, RC, b).is_proved());
    auto strict = subset_up_to(RC, Q, b);
    REQUIRE(strict.is_refuted());
    CHECK(strict.evidence["witness"] == "1");
}

TEST_CASE("the X-support ideal equals the merged contraction exactly")
{
    Bounds b = small();
    auto S = support_XT();
    auto P = FracIdeal::constraint(
        S, {ShiftAtom{E("1")}, SupportAtom{{Selector::family_all("X")}, E("1")}}, "P");
    auto W = FracIdeal::intersect(
        {FracIdeal::fingen(S, {E("Z^-1")}), FracIdeal::ring(S)}, "W");

    auto eq = equal_up_to(P, W, b);
    REQUIRE(eq.is_proved());
    CHECK(eq.exactness.exact);
}

TEST_CASE("the colon dual of the X-support ideal is the Z-extension ring")
{
    Bounds b = small();
    auto S = support_XT();
    auto R = FracIdeal::ring(S);
    auto P = FracIdeal::constraint(
        S, {ShiftAtom{E("1")}, SupportAtom{{Selector::family_all("X")}, E("1")}}, "P");
    auto RP = FracIdeal::colon(R, P);

    MonoidRule rule_b = S->rules().at(2);
    auto RZ = FracIdeal::constraint(S, {NonNegAtom{E("1")}, RuleAtom{rule_b, E("1")}}, "R[Z]");
    CHECK(RZ->membership(E("Z^3"), b).value == Tri::True);
    CHECK(RZ->membership(E("T[2]"), b).value == Tri::False);
    CHECK(RZ->membership(E("T[2]*X[1]"), b).value == Tri::True);

    auto eq = equal_up_to(RP, RZ, b);
    REQUIRE(eq.is_proved());
    CHECK(eq.exactness.exact);

    // The dual strictly contains the ring: Z multiplies P back into R but is
    // itself outside R.
    auto strict = subset_up_to(RP, R, b);
    REQUIRE(strict.is_refuted());
    CHECK(strict.evidence["witness"] == "Z");
}

TEST_CASE("double dual of the proper degree slice is the whole ring")
{
    Bounds b = small();
    auto C = cone_t();
    auto R = FracIdeal::ring(C);
    auto deg1 = DegreeAtom{DegreeFunctional::of({Selector::scalar("y"), Selector::scalar("z")}), 1};
    auto Q = FracIdeal::constraint(C, {ShiftAtom{E("1")}, deg1}, "Q");

    auto V = FracIdeal::colon(R, FracIdeal::colon(R, Q));
    auto eq = equal_up_to(V, R, b);
    REQUIRE(eq.is_proved());
    CHECK(eq.exactness.exact);
}

TEST_CASE("sums and products stay finitely generated or refuse loudly")
{
    auto S = free2();
    auto A = FracIdeal::fingen(S, {E("y^2")});
    auto B = FracIdeal::fingen(S, {E("y*z")});
    CHECK(gens_str(FracIdeal::sum(A, B)) == "y*z, y^2");
    CHECK(gens_str(FracIdeal::product(A, B)) == "y^3*z");

    auto C = cone_t();
    auto deg1 = DegreeAtom{DegreeFunctional::of({Selector::scalar("y"), Selector::scalar("z")}), 1};
    auto Q = FracIdeal::constraint(C, {ShiftAtom{E("1")}, deg1}, "Q");
    auto A2 = FracIdeal::fingen(C, {E("y")});
    CHECK_THROWS_AS(FracIdeal::product(A2, Q), representation_error);
}

TEST_CASE("colon dual generator extraction")
{
    Bounds b = small();
    auto S = free2();
    auto I = FracIdeal::fingen(S, {E("y^2"), E("y*z")});
    auto [D, ex] = colon_dual_generators(I, b);
    REQUIRE(D->is_fingen());
    CHECK(gens_str(D) == "y^-1");
    CHECK(ex.exact);
}
