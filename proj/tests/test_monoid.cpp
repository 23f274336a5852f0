#include <doctest.h>

#include "specs.hpp"

using namespace staride;

static ExponentVector M(const std::string& s) { return ExponentVector::parse(s); }

TEST_CASE("cone monoid membership")
{
    auto S = testspec::cone_t();
    CHECK(S->member(M("1")));
    CHECK(S->member(M("y*t[1]*t[2]")));
    CHECK(S->member(M("y^2*z*t[5]^3")));
    CHECK_FALSE(S->member(M("t[1]")));
    CHECK_FALSE(S->member(M("y*t[1]^2")));
    CHECK_FALSE(S->member(M("y^-1*z^2"))); // nonneg rule
    CHECK_THROWS_AS(S->member(M("w")), input_error);
    CHECK_THROWS_AS(S->member(M("T[1]")), input_error);
}

TEST_CASE("support monoid membership")
{
    auto S = testspec::support_XT();
    CHECK(S->member(M("1")));
    CHECK(S->member(M("Y")));
    CHECK(S->member(M("Z*X[3]")));
    CHECK(S->member(M("Y*T[4]^2")));
    CHECK(S->member(M("X[1]*T[3]")));
    CHECK_FALSE(S->member(M("Z")));
    CHECK_FALSE(S->member(M("Y*Z")));
    CHECK_FALSE(S->member(M("T[1]*X[2]"))); // witness index must be <= trigger index
    CHECK(S->member(M("T[2]*X[2]")));
    CHECK_FALSE(S->member(M("T[1]")));
}

TEST_CASE("membership of the unit is required")
{
    AdHocRule bad{"deg>=1", [](const ExponentVector& u) { return u.total_degree() >= 1; }};
    CHECK_THROWS_AS(MonoidSpec({"y"}, {}, {NonNegRule{}, bad}), input_error);
}

TEST_CASE("closure check: symbolic for shipped rule classes")
{
    Bounds b;
    CHECK(testspec::free2()->closure_check(b).is_proved());
    CHECK(testspec::cone_t()->closure_check(b).is_proved());
    CHECK(testspec::support_XT()->closure_check(b).is_proved());
}

TEST_CASE("closure check: ad-hoc rule refuted by pair search")
{
    // S = { u : deg_y(u) != 1 } over the Laurent lattice; y^-1 * y^2 = y escapes.
    AdHocRule r{"deg_y != 1", [](const ExponentVector& u) {
                    return DegreeFunctional::of({Selector::scalar("y")}).eval(u) != 1;
                }};
    MonoidSpec S({"y"}, {}, {r});
    Bounds b;
    Verdict v = S.closure_check(b);
    CHECK(v.is_refuted());
    ExponentVector prod = M(v.evidence["product"].get<std::string>());
    CHECK_FALSE(S.member(prod));
}

TEST_CASE("integrally closed: symbolic for shipped classes, refuted for gap rule")
{
    Bounds b;
    CHECK(testspec::cone_t()->integrally_closed(b).is_proved());
    CHECK(testspec::support_XT()->integrally_closed(b).is_proved());

    // S = { u >= 0 : deg_y(u) = 0 or >= 2 }: y^2 in S but y not in S.
    AdHocRule r{"deg_y in {0} or >=2", [](const ExponentVector& u) {
                    Exp d = DegreeFunctional::of({Selector::scalar("y")}).eval(u);
                    return d == 0 || d >= 2;
                }};
    MonoidSpec S({"y"}, {}, {NonNegRule{}, r});
    Verdict v = S.integrally_closed(b);
    CHECK(v.is_refuted());
    CHECK(v.evidence["element"] == "y");
}

TEST_CASE("completely integrally closed: cone criterion and support refutation")
{
    Bounds b;
    CHECK(testspec::free2()->completely_integrally_closed(b).is_proved());
    CHECK(testspec::cone_t()->completely_integrally_closed(b).is_proved());

    // Z is almost integral over the support monoid: X[1]*Z^m is a member for
    // every m, yet Z is not.  The bounded certificate is sound here.
    Verdict v = testspec::support_XT()->completely_integrally_closed(b);
    CHECK(v.is_refuted());
    CHECK(v.evidence["element"] == "Z");
    auto S = testspec::support_XT();
    ExponentVector q = M(v.evidence["element"].get<std::string>());
    ExponentVector u = M(v.evidence["multiplier"].get<std::string>());
    CHECK_FALSE(S->member(q));
    for (Exp m = 1; m <= 6; ++m) CHECK(S->member(u.mul(q.pow(m))));
}

TEST_CASE("quotient group check proves unit vectors are member differences")
{
    Bounds b;
    CHECK(testspec::free2()->quotient_group_check(b).is_proved());
    CHECK(testspec::cone_t()->quotient_group_check(b).is_proved());
    CHECK(testspec::support_XT()->quotient_group_check(b).is_proved());

    // A monoid whose group of quotients is a proper sublattice: only even
    // y-degrees are reachable, so the unit vector y is not a difference.
    AdHocRule even{"deg_y even", [](const ExponentVector& u) {
                       return DegreeFunctional::of({Selector::scalar("y")}).eval(u) % 2 == 0;
                   }};
    MonoidSpec S({"y"}, {}, {NonNegRule{}, even});
    CHECK(S.quotient_group_check(b).is_inconclusive());
}

TEST_CASE("minimal generators of the cone monoid, bound 2 window 1")
{
    Bounds b;
    b.degree = 2;
    b.window = 1;
    auto gens = testspec::cone_t()->generators_up_to(b);
    std::vector<std::string> got;
    for (auto& g : gens) got.push_back(g.str());
    CHECK(got == std::vector<std::string>{"y", "z", "y*t[1]", "z*t[1]"});
}

TEST_CASE("minimal generators of the support monoid, bound 2 window 1")
{
    Bounds b;
    b.degree = 2;
    b.window = 1;
    auto gens = testspec::support_XT()->generators_up_to(b);
    std::vector<std::string> got;
    for (auto& g : gens) got.push_back(g.str());
    // degree-lex order: Y, X[1] then the three degree-2 generators
    CHECK(got == std::vector<std::string>{"Y", "X[1]", "Y*T[1]", "Z*X[1]", "T[1]*X[1]"});
}

TEST_CASE("generator sieve drops decomposables")
{
    Bounds b;
    b.degree = 3;
    auto gens = testspec::free2()->generators_up_to(b);
    std::vector<std::string> got;
    for (auto& g : gens) got.push_back(g.str());
    CHECK(got == std::vector<std::string>{"y", "z"});
}

TEST_CASE("member box is sorted, deterministic, and cached")
{
    Bounds b;
    b.degree = 3;
    b.window = 2;
    auto S = testspec::cone_t();
    const auto& m1 = S->members_box(b);
    const auto& m2 = S->members_box(b);
    CHECK(&m1 == &m2);
    CHECK(std::is_sorted(m1.begin(), m1.end(), DegreeLexLess{}));
    for (auto& u : m1) CHECK(S->member(u));
    // brute recount
    std::size_t count = 0;
    for (auto& u : S->monomial_box(b))
        if (S->member(u)) ++count;
    CHECK(count == m1.size());
}
