#include <doctest.h>

#include "staride/dsl.hpp"

using namespace staride;

namespace {

ExponentVector E(const std::string& s) { return ExponentVector::parse(s); }

const char* kScenario = R"(# demo scenario
vars y, z;
family t;
rule linear: deg( y , z ) >= deg(t[*]);
ideal I = gens(y);
ideal J = gens(y, z);
ideal K = colon(R, J);
ideal L = intersect(I, J);
ideal Sc = scale(y^2, I);
ideal C = constraint(deg(y, z) >= 1);
ideal D = constraint(shift(y^-1), deg(t[<=3]) >= 0);
poly f = y + z*X;
poly g = 1/2*y^2*X^3 + 1;
poly h = -1*y + 3*z*X^2;
upper P = u2z(f);
ideal JX = extend(J);
bounds degree 6 window 3 enlargement 6 certs 20 seed 0;
assert a1 closure() expect proved;
assert a2 integrally_closed() expect proved;
assert a3 cic() expect proved;
assert a4 prime(I) expect proved;
assert a5 divisorial(P) expect proved;
assert a6 member(JX, y*z) expect proved;
assert a7 subset(I, J) expect proved;
assert a8 equal(colon(R, colon(R, I)), I) expect proved;
assert a9 not_t_maximal(I, J, z, t) expect proved;
fixture I witness(J, z, t) expect prime proved, divisorial proved;
fixture J expect strong inconclusive;
)";

const char* kSupportScenario = R"(vars W, Z;
family Xf;
rule support: Z -> Xf[*] | W;
rule support: Xf[*] -> W | Xf[<=n];
ideal A = constraint(exists(Xf[*], W at Z^2));
assert s1 prime(A) expect inconclusive;
)";

std::string diag_of(const std::string& text)
{
    try {
        compile(parse_file(text, "t.star"), Bounds{});
        return "(no error)";
    } catch (const parse_error& e) {
        return e.diag.str();
    }
}

} // namespace

TEST_CASE("scenario files parse and reprint canonically")
{
    auto f = parse_file(kScenario, "demo.star");
    CHECK(f.file == "demo.star");
    CHECK(f.decls.size() == 27);

    // comments vanish, spacing is canonicalized, declared order is kept
    std::string once = print_file(f);
    CHECK(once.find("rule linear: deg(y, z) >= deg(t[*]);") != std::string::npos);
    CHECK(once.find("ideal D = constraint(shift(y^-1), deg(t[<=3]) >= 0);") !=
          std::string::npos);
    CHECK(once.find("ideal Sc = scale(y^2, I);") != std::string::npos);
    CHECK(once.find("poly g = 1/2*y^2*X^3 + 1;") != std::string::npos);
    CHECK(once.find("assert a8 equal(colon(R, colon(R, I)), I) expect proved;") !=
          std::string::npos);
    CHECK(once.find("fixture I witness(J, z, t) expect prime proved, divisorial proved;") !=
          std::string::npos);
    CHECK(once.find("#") == std::string::npos);

    // printing is a fixpoint
    auto again = parse_file(once, "demo.star");
    CHECK(print_file(again) == once);
    CHECK(again.decls.size() == f.decls.size());

    auto& vars = std::get<VarsDecl>(f.decls[0].node);
    CHECK(vars.names == std::vector<std::string>{"y", "z"});
    CHECK(f.decls[0].span.line == 2);
    CHECK(f.decls[0].span.col == 1);

    auto& j = std::get<IdealDecl>(f.decls[4].node);
    CHECK(j.name == "J");
    CHECK(j.expr.kind == IdealExpr::Kind::Gens);
    CHECK(j.expr.gens.size() == 2);
    CHECK(j.expr.gens[1] == E("z"));

    auto& a9 = std::get<AssertionSyntax>(f.decls[24].node);
    CHECK(a9.tag == "a9");
    CHECK(a9.op == AssertOp::NotTMaximal);
    CHECK(a9.names == std::vector<std::string>{"I", "J", "t"});
    CHECK(a9.monos.size() == 1);
    CHECK(a9.monos[0] == E("z"));
    CHECK(a9.expect == "proved");

    auto& fx = std::get<FixtureSyntax>(f.decls[26].node);
    CHECK(fx.ideal == "J");
    CHECK(!fx.witness_names);
    CHECK(fx.expect.size() == 1);
    CHECK(fx.expect[0].first == "strong");
    CHECK(fx.expect[0].second == "inconclusive");
}

TEST_CASE("assertion vocabulary names round-trip")
{
    for (int i = 0; i <= static_cast<int>(AssertOp::Equal); ++i) {
        auto op = static_cast<AssertOp>(i);
        auto back = assert_op_from(assert_op_name(op));
        REQUIRE(back.has_value());
        CHECK(*back == op);
    }
    CHECK(assert_op_from("cic") == AssertOp::CompletelyIntegrallyClosed);
    CHECK(assert_op_from("maxdiv") == AssertOp::MaxDiv);
    CHECK(!assert_op_from("primal"));
}

TEST_CASE("compilation builds the monoid and every named object")
{
    auto sc = compile(parse_file(kScenario, "demo.star"), Bounds{});
    CHECK(sc.has_bounds);
    CHECK(sc.bounds.degree == 6);
    CHECK(sc.bounds.cert_samples == 20);
    CHECK(sc.spec->str() == "monoid{y,z;t; nonneg; linear: deg(y,z) >= deg(t[*])}");

    CHECK(sc.ideals.size() == 7);
    CHECK(sc.polys.size() == 3);
    CHECK(sc.uppers.size() == 1);
    CHECK(sc.extended.size() == 1);
    CHECK(sc.assertions.size() == 9);
    CHECK(sc.fixtures.size() == 2);

    CHECK(sc.ideals.at("I")->str() == "(y)");
    CHECK(sc.uppers.at("P").display() == "(y + z*X)K[X] ∩ R[X]");
    CHECK(sc.extended.at("JX").display() == "JR[X]");

    // polynomial literals normalize through the coefficient map
    CHECK(sc.polys.at("g").str() == "1 + 1/2*y^2*X^3");
    CHECK(sc.polys.at("h").str() == "-1*y + 3*z*X^2");

    // compiled operators really compute: L = I ∩ J, Sc = y^2 * I
    Bounds b = sc.bounds;
    CHECK(sc.ideals.at("L")->membership(E("y"), b).value == Tri::True);
    CHECK(sc.ideals.at("L")->membership(E("z"), b).value == Tri::False);
    CHECK(sc.ideals.at("Sc")->membership(E("y^3"), b).value == Tri::True);
    CHECK(sc.ideals.at("Sc")->membership(E("y"), b).value == Tri::False);

    const auto& fx = sc.fixtures[0];
    CHECK(fx.name == "I");
    REQUIRE(fx.witness.has_value());
    CHECK(fx.witness->wider->str() == "(y, z)");
    CHECK(fx.witness->strict_member == E("z"));
    CHECK(fx.witness->cert_family == "t");
    CHECK(fx.expected.at("prime") == "proved");
    CHECK(fx.expected.at("divisorial") == "proved");

    // a file without a bounds declaration inherits the supplied defaults
    auto sc2 = compile(parse_file("vars y;\nideal I = gens(y);\n", "d.star"),
                       Bounds{5, 2, 4, 9, 7});
    CHECK(!sc2.has_bounds);
    CHECK(sc2.bounds.degree == 5);
    CHECK(sc2.bounds.seed == 7);
}

TEST_CASE("support rules round-trip and compile")
{
    auto f = parse_file(kSupportScenario, "supp.star");
    std::string once = print_file(f);
    CHECK(print_file(parse_file(once, "supp.star")) == once);
    CHECK(once.find("rule support: Z -> Xf[*] | W;") != std::string::npos);
    CHECK(once.find("rule support: Xf[*] -> W | Xf[<=n];") != std::string::npos);
    CHECK(once.find("ideal A = constraint(exists(Xf[*], W at Z^2));") !=
          std::string::npos);

    auto sc = compile(f, Bounds{});
    CHECK(sc.spec->str() == "monoid{W,Z;Xf; nonneg; support: Z => exists Xf[*] or W; "
                            "support: Xf[*] => W or exists Xf[<=n]}");
    CHECK(sc.assertions.size() == 1);
    CHECK(sc.assertions[0].op == AssertOp::Prime);
}

TEST_CASE("generated declaration forms survive a parse and print cycle")
{
    ParsedFile f;
    f.file = "gen.star";
    auto push = [&](auto node) {
        Decl d;
        d.node = std::move(node);
        f.decls.push_back(std::move(d));
    };

    push(VarsDecl{{"a", "b"}});
    push(FamilyDecl{"u"});
    push(RuleDecl{LinearDegreeRule{
        DegreeFunctional::of({Selector::scalar("a"), Selector::family_up_to("u", 2)}),
        "u"}});
    SupportRule sup;
    sup.trigger = Selector::family_all("u");
    sup.witnesses.push_back({SupportRule::Witness::Kind::Scalar, "b"});
    sup.witnesses.push_back({SupportRule::Witness::Kind::FamilyUpToTrigger, "u"});
    push(RuleDecl{sup});

    IdealExpr gens;
    gens.kind = IdealExpr::Kind::Gens;
    gens.gens = {E("a^-2*b"), E("u[3]^2")};
    IdealExpr ring;
    ring.kind = IdealExpr::Kind::Ring;
    IdealExpr con;
    con.kind = IdealExpr::Kind::Constraint;
    con.atoms = {ShiftAtom{E("a^-1")},
                 DegreeAtom{DegreeFunctional::of({Selector::indexed("u", 1), Selector::all()}),
                            -3},
                 SupportAtom{{Selector::family_up_to("u", 2)}, E("b^3")}};
    IdealExpr colon;
    colon.kind = IdealExpr::Kind::Colon;
    colon.parts = {ring, gens};
    IdealExpr inter;
    inter.kind = IdealExpr::Kind::Intersect;
    inter.parts = {colon, con, gens};
    IdealExpr scale;
    scale.kind = IdealExpr::Kind::Scale;
    scale.factor = E("a*b^2");
    scale.parts = {inter};
    push(IdealDecl{"big", scale});
    IdealExpr ext;
    ext.kind = IdealExpr::Kind::Extend;
    ext.name = "big";
    push(IdealDecl{"bigx", ext});

    push(PolyDecl{"p", {PolyTerm{Rat{-7, 3}, E("a*b^2"), 4}, PolyTerm{Rat::one(), {}, 0},
                        PolyTerm{Rat::one(), {}, 2}, PolyTerm{Rat{5, 1}, {}, 1},
                        PolyTerm{Rat::one(), E("u[2]"), 0}}});
    push(UpperDecl{"q", "p"});
    push(BoundsDecl{Bounds{9, 4, 5, 33, 17}});

    AssertionSyntax one;
    one.tag = "s1";
    one.op = AssertOp::TMaximal;
    one.names = {"big"};
    one.expect = "refuted";
    push(one);
    AssertionSyntax two;
    two.tag = "s2";
    two.op = AssertOp::Subset;
    two.exprs = {gens, inter};
    two.expect = "inconclusive";
    push(two);
    AssertionSyntax three;
    three.tag = "s3";
    three.op = AssertOp::Member;
    three.names = {"big"};
    three.monos = {E("a^2")};
    three.expect = "proved";
    push(three);

    FixtureSyntax fx;
    fx.ideal = "big";
    fx.witness_names = {{"big", "u"}};
    fx.witness_member = E("b");
    fx.expect = {{"t_maximal", "refuted"}, {"v_finite", "inconclusive"}};
    push(fx);

    std::string once = print_file(f);
    CHECK(once.find("poly p = -7/3*a*b^2*X^4 + 1 + X^2 + 5*X + u[2];") !=
          std::string::npos);
    CHECK(once.find("deg(u[1], *) >= -3") != std::string::npos);
    CHECK(once.find("exists(u[<=2] at b^3)") != std::string::npos);
    CHECK(once.find("bounds degree 9 window 4 enlargement 5 certs 33 seed 17;") !=
          std::string::npos);

    auto back = parse_file(once, "gen.star");
    CHECK(back.decls.size() == f.decls.size());
    CHECK(print_file(back) == once);
    auto& vars = std::get<VarsDecl>(back.decls[0].node);
    CHECK(vars.names == std::vector<std::string>{"a", "b"});
    auto& poly = std::get<PolyDecl>(back.decls[6].node);
    CHECK(poly.terms.size() == 5);
    CHECK(poly.terms[0].coeff == Rat{-7, 3});
    CHECK(poly.terms[0].xpow == 4);
}

TEST_CASE("diagnostics carry file, line, and column")
{
    CHECK(diag_of("vars y;\nideal I = gens();\n") == "t.star:2:11: empty generator list");
    CHECK(diag_of("vars y;\nassert a prime(Zz) expect proved;\n") ==
          "t.star:2:1: unknown identifier 'Zz'");
    CHECK(diag_of("vars y;\nideal I = gens(y);\nfamily t;\n") ==
          "t.star:3:1: monoid declarations must precede ideals and assertions");
    CHECK(diag_of("vars y, z;\npoly f = y + z*X;\nupper P = u2z(f);\n"
                  "assert a v_finite(P) expect proved;\n") ==
          "t.star:4:1: predicate not available for uppers to zero");
    CHECK(diag_of("vars y;\nideal I = gens(w);\n") ==
          "t.star:2:11: monomial uses undeclared indeterminate: w");
    CHECK(diag_of("vars y;\nideal R = gens(y);\n") ==
          "t.star:2:1: 'R' is a reserved word");
    CHECK(diag_of("vars y;\nideal I = gens(y);\nideal I = gens(y);\n") ==
          "t.star:3:1: duplicate name 'I'");
    CHECK(diag_of("vars y;\nideal I = gens(y);\nassert a prime(I) expect maybe;\n") ==
          "t.star:3:26: expected proved, refuted, or inconclusive");
    CHECK(diag_of("vars y;\nideal I = gens(y);\nassert a primal(I) expect proved;\n") ==
          "t.star:3:10: unknown operation 'primal'");
    CHECK(diag_of("vars y;\nbounds depth 3;\n") ==
          "t.star:2:1: unknown bounds key 'depth'");
    CHECK(diag_of("vars y;\nideal I = gens(y);\nfixture I expect nice proved;\n") ==
          "t.star:3:1: unknown predicate 'nice'");
    CHECK(diag_of("vars y, z;\nfamily t;\npoly f = y + z*X;\nupper P = u2z(f);\n"
                  "ideal J = gens(y);\n"
                  "assert a not_t_maximal(P, J, y, t) expect proved;\n") ==
          "t.star:6:1: 'J' must be an extended ideal");
    CHECK(diag_of("vars y\nideal I = gens(y);\n") == "t.star:2:1: expected ';'");
    CHECK(diag_of("vars y;\nideal I = gens($);\n") ==
          "t.star:2:16: unexpected character '$'");
    CHECK(diag_of("vars y;\nideal I = gens(2);\n") ==
          "t.star:2:16: only 1 is a valid numeric monomial");
    CHECK(diag_of("vars y;\nideal I = intersect(gens(y));\n") ==
          "t.star:2:11: intersect needs at least two parts");
    CHECK(diag_of("vars y, z;\npoly f = 0;\nupper P = u2z(f);\n") ==
          "t.star:3:1: an upper to zero needs a nonconstant polynomial");
    CHECK(diag_of("ideal I = gens(y);\n") ==
          "t.star:1:1: no vars or family declared before first use");
    CHECK(diag_of("") == "t.star:1:1: no vars or family declared before first use");
    CHECK(diag_of("vars y;\nideal I = gens(y);\nideal J = colon(extend(I), R);\n") ==
          "t.star:3:17: extend(...) may only stand alone in an ideal declaration");
    CHECK(diag_of("vars y;\nrule linear: deg(y) >= deg(t[*]);\n") ==
          "t.star:2:1: unknown family 't'");
    CHECK(diag_of("vars y;\nupper P = u2z(f);\n") ==
          "t.star:2:1: unknown polynomial 'f'");
    CHECK(diag_of("vars y, z;\npoly f = y + z*X;\nupper P = u2z(f);\n"
                  "ideal L = intersect(P, gens(y));\n") ==
          "t.star:4:21: 'P' is not a monomial ideal");
    CHECK(diag_of("vars y;\npoly c = y;\nupper P = u2z(c);\n") ==
          "t.star:3:1: an upper to zero needs a nonconstant polynomial");

    // the structured diagnostic is also available on the exception
    try {
        parse_file("vars y;\nideal I = gens();\n", "t.star");
        CHECK(false);
    } catch (const parse_error& e) {
        CHECK(e.diag.span.line == 2);
        CHECK(e.diag.span.col == 11);
        CHECK(e.diag.message == "empty generator list");
        CHECK(std::string(e.what()) == "t.star:2:11: empty generator list");
    }
}
