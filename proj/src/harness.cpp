#include "staride/harness.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>

#include "staride/polyext.hpp"
#include "staride/star.hpp"

namespace staride {

namespace {

Verdict member_verdict(const MemberCheck& mc, const ExponentVector& m, const Bounds& b)
{
    json ev{{"element", m.str()}};
    if (!mc.note.is_null() && !mc.note.empty()) ev["note"] = mc.note;
    switch (mc.value) {
    case Tri::True: return Verdict::proved(std::move(ev));
    case Tri::False: return Verdict::refuted(std::move(ev));
    default: break;
    }
    ev["reason"] = "membership undecided within bounds";
    return Verdict::inconclusive(std::move(ev), b);
}

Verdict upper_predicate(const UpperToZero& U, AssertOp op, const Bounds& b)
{
    if (op == AssertOp::Prime) return upper_is_prime(U);
    const UpperDivReport rep = upperdiv_check(U, b);
    switch (op) {
    case AssertOp::Divisorial: return rep.divisorial;
    case AssertOp::TIdeal:
        return rep.divisorial.is_proved()
                   ? Verdict::proved(json{{"by", "divisorial ideals are t-ideals"}},
                                     rep.divisorial.exactness)
                   : Verdict::inconclusive(json{{"reason", "divisoriality undecided"}},
                                           b);
    case AssertOp::Strong:
        return rep.not_strong.is_proved()
                   ? Verdict::refuted(
                         json{{"reason", "(R[X] : P) strictly exceeds (P : P)"},
                              {"witness", rep.not_strong.evidence["witness"]}},
                         rep.not_strong.exactness)
                   : Verdict::inconclusive(
                         json{{"reason", "no separating quotient found"}}, b);
    case AssertOp::VInvertible: return rep.v_invertible;
    case AssertOp::MaxDiv: return rep.maximal_divisorial;
    default: throw input_error("predicate not available for uppers to zero");
    }
}

std::string pad(const std::string& s, std::size_t width)
{
    std::string out = s;
    while (out.size() < width) out += ' ';
    return out + "  ";
}

} // namespace

Verdict run_assertion(const CompiledScenario& sc, const AssertionSyntax& a,
                      const Bounds& b)
{
    switch (a.op) {
    case AssertOp::Closure: return sc.spec->closure_check(b);
    case AssertOp::IntegrallyClosed: return sc.spec->integrally_closed(b);
    case AssertOp::CompletelyIntegrallyClosed:
        return sc.spec->completely_integrally_closed(b);
    case AssertOp::Subset:
        return subset_up_to(eval_ideal_expr(sc, a.exprs[0]),
                            eval_ideal_expr(sc, a.exprs[1]), b);
    case AssertOp::Equal:
        return equal_up_to(eval_ideal_expr(sc, a.exprs[0]),
                           eval_ideal_expr(sc, a.exprs[1]), b);
    case AssertOp::Member: {
        const std::string& n = a.names[0];
        if (auto it = sc.ideals.find(n); it != sc.ideals.end())
            return member_verdict(it->second->membership(a.monos[0], b), a.monos[0], b);
        if (auto it = sc.uppers.find(n); it != sc.uppers.end()) {
            json ev{{"element", a.monos[0].str()}};
            return upper_member(it->second, RingPoly::term(a.monos[0]), b)
                       ? Verdict::proved(std::move(ev))
                       : Verdict::refuted(std::move(ev));
        }
        return member_verdict(
            extended_member(sc.extended.at(n), RingPoly::term(a.monos[0]), b),
            a.monos[0], b);
    }
    case AssertOp::NotTMaximal: {
        const std::string& n = a.names[0];
        if (auto it = sc.uppers.find(n); it != sc.uppers.end())
            return poly_refute_t_maximal(it->second, sc.extended.at(a.names[1]),
                                         a.monos[0], a.names[2], b);
        return refute_t_maximal(
            sc.ideals.at(n),
            NotTMaximalWitness{sc.ideals.at(a.names[1]), a.monos[0], a.names[2]}, b);
    }
    default: break;
    }
    const std::string& n = a.names[0];
    if (auto it = sc.uppers.find(n); it != sc.uppers.end())
        return upper_predicate(it->second, a.op, b);
    const FracIdealPtr& I = sc.ideals.at(n);
    switch (a.op) {
    case AssertOp::Prime: return is_prime(I, b);
    case AssertOp::Divisorial: return is_divisorial(I, b);
    case AssertOp::TIdeal: return is_t_ideal(I, b);
    case AssertOp::Strong: return is_strong(I, b);
    case AssertOp::VFinite: return is_v_finite(I, b);
    case AssertOp::VInvertible: return is_v_invertible(I, b);
    case AssertOp::TInvertible: return is_t_invertible(I, b);
    case AssertOp::MaxDiv: return is_maximal_divisorial(I, b);
    case AssertOp::TMaximal: return is_t_maximal(I, std::nullopt, b);
    default: throw input_error("operation has no subject dispatch");
    }
}

json StepReport::to_json(bool timings) const
{
    json j{{"tag", tag},
           {"operation", operation},
           {"expect", expect},
           {"verdict", verdict.to_json()},
           {"ok", ok}};
    j["wall_ms"] = timings ? json(wall_ms) : json(nullptr);
    return j;
}

bool ScenarioReport::ok() const
{
    return std::all_of(steps.begin(), steps.end(),
                       [](const StepReport& s) { return s.ok; });
}

json ScenarioReport::to_json(bool timings) const
{
    json steps_j = json::array();
    for (const auto& s : steps) steps_j.push_back(s.to_json(timings));
    return json{{"schema", "staride-report/1"}, {"kind", "scenario"},
                {"name", name},               {"bounds", bounds.to_json()},
                {"ok", ok()},                 {"steps", steps_j}};
}

std::string ScenarioReport::text() const
{
    std::ostringstream os;
    os << "scenario " << name << "\n";
    os << "bounds: degree " << bounds.degree << ", window " << bounds.window
       << ", enlargement " << bounds.enlargement_degree << ", certs "
       << bounds.cert_samples << ", seed " << bounds.seed << "\n";
    bool starred = false;
    std::size_t good = 0;
    for (const auto& s : steps) {
        std::string got = s.verdict.name();
        if (!s.verdict.exactness.exact) {
            got += "*";
            starred = true;
        }
        if (s.ok) ++good;
        os << "  " << pad(s.tag, 6) << pad(s.operation, 40) << "expect "
           << pad(s.expect, 12) << "got " << pad(got, 13)
           << (s.ok ? "ok" : "MISMATCH") << "\n";
    }
    if (starred) os << "  (* = established within the enumeration bounds)\n";
    os << "result: " << (ok() ? "ok" : "FAIL") << " (" << good << "/" << steps.size()
       << " steps as expected)\n";
    return os.str();
}

ScenarioReport run_scenario(const std::string& name, const CompiledScenario& sc)
{
    ScenarioReport r;
    r.name = name;
    r.bounds = sc.bounds;
    for (const auto& a : sc.assertions) {
        StepReport st;
        st.tag = a.tag;
        st.operation = assertion_call_str(a);
        st.expect = a.expect;
        const auto t0 = std::chrono::steady_clock::now();
        st.verdict = run_assertion(sc, a, sc.bounds);
        st.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
        st.ok = st.verdict.name() == a.expect;
        r.steps.push_back(std::move(st));
    }
    return r;
}

namespace {

// A principal upper to zero over the degree cone: divisorial, maximal
// divisorial, and v-invertible, yet not strong and strictly below the
// extension of a height-one prime of the coefficient ring — so it cannot
// be t-maximal.
const std::string kExample31 = R"(vars y, z;
family t;
rule linear: deg(y, z) >= deg(t[*]);
poly f = y + z*X;
upper P = u2z(f);
ideal Q = constraint(shift(1), deg(y, z) >= 1);
ideal QX = extend(Q);
assert step1 closure() expect proved;
assert step2 cic() expect proved;
assert step3 divisorial(P) expect proved;
assert step4 v_invertible(P) expect proved;
assert step5 strong(P) expect refuted;
assert step6 maxdiv(P) expect proved;
assert step7 prime(Q) expect proved;
assert step8 not_t_maximal(P, QX, y, t) expect proved;
)";

// A strong maximal divisorial prime of a support-constrained ring that is
// not t-maximal: the contraction of a principal fractional ideal, strictly
// below the full positive-degree ideal, which is t-certified by fresh
// indices of the family T.
const std::string kExample32 = R"(vars Y, Z;
family x;
family T;
rule support: Z -> x[*];
rule support: T[*] -> Y | x[<=n];
ideal P = constraint(shift(1), exists(x[*]));
ideal M = constraint(shift(1), deg(*) >= 1);
assert step1 integrally_closed() expect proved;
assert step2 equal(P, intersect(scale(Z^-1, R), R)) expect proved;
assert step3 prime(P) expect proved;
assert step4 strong(P) expect proved;
assert step5 maxdiv(P) expect proved;
assert step6 prime(M) expect proved;
assert step7 not_t_maximal(P, M, Y, T) expect proved;
)";

// (R : P) should be exactly the polynomials in the representation witness
// Z: every power of Z lies in the colon, and every certain colon member in
// a bounded sweep factors as (ring element) * Z^k.
StepReport colon_structure_step(const CompiledScenario& sc, const Bounds& b)
{
    StepReport st;
    st.tag = "step8";
    st.operation = "colon_structure(P, Z)";
    st.expect = "proved";
    const auto t0 = std::chrono::steady_clock::now();

    const FracIdealPtr RP =
        FracIdeal::colon(FracIdeal::ring(sc.spec), sc.ideals.at("P"));
    const ExponentVector Z = ExponentVector::scalar("Z");
    const VarKey z_key{"Z", 0};

    long long powers = 0;
    std::string missing;
    for (Exp k = 0; k <= b.degree; ++k) {
        if (RP->membership(Z.pow(k), b).value != Tri::True) {
            missing = Z.pow(k).str();
            break;
        }
        ++powers;
    }

    Bounds sweep = b;
    sweep.degree = std::min<Exp>(b.degree, 4);
    sweep.window = std::min<long long>(b.window, 2);
    std::set<ExponentVector> candidates;
    const ExponentVector Yv = ExponentVector::scalar("Y");
    for (const auto& u : sc.spec->monomial_box(sweep)) {
        candidates.insert(u);
        candidates.insert(u.div(Z));
        candidates.insert(u.div(Yv));
    }
    long long swept = 0, members = 0, mismatches = 0;
    std::string bad;
    for (const auto& u : candidates) {
        ++swept;
        if (RP->membership(u, sweep).value != Tri::True) continue;
        ++members;
        const Exp k = u.get(z_key);
        const bool shape = k >= 0 && sc.spec->member(u.div(ExponentVector::scalar("Z", k)));
        if (!shape && ++mismatches == 1) bad = u.str();
    }

    if (missing.empty() && mismatches == 0)
        st.verdict = Verdict::proved(
            json{{"by", "every power of Z lies in the colon, and every certain "
                        "colon member factors as a ring element times a power "
                        "of Z"},
                 {"powers", powers},
                 {"swept", swept},
                 {"members", members}},
            Exactness::up_to(b));
    else
        st.verdict = Verdict::refuted(
            json{{"witness", missing.empty() ? bad : missing},
                 {"reason", missing.empty()
                                ? "a colon member is not a ring multiple of a power of Z"
                                : "a power of Z escapes the colon"}},
            Exactness::up_to(b));
    st.wall_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
    st.ok = st.verdict.name() == st.expect;
    return st;
}

} // namespace

std::vector<std::string> builtin_example_ids() { return {"3.1", "3.2"}; }

const std::string& builtin_example_source(const std::string& id)
{
    if (id == "3.1") return kExample31;
    if (id == "3.2") return kExample32;
    throw input_error("unknown example id '" + id + "' (have: 3.1, 3.2)");
}

ScenarioReport run_builtin_example(const std::string& id, const Bounds& b)
{
    auto sc = compile(parse_file(builtin_example_source(id), "builtin:" + id), b);
    ScenarioReport rep = run_scenario(id, sc);
    if (id == "3.2") rep.steps.push_back(colon_structure_step(sc, b));
    return rep;
}

bool SuitesReport::ok() const
{
    for (const auto& s : suites)
        if (!s.violations.empty()) return false;
    for (const auto& r : representations)
        if (!r.at("found").get<bool>()) return false;
    return true;
}

json SuitesReport::to_json() const
{
    json suites_j = json::array();
    for (const auto& s : suites) suites_j.push_back(s.to_json());
    return json{{"schema", "staride-report/1"},
                {"kind", "suites"},
                {"ok", ok()},
                {"suites", suites_j},
                {"representations", representations}};
}

std::string SuitesReport::text() const
{
    std::ostringstream os;
    for (const auto& s : suites) {
        os << "suite " << pad(s.name, 24) << s.checks << " checks, "
           << s.violations.size() << " violations"
           << (s.bounded ? " (within bounds)" : "") << "\n";
        for (const auto& v : s.violations) os << "  violation: " << v.dump() << "\n";
    }
    for (const auto& r : representations) {
        os << "representation " << std::string(r.at("fixture")) << ": ";
        if (r.at("found").get<bool>())
            os << "x = " << std::string(r.at("x")) << "\n";
        else
            os << "not found\n";
    }
    os << "result: " << (ok() ? "ok" : "FAIL") << "\n";
    return os.str();
}

SuitesReport run_suites(const std::vector<ClassifiedFixture>& fixtures, const Bounds& b)
{
    SuitesReport out;
    std::vector<FracIdealPtr> samples;
    samples.reserve(fixtures.size());
    for (const auto& f : fixtures) samples.push_back(f.ideal);
    out.suites.push_back(star_axiom_suite(samples, b));
    out.suites.push_back(chain_inclusion_suite(samples, b));
    out.suites.push_back(vtmax_suite(fixtures, b));
    for (const auto& f : fixtures) {
        auto it = f.expected.find("maximal_divisorial");
        if (it == f.expected.end() || it->second != "proved") continue;
        auto rep = find_maxdiv_representation(f.ideal, b);
        json j{{"fixture", f.name}, {"found", rep.has_value()}};
        if (rep) {
            j["x"] = rep->x.str();
            j["evidence"] = rep->evidence;
        }
        out.representations.push_back(std::move(j));
    }
    return out;
}

std::vector<ClassifiedFixture> builtin_fixtures()
{
    auto E = [](const std::string& s) { return ExponentVector::parse(s); };

    auto F = std::make_shared<MonoidSpec>(std::vector<std::string>{"y", "z"},
                                          std::vector<std::string>{},
                                          std::vector<MonoidRule>{NonNegRule{}});
    LinearDegreeRule lin{
        DegreeFunctional::of({Selector::scalar("y"), Selector::scalar("z")}), "t"};
    auto C = std::make_shared<MonoidSpec>(std::vector<std::string>{"y", "z"},
                                          std::vector<std::string>{"t"},
                                          std::vector<MonoidRule>{NonNegRule{}, lin});
    SupportRule sa{Selector::scalar("Z"),
                   {SupportRule::Witness{SupportRule::Witness::Kind::FamilyAll, "x"}}};
    SupportRule sb{Selector::family_all("T"),
                   {SupportRule::Witness{SupportRule::Witness::Kind::Scalar, "Y"},
                    SupportRule::Witness{SupportRule::Witness::Kind::FamilyUpToTrigger,
                                         "x"}}};
    auto S = std::make_shared<MonoidSpec>(std::vector<std::string>{"Y", "Z"},
                                          std::vector<std::string>{"x", "T"},
                                          std::vector<MonoidRule>{NonNegRule{}, sa, sb});

    auto Q = FracIdeal::constraint(
        C,
        {ShiftAtom{ExponentVector::unit()},
         DegreeAtom{DegreeFunctional::of({Selector::scalar("y"), Selector::scalar("z")}),
                    1}},
        "Q");
    auto P = FracIdeal::constraint(
        S,
        {ShiftAtom{ExponentVector::unit()},
         SupportAtom{{Selector::family_all("x")}, ExponentVector::unit()}},
        "P");
    auto M = FracIdeal::constraint(
        S, {ShiftAtom{ExponentVector::unit()}, DegreeAtom{DegreeFunctional::total(), 1}},
        "M");

    std::vector<ClassifiedFixture> out;
    out.push_back({"yI",
                   FracIdeal::fingen(F, {E("y")})->named("yI"),
                   std::nullopt,
                   {{"prime", "proved"},
                    {"maximal_divisorial", "proved"},
                    {"t_maximal", "proved"}}});
    out.push_back({"yzI",
                   FracIdeal::fingen(F, {E("y"), E("z")})->named("yzI"),
                   std::nullopt,
                   {{"divisorial", "refuted"}, {"v_invertible", "proved"}}});
    out.push_back({"Q", Q, std::nullopt, {{"strong", "proved"}}});
    out.push_back({"P",
                   P,
                   NotTMaximalWitness{M, E("Y"), "T"},
                   {{"strong", "proved"},
                    {"maximal_divisorial", "proved"},
                    {"t_maximal", "refuted"},
                    {"v_finite", "inconclusive"}}});
    out.push_back({"M", M, std::nullopt, {{"prime", "proved"}}});
    return out;
}

} // namespace staride
