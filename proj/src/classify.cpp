#include "staride/classify.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace staride {

namespace {

constexpr std::size_t kPairCandidateCap = 64;
constexpr std::size_t kUndecidedReported = 3;

json vec_json(const std::vector<ExponentVector>& vs)
{
    json a = json::array();
    for (const auto& v : vs) a.push_back(v.str());
    return a;
}

bool nonneg_rules_only(const MonoidSpec& spec)
{
    for (const auto& r : spec.rules())
        if (!std::holds_alternative<NonNegRule>(r)) return false;
    return true;
}

/// The complement of a constraint ideal cut out by unit shifts plus exactly
/// one degree-1 or unit-offset support atom is closed under products when
/// all exponents are nonnegative: selected degrees add and supports merge.
bool complement_product_closed(const MonoidSpec& spec, const std::vector<Atom>& branch,
                               std::string& why)
{
    if (!spec.has_nonneg_rule()) return false;
    int unit_shifts = 0, cutting = 0;
    bool other = false;
    for (const auto& a : branch) {
        if (const auto* s = std::get_if<ShiftAtom>(&a)) {
            if (s->m.is_unit())
                ++unit_shifts;
            else
                other = true;
        } else if (const auto* d = std::get_if<DegreeAtom>(&a)) {
            if (d->min == 1) {
                ++cutting;
                why = "monomials outside the ideal have selected degree zero, and degrees add";
            } else {
                other = true;
            }
        } else if (const auto* su = std::get_if<SupportAtom>(&a)) {
            if (su->offset.is_unit()) {
                ++cutting;
                why = "monomials outside the ideal omit the selected keys, and supports merge";
            } else {
                other = true;
            }
        } else if (const auto* n = std::get_if<NonNegAtom>(&a)) {
            if (!n->offset.is_unit()) other = true;
        } else {
            other = true;
        }
    }
    return !other && unit_shifts >= 1 && cutting == 1;
}

} // namespace

std::optional<std::pair<ExponentVector, ExponentVector>>
find_nonprime_pair(const FracIdealPtr& I, const Bounds& b)
{
    const auto& spec = I->spec();
    Bounds sb = b;
    sb.degree = std::min<long long>(b.degree, 4);
    sb.window = std::min<long long>(b.window, 2);

    std::vector<ExponentVector> outside;
    for (const auto& m : spec->members_box(sb)) {
        if (m.is_unit()) continue;
        if (I->membership(m, sb).value == Tri::False) outside.push_back(m);
        if (outside.size() >= kPairCandidateCap) break;
    }
    for (std::size_t i = 0; i < outside.size(); ++i)
        for (std::size_t j = i; j < outside.size(); ++j)
            if (I->membership(outside[i].mul(outside[j]), sb).value == Tri::True)
                return std::make_pair(outside[i], outside[j]);
    return std::nullopt;
}

Verdict is_prime(const FracIdealPtr& I, const Bounds& b)
{
    const auto& spec = I->spec();
    const auto R = FracIdeal::ring(spec);

    auto integral = subset_up_to(I, R, b);
    if (integral.is_refuted())
        return Verdict::refuted(json{{"reason", "prime ideals are integral"},
                                     {"witness", integral.evidence.value("witness", json())}},
                                integral.exactness);
    if (I->membership(ExponentVector::unit(), b).value == Tri::True)
        return Verdict::refuted(
            json{{"reason", "prime ideals are proper"}, {"witness", "1"}});

    if (auto dnf = I->dnf_atoms(); dnf && dnf->size() == 1) {
        std::string why;
        if (complement_product_closed(*spec, dnf->front(), why))
            return Verdict::proved(json{{"route", "complement product closure"}, {"by", why}});
    }

    if (I->is_fingen() && spec->families().empty() && nonneg_rules_only(*spec)) {
        bool all_vars = !I->gens().empty();
        for (const auto& g : I->gens()) {
            const auto& e = g.entries();
            if (e.size() != 1 || e.begin()->second != 1) all_vars = false;
        }
        if (all_vars)
            return Verdict::proved(
                json{{"route", "variable-generated"},
                     {"by", "in a free commutative monoid, an ideal generated by "
                            "variables has a complement closed under products"},
                     {"generators", vec_json(I->gens())}});
    }

    if (auto pair = find_nonprime_pair(I, b))
        return Verdict::refuted(json{{"reason", "product of two outsiders lands inside"},
                                     {"u", pair->first.str()},
                                     {"v", pair->second.str()},
                                     {"product", pair->first.mul(pair->second).str()}});
    return Verdict::inconclusive(
        json{{"reason", "no symbolic route applies and the bounded pair search "
                        "found no refutation"}},
        b);
}

std::optional<MaxDivRepresentation> find_maxdiv_representation(const FracIdealPtr& M,
                                                               const Bounds& b)
{
    auto div = is_divisorial(M, b);
    if (!div.is_proved()) return std::nullopt;
    auto x = principal_contraction_witness(M, b);
    if (!x) return std::nullopt;

    const auto R = FracIdeal::ring(M->spec());
    if (FracIdeal::colon(R, M)->membership(*x, b).value != Tri::True) return std::nullopt;
    if (R->membership(*x, b).value != Tri::False) return std::nullopt;

    MaxDivRepresentation rep;
    rep.x = *x;
    rep.evidence = json{{"x", x->str()},
                        {"by", "the contraction x^-1 R ∩ R reproduces the ideal by "
                               "double inclusion, and x lies in (R : M) outside R"}};
    return rep;
}

Verdict check_prop_max_converse(const FracIdealPtr& P, const ExponentVector& x,
                                const Bounds& b)
{
    auto div = is_divisorial(P, b);
    if (div.is_refuted())
        throw input_error("check_prop_max_converse requires a divisorial candidate; "
                          "divisoriality was refuted");

    const auto& spec = P->spec();
    const auto R = FracIdeal::ring(spec);
    auto target = FracIdeal::fingen(spec, {ExponentVector::unit(), x});
    auto eq = equal_up_to(FracIdeal::colon(R, P), target, b);

    if (eq.is_proved())
        return Verdict::proved(
            json{{"classification", "maximal divisorial"},
                 {"by", "a prime divisorial ideal whose colon dual is R + xR is "
                        "maximal divisorial"},
                 {"x", x.str()},
                 {"prime", is_prime(P, b).name()}},
            eq.exactness.combined(div.exactness));
    if (eq.is_refuted())
        return Verdict::refuted(json{{"reason", "(R : P) differs from R + xR"},
                                     {"x", x.str()},
                                     {"detail", eq.evidence}},
                                eq.exactness);
    return Verdict::inconclusive(
        json{{"reason", "(R : P) = R + xR undecided"}, {"detail", eq.evidence}}, b);
}

Verdict is_maximal_divisorial(const FracIdealPtr& P, const Bounds& b)
{
    auto prime = is_prime(P, b);
    if (prime.is_refuted())
        throw input_error("is_maximal_divisorial requires a prime candidate; "
                          "primality was refuted");
    auto div = is_divisorial(P, b);
    if (div.is_refuted())
        throw input_error("is_maximal_divisorial requires a divisorial candidate; "
                          "divisoriality was refuted");

    const auto& spec = P->spec();
    const auto R = FracIdeal::ring(spec);
    if (P->membership(ExponentVector::unit(), b).value != Tri::False)
        return Verdict::refuted(json{{"reason", "the candidate is not proper"}});

    auto vinv = is_v_invertible(P, b);
    if (vinv.is_proved() && prime.is_proved() && div.is_proved())
        return Verdict::proved(
            json{{"route", "v-invertible divisorial prime"},
                 {"by", "a v-invertible divisorial prime is maximal divisorial"},
                 {"v_invertible", vinv.evidence}},
            prime.exactness.combined(div.exactness).combined(vinv.exactness));

    // Bounded sweep: for every monomial m outside P up to the enlargement
    // degree, (P + mR)_v = R is equivalent to (R : (P + mR)) ⊆ R, and the
    // colon dual of the enlargement is (R : P) ∩ m^-1 R.
    const char* caveat = "only monomial enlargements are examined";
    Bounds eb = b;
    eb.degree = b.enlargement_degree;
    const auto RP = FracIdeal::colon(R, P);
    long long swept = 0;
    std::vector<json> undecided;
    for (const auto& m : spec->members_box(eb)) {
        if (m.is_unit()) continue;
        if (P->membership(m, eb).value != Tri::False) continue;
        auto dual = FracIdeal::intersect({RP, FracIdeal::fingen(spec, {m.inverse()})});
        auto inside = subset_up_to(dual, R, eb);
        if (inside.is_refuted())
            return Verdict::refuted(
                json{{"reason", "a monomial enlargement keeps a proper divisorial "
                                "closure"},
                     {"enlargement", m.str()},
                     {"dual_witness", inside.evidence.value("witness", json())},
                     {"caveat", caveat}},
                inside.exactness);
        if (!inside.is_proved()) {
            undecided.push_back(json{{"enlargement", m.str()}});
            if (undecided.size() >= kUndecidedReported) break;
        }
        ++swept;
    }
    if (!undecided.empty())
        return Verdict::inconclusive(
            json{{"reason", "the divisorial closure of some enlargements resisted "
                            "the symbolic check"},
                 {"enlargements", undecided},
                 {"caveat", caveat}},
            eb);
    return Verdict::proved(
        json{{"route", "enlargement sweep"},
             {"by", "every monomial enlargement inflates the divisorial closure "
                    "to the whole ring"},
             {"swept", swept},
             {"prime", prime.name()},
             {"divisorial", div.name()},
             {"caveat", caveat}},
        Exactness::up_to(eb));
}

Verdict refute_t_maximal(const FracIdealPtr& P, const NotTMaximalWitness& w,
                         const Bounds& b)
{
    const auto& spec = P->spec();
    const auto& W = w.wider;

    auto unit_in = W->membership(ExponentVector::unit(), b);
    if (unit_in.value != Tri::False)
        return Verdict::refuted(json{{"check", "properness"},
                                     {"reason", "1 must lie outside the wider ideal"},
                                     {"membership", unit_in.note}});

    if (W->membership(w.strict_member, b).value != Tri::True)
        return Verdict::refuted(json{{"check", "strict membership"},
                                     {"reason", "the strictness witness must lie in "
                                                "the wider ideal"},
                                     {"member", w.strict_member.str()}});
    if (P->membership(w.strict_member, b).value != Tri::False)
        return Verdict::refuted(json{{"check", "strict membership"},
                                     {"reason", "the strictness witness must lie "
                                                "outside the candidate"},
                                     {"member", w.strict_member.str()}});

    auto contained = subset_up_to(P, W, b);
    if (contained.is_refuted())
        return Verdict::refuted(json{{"check", "containment"},
                                     {"reason", "the candidate must lie inside the "
                                                "wider ideal"},
                                     {"detail", contained.evidence}},
                                contained.exactness);
    if (!contained.is_proved())
        return Verdict::inconclusive(json{{"check", "containment"},
                                          {"reason", "containment in the wider ideal "
                                                     "undecided"},
                                          {"detail", contained.evidence}},
                                     b);

    if (!spec->has_family(w.cert_family))
        return Verdict::refuted(json{{"check", "certificates"},
                                     {"reason", "unknown certificate family"},
                                     {"family", w.cert_family}});

    std::vector<ExponentVector> pool;
    for (const auto& m : W->sample_members(b))
        if (!m.is_unit()) pool.push_back(m);
    if (pool.empty())
        return Verdict::refuted(json{{"check", "certificates"},
                                     {"reason", "no sampled members to certify"}});

    std::mt19937_64 rng(b.seed);
    json sample_certs = json::array();
    long long issued = 0;
    for (long long k = 0; k < b.cert_samples; ++k) {
        std::set<std::size_t> picks;
        const std::size_t want = 1 + static_cast<std::size_t>(k % 3);
        while (picks.size() < std::min(want, pool.size()))
            picks.insert(static_cast<std::size_t>(rng() % pool.size()));
        std::vector<ExponentVector> F;
        for (auto i : picks) F.push_back(pool[i]);

        auto cert = auto_certify(W, F, w.cert_family, b);
        if (!cert)
            return Verdict::refuted(json{{"check", "certificates"},
                                         {"reason", "no validating certificate for a "
                                                    "sampled finite subset"},
                                         {"members", vec_json(F)}});
        ++issued;
        if (sample_certs.size() < 3)
            sample_certs.push_back(json{{"members", vec_json(cert->members)},
                                        {"multiplier", cert->multiplier.str()}});
    }

    return Verdict::proved(
        json{{"by", "a proper t-certified ideal strictly contains the candidate"},
             {"wider", W->display()},
             {"strict_member", w.strict_member.str()},
             {"containment", contained.exactness.to_json()},
             {"certificates",
              json{{"count", issued}, {"family", w.cert_family}, {"sample", sample_certs}}}},
        contained.exactness.combined(Exactness::up_to(b)));
}

namespace {

Verdict t_maximal_from_parts(const FracIdealPtr& P,
                             const std::optional<NotTMaximalWitness>& w,
                             const Verdict& t_ideal, const Verdict& divisorial,
                             const Verdict& prime, const Verdict& v_finite,
                             const Verdict& maxdiv, const Bounds& b)
{
    if (t_ideal.is_refuted())
        return Verdict::refuted(json{{"reason", "t-maximal ideals are t-ideals"},
                                     {"detail", t_ideal.evidence}},
                                t_ideal.exactness);
    json witness_note;
    if (w) {
        auto r = refute_t_maximal(P, *w, b);
        if (r.is_proved())
            return Verdict::refuted(
                json{{"reason", "a proper t-certified ideal strictly contains the "
                                "candidate"},
                     {"witness", r.evidence}},
                r.exactness);
        if (r.is_inconclusive())
            return Verdict::inconclusive(
                json{{"reason", "the supplied witness did not resolve"},
                     {"detail", r.evidence}},
                b);
        witness_note = json{{"invalid_witness", r.evidence}};
    }
    if (!divisorial.is_refuted() && !prime.is_refuted() && v_finite.is_proved() &&
        maxdiv.is_proved())
        return Verdict::proved(
            json{{"by", "a v-finite maximal divisorial ideal is t-maximal"},
                 {"v_finite", v_finite.evidence},
                 {"maximal_divisorial", maxdiv.evidence}},
            v_finite.exactness.combined(maxdiv.exactness));
    json why{{"reason", "no refuting super-ideal known and the v-finite "
                        "maximal-divisorial route did not apply"}};
    if (!witness_note.is_null()) why["witness"] = witness_note;
    return Verdict::inconclusive(why, b);
}

Verdict maxdiv_guarded(const FracIdealPtr& I, const Verdict& prime,
                       const Verdict& divisorial, const Bounds& b)
{
    if (prime.is_refuted() || divisorial.is_refuted())
        return Verdict::refuted(
            json{{"reason", "maximal divisorial ideals are prime and divisorial"},
                 {"prime", prime.name()},
                 {"divisorial", divisorial.name()}},
            prime.exactness.combined(divisorial.exactness));
    return is_maximal_divisorial(I, b);
}

} // namespace

Verdict is_t_maximal(const FracIdealPtr& P, const std::optional<NotTMaximalWitness>& w,
                     const Bounds& b)
{
    auto t_id = is_t_ideal(P, b);
    auto prime = is_prime(P, b);
    auto div = is_divisorial(P, b);
    auto vf = is_v_finite(P, b);
    auto md = maxdiv_guarded(P, prime, div, b);
    return t_maximal_from_parts(P, w, t_id, div, prime, vf, md, b);
}

const Verdict& ClassSummary::at(const std::string& key) const
{
    auto it = by_name.find(key);
    if (it == by_name.end())
        throw input_error("unknown classification predicate: " + key);
    return it->second;
}

json ClassSummary::to_json() const
{
    json preds = json::object();
    for (const auto& [k, v] : by_name) preds[k] = v.to_json();
    return json{{"ideal", name},
                {"noetherian_ambient", noetherian_ambient},
                {"predicates", preds}};
}

ClassSummary classify_ideal(const std::string& name, const FracIdealPtr& I,
                            const std::optional<NotTMaximalWitness>& w, const Bounds& b)
{
    ClassSummary s;
    s.name = name;
    const auto& spec = I->spec();
    s.noetherian_ambient = spec->families().empty() && nonneg_rules_only(*spec);

    auto& m = s.by_name;
    m["prime"] = is_prime(I, b);
    m["divisorial"] = is_divisorial(I, b);
    m["t_ideal"] = is_t_ideal(I, b);
    m["strong"] = is_strong(I, b);

    auto unit_in_closure = v_closure(I)->membership(ExponentVector::unit(), b);
    if (unit_in_closure.value == Tri::False)
        m["proper_v_closure"] =
            Verdict::proved(json{{"by", "1 lies outside the divisorial closure"}});
    else if (unit_in_closure.value == Tri::True)
        m["proper_v_closure"] = Verdict::refuted(
            json{{"reason", "the divisorial closure contains 1"}, {"witness", "1"}});
    else
        m["proper_v_closure"] = Verdict::inconclusive(
            json{{"reason", "membership of 1 in the divisorial closure undecided"},
                 {"detail", unit_in_closure.note}},
            b);

    m["v_finite"] = is_v_finite(I, b);
    m["v_invertible"] = is_v_invertible(I, b);
    m["t_invertible"] = is_t_invertible(I, b);
    m["maximal_divisorial"] = maxdiv_guarded(I, m["prime"], m["divisorial"], b);
    m["t_maximal"] = t_maximal_from_parts(I, w, m["t_ideal"], m["divisorial"],
                                          m["prime"], m["v_finite"],
                                          m["maximal_divisorial"], b);
    return s;
}

namespace {

bool consult(SuiteReport& rep, const Verdict& v)
{
    if (v.is_inconclusive() || !v.exactness.exact) rep.bounded = true;
    return v.is_proved();
}

} // namespace

SuiteReport vtmax_implications(const std::vector<ClassSummary>& rows)
{
    SuiteReport rep;
    rep.name = "maximality-implications";
    for (const auto& r : rows) {
        auto hyp = [&](std::initializer_list<const char*> keys) {
            bool all = true;
            for (const char* k : keys)
                if (!consult(rep, r.at(k))) all = false;
            return all;
        };
        auto violate = [&](const char* check, const Verdict& conclusion) {
            rep.violations.push_back(json{{"fixture", r.name},
                                          {"check", check},
                                          {"conclusion", conclusion.to_json()}});
        };

        ++rep.checks;
        if (hyp({"v_invertible", "divisorial", "prime"}) &&
            r.at("maximal_divisorial").is_refuted())
            violate("a v-invertible divisorial prime is maximal divisorial",
                    r.at("maximal_divisorial"));

        ++rep.checks;
        if (hyp({"v_finite", "maximal_divisorial"}) && r.at("t_maximal").is_refuted())
            violate("a v-finite maximal divisorial ideal is t-maximal "
                    "(consistency sentinel)",
                    r.at("t_maximal"));

        ++rep.checks;
        if (hyp({"v_finite", "v_invertible", "divisorial", "prime"}) &&
            r.at("t_invertible").is_refuted())
            violate("a v-finite v-invertible divisorial prime is t-invertible",
                    r.at("t_invertible"));

        ++rep.checks;
        if (hyp({"t_invertible", "t_ideal", "prime"}) && r.at("t_maximal").is_refuted())
            violate("a t-invertible t-prime is t-maximal", r.at("t_maximal"));

        ++rep.checks;
        if (hyp({"strong", "proper_v_closure"}) && r.at("v_invertible").is_proved())
            violate("a strong ideal with proper divisorial closure is not "
                    "v-invertible",
                    r.at("v_invertible"));

        if (r.noetherian_ambient) {
            ++rep.checks;
            if (hyp({"v_invertible", "divisorial", "prime"}) &&
                (r.at("t_invertible").is_refuted() || r.at("t_maximal").is_refuted()))
                violate("in a Noetherian ambient ring, a v-invertible divisorial "
                        "prime is a t-invertible t-maximal ideal",
                        r.at("t_invertible").meet(r.at("t_maximal")));
        }
    }
    return rep;
}

SuiteReport vtmax_suite(const std::vector<ClassifiedFixture>& fixtures, const Bounds& b)
{
    std::vector<ClassSummary> rows;
    rows.reserve(fixtures.size());
    for (const auto& f : fixtures)
        rows.push_back(classify_ideal(f.name, f.ideal, f.witness, b));

    SuiteReport rep = vtmax_implications(rows);
    rep.name = "maximality-suite";
    for (std::size_t i = 0; i < fixtures.size(); ++i) {
        for (const auto& [pred, expected] : fixtures[i].expected) {
            ++rep.checks;
            auto it = rows[i].by_name.find(pred);
            if (it == rows[i].by_name.end()) {
                rep.violations.push_back(json{{"fixture", fixtures[i].name},
                                              {"check", "expected classification"},
                                              {"predicate", pred},
                                              {"error", "unknown predicate"}});
                continue;
            }
            if (expected != it->second.name())
                rep.violations.push_back(json{{"fixture", fixtures[i].name},
                                              {"check", "expected classification"},
                                              {"predicate", pred},
                                              {"expected", expected},
                                              {"actual", it->second.name()},
                                              {"evidence", it->second.evidence}});
        }
    }
    return rep;
}

} // namespace staride
