#include "staride/star.hpp"

#include <algorithm>

namespace staride {

namespace {

constexpr int kRepresentationCandidates = 12;
constexpr int kFiniteSubsetCap = 6;

/// Bounded finitely generated view of I; exact when I already is one.
std::pair<FracIdealPtr, Exactness> fingen_view(const FracIdealPtr& I, const Bounds& b)
{
    if (I->is_fingen()) return {I, Exactness::exact_tag()};
    auto [gens, ex] = I->extract_generators(b);
    if (gens.empty()) return {nullptr, ex};
    return {FracIdeal::fingen(I->spec(), std::move(gens)), ex};
}

json vec_list(const std::vector<ExponentVector>& vs)
{
    json a = json::array();
    for (const auto& v : vs) a.push_back(v.str());
    return a;
}

/// Keys that need a combined nonnegativity bound: those mentioned by the
/// offset or carrying an explicit per-key bound on either side.
bool combined_nonneg_with_offset(const Facts& fu, const Facts& fw, const ExponentVector& off)
{
    if (!fu.default_lb || !fw.default_lb || *fu.default_lb + *fw.default_lb < 0) return false;
    auto check = [&](const VarKey& k) {
        auto a = fu.key_lb(k), c = fw.key_lb(k);
        return a && c && *a + *c + off.get(k) >= 0;
    };
    for (const auto& [k, e] : off.entries()) {
        (void)e;
        if (!check(k)) return false;
    }
    for (const auto& [k, v] : fu.lb) {
        (void)v;
        if (!check(k)) return false;
    }
    for (const auto& [k, v] : fw.lb) {
        (void)v;
        if (!check(k)) return false;
    }
    return true;
}

} // namespace

FracIdealPtr v_closure(const FracIdealPtr& I)
{
    auto R = FracIdeal::ring(I->spec());
    return FracIdeal::colon(R, FracIdeal::colon(R, I));
}

Verdict check_certificate(const TIdealCertificate& c, const Bounds& b)
{
    if (c.members.empty()) throw input_error("certificate needs at least one member");
    if (!c.target) throw input_error("certificate needs a target ideal");
    auto spec = c.target->spec();
    auto R = FracIdeal::ring(spec);

    if (R->membership(c.multiplier, b).value != Tri::False)
        return Verdict::refuted(json{{"check", "multiplier must lie outside the ring"},
                                     {"multiplier", c.multiplier.str()}});

    for (const auto& f : c.members)
        if (R->membership(c.multiplier.mul(f), b).value != Tri::True)
            return Verdict::refuted(json{{"check", "multiplier times member must lie in the ring"},
                                         {"member", f.str()},
                                         {"product", c.multiplier.mul(f).str()}});

    // (members)_v ⊆ m^-1 R ∩ R; the contraction must land inside the target.
    auto contraction = FracIdeal::intersect(
        {FracIdeal::fingen(spec, {c.multiplier.inverse()}), R});
    Verdict incl = subset_up_to(contraction, c.target, b);
    if (!incl.is_proved() || !incl.exactness.exact)
        return Verdict::refuted(json{{"check", "contraction is not entailed inside the target"},
                                     {"contraction", contraction->str()},
                                     {"detail", incl.to_json()}});
    return Verdict::proved(json{{"multiplier", c.multiplier.str()},
                                {"members", vec_list(c.members)},
                                {"contraction", contraction->str()}});
}

std::optional<TIdealCertificate> auto_certify(const FracIdealPtr& target,
                                              std::vector<ExponentVector> members,
                                              const std::string& family, const Bounds& b)
{
    if (members.empty() || family.empty()) return std::nullopt;
    // Prefer the smallest unused index of the family; members carrying large
    // indices of other families may need a multiplier past all of them.
    long long past_all = 0;
    for (const auto& m : members) past_all = std::max(past_all, m.max_index_any());
    for (long long n : {fresh_index(family, members), past_all + 1}) {
        TIdealCertificate c{members, ExponentVector::indexed(family, n), target};
        if (check_certificate(c, b).is_proved()) return c;
    }
    return std::nullopt;
}

Verdict t_member(const FracIdealPtr& I, const ExponentVector& u, const Bounds& b)
{
    auto direct = I->membership(u, b);
    if (direct.value == Tri::True)
        return Verdict::proved(json{{"finite_subset", json::array({u.str()})},
                                    {"by", "literal membership"}});

    if (I->is_fingen()) {
        // The t- and v-closures agree on finitely generated ideals.
        auto mc = v_closure(I)->membership(u, b);
        if (mc.value == Tri::True)
            return Verdict::proved(json{{"finite_subset", vec_list(I->gens())}, {"note", mc.note}});
        if (mc.value == Tri::False)
            return Verdict::refuted(json{{"reason", "outside the divisorial closure"},
                                         {"note", mc.note}});
        return Verdict::inconclusive(json{{"reason", "closure membership undecided"}}, b);
    }

    // Grow finite subsets from the sample stream.
    auto samples = I->sample_members(b);
    for (int take = 1; take <= kFiniteSubsetCap && take <= static_cast<int>(samples.size());
         ++take) {
        std::vector<ExponentVector> F(samples.begin(), samples.begin() + take);
        auto Fv = v_closure(FracIdeal::fingen(I->spec(), F));
        if (Fv->membership(u, b).value == Tri::True)
            return Verdict::proved(json{{"finite_subset", vec_list(F)}});
    }

    if (direct.value == Tri::False && is_divisorial(I, b).is_proved())
        return Verdict::refuted(json{{"reason", "the ideal is divisorial, hence a t-ideal"},
                                     {"note", direct.note}});
    return Verdict::inconclusive(json{{"tried_subsets", kFiniteSubsetCap}}, b);
}

std::optional<ExponentVector> principal_contraction_witness(const FracIdealPtr& I,
                                                            const Bounds& b)
{
    auto spec = I->spec();
    auto R = FracIdeal::ring(spec);
    auto C = FracIdeal::colon(R, I);
    int tried = 0;
    for (const auto& x : C->sample_members(b)) {
        if (R->membership(x, b).value != Tri::False) continue;
        if (++tried > kRepresentationCandidates) break;
        auto W = FracIdeal::intersect({FracIdeal::fingen(spec, {x.inverse()}), R});
        Verdict eq = equal_up_to(I, W, b);
        if (eq.is_proved() && eq.exactness.exact) return x;
    }
    return std::nullopt;
}

Verdict is_divisorial(const FracIdealPtr& I, const Bounds& b)
{
    auto V = v_closure(I);

    // Exact two-sided comparison whenever both endpoints are closed forms.
    if (I->is_fingen() && V->is_fingen()) {
        Verdict eq = equal_up_to(I, V, b);
        Verdict out = eq;
        out.evidence = json{{"route", "closed-form comparison"}, {"detail", eq.evidence}};
        return out;
    }

    // A conjunction of shift atoms is a colon dual, and colon duals are
    // fixed by the double dual.
    if (auto dnf = I->dnf_atoms(); dnf && dnf->size() == 1) {
        bool all_shift = std::all_of(dnf->front().begin(), dnf->front().end(), [](const Atom& a) {
            return std::holds_alternative<ShiftAtom>(a);
        });
        if (all_shift)
            return Verdict::proved(json{{"route", "colon dual of a finitely generated ideal"}});
    }

    // I = x^-1 R ∩ R makes I an intersection of divisorial ideals.
    if (auto x = principal_contraction_witness(I, b))
        return Verdict::proved(json{{"route", "principal contraction"}, {"witness", x->str()}});

    // Bounded refutation: a certain member of the closure that is exactly
    // outside I.
    for (const auto& u : V->sample_members(b))
        if (I->membership(u, b).value == Tri::False)
            return Verdict::refuted(json{{"witness", u.str()},
                                         {"reason", "closure member outside the ideal"}});
    return Verdict::inconclusive(json{{"reason", "no representation found, no witness found"}}, b);
}

Verdict is_t_ideal(const FracIdealPtr& I, const Bounds& b)
{
    Verdict d = is_divisorial(I, b);
    if (d.is_proved()) {
        Verdict out = Verdict::proved(json{{"by", "divisorial ideals are t-ideals"},
                                           {"detail", d.evidence}},
                                      d.exactness);
        return out;
    }
    if (I->is_fingen() && d.is_refuted()) {
        // On finitely generated ideals the t- and v-closures agree.
        Verdict out = d;
        out.evidence = json{{"by", "t equals v on finitely generated ideals"},
                            {"detail", d.evidence}};
        return out;
    }
    return Verdict::inconclusive(json{{"reason", "divisoriality undecided"},
                                      {"detail", d.evidence}},
                                 b);
}

Verdict is_strong(const FracIdealPtr& I, const Bounds& b)
{
    auto spec = I->spec();
    auto R = FracIdeal::ring(spec);
    if (I->is_ring()) return Verdict::proved(json{{"by", "both sides are (R : R)"}});

    auto CRI = FracIdeal::colon(R, I);
    auto CII = FracIdeal::colon(I, I);

    // (I : I) ⊆ (R : I) follows from integrality: x I ⊆ I ⊆ R.
    Verdict integral = subset_up_to(I, R, b);
    Verdict dir1 = integral.is_proved() && integral.exactness.exact
                       ? Verdict::proved(json{{"by", "x*I ⊆ I ⊆ R"}})
                       : subset_up_to(CII, CRI, b);

    // (R : I) ⊆ (I : I): for every u with u*I ⊆ R and every w in I, u*w
    // satisfies each defining atom of I again.
    Verdict dir2 = Verdict::inconclusive(json{{"reason", "no stability route"}}, b);
    auto dnf = I->dnf_atoms();
    if (dnf && dnf->size() == 1) {
        EntailCtx ctxU{spec, {}, {I}, b};
        EntailCtx ctxW{spec, dnf->front(), {}, b};
        Facts fu = saturate(ctxU);
        Facts fw = saturate(ctxW);
        bool ok = true;
        json steps = json::array();
        for (const auto& a : dnf->front()) {
            bool atom_ok = std::visit(
                [&](const auto& g) -> bool {
                    using T = std::decay_t<decltype(g)>;
                    if constexpr (std::is_same_v<T, ShiftAtom>) {
                        // u * (w * m) lies in R when w * m lies back in I.
                        if (g.m.is_unit()) return true;
                        return entails(ctxW, MemberAtom{g.m, I});
                    } else if constexpr (std::is_same_v<T, DegreeAtom>) {
                        return entail_degree(fu, DegreeAtom{g.d, 0});
                    } else if constexpr (std::is_same_v<T, SupportAtom>) {
                        return fu.all_nonneg_except(nullptr);
                    } else if constexpr (std::is_same_v<T, NonNegAtom>) {
                        return combined_nonneg_with_offset(fu, fw, g.offset);
                    } else {
                        return false;
                    }
                },
                a);
            steps.push_back(json{{"atom", atom_str(a)}, {"ok", atom_ok}});
            if (!atom_ok) ok = false;
        }
        if (ok) dir2 = Verdict::proved(json{{"by", "atom stability under (R:I) multipliers"},
                                            {"steps", steps}});
    }
    if (!dir2.is_proved()) {
        Verdict sub = subset_up_to(CRI, CII, b);
        if (!sub.is_inconclusive()) dir2 = sub;
    }

    Verdict out = dir1.meet(dir2);
    out.evidence = json{{"forward", dir1.to_json()}, {"backward", dir2.to_json()}};
    return out;
}

Verdict is_invertible(const FracIdealPtr& I, const Bounds& b)
{
    auto spec = I->spec();
    auto R = FracIdeal::ring(spec);
    if (!I->is_fingen())
        return Verdict::inconclusive(json{{"reason", "needs a finitely generated ideal"}}, b);
    auto [C, ex] = fingen_view(FracIdeal::colon(R, I), b);
    if (!C) return Verdict::inconclusive(json{{"reason", "empty dual extraction"}}, b);
    Verdict eq = equal_up_to(FracIdeal::product(I, C), R, b);
    if (!ex.exact && eq.is_refuted())
        return Verdict::inconclusive(json{{"reason", "refutation depends on truncated dual"},
                                          {"detail", eq.evidence}},
                                     b);
    Verdict out = eq;
    out.exactness = out.exactness.combined(ex);
    out.evidence = json{{"dual_generators", vec_list(C->gens())}, {"detail", eq.evidence}};
    return out;
}

Verdict is_v_invertible(const FracIdealPtr& I, const Bounds& b)
{
    auto spec = I->spec();
    auto R = FracIdeal::ring(spec);

    if (I->is_fingen() && I->gens().size() == 1)
        return Verdict::proved(json{{"by", "principal ideals are invertible"},
                                    {"inverse", I->gens().front().inverse().str()}});

    // A strong ideal with proper closure is never v-invertible:
    // (R:I) = (I:I) makes (I (R:I))_v = (I (I:I))_v ⊆ I_v ⊊ R.
    Verdict strong = is_strong(I, b);
    if (strong.is_proved() && strong.exactness.exact
        && v_closure(I)->membership(ExponentVector::unit(), b).value == Tri::False)
        return Verdict::refuted(json{{"by", "strong ideals with proper closure are not v-invertible"},
                                     {"strong", strong.evidence}});

    auto [If, exI] = fingen_view(I, b);
    auto [C, exC] = fingen_view(FracIdeal::colon(R, I), b);
    if (!If || !C)
        return Verdict::inconclusive(json{{"reason", "empty bounded extraction"}}, b);
    Exactness ex = exI.combined(exC);

    auto T = FracIdeal::product(If, C);
    auto W = FracIdeal::colon(R, T);
    Verdict fwd = subset_up_to(W, R, b);
    Verdict bwd = subset_up_to(R, W, b);

    if (fwd.is_refuted() && !ex.exact)
        return Verdict::inconclusive(json{{"reason", "witness depends on truncated generators"},
                                          {"detail", fwd.evidence}},
                                     b);
    if (fwd.is_refuted())
        return Verdict::refuted(json{{"witness", fwd.evidence}, {"note", "(R : I(R:I)) exceeds R"}});
    if (!bwd.is_proved())
        return Verdict::inconclusive(json{{"reason", "unit membership undecided"}}, b);

    if (fwd.is_proved())
        return Verdict::proved(json{{"by", "(R : I(R:I)) = R"}, {"detail", fwd.evidence}},
                               fwd.exactness.combined(ex));
    // Clean sweep: no element of (R : I(R:I)) outside R within bounds.
    return Verdict::proved(json{{"by", "no element outside R within bounds"},
                                {"detail", fwd.evidence}},
                           Exactness::up_to(b));
}

Verdict is_v_finite(const FracIdealPtr& I, const Bounds& b)
{
    if (I->is_fingen())
        return Verdict::proved(json{{"finite_subset", vec_list(I->gens())},
                                    {"by", "already finitely generated"}});
    auto spec = I->spec();
    auto R = FracIdeal::ring(spec);
    auto CI = FracIdeal::colon(R, I);

    auto samples = I->sample_members(b);
    json attempts = json::array();
    for (int take = 1; take <= kFiniteSubsetCap && take <= static_cast<int>(samples.size());
         ++take) {
        std::vector<ExponentVector> F(samples.begin(), samples.begin() + take);
        auto CF = FracIdeal::colon(R, FracIdeal::fingen(spec, F));
        Verdict fwd = subset_up_to(CF, CI, b);
        Verdict bwd = subset_up_to(CI, CF, b);
        if (fwd.is_proved() && bwd.is_proved() && fwd.exactness.exact && bwd.exactness.exact)
            return Verdict::proved(json{{"finite_subset", vec_list(F)},
                                        {"by", "(R:F) = (R:I)"}});
        json note{{"finite_subset", vec_list(F)}};
        if (fwd.is_refuted()) note["separator"] = fwd.evidence;
        attempts.push_back(std::move(note));
    }
    return Verdict::inconclusive(json{{"attempts", attempts}}, b);
}

Verdict is_t_invertible(const FracIdealPtr& I, const Bounds& b)
{
    auto R = FracIdeal::ring(I->spec());
    Verdict vi = is_v_invertible(I, b);
    if (vi.is_refuted()) {
        Verdict out = vi;
        out.evidence = json{{"v_invertible", vi.to_json()}};
        return out;
    }
    Verdict fin_I = is_v_finite(I, b);
    Verdict fin_C = is_v_finite(FracIdeal::colon(R, I), b);
    Verdict out = vi.meet(fin_I).meet(fin_C);
    out.evidence = json{{"v_invertible", vi.to_json()},
                       {"ideal_v_finite", fin_I.to_json()},
                       {"dual_v_finite", fin_C.to_json()}};
    return out;
}

Verdict SuiteReport::verdict() const
{
    if (!violations.empty()) return Verdict::refuted(json{{"violations", violations}});
    json ev{{"checks", checks}};
    if (bounded) return Verdict::proved(ev, Exactness{false, 0, 0});
    return Verdict::proved(ev);
}

json SuiteReport::to_json() const
{
    return json{{"suite", name},
                {"checks", checks},
                {"violations", violations},
                {"bounded", bounded}};
}

SuiteReport star_axiom_suite(const std::vector<FracIdealPtr>& samples, const Bounds& b)
{
    SuiteReport rep;
    rep.name = "star-axioms";

    auto record = [&](const char* axiom, const FracIdealPtr& I, const Verdict& v,
                      bool expect_proved = true) {
        ++rep.checks;
        if (v.is_inconclusive()) {
            rep.bounded = true;
            return;
        }
        if (v.is_proved() != expect_proved)
            rep.violations.push_back(json{{"axiom", axiom},
                                          {"ideal", I->display()},
                                          {"got", v.to_json()}});
    };

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& I = samples[i];
        auto spec = I->spec();
        auto R = FracIdeal::ring(spec);

        record("closure fixes R", I, equal_up_to(v_closure(R), R, b));
        record("extensive", I, subset_up_to(I, v_closure(I), b));
        record("idempotent", I, equal_up_to(v_closure(v_closure(I)), v_closure(I), b));

        if (I->is_fingen()) {
            ExponentVector a = I->gens().front();
            record("commutes with translation", I,
                   equal_up_to(FracIdeal::translate(v_closure(I), a),
                               v_closure(FracIdeal::translate(I, a)), b));
            ExponentVector ai = a.inverse();
            record("commutes with fractional translation", I,
                   equal_up_to(FracIdeal::translate(v_closure(I), ai),
                               v_closure(FracIdeal::translate(I, ai)), b));

            const auto& J0 = samples[(i + 1) % samples.size()];
            if (J0->is_fingen() && J0->spec() == spec) {
                auto J = FracIdeal::sum(I, J0);
                record("monotone", I, subset_up_to(v_closure(I), v_closure(J), b));
            }
        }

        // t ≤ v, and t = v on finitely generated ideals, at membership level.
        auto V = v_closure(I);
        int probes = 0;
        for (const auto& u : V->sample_members(b)) {
            if (++probes > 4) break;
            Verdict tm = t_member(I, u, b);
            ++rep.checks;
            if (tm.is_proved() && V->membership(u, b).value == Tri::False)
                rep.violations.push_back(json{{"axiom", "t below v"},
                                              {"ideal", I->display()},
                                              {"member", u.str()}});
            if (I->is_fingen() && !tm.is_proved())
                rep.violations.push_back(json{{"axiom", "t = v on finitely generated"},
                                              {"ideal", I->display()},
                                              {"member", u.str()},
                                              {"got", tm.to_json()}});
        }
    }
    return rep;
}

SuiteReport chain_inclusion_suite(const std::vector<FracIdealPtr>& samples, const Bounds& b)
{
    SuiteReport rep;
    rep.name = "class-chain";
    for (const auto& I : samples) {
        std::vector<std::pair<const char*, Verdict>> cls;
        Verdict tid = is_t_ideal(I, b);
        Verdict div = is_divisorial(I, b);
        cls.emplace_back("invertible", is_invertible(I, b));
        cls.emplace_back("t-invertible t-ideal", is_t_invertible(I, b).meet(tid));
        cls.emplace_back("v-finite divisorial", is_v_finite(I, b).meet(div));
        cls.emplace_back("divisorial", div);
        cls.emplace_back("t-ideal", tid);

        for (std::size_t i = 0; i < cls.size(); ++i) {
            for (std::size_t j = i + 1; j < cls.size(); ++j) {
                ++rep.checks;
                if (cls[i].second.is_proved() && cls[j].second.is_refuted())
                    rep.violations.push_back(json{{"ideal", I->display()},
                                                  {"earlier", cls[i].first},
                                                  {"later", cls[j].first},
                                                  {"earlier_verdict", cls[i].second.to_json()},
                                                  {"later_verdict", cls[j].second.to_json()}});
                if (cls[i].second.is_inconclusive() || cls[j].second.is_inconclusive())
                    rep.bounded = true;
            }
        }
    }
    return rep;
}

} // namespace staride
