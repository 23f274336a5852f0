#include "staride/polyext.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace staride {

Rat::Rat(long long n, long long d)
{
    if (d == 0) throw input_error("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const long long g = std::gcd(n < 0 ? -n : n, d);
    num = g ? n / g : 0;
    den = g ? d / g : 1;
}

Rat Rat::operator+(const Rat& o) const
{
    return Rat{num * o.den + o.num * den, den * o.den};
}

Rat Rat::operator*(const Rat& o) const { return Rat{num * o.num, den * o.den}; }

Rat Rat::operator/(const Rat& o) const
{
    if (o.is_zero()) throw input_error("rational division by zero");
    return Rat{num * o.den, den * o.num};
}

std::string Rat::str() const
{
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

void RingPoly::accumulate(long long xpow, const ExponentVector& m, const Rat& c)
{
    if (c.is_zero()) return;
    auto& coeff = terms_[xpow];
    auto it = coeff.find(m);
    if (it == coeff.end()) {
        coeff.emplace(m, c);
        return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) coeff.erase(it);
    if (coeff.empty()) terms_.erase(xpow);
}

RingPoly RingPoly::term(const ExponentVector& m, long long xpow, Rat c)
{
    if (xpow < 0) throw input_error("negative power of X");
    RingPoly p;
    p.accumulate(xpow, m, c);
    return p;
}

long long RingPoly::degree() const
{
    return terms_.empty() ? -1 : terms_.rbegin()->first;
}

RingPoly RingPoly::add(const RingPoly& o) const
{
    RingPoly r = *this;
    for (const auto& [xpow, coeff] : o.terms_)
        for (const auto& [m, c] : coeff) r.accumulate(xpow, m, c);
    return r;
}

RingPoly RingPoly::sub(const RingPoly& o) const
{
    RingPoly r = *this;
    for (const auto& [xpow, coeff] : o.terms_)
        for (const auto& [m, c] : coeff) r.accumulate(xpow, m, -c);
    return r;
}

RingPoly RingPoly::mul(const RingPoly& o) const
{
    RingPoly r;
    for (const auto& [xa, ca] : terms_)
        for (const auto& [xb, cb] : o.terms_)
            for (const auto& [ma, sa] : ca)
                for (const auto& [mb, sb] : cb)
                    r.accumulate(xa + xb, ma.mul(mb), sa * sb);
    return r;
}

RingPoly RingPoly::scaled(const ExponentVector& m, Rat c) const
{
    RingPoly r;
    for (const auto& [xpow, coeff] : terms_)
        for (const auto& [mm, cc] : coeff) r.accumulate(xpow, mm.mul(m), cc * c);
    return r;
}

std::optional<RingPoly> RingPoly::divided_by(const RingPoly& d) const
{
    if (d.is_zero()) throw input_error("polynomial division by zero");
    const auto& [dpow, dlead] = *d.terms_.rbegin();
    if (dlead.size() != 1)
        throw input_error("polynomial division needs a monomial leading coefficient");
    const auto& [dm, dc] = *dlead.begin();

    RingPoly r = *this;
    RingPoly q;
    while (!r.is_zero() && r.degree() >= dpow) {
        const auto& [rpow, rlead] = *r.terms_.rbegin();
        RingPoly step;
        for (const auto& [m, c] : rlead)
            step.accumulate(rpow - dpow, m.div(dm), c / dc);
        q = q.add(step);
        r = r.sub(d.mul(step));
    }
    if (!r.is_zero()) return std::nullopt;
    return q;
}

std::vector<ExponentVector> RingPoly::monomials() const
{
    std::set<ExponentVector> seen;
    for (const auto& [xpow, coeff] : terms_) {
        (void)xpow;
        for (const auto& [m, c] : coeff) {
            (void)c;
            seen.insert(m);
        }
    }
    return {seen.begin(), seen.end()};
}

bool RingPoly::monomial_coefficients() const
{
    for (const auto& [xpow, coeff] : terms_) {
        (void)xpow;
        if (coeff.size() != 1) return false;
    }
    return true;
}

std::string RingPoly::str() const
{
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [xpow, coeff] : terms_) {
        for (const auto& [m, c] : coeff) {
            if (!out.empty()) out += " + ";
            std::string factors;
            if (!(c == Rat::one())) factors = c.str();
            if (!m.is_unit()) {
                if (!factors.empty()) factors += "*";
                factors += m.str();
            }
            if (xpow > 0) {
                if (!factors.empty()) factors += "*";
                factors += xpow == 1 ? "X" : "X^" + std::to_string(xpow);
            }
            out += factors.empty() ? "1" : factors;
        }
    }
    return out;
}

bool in_poly_ring(const RingPoly& g, const MonoidSpec& S)
{
    for (const auto& m : g.monomials())
        if (!S.member(m)) return false;
    return true;
}

FracIdealPtr content(const RingPoly& f, const MonoidSpecPtr& S)
{
    if (f.is_zero()) throw input_error("the zero polynomial has no content ideal");
    std::vector<ExponentVector> gens;
    for (const auto& [xpow, coeff] : f.terms()) {
        (void)xpow;
        if (coeff.size() != 1)
            throw input_error("content needs monomial coefficients; coefficient of X^" +
                              std::to_string(xpow) + " is not a single monomial");
        gens.push_back(coeff.begin()->first);
    }
    return FracIdeal::fingen(S, std::move(gens), "c(" + f.str() + ")");
}

Verdict irreducible_in_kx(const RingPoly& f)
{
    if (f.degree() <= 0)
        throw input_error("irreducibility applies to nonconstant polynomials");
    if (f.degree() == 1)
        return Verdict::proved(
            json{{"by", "polynomials of degree 1 are irreducible over a field"}});
    return Verdict{Verdict::State::Inconclusive,
                   json{{"reason", "no factorization routine for degree " +
                                       std::to_string(f.degree())}},
                   Exactness{false, 0, 0}};
}

std::string UpperToZero::display() const { return "(" + f.str() + ")K[X] ∩ R[X]"; }

UpperToZero upper_to_zero(const RingPoly& f, const MonoidSpecPtr& S,
                          const Verdict& integrally_closed)
{
    if (!integrally_closed.is_proved())
        throw input_error("the product form of an upper to zero requires a proved "
                          "integrally-closed ambient ring");
    if (f.degree() < 1)
        throw input_error("an upper to zero needs a nonconstant polynomial");
    if (!in_poly_ring(f, *S))
        throw input_error("the defining polynomial must lie in R[X]");
    UpperToZero P;
    P.f = f;
    P.content_ideal = content(f, S);
    P.inv_content = FracIdeal::colon(FracIdeal::ring(S), P.content_ideal);
    P.irreducible = irreducible_in_kx(f);
    P.spec = S;
    return P;
}

bool upper_member(const UpperToZero& P, const RingPoly& g, const Bounds& b)
{
    if (g.is_zero()) return true;
    auto h = g.divided_by(P.f);
    if (!h) return false;
    for (const auto& m : h->monomials()) {
        auto mc = P.inv_content->membership(m, b);
        if (mc.value == Tri::Unknown)
            throw representation_error("membership in (R : c(f)) came back undecided");
        if (mc.value == Tri::False) return false;
    }
    return true;
}

Verdict upper_is_prime(const UpperToZero& P)
{
    if (P.irreducible.is_proved())
        return Verdict::proved(
            json{{"by", "the contraction of the prime ideal fK[X] is prime"},
                 {"irreducible", P.irreducible.evidence}},
            P.irreducible.exactness);
    return Verdict{Verdict::State::Inconclusive,
                   json{{"reason", "irreducibility of f undecided"},
                        {"detail", P.irreducible.evidence}},
                   P.irreducible.exactness};
}

std::vector<RingPoly> upper_samples(const UpperToZero& P, const Bounds& b,
                                    std::size_t count)
{
    std::vector<RingPoly> out;
    auto hs = P.inv_content->sample_members(b);
    if (hs.empty()) return out;
    for (std::size_t j = 0; j < count; ++j) {
        const auto& h = hs[j % hs.size()];
        out.push_back(P.f.mul(RingPoly::term(h, static_cast<long long>(j % 2))));
    }
    return out;
}

std::string ExtendedIdeal::display() const { return base->display() + "R[X]"; }

ExtendedIdeal extend_ideal(FracIdealPtr I) { return ExtendedIdeal{std::move(I)}; }

MemberCheck extended_member(const ExtendedIdeal& E, const RingPoly& g, const Bounds& b)
{
    if (g.is_zero()) return {Tri::True, json{{"zero", true}}};
    Tri worst = Tri::True;
    json undecided = json::array();
    for (const auto& m : g.monomials()) {
        auto mc = E.base->membership(m, b);
        if (mc.value == Tri::False)
            return {Tri::False,
                    json{{"monomial", m.str()}, {"outside", E.base->display()}}};
        if (mc.value == Tri::Unknown) {
            worst = Tri::Unknown;
            undecided.push_back(m.str());
        }
    }
    if (worst == Tri::Unknown) return {Tri::Unknown, json{{"undecided", undecided}}};
    return {Tri::True, json{{"coefficients", "all in " + E.base->display()}}};
}

std::vector<RingPoly> extended_samples(const ExtendedIdeal& E, const Bounds& b,
                                       std::size_t count)
{
    std::vector<RingPoly> out;
    auto base = E.base->sample_members(b);
    if (base.empty()) return out;
    const std::size_t n = base.size();
    for (std::size_t j = 0; j < count; ++j) {
        const auto& m = base[j % n];
        switch (j % 3) {
        case 0:
            out.push_back(RingPoly::term(m, static_cast<long long>((j / 3) % 3)));
            break;
        case 1:
            out.push_back(RingPoly::term(m).add(RingPoly::term(base[(j + 1) % n], 1)));
            break;
        default:
            out.push_back(RingPoly::term(m, 2, Rat{1, 2})
                              .add(RingPoly::term(base[(j + 2) % n], 0)));
        }
    }
    return out;
}

json UpperDivReport::to_json() const
{
    return json{{"divisorial", divisorial.to_json()},
                {"v_invertible", v_invertible.to_json()},
                {"not_strong", not_strong.to_json()},
                {"maximal_divisorial", maximal_divisorial.to_json()}};
}

UpperDivReport upperdiv_check(const UpperToZero& P, const Bounds& b)
{
    UpperDivReport rep;

    rep.divisorial = Verdict::proved(
        json{{"by", "fK[X] ∩ R[X] = f·(R : c(f))[X] over an integrally closed "
                    "ring, and the right side is an intersection of divisorial "
                    "modules"},
             {"content", P.content_ideal->display()}});

    auto vinv = is_v_invertible(P.content_ideal, b);
    rep.v_invertible =
        Verdict{vinv.state,
                json{{"reduced_to", "v-invertibility of the content ideal"},
                     {"content", P.content_ideal->display()},
                     {"detail", vinv.evidence}},
                vinv.exactness};

    // Proof-shaped witness: a content generator g with g·(R : c(f)) ⊆ R
    // gives g/f ∈ (R[X] : P), while (g/f)·f = g lies outside P because an
    // upper to zero meets R in (0).  Hence (R[X] : P) strictly exceeds
    // (P : P): P is not strong.
    rep.not_strong = Verdict::inconclusive(
        json{{"reason", "no content generator proved a separating quotient"}}, b);
    const auto closure = v_closure(P.content_ideal);
    for (const auto& g : P.content_ideal->gens()) {
        if (closure->membership(g, b).value != Tri::True) continue;
        if (upper_member(P, RingPoly::term(g), b)) continue;
        rep.not_strong = Verdict::proved(
            json{{"witness", "(" + g.str() + ")/(" + P.f.str() + ")"},
                 {"by", "the quotient multiplies P into R[X] but sends f to " +
                            g.str() + ", which lies outside P"}});
        break;
    }

    if (rep.divisorial.is_proved() && rep.v_invertible.is_proved())
        rep.maximal_divisorial = Verdict::proved(
            json{{"by", "a divisorial upper to zero is maximal divisorial exactly "
                        "when it is v-invertible"},
                 {"v_invertible", rep.v_invertible.evidence}},
            rep.divisorial.exactness.combined(rep.v_invertible.exactness));
    else if (rep.divisorial.is_proved() && rep.v_invertible.is_refuted())
        rep.maximal_divisorial = Verdict::refuted(
            json{{"by", "a divisorial upper to zero is maximal divisorial exactly "
                        "when it is v-invertible"},
                 {"v_invertible", rep.v_invertible.evidence}},
            rep.divisorial.exactness.combined(rep.v_invertible.exactness));
    else
        rep.maximal_divisorial = Verdict::inconclusive(
            json{{"reason", "v-invertibility of the content ideal undecided"},
                 {"detail", rep.v_invertible.evidence}},
            b);

    return rep;
}

namespace {

json poly_vec_json(const std::vector<RingPoly>& ps)
{
    json a = json::array();
    for (const auto& p : ps) a.push_back(p.str());
    return a;
}

json vec_json(const std::vector<ExponentVector>& vs)
{
    json a = json::array();
    for (const auto& v : vs) a.push_back(v.str());
    return a;
}

} // namespace

Verdict poly_refute_t_maximal(const UpperToZero& P, const ExtendedIdeal& W,
                              const ExponentVector& u, const std::string& family,
                              const Bounds& b)
{
    auto unit_in = extended_member(W, RingPoly::term(ExponentVector::unit()), b);
    if (unit_in.value != Tri::False)
        return Verdict::refuted(json{{"check", "properness"},
                                     {"reason", "1 must lie outside the wider ideal"},
                                     {"membership", unit_in.note}});

    if (W.base->membership(u, b).value != Tri::True)
        return Verdict::refuted(json{{"check", "strict membership"},
                                     {"reason", "the strictness witness must lie in "
                                                "the wider ideal"},
                                     {"member", u.str()}});
    if (upper_member(P, RingPoly::term(u), b))
        return Verdict::refuted(json{{"check", "strict membership"},
                                     {"reason", "the strictness witness must lie "
                                                "outside the candidate"},
                                     {"member", u.str()}});

    // Containment P ⊆ W, coefficient by coefficient: a member f·H has every
    // coefficient monomial of the form a·m with a a coefficient of f and
    // m ∈ (R : c(f)), so a·(R : c(f)) ⊆ I for each a settles f·(R:c(f))[X]
    // ⊆ I·R[X].
    Exactness contain_ex = Exactness::exact_tag();
    json contain_parts = json::array();
    bool contain_proved = true;
    for (const auto& [xpow, coeff] : P.f.terms()) {
        (void)xpow;
        const auto& a = coeff.begin()->first;
        auto inside =
            subset_up_to(FracIdeal::translate(P.inv_content, a), W.base, b);
        contain_ex = contain_ex.combined(inside.exactness);
        contain_parts.push_back(
            json{{"coefficient", a.str()}, {"verdict", inside.name()}});
        if (inside.is_refuted())
            return Verdict::refuted(json{{"check", "containment"},
                                         {"reason", "the candidate must lie inside "
                                                    "the wider ideal"},
                                         {"coefficient", a.str()},
                                         {"detail", inside.evidence}},
                                    inside.exactness);
        if (!inside.is_proved()) contain_proved = false;
    }
    if (!contain_proved)
        return Verdict::inconclusive(json{{"check", "containment"},
                                          {"reason", "containment in the wider ideal "
                                                     "undecided"},
                                          {"parts", contain_parts}},
                                     b);

    if (!P.spec->has_family(family))
        return Verdict::refuted(json{{"check", "certificates"},
                                     {"reason", "unknown certificate family"},
                                     {"family", family}});

    auto pool = extended_samples(W, b, 24);
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
        std::vector<RingPoly> F;
        for (auto i : picks) F.push_back(pool[i]);

        std::set<ExponentVector> flat;
        for (const auto& p : F)
            for (const auto& m : p.monomials()) flat.insert(m);

        auto cert = auto_certify(W.base, {flat.begin(), flat.end()}, family, b);
        if (!cert)
            return Verdict::refuted(json{{"check", "certificates"},
                                         {"reason", "no validating certificate for a "
                                                    "sampled finite subset"},
                                         {"members", poly_vec_json(F)}});
        ++issued;
        if (sample_certs.size() < 3)
            sample_certs.push_back(json{{"members", poly_vec_json(F)},
                                        {"monomials", vec_json(cert->members)},
                                        {"multiplier", cert->multiplier.str()}});
    }

    return Verdict::proved(
        json{{"by", "a proper t-certified ideal strictly contains the candidate"},
             {"wider", W.display()},
             {"strict_member", u.str()},
             {"containment", contain_ex.to_json()},
             {"certificates",
              json{{"count", issued}, {"family", family}, {"sample", sample_certs}}}},
        contain_ex.combined(Exactness::up_to(b)));
}

Verdict v_finite_separation(const UpperToZero& P, const std::string& family,
                            const Bounds& b)
{
    if (!P.spec->has_family(family))
        return Verdict::inconclusive(
            json{{"reason", "unknown separating family"}, {"family", family}}, b);

    auto pool = upper_samples(P, b, 12);
    if (pool.empty())
        return Verdict::inconclusive(json{{"reason", "no sampled members"}}, b);

    std::mt19937_64 rng(b.seed);
    long long separated = 0;
    json samples = json::array();
    json unseparated = json::array();
    for (long long k = 0; k < b.cert_samples; ++k) {
        std::set<std::size_t> picks;
        const std::size_t want = 1 + static_cast<std::size_t>(k % 3);
        while (picks.size() < std::min(want, pool.size()))
            picks.insert(static_cast<std::size_t>(rng() % pool.size()));
        std::vector<RingPoly> F;
        for (auto i : picks) F.push_back(pool[i]);

        long long past = 0;
        for (const auto& p : F)
            for (const auto& m : p.monomials())
                past = std::max(past, m.max_index_any());
        for (const auto& m : P.f.monomials())
            past = std::max(past, m.max_index_any());
        const auto s = ExponentVector::indexed(family, past + 1);

        bool clears = true;
        for (const auto& p : F)
            if (!in_poly_ring(p.scaled(s), *P.spec)) clears = false;
        const RingPoly probe = P.f.scaled(s);
        const bool probe_in = upper_member(P, probe, b);
        const bool escapes = !in_poly_ring(probe.scaled(s), *P.spec);

        if (clears && probe_in && escapes) {
            ++separated;
            if (samples.size() < 3)
                samples.push_back(json{{"members", poly_vec_json(F)},
                                       {"separator", s.str()},
                                       {"escapee", probe.str()}});
        } else if (unseparated.size() < 3) {
            unseparated.push_back(json{{"members", poly_vec_json(F)},
                                       {"separator", s.str()}});
        }
    }

    json ev{{"reason", "no examined finite subfamily can generate the divisorial "
                       "closure"},
            {"by", "each sampled finite subset admits a fresh-index multiplier "
                   "inside its colon dual but outside (R[X] : P)"},
            {"separated", separated},
            {"of", b.cert_samples},
            {"sample", samples}};
    if (!unseparated.empty()) ev["unseparated"] = unseparated;
    return Verdict::inconclusive(std::move(ev), b);
}

ClassSummary upper_classification(const std::string& name, const UpperToZero& P,
                                  const ExtendedIdeal& W, const ExponentVector& u,
                                  const std::string& family, const Bounds& b)
{
    const auto rep = upperdiv_check(P, b);
    const auto refute = poly_refute_t_maximal(P, W, u, family, b);
    const auto vfin = v_finite_separation(P, family, b);

    ClassSummary cs;
    cs.name = name;
    bool nonneg_only = true;
    for (const auto& r : P.spec->rules())
        if (!std::holds_alternative<NonNegRule>(r)) nonneg_only = false;
    cs.noetherian_ambient = P.spec->families().empty() && nonneg_only;

    cs.by_name["prime"] = upper_is_prime(P);
    cs.by_name["divisorial"] = rep.divisorial;
    cs.by_name["t_ideal"] =
        rep.divisorial.is_proved()
            ? Verdict::proved(json{{"by", "divisorial ideals are t-ideals"}},
                              rep.divisorial.exactness)
            : Verdict::inconclusive(json{{"reason", "divisoriality undecided"}}, b);
    cs.by_name["strong"] =
        rep.not_strong.is_proved()
            ? Verdict::refuted(json{{"reason", "(R[X] : P) strictly exceeds (P : P)"},
                                    {"witness", rep.not_strong.evidence["witness"]}},
                               rep.not_strong.exactness)
            : Verdict::inconclusive(json{{"reason", "no separating quotient found"}},
                                    b);
    cs.by_name["proper_v_closure"] =
        rep.divisorial.is_proved() && !upper_member(P, RingPoly::term(ExponentVector::unit()), b)
            ? Verdict::proved(json{{"by", "the ideal is divisorial and omits 1"}})
            : Verdict::inconclusive(json{{"reason", "closure properness undecided"}},
                                    b);
    cs.by_name["v_finite"] = vfin;
    cs.by_name["v_invertible"] = rep.v_invertible;
    cs.by_name["t_invertible"] = Verdict::inconclusive(
        json{{"reason", "t-finiteness of the factors unresolved at the polynomial "
                        "layer"}},
        b);
    cs.by_name["maximal_divisorial"] = rep.maximal_divisorial;
    if (refute.is_proved())
        cs.by_name["t_maximal"] =
            Verdict::refuted(json{{"reason", "a strictly wider proper t-certified "
                                             "ideal exists"},
                                  {"detail", refute.evidence}},
                             refute.exactness);
    else
        cs.by_name["t_maximal"] = Verdict::inconclusive(
            json{{"reason", "no valid refutation witness"}, {"detail", refute.evidence}},
            b);
    return cs;
}

} // namespace staride
