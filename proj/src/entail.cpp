#include "staride/entail.hpp"

#include <algorithm>
#include <sstream>

#include "staride/ideal.hpp"

namespace staride {

// ---------------------------------------------------------------------------
// Atom basics

Tri atom_eval(const MonoidSpec& spec, const Atom& a, const ExponentVector& u, const Bounds& b)
{
    return std::visit(
        [&](const auto& atom) -> Tri {
            using T = std::decay_t<decltype(atom)>;
            if constexpr (std::is_same_v<T, ShiftAtom>) {
                return spec.member(u.mul(atom.m)) ? Tri::True : Tri::False;
            } else if constexpr (std::is_same_v<T, DegreeAtom>) {
                return atom.d.eval(u) >= atom.min ? Tri::True : Tri::False;
            } else if constexpr (std::is_same_v<T, SupportAtom>) {
                ExponentVector v = u.mul(atom.offset);
                for (const auto& [k, e] : v.entries()) {
                    if (e <= 0) continue;
                    for (const auto& sel : atom.selectors)
                        if (sel.matches(k)) return Tri::True;
                }
                return Tri::False;
            } else if constexpr (std::is_same_v<T, NonNegAtom>) {
                return u.mul(atom.offset).nonnegative() ? Tri::True : Tri::False;
            } else if constexpr (std::is_same_v<T, RuleAtom>) {
                return rule_holds(atom.rule, u.mul(atom.offset)) ? Tri::True : Tri::False;
            } else {
                static_assert(std::is_same_v<T, MemberAtom>);
                return atom.target->membership(u.mul(atom.m), b).value;
            }
        },
        a);
}

Atom atom_shifted(const Atom& a, const ExponentVector& g)
{
    return std::visit(
        [&](const auto& atom) -> Atom {
            using T = std::decay_t<decltype(atom)>;
            if constexpr (std::is_same_v<T, ShiftAtom>) {
                return ShiftAtom{atom.m.mul(g)};
            } else if constexpr (std::is_same_v<T, DegreeAtom>) {
                return DegreeAtom{atom.d, atom.min - atom.d.eval(g)};
            } else if constexpr (std::is_same_v<T, SupportAtom>) {
                return SupportAtom{atom.selectors, atom.offset.mul(g)};
            } else if constexpr (std::is_same_v<T, NonNegAtom>) {
                return NonNegAtom{atom.offset.mul(g)};
            } else if constexpr (std::is_same_v<T, RuleAtom>) {
                return RuleAtom{atom.rule, atom.offset.mul(g)};
            } else {
                static_assert(std::is_same_v<T, MemberAtom>);
                return MemberAtom{atom.m.mul(g), atom.target};
            }
        },
        a);
}

std::string atom_str(const Atom& a)
{
    auto at = [](const ExponentVector& off) {
        return off.is_unit() ? std::string{} : "@" + off.str();
    };
    return std::visit(
        [&](const auto& atom) -> std::string {
            using T = std::decay_t<decltype(atom)>;
            if constexpr (std::is_same_v<T, ShiftAtom>) {
                return "shift(" + atom.m.str() + ")";
            } else if constexpr (std::is_same_v<T, DegreeAtom>) {
                return atom.d.str() + " >= " + std::to_string(atom.min);
            } else if constexpr (std::is_same_v<T, SupportAtom>) {
                std::string s = "exists(";
                for (std::size_t i = 0; i < atom.selectors.size(); ++i) {
                    if (i) s += ",";
                    s += atom.selectors[i].str();
                }
                return s + ")" + at(atom.offset);
            } else if constexpr (std::is_same_v<T, NonNegAtom>) {
                return "nonneg" + at(atom.offset);
            } else if constexpr (std::is_same_v<T, RuleAtom>) {
                return "rule{" + rule_str(atom.rule) + "}" + at(atom.offset);
            } else {
                static_assert(std::is_same_v<T, MemberAtom>);
                std::string s = "in(" + atom.target->display();
                if (!atom.m.is_unit()) s += ", " + atom.m.str();
                return s + ")";
            }
        },
        a);
}

// ---------------------------------------------------------------------------
// Facts

bool Facts::all_nonneg_except(const DegreeFunctional* except) const
{
    if (!default_lb || *default_lb < 0) return false;
    for (const auto& [k, v] : lb) {
        if (v >= 0) continue;
        if (!except || !except->matches(k)) return false;
    }
    return true;
}

namespace {

// One near-nonnegativity source: u >= 0 everywhere except listed overrides.
struct Profile {
    std::map<VarKey, Exp> over;
};

Profile profile_from_offset(const ExponentVector& off)
{
    Profile p;
    for (const auto& [k, e] : off.entries()) p.over[k] = -e;
    return p;
}

// Hypotheses after expansion, plus the rule instances they expose:
// (rule, off) meaning the rule holds at u * off.
struct Expanded {
    std::vector<Atom> atoms;
    std::vector<std::string> strs;
    std::vector<ExponentVector> shifts;
    std::vector<std::pair<const MonoidRule*, ExponentVector>> instances;
};

constexpr int kMaxProbes = 6;

Bounds probe_bounds(const Bounds& b)
{
    Bounds pb = b;
    pb.degree = std::min<long long>(b.degree, 3);
    return pb;
}

void expand_atom(const MonoidSpec& spec, const Atom& a, Expanded& out, int depth)
{
    out.atoms.push_back(a);
    out.strs.push_back(atom_str(a));
    if (const auto* sh = std::get_if<ShiftAtom>(&a)) {
        out.shifts.push_back(sh->m);
        for (const auto& r : spec.rules()) out.instances.emplace_back(&r, sh->m);
    } else if (const auto* ra = std::get_if<RuleAtom>(&a)) {
        out.instances.emplace_back(&ra->rule, ra->offset);
    } else if (const auto* ma = std::get_if<MemberAtom>(&a); ma && depth > 0) {
        auto dnf = ma->target->dnf_atoms();
        if (dnf && dnf->size() == 1) {
            for (const auto& inner : (*dnf)[0])
                expand_atom(spec, atom_shifted(inner, ma->m), out, depth - 1);
        } else if (const auto* col = std::get_if<FracIdeal::ColonNode>(&ma->target->node());
                   col && col->num->is_ring()) {
            // u*m in (R : D): every probe p of D gives u*(m*p) in S.
            Bounds pb = probe_bounds(Bounds{});
            auto probes = col->den->sample_members(pb);
            int n = 0;
            for (const auto& p : probes) {
                if (++n > kMaxProbes) break;
                expand_atom(spec, ShiftAtom{ma->m.mul(p)}, out, depth - 1);
            }
        }
    }
}

Expanded expand(const EntailCtx& ctx)
{
    Expanded out;
    for (const auto& a : ctx.hyps) expand_atom(*ctx.spec, a, out, 3);
    Bounds pb = probe_bounds(ctx.bounds);
    for (const auto& den : ctx.colon_dens) {
        auto probes = den->sample_members(pb);
        int n = 0;
        for (const auto& p : probes) {
            if (++n > kMaxProbes) break;
            expand_atom(*ctx.spec, ShiftAtom{p}, out, 2);
        }
    }
    return out;
}

Facts saturate_expanded(const Expanded& H)
{
    Facts f;

    // Phase 1: lower-bound profiles from nonnegativity sources.
    std::vector<Profile> profiles;
    for (const auto& a : H.atoms)
        if (const auto* nn = std::get_if<NonNegAtom>(&a))
            profiles.push_back(profile_from_offset(nn->offset));
    for (const auto& [rule, off] : H.instances)
        if (std::holds_alternative<NonNegRule>(*rule))
            profiles.push_back(profile_from_offset(off));
    if (!profiles.empty()) {
        f.default_lb = 0;
        std::map<VarKey, Exp> merged; // max over profiles, default 0 per profile
        for (const auto& p : profiles)
            for (const auto& [k, v] : p.over)
                if (!merged.count(k)) {
                    Exp best = v;
                    for (const auto& q : profiles) {
                        auto it = q.over.find(k);
                        best = std::max(best, it == q.over.end() ? 0 : it->second);
                    }
                    merged[k] = best;
                }
        for (auto& [k, v] : merged)
            if (v != 0) f.lb[k] = v;
    }

    // Phase 2: degree lower bounds.
    for (const auto& a : H.atoms)
        if (const auto* da = std::get_if<DegreeAtom>(&a))
            f.degree_lbs.emplace_back(da->d, da->min);
    for (const auto& [rule, off] : H.instances) {
        const auto* lin = std::get_if<LinearDegreeRule>(rule);
        if (!lin) continue;
        Exp doff = lin->lhs.eval(off);
        f.degree_lbs.emplace_back(lin->lhs, -doff);
        // Per-index strengthening: deg(u) >= u[fam,n] + off[fam,n] - deg(off).
        auto consider = [&](const VarKey& k) {
            if (k.scalar() || k.name != lin->family) return;
            auto klb = f.key_lb(k);
            if (!klb) return;
            f.degree_lbs.emplace_back(lin->lhs, *klb + off.get(k) - doff);
        };
        for (const auto& [k, e] : off.entries()) {
            (void)e;
            consider(k);
        }
        for (const auto& [k, v] : f.lb) {
            (void)v;
            if (!off.get(k)) consider(k);
        }
    }

    // Phase 3: occurrence facts.
    for (const auto& a : H.atoms) {
        const auto* sa = std::get_if<SupportAtom>(&a);
        if (!sa) continue;
        bool clean = true;
        for (const auto& [k, e] : sa->offset.entries()) {
            if (e <= 0) continue;
            for (const auto& sel : sa->selectors)
                if (sel.matches(k)) clean = false;
        }
        if (clean) f.occurs.push_back(sa->selectors);
    }
    for (const auto& [rule, off] : H.instances) {
        const auto* sr = std::get_if<SupportRule>(rule);
        if (!sr) continue;
        // Triggers certain to fire in u * off.
        auto try_trigger = [&](const VarKey& k) {
            if (!sr->trigger.matches(k)) return;
            auto klb = f.key_lb(k);
            if (!klb || *klb + off.get(k) < 1) return;
            auto wits = sr->witness_selectors(k.index);
            for (const auto& [j, e] : off.entries()) {
                if (e <= 0) continue;
                for (const auto& w : wits)
                    if (w.matches(j)) return; // offset could supply the witness
            }
            f.occurs.push_back(wits);
        };
        for (const auto& [k, e] : off.entries()) {
            (void)e;
            try_trigger(k);
        }
        for (const auto& [k, v] : f.lb) {
            (void)v;
            if (!off.get(k)) try_trigger(k);
        }
    }
    return f;
}

// ---------------------------------------------------------------------------
// Goal checks

// Every key matched by d (outside what `covered` accounts for) has a known
// nonnegative lower bound.
bool rest_nonneg(const Facts& f, const DegreeFunctional& d, const DegreeFunctional* covered)
{
    if (!f.default_lb || *f.default_lb < 0) return false;
    for (const auto& [k, v] : f.lb) {
        if (v >= 0 || !d.matches(k)) continue;
        if (!covered || !covered->matches(k)) return false;
    }
    return true;
}

bool entail_nonneg(const Facts& f, const ExponentVector& off)
{
    if (!f.default_lb || *f.default_lb < 0) return false;
    for (const auto& [k, e] : off.entries())
        if (!f.key_lb(k) || *f.key_lb(k) + e < 0) return false;
    for (const auto& [k, v] : f.lb)
        if (v + off.get(k) < 0) return false;
    return true;
}

} // namespace

bool entail_degree(const Facts& f, const DegreeAtom& g)
{
    // Finite matched key set: sum the per-key bounds.
    bool finite = true;
    for (const auto& sel : g.d.selectors)
        if (sel.kind != Selector::Kind::Scalar && sel.kind != Selector::Kind::IndexedOne)
            finite = false;
    if (finite) {
        Exp sum = 0;
        bool ok = true;
        for (const auto& sel : g.d.selectors) {
            VarKey k = sel.kind == Selector::Kind::Scalar ? VarKey{sel.name, 0}
                                                          : VarKey{sel.name, sel.index};
            auto klb = f.key_lb(k);
            if (!klb) ok = false;
            else sum += *klb;
        }
        if (ok && sum >= g.min) return true;
    }
    // A stronger recorded degree bound plus nonnegative remainder.
    for (const auto& [d2, c2] : f.degree_lbs)
        if (c2 >= g.min && selectors_subset(d2.selectors, g.d.selectors) && rest_nonneg(f, g.d, &d2))
            return true;
    // An occurrence inside the functional contributes 1.
    if (g.min <= 1)
        for (const auto& V : f.occurs)
            if (selectors_subset(V, g.d.selectors) && rest_nonneg(f, g.d, nullptr)) return true;
    if (g.min <= 0 && rest_nonneg(f, g.d, nullptr)) return true;
    return false;
}

bool entail_support(const Facts& f, const SupportAtom& g)
{
    for (const auto& V : f.occurs) {
        if (!selectors_subset(V, g.selectors)) continue;
        bool safe = true;
        for (const auto& [k, e] : g.offset.entries()) {
            if (e >= 0) continue;
            for (const auto& sel : V)
                if (sel.matches(k)) safe = false;
        }
        if (safe) return true;
    }
    auto per_key = [&](const VarKey& k) {
        bool matched = false;
        for (const auto& sel : g.selectors)
            if (sel.matches(k)) matched = true;
        if (!matched) return false;
        auto klb = f.key_lb(k);
        return klb && *klb + g.offset.get(k) >= 1;
    };
    for (const auto& [k, e] : g.offset.entries()) {
        (void)e;
        if (per_key(k)) return true;
    }
    for (const auto& [k, v] : f.lb) {
        (void)v;
        if (per_key(k)) return true;
    }
    return false;
}

namespace {

// Knowing u * mb in S, does u * mg = (u * mb) * s stay in S?
bool survives(const MonoidSpec& spec, const Facts& f, const ExponentVector& s,
              const ExponentVector& mg)
{
    for (const auto& rule : spec.rules()) {
        bool ok = std::visit(
            [&](const auto& r) -> bool {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, NonNegRule>) {
                    for (const auto& [k, e] : s.entries()) {
                        if (e >= 0) continue;
                        auto klb = f.key_lb(k);
                        if (!klb || *klb + mg.get(k) < 0) return false;
                    }
                    return true;
                } else if constexpr (std::is_same_v<T, LinearDegreeRule>) {
                    Exp mx = 0;
                    for (const auto& [k, e] : s.entries())
                        if (!k.scalar() && k.name == r.family) mx = std::max(mx, e);
                    return r.lhs.eval(s) >= mx && r.lhs.eval(s) >= 0;
                } else if constexpr (std::is_same_v<T, SupportRule>) {
                    // Witnesses already present must not be cancelled.
                    std::vector<Selector> cover;
                    for (const auto& w : r.witnesses)
                        cover.push_back(w.kind == SupportRule::Witness::Kind::Scalar
                                            ? Selector::scalar(w.name)
                                            : Selector::family_all(w.name));
                    for (const auto& [k, e] : s.entries()) {
                        if (e >= 0) continue;
                        for (const auto& sel : cover)
                            if (sel.matches(k)) return false;
                    }
                    // Triggers newly introduced by s need a witness.
                    for (const auto& [k, e] : s.entries()) {
                        if (e < 1 || !r.trigger.matches(k)) continue;
                        auto wits = r.witness_selectors(k.index);
                        bool have = false;
                        if (spec.has_nonneg_rule()) {
                            for (const auto& [j, ej] : s.entries()) {
                                if (ej <= 0) continue;
                                for (const auto& w : wits)
                                    if (w.matches(j)) have = true;
                            }
                        }
                        if (!have) {
                            for (const auto& V : f.occurs) {
                                if (!selectors_subset(V, wits)) continue;
                                bool safe = true;
                                for (const auto& [j, ej] : mg.entries()) {
                                    if (ej >= 0) continue;
                                    for (const auto& sel : V)
                                        if (sel.matches(j)) safe = false;
                                }
                                if (safe) have = true;
                            }
                        }
                        if (!have) {
                            auto witness_at = [&](const VarKey& j) {
                                bool m = false;
                                for (const auto& w : wits)
                                    if (w.matches(j)) m = true;
                                if (!m) return false;
                                auto jlb = f.key_lb(j);
                                return jlb && *jlb + mg.get(j) >= 1;
                            };
                            for (const auto& [j, v] : f.lb) {
                                (void)v;
                                if (witness_at(j)) have = true;
                            }
                            for (const auto& [j, ej] : mg.entries()) {
                                (void)ej;
                                if (witness_at(j)) have = true;
                            }
                        }
                        if (!have) return false;
                    }
                    return true;
                } else {
                    return false; // ad-hoc rules block symbolic survival
                }
            },
            rule);
        if (!ok) return false;
    }
    return true;
}

long long vec_max_index(const ExponentVector& v)
{
    return v.max_index_any();
}

long long atom_max_index(const Atom& a);

long long node_max_index(const FracIdealPtr& I)
{
    long long mx = 0;
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, FracIdeal::FinGenNode>) {
                for (const auto& g : n.gens) mx = std::max(mx, vec_max_index(g));
            } else if constexpr (std::is_same_v<T, FracIdeal::ConstraintNode>) {
                for (const auto& a : n.atoms) mx = std::max(mx, atom_max_index(a));
            } else if constexpr (std::is_same_v<T, FracIdeal::ColonNode>) {
                mx = std::max(node_max_index(n.num), node_max_index(n.den));
            } else {
                for (const auto& p : n.parts) mx = std::max(mx, node_max_index(p));
            }
        },
        I->node());
    return mx;
}

long long selectors_max_index(const std::vector<Selector>& sels)
{
    long long mx = 0;
    for (const auto& s : sels)
        if (s.kind == Selector::Kind::IndexedOne || s.kind == Selector::Kind::FamilyUpTo)
            mx = std::max(mx, s.index);
    return mx;
}

long long atom_max_index(const Atom& a)
{
    return std::visit(
        [&](const auto& atom) -> long long {
            using T = std::decay_t<decltype(atom)>;
            if constexpr (std::is_same_v<T, ShiftAtom>) {
                return vec_max_index(atom.m);
            } else if constexpr (std::is_same_v<T, DegreeAtom>) {
                return selectors_max_index(atom.d.selectors);
            } else if constexpr (std::is_same_v<T, SupportAtom>) {
                return std::max(selectors_max_index(atom.selectors), vec_max_index(atom.offset));
            } else if constexpr (std::is_same_v<T, NonNegAtom>) {
                return vec_max_index(atom.offset);
            } else if constexpr (std::is_same_v<T, RuleAtom>) {
                return vec_max_index(atom.offset);
            } else {
                static_assert(std::is_same_v<T, MemberAtom>);
                return std::max(vec_max_index(atom.m), node_max_index(atom.target));
            }
        },
        a);
}

// Largest concrete family index distinguished by the monoid's rules
// themselves (e.g. a degree functional pinned to one index).
long long spec_rule_max_index(const MonoidSpec& spec)
{
    long long mx = 0;
    for (const auto& rule : spec.rules())
        std::visit(
            [&](const auto& r) {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, LinearDegreeRule>) {
                    mx = std::max(mx, selectors_max_index(r.lhs.selectors));
                } else if constexpr (std::is_same_v<T, SupportRule>) {
                    mx = std::max(mx, selectors_max_index({r.trigger}));
                }
            },
            rule);
    return mx;
}

// Every concrete family index visible to the argument; probe indices beyond
// it are "fresh" and interchangeable under the shipped rule classes.
long long context_tau(const EntailCtx& ctx, const Expanded& H, const FracIdealPtr& den)
{
    long long tau = std::max<long long>(ctx.bounds.window, node_max_index(den));
    tau = std::max(tau, spec_rule_max_index(*ctx.spec));
    for (const auto& a : H.atoms) tau = std::max(tau, atom_max_index(a));
    return tau;
}

// Uniform support-rule conclusion from colon knowledge: if some member p of D
// avoids the rule's witness range for every trigger index, then "u*p in S"
// transfers the witness obligation back onto u itself.  Probes whose only
// collisions are movable indexed entries are re-indexed past every concrete
// index in sight and re-checked for membership; shipped rules evaluate
// identically at all sufficiently fresh indices, so one check covers them all.
bool entail_rule_via_colon(const EntailCtx& ctx, const Expanded& H, const SupportRule& r)
{
    const MonoidSpec& spec = *ctx.spec;
    if (!spec.rules_all_shipped()) return false;
    for (const auto& den : ctx.colon_dens) {
        long long tau = context_tau(ctx, H, den);

        std::string trig_family = r.trigger.kind == Selector::Kind::FamilyAll ? r.trigger.name : "";
        std::vector<std::string> movable; // FamilyUpToTrigger witness families
        bool feasible = true;
        for (const auto& w : r.witnesses)
            if (w.kind == SupportRule::Witness::Kind::FamilyUpToTrigger) {
                if (w.name == trig_family) feasible = false;
                movable.push_back(w.name);
            }
        if (!feasible) continue;

        Bounds pb = probe_bounds(ctx.bounds);
        auto probes = den->sample_members(pb);
        int n = 0;
        for (const auto& p : probes) {
            if (++n > kMaxProbes) break;
            bool ok = true;
            bool needs_move = false;
            for (const auto& [k, e] : p.entries()) {
                if (e < 0 && r.trigger.matches(k)) ok = false;
                if (e <= 0) continue;
                for (const auto& w : r.witnesses) {
                    bool hits = w.kind == SupportRule::Witness::Kind::Scalar
                                    ? (k.scalar() && k.name == w.name)
                                    : (!k.scalar() && k.name == w.name);
                    if (!hits) continue;
                    if (w.kind == SupportRule::Witness::Kind::FamilyUpToTrigger)
                        needs_move = true;
                    else
                        ok = false;
                }
            }
            if (!ok) continue;
            if (!needs_move) return true;
            // Re-index movable-family entries beyond tau and every index of p.
            long long base = std::max(tau, p.max_index_any());
            std::vector<ExponentVector::Entry> moved;
            long long next = base + 1;
            for (const auto& [k, e] : p.entries()) {
                bool mv = e > 0 && !k.scalar() &&
                          std::find(movable.begin(), movable.end(), k.name) != movable.end();
                moved.emplace_back(mv ? VarKey{k.name, next++} : k, e);
            }
            ExponentVector q{std::move(moved)};
            if (den->membership(q, ctx.bounds).value == Tri::True) return true;
        }
    }
    return false;
}

// Uniform linear-rule conclusion from colon knowledge: a member p of D whose
// lhs-degree is fully charged to a single movable index j (deg_lhs(p) <=
// p[fam,j]) forces deg_lhs(u) >= u[fam,j].  Verifying the re-indexed probe at
// every concrete index and at one fresh index covers all indices.
bool entail_linear_via_colon(const EntailCtx& ctx, const Expanded& H, const LinearDegreeRule& r)
{
    const MonoidSpec& spec = *ctx.spec;
    if (!spec.rules_all_shipped()) return false;
    // Re-indexing must not change the probe's lhs-degree.
    if (selectors_max_index(r.lhs.selectors) != 0) return false;
    for (const auto& den : ctx.colon_dens) {
        long long tau = context_tau(ctx, H, den);
        Bounds pb = probe_bounds(ctx.bounds);
        auto probes = den->sample_members(pb);
        int n = 0;
        for (const auto& p : probes) {
            if (++n > kMaxProbes) break;
            // Exactly one positive entry of the rule's family, charging it.
            std::optional<VarKey> charge;
            bool ok = true;
            for (const auto& [k, e] : p.entries()) {
                if (k.scalar() || k.name != r.family) continue;
                if (e < 0 || charge) ok = false;
                else charge = k;
            }
            if (!ok || !charge) continue;
            if (r.lhs.eval(p) > p.get(*charge)) continue;
            auto reindexed = [&](long long idx) {
                std::vector<ExponentVector::Entry> es;
                for (const auto& [k, e] : p.entries())
                    es.emplace_back(k == *charge ? VarKey{k.name, idx} : k, e);
                return ExponentVector{std::move(es)};
            };
            bool all = true;
            for (long long idx = 1; idx <= tau + 1 && all; ++idx) {
                ExponentVector q = reindexed(idx);
                if (q.get(VarKey{r.family, idx}) != p.get(*charge)) all = false; // collision
                else if (den->membership(q, ctx.bounds).value != Tri::True) all = false;
            }
            if (all) return true;
        }
    }
    return false;
}

// A support rule at u * off follows from the same rule at u * m (a shift
// hypothesis) when m dominates off on trigger keys and off dominates m on
// witness keys: any trigger firing in u * off also fires in u * m, and the
// witness found there cannot have been supplied by m.
bool support_rule_transfers(const SupportRule& r, const ExponentVector& m,
                            const ExponentVector& off)
{
    auto trigger_key = [&](const VarKey& k) { return r.trigger.matches(k); };
    auto witness_key = [&](const VarKey& k) {
        for (const auto& w : r.witnesses) {
            bool hit = w.kind == SupportRule::Witness::Kind::Scalar
                           ? (k.scalar() && k.name == w.name)
                           : (!k.scalar() && k.name == w.name);
            if (hit) return true;
        }
        return false;
    };
    auto ok_at = [&](const VarKey& k) {
        if (trigger_key(k) && m.get(k) < off.get(k)) return false;
        if (witness_key(k) && m.get(k) > off.get(k)) return false;
        return true;
    };
    for (const auto& [k, e] : m.entries()) {
        (void)e;
        if (!ok_at(k)) return false;
    }
    for (const auto& [k, e] : off.entries()) {
        (void)e;
        if (!ok_at(k)) return false;
    }
    return true;
}

// Does the hypothesis context force rule `r` to hold at u * off?
bool entail_rule(const EntailCtx& ctx, const Expanded& H, const Facts& f, const MonoidRule& rule,
                 const ExponentVector& off)
{
    bool in_spec = false;
    for (const auto& r : ctx.spec->rules())
        if (rule_str(r) == rule_str(rule)) in_spec = true;
    if (in_spec)
        for (const auto& m : H.shifts)
            if (m == off) return true; // u * off in S satisfies every spec rule

    return std::visit(
        [&](const auto& r) -> bool {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, NonNegRule>) {
                return entail_nonneg(f, off);
            } else if constexpr (std::is_same_v<T, LinearDegreeRule>) {
                // deg(u*off) >= (u*off)[fam,n] for all n, and >= 0, from the
                // uniform relation deg(u) >= u[fam,n] plus a standalone-valid
                // offset and deg(u) >= 0.
                Exp mx = 0;
                for (const auto& [k, e] : off.entries())
                    if (!k.scalar() && k.name == r.family) mx = std::max(mx, e);
                if (r.lhs.eval(off) < mx || r.lhs.eval(off) < 0) return false;
                if (!entail_degree(f, DegreeAtom{r.lhs, 0})) return false;
                return entail_linear_via_colon(ctx, H, r);
            } else if constexpr (std::is_same_v<T, SupportRule>) {
                long long n0 = r.trigger.kind == Selector::Kind::FamilyAll ? 1 : 0;
                if (entail_support(f, SupportAtom{r.witness_selectors(n0), off})) return true;
                for (const auto& m : H.shifts)
                    if (support_rule_transfers(r, m, off)) return true;
                return off.is_unit() && entail_rule_via_colon(ctx, H, r);
            } else {
                return false;
            }
        },
        rule);
}

} // namespace

Facts saturate(const EntailCtx& ctx)
{
    return saturate_expanded(expand(ctx));
}

bool entails(const EntailCtx& ctx, const Atom& goal)
{
    Expanded H = expand(ctx);
    std::string gs = atom_str(goal);
    for (const auto& hs : H.strs)
        if (hs == gs) return true;
    Facts f = saturate_expanded(H);

    return std::visit(
        [&](const auto& g) -> bool {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, NonNegAtom>) {
                return entail_nonneg(f, g.offset);
            } else if constexpr (std::is_same_v<T, DegreeAtom>) {
                return entail_degree(f, g);
            } else if constexpr (std::is_same_v<T, SupportAtom>) {
                return entail_support(f, g);
            } else if constexpr (std::is_same_v<T, ShiftAtom>) {
                for (const auto& m : H.shifts)
                    if (survives(*ctx.spec, f, g.m.div(m), g.m)) return true;
                // Fallback: membership in S is the conjunction of all rules.
                if (ctx.spec->rules_all_shipped()) {
                    bool all = true;
                    for (const auto& r : ctx.spec->rules())
                        if (!entail_rule(ctx, H, f, r, g.m)) all = false;
                    if (all) return true;
                }
                return false;
            } else if constexpr (std::is_same_v<T, RuleAtom>) {
                return entail_rule(ctx, H, f, g.rule, g.offset);
            } else {
                static_assert(std::is_same_v<T, MemberAtom>);
                if (auto dnf = g.target->dnf_atoms()) {
                    for (const auto& branch : *dnf) {
                        bool all = true;
                        for (const auto& a : branch)
                            if (!entails(ctx, atom_shifted(a, g.m))) all = false;
                        if (all) return true;
                    }
                    return false;
                }
                const auto* col = std::get_if<FracIdeal::ColonNode>(&g.target->node());
                if (!col || !col->num->is_ring()) return false;
                auto dnf = col->den->dnf_atoms();
                if (!dnf) return false;
                EntailCtx shifted{ctx.spec, {}, {}, ctx.bounds};
                ExponentVector mi = g.m.inverse();
                for (const auto& a : ctx.hyps) shifted.hyps.push_back(atom_shifted(a, mi));
                for (const auto& branch : *dnf) {
                    EntailCtx side{ctx.spec, branch, {}, ctx.bounds};
                    if (!product_in_monoid(shifted, side)) return false;
                }
                return true;
            }
        },
        goal);
}

bool product_in_monoid(const EntailCtx& ctxA, const EntailCtx& ctxB)
{
    const MonoidSpec& spec = *ctxA.spec;
    Expanded HA = expand(ctxA);
    Expanded HB = expand(ctxB);
    Facts fa = saturate_expanded(HA);
    Facts fb = saturate_expanded(HB);

    auto side_sat = [&](const Expanded& H, const MonoidRule& r) {
        for (const auto& m : H.shifts)
            if (m.is_unit()) return true;
        std::string rs = rule_str(r);
        for (const auto& a : H.atoms)
            if (const auto* ra = std::get_if<RuleAtom>(&a))
                if (ra->offset.is_unit() && rule_str(ra->rule) == rs) return true;
        return false;
    };
    auto combined_nonneg = [&]() {
        if (!fa.default_lb || !fb.default_lb || *fa.default_lb + *fb.default_lb < 0) return false;
        auto check = [&](const VarKey& k) {
            auto la = fa.key_lb(k), lb2 = fb.key_lb(k);
            return la && lb2 && *la + *lb2 >= 0;
        };
        for (const auto& [k, v] : fa.lb) {
            (void)v;
            if (!check(k)) return false;
        }
        for (const auto& [k, v] : fb.lb) {
            (void)v;
            if (!check(k)) return false;
        }
        return true;
    };

    for (const auto& rule : spec.rules()) {
        bool ok = std::visit(
            [&](const auto& r) -> bool {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, NonNegRule>) {
                    return combined_nonneg();
                } else if constexpr (std::is_same_v<T, LinearDegreeRule>) {
                    return side_sat(HA, rule) && side_sat(HB, rule);
                } else if constexpr (std::is_same_v<T, SupportRule>) {
                    if (side_sat(HA, rule) && side_sat(HB, rule) &&
                        fa.all_nonneg_except(nullptr) && fb.all_nonneg_except(nullptr))
                        return true;
                    // One side carries an unconditional witness that the other
                    // side cannot cancel.
                    long long n0 = r.trigger.kind == Selector::Kind::FamilyAll ? 1 : 0;
                    auto wits = r.witness_selectors(n0);
                    auto unconditional = [&](const Facts& fown, const Facts& fother) {
                        if (!fother.all_nonneg_except(nullptr)) return false;
                        for (const auto& V : fown.occurs)
                            if (selectors_subset(V, wits)) return true;
                        return false;
                    };
                    return unconditional(fa, fb) || unconditional(fb, fa);
                } else {
                    return false;
                }
            },
            rule);
        if (!ok) return false;
    }
    return true;
}

bool index_generic(const FracIdealPtr& I)
{
    return node_max_index(I) == 0;
}

} // namespace staride
