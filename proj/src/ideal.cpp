#include "staride/ideal.hpp"

#include <algorithm>
#include <set>

namespace staride {

namespace {

const ExponentVector kUnit = ExponentVector::unit();

void require_same_spec(const FracIdealPtr& a, const FracIdealPtr& b)
{
    if (a->spec() != b->spec())
        throw input_error("ideal operands belong to different ambient rings");
}

Bounds probe_bounds(const Bounds& b)
{
    Bounds pb = b;
    pb.degree = std::min<long long>(b.degree, 4);
    return pb;
}

constexpr std::size_t kRefuteProbeCap = 48;

// Minimal elements of a member list: drop u when an already-kept v divides it
// inside S.  Input need not be sorted.
std::vector<ExponentVector> sieve_minimal(const MonoidSpec& spec, std::vector<ExponentVector> v)
{
    std::sort(v.begin(), v.end(), DegreeLexLess{});
    v.erase(std::unique(v.begin(), v.end()), v.end());
    std::vector<ExponentVector> kept;
    for (const auto& u : v) {
        bool redundant = false;
        for (const auto& g : kept)
            if (spec.member(u.div(g))) {
                redundant = true;
                break;
            }
        if (!redundant) kept.push_back(u);
    }
    return kept;
}

} // namespace

FracIdeal::FracIdeal(MonoidSpecPtr spec, Node node, std::string name)
    : spec_(std::move(spec)), node_(std::move(node)), name_(std::move(name))
{
}

FracIdealPtr FracIdeal::fingen(MonoidSpecPtr spec, std::vector<ExponentVector> gens,
                               std::string name)
{
    if (gens.empty()) throw input_error("an ideal needs at least one generator");
    for (const auto& g : gens) spec->require_in_universe(g);
    auto minimal = sieve_minimal(*spec, std::move(gens));
    return FracIdealPtr(
        new FracIdeal(std::move(spec), FinGenNode{std::move(minimal)}, std::move(name)));
}

FracIdealPtr FracIdeal::ring(MonoidSpecPtr spec)
{
    return fingen(std::move(spec), {kUnit}, "R");
}

FracIdealPtr FracIdeal::constraint(MonoidSpecPtr spec, std::vector<Atom> atoms, std::string name)
{
    if (atoms.empty()) throw input_error("a constraint ideal needs at least one atom");

    // Free ambient monoid (nonneg rules only) with shift atoms only: the
    // conjunction u * m_j >= 0 is the principal translate by the corner
    // c_k = max_j(-m_j[k]).
    bool free_spec = true;
    for (const auto& r : spec->rules())
        if (!std::holds_alternative<NonNegRule>(r)) free_spec = false;
    bool all_shift = true;
    for (const auto& a : atoms)
        if (!std::holds_alternative<ShiftAtom>(a)) all_shift = false;
    if (free_spec && all_shift && spec->has_nonneg_rule()) {
        std::set<VarKey> keys;
        for (const auto& a : atoms)
            for (const auto& [k, e] : std::get<ShiftAtom>(a).m.entries()) {
                (void)e;
                keys.insert(k);
            }
        std::vector<ExponentVector::Entry> entries;
        for (const auto& k : keys) {
            Exp c = -std::get<ShiftAtom>(atoms.front()).m.get(k);
            for (const auto& a : atoms) c = std::max(c, -std::get<ShiftAtom>(a).m.get(k));
            if (c != 0) entries.emplace_back(k, c);
        }
        return fingen(std::move(spec), {ExponentVector{std::move(entries)}}, std::move(name));
    }
    return FracIdealPtr(
        new FracIdeal(std::move(spec), ConstraintNode{std::move(atoms)}, std::move(name)));
}

FracIdealPtr FracIdeal::translate(FracIdealPtr base, const ExponentVector& a)
{
    if (a.is_unit()) return base;
    auto spec = base->spec();
    return std::visit(
        [&](const auto& n) -> FracIdealPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, FinGenNode>) {
                std::vector<ExponentVector> gens;
                for (const auto& g : n.gens) gens.push_back(g.mul(a));
                return fingen(spec, std::move(gens), "");
            } else if constexpr (std::is_same_v<T, ConstraintNode>) {
                std::vector<Atom> atoms;
                for (const auto& at : n.atoms) atoms.push_back(atom_shifted(at, a.inverse()));
                return constraint(spec, std::move(atoms), "");
            } else if constexpr (std::is_same_v<T, ColonNode>) {
                // a * (N : D) = (N : a^-1 * D); keeping the numerator intact
                // preserves ring-numerator colon shapes.
                return colon(n.num, translate(n.den, a.inverse()));
            } else {
                std::vector<FracIdealPtr> parts;
                for (const auto& p : n.parts) parts.push_back(translate(p, a));
                return intersect(std::move(parts), "");
            }
        },
        base->node());
}

FracIdealPtr FracIdeal::colon(FracIdealPtr num, FracIdealPtr den)
{
    require_same_spec(num, den);
    auto spec = num->spec();
    if (den->is_ring()) return num;
    if (den->is_fingen()) {
        auto dnf = num->dnf_atoms();
        if (dnf && dnf->size() == 1) {
            std::vector<Atom> atoms;
            for (const auto& g : den->gens())
                for (const auto& a : (*dnf)[0])
                    atoms.push_back(atom_shifted(a, g));
            return constraint(spec, std::move(atoms), "");
        }
        std::vector<FracIdealPtr> parts;
        for (const auto& g : den->gens()) parts.push_back(translate(num, g.inverse()));
        return intersect(std::move(parts), "");
    }
    return FracIdealPtr(
        new FracIdeal(std::move(spec), ColonNode{std::move(num), std::move(den)}, ""));
}

FracIdealPtr FracIdeal::intersect(std::vector<FracIdealPtr> parts, std::string name)
{
    if (parts.empty()) throw input_error("an intersection needs at least one part");
    for (const auto& p : parts) require_same_spec(parts.front(), p);
    auto spec = parts.front()->spec();

    // Flatten, convert principal parts to single shift atoms, and merge all
    // constraint parts into one conjunction (a single union branch helps both
    // exact membership and the symbolic prover).
    std::vector<Atom> merged;
    std::vector<FracIdealPtr> rest;
    auto absorb = [&](auto&& self, const FracIdealPtr& p) -> void {
        if (const auto* in = std::get_if<IntersectNode>(&p->node())) {
            for (const auto& q : in->parts) self(self, q);
        } else if (const auto* fg = std::get_if<FinGenNode>(&p->node());
                   fg && fg->gens.size() == 1) {
            merged.push_back(ShiftAtom{fg->gens.front().inverse()});
        } else if (const auto* c = std::get_if<ConstraintNode>(&p->node())) {
            merged.insert(merged.end(), c->atoms.begin(), c->atoms.end());
        } else {
            rest.push_back(p);
        }
    };
    for (const auto& p : parts) absorb(absorb, p);

    if (!merged.empty()) rest.insert(rest.begin(), constraint(spec, std::move(merged), ""));
    if (rest.size() == 1) return rest.front()->named(std::move(name));
    return FracIdealPtr(new FracIdeal(spec, IntersectNode{std::move(rest)}, std::move(name)));
}

FracIdealPtr FracIdeal::sum(FracIdealPtr a, FracIdealPtr b, std::string name)
{
    require_same_spec(a, b);
    if (!a->is_fingen() || !b->is_fingen())
        throw representation_error("sum requires finitely generated operands");
    std::vector<ExponentVector> gens = a->gens();
    gens.insert(gens.end(), b->gens().begin(), b->gens().end());
    return fingen(a->spec(), std::move(gens), std::move(name));
}

FracIdealPtr FracIdeal::product(FracIdealPtr a, FracIdealPtr b, std::string name)
{
    require_same_spec(a, b);
    if (!a->is_fingen() || !b->is_fingen())
        throw representation_error("product requires finitely generated operands");
    std::vector<ExponentVector> gens;
    for (const auto& g : a->gens())
        for (const auto& h : b->gens()) gens.push_back(g.mul(h));
    return fingen(a->spec(), std::move(gens), std::move(name));
}

FracIdealPtr FracIdeal::named(std::string name) const
{
    if (name == name_) return shared_from_this();
    auto copy = FracIdealPtr(new FracIdeal(spec_, node_, std::move(name)));
    return copy;
}

bool FracIdeal::is_colon_form() const
{
    return std::holds_alternative<ColonNode>(node_);
}

bool FracIdeal::is_ring() const
{
    const auto* fg = std::get_if<FinGenNode>(&node_);
    return fg && fg->gens.size() == 1 && fg->gens.front().is_unit();
}

const std::vector<ExponentVector>& FracIdeal::gens() const
{
    const auto* fg = std::get_if<FinGenNode>(&node_);
    if (!fg) throw representation_error("ideal is not in finitely generated form");
    return fg->gens;
}

std::string FracIdeal::str() const
{
    return std::visit(
        [&](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, FinGenNode>) {
                std::string s = "(";
                for (std::size_t i = 0; i < n.gens.size(); ++i) {
                    if (i) s += ", ";
                    s += n.gens[i].str();
                }
                return s + ")";
            } else if constexpr (std::is_same_v<T, ConstraintNode>) {
                std::string s = "{ ";
                for (std::size_t i = 0; i < n.atoms.size(); ++i) {
                    if (i) s += ", ";
                    s += atom_str(n.atoms[i]);
                }
                return s + " }";
            } else if constexpr (std::is_same_v<T, ColonNode>) {
                return "(" + n.num->display() + " : " + n.den->display() + ")";
            } else {
                std::string s;
                for (std::size_t i = 0; i < n.parts.size(); ++i) {
                    if (i) s += " & ";
                    s += n.parts[i]->display();
                }
                return s;
            }
        },
        node_);
}

std::string FracIdeal::display() const
{
    return name_.empty() ? str() : name_;
}

std::optional<std::vector<std::vector<Atom>>> FracIdeal::dnf_atoms() const
{
    constexpr std::size_t kBranchCap = 16;
    return std::visit(
        [&](const auto& n) -> std::optional<std::vector<std::vector<Atom>>> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, FinGenNode>) {
                std::vector<std::vector<Atom>> out;
                for (const auto& g : n.gens) out.push_back({ShiftAtom{g.inverse()}});
                return out;
            } else if constexpr (std::is_same_v<T, ConstraintNode>) {
                return std::vector<std::vector<Atom>>{n.atoms};
            } else if constexpr (std::is_same_v<T, ColonNode>) {
                return std::nullopt;
            } else {
                std::vector<std::vector<Atom>> acc{{}};
                for (const auto& p : n.parts) {
                    auto sub = p->dnf_atoms();
                    if (!sub) return std::nullopt;
                    std::vector<std::vector<Atom>> next;
                    for (const auto& left : acc)
                        for (const auto& br : *sub) {
                            auto row = left;
                            row.insert(row.end(), br.begin(), br.end());
                            next.push_back(std::move(row));
                            if (next.size() > kBranchCap) return std::nullopt;
                        }
                    acc = std::move(next);
                }
                return acc;
            }
        },
        node_);
}

std::vector<EntailCtx> branch_contexts(const FracIdealPtr& I, const Bounds& b)
{
    if (auto dnf = I->dnf_atoms()) {
        std::vector<EntailCtx> out;
        for (auto& branch : *dnf) out.push_back(EntailCtx{I->spec(), std::move(branch), {}, b});
        return out;
    }
    if (const auto* col = std::get_if<FracIdeal::ColonNode>(&I->node())) {
        EntailCtx ctx{I->spec(), {}, {}, b};
        if (col->num->is_ring()) {
            ctx.colon_dens.push_back(col->den);
        } else {
            auto probes = col->den->sample_members(probe_bounds(b));
            std::size_t n = 0;
            for (const auto& p : probes) {
                if (++n > 6) break;
                ctx.hyps.push_back(MemberAtom{p, col->num});
            }
        }
        return {ctx};
    }
    // Intersection containing a colon part: merge the parts' contexts.
    const auto* in = std::get_if<FracIdeal::IntersectNode>(&I->node());
    std::vector<EntailCtx> acc{EntailCtx{I->spec(), {}, {}, b}};
    for (const auto& p : in->parts) {
        auto sub = branch_contexts(p, b);
        std::vector<EntailCtx> next;
        for (const auto& left : acc)
            for (const auto& right : sub) {
                EntailCtx merged = left;
                merged.hyps.insert(merged.hyps.end(), right.hyps.begin(), right.hyps.end());
                merged.colon_dens.insert(merged.colon_dens.end(), right.colon_dens.begin(),
                                         right.colon_dens.end());
                next.push_back(std::move(merged));
            }
        acc = std::move(next);
    }
    return acc;
}

MemberCheck FracIdeal::membership(const ExponentVector& u, const Bounds& b) const
{
    spec_->require_in_universe(u);
    return std::visit(
        [&](const auto& n) -> MemberCheck {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, FinGenNode>) {
                for (const auto& g : n.gens)
                    if (spec_->member(u.div(g)))
                        return {Tri::True, json{{"generator", g.str()}}};
                return {Tri::False, json{}};
            } else if constexpr (std::is_same_v<T, ConstraintNode>) {
                bool unknown = false;
                for (const auto& a : n.atoms) {
                    Tri t = atom_eval(*spec_, a, u, b);
                    if (t == Tri::False)
                        return {Tri::False, json{{"failed_atom", atom_str(a)}}};
                    if (t == Tri::Unknown) unknown = true;
                }
                return {unknown ? Tri::Unknown : Tri::True, json{}};
            } else if constexpr (std::is_same_v<T, ColonNode>) {
                // Refutation by probing denominator members.
                auto probes = n.den->sample_members(probe_bounds(b));
                std::size_t tried = 0;
                for (const auto& p : probes) {
                    if (++tried > kRefuteProbeCap) break;
                    auto inner = n.num->membership(u.mul(p), b);
                    if (inner.value == Tri::False)
                        return {Tri::False,
                                json{{"multiplier", p.str()},
                                     {"escapes", n.num->display()}}};
                }
                // Symbolic proof: every denominator member carries u into num.
                bool all = true;
                for (const auto& ctx : branch_contexts(n.den, b))
                    if (!entails(ctx, MemberAtom{u, n.num})) all = false;
                if (all) return {Tri::True, json{{"by", "symbolic"}}};
                return {Tri::Unknown, json{{"note", "colon membership undecided within bounds"}}};
            } else {
                bool unknown = false;
                for (const auto& p : n.parts) {
                    auto inner = p->membership(u, b);
                    if (inner.value == Tri::False) return inner;
                    if (inner.value == Tri::Unknown) unknown = true;
                }
                return {unknown ? Tri::Unknown : Tri::True, json{}};
            }
        },
        node_);
}

std::vector<ExponentVector> FracIdeal::sample_members(const Bounds& b) const
{
    auto key = std::make_pair(b.degree, b.window);
    auto it = sample_cache_.find(key);
    if (it != sample_cache_.end()) return it->second;

    std::set<ExponentVector, DegreeLexLess> out;
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, FinGenNode>) {
                for (const auto& g : n.gens)
                    for (const auto& s : spec_->members_box(b)) out.insert(g.mul(s));
            } else if constexpr (std::is_same_v<T, ConstraintNode>) {
                bool integral = false;
                const ExponentVector* anchor = nullptr;
                for (const auto& a : n.atoms) {
                    if (const auto* sh = std::get_if<ShiftAtom>(&a)) {
                        if (!anchor) anchor = &sh->m;
                        if (sh->m.is_unit()) integral = true;
                    } else if (const auto* nn = std::get_if<NonNegAtom>(&a)) {
                        if (nn->offset.is_unit()) integral = true;
                    }
                }
                std::vector<ExponentVector> candidates;
                if (integral) {
                    candidates = spec_->monomial_box(b);
                } else if (anchor) {
                    for (const auto& s : spec_->members_box(b))
                        candidates.push_back(s.div(*anchor));
                } else {
                    candidates = spec_->laurent_box(b, std::min<Exp>(b.degree, 4));
                }
                for (const auto& u : candidates)
                    if (membership(u, b).value == Tri::True) out.insert(u);
            } else if constexpr (std::is_same_v<T, ColonNode>) {
                auto den_samples = n.den->sample_members(b);
                if (den_samples.empty()) return;
                const ExponentVector& anchor = den_samples.front();
                for (const auto& s : n.num->sample_members(b)) {
                    ExponentVector u = s.div(anchor);
                    if (membership(u, b).value == Tri::True) out.insert(u);
                }
            } else {
                for (const auto& u : n.parts.front()->sample_members(b)) {
                    bool all = true;
                    for (std::size_t i = 1; i < n.parts.size() && all; ++i)
                        if (n.parts[i]->membership(u, b).value != Tri::True) all = false;
                    if (all) out.insert(u);
                }
            }
        },
        node_);

    std::vector<ExponentVector> v(out.begin(), out.end());
    sample_cache_.emplace(key, v);
    return v;
}

std::pair<std::vector<ExponentVector>, Exactness> FracIdeal::extract_generators(
    const Bounds& b) const
{
    if (is_fingen()) return {gens(), Exactness::exact_tag()};
    auto kept = sieve_minimal(*spec_, sample_members(b));
    return {std::move(kept), Exactness::up_to(b)};
}

Verdict subset_up_to(const FracIdealPtr& I, const FracIdealPtr& J, const Bounds& b)
{
    require_same_spec(I, J);

    // Finitely generated side: decide generator by generator.
    if (I->is_fingen()) {
        bool unknown = false;
        for (const auto& g : I->gens()) {
            auto mc = J->membership(g, b);
            if (mc.value == Tri::False)
                return Verdict::refuted(
                    json{{"witness", g.str()}, {"note", mc.note}});
            if (mc.value == Tri::Unknown) unknown = true;
        }
        if (!unknown)
            return Verdict::proved(json{{"by", "generator membership"}});
    }

    // Symbolic: every branch of I entails membership in J.
    bool all = true;
    for (const auto& ctx : branch_contexts(I, b))
        if (!entails(ctx, MemberAtom{ExponentVector::unit(), J})) all = false;
    if (all) return Verdict::proved(json{{"by", "symbolic"}});

    // Bounded refutation sweep.
    auto samples = I->sample_members(b);
    for (const auto& u : samples) {
        auto mc = J->membership(u, b);
        if (mc.value == Tri::False)
            return Verdict::refuted(json{{"witness", u.str()}, {"note", mc.note}});
    }
    return Verdict::inconclusive(json{{"checked_members", samples.size()}}, b);
}

Verdict equal_up_to(const FracIdealPtr& I, const FracIdealPtr& J, const Bounds& b)
{
    Verdict fwd = subset_up_to(I, J, b);
    Verdict bwd = subset_up_to(J, I, b);
    Verdict out = fwd.meet(bwd);
    out.evidence = json{{"forward", fwd.to_json()}, {"backward", bwd.to_json()}};
    return out;
}

std::pair<FracIdealPtr, Exactness> colon_dual_generators(const FracIdealPtr& I, const Bounds& b)
{
    auto C = FracIdeal::colon(FracIdeal::ring(I->spec()), I);
    if (C->is_fingen()) return {C, Exactness::exact_tag()};
    auto [gens, ex] = C->extract_generators(b);
    if (gens.empty()) return {C, ex};
    return {FracIdeal::fingen(I->spec(), gens, ""), ex};
}

} // namespace staride
