#include "staride/monoid.hpp"

#include <algorithm>
#include <set>

namespace staride {

std::string SupportRule::Witness::str() const
{
    switch (kind) {
    case Kind::Scalar: return name;
    case Kind::FamilyAll: return "exists " + name + "[*]";
    case Kind::FamilyUpToTrigger: return "exists " + name + "[<=n]";
    }
    return "?";
}

std::vector<Selector> SupportRule::witness_selectors(long long n) const
{
    std::vector<Selector> out;
    for (auto& w : witnesses) {
        switch (w.kind) {
        case Witness::Kind::Scalar: out.push_back(Selector::scalar(w.name)); break;
        case Witness::Kind::FamilyAll: out.push_back(Selector::family_all(w.name)); break;
        case Witness::Kind::FamilyUpToTrigger: out.push_back(Selector::family_up_to(w.name, n)); break;
        }
    }
    return out;
}

std::string SupportRule::str() const
{
    std::string s = "support: " + trigger.str() + " => ";
    for (std::size_t i = 0; i < witnesses.size(); ++i) {
        if (i) s += " or ";
        s += witnesses[i].str();
    }
    return s;
}

namespace {

bool occurs_any(const ExponentVector& u, const std::vector<Selector>& sels)
{
    for (auto& [k, e] : u.entries())
        if (e > 0)
            for (auto& s : sels)
                if (s.matches(k)) return true;
    return false;
}

bool support_rule_holds(const SupportRule& r, const ExponentVector& u)
{
    for (auto& [k, e] : u.entries()) {
        if (e <= 0 || !r.trigger.matches(k)) continue;
        long long n = k.scalar() ? 0 : k.index;
        if (!occurs_any(u, r.witness_selectors(n))) return false;
    }
    return true;
}

bool linear_rule_holds(const LinearDegreeRule& r, const ExponentVector& u)
{
    Exp d = r.lhs.eval(u);
    if (d < 0) return false; // some index of the family is unused, demanding d >= 0
    for (auto& [k, e] : u.entries())
        if (!k.scalar() && k.name == r.family && e > d) return false;
    return true;
}

} // namespace

bool rule_holds(const MonoidRule& r, const ExponentVector& u)
{
    return std::visit(
        [&](const auto& rr) -> bool {
            using T = std::decay_t<decltype(rr)>;
            if constexpr (std::is_same_v<T, NonNegRule>) return u.nonnegative();
            else if constexpr (std::is_same_v<T, LinearDegreeRule>) return linear_rule_holds(rr, u);
            else if constexpr (std::is_same_v<T, SupportRule>) return support_rule_holds(rr, u);
            else return rr.pred(u);
        },
        r);
}

std::string rule_str(const MonoidRule& r)
{
    return std::visit([](const auto& rr) { return rr.str(); }, r);
}

MonoidSpec::MonoidSpec(std::vector<std::string> scalars,
                       std::vector<std::string> families,
                       std::vector<MonoidRule> rules)
    : scalars_(std::move(scalars)), families_(std::move(families)), rules_(std::move(rules))
{
    std::set<std::string> seen;
    for (auto& n : scalars_)
        if (!seen.insert(n).second) throw input_error("duplicate variable name: " + n);
    for (auto& n : families_)
        if (!seen.insert(n).second) throw input_error("duplicate variable name: " + n);

    auto check_name = [&](const std::string& n, bool family) {
        if (family ? !has_family(n) : !has_scalar(n))
            throw input_error(std::string(family ? "family" : "scalar") + " not declared: " + n);
    };
    auto check_selector = [&](const Selector& s) {
        switch (s.kind) {
        case Selector::Kind::All: break;
        case Selector::Kind::Scalar: check_name(s.name, false); break;
        default: check_name(s.name, true); break;
        }
    };
    for (auto& r : rules_) {
        if (auto* lin = std::get_if<LinearDegreeRule>(&r)) {
            for (auto& s : lin->lhs.selectors) check_selector(s);
            check_name(lin->family, true);
        } else if (auto* sup = std::get_if<SupportRule>(&r)) {
            if (sup->trigger.kind != Selector::Kind::Scalar && sup->trigger.kind != Selector::Kind::FamilyAll)
                throw input_error("support rule trigger must be a scalar or a whole family");
            check_selector(sup->trigger);
            for (auto& w : sup->witnesses) {
                check_name(w.name, w.kind != SupportRule::Witness::Kind::Scalar);
                if (w.kind == SupportRule::Witness::Kind::FamilyUpToTrigger &&
                    sup->trigger.kind != Selector::Kind::FamilyAll)
                    throw input_error("index-bounded witness requires a family trigger");
            }
            if (sup->witnesses.empty()) throw input_error("support rule needs at least one witness");
        }
        has_nonneg_ = has_nonneg_ || std::holds_alternative<NonNegRule>(r);
        if (std::holds_alternative<AdHocRule>(r)) all_shipped_ = false;
        if (!std::holds_alternative<NonNegRule>(r) && !std::holds_alternative<LinearDegreeRule>(r))
            all_linear_ = false;
    }
    all_linear_ = all_linear_ && all_shipped_;
    if (!member(ExponentVector::unit()))
        throw input_error("monoid rules exclude the unit monomial");
}

bool MonoidSpec::has_scalar(const std::string& n) const
{
    return std::find(scalars_.begin(), scalars_.end(), n) != scalars_.end();
}

bool MonoidSpec::has_family(const std::string& n) const
{
    return std::find(families_.begin(), families_.end(), n) != families_.end();
}

void MonoidSpec::require_in_universe(const ExponentVector& u) const
{
    for (auto& [k, e] : u.entries()) {
        if (k.scalar() ? !has_scalar(k.name) : !has_family(k.name))
            throw input_error("monomial uses undeclared indeterminate: " + k.str());
    }
}

bool MonoidSpec::member(const ExponentVector& u) const
{
    require_in_universe(u);
    for (auto& r : rules_)
        if (!rule_holds(r, u)) return false;
    return true;
}

Verdict MonoidSpec::closure_check(const Bounds& b) const
{
    bool support_present = false;
    for (auto& r : rules_)
        if (std::holds_alternative<SupportRule>(r)) support_present = true;

    if (rules_all_shipped() && (!support_present || has_nonneg_rule())) {
        // Each shipped rule class is closed under sums: nonneg trivially,
        // linear-degree by adding inequalities, support rules because over
        // nonnegative vectors occurrences only accumulate.
        return Verdict::proved(json{{"method", "rule-class closure"},
                                    {"support_rules_use_nonneg", support_present}});
    }

    Bounds small = b;
    small.degree = std::min<Exp>(b.degree, 4);
    std::vector<ExponentVector> sample =
        has_nonneg_rule() ? members_box(small) : laurent_box(small, std::min<Exp>(small.degree, 4));
    std::vector<ExponentVector> members;
    for (auto& u : sample)
        if (member(u)) members.push_back(u);
    for (auto& u : members)
        for (auto& v : members) {
            if (v < u) continue; // unordered pairs once
            if (!member(u.mul(v)))
                return Verdict::refuted(json{{"pair", {u.str(), v.str()}},
                                             {"product", u.mul(v).str()},
                                             {"reason", "product escapes the monoid"}});
        }
    return Verdict::inconclusive(json{{"reason", "no refuting pair within bounds"}}, b);
}

Verdict MonoidSpec::integrally_closed(const Bounds& b) const
{
    if (rules_all_shipped()) {
        // f^n and f have the same support and proportional entries, and every
        // shipped rule is invariant under scaling by n >= 1, so f^n in S
        // forces f in S.
        return Verdict::proved(json{{"method", "support/scale-determined rules"}});
    }
    std::vector<ExponentVector> sample =
        has_nonneg_rule() ? monomial_box(b) : laurent_box(b, std::min<Exp>(b.degree, 4));
    for (auto& f : sample) {
        if (member(f)) continue;
        for (Exp n = 2; n <= 4; ++n) {
            if (member(f.pow(n)))
                return Verdict::refuted(json{{"element", f.str()}, {"power", n},
                                             {"reason", "f^n in S but f not in S"}});
        }
    }
    return Verdict::inconclusive(json{{"reason", "no integrality witness within bounds"}}, b);
}

Verdict MonoidSpec::completely_integrally_closed(const Bounds& b) const
{
    if (rules_all_linear()) {
        // S is the set of lattice points of a homogeneous rational cone; for
        // u * q^m in S for all m, dividing the defining inequalities by m and
        // letting m grow shows q satisfies them, i.e. q in S.
        return Verdict::proved(json{{"method", "homogeneous cone criterion"}});
    }
    // Almost-integrality certificate search.  For shipped rules with nonneg,
    // passing every m <= 1 + total_degree(u) is a sound certificate: by then
    // any negative entry of q has forced a sign violation, supports have
    // stabilized, and any violated linear gap has overtaken deg_lhs(u).
    bool sound = rules_all_shipped() && has_nonneg_rule();
    Bounds small = b;
    small.degree = std::min<Exp>(b.degree, 4);
    for (auto& q : laurent_box(small, std::min<Exp>(small.degree, 3))) {
        if (q.is_unit() || member(q)) continue;
        for (auto& u : members_box(small)) {
            Exp mstar = 1 + u.total_degree();
            bool all_in = true;
            for (Exp m = 1; m <= mstar && all_in; ++m)
                all_in = member(u.mul(q.pow(m)));
            if (!all_in) continue;
            json ev{{"element", q.str()},
                    {"multiplier", u.str()},
                    {"checked_up_to", mstar},
                    {"reason", "q almost integral over S yet not in S"}};
            if (sound) return Verdict::refuted(std::move(ev));
            ev["note"] = "certificate threshold not sound for ad-hoc rules";
            return Verdict::inconclusive(std::move(ev), b);
        }
    }
    return Verdict::inconclusive(json{{"reason", "no almost-integrality certificate within bounds"}}, b);
}

Verdict MonoidSpec::quotient_group_check(const Bounds& b) const
{
    std::vector<VarKey> keys = universe_keys(b);
    Bounds small = b;
    small.degree = std::min<Exp>(b.degree, 4);
    json table = json::array();
    for (auto& k : keys) {
        ExponentVector e = ExponentVector::var(k);
        bool found = false;
        for (auto& base : members_box(small)) {
            if (member(base.mul(e))) {
                table.push_back(json{{"unit", k.str()}, {"a", base.mul(e).str()}, {"b", base.str()}});
                found = true;
                break;
            }
        }
        if (!found)
            return Verdict::inconclusive(
                json{{"reason", "unit vector not expressed as difference of members"},
                     {"unit", k.str()}},
                b);
    }
    return Verdict::proved(json{{"method", "unit vectors as member differences"}, {"witnesses", table}});
}

std::vector<ExponentVector> MonoidSpec::generators_up_to(const Bounds& b) const
{
    const auto& members = members_box(b);
    std::set<ExponentVector> member_set(members.begin(), members.end());

    // u is a generator when no splitting u = a + (u - a) into nonunit members exists.
    auto splits = [&](const ExponentVector& u) {
        std::vector<ExponentVector::Entry> cur;
        // enumerate componentwise divisors a of u recursively
        std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
            if (i == u.entries().size()) {
                ExponentVector a(cur);
                if (a.is_unit() || a == u) return false;
                return member(a) && member(u.div(a));
            }
            for (Exp e = 0; e <= u.entries()[i].second; ++e) {
                if (e != 0) cur.emplace_back(u.entries()[i].first, e);
                bool hit = rec(i + 1);
                if (e != 0) cur.pop_back();
                if (hit) return true;
            }
            return false;
        };
        return rec(0);
    };

    std::vector<ExponentVector> gens;
    for (auto& u : members) {
        if (u.is_unit()) continue;
        if (!splits(u)) gens.push_back(u);
    }
    return gens; // members_box is already (degree, lex)-sorted
}

std::vector<VarKey> MonoidSpec::universe_keys(const Bounds& b) const
{
    std::vector<VarKey> keys;
    for (auto& s : scalars_) keys.push_back(VarKey{s, 0});
    for (auto& f : families_)
        for (long long i = 1; i <= b.window; ++i) keys.push_back(VarKey{f, i});
    std::sort(keys.begin(), keys.end());
    return keys;
}

const std::vector<ExponentVector>& MonoidSpec::members_box(const Bounds& b) const
{
    auto key = std::make_pair(b.degree, b.window);
    auto it = member_cache_.find(key);
    if (it != member_cache_.end()) return it->second;
    std::vector<ExponentVector> out;
    for (auto& u : monomial_box(b))
        if (member(u)) out.push_back(u);
    std::sort(out.begin(), out.end(), DegreeLexLess{});
    return member_cache_.emplace(key, std::move(out)).first->second;
}

std::vector<ExponentVector> MonoidSpec::monomial_box(const Bounds& b) const
{
    std::vector<VarKey> keys = universe_keys(b);
    std::vector<ExponentVector> out;
    std::vector<ExponentVector::Entry> cur;
    std::function<void(std::size_t, Exp)> rec = [&](std::size_t i, Exp left) {
        if (i == keys.size()) {
            out.emplace_back(cur);
            return;
        }
        for (Exp e = 0; e <= left; ++e) {
            if (e != 0) cur.emplace_back(keys[i], e);
            rec(i + 1, left - e);
            if (e != 0) cur.pop_back();
        }
    };
    rec(0, b.degree);
    std::sort(out.begin(), out.end(), DegreeLexLess{});
    return out;
}

std::vector<ExponentVector> MonoidSpec::laurent_box(const Bounds& b, Exp cap) const
{
    std::vector<VarKey> keys = universe_keys(b);
    std::vector<ExponentVector> out;
    std::vector<ExponentVector::Entry> cur;
    std::function<void(std::size_t, Exp)> rec = [&](std::size_t i, Exp left) {
        if (i == keys.size()) {
            out.emplace_back(cur);
            return;
        }
        for (Exp e = -left; e <= left; ++e) {
            if (e != 0) cur.emplace_back(keys[i], e);
            rec(i + 1, left - (e < 0 ? -e : e));
            if (e != 0) cur.pop_back();
        }
    };
    rec(0, cap);
    std::sort(out.begin(), out.end(), [](const ExponentVector& a, const ExponentVector& c) {
        if (a.l1_norm() != c.l1_norm()) return a.l1_norm() < c.l1_norm();
        return a < c;
    });
    return out;
}

std::string MonoidSpec::str() const
{
    std::string s = "monoid{";
    for (std::size_t i = 0; i < scalars_.size(); ++i) s += (i ? "," : "") + scalars_[i];
    if (!families_.empty()) {
        s += ";";
        for (std::size_t i = 0; i < families_.size(); ++i) s += (i ? "," : "") + families_[i];
    }
    for (auto& r : rules_) s += "; " + rule_str(r);
    return s + "}";
}

} // namespace staride
