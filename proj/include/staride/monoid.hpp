#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "staride/exponent.hpp"
#include "staride/verdict.hpp"

namespace staride {

/// Every exponent must be >= 0 (the monomials of the polynomial ring).
struct NonNegRule {
    std::string str() const { return "nonneg"; }
};

/// For every index n of `family`: deg_lhs(u) >= u[family, n].
/// Because the family is infinite this includes deg_lhs(u) >= 0.
struct LinearDegreeRule {
    DegreeFunctional lhs;
    std::string family;
    std::string str() const { return "linear: " + lhs.str() + " >= deg(" + family + "[*])"; }
};

/// If the trigger occurs (exponent > 0) then some witness occurs.
/// A family trigger quantifies over its indices; `FamilyUpToTrigger`
/// witnesses are bounded by the triggering index.
struct SupportRule {
    struct Witness {
        enum class Kind { Scalar, FamilyAll, FamilyUpToTrigger };
        Kind kind = Kind::Scalar;
        std::string name;
        std::string str() const;
    };

    Selector trigger; ///< Kind::Scalar or Kind::FamilyAll
    std::vector<Witness> witnesses;

    /// Witness selectors instantiated at trigger index `n` (0 for scalar trigger).
    std::vector<Selector> witness_selectors(long long n) const;
    std::string str() const;
};

/// Arbitrary user predicate.  Only ever earns bounded verdicts: no symbolic
/// path reasons about it.
struct AdHocRule {
    std::string label;
    std::function<bool(const ExponentVector&)> pred;
    std::string str() const { return "adhoc: " + label; }
};

using MonoidRule = std::variant<NonNegRule, LinearDegreeRule, SupportRule, AdHocRule>;

bool rule_holds(const MonoidRule& r, const ExponentVector& u);
std::string rule_str(const MonoidRule& r);

/// A constraint-defined submonoid S of the Laurent monomials over a universe
/// of scalars and indexed families; the coefficient ring k[S] is determined
/// by its monomial membership, so all ideal arithmetic reduces to operations
/// on subsets of the exponent lattice.
class MonoidSpec {
public:
    MonoidSpec(std::vector<std::string> scalars,
               std::vector<std::string> families,
               std::vector<MonoidRule> rules);

    const std::vector<std::string>& scalars() const { return scalars_; }
    const std::vector<std::string>& families() const { return families_; }
    const std::vector<MonoidRule>& rules() const { return rules_; }

    bool has_scalar(const std::string& n) const;
    bool has_family(const std::string& n) const;
    /// Throws input_error when `u` uses an undeclared name.
    void require_in_universe(const ExponentVector& u) const;

    /// Exact membership test; total over the declared universe.
    bool member(const ExponentVector& u) const;

    bool has_nonneg_rule() const { return has_nonneg_; }
    /// True when every rule belongs to the three shipped classes
    /// (nonneg / linear-degree / support-implication).
    bool rules_all_shipped() const { return all_shipped_; }
    /// True when every rule is nonneg or linear-degree, i.e. S is the set of
    /// lattice points of a homogeneous rational cone.
    bool rules_all_linear() const { return all_linear_; }

    /// Multiplicative closure.  Symbolic proof for shipped rule classes
    /// (support rules additionally require the nonneg rule, occurrences being
    /// monotone only over nonnegative vectors); otherwise bounded pair search.
    Verdict closure_check(const Bounds& b) const;

    /// u in quotient group, u^n in S => u in S.  Symbolic for shipped rule
    /// classes (all are determined by support and scale-invariant data);
    /// otherwise bounded search for (f, n).
    Verdict integrally_closed(const Bounds& b) const;

    /// Symbolic cone criterion when all rules are linear/nonneg.  Otherwise a
    /// bounded search for an almost-integrality certificate (u, q): q not in S
    /// with u * q^m in S for every m <= 1 + total_degree(u).  For shipped rule
    /// classes with nonneg present that threshold is sound, so a hit refutes.
    Verdict completely_integrally_closed(const Bounds& b) const;

    /// Verifies every unit vector of the (window-truncated) universe is a
    /// difference of two members, so the group of quotients is the full
    /// finite-support lattice.
    Verdict quotient_group_check(const Bounds& b) const;

    /// Minimal monoid generators within the box: members that are not sums of
    /// two nonunit members.  Sorted by (total degree, lex).
    std::vector<ExponentVector> generators_up_to(const Bounds& b) const;

    /// All members u >= 0 with total degree <= b.degree and family indices
    /// <= b.window.  Cached per (degree, window); sorted by (degree, lex).
    const std::vector<ExponentVector>& members_box(const Bounds& b) const;

    /// All monomials (not only members) in the same box.
    std::vector<ExponentVector> monomial_box(const Bounds& b) const;

    /// All Laurent vectors with l1-norm <= cap over the windowed universe.
    std::vector<ExponentVector> laurent_box(const Bounds& b, Exp cap) const;

    /// The windowed universe in canonical order.
    std::vector<VarKey> universe_keys(const Bounds& b) const;

    std::string str() const;

private:
    std::vector<std::string> scalars_;
    std::vector<std::string> families_;
    std::vector<MonoidRule> rules_;
    bool has_nonneg_ = false;
    bool all_shipped_ = true;
    bool all_linear_ = true;
    mutable std::map<std::pair<long long, long long>, std::vector<ExponentVector>> member_cache_;
};

using MonoidSpecPtr = std::shared_ptr<const MonoidSpec>;

} // namespace staride
