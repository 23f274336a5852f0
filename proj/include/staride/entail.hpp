#pragma once

#include <map>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "staride/monoid.hpp"

namespace staride {

class FracIdeal;
using FracIdealPtr = std::shared_ptr<const FracIdeal>;

/// Atoms of the constraint-ideal language.  A constraint ideal is the set of
/// Laurent monomials u satisfying a conjunction of atoms; every atom has an
/// exact pointwise evaluation, and the entailment engine below proves
/// implications between atom sets for whole-ideal symbolic arguments.

/// u * m lies in S.
struct ShiftAtom {
    ExponentVector m;
};

/// deg_d(u) >= min.
struct DegreeAtom {
    DegreeFunctional d;
    Exp min = 1;
};

/// Some key matched by a selector occurs in u * offset (exponent > 0).
struct SupportAtom {
    std::vector<Selector> selectors;
    ExponentVector offset;
};

/// u * offset has only nonnegative exponents.
struct NonNegAtom {
    ExponentVector offset;
};

/// A single monoid rule evaluated at u * offset (shipped rule kinds only).
struct RuleAtom {
    MonoidRule rule;
    ExponentVector offset;
};

/// u * m lies in another ideal.
struct MemberAtom {
    ExponentVector m;
    FracIdealPtr target;
};

using Atom = std::variant<ShiftAtom, DegreeAtom, SupportAtom, NonNegAtom, RuleAtom, MemberAtom>;

/// Exact pointwise evaluation.  Membership through a colon-form target can be
/// undecided within bounds, see FracIdeal::membership; this returns the
/// three-valued result of that evaluation.
enum class Tri { False, True, Unknown };

Tri atom_eval(const MonoidSpec& spec, const Atom& a, const ExponentVector& u, const Bounds& b);

/// The atom describing `u * g` satisfies `a`, as a condition on u.
Atom atom_shifted(const Atom& a, const ExponentVector& g);

/// Canonical display; also used for syntactic atom identity.
std::string atom_str(const Atom& a);

/// Facts derivable about every u satisfying a hypothesis atom set.
struct Facts {
    /// Lower bound for every exponent not individually mentioned (set when
    /// some hypothesis forces near-nonnegativity); per-key overrides in `lb`.
    std::optional<Exp> default_lb;
    std::map<VarKey, Exp> lb;

    /// deg_d(u) >= c facts.
    std::vector<std::pair<DegreeFunctional, Exp>> degree_lbs;

    /// "some key matched by one of these selectors has exponent >= 1" facts.
    std::vector<std::vector<Selector>> occurs;

    std::optional<Exp> key_lb(const VarKey& k) const
    {
        auto it = lb.find(k);
        if (it != lb.end()) return it->second;
        return default_lb;
    }
    /// True when every exponent of u is known nonnegative except possibly
    /// keys matched by `except` (may be null).
    bool all_nonneg_except(const DegreeFunctional* except) const;
};

/// Hypotheses: every atom holds for the (universally quantified) u.
/// `colon_dens` carries colon-shaped knowledge: for each listed ideal D,
/// u * p lies in S for every member p of D.  The engine instantiates finitely
/// many probe members and, for index-generic D, applies the fresh-probe
/// argument to conclude support-rule goals uniformly in the trigger index.
struct EntailCtx {
    MonoidSpecPtr spec;
    std::vector<Atom> hyps;
    std::vector<FracIdealPtr> colon_dens;
    Bounds bounds;
};

/// True when the ideal's description mentions no concrete family index, so
/// its member set is invariant under index permutations of every family.
bool index_generic(const FracIdealPtr& I);

/// Saturates derived facts from the hypotheses (rule instances exposed by
/// shift atoms, degree/support facts, lower-bound profiles).
Facts saturate(const EntailCtx& ctx);

/// Fact-level goal checks on an already saturated profile.  Sound and
/// incomplete, like `entails`; exposed for stability arguments that combine
/// profiles of two independent variables.
bool entail_degree(const Facts& f, const DegreeAtom& g);
bool entail_support(const Facts& f, const SupportAtom& g);

/// Sound, incomplete implication check: does every u satisfying the
/// hypotheses satisfy `goal`?  False negatives are expected; never lies.
bool entails(const EntailCtx& ctx, const Atom& goal);

/// True when every u satisfying ctxA and every v satisfying ctxB have
/// u * v in S (used for subset checks into colon ideals with numerator R).
bool product_in_monoid(const EntailCtx& ctxA, const EntailCtx& ctxB);

} // namespace staride
