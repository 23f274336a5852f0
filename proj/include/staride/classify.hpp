#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "staride/star.hpp"

namespace staride {

/// A representation M = x^-1 R ∩ R of a maximal divisorial ideal.  The
/// element x always lies in (R : M) and outside R; both facts are re-checked
/// before the representation is handed out.
struct MaxDivRepresentation {
    ExponentVector x;
    json evidence = json::object();
};

/// Everything needed to refute t-maximality of a candidate P from scratch:
/// a wider ideal W with P ⊆ W, a strictness witness in W ∖ P, and an indexed
/// family whose fresh indices serve as certificate multipliers showing W is
/// a t-ideal on sampled finite subsets.  Properness (1 ∉ W) is re-derived,
/// not stored.
struct NotTMaximalWitness {
    FracIdealPtr wider;
    ExponentVector strict_member;
    std::string cert_family;
};

/// Is I a prime ideal of R?  Symbolic route for constraint ideals cut out by
/// a single degree or support atom over a nonnegative monoid (the complement
/// is closed under products); variable-generated ideals of a free monoid are
/// recognized directly; otherwise a bounded search for u, v outside I with
/// u * v inside I.  A member outside R refutes (primes are integral).
Verdict is_prime(const FracIdealPtr& I, const Bounds& b);

/// The refutation search behind is_prime, exposed so the symbolic route can
/// be cross-checked against brute force: a pair u, v outside I (certainly)
/// whose product lies inside I (certainly), or nullopt.
std::optional<std::pair<ExponentVector, ExponentVector>>
find_nonprime_pair(const FracIdealPtr& I, const Bounds& b);

/// Searches for x with M = x^-1 R ∩ R among enumerated elements of
/// (R : M) ∖ R.  Requires divisoriality (Proved); returns nullopt when the
/// precondition fails or no candidate verifies by double inclusion.
std::optional<MaxDivRepresentation> find_maxdiv_representation(const FracIdealPtr& M,
                                                               const Bounds& b);

/// For a prime divisorial P: does (R : P) = R + xR hold?  Proved classifies
/// P as maximal divisorial; the converse of the representation search.
/// Throws input_error when divisoriality of P is refuted.
Verdict check_prop_max_converse(const FracIdealPtr& P, const ExponentVector& x,
                                const Bounds& b);

/// Is P maximal in the set of proper divisorial ideals?  Route (a): a
/// v-invertible divisorial prime is maximal divisorial.  Route (b): bounded
/// sweep over monomials m outside P up to the enlargement degree, proving
/// (P + mR)_v = R through (R : (P + mR)) ⊆ R; a monomial enlargement whose
/// colon dual keeps an element outside R refutes.  Only monomial
/// enlargements are swept, and every report carries that caveat.
/// Throws input_error when primality or divisoriality of P is refuted.
Verdict is_maximal_divisorial(const FracIdealPtr& P, const Bounds& b);

/// Validates a witness that P is not t-maximal: W proper (1 ∉ W), the strict
/// member inside W and outside P, P ⊆ W, and a stream of fresh-multiplier
/// certificates pinning sampled finite subsets of W inside W.  Proved means
/// "P is not t-maximal"; an invalid witness is Refuted with the failing
/// sub-check named.
Verdict refute_t_maximal(const FracIdealPtr& P, const NotTMaximalWitness& w,
                         const Bounds& b);

/// Is P maximal in the set of proper t-ideals?  Refuted through a validated
/// witness or by P failing to be a t-ideal; Proved only through the v-finite
/// maximal-divisorial route; everything else is Inconclusive — bounded
/// evidence never promotes to a t-maximality claim.
Verdict is_t_maximal(const FracIdealPtr& P, const std::optional<NotTMaximalWitness>& w,
                     const Bounds& b);

/// One classification row: every predicate of the invertibility/maximality
/// ladder evaluated on a single ideal.  `noetherian_ambient` marks rings
/// whose monoid is free on finitely many scalars (polynomial rings), where
/// every divisorial ideal is v-finite and the maximal-divisorial ⇒ t-maximal
/// direction is available.
struct ClassSummary {
    std::string name;
    bool noetherian_ambient = false;
    std::map<std::string, Verdict> by_name;

    const Verdict& at(const std::string& key) const;
    json to_json() const;
};

ClassSummary classify_ideal(const std::string& name, const FracIdealPtr& I,
                            const std::optional<NotTMaximalWitness>& w, const Bounds& b);

/// A named fixture for the implication suite, with an optional t-maximality
/// refuter and optional expected verdict names ("proved" / "refuted" /
/// "inconclusive") per predicate.
struct ClassifiedFixture {
    std::string name;
    FracIdealPtr ideal;
    std::optional<NotTMaximalWitness> witness;
    std::map<std::string, std::string> expected;
};

/// Checks the maximality implications on pre-evaluated rows: v-invertible
/// divisorial primes are maximal divisorial; v-finite maximal divisorial
/// ideals are t-maximal (the consistency sentinel); v-finite v-invertible
/// divisorial primes are t-invertible; t-invertible t-primes are t-maximal;
/// strong ideals with proper closure are never v-invertible; and on
/// Noetherian-ambient rows, v-invertible divisorial primes are t-invertible
/// t-maximal ideals.  A violation is a row with all hypothesis predicates
/// Proved and the conclusion contradicted.
SuiteReport vtmax_implications(const std::vector<ClassSummary>& rows);

/// Classifies every fixture, runs the implication checks, and compares
/// against the expected verdict names.
SuiteReport vtmax_suite(const std::vector<ClassifiedFixture>& fixtures, const Bounds& b);

} // namespace staride
