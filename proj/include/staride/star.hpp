#pragma once

#include <optional>
#include <string>
#include <vector>

#include "staride/ideal.hpp"

namespace staride {

/// The divisorial closure (R : (R : I)).  Node-exact: nothing is enumerated
/// until a comparison or extraction asks for it.
FracIdealPtr v_closure(const FracIdealPtr& I);

/// Certificate that the divisorial closure of a finite member set cannot
/// escape `target`: a multiplier m outside R with m * members inside R pins
/// (members)_v inside m^-1 R ∩ R, and that contraction is entailed to lie
/// inside `target`.  A stream of such certificates (fresh m per finite set)
/// is how proper t-ideals are recognized without materializing t-closures.
struct TIdealCertificate {
    std::vector<ExponentVector> members;
    ExponentVector multiplier;
    FracIdealPtr target;
};

/// Proved means (members)_v ⊆ target, exactly.  The multiplier lying inside
/// R, or any member failing m * f ∈ R, refutes the certificate.
Verdict check_certificate(const TIdealCertificate& c, const Bounds& b);

/// Builds and validates a certificate for `members` using a fresh index of
/// the given indexed family as multiplier; nullopt when validation fails.
std::optional<TIdealCertificate> auto_certify(const FracIdealPtr& target,
                                              std::vector<ExponentVector> members,
                                              const std::string& family, const Bounds& b);

/// Is u in the t-closure of I (the union of (F)_v over finite F ⊆ I)?
/// Proved by exhibiting F; Refuted only when I is provably divisorial
/// (hence a t-ideal) and u is exactly outside I.
Verdict t_member(const FracIdealPtr& I, const ExponentVector& u, const Bounds& b);

/// I = (R : (R : I))?
Verdict is_divisorial(const FracIdealPtr& I, const Bounds& b);

/// I = I_t?  Decided through divisoriality (t ≤ v, and the two closures
/// agree on finitely generated ideals); otherwise Inconclusive.
Verdict is_t_ideal(const FracIdealPtr& I, const Bounds& b);

/// (R : I) = (I : I)?
Verdict is_strong(const FracIdealPtr& I, const Bounds& b);

/// I * (R : I) = R exactly (unit-group invertibility)?
Verdict is_invertible(const FracIdealPtr& I, const Bounds& b);

/// (I * (R : I))_v = R, evaluated as (R : I * (R : I)) = R?
Verdict is_v_invertible(const FracIdealPtr& I, const Bounds& b);

/// Does some finite F ⊆ I have (R : F) = (R : I)?
Verdict is_v_finite(const FracIdealPtr& I, const Bounds& b);

/// v-invertible with both I and (R : I) v-finite.
Verdict is_t_invertible(const FracIdealPtr& I, const Bounds& b);

/// Searches for x outside R with I = x^-1 R ∩ R, verified by exact double
/// inclusion; the workhorse behind divisoriality of contraction ideals.
std::optional<ExponentVector> principal_contraction_witness(const FracIdealPtr& I,
                                                            const Bounds& b);

/// Aggregated result of a property suite: every violation carries enough
/// JSON to re-run the failing comparison by hand.
struct SuiteReport {
    std::string name;
    long long checks = 0;
    std::vector<json> violations;
    bool bounded = false;

    Verdict verdict() const;
    json to_json() const;
};

/// Closure-axiom surface for the divisorial closure: identity on R,
/// commutation with translation, extensivity, monotonicity, idempotence,
/// and t ≤ v on sampled members.
SuiteReport star_axiom_suite(const std::vector<FracIdealPtr>& samples, const Bounds& b);

/// The class-inclusion chain: invertible ⇒ t-invertible t-ideal ⇒ v-finite
/// divisorial ⇒ divisorial ⇒ t-ideal.  A violation is a sample Proved for an
/// earlier class and Refuted for a later (implied) one.
SuiteReport chain_inclusion_suite(const std::vector<FracIdealPtr>& samples, const Bounds& b);

} // namespace staride
