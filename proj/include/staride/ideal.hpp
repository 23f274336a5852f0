#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "staride/entail.hpp"
#include "staride/verdict.hpp"

namespace staride {

/// Result of a three-valued membership query.  True and False are exact;
/// Unknown only arises behind colon forms that resist both the symbolic
/// prover and the bounded refutation sweep.
struct MemberCheck {
    Tri value = Tri::Unknown;
    json note;
};

/// A fractional monomial ideal presented as a node tree:
///   - FinGen:     finite union of translates g + S,
///   - Constraint: all monomials satisfying a conjunction of atoms,
///   - Colon:      (J : I) = { u : u * I subset of J },
///   - Intersect:  intersection of parts.
/// FinGen and Constraint memberships are exact; Colon membership combines a
/// symbolic prover (exact True), sampled refutation (exact False) and Unknown.
class FracIdeal : public std::enable_shared_from_this<FracIdeal> {
public:
    struct FinGenNode {
        std::vector<ExponentVector> gens; // minimal, sorted
    };
    struct ConstraintNode {
        std::vector<Atom> atoms;
    };
    struct ColonNode {
        FracIdealPtr num;
        FracIdealPtr den;
    };
    struct IntersectNode {
        std::vector<FracIdealPtr> parts;
    };
    using Node = std::variant<FinGenNode, ConstraintNode, ColonNode, IntersectNode>;

    /// Finitely generated: union of g + S over the given generators.
    /// Redundant generators (divisible inside S by another) are dropped.
    static FracIdealPtr fingen(MonoidSpecPtr spec, std::vector<ExponentVector> gens,
                               std::string name = "");
    /// The ring itself, FinGen{1}.
    static FracIdealPtr ring(MonoidSpecPtr spec);
    static FracIdealPtr constraint(MonoidSpecPtr spec, std::vector<Atom> atoms,
                                   std::string name = "");
    /// (J : I).  Exact closed forms are produced whenever the denominator is
    /// finitely generated; otherwise a Colon node is returned.
    static FracIdealPtr colon(FracIdealPtr num, FracIdealPtr den);
    static FracIdealPtr intersect(std::vector<FracIdealPtr> parts, std::string name = "");
    /// a * I = { a * u : u in I }, exact for every node shape.
    static FracIdealPtr translate(FracIdealPtr base, const ExponentVector& a);
    /// Sum and product require finitely generated operands.
    static FracIdealPtr sum(FracIdealPtr a, FracIdealPtr b, std::string name = "");
    static FracIdealPtr product(FracIdealPtr a, FracIdealPtr b, std::string name = "");

    const MonoidSpecPtr& spec() const { return spec_; }
    const Node& node() const { return node_; }
    const std::string& name() const { return name_; }
    FracIdealPtr named(std::string name) const;

    bool is_fingen() const { return std::holds_alternative<FinGenNode>(node_); }
    bool is_colon_form() const;
    /// FinGen with the single generator 1.
    bool is_ring() const;
    const std::vector<ExponentVector>& gens() const; // requires is_fingen()

    /// Structural display, e.g. "(y, z)" or "{ shift(Z), exists(X[*]) }".
    std::string str() const;
    /// name() if set, else str().
    std::string display() const;

    MemberCheck membership(const ExponentVector& u, const Bounds& b) const;

    /// Disjunctive normal form over atoms: outer vector = union branches,
    /// inner = conjunction.  nullopt when a colon form blocks atomization.
    std::optional<std::vector<std::vector<Atom>>> dnf_atoms() const;

    /// Deterministic list of certain members within the given bounds, sorted
    /// by (total degree, lex).  Colon and fractional constraint forms are
    /// enumerated through an anchor translate to keep candidate sets small.
    std::vector<ExponentVector> sample_members(const Bounds& b) const;

    /// Minimal generating monomials among the certain members within bounds.
    /// Exact for FinGen nodes, bound-tagged otherwise.
    std::pair<std::vector<ExponentVector>, Exactness> extract_generators(const Bounds& b) const;

private:
    FracIdeal(MonoidSpecPtr spec, Node node, std::string name);

    MonoidSpecPtr spec_;
    Node node_;
    std::string name_;
    mutable std::map<std::pair<long long, long long>, std::vector<ExponentVector>> sample_cache_;
};

/// Entailment contexts describing an arbitrary member of I: one context per
/// union branch; colon forms contribute probe hypotheses and, for (R : D)
/// shapes, the colon-denominator knowledge used by the uniform lemmas.
std::vector<EntailCtx> branch_contexts(const FracIdealPtr& I, const Bounds& b);

/// I subset of J.  Proved only by exact/symbolic routes; Refuted carries an
/// exact witness; a clean bounded sweep alone yields Inconclusive (callers
/// that accept bounded evidence rephrase it).
Verdict subset_up_to(const FracIdealPtr& I, const FracIdealPtr& J, const Bounds& b);
Verdict equal_up_to(const FracIdealPtr& I, const FracIdealPtr& J, const Bounds& b);

/// (R : I) presented as generators-with-exactness, for report output.
std::pair<FracIdealPtr, Exactness> colon_dual_generators(const FracIdealPtr& I, const Bounds& b);

} // namespace staride
