#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "staride/polyext.hpp"

namespace staride {

/// Position of a token or declaration in a source file; 1-based.
struct SourceSpan {
    std::string file;
    int line = 1;
    int col = 1;

    /// "file:line:col"
    std::string str() const;
};

/// A parse or resolution problem, rendered as "file:line:col: message".
struct Diagnostic {
    SourceSpan span;
    std::string message;

    std::string str() const;
};

/// Thrown by parse_file/compile; carries the structured diagnostic.
struct parse_error : input_error {
    Diagnostic diag;
    explicit parse_error(Diagnostic d);
};

/// One ideal-building expression.  `R` denotes the ring.
struct IdealExpr {
    enum class Kind { Ring, Name, Gens, Constraint, Colon, Intersect, Scale, Extend };

    Kind kind = Kind::Ring;
    SourceSpan span;
    std::string name;                 ///< Name / Extend target
    std::vector<ExponentVector> gens; ///< Gens
    std::vector<Atom> atoms;          ///< Constraint: shift / deg / exists atoms
    ExponentVector factor;            ///< Scale multiplier
    std::vector<IdealExpr> parts;     ///< Colon (2) / Intersect (>= 2)
};

/// One additive term of a polynomial literal: coeff * mono * X^xpow.
struct PolyTerm {
    Rat coeff = Rat::one();
    ExponentVector mono;
    long long xpow = 0;
};

/// The fixed assertion vocabulary.
enum class AssertOp {
    Closure,
    IntegrallyClosed,
    CompletelyIntegrallyClosed,
    Prime,
    Divisorial,
    TIdeal,
    Strong,
    VFinite,
    VInvertible,
    TInvertible,
    MaxDiv,
    TMaximal,
    NotTMaximal,
    Member,
    Subset,
    Equal,
};

const char* assert_op_name(AssertOp op);
std::optional<AssertOp> assert_op_from(const std::string& word);

/// `assert <tag> <op>(<args>) expect <verdict>;`.  Name, monomial, and
/// expression arguments are stored in op-specific positional order:
///   - one-name predicates: names = {subject}
///   - not_t_maximal:        names = {subject, wider, family}, monos = {strict}
///   - member:               names = {subject}, monos = {element}
///   - subset / equal:       exprs = {lhs, rhs}
struct AssertionSyntax {
    SourceSpan span;
    std::string tag;
    AssertOp op = AssertOp::Closure;
    std::vector<std::string> names;
    std::vector<ExponentVector> monos;
    std::vector<IdealExpr> exprs;
    std::string expect; ///< "proved" | "refuted" | "inconclusive"
};

/// Canonical call text, e.g. "not_t_maximal(P, QX, y, t)".
std::string assertion_call_str(const AssertionSyntax& a);

/// `fixture <name> [witness(<wider>, <member>, <family>)]
///  expect <predicate> <verdict> {, ...};`
struct FixtureSyntax {
    SourceSpan span;
    std::string ideal;
    std::optional<std::array<std::string, 2>> witness_names; ///< wider, family
    std::optional<ExponentVector> witness_member;
    std::vector<std::pair<std::string, std::string>> expect;
};

struct VarsDecl {
    std::vector<std::string> names;
};
struct FamilyDecl {
    std::string name;
};
struct RuleDecl {
    MonoidRule rule;
};
struct IdealDecl {
    std::string name;
    IdealExpr expr;
};
struct PolyDecl {
    std::string name;
    std::vector<PolyTerm> terms;
};
struct UpperDecl {
    std::string name;
    std::string poly;
};
struct BoundsDecl {
    Bounds bounds;
};

struct Decl {
    SourceSpan span;
    std::variant<VarsDecl, FamilyDecl, RuleDecl, IdealDecl, PolyDecl, UpperDecl,
                 BoundsDecl, AssertionSyntax, FixtureSyntax>
        node;
};

/// The syntax-level result of parsing one file; self-contained (no views
/// into the source text).
struct ParsedFile {
    std::string file;
    std::vector<Decl> decls;
};

/// Parses the scenario/fixture language; throws parse_error on the first
/// malformed token or construct.
ParsedFile parse_file(const std::string& text, const std::string& filename);

/// Canonical text form.  parse_file(print_file(f)) reproduces f up to spans,
/// and print_file(parse_file(s)) is a fixpoint of printing.
std::string print_file(const ParsedFile& f);

/// Executable form: the monoid, the named objects, the assertion list, and
/// the fixture catalog.
struct CompiledScenario {
    MonoidSpecPtr spec;
    std::map<std::string, FracIdealPtr> ideals;
    std::map<std::string, RingPoly> polys;
    std::map<std::string, UpperToZero> uppers;
    std::map<std::string, ExtendedIdeal> extended;
    std::vector<AssertionSyntax> assertions;
    std::vector<ClassifiedFixture> fixtures;
    Bounds bounds;
    bool has_bounds = false;
};

/// Rebuilds the ideal behind a stored expression (subset/equal assertion
/// operands) against an already-compiled scenario; throws input_error on
/// names that are not monomial ideals.
FracIdealPtr eval_ideal_expr(const CompiledScenario& sc, const IdealExpr& e);

/// Resolves a parsed file: builds the monoid (vars/family/rule declarations
/// must precede every ideal, poly, upper, assert, and fixture; a nonneg rule
/// is always added), then each named object in order.  Unknown identifiers,
/// duplicate names, type mismatches, and out-of-universe monomials are
/// reported as parse_error with the declaration's span.
CompiledScenario compile(const ParsedFile& f, const Bounds& defaults);

} // namespace staride
