#pragma once

#include "staride/classify.hpp"
#include "staride/dsl.hpp"

namespace staride {

/// Runs one assertion against a compiled scenario and returns its verdict;
/// matching the verdict against the declared expectation is the caller's
/// concern.  Throws input_error when a maximality predicate is applied to a
/// subject outside its precondition (e.g. a non-prime candidate).
Verdict run_assertion(const CompiledScenario& sc, const AssertionSyntax& a,
                      const Bounds& b);

/// One executed assertion.
struct StepReport {
    std::string tag;
    std::string operation; ///< canonical call text, e.g. "maxdiv(P)"
    std::string expect;    ///< declared verdict name
    Verdict verdict;
    bool ok = false;
    double wall_ms = 0.0;

    json to_json(bool timings) const;
};

/// A full scenario run: every assertion in declaration order.
struct ScenarioReport {
    std::string name;
    Bounds bounds;
    std::vector<StepReport> steps;

    bool ok() const;
    json to_json(bool timings) const;
    /// Human-readable, one line per step; never includes timings.
    std::string text() const;
};

ScenarioReport run_scenario(const std::string& name, const CompiledScenario& sc);

/// Ids of the built-in walkthroughs ("3.1", "3.2").
std::vector<std::string> builtin_example_ids();

/// The scenario source text behind a built-in id; the same text ships under
/// scenarios/.  Throws input_error on unknown ids.
const std::string& builtin_example_source(const std::string& id);

/// Compiles and runs a built-in walkthrough under the given bounds.  The
/// sources carry no bounds declaration, so the caller's bounds apply; the
/// second walkthrough appends a native step checking that (R : P) is the
/// ring of polynomials in the representation witness.
ScenarioReport run_builtin_example(const std::string& id, const Bounds& b);

/// Property-suite aggregation over a fixture catalog: closure axioms and
/// class-chain inclusions on the fixture ideals, the maximality-implication
/// suite on their classification rows, and an x^-1 R ∩ R representation for
/// every fixture expected maximal divisorial.
struct SuitesReport {
    std::vector<SuiteReport> suites;
    std::vector<json> representations;

    bool ok() const;
    json to_json() const;
    std::string text() const;
};

SuitesReport run_suites(const std::vector<ClassifiedFixture>& fixtures, const Bounds& b);

/// The default fixture catalog: principal and two-generator ideals of the
/// free ring on {y, z}; the positive-degree prime of the degree cone; and
/// the support-constrained ring's divisorial prime P with its wider ideal M.
/// Mirrors the catalogs shipped under fixtures/.
std::vector<ClassifiedFixture> builtin_fixtures();

} // namespace staride
