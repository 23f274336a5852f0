#pragma once

#include <string>
#include <utility>

#include <json.hpp>

namespace staride {

using json = nlohmann::json;

/// Search/enumeration bounds shared by every semi-decidable operation.
/// `degree` caps total degree of enumerated monomials, `window` caps the
/// largest index materialized per indexed family.  The remaining knobs
/// bound specific searches and keep runs deterministic.
struct Bounds {
    long long degree = 8;             ///< total-degree cap for enumerations
    long long window = 3;             ///< per-family index cap
    long long enlargement_degree = 6; ///< degree cap for maximality enlargement sweeps
    long long cert_samples = 20;      ///< sampled finite subsets per t-ideal refutation
    unsigned long long seed = 0;      ///< RNG seed for sampled searches

    json to_json() const
    {
        return json{{"degree", degree},
                    {"window", window},
                    {"enlargement_degree", enlargement_degree},
                    {"cert_samples", cert_samples},
                    {"seed", seed}};
    }
};

/// Whether a computed object or verdict is exact or only trusted up to
/// enumeration bounds.  Propagates through derived results: combining
/// anything bounded yields a bounded flag.
struct Exactness {
    bool exact = true;
    long long degree = 0; ///< bounds in effect when `exact` is false
    long long window = 0;

    static Exactness exact_tag() { return Exactness{true, 0, 0}; }
    static Exactness up_to(const Bounds& b) { return Exactness{false, b.degree, b.window}; }

    Exactness combined(const Exactness& o) const
    {
        if (exact && o.exact) return exact_tag();
        Exactness r;
        r.exact = false;
        r.degree = exact ? o.degree : (o.exact ? degree : std::min(degree, o.degree));
        r.window = exact ? o.window : (o.exact ? window : std::min(window, o.window));
        return r;
    }

    json to_json() const
    {
        if (exact) return json{{"exact", true}};
        return json{{"exact", false}, {"degree", degree}, {"window", window}};
    }
};

/// Three-valued result of a check.  `Refuted` always carries a re-checkable
/// witness in `evidence`; `Inconclusive` records the bounds that were
/// exhausted; `Proved` may be exact or explicitly "within bounds" via
/// `exactness`.
class Verdict {
public:
    enum class State { Proved, Refuted, Inconclusive };

    State state = State::Inconclusive;
    json evidence = json::object();
    Exactness exactness = Exactness::exact_tag();

    static Verdict proved(json ev = json::object(), Exactness ex = Exactness::exact_tag())
    {
        return Verdict{State::Proved, std::move(ev), ex};
    }
    static Verdict refuted(json witness, Exactness ex = Exactness::exact_tag())
    {
        return Verdict{State::Refuted, std::move(witness), ex};
    }
    static Verdict inconclusive(json why, const Bounds& b)
    {
        return Verdict{State::Inconclusive, std::move(why), Exactness::up_to(b)};
    }

    bool is_proved() const { return state == State::Proved; }
    bool is_refuted() const { return state == State::Refuted; }
    bool is_inconclusive() const { return state == State::Inconclusive; }

    /// Conjunction under the fixed dominance order:
    /// Refuted > Inconclusive > Proved.
    Verdict meet(const Verdict& o) const
    {
        auto rank = [](State s) {
            switch (s) {
            case State::Refuted: return 2;
            case State::Inconclusive: return 1;
            default: return 0;
            }
        };
        const Verdict& dom = rank(o.state) > rank(state) ? o : *this;
        Verdict r = dom;
        r.exactness = exactness.combined(o.exactness);
        return r;
    }

    /// A Proved conclusion whose inputs were only bounded-exact degrades to
    /// Inconclusive; used by comparison layers that promise exact answers.
    Verdict downgraded_if_bounded() const
    {
        if (state == State::Proved && !exactness.exact) {
            Verdict r = *this;
            r.state = State::Inconclusive;
            r.evidence = json{{"reason", "supporting data only exact within bounds"},
                              {"was", "proved-within-bounds"},
                              {"detail", evidence}};
            return r;
        }
        return *this;
    }

    const char* name() const
    {
        switch (state) {
        case State::Proved: return "proved";
        case State::Refuted: return "refuted";
        default: return "inconclusive";
        }
    }

    json to_json() const
    {
        return json{{"verdict", name()},
                    {"evidence", evidence},
                    {"exactness", exactness.to_json()}};
    }

    Verdict() = default;
    Verdict(State s, json ev, Exactness ex)
        : state(s), evidence(std::move(ev)), exactness(ex)
    {
    }
};

/// Error for malformed user input (DSL, CLI arguments, ill-typed requests).
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Error for requests outside an operation's representable domain
/// (e.g. products of constraint-form ideals).
struct representation_error : std::runtime_error {
    explicit representation_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace staride
