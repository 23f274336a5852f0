#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "staride/verdict.hpp"

namespace staride {

/// Exponent value.  Desk-scale inputs keep these tiny; the textual parser
/// range-checks so arithmetic cannot overflow in practice.
using Exp = long long;

/// A single indeterminate: either a scalar (`index == 0`) or member `index`
/// (>= 1) of a lazily-infinite indexed family.
struct VarKey {
    std::string name;
    long long index = 0;

    bool scalar() const { return index == 0; }

    /// Canonical total order: all scalars (by name) precede all indexed
    /// variables (by family name, then index).
    friend std::strong_ordering operator<=>(const VarKey& a, const VarKey& b)
    {
        if (a.scalar() != b.scalar()) return a.scalar() ? std::strong_ordering::less : std::strong_ordering::greater;
        if (int c = a.name.compare(b.name); c != 0)
            return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        return a.index <=> b.index;
    }
    friend bool operator==(const VarKey&, const VarKey&) = default;

    std::string str() const;
};

/// A finite-support integer vector over the indeterminates: a Laurent
/// monomial.  Immutable and canonical (entries sorted by VarKey, no zeros),
/// so equality and ordering are plain lexicographic comparisons.
class ExponentVector {
public:
    using Entry = std::pair<VarKey, Exp>;

    ExponentVector() = default;
    /// Builds the canonical form: merges duplicate keys, drops zeros.
    explicit ExponentVector(std::vector<Entry> entries);

    static ExponentVector unit() { return ExponentVector{}; }
    static ExponentVector var(const VarKey& k, Exp e = 1)
    {
        return ExponentVector{{{k, e}}};
    }
    static ExponentVector scalar(const std::string& name, Exp e = 1)
    {
        return var(VarKey{name, 0}, e);
    }
    static ExponentVector indexed(const std::string& family, long long index, Exp e = 1)
    {
        return var(VarKey{family, index}, e);
    }

    const std::vector<Entry>& entries() const { return entries_; }
    bool is_unit() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }

    Exp get(const VarKey& k) const;
    bool nonnegative() const;
    /// Sum of all exponents (can be negative for Laurent monomials).
    Exp total_degree() const;
    /// Sum of |exponent| over the support.
    Exp l1_norm() const;

    ExponentVector mul(const ExponentVector& o) const;
    ExponentVector div(const ExponentVector& o) const { return mul(o.inverse()); }
    ExponentVector inverse() const;
    ExponentVector pow(Exp n) const;
    /// Copy with every entry of family `fam` removed.
    ExponentVector without_family(const std::string& fam) const;

    /// Largest index of `fam` present, or 0 if none.
    long long max_index(const std::string& fam) const;
    /// Largest index present across all families, or 0.
    long long max_index_any() const;

    friend std::strong_ordering operator<=>(const ExponentVector& a, const ExponentVector& b)
    {
        return a.entries_ <=> b.entries_;
    }
    friend bool operator==(const ExponentVector&, const ExponentVector&) = default;

    /// Canonical text: `1`, or `*`-joined factors like `y*z^2*t[1]^-1`,
    /// entries in VarKey order.  parse(str()) round-trips bit-exactly.
    std::string str() const;
    /// Parses the textual syntax.  Accepts arbitrary factor order and merges
    /// duplicates; throws input_error with a position on malformed input.
    static ExponentVector parse(const std::string& text);

private:
    std::vector<Entry> entries_;
};

/// Deterministic enumeration order: by total degree, then lexicographic.
struct DegreeLexLess {
    bool operator()(const ExponentVector& a, const ExponentVector& b) const
    {
        if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
        return a < b;
    }
};

/// One clause of a degree functional / support pattern.
struct Selector {
    enum class Kind {
        All,        ///< every indeterminate
        Scalar,     ///< one scalar by name
        IndexedOne, ///< one family member, e.g. t[1]
        FamilyAll,  ///< every member of a family, e.g. t[*]
        FamilyUpTo  ///< members with index <= bound, e.g. t[<=3]
    };
    Kind kind = Kind::Scalar;
    std::string name;     ///< scalar or family name (unused for All)
    long long index = 0;  ///< IndexedOne index or FamilyUpTo bound

    static Selector all() { return {Kind::All, "", 0}; }
    static Selector scalar(std::string n) { return {Kind::Scalar, std::move(n), 0}; }
    static Selector indexed(std::string fam, long long i) { return {Kind::IndexedOne, std::move(fam), i}; }
    static Selector family_all(std::string fam) { return {Kind::FamilyAll, std::move(fam), 0}; }
    static Selector family_up_to(std::string fam, long long bound) { return {Kind::FamilyUpTo, std::move(fam), bound}; }

    bool matches(const VarKey& k) const;
    std::string str() const;
    friend bool operator==(const Selector&, const Selector&) = default;
    friend std::strong_ordering operator<=>(const Selector&, const Selector&) = default;
};

/// A sum-of-selected-exponents functional, e.g. deg(y,z) or deg(t[*]).
struct DegreeFunctional {
    std::vector<Selector> selectors;

    static DegreeFunctional of(std::vector<Selector> sel) { return DegreeFunctional{std::move(sel)}; }
    static DegreeFunctional total() { return of({Selector::all()}); }

    bool matches(const VarKey& k) const;
    /// Sum of exponents over matched keys (finite support makes this finite).
    Exp eval(const ExponentVector& u) const;
    std::string str() const;
    friend bool operator==(const DegreeFunctional&, const DegreeFunctional&) = default;
};

/// True when every key matched by `a` is matched by `b`.
bool selector_subset(const Selector& a, const Selector& b);
/// True when every key matched by some selector of `a` is matched by `b`.
bool selectors_subset(const std::vector<Selector>& a, const std::vector<Selector>& b);
/// True when every key matched by `sel` is matched by functional `d`.
bool selector_within(const Selector& sel, const DegreeFunctional& d);

/// Smallest index >= 1 such that family member (fam, index) occurs in none
/// of `used`.
long long fresh_index(const std::string& fam, const std::vector<ExponentVector>& used);

} // namespace staride
