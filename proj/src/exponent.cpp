#include "staride/exponent.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>

namespace staride {

std::string VarKey::str() const
{
    if (scalar()) return name;
    return name + "[" + std::to_string(index) + "]";
}

ExponentVector::ExponentVector(std::vector<Entry> entries)
{
    std::map<VarKey, Exp> acc;
    for (auto& [k, e] : entries) acc[k] += e;
    entries_.reserve(acc.size());
    for (auto& [k, e] : acc)
        if (e != 0) entries_.emplace_back(k, e);
}

Exp ExponentVector::get(const VarKey& k) const
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                               [](const Entry& a, const VarKey& b) { return a.first < b; });
    if (it != entries_.end() && it->first == k) return it->second;
    return 0;
}

bool ExponentVector::nonnegative() const
{
    return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.second >= 0; });
}

Exp ExponentVector::total_degree() const
{
    Exp d = 0;
    for (auto& [k, e] : entries_) d += e;
    return d;
}

Exp ExponentVector::l1_norm() const
{
    Exp d = 0;
    for (auto& [k, e] : entries_) d += e < 0 ? -e : e;
    return d;
}

ExponentVector ExponentVector::mul(const ExponentVector& o) const
{
    // Merge of two sorted entry lists.
    std::vector<Entry> out;
    out.reserve(entries_.size() + o.entries_.size());
    auto a = entries_.begin(), b = o.entries_.begin();
    while (a != entries_.end() || b != o.entries_.end()) {
        if (b == o.entries_.end() || (a != entries_.end() && a->first < b->first)) {
            out.push_back(*a++);
        } else if (a == entries_.end() || b->first < a->first) {
            out.push_back(*b++);
        } else {
            Exp e = a->second + b->second;
            if (e != 0) out.emplace_back(a->first, e);
            ++a, ++b;
        }
    }
    ExponentVector r;
    r.entries_ = std::move(out);
    return r;
}

ExponentVector ExponentVector::inverse() const
{
    ExponentVector r = *this;
    for (auto& [k, e] : r.entries_) e = -e;
    return r;
}

ExponentVector ExponentVector::pow(Exp n) const
{
    if (n == 0) return unit();
    ExponentVector r = *this;
    for (auto& [k, e] : r.entries_) e *= n; // keys stay sorted; exponents stay nonzero
    return r;
}

ExponentVector ExponentVector::without_family(const std::string& fam) const
{
    ExponentVector r;
    for (auto& e : entries_)
        if (e.first.scalar() || e.first.name != fam) r.entries_.push_back(e);
    return r;
}

long long ExponentVector::max_index(const std::string& fam) const
{
    long long m = 0;
    for (auto& [k, e] : entries_)
        if (!k.scalar() && k.name == fam) m = std::max(m, k.index);
    return m;
}

long long ExponentVector::max_index_any() const
{
    long long m = 0;
    for (auto& [k, e] : entries_)
        if (!k.scalar()) m = std::max(m, k.index);
    return m;
}

std::string ExponentVector::str() const
{
    if (entries_.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) s += "*";
        s += entries_[i].first.str();
        if (entries_[i].second != 1) s += "^" + std::to_string(entries_[i].second);
    }
    return s;
}

namespace {

struct MonoLexer {
    const std::string& text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw input_error("monomial '" + text + "' at offset " + std::to_string(pos) + ": " + msg);
    }
    char peek() const { return pos < text.size() ? text[pos] : '\0'; }
    void skip_ws()
    {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(char c)
    {
        skip_ws();
        if (peek() == c) return ++pos, true;
        return false;
    }
    std::string ident()
    {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
            ++pos;
        }
        if (pos == start) fail("expected identifier");
        return text.substr(start, pos - start);
    }
    long long integer()
    {
        skip_ws();
        std::size_t start = pos;
        if (peek() == '-') ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start || (text[start] == '-' && pos == start + 1)) fail("expected integer");
        long long v = 0;
        try {
            v = std::stoll(text.substr(start, pos - start));
        } catch (const std::exception&) {
            fail("integer out of range");
        }
        if (v > 1000000 || v < -1000000) fail("integer out of supported range");
        return v;
    }
};

} // namespace

ExponentVector ExponentVector::parse(const std::string& text)
{
    MonoLexer lx{text};
    std::vector<Entry> entries;
    for (;;) {
        lx.skip_ws();
        if (lx.peek() == '1' &&
            (lx.pos + 1 >= text.size() || !std::isalnum(static_cast<unsigned char>(text[lx.pos + 1])))) {
            ++lx.pos; // neutral factor
        } else {
            std::string name = lx.ident();
            if (std::isdigit(static_cast<unsigned char>(name[0]))) lx.fail("variable may not start with a digit");
            VarKey key{name, 0};
            if (lx.eat('[')) {
                key.index = lx.integer();
                if (key.index < 1) lx.fail("family index must be >= 1");
                if (!lx.eat(']')) lx.fail("expected ']'");
            }
            Exp e = 1;
            if (lx.eat('^')) e = lx.integer();
            entries.emplace_back(key, e);
        }
        if (!lx.eat('*')) break;
    }
    lx.skip_ws();
    if (lx.pos != text.size()) lx.fail("trailing characters");
    return ExponentVector(std::move(entries));
}

bool Selector::matches(const VarKey& k) const
{
    switch (kind) {
    case Kind::All: return true;
    case Kind::Scalar: return k.scalar() && k.name == name;
    case Kind::IndexedOne: return !k.scalar() && k.name == name && k.index == index;
    case Kind::FamilyAll: return !k.scalar() && k.name == name;
    case Kind::FamilyUpTo: return !k.scalar() && k.name == name && k.index <= index;
    }
    return false;
}

std::string Selector::str() const
{
    switch (kind) {
    case Kind::All: return "*";
    case Kind::Scalar: return name;
    case Kind::IndexedOne: return name + "[" + std::to_string(index) + "]";
    case Kind::FamilyAll: return name + "[*]";
    case Kind::FamilyUpTo: return name + "[<=" + std::to_string(index) + "]";
    }
    return "?";
}

bool DegreeFunctional::matches(const VarKey& k) const
{
    return std::any_of(selectors.begin(), selectors.end(),
                       [&](const Selector& s) { return s.matches(k); });
}

Exp DegreeFunctional::eval(const ExponentVector& u) const
{
    Exp d = 0;
    for (auto& [k, e] : u.entries())
        if (matches(k)) d += e;
    return d;
}

std::string DegreeFunctional::str() const
{
    std::string s = "deg(";
    for (std::size_t i = 0; i < selectors.size(); ++i) {
        if (i) s += ",";
        s += selectors[i].str();
    }
    return s + ")";
}

bool selector_subset(const Selector& a, const Selector& b)
{
    using K = Selector::Kind;
    if (b.kind == K::All) return true;
    switch (a.kind) {
    case K::All: return false;
    case K::Scalar: return b.kind == K::Scalar && b.name == a.name;
    case K::IndexedOne:
        if (b.name != a.name) return false;
        if (b.kind == K::FamilyAll) return true;
        if (b.kind == K::IndexedOne) return b.index == a.index;
        return b.kind == K::FamilyUpTo && a.index <= b.index;
    case K::FamilyAll: return b.kind == K::FamilyAll && b.name == a.name;
    case K::FamilyUpTo:
        if (b.name != a.name) return false;
        if (b.kind == K::FamilyAll) return true;
        return b.kind == K::FamilyUpTo && a.index <= b.index;
    }
    return false;
}

bool selectors_subset(const std::vector<Selector>& a, const std::vector<Selector>& b)
{
    return std::all_of(a.begin(), a.end(), [&](const Selector& s) {
        return std::any_of(b.begin(), b.end(), [&](const Selector& t) { return selector_subset(s, t); });
    });
}

bool selector_within(const Selector& sel, const DegreeFunctional& d)
{
    return std::any_of(d.selectors.begin(), d.selectors.end(),
                       [&](const Selector& t) { return selector_subset(sel, t); });
}

long long fresh_index(const std::string& fam, const std::vector<ExponentVector>& used)
{
    std::vector<long long> taken;
    for (auto& u : used)
        for (auto& [k, e] : u.entries())
            if (!k.scalar() && k.name == fam) taken.push_back(k.index);
    std::sort(taken.begin(), taken.end());
    taken.erase(std::unique(taken.begin(), taken.end()), taken.end());
    long long n = 1;
    for (long long t : taken) {
        if (t > n) break;
        if (t == n) ++n;
    }
    return n;
}

} // namespace staride
