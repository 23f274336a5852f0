#include "staride/dsl.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace staride {

std::string SourceSpan::str() const
{
    return file + ":" + std::to_string(line) + ":" + std::to_string(col);
}

std::string Diagnostic::str() const { return span.str() + ": " + message; }

parse_error::parse_error(Diagnostic d) : input_error(d.str()), diag(std::move(d)) {}

const char* assert_op_name(AssertOp op)
{
    switch (op) {
    case AssertOp::Closure: return "closure";
    case AssertOp::IntegrallyClosed: return "integrally_closed";
    case AssertOp::CompletelyIntegrallyClosed: return "cic";
    case AssertOp::Prime: return "prime";
    case AssertOp::Divisorial: return "divisorial";
    case AssertOp::TIdeal: return "t_ideal";
    case AssertOp::Strong: return "strong";
    case AssertOp::VFinite: return "v_finite";
    case AssertOp::VInvertible: return "v_invertible";
    case AssertOp::TInvertible: return "t_invertible";
    case AssertOp::MaxDiv: return "maxdiv";
    case AssertOp::TMaximal: return "t_maximal";
    case AssertOp::NotTMaximal: return "not_t_maximal";
    case AssertOp::Member: return "member";
    case AssertOp::Subset: return "subset";
    case AssertOp::Equal: return "equal";
    }
    return "?";
}

std::optional<AssertOp> assert_op_from(const std::string& word)
{
    for (int i = 0; i <= static_cast<int>(AssertOp::Equal); ++i) {
        auto op = static_cast<AssertOp>(i);
        if (word == assert_op_name(op)) return op;
    }
    return std::nullopt;
}

namespace {

// ---------------------------------------------------------------- lexing --

struct Token {
    enum Kind { Ident, Int, Punct, End } kind = End;
    std::string text;
    SourceSpan span;
};

std::vector<Token> lex(const std::string& text, const std::string& filename)
{
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto here = [&] { return SourceSpan{filename, line, col}; };
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        const char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        const SourceSpan span = here();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            out.push_back({Token::Ident, text.substr(i, j - i), span});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                ++j;
            out.push_back({Token::Int, text.substr(i, j - i), span});
            advance(j - i);
            continue;
        }
        if (i + 1 < text.size()) {
            const std::string two = text.substr(i, 2);
            if (two == "->" || two == ">=" || two == "<=") {
                out.push_back({Token::Punct, two, span});
                advance(2);
                continue;
            }
        }
        static const std::string singles = "()[],;:^*+=&|/-";
        if (singles.find(c) != std::string::npos) {
            out.push_back({Token::Punct, std::string(1, c), span});
            advance(1);
            continue;
        }
        throw parse_error({span, std::string("unexpected character '") + c + "'"});
    }
    out.push_back({Token::End, "", here()});
    return out;
}

// --------------------------------------------------------------- parsing --

class Parser {
public:
    Parser(std::vector<Token> toks, std::string file)
        : toks_(std::move(toks)), file_(std::move(file))
    {
    }

    ParsedFile parse()
    {
        ParsedFile f;
        f.file = file_;
        while (peek().kind != Token::End) f.decls.push_back(parse_decl());
        return f;
    }

private:
    std::vector<Token> toks_;
    std::string file_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t ahead = 0) const
    {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    [[noreturn]] void fail(const SourceSpan& span, const std::string& msg) const
    {
        throw parse_error({span, msg});
    }

    bool at_punct(const std::string& p, std::size_t ahead = 0) const
    {
        return peek(ahead).kind == Token::Punct && peek(ahead).text == p;
    }
    bool at_ident(const std::string& w, std::size_t ahead = 0) const
    {
        return peek(ahead).kind == Token::Ident && peek(ahead).text == w;
    }

    void expect_punct(const std::string& p)
    {
        if (!at_punct(p)) fail(peek().span, "expected '" + p + "'");
        take();
    }
    std::string expect_ident(const std::string& what)
    {
        if (peek().kind != Token::Ident) fail(peek().span, "expected " + what);
        return take().text;
    }
    long long expect_uint(const std::string& what)
    {
        if (peek().kind != Token::Int) fail(peek().span, "expected " + what);
        return std::stoll(take().text);
    }
    long long parse_int()
    {
        bool neg = false;
        if (at_punct("-")) {
            take();
            neg = true;
        }
        long long v = expect_uint("an integer");
        return neg ? -v : v;
    }

    // monomial := "1" | factor { "*" factor }, factor := ident [ "[" int "]" ]
    // [ "^" int ].  In polynomial position a trailing "* X" belongs to the
    // term, so the factor loop stops before an X.
    ExponentVector parse_monomial(bool stop_before_x = false)
    {
        std::vector<ExponentVector::Entry> entries;
        while (true) {
            if (peek().kind == Token::Int) {
                const Token t = take();
                if (t.text != "1") fail(t.span, "only 1 is a valid numeric monomial");
            } else if (peek().kind == Token::Ident) {
                const Token t = take();
                long long index = 0;
                if (at_punct("[")) {
                    take();
                    index = expect_uint("a family index");
                    expect_punct("]");
                }
                Exp e = 1;
                if (at_punct("^")) {
                    take();
                    e = parse_int();
                }
                entries.push_back({VarKey{t.text, index}, e});
            } else {
                fail(peek().span, "expected a monomial");
            }
            if (at_punct("*") && !(stop_before_x && at_ident("X", 1))) {
                take();
                continue;
            }
            break;
        }
        return ExponentVector{std::move(entries)};
    }

    Rat parse_rational()
    {
        long long num = parse_int();
        long long den = 1;
        if (at_punct("/")) {
            take();
            den = expect_uint("a denominator");
        }
        return Rat{num, den};
    }

    Selector parse_selector()
    {
        if (at_punct("*")) {
            take();
            return Selector::all();
        }
        const Token t = toks_[pos_];
        std::string name = expect_ident("a selector");
        if (!at_punct("[")) return Selector::scalar(name);
        take();
        Selector s;
        if (at_punct("*")) {
            take();
            s = Selector::family_all(name);
        } else if (at_punct("<=")) {
            take();
            s = Selector::family_up_to(name, expect_uint("an index bound"));
        } else if (peek().kind == Token::Int) {
            s = Selector::indexed(name, expect_uint("an index"));
        } else {
            fail(peek().span, "expected '*', '<=', or an index");
        }
        (void)t;
        expect_punct("]");
        return s;
    }

    DegreeFunctional parse_degree()
    {
        // caller consumed "deg"
        expect_punct("(");
        std::vector<Selector> sels;
        sels.push_back(parse_selector());
        while (at_punct(",")) {
            take();
            sels.push_back(parse_selector());
        }
        expect_punct(")");
        return DegreeFunctional::of(std::move(sels));
    }

    Atom parse_atom()
    {
        const Token t = toks_[pos_];
        if (at_ident("shift")) {
            take();
            expect_punct("(");
            auto m = parse_monomial();
            expect_punct(")");
            return ShiftAtom{std::move(m)};
        }
        if (at_ident("deg")) {
            take();
            auto d = parse_degree();
            expect_punct(">=");
            return DegreeAtom{std::move(d), parse_int()};
        }
        if (at_ident("exists")) {
            take();
            expect_punct("(");
            std::vector<Selector> sels;
            sels.push_back(parse_selector());
            while (at_punct(",")) {
                take();
                sels.push_back(parse_selector());
            }
            ExponentVector offset;
            if (at_ident("at")) {
                take();
                offset = parse_monomial();
            }
            expect_punct(")");
            return SupportAtom{std::move(sels), std::move(offset)};
        }
        fail(t.span, "expected an atom: shift(...), deg(...) >= n, or exists(...)");
    }

    IdealExpr parse_ideal_expr()
    {
        IdealExpr e;
        e.span = peek().span;
        if (at_ident("R")) {
            take();
            e.kind = IdealExpr::Kind::Ring;
            return e;
        }
        if (at_ident("gens")) {
            take();
            e.kind = IdealExpr::Kind::Gens;
            expect_punct("(");
            if (at_punct(")")) fail(e.span, "empty generator list");
            e.gens.push_back(parse_monomial());
            while (at_punct(",")) {
                take();
                e.gens.push_back(parse_monomial());
            }
            expect_punct(")");
            return e;
        }
        if (at_ident("constraint")) {
            take();
            e.kind = IdealExpr::Kind::Constraint;
            expect_punct("(");
            if (at_punct(")")) fail(e.span, "empty constraint");
            e.atoms.push_back(parse_atom());
            while (at_punct(",")) {
                take();
                e.atoms.push_back(parse_atom());
            }
            expect_punct(")");
            return e;
        }
        if (at_ident("colon")) {
            take();
            e.kind = IdealExpr::Kind::Colon;
            expect_punct("(");
            e.parts.push_back(parse_ideal_expr());
            expect_punct(",");
            e.parts.push_back(parse_ideal_expr());
            expect_punct(")");
            return e;
        }
        if (at_ident("intersect")) {
            take();
            e.kind = IdealExpr::Kind::Intersect;
            expect_punct("(");
            e.parts.push_back(parse_ideal_expr());
            while (at_punct(",")) {
                take();
                e.parts.push_back(parse_ideal_expr());
            }
            expect_punct(")");
            if (e.parts.size() < 2) fail(e.span, "intersect needs at least two parts");
            return e;
        }
        if (at_ident("scale")) {
            take();
            e.kind = IdealExpr::Kind::Scale;
            expect_punct("(");
            e.factor = parse_monomial();
            expect_punct(",");
            e.parts.push_back(parse_ideal_expr());
            expect_punct(")");
            return e;
        }
        if (at_ident("extend")) {
            take();
            e.kind = IdealExpr::Kind::Extend;
            expect_punct("(");
            e.name = expect_ident("an ideal name");
            expect_punct(")");
            return e;
        }
        e.kind = IdealExpr::Kind::Name;
        e.name = expect_ident("an ideal expression");
        return e;
    }

    PolyTerm parse_poly_term()
    {
        PolyTerm t;
        bool any = false;
        if (peek().kind == Token::Int || at_punct("-")) {
            // A numeric lead is a rational coefficient, except the bare unit
            // monomial "1".
            if (peek().kind == Token::Int && peek().text == "1" && !at_punct("/", 1) &&
                !at_punct("*", 1)) {
                take();
                return t; // the constant term 1
            }
            t.coeff = parse_rational();
            any = true;
            if (at_punct("*")) take();
        }
        if (peek().kind == Token::Ident && !at_ident("X")) {
            t.mono = parse_monomial(/*stop_before_x=*/true);
            any = true;
            if (at_punct("*") && at_ident("X", 1)) take();
        }
        if (at_ident("X")) {
            take();
            t.xpow = 1;
            if (at_punct("^")) {
                take();
                t.xpow = expect_uint("a power of X");
            }
            any = true;
        }
        if (!any) fail(peek().span, "empty polynomial term");
        return t;
    }

    MonoidRule parse_rule_body(const SourceSpan& span)
    {
        if (at_ident("linear")) {
            take();
            expect_punct(":");
            if (!at_ident("deg")) fail(peek().span, "expected deg(...)");
            take();
            auto lhs = parse_degree();
            expect_punct(">=");
            if (!at_ident("deg")) fail(peek().span, "expected deg(<family>[*])");
            take();
            expect_punct("(");
            std::string fam = expect_ident("a family name");
            expect_punct("[");
            expect_punct("*");
            expect_punct("]");
            expect_punct(")");
            return LinearDegreeRule{std::move(lhs), std::move(fam)};
        }
        if (at_ident("support")) {
            take();
            expect_punct(":");
            SupportRule r;
            std::string trig = expect_ident("a trigger");
            if (at_punct("[")) {
                take();
                expect_punct("*");
                expect_punct("]");
                r.trigger = Selector::family_all(trig);
            } else {
                r.trigger = Selector::scalar(trig);
            }
            expect_punct("->");
            auto witness = [&]() {
                SupportRule::Witness w;
                w.name = expect_ident("a witness");
                w.kind = SupportRule::Witness::Kind::Scalar;
                if (at_punct("[")) {
                    take();
                    if (at_punct("*")) {
                        take();
                        w.kind = SupportRule::Witness::Kind::FamilyAll;
                    } else if (at_punct("<=")) {
                        take();
                        if (!at_ident("n")) fail(peek().span, "expected 'n'");
                        take();
                        w.kind = SupportRule::Witness::Kind::FamilyUpToTrigger;
                    } else {
                        fail(peek().span, "expected '*' or '<=n'");
                    }
                    expect_punct("]");
                }
                return w;
            };
            r.witnesses.push_back(witness());
            while (at_punct("|")) {
                take();
                r.witnesses.push_back(witness());
            }
            return r;
        }
        fail(span, "expected 'linear' or 'support'");
    }

    AssertionSyntax parse_assert(const SourceSpan& span)
    {
        AssertionSyntax a;
        a.span = span;
        a.tag = expect_ident("a step tag");
        const Token opt = toks_[pos_];
        std::string word = expect_ident("an operation");
        auto op = assert_op_from(word);
        if (!op) fail(opt.span, "unknown operation '" + word + "'");
        a.op = *op;
        expect_punct("(");
        switch (a.op) {
        case AssertOp::Closure:
        case AssertOp::IntegrallyClosed:
        case AssertOp::CompletelyIntegrallyClosed: break;
        case AssertOp::NotTMaximal:
            a.names.push_back(expect_ident("an ideal name"));
            expect_punct(",");
            a.names.push_back(expect_ident("a wider ideal name"));
            expect_punct(",");
            a.monos.push_back(parse_monomial());
            expect_punct(",");
            a.names.push_back(expect_ident("a family name"));
            break;
        case AssertOp::Member:
            a.names.push_back(expect_ident("an ideal name"));
            expect_punct(",");
            a.monos.push_back(parse_monomial());
            break;
        case AssertOp::Subset:
        case AssertOp::Equal:
            a.exprs.push_back(parse_ideal_expr());
            expect_punct(",");
            a.exprs.push_back(parse_ideal_expr());
            break;
        default: a.names.push_back(expect_ident("an ideal name"));
        }
        expect_punct(")");
        if (!at_ident("expect")) fail(peek().span, "expected 'expect'");
        take();
        const Token vt = toks_[pos_];
        a.expect = expect_ident("a verdict");
        if (a.expect != "proved" && a.expect != "refuted" && a.expect != "inconclusive")
            fail(vt.span, "expected proved, refuted, or inconclusive");
        return a;
    }

    FixtureSyntax parse_fixture(const SourceSpan& span)
    {
        FixtureSyntax f;
        f.span = span;
        f.ideal = expect_ident("an ideal name");
        if (at_ident("witness")) {
            take();
            expect_punct("(");
            std::string wider = expect_ident("a wider ideal name");
            expect_punct(",");
            f.witness_member = parse_monomial();
            expect_punct(",");
            std::string fam = expect_ident("a family name");
            expect_punct(")");
            f.witness_names = {wider, fam};
        }
        if (!at_ident("expect")) fail(peek().span, "expected 'expect'");
        take();
        auto one = [&]() {
            std::string pred = expect_ident("a predicate");
            const Token vt = toks_[pos_];
            std::string v = expect_ident("a verdict");
            if (v != "proved" && v != "refuted" && v != "inconclusive")
                fail(vt.span, "expected proved, refuted, or inconclusive");
            f.expect.emplace_back(std::move(pred), std::move(v));
        };
        one();
        while (at_punct(",")) {
            take();
            one();
        }
        return f;
    }

    Decl parse_decl()
    {
        const Token t = toks_[pos_];
        Decl d;
        d.span = t.span;
        std::string kw = expect_ident("a declaration");
        if (kw == "vars") {
            VarsDecl v;
            v.names.push_back(expect_ident("a variable name"));
            while (at_punct(",")) {
                take();
                v.names.push_back(expect_ident("a variable name"));
            }
            d.node = std::move(v);
        } else if (kw == "family") {
            d.node = FamilyDecl{expect_ident("a family name")};
        } else if (kw == "rule") {
            d.node = RuleDecl{parse_rule_body(t.span)};
        } else if (kw == "ideal") {
            IdealDecl i;
            i.name = expect_ident("an ideal name");
            expect_punct("=");
            i.expr = parse_ideal_expr();
            d.node = std::move(i);
        } else if (kw == "poly") {
            PolyDecl p;
            p.name = expect_ident("a polynomial name");
            expect_punct("=");
            p.terms.push_back(parse_poly_term());
            while (at_punct("+")) {
                take();
                p.terms.push_back(parse_poly_term());
            }
            d.node = std::move(p);
        } else if (kw == "upper") {
            UpperDecl u;
            u.name = expect_ident("a name");
            expect_punct("=");
            if (!at_ident("u2z")) fail(peek().span, "expected u2z(<poly>)");
            take();
            expect_punct("(");
            u.poly = expect_ident("a polynomial name");
            expect_punct(")");
            d.node = std::move(u);
        } else if (kw == "bounds") {
            BoundsDecl bd;
            while (peek().kind == Token::Ident) {
                std::string key = take().text;
                long long v = expect_uint("a value");
                if (key == "degree") bd.bounds.degree = v;
                else if (key == "window") bd.bounds.window = v;
                else if (key == "enlargement") bd.bounds.enlargement_degree = v;
                else if (key == "certs") bd.bounds.cert_samples = v;
                else if (key == "seed") bd.bounds.seed = static_cast<unsigned long long>(v);
                else fail(t.span, "unknown bounds key '" + key + "'");
            }
            d.node = bd;
        } else if (kw == "assert") {
            d.node = parse_assert(t.span);
        } else if (kw == "fixture") {
            d.node = parse_fixture(t.span);
        } else {
            fail(t.span, "unknown declaration '" + kw + "'");
        }
        expect_punct(";");
        return d;
    }
};

// -------------------------------------------------------------- printing --

std::string selectors_str(const std::vector<Selector>& sels)
{
    std::string s;
    for (std::size_t i = 0; i < sels.size(); ++i) {
        if (i) s += ", ";
        s += sels[i].str();
    }
    return s;
}

std::string atom_dsl(const Atom& a)
{
    if (auto* sh = std::get_if<ShiftAtom>(&a)) return "shift(" + sh->m.str() + ")";
    if (auto* dg = std::get_if<DegreeAtom>(&a))
        return "deg(" + selectors_str(dg->d.selectors) + ") >= " + std::to_string(dg->min);
    if (auto* su = std::get_if<SupportAtom>(&a)) {
        std::string s = "exists(" + selectors_str(su->selectors);
        if (!su->offset.is_unit()) s += " at " + su->offset.str();
        return s + ")";
    }
    throw representation_error("atom not expressible in the scenario grammar");
}

std::string ideal_expr_str(const IdealExpr& e)
{
    switch (e.kind) {
    case IdealExpr::Kind::Ring: return "R";
    case IdealExpr::Kind::Name: return e.name;
    case IdealExpr::Kind::Extend: return "extend(" + e.name + ")";
    case IdealExpr::Kind::Gens: {
        std::string s = "gens(";
        for (std::size_t i = 0; i < e.gens.size(); ++i) {
            if (i) s += ", ";
            s += e.gens[i].str();
        }
        return s + ")";
    }
    case IdealExpr::Kind::Constraint: {
        std::string s = "constraint(";
        for (std::size_t i = 0; i < e.atoms.size(); ++i) {
            if (i) s += ", ";
            s += atom_dsl(e.atoms[i]);
        }
        return s + ")";
    }
    case IdealExpr::Kind::Colon:
        return "colon(" + ideal_expr_str(e.parts[0]) + ", " + ideal_expr_str(e.parts[1]) +
               ")";
    case IdealExpr::Kind::Intersect: {
        std::string s = "intersect(";
        for (std::size_t i = 0; i < e.parts.size(); ++i) {
            if (i) s += ", ";
            s += ideal_expr_str(e.parts[i]);
        }
        return s + ")";
    }
    case IdealExpr::Kind::Scale:
        return "scale(" + e.factor.str() + ", " + ideal_expr_str(e.parts[0]) + ")";
    }
    return "?";
}

std::string poly_term_str(const PolyTerm& t)
{
    std::string s;
    if (!(t.coeff == Rat::one())) s = t.coeff.str();
    if (!t.mono.is_unit()) {
        if (!s.empty()) s += "*";
        s += t.mono.str();
    }
    if (t.xpow > 0) {
        if (!s.empty()) s += "*";
        s += t.xpow == 1 ? "X" : "X^" + std::to_string(t.xpow);
    }
    return s.empty() ? "1" : s;
}

std::string rule_dsl(const MonoidRule& r)
{
    if (auto* lin = std::get_if<LinearDegreeRule>(&r))
        return "rule linear: deg(" + selectors_str(lin->lhs.selectors) + ") >= deg(" +
               lin->family + "[*])";
    if (auto* sup = std::get_if<SupportRule>(&r)) {
        std::string s = "rule support: " + sup->trigger.str() + " -> ";
        for (std::size_t i = 0; i < sup->witnesses.size(); ++i) {
            if (i) s += " | ";
            const auto& w = sup->witnesses[i];
            s += w.name;
            if (w.kind == SupportRule::Witness::Kind::FamilyAll) s += "[*]";
            if (w.kind == SupportRule::Witness::Kind::FamilyUpToTrigger) s += "[<=n]";
        }
        return s;
    }
    throw representation_error("rule not expressible in the scenario grammar");
}

std::string decl_str(const Decl& d)
{
    std::string s;
    if (auto* v = std::get_if<VarsDecl>(&d.node)) {
        s = "vars ";
        for (std::size_t i = 0; i < v->names.size(); ++i) {
            if (i) s += ", ";
            s += v->names[i];
        }
    } else if (auto* fm = std::get_if<FamilyDecl>(&d.node)) {
        s = "family " + fm->name;
    } else if (auto* r = std::get_if<RuleDecl>(&d.node)) {
        s = rule_dsl(r->rule);
    } else if (auto* i = std::get_if<IdealDecl>(&d.node)) {
        s = "ideal " + i->name + " = " + ideal_expr_str(i->expr);
    } else if (auto* p = std::get_if<PolyDecl>(&d.node)) {
        s = "poly " + p->name + " = ";
        for (std::size_t k = 0; k < p->terms.size(); ++k) {
            if (k) s += " + ";
            s += poly_term_str(p->terms[k]);
        }
    } else if (auto* u = std::get_if<UpperDecl>(&d.node)) {
        s = "upper " + u->name + " = u2z(" + u->poly + ")";
    } else if (auto* b = std::get_if<BoundsDecl>(&d.node)) {
        s = "bounds degree " + std::to_string(b->bounds.degree) + " window " +
            std::to_string(b->bounds.window) + " enlargement " +
            std::to_string(b->bounds.enlargement_degree) + " certs " +
            std::to_string(b->bounds.cert_samples) + " seed " +
            std::to_string(b->bounds.seed);
    } else if (auto* a = std::get_if<AssertionSyntax>(&d.node)) {
        s = "assert " + a->tag + " " + assertion_call_str(*a) + " expect " + a->expect;
    } else if (auto* f = std::get_if<FixtureSyntax>(&d.node)) {
        s = "fixture " + f->ideal;
        if (f->witness_names)
            s += " witness(" + (*f->witness_names)[0] + ", " + f->witness_member->str() +
                 ", " + (*f->witness_names)[1] + ")";
        s += " expect ";
        for (std::size_t k = 0; k < f->expect.size(); ++k) {
            if (k) s += ", ";
            s += f->expect[k].first + " " + f->expect[k].second;
        }
    }
    return s + ";";
}

// ------------------------------------------------------------- compiling --

const std::set<std::string>& reserved_words()
{
    static const std::set<std::string> words{
        "R",      "X",          "vars",    "family", "rule",    "ideal",
        "poly",   "upper",      "bounds",  "assert", "fixture", "gens",
        "constraint", "colon",  "intersect", "scale", "extend", "shift",
        "deg",    "exists",     "at",      "u2z",    "witness", "expect",
        "linear", "support",    "n",       "proved", "refuted", "inconclusive"};
    return words;
}

const std::set<std::string>& predicate_names()
{
    static const std::set<std::string> preds{
        "prime",      "divisorial",   "t_ideal",      "strong",
        "proper_v_closure", "v_finite", "v_invertible", "t_invertible",
        "maximal_divisorial", "t_maximal"};
    return preds;
}

class Compiler {
public:
    Compiler(const ParsedFile& f, const Bounds& defaults) : file_(f)
    {
        out_.bounds = defaults;
    }

    CompiledScenario run()
    {
        for (const auto& d : file_.decls)
            if (auto* b = std::get_if<BoundsDecl>(&d.node)) {
                out_.bounds = b->bounds;
                out_.has_bounds = true;
            }
        for (const auto& d : file_.decls) compile_decl(d);
        if (!frozen_) freeze(file_.decls.empty() ? SourceSpan{file_.file, 1, 1}
                                                 : file_.decls.back().span);
        return std::move(out_);
    }

private:
    const ParsedFile& file_;
    CompiledScenario out_;
    std::vector<std::string> scalars_, families_;
    std::vector<MonoidRule> rules_;
    bool frozen_ = false;

    [[noreturn]] void fail(const SourceSpan& span, const std::string& msg) const
    {
        throw parse_error({span, msg});
    }

    void claim_name(const SourceSpan& span, const std::string& n)
    {
        if (reserved_words().count(n)) fail(span, "'" + n + "' is a reserved word");
        if (out_.ideals.count(n) || out_.polys.count(n) || out_.uppers.count(n) ||
            out_.extended.count(n) ||
            std::find(scalars_.begin(), scalars_.end(), n) != scalars_.end() ||
            std::find(families_.begin(), families_.end(), n) != families_.end())
            fail(span, "duplicate name '" + n + "'");
    }

    void freeze(const SourceSpan& span)
    {
        if (frozen_) return;
        if (scalars_.empty() && families_.empty())
            fail(span, "no vars or family declared before first use");
        std::vector<MonoidRule> rules;
        rules.emplace_back(NonNegRule{});
        for (auto& r : rules_) rules.push_back(std::move(r));
        out_.spec = std::make_shared<MonoidSpec>(scalars_, families_, std::move(rules));
        frozen_ = true;
    }

    void check_universe(const SourceSpan& span, const ExponentVector& m)
    {
        try {
            out_.spec->require_in_universe(m);
        } catch (const input_error& e) {
            fail(span, e.what());
        }
    }

    void check_selector(const SourceSpan& span, const Selector& s)
    {
        const bool scalar_like = s.kind == Selector::Kind::Scalar;
        const bool family_like = s.kind == Selector::Kind::IndexedOne ||
                                 s.kind == Selector::Kind::FamilyAll ||
                                 s.kind == Selector::Kind::FamilyUpTo;
        if (scalar_like &&
            std::find(scalars_.begin(), scalars_.end(), s.name) == scalars_.end())
            fail(span, "unknown variable '" + s.name + "'");
        if (family_like &&
            std::find(families_.begin(), families_.end(), s.name) == families_.end())
            fail(span, "unknown family '" + s.name + "'");
    }

    FracIdealPtr eval(const IdealExpr& e)
    {
        switch (e.kind) {
        case IdealExpr::Kind::Ring: return FracIdeal::ring(out_.spec);
        case IdealExpr::Kind::Name: {
            auto it = out_.ideals.find(e.name);
            if (it != out_.ideals.end()) return it->second;
            if (out_.polys.count(e.name) || out_.uppers.count(e.name) ||
                out_.extended.count(e.name))
                fail(e.span, "'" + e.name + "' is not a monomial ideal");
            fail(e.span, "unknown identifier '" + e.name + "'");
        }
        case IdealExpr::Kind::Gens: {
            for (const auto& g : e.gens) check_universe(e.span, g);
            return FracIdeal::fingen(out_.spec, e.gens);
        }
        case IdealExpr::Kind::Constraint: {
            for (const auto& a : e.atoms) {
                if (auto* sh = std::get_if<ShiftAtom>(&a)) check_universe(e.span, sh->m);
                if (auto* dg = std::get_if<DegreeAtom>(&a))
                    for (const auto& s : dg->d.selectors) check_selector(e.span, s);
                if (auto* su = std::get_if<SupportAtom>(&a)) {
                    for (const auto& s : su->selectors) check_selector(e.span, s);
                    check_universe(e.span, su->offset);
                }
            }
            return FracIdeal::constraint(out_.spec, e.atoms);
        }
        case IdealExpr::Kind::Colon: return FracIdeal::colon(eval(e.parts[0]), eval(e.parts[1]));
        case IdealExpr::Kind::Intersect: {
            std::vector<FracIdealPtr> parts;
            for (const auto& p : e.parts) parts.push_back(eval(p));
            return FracIdeal::intersect(std::move(parts));
        }
        case IdealExpr::Kind::Scale:
            check_universe(e.span, e.factor);
            return FracIdeal::translate(eval(e.parts[0]), e.factor);
        case IdealExpr::Kind::Extend:
            fail(e.span, "extend(...) may only stand alone in an ideal declaration");
        }
        fail(e.span, "unreachable ideal expression");
    }

    void need_family(const SourceSpan& span, const std::string& fam)
    {
        if (!out_.spec->has_family(fam)) fail(span, "unknown family '" + fam + "'");
    }

    void compile_decl(const Decl& d)
    {
        if (auto* v = std::get_if<VarsDecl>(&d.node)) {
            if (frozen_) fail(d.span, "monoid declarations must precede ideals and assertions");
            for (const auto& n : v->names) {
                claim_name(d.span, n);
                scalars_.push_back(n);
            }
        } else if (auto* fm = std::get_if<FamilyDecl>(&d.node)) {
            if (frozen_) fail(d.span, "monoid declarations must precede ideals and assertions");
            claim_name(d.span, fm->name);
            families_.push_back(fm->name);
        } else if (auto* r = std::get_if<RuleDecl>(&d.node)) {
            if (frozen_) fail(d.span, "monoid declarations must precede ideals and assertions");
            if (auto* lin = std::get_if<LinearDegreeRule>(&r->rule)) {
                for (const auto& s : lin->lhs.selectors) check_selector(d.span, s);
                if (std::find(families_.begin(), families_.end(), lin->family) ==
                    families_.end())
                    fail(d.span, "unknown family '" + lin->family + "'");
            }
            if (auto* sup = std::get_if<SupportRule>(&r->rule)) {
                check_selector(d.span, sup->trigger);
                for (const auto& w : sup->witnesses) {
                    const bool fam = w.kind != SupportRule::Witness::Kind::Scalar;
                    check_selector(d.span, fam ? Selector::family_all(w.name)
                                               : Selector::scalar(w.name));
                }
            }
            rules_.push_back(r->rule);
        } else if (auto* i = std::get_if<IdealDecl>(&d.node)) {
            freeze(d.span);
            claim_name(d.span, i->name);
            if (i->expr.kind == IdealExpr::Kind::Extend) {
                auto it = out_.ideals.find(i->expr.name);
                if (it == out_.ideals.end())
                    fail(d.span, "unknown identifier '" + i->expr.name + "'");
                out_.extended.emplace(i->name, extend_ideal(it->second));
            } else {
                out_.ideals.emplace(i->name, eval(i->expr)->named(i->name));
            }
        } else if (auto* p = std::get_if<PolyDecl>(&d.node)) {
            freeze(d.span);
            claim_name(d.span, p->name);
            RingPoly poly;
            for (const auto& t : p->terms) {
                check_universe(d.span, t.mono);
                poly = poly.add(RingPoly::term(t.mono, t.xpow, t.coeff));
            }
            out_.polys.emplace(p->name, std::move(poly));
        } else if (auto* u = std::get_if<UpperDecl>(&d.node)) {
            freeze(d.span);
            claim_name(d.span, u->name);
            auto it = out_.polys.find(u->poly);
            if (it == out_.polys.end())
                fail(d.span, "unknown polynomial '" + u->poly + "'");
            try {
                out_.uppers.emplace(
                    u->name, upper_to_zero(it->second, out_.spec,
                                           out_.spec->integrally_closed(out_.bounds)));
            } catch (const input_error& e) {
                fail(d.span, e.what());
            }
        } else if (std::get_if<BoundsDecl>(&d.node)) {
            // collected in a pre-pass
        } else if (auto* a = std::get_if<AssertionSyntax>(&d.node)) {
            freeze(d.span);
            check_assertion(d.span, *a);
            out_.assertions.push_back(*a);
        } else if (auto* f = std::get_if<FixtureSyntax>(&d.node)) {
            freeze(d.span);
            compile_fixture(d.span, *f);
        }
    }

    bool is_upper(const std::string& n) const { return out_.uppers.count(n) != 0; }
    bool is_ideal(const std::string& n) const { return out_.ideals.count(n) != 0; }
    bool is_extended(const std::string& n) const { return out_.extended.count(n) != 0; }

    void need_subject(const SourceSpan& span, const std::string& n, bool upper_ok)
    {
        if (is_ideal(n)) return;
        if (is_upper(n)) {
            if (!upper_ok) fail(span, "predicate not available for uppers to zero");
            return;
        }
        fail(span, "unknown identifier '" + n + "'");
    }

    void check_assertion(const SourceSpan& span, const AssertionSyntax& a)
    {
        switch (a.op) {
        case AssertOp::Closure:
        case AssertOp::IntegrallyClosed:
        case AssertOp::CompletelyIntegrallyClosed: return;
        case AssertOp::Prime:
        case AssertOp::Divisorial:
        case AssertOp::TIdeal:
        case AssertOp::Strong:
        case AssertOp::VInvertible:
        case AssertOp::MaxDiv: need_subject(span, a.names[0], true); return;
        case AssertOp::VFinite:
        case AssertOp::TInvertible:
        case AssertOp::TMaximal: need_subject(span, a.names[0], false); return;
        case AssertOp::NotTMaximal: {
            need_subject(span, a.names[0], true);
            const bool upper = is_upper(a.names[0]);
            if (upper && !is_extended(a.names[1]))
                fail(span, "'" + a.names[1] + "' must be an extended ideal");
            if (!upper && !is_ideal(a.names[1]))
                fail(span, "'" + a.names[1] + "' must be a monomial ideal");
            check_universe(span, a.monos[0]);
            need_family(span, a.names[2]);
            return;
        }
        case AssertOp::Member:
            if (!is_ideal(a.names[0]) && !is_upper(a.names[0]) &&
                !is_extended(a.names[0]))
                fail(span, "unknown identifier '" + a.names[0] + "'");
            check_universe(span, a.monos[0]);
            return;
        case AssertOp::Subset:
        case AssertOp::Equal:
            // Evaluated for side-effectful validation; results are rebuilt at
            // run time from the stored expressions.
            eval(a.exprs[0]);
            eval(a.exprs[1]);
            return;
        }
    }

    void compile_fixture(const SourceSpan& span, const FixtureSyntax& f)
    {
        auto it = out_.ideals.find(f.ideal);
        if (it == out_.ideals.end())
            fail(span, "unknown identifier '" + f.ideal + "'");
        ClassifiedFixture fx;
        fx.name = f.ideal;
        fx.ideal = it->second;
        if (f.witness_names) {
            auto wit = out_.ideals.find((*f.witness_names)[0]);
            if (wit == out_.ideals.end())
                fail(span, "unknown identifier '" + (*f.witness_names)[0] + "'");
            check_universe(span, *f.witness_member);
            need_family(span, (*f.witness_names)[1]);
            fx.witness =
                NotTMaximalWitness{wit->second, *f.witness_member, (*f.witness_names)[1]};
        }
        for (const auto& [pred, verdict] : f.expect) {
            if (!predicate_names().count(pred))
                fail(span, "unknown predicate '" + pred + "'");
            fx.expected[pred] = verdict;
        }
        out_.fixtures.push_back(std::move(fx));
    }
};

} // namespace

std::string assertion_call_str(const AssertionSyntax& a)
{
    std::string s = std::string(assert_op_name(a.op)) + "(";
    switch (a.op) {
    case AssertOp::Closure:
    case AssertOp::IntegrallyClosed:
    case AssertOp::CompletelyIntegrallyClosed: break;
    case AssertOp::NotTMaximal:
        s += a.names[0] + ", " + a.names[1] + ", " + a.monos[0].str() + ", " + a.names[2];
        break;
    case AssertOp::Member: s += a.names[0] + ", " + a.monos[0].str(); break;
    case AssertOp::Subset:
    case AssertOp::Equal:
        s += ideal_expr_str(a.exprs[0]) + ", " + ideal_expr_str(a.exprs[1]);
        break;
    default: s += a.names[0];
    }
    return s + ")";
}

FracIdealPtr eval_ideal_expr(const CompiledScenario& sc, const IdealExpr& e)
{
    switch (e.kind) {
    case IdealExpr::Kind::Ring: return FracIdeal::ring(sc.spec);
    case IdealExpr::Kind::Name: {
        auto it = sc.ideals.find(e.name);
        if (it == sc.ideals.end())
            throw input_error("'" + e.name + "' is not a monomial ideal");
        return it->second;
    }
    case IdealExpr::Kind::Gens: return FracIdeal::fingen(sc.spec, e.gens);
    case IdealExpr::Kind::Constraint: return FracIdeal::constraint(sc.spec, e.atoms);
    case IdealExpr::Kind::Colon:
        return FracIdeal::colon(eval_ideal_expr(sc, e.parts[0]),
                                eval_ideal_expr(sc, e.parts[1]));
    case IdealExpr::Kind::Intersect: {
        std::vector<FracIdealPtr> parts;
        for (const auto& p : e.parts) parts.push_back(eval_ideal_expr(sc, p));
        return FracIdeal::intersect(std::move(parts));
    }
    case IdealExpr::Kind::Scale:
        return FracIdeal::translate(eval_ideal_expr(sc, e.parts[0]), e.factor);
    case IdealExpr::Kind::Extend:
        throw input_error("extend(...) is not a monomial ideal");
    }
    throw input_error("unreachable ideal expression");
}

ParsedFile parse_file(const std::string& text, const std::string& filename)
{
    Parser p(lex(text, filename), filename);
    return p.parse();
}

std::string print_file(const ParsedFile& f)
{
    std::string out;
    for (const auto& d : f.decls) out += decl_str(d) + "\n";
    return out;
}

CompiledScenario compile(const ParsedFile& f, const Bounds& defaults)
{
    Compiler c(f, defaults);
    return c.run();
}

} // namespace staride
