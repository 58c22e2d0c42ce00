#include "qtt/frontend.hpp"

#include <cctype>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "qtt/pretty.hpp"

namespace qtt::frontend {

using kernel::Regime;
using kernel::TermPtr;
using kernel::TypeExprPtr;
namespace tm = kernel::tm;
namespace ty = kernel::ty;

namespace {

constexpr const char* kSyntax = "Syntax";

// ---------------------------------------------------------------- lexer

enum class Tok { Ident, Num, Sym, RInv, Pragma, End };

struct Token {
    Tok kind;
    std::string text;
    Span span;
    bool spaceBefore = true;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        bool space = true;
        while (true) {
            space = skip_blank() || space;
            if (pos_ >= src_.size()) {
                out.push_back(Token{Tok::End, "", here(0), space});
                return out;
            }
            Token t = next(atLineStart_);
            t.spaceBefore = space;
            out.push_back(std::move(t));
            space = false;
        }
    }

private:
    Span here(int len) const { return Span{line_, col_, line_, col_ + len}; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
            atLineStart_ = true;
        } else {
            ++col_;
            if (!std::isspace(static_cast<unsigned char>(src_[pos_]))) atLineStart_ = false;
        }
        ++pos_;
    }

    bool skip_blank() {
        bool skipped = false;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
                skipped = true;
            } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
                skipped = true;
            } else {
                break;
            }
        }
        return skipped;
    }

    Token next(bool lineStart) {
        const int l = line_, c = col_;
        auto finish = [&](Tok k, std::string text) { return Token{k, std::move(text), Span{l, c, line_, col_}}; };
        char ch = src_[pos_];
        if (ch == '#' && lineStart) {
            std::string text;
            advance();
            while (pos_ < src_.size() && src_[pos_] != '\n') {
                text += src_[pos_];
                advance();
            }
            while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
            return finish(Tok::Pragma, text);
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::string text;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                                          src_[pos_] == '\'')) {
                text += src_[pos_];
                advance();
            }
            if (text == "R" && src_.compare(pos_, 3, "^-1") == 0) {
                for (int i = 0; i < 3; ++i) advance();
                return finish(Tok::RInv, "R^-1");
            }
            return finish(Tok::Ident, text);
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::string text;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                text += src_[pos_];
                advance();
            }
            return finish(Tok::Num, text);
        }
        static const char* multi[] = {"<*>", "->", "=>", "<>"};
        for (const char* m : multi) {
            std::size_t n = std::char_traits<char>::length(m);
            if (src_.compare(pos_, n, m) == 0) {
                for (std::size_t i = 0; i < n; ++i) advance();
                return finish(Tok::Sym, m);
            }
        }
        static const std::string single = "(){}[],;:.\\*^=";
        if (single.find(ch) != std::string::npos) {
            advance();
            return finish(Tok::Sym, std::string(1, ch));
        }
        fail(kSyntax, std::string("unexpected character '") + ch + "'", Span{l, c, l, c + 1});
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    bool atLineStart_ = true;
};

// ---------------------------------------------------------------- parser

SynPtr node(SynKind k, Span s, std::vector<SynPtr> kids = {}) {
    auto n = std::make_shared<Syn>();
    n->kind = k;
    n->span = s;
    n->kids = std::move(kids);
    return n;
}

Span join(Span a, Span b) {
    if (!a.known()) return b;
    if (!b.known()) return a;
    return Span{a.line, a.col, b.end_line, b.end_col};
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

    SourceModule module() {
        SourceModule m;
        while (peek().kind != Tok::End) {
            if (peek().kind == Tok::Pragma) {
                Token p = take();
                if (p.text.rfind("regime", 0) == 0) {
                    std::string arg = p.text.substr(6);
                    arg.erase(0, arg.find_first_not_of(" \t"));
                    if (arg == "consfree") m.regime = Regime::ConsFree;
                    else if (arg == "lfpl") m.regime = Regime::Lfpl;
                    else fail(kSyntax, "unknown regime '" + arg + "' (expected consfree or lfpl)", p.span);
                } else {
                    m.pragmas.push_back(p.text);
                }
                continue;
            }
            m.decls.push_back(decl());
        }
        return m;
    }

    SynPtr standalone() {
        SynPtr e = expr();
        if (peek().kind != Tok::End) error("unexpected input after expression");
        return e;
    }

private:
    const Token& peek(std::size_t k = 0) const { return t_[std::min(i_ + k, t_.size() - 1)]; }
    Token take() { return t_[std::min(i_++, t_.size() - 1)]; }
    bool is_sym(const char* s, std::size_t k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
    bool is_kw(const char* s, std::size_t k = 0) const { return peek(k).kind == Tok::Ident && peek(k).text == s; }

    [[noreturn]] void error(const std::string& msg) {
        const Token& t = peek();
        std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        fail(kSyntax, msg + " (found " + found + ")", t.span);
    }

    Token expect_sym(const char* s) {
        if (!is_sym(s)) error(std::string("expected '") + s + "'");
        return take();
    }
    void expect_kw(const char* s) {
        if (!is_kw(s)) error(std::string("expected '") + s + "'");
        take();
    }
    std::string binder() {
        if (peek().kind != Tok::Ident || (pretty::is_keyword(peek().text) && peek().text != "_"))
            error("expected a binder name");
        return take().text;
    }
    std::uint64_t number() {
        if (peek().kind != Tok::Num) error("expected a number");
        Token t = take();
        try {
            return std::stoull(t.text);
        } catch (const std::exception&) {
            fail(kSyntax, "number literal out of range", t.span);
        }
    }

    SourceDecl decl() {
        Span start = peek().span;
        expect_kw("def");
        SourceDecl d;
        d.name = binder();
        expect_sym("^");
        std::uint64_t s = number();
        if (s > 1) fail(kSyntax, "declaration fragment must be ^0 or ^1", t_[i_ - 1].span);
        d.sigma = s == 1 ? kernel::Fragment::One : kernel::Fragment::Zero;
        expect_sym(":");
        d.type = expr();
        expect_sym("=");
        d.body = expr();
        d.span = join(start, d.body->span);
        return d;
    }

    // Optional `return z. P`.
    void motive(std::shared_ptr<Syn>& n) {
        if (!is_kw("return")) return;
        take();
        std::string z = binder();
        expect_sym(".");
        n->motive = expr();
        n->binders.push_back(z);
    }

    SynPtr expr() {
        const Token& t = peek();
        Span start = t.span;
        if (is_sym("\\")) {
            take();
            return lambda(start);
        }
        if (is_kw("let")) {
            take();
            std::shared_ptr<Syn> n;
            if (is_kw("tt")) {
                take();
                n = std::const_pointer_cast<Syn>(node(SynKind::LetUnit, start));
            } else {
                expect_sym("(");
                n = std::const_pointer_cast<Syn>(node(SynKind::LetPair, start));
                n->binders.push_back(binder());
                expect_sym(",");
                n->binders.push_back(binder());
                expect_sym(")");
            }
            expect_sym("=");
            SynPtr scrut = expr();
            motive(n);
            expect_kw("in");
            SynPtr body = expr();
            n->kids = {scrut, body};
            n->span = join(start, body->span);
            return n;
        }
        if (is_kw("if")) {
            take();
            auto n = std::const_pointer_cast<Syn>(node(SynKind::If, start));
            SynPtr c = expr();
            motive(n);
            expect_kw("then");
            SynPtr a = expr();
            expect_kw("else");
            SynPtr b = expr();
            n->kids = {c, a, b};
            n->span = join(start, b->span);
            return n;
        }
        if (is_kw("match") || is_kw("reclist") || is_kw("rec")) return eliminator();
        return arrow();
    }

    SynPtr lambda(Span start) {
        // One or more binders (names or pair patterns), then '.', then the body.
        struct B {
            bool pair;
            std::string a, b;
        };
        std::vector<B> bs;
        while (!is_sym(".")) {
            if (is_sym("(")) {
                take();
                B b{true, binder(), ""};
                expect_sym(",");
                b.b = binder();
                expect_sym(")");
                bs.push_back(b);
            } else {
                bs.push_back(B{false, binder(), ""});
            }
        }
        if (bs.empty()) error("expected a binder after '\\'");
        take();
        SynPtr body = expr();
        for (auto it = bs.rbegin(); it != bs.rend(); ++it) {
            auto n = std::const_pointer_cast<Syn>(node(it->pair ? SynKind::LamPair : SynKind::Lam,
                                                       join(start, body->span), {body}));
            n->binders.push_back(it->a);
            if (it->pair) n->binders.push_back(it->b);
            body = n;
        }
        return body;
    }

    SynPtr eliminator() {
        Token kw = take();
        Span start = kw.span;
        auto n = std::make_shared<Syn>();
        n->span = start;
        SynPtr scrut = expr();
        // The motive binder goes last; branch binders are collected first.
        SynPtr mot;
        std::string z;
        if (is_kw("return")) {
            take();
            z = binder();
            expect_sym(".");
            mot = expr();
        }
        expect_sym("{");
        std::vector<std::string> bs;
        SynPtr first, second;
        if (kw.text == "match" || kw.text == "reclist") {
            n->kind = kw.text == "match" ? SynKind::Match : SynKind::RecList;
            expect_kw("nil");
            expect_sym("=>");
            first = expr();
            expect_sym(";");
            expect_kw("cons");
            expect_sym("(");
            bs.push_back(binder());
            expect_sym(",");
            bs.push_back(binder());
            if (n->kind == SynKind::RecList) {
                expect_sym(";");
                bs.push_back(binder());
            }
            expect_sym(")");
            expect_sym("=>");
            second = expr();
        } else {
            expect_kw("zero");
            bool lfpl = false;
            if (is_sym("(")) {
                lfpl = true;
                take();
                bs.push_back(binder());
                expect_sym(")");
            }
            n->kind = lfpl ? SynKind::RecD : SynKind::Rec;
            expect_sym("=>");
            first = expr();
            expect_sym(";");
            expect_kw("succ");
            expect_sym("(");
            if (lfpl) {
                bs.push_back(binder());
                expect_sym(",");
            }
            bs.push_back(binder());
            expect_sym(";");
            bs.push_back(binder());
            expect_sym(")");
            expect_sym("=>");
            second = expr();
        }
        if (is_sym(";")) take();
        Token close = expect_sym("}");
        n->kids = {scrut, first, second};
        n->binders = bs;
        if (mot) {
            n->motive = mot;
            n->binders.push_back(z);
        }
        n->span = join(start, close.span);
        return n;
    }

    // `(x ^k : S)` followed by `->` or `*`. Returns false (and rewinds) otherwise.
    bool binder_group(std::string& name, std::uint64_t& usage, SynPtr& dom) {
        if (!is_sym("(") || peek(1).kind != Tok::Ident || pretty::is_keyword(peek(1).text)) return false;
        if (!(is_sym("^", 2) || is_sym(":", 2))) return false;
        const std::size_t save = i_;
        try {
            take();
            name = take().text;
            usage = 1;
            bool explicitUsage = false;
            if (is_sym("^")) {
                take();
                usage = number();
                explicitUsage = true;
            }
            expect_sym(":");
            dom = expr();
            expect_sym(")");
            if (is_sym("->") || is_sym("*")) return true;
            if (explicitUsage) error("expected '->' or '*' after a usage-annotated binder");
        } catch (const DiagnosticError&) {
            i_ = save;
            throw;
        }
        i_ = save;
        return false;
    }

    SynPtr arrow() {
        SynPtr lhs = prod();
        if (is_sym("->")) {
            take();
            SynPtr rhs = expr();
            return node(SynKind::Arrow, join(lhs->span, rhs->span), {lhs, rhs});
        }
        return lhs;
    }

    SynPtr prod() {
        Span start = peek().span;
        std::string name;
        std::uint64_t usage = 1;
        SynPtr dom;
        if (binder_group(name, usage, dom)) {
            const bool isArrow = is_sym("->");
            take();
            SynPtr rest = isArrow ? expr() : prod();
            auto n = std::const_pointer_cast<Syn>(
                node(isArrow ? SynKind::DepArrow : SynKind::DepProd, join(start, rest->span), {dom, rest}));
            n->num = usage;
            n->binders.push_back(name);
            return n;
        }
        SynPtr lhs = app();
        if (is_sym("*")) {
            take();
            SynPtr rhs = prod();
            return node(SynKind::Prod, join(lhs->span, rhs->span), {lhs, rhs});
        }
        return lhs;
    }

    bool atom_start() const {
        const Token& t = peek();
        if (t.kind == Tok::Num || t.kind == Tok::RInv) return true;
        if (t.kind == Tok::Sym) return t.text == "(" || t.text == "[" || t.text == "<>" || t.text == "<*>";
        if (t.kind != Tok::Ident) return false;
        static const std::unordered_set<std::string> atomKw = {
            "tt", "true", "false", "nil", "zero", "succ", "dup", "fst", "snd", "refl", "R",
            "Id", "code", "cons", "U", "Bool", "Nat", "Unit"};
        return !pretty::is_keyword(t.text) || atomKw.count(t.text);
    }

    SynPtr app() {
        Span start = peek().span;
        if (is_kw("List") || is_kw("El")) {
            const bool list = peek().text == "List";
            take();
            SynPtr a = atom();
            return node(list ? SynKind::ListT : SynKind::El, join(start, a->span), {a});
        }
        SynPtr head = atom();
        while (atom_start()) {
            SynPtr a = atom();
            head = node(SynKind::App, join(head->span, a->span), {head, a});
        }
        return head;
    }

    std::vector<SynPtr> call_args(std::size_t min, std::size_t max) {
        expect_sym("(");
        std::vector<SynPtr> args{expr()};
        while (is_sym(",")) {
            take();
            args.push_back(expr());
        }
        if (args.size() < min || args.size() > max) error("wrong number of arguments");
        expect_sym(")");
        return args;
    }

    SynPtr atom() {
        const Token t = peek();
        Span s = t.span;
        auto done = [&](SynKind k, std::vector<SynPtr> kids = {}) {
            return node(k, join(s, t_[i_ - 1].span), std::move(kids));
        };
        if (t.kind == Tok::Num) {
            auto n = std::const_pointer_cast<Syn>(node(SynKind::Num, s));
            n->num = number();
            return n;
        }
        if (t.kind == Tok::RInv) {
            take();
            auto a = call_args(1, 1);
            return done(SynKind::RElim, a);
        }
        if (t.kind == Tok::Sym) {
            if (t.text == "<>") {
                take();
                return done(SynKind::Diamond);
            }
            if (t.text == "<*>") {
                take();
                return done(SynKind::DiamondStar);
            }
            if (t.text == "[") {
                take();
                std::vector<SynPtr> items;
                if (!is_sym("]")) {
                    items.push_back(expr());
                    while (is_sym(",")) {
                        take();
                        items.push_back(expr());
                    }
                }
                expect_sym("]");
                return done(SynKind::ListLit, items);
            }
            if (t.text == "(") {
                take();
                SynPtr e = expr();
                if (is_sym(":")) {
                    take();
                    SynPtr ty_ = expr();
                    expect_sym(")");
                    return done(SynKind::Ann, {e, ty_});
                }
                if (is_sym(",")) {
                    std::vector<SynPtr> items{e};
                    while (is_sym(",")) {
                        take();
                        items.push_back(expr());
                    }
                    expect_sym(")");
                    Span whole = join(s, t_[i_ - 1].span);
                    SynPtr acc = items.back();
                    for (std::size_t k = items.size() - 1; k-- > 0;)
                        acc = node(SynKind::Pair, whole, {items[k], acc});
                    return acc;
                }
                expect_sym(")");
                return e;
            }
            error("expected an expression");
        }
        if (t.kind != Tok::Ident) error("expected an expression");
        const std::string& w = t.text;
        if (!pretty::is_keyword(w)) {
            take();
            auto n = std::const_pointer_cast<Syn>(node(SynKind::Ident, s));
            n->name = w;
            return n;
        }
        take();
        auto adjacentParen = [&] { return is_sym("(") && !peek().spaceBefore; };
        if (w == "tt") return done(SynKind::Tt);
        if (w == "true") return done(SynKind::True);
        if (w == "false") return done(SynKind::False);
        if (w == "nil") return done(SynKind::Nil);
        if (w == "U") return done(SynKind::Universe);
        if (w == "Bool") return done(SynKind::BoolT);
        if (w == "Nat") return done(SynKind::NatT);
        if (w == "Unit") return done(SynKind::UnitT);
        if (w == "zero") {
            if (adjacentParen()) return done(SynKind::ZeroD, call_args(1, 1));
            return done(SynKind::Zero);
        }
        if (w == "succ") {
            auto a = call_args(1, 2);
            return done(a.size() == 1 ? SynKind::Succ : SynKind::SuccD, a);
        }
        if (w == "dup") return done(SynKind::Dup, call_args(1, 1));
        if (w == "fst") return done(SynKind::Fst, call_args(1, 1));
        if (w == "snd") return done(SynKind::Snd, call_args(1, 1));
        if (w == "refl") return done(SynKind::Refl, call_args(1, 1));
        if (w == "R") return done(SynKind::RIntro, call_args(1, 1));
        if (w == "Id") return done(SynKind::Id, call_args(3, 3));
        if (w == "code") return done(SynKind::CodeOf, call_args(1, 1));
        if (w == "cons") return done(SynKind::Cons, call_args(2, 2));
        fail(kSyntax, "unexpected keyword '" + w + "'", s);
    }

    std::vector<Token> t_;
    std::size_t i_ = 0;
};

// ---------------------------------------------------------------- resolver

class Resolver {
public:
    Resolver(Regime regime, std::vector<std::string> locals, const std::vector<std::string>& globals)
        : regime_(regime), locals_(std::move(locals)) {
        for (std::size_t i = 0; i < globals.size(); ++i) globals_[globals[i]] = i;
    }

    void add_global(const std::string& name, const Span& span) {
        if (globals_.count(name)) fail("Scope", "duplicate definition '" + name + "'", span);
        globals_[name] = globals_.size();
    }

    template <class F>
    auto under(std::initializer_list<std::string> names, F&& f) {
        for (const auto& n : names) locals_.push_back(n);
        auto r = f();
        locals_.resize(locals_.size() - names.size());
        return r;
    }

    TermPtr term(const SynPtr& s) {
        const Span sp = s->span;
        auto mk = [&](kernel::TermNode n, std::vector<std::string> hints = {}) {
            return kernel::make(std::move(n), sp, std::move(hints));
        };
        const auto& k = s->kids;
        switch (s->kind) {
            case SynKind::Ident: return lookup(s);
            case SynKind::Num: {
                if (s->num > 100000) fail(kSyntax, "numeral too large", sp);
                auto t = kernel::nat_literal(regime_, s->num);
                return kernel::make(TermPtr(t)->node, sp);
            }
            case SynKind::Lam: {
                auto body = under({s->binders[0]}, [&] { return term(k[0]); });
                return mk(tm::Lam{body}, {s->binders[0]});
            }
            case SynKind::LamPair: {
                auto body = under({"", s->binders[0], s->binders[1]}, [&] { return term(k[0]); });
                auto lp = kernel::make(tm::LetPair{kernel::make(tm::Var{0}, sp), body, nullptr}, sp,
                                       {s->binders[0], s->binders[1]});
                return mk(tm::Lam{lp}, {""});
            }
            case SynKind::App: return mk(tm::App{term(k[0]), term(k[1]), std::nullopt});
            case SynKind::Ann: return mk(tm::Ann{term(k[0]), type(k[1])});
            case SynKind::Pair: return mk(tm::Pair{term(k[0]), term(k[1]), std::nullopt});
            case SynKind::Tt: return mk(tm::Star{});
            case SynKind::True: return mk(tm::TrueC{});
            case SynKind::False: return mk(tm::FalseC{});
            case SynKind::Nil: return mk(tm::Nil{});
            case SynKind::ListLit: {
                TermPtr acc = mk(tm::Nil{});
                for (auto it = k.rbegin(); it != k.rend(); ++it)
                    acc = kernel::make(tm::Cons{term(*it), acc}, (*it)->span);
                return acc;
            }
            case SynKind::Cons: return mk(tm::Cons{term(k[0]), term(k[1])});
            case SynKind::Zero: return mk(tm::ZeroCF{});
            case SynKind::ZeroD: return mk(tm::ZeroL{term(k[0])});
            case SynKind::Succ: return mk(tm::SuccCF{term(k[0])});
            case SynKind::SuccD: return mk(tm::SuccL{term(k[0]), term(k[1])});
            case SynKind::Dup: return mk(tm::DupNat{term(k[0])});
            case SynKind::Fst: return mk(tm::Fst{term(k[0])});
            case SynKind::Snd: return mk(tm::Snd{term(k[0])});
            case SynKind::Refl: return mk(tm::Refl{term(k[0])});
            case SynKind::RIntro: return mk(tm::ReflectIntro{term(k[0])});
            case SynKind::RElim: return mk(tm::ReflectElim{term(k[0])});
            case SynKind::DiamondStar: return mk(tm::DiamondStar{});
            case SynKind::CodeOf: return mk(tm::Code{type(k[0])});
            case SynKind::LetPair: {
                auto scrut = term(k[0]);
                auto m = motive(s);
                auto body = under({s->binders[0], s->binders[1]}, [&] { return term(k[1]); });
                return mk(tm::LetPair{scrut, body, m}, s->binders);
            }
            case SynKind::LetUnit: {
                auto scrut = term(k[0]);
                auto m = motive(s);
                return mk(tm::LetUnit{scrut, term(k[1]), m}, s->binders);
            }
            case SynKind::If: {
                auto c = term(k[0]);
                auto m = motive(s);
                return mk(tm::If{c, term(k[1]), term(k[2]), m}, s->binders);
            }
            case SynKind::Match: {
                auto scrut = term(k[0]);
                auto m = motive(s);
                auto nilB = term(k[1]);
                auto consB = under({s->binders[0], s->binders[1]}, [&] { return term(k[2]); });
                return mk(tm::MatchList{scrut, nilB, consB, m}, s->binders);
            }
            case SynKind::RecList: {
                auto scrut = term(k[0]);
                auto m = motive(s);
                auto nilB = term(k[1]);
                auto consB = under({s->binders[0], s->binders[1], s->binders[2]}, [&] { return term(k[2]); });
                return mk(tm::RecList{scrut, nilB, consB, m}, s->binders);
            }
            case SynKind::Rec: {
                auto scrut = term(k[0]);
                auto m = motive(s);
                auto zb = term(k[1]);
                auto sb = under({s->binders[0], s->binders[1]}, [&] { return term(k[2]); });
                return mk(tm::RecNatCF{scrut, zb, sb, m}, s->binders);
            }
            case SynKind::RecD: {
                auto scrut = term(k[0]);
                auto m = motive(s);
                auto zb = under({s->binders[0]}, [&] { return term(k[1]); });
                auto sb = under({s->binders[1], s->binders[2], s->binders[3]}, [&] { return term(k[2]); });
                return mk(tm::RecNatL{scrut, zb, sb, m}, s->binders);
            }
            default:
                // Type formers in term position denote their universe codes.
                return mk(tm::Code{type(s)});
        }
    }

    TypeExprPtr type(const SynPtr& s) {
        const Span sp = s->span;
        auto mk = [&](kernel::TypeNode n, std::vector<std::string> hints = {}) {
            return kernel::make(std::move(n), sp, std::move(hints));
        };
        const auto& k = s->kids;
        switch (s->kind) {
            case SynKind::Arrow: {
                auto a = type(k[0]);
                return mk(ty::Pi{1, a, under({""}, [&] { return type(k[1]); })});
            }
            case SynKind::DepArrow: {
                auto a = type(k[0]);
                return mk(ty::Pi{s->num, a, under({s->binders[0]}, [&] { return type(k[1]); })}, {s->binders[0]});
            }
            case SynKind::Prod: {
                auto a = type(k[0]);
                return mk(ty::Tensor{1, a, under({""}, [&] { return type(k[1]); })});
            }
            case SynKind::DepProd: {
                auto a = type(k[0]);
                return mk(ty::Tensor{s->num, a, under({s->binders[0]}, [&] { return type(k[1]); })},
                          {s->binders[0]});
            }
            case SynKind::UnitT: return mk(ty::UnitTy{});
            case SynKind::BoolT: return mk(ty::BoolTy{});
            case SynKind::NatT: return mk(ty::NatTy{});
            case SynKind::Diamond: return mk(ty::DiamondTy{});
            case SynKind::Universe: return mk(ty::Universe{});
            case SynKind::ListT: return mk(ty::ListTy{type(k[0])});
            case SynKind::Id: return mk(ty::IdTy{type(k[0]), term(k[1]), term(k[2])});
            case SynKind::El: return mk(ty::El{term(k[0])});
            case SynKind::RIntro: return mk(ty::Reflect{type(k[0])});
            default: return mk(ty::El{term(s)});
        }
    }

private:
    TypeExprPtr motive(const SynPtr& s) {
        if (!s->motive) return nullptr;
        return under({s->binders.back()}, [&] { return type(s->motive); });
    }

    TermPtr lookup(const SynPtr& s) {
        const std::string& n = s->name;
        if (n != "_")
            for (std::size_t i = locals_.size(); i-- > 0;)
                if (locals_[i] == n) return kernel::make(tm::Var{locals_.size() - 1 - i}, s->span);
        auto it = globals_.find(n);
        if (it != globals_.end()) return kernel::make(tm::Global{it->second, n}, s->span);
        fail("Scope", "unbound name '" + n + "'", s->span);
    }

    Regime regime_;
    std::vector<std::string> locals_;
    std::unordered_map<std::string, std::size_t> globals_;
};

}  // namespace

SourceModule parse(const std::string& text) {
    Parser p(Lexer(text).run());
    return p.module();
}

ResolvedModule resolve(const SourceModule& m, std::optional<Regime> regimeOverride) {
    ResolvedModule out;
    out.regime = regimeOverride.value_or(m.regime.value_or(Regime::ConsFree));
    out.pragmas = m.pragmas;
    Resolver r(out.regime, {}, {});
    for (const auto& d : m.decls) {
        kernel::Declaration kd;
        kd.name = d.name;
        kd.sigma = d.sigma;
        kd.span = d.span;
        kd.type = r.type(d.type);
        kd.body = r.term(d.body);
        r.add_global(d.name, d.span);
        out.decls.push_back(std::move(kd));
    }
    return out;
}

TermPtr parse_term(const std::string& text, Regime regime, const std::vector<std::string>& locals,
                   const std::vector<std::string>& globals) {
    Parser p(Lexer(text).run());
    SynPtr s = p.standalone();
    Resolver r(regime, locals, globals);
    return r.term(s);
}

TypeExprPtr parse_type(const std::string& text, Regime regime, const std::vector<std::string>& locals,
                       const std::vector<std::string>& globals) {
    Parser p(Lexer(text).run());
    SynPtr s = p.standalone();
    Resolver r(regime, locals, globals);
    return r.type(s);
}

}  // namespace qtt::frontend
