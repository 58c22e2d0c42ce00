#include "qtt/pretty.hpp"

#include <unordered_set>

namespace qtt::pretty {

using namespace kernel;

bool is_keyword(const std::string& s) {
    static const std::unordered_set<std::string> kw = {
        "def", "let", "in", "if", "then", "else", "return", "match", "rec", "reclist", "nil", "cons",
        "zero", "succ", "dup", "fst", "snd", "refl", "R", "Id", "El", "List", "U", "Bool", "Nat",
        "Unit", "tt", "true", "false", "code", "_"};
    return kw.count(s) > 0;
}

std::vector<std::string> global_names(const Signature* sig) {
    std::vector<std::string> out;
    if (sig)
        for (const auto& e : sig->entries) out.push_back(e.name);
    return out;
}

namespace {

// Precedence levels: 0 binders and arrows, 1 tensors, 2 applications, 3 atoms.
enum Level { Top = 0, ProdL = 1, AppL = 2, Atom = 3 };

bool valid_ident(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
    return !is_keyword(s);
}

class Printer {
public:
    explicit Printer(const Names& n) : locals_(n.locals), globals_(n.globals), numerals_(n.numerals) {
        for (const auto& g : globals_) taken_.insert(g);
    }

    std::string term(const TermPtr& t, int level) {
        return std::visit([&](const auto& x) { return term_node(x, t, level); }, t->node);
    }

    std::string type(const TypeExprPtr& t, int level) {
        return std::visit([&](const auto& x) { return type_node(x, t, level); }, t->node);
    }

private:
    static std::string paren(std::string s, int have, int need) { return have < need ? "(" + s + ")" : s; }

    static std::string hint(const std::vector<std::string>& h, std::size_t k) { return k < h.size() ? h[k] : ""; }

    // Chooses a name not currently visible, then brings it into scope.
    std::string bind(const std::string& preferred, const char* fallback) {
        std::string base = valid_ident(preferred) ? preferred : fallback;
        std::string name = base;
        for (int k = 1; in_scope(name) || is_keyword(name); ++k) name = base + std::to_string(k);
        locals_.push_back(name);
        return name;
    }
    void unbind(std::size_t n) { locals_.resize(locals_.size() - n); }
    bool in_scope(const std::string& n) const {
        if (taken_.count(n)) return true;
        for (const auto& l : locals_)
            if (l == n) return true;
        return false;
    }

    std::string motive(const TypeExprPtr& m, const std::vector<std::string>& hints) {
        if (!m) return "";
        std::string z = bind(hints.empty() ? "" : hints.back(), "z");
        std::string s = " return " + z + ". " + type(m, Top);
        unbind(1);
        return s;
    }

    std::optional<std::uint64_t> numeral(const TermPtr& t) const {
        if (!numerals_) return std::nullopt;
        std::uint64_t n = 0;
        const Term* cur = t.get();
        while (true) {
            if (*numerals_ == Regime::ConsFree) {
                if (std::holds_alternative<tm::ZeroCF>(cur->node)) return n;
                auto* s = std::get_if<tm::SuccCF>(&cur->node);
                if (!s) return std::nullopt;
                cur = s->pred.get();
            } else {
                auto is_star = [](const TermPtr& d) { return std::holds_alternative<tm::DiamondStar>(d->node); };
                if (auto* z = std::get_if<tm::ZeroL>(&cur->node)) return is_star(z->d) ? std::optional(n) : std::nullopt;
                auto* s = std::get_if<tm::SuccL>(&cur->node);
                if (!s || !is_star(s->d)) return std::nullopt;
                cur = s->pred.get();
            }
            ++n;
        }
    }

    // ---------------------------------------------------------------- terms

    std::string term_node(const tm::Var& v, const TermPtr&, int) {
        if (v.index >= locals_.size()) return "?" + std::to_string(v.index);
        return locals_[locals_.size() - 1 - v.index];
    }
    std::string term_node(const tm::Global& g, const TermPtr&, int) {
        return g.index < globals_.size() ? globals_[g.index] : g.name;
    }
    std::string term_node(const tm::Lam& l, const TermPtr& t, int level) {
        std::string x = bind(hint(t->hints, 0), "x");
        std::string s = "\\" + x + ". " + term(l.body, Top);
        unbind(1);
        return paren(s, Top, level);
    }
    std::string term_node(const tm::App&, const TermPtr& t, int level) {
        std::vector<const tm::App*> spine;
        const Term* cur = t.get();
        while (auto* a = std::get_if<tm::App>(&cur->node)) {
            spine.push_back(a);
            cur = a->fn.get();
        }
        std::string s = term(spine.back()->fn, Atom);
        for (auto it = spine.rbegin(); it != spine.rend(); ++it) s += " " + term((*it)->arg, Atom);
        return paren(s, AppL, level);
    }
    std::string term_node(const tm::Pair& p, const TermPtr&, int) {
        std::string s = "(" + term(p.fst, Top);
        TermPtr rest = p.snd;
        while (auto* q = std::get_if<tm::Pair>(&rest->node)) {
            s += ", " + term(q->fst, Top);
            rest = q->snd;
        }
        return s + ", " + term(rest, Top) + ")";
    }
    std::string call(const char* f, std::initializer_list<std::string> args) {
        std::string s = std::string(f) + "(";
        bool first = true;
        for (const auto& a : args) {
            if (!first) s += ", ";
            s += a;
            first = false;
        }
        return s + ")";
    }
    std::string term_node(const tm::Fst& f, const TermPtr&, int) { return call("fst", {term(f.pair, Top)}); }
    std::string term_node(const tm::Snd& f, const TermPtr&, int) { return call("snd", {term(f.pair, Top)}); }
    std::string term_node(const tm::LetPair& lp, const TermPtr& t, int level) {
        std::string scrut = term(lp.scrut, Top);
        std::string mot = motive(lp.motive, t->hints.size() > 2 ? t->hints : std::vector<std::string>{});
        std::string x = bind(hint(t->hints, 0), "x");
        std::string y = bind(hint(t->hints, 1), "y");
        std::string body = term(lp.body, Top);
        unbind(2);
        return paren("let (" + x + ", " + y + ") = " + scrut + mot + " in " + body, Top, level);
    }
    std::string term_node(const tm::Star&, const TermPtr&, int) { return "tt"; }
    std::string term_node(const tm::LetUnit& lu, const TermPtr& t, int level) {
        std::string scrut = term(lu.scrut, Top);
        std::string mot = motive(lu.motive, t->hints);
        return paren("let tt = " + scrut + mot + " in " + term(lu.body, Top), Top, level);
    }
    std::string term_node(const tm::TrueC&, const TermPtr&, int) { return "true"; }
    std::string term_node(const tm::FalseC&, const TermPtr&, int) { return "false"; }
    std::string term_node(const tm::If& c, const TermPtr& t, int level) {
        std::string s = "if " + term(c.scrut, Top) + motive(c.motive, t->hints) + " then " + term(c.thenB, Top) +
                        " else " + term(c.elseB, Top);
        return paren(s, Top, level);
    }
    std::string term_node(const tm::Nil&, const TermPtr&, int) { return "nil"; }
    std::string term_node(const tm::Cons& c, const TermPtr&, int) {
        // A spine ending in nil prints as a list literal.
        std::vector<TermPtr> items{c.head};
        TermPtr rest = c.tail;
        while (auto* d = std::get_if<tm::Cons>(&rest->node)) {
            items.push_back(d->head);
            rest = d->tail;
        }
        if (std::holds_alternative<tm::Nil>(rest->node)) {
            std::string s = "[";
            for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ", " : "") + term(items[i], Top);
            return s + "]";
        }
        return call("cons", {term(c.head, Top), term(c.tail, Top)});
    }
    std::string term_node(const tm::MatchList& m, const TermPtr& t, int level) {
        const bool hasMotive = static_cast<bool>(m.motive);
        std::string s = "match " + term(m.scrut, Top) + motive(m.motive, hasMotive ? t->hints : std::vector<std::string>{});
        s += " { nil => " + term(m.nilB, Top) + "; cons(";
        std::string h = bind(hint(t->hints, 0), "h");
        std::string tl = bind(hint(t->hints, 1), "t");
        s += h + ", " + tl + ") => " + term(m.consB, Top) + " }";
        unbind(2);
        return paren(s, Top, level);
    }
    std::string term_node(const tm::RecList& m, const TermPtr& t, int level) {
        const bool hasMotive = static_cast<bool>(m.motive);
        std::string s =
            "reclist " + term(m.scrut, Top) + motive(m.motive, hasMotive ? t->hints : std::vector<std::string>{});
        s += " { nil => " + term(m.nilB, Top) + "; cons(";
        std::string h = bind(hint(t->hints, 0), "h");
        std::string tl = bind(hint(t->hints, 1), "t");
        std::string p = bind(hint(t->hints, 2), "p");
        s += h + ", " + tl + "; " + p + ") => " + term(m.consB, Top) + " }";
        unbind(3);
        return paren(s, Top, level);
    }
    std::string term_node(const tm::ZeroCF&, const TermPtr& t, int) {
        if (numeral(t)) return "0";
        return "zero";
    }
    std::string term_node(const tm::SuccCF& s, const TermPtr& t, int) {
        if (auto n = numeral(t)) return std::to_string(*n);
        return call("succ", {term(s.pred, Top)});
    }
    std::string term_node(const tm::DupNat& d, const TermPtr&, int) { return call("dup", {term(d.arg, Top)}); }
    std::string term_node(const tm::RecNatCF& r, const TermPtr& t, int level) {
        const bool hasMotive = static_cast<bool>(r.motive);
        std::string s = "rec " + term(r.scrut, Top) + motive(r.motive, hasMotive ? t->hints : std::vector<std::string>{});
        s += " { zero => " + term(r.zeroB, Top) + "; succ(";
        std::string n = bind(hint(t->hints, 0), "n");
        std::string p = bind(hint(t->hints, 1), "p");
        s += n + "; " + p + ") => " + term(r.succB, Top) + " }";
        unbind(2);
        return paren(s, Top, level);
    }
    std::string term_node(const tm::DiamondStar&, const TermPtr&, int) { return "<*>"; }
    std::string term_node(const tm::ZeroL& z, const TermPtr& t, int) {
        if (numeral(t)) return "0";
        return call("zero", {term(z.d, Top)});
    }
    std::string term_node(const tm::SuccL& s, const TermPtr& t, int) {
        if (auto n = numeral(t)) return std::to_string(*n);
        return call("succ", {term(s.d, Top), term(s.pred, Top)});
    }
    std::string term_node(const tm::RecNatL& r, const TermPtr& t, int level) {
        const bool hasMotive = static_cast<bool>(r.motive);
        std::string s = "rec " + term(r.scrut, Top) + motive(r.motive, hasMotive ? t->hints : std::vector<std::string>{});
        std::string dz = bind(hint(t->hints, 0), "d");
        s += " { zero(" + dz + ") => " + term(r.zeroB, Top) + "; succ(";
        unbind(1);
        std::string d = bind(hint(t->hints, 1), "d");
        std::string n = bind(hint(t->hints, 2), "n");
        std::string p = bind(hint(t->hints, 3), "p");
        s += d + ", " + n + "; " + p + ") => " + term(r.succB, Top) + " }";
        unbind(3);
        return paren(s, Top, level);
    }
    std::string term_node(const tm::Refl& r, const TermPtr&, int) { return call("refl", {term(r.m, Top)}); }
    std::string term_node(const tm::ReflectIntro& r, const TermPtr&, int) { return call("R", {term(r.m, Top)}); }
    std::string term_node(const tm::ReflectElim& r, const TermPtr&, int) { return call("R^-1", {term(r.m, Top)}); }
    std::string term_node(const tm::Code& c, const TermPtr&, int level) {
        if (std::holds_alternative<ty::Reflect>(c.type->node)) return call("code", {type(c.type, Top)});
        return type(c.type, level);
    }
    std::string term_node(const tm::Ann& a, const TermPtr&, int) {
        return "(" + term(a.term, Top) + " : " + type(a.type, Top) + ")";
    }

    // ---------------------------------------------------------------- types

    std::string type_node(const ty::Pi& p, const TypeExprPtr& t, int level) {
        std::string dom;
        if (p.usage == 1 && !occurs(p.cod, 0)) {
            dom = type(p.dom, ProdL);
            locals_.push_back("");
            std::string s = dom + " -> " + type(p.cod, Top);
            unbind(1);
            return paren(s, Top, level);
        }
        dom = type(p.dom, Top);
        std::string x = bind(hint(t->hints, 0), "x");
        std::string s = "(" + x + " ^" + std::to_string(p.usage) + " : " + dom + ") -> " + type(p.cod, Top);
        unbind(1);
        return paren(s, Top, level);
    }
    std::string type_node(const ty::Tensor& p, const TypeExprPtr& t, int level) {
        if (p.usage == 1 && !occurs(p.snd, 0)) {
            std::string a = type(p.fst, AppL);
            locals_.push_back("");
            std::string s = a + " * " + type(p.snd, ProdL);
            unbind(1);
            return paren(s, ProdL, level);
        }
        std::string a = type(p.fst, Top);
        std::string x = bind(hint(t->hints, 0), "x");
        std::string s = "(" + x + " ^" + std::to_string(p.usage) + " : " + a + ") * " + type(p.snd, ProdL);
        unbind(1);
        return paren(s, ProdL, level);
    }
    std::string type_node(const ty::UnitTy&, const TypeExprPtr&, int) { return "Unit"; }
    std::string type_node(const ty::BoolTy&, const TypeExprPtr&, int) { return "Bool"; }
    std::string type_node(const ty::NatTy&, const TypeExprPtr&, int) { return "Nat"; }
    std::string type_node(const ty::DiamondTy&, const TypeExprPtr&, int) { return "<>"; }
    std::string type_node(const ty::Universe&, const TypeExprPtr&, int) { return "U"; }
    std::string type_node(const ty::ListTy& l, const TypeExprPtr&, int level) {
        return paren("List " + type(l.elem, Atom), AppL, level);
    }
    std::string type_node(const ty::IdTy& i, const TypeExprPtr&, int) {
        return call("Id", {type(i.type, Top), term(i.lhs, Top), term(i.rhs, Top)});
    }
    std::string type_node(const ty::El& e, const TypeExprPtr&, int level) {
        return paren("El " + term(e.code, Atom), AppL, level);
    }
    std::string type_node(const ty::Reflect& r, const TypeExprPtr&, int) { return call("R", {type(r.inner, Top)}); }

    std::vector<std::string> locals_;
    std::vector<std::string> globals_;
    std::optional<Regime> numerals_;
    std::unordered_set<std::string> taken_;
};

}  // namespace

std::string term_to_string(const TermPtr& t, const Names& names) { return Printer(names).term(t, Top); }
std::string type_to_string(const TypeExprPtr& t, const Names& names) { return Printer(names).type(t, Top); }

std::string term_to_string(const TermPtr& t, const std::vector<std::string>& locals, const Signature* sig) {
    return term_to_string(t, Names{locals, global_names(sig), std::nullopt});
}
std::string type_to_string(const TypeExprPtr& t, const std::vector<std::string>& locals, const Signature* sig) {
    return type_to_string(t, Names{locals, global_names(sig), std::nullopt});
}

std::string declaration_to_string(const std::string& name, Fragment sigma, const TypeExprPtr& type,
                                  const TermPtr& body, const Names& globals) {
    return "def " + name + " ^" + (sigma == Fragment::One ? "1" : "0") + " : " + type_to_string(type, globals) +
           " =\n  " + term_to_string(body, globals);
}

}  // namespace qtt::pretty
