#include "qtt/syntax.hpp"

#include <stdexcept>

namespace qtt::kernel {

const char* to_string(Regime r) { return r == Regime::ConsFree ? "consfree" : "lfpl"; }
const char* to_string(Fragment s) { return s == Fragment::One ? "1" : "0"; }

TermPtr make(TermNode n, Span span, std::vector<std::string> hints) {
    return std::make_shared<const Term>(Term{std::move(n), span, std::move(hints)});
}
TypeExprPtr make(TypeNode n, Span span, std::vector<std::string> hints) {
    return std::make_shared<const TypeExpr>(TypeExpr{std::move(n), span, std::move(hints)});
}

TermPtr var(std::size_t i) { return make(tm::Var{i}); }
TypeExprPtr unit_ty() { return make(ty::UnitTy{}); }
TypeExprPtr bool_ty() { return make(ty::BoolTy{}); }
TypeExprPtr nat_ty() { return make(ty::NatTy{}); }
TypeExprPtr diamond_ty() { return make(ty::DiamondTy{}); }
TypeExprPtr universe() { return make(ty::Universe{}); }
TypeExprPtr pi(Usage u, TypeExprPtr dom, TypeExprPtr cod) { return make(ty::Pi{u, std::move(dom), std::move(cod)}); }
TypeExprPtr tensor(Usage u, TypeExprPtr fst, TypeExprPtr snd) {
    return make(ty::Tensor{u, std::move(fst), std::move(snd)});
}
TypeExprPtr list_ty(TypeExprPtr elem) { return make(ty::ListTy{std::move(elem)}); }

TermPtr nat_literal(Regime r, std::uint64_t n) {
    if (r == Regime::ConsFree) {
        TermPtr t = make(tm::ZeroCF{});
        for (std::uint64_t k = 0; k < n; ++k) t = make(tm::SuccCF{t});
        return t;
    }
    TermPtr star = make(tm::DiamondStar{});
    TermPtr t = make(tm::ZeroL{star});
    for (std::uint64_t k = 0; k < n; ++k) t = make(tm::SuccL{star, t});
    return t;
}

// ---------------------------------------------------------------- traversal

TermPtr map_children(const Term& t, const ChildVisitor& f) {
    auto T = [&](const TermPtr& c, std::size_t b) { return c ? f.term(c, b) : c; };
    auto Y = [&](const TypeExprPtr& c, std::size_t b) { return c ? f.type(c, b) : c; };
    TermNode out = std::visit(
        [&](const auto& n) -> TermNode {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, tm::Lam>) return tm::Lam{T(n.body, 1)};
            else if constexpr (std::is_same_v<N, tm::App>) return tm::App{T(n.fn, 0), T(n.arg, 0), n.argUsage};
            else if constexpr (std::is_same_v<N, tm::Pair>) return tm::Pair{T(n.fst, 0), T(n.snd, 0), n.fstUsage};
            else if constexpr (std::is_same_v<N, tm::Fst>) return tm::Fst{T(n.pair, 0)};
            else if constexpr (std::is_same_v<N, tm::Snd>) return tm::Snd{T(n.pair, 0)};
            else if constexpr (std::is_same_v<N, tm::LetPair>)
                return tm::LetPair{T(n.scrut, 0), T(n.body, 2), Y(n.motive, 1)};
            else if constexpr (std::is_same_v<N, tm::LetUnit>)
                return tm::LetUnit{T(n.scrut, 0), T(n.body, 0), Y(n.motive, 1)};
            else if constexpr (std::is_same_v<N, tm::If>)
                return tm::If{T(n.scrut, 0), T(n.thenB, 0), T(n.elseB, 0), Y(n.motive, 1)};
            else if constexpr (std::is_same_v<N, tm::Cons>) return tm::Cons{T(n.head, 0), T(n.tail, 0)};
            else if constexpr (std::is_same_v<N, tm::MatchList>)
                return tm::MatchList{T(n.scrut, 0), T(n.nilB, 0), T(n.consB, 2), Y(n.motive, 1)};
            else if constexpr (std::is_same_v<N, tm::RecList>)
                return tm::RecList{T(n.scrut, 0), T(n.nilB, 0), T(n.consB, 3), Y(n.motive, 1)};
            else if constexpr (std::is_same_v<N, tm::SuccCF>) return tm::SuccCF{T(n.pred, 0)};
            else if constexpr (std::is_same_v<N, tm::DupNat>) return tm::DupNat{T(n.arg, 0)};
            else if constexpr (std::is_same_v<N, tm::RecNatCF>)
                return tm::RecNatCF{T(n.scrut, 0), T(n.zeroB, 0), T(n.succB, 2), Y(n.motive, 1)};
            else if constexpr (std::is_same_v<N, tm::ZeroL>) return tm::ZeroL{T(n.d, 0)};
            else if constexpr (std::is_same_v<N, tm::SuccL>) return tm::SuccL{T(n.d, 0), T(n.pred, 0)};
            else if constexpr (std::is_same_v<N, tm::RecNatL>)
                return tm::RecNatL{T(n.scrut, 0), T(n.zeroB, 1), T(n.succB, 3), Y(n.motive, 1)};
            else if constexpr (std::is_same_v<N, tm::Refl>) return tm::Refl{T(n.m, 0)};
            else if constexpr (std::is_same_v<N, tm::ReflectIntro>) return tm::ReflectIntro{T(n.m, 0)};
            else if constexpr (std::is_same_v<N, tm::ReflectElim>) return tm::ReflectElim{T(n.m, 0)};
            else if constexpr (std::is_same_v<N, tm::Code>) return tm::Code{Y(n.type, 0)};
            else if constexpr (std::is_same_v<N, tm::Ann>) return tm::Ann{T(n.term, 0), Y(n.type, 0)};
            else return n;  // leaves: Var, Global, Star, TrueC, FalseC, Nil, ZeroCF, DiamondStar
        },
        t.node);
    return make(std::move(out), t.span, t.hints);
}

TypeExprPtr map_children(const TypeExpr& t, const ChildVisitor& f) {
    auto T = [&](const TermPtr& c, std::size_t b) { return c ? f.term(c, b) : c; };
    auto Y = [&](const TypeExprPtr& c, std::size_t b) { return c ? f.type(c, b) : c; };
    TypeNode out = std::visit(
        [&](const auto& n) -> TypeNode {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, ty::Pi>) return ty::Pi{n.usage, Y(n.dom, 0), Y(n.cod, 1)};
            else if constexpr (std::is_same_v<N, ty::Tensor>) return ty::Tensor{n.usage, Y(n.fst, 0), Y(n.snd, 1)};
            else if constexpr (std::is_same_v<N, ty::ListTy>) return ty::ListTy{Y(n.elem, 0)};
            else if constexpr (std::is_same_v<N, ty::IdTy>) return ty::IdTy{Y(n.type, 0), T(n.lhs, 0), T(n.rhs, 0)};
            else if constexpr (std::is_same_v<N, ty::El>) return ty::El{T(n.code, 0)};
            else if constexpr (std::is_same_v<N, ty::Reflect>) return ty::Reflect{Y(n.inner, 0)};
            else return n;
        },
        t.node);
    return make(std::move(out), t.span, t.hints);
}

// ---------------------------------------------------------------- equality

namespace {
struct Children {
    std::vector<TermPtr> terms;
    std::vector<TypeExprPtr> types;
};

template <class X>
Children collect(const X& x) {
    Children c;
    ChildVisitor v{[&](const TermPtr& t, std::size_t) {
                       c.terms.push_back(t);
                       return t;
                   },
                   [&](const TypeExprPtr& t, std::size_t) {
                       c.types.push_back(t);
                       return t;
                   }};
    // Absent motives are skipped by map_children; record them explicitly so
    // that a present motive never compares equal to an absent one.
    map_children(x, v);
    return c;
}

bool motive_presence_equal(const Term& a, const Term& b) {
    auto m = [](const Term& t) -> int {
        return std::visit(
            [](const auto& n) -> int {
                if constexpr (requires { n.motive; }) return n.motive ? 1 : 0;
                else return -1;
            },
            t.node);
    };
    return m(a) == m(b);
}

bool shallow_equal(const Term& a, const Term& b) {
    if (a.node.index() != b.node.index()) return false;
    if (auto* v = std::get_if<tm::Var>(&a.node)) return v->index == std::get<tm::Var>(b.node).index;
    if (auto* g = std::get_if<tm::Global>(&a.node)) return g->index == std::get<tm::Global>(b.node).index;
    return motive_presence_equal(a, b);
}

bool shallow_equal(const TypeExpr& a, const TypeExpr& b) {
    if (a.node.index() != b.node.index()) return false;
    if (auto* p = std::get_if<ty::Pi>(&a.node)) return p->usage == std::get<ty::Pi>(b.node).usage;
    if (auto* p = std::get_if<ty::Tensor>(&a.node)) return p->usage == std::get<ty::Tensor>(b.node).usage;
    return true;
}

template <class X>
bool equal_impl(const X& a, const X& b) {
    if (!shallow_equal(a, b)) return false;
    Children ca = collect(a), cb = collect(b);
    if (ca.terms.size() != cb.terms.size() || ca.types.size() != cb.types.size()) return false;
    for (std::size_t i = 0; i < ca.terms.size(); ++i)
        if (!equal(*ca.terms[i], *cb.terms[i])) return false;
    for (std::size_t i = 0; i < ca.types.size(); ++i)
        if (!equal(*ca.types[i], *cb.types[i])) return false;
    return true;
}
}  // namespace

bool equal(const Term& a, const Term& b) { return equal_impl(a, b); }
bool equal(const TypeExpr& a, const TypeExpr& b) { return equal_impl(a, b); }
bool equal(const TermPtr& a, const TermPtr& b) {
    if (!a || !b) return !a && !b;
    return equal(*a, *b);
}
bool equal(const TypeExprPtr& a, const TypeExprPtr& b) {
    if (!a || !b) return !a && !b;
    return equal(*a, *b);
}

// ---------------------------------------------------------------- shifting and substitution

namespace {
// Rewrites every variable occurrence: f(index, depth-under-binders) -> replacement.
using VarFn = std::function<TermPtr(const Term& var, std::size_t index, std::size_t depth)>;

TermPtr rewrite(const TermPtr& t, std::size_t depth, const VarFn& f);
TypeExprPtr rewrite(const TypeExprPtr& t, std::size_t depth, const VarFn& f);

ChildVisitor rewriter(std::size_t depth, const VarFn& f) {
    return ChildVisitor{[&f, depth](const TermPtr& c, std::size_t b) { return rewrite(c, depth + b, f); },
                        [&f, depth](const TypeExprPtr& c, std::size_t b) { return rewrite(c, depth + b, f); }};
}

TermPtr rewrite(const TermPtr& t, std::size_t depth, const VarFn& f) {
    if (auto* v = std::get_if<tm::Var>(&t->node)) return f(*t, v->index, depth);
    return map_children(*t, rewriter(depth, f));
}

TypeExprPtr rewrite(const TypeExprPtr& t, std::size_t depth, const VarFn& f) {
    return map_children(*t, rewriter(depth, f));
}

VarFn shifter(long d, std::size_t cutoff) {
    return [d, cutoff](const Term& v, std::size_t i, std::size_t depth) -> TermPtr {
        if (i < cutoff + depth) return make(tm::Var{i}, v.span, v.hints);
        long ni = static_cast<long>(i) + d;
        if (ni < 0) throw std::logic_error("shift produced a negative index");
        return make(tm::Var{static_cast<std::size_t>(ni)}, v.span, v.hints);
    };
}

VarFn substituter(const TermPtr& n) {
    return [n](const Term& v, std::size_t i, std::size_t depth) -> TermPtr {
        if (i < depth) return make(tm::Var{i}, v.span, v.hints);
        if (i == depth) return shift(n, static_cast<long>(depth));
        return make(tm::Var{i - 1}, v.span, v.hints);
    };
}
}  // namespace

TermPtr shift(const TermPtr& t, long d, std::size_t cutoff) {
    if (d == 0) return t;
    return rewrite(t, 0, shifter(d, cutoff));
}
TypeExprPtr shift(const TypeExprPtr& t, long d, std::size_t cutoff) {
    if (d == 0) return t;
    return rewrite(t, 0, shifter(d, cutoff));
}

TermPtr subst0(const TermPtr& body, const TermPtr& n) { return rewrite(body, 0, substituter(n)); }
TypeExprPtr subst0(const TypeExprPtr& body, const TermPtr& n) { return rewrite(body, 0, substituter(n)); }

bool occurs(const TermPtr& t, std::size_t k) {
    bool found = false;
    rewrite(t, 0, [&](const Term& v, std::size_t i, std::size_t depth) {
        if (i == k + depth) found = true;
        return make(tm::Var{i}, v.span, v.hints);
    });
    return found;
}
bool occurs(const TypeExprPtr& t, std::size_t k) {
    bool found = false;
    rewrite(t, 0, [&](const Term& v, std::size_t i, std::size_t depth) {
        if (i == k + depth) found = true;
        return make(tm::Var{i}, v.span, v.hints);
    });
    return found;
}

TermPtr strip_annotations(const TermPtr& t) {
    ChildVisitor v;
    v.term = [&](const TermPtr& c, std::size_t) { return strip_annotations(c); };
    v.type = [&](const TypeExprPtr& c, std::size_t) { return map_children(*c, v); };
    TermPtr out = map_children(*t, v);
    if (auto* a = std::get_if<tm::App>(&out->node))
        return make(tm::App{a->fn, a->arg, std::nullopt}, out->span, out->hints);
    if (auto* p = std::get_if<tm::Pair>(&out->node))
        return make(tm::Pair{p->fst, p->snd, std::nullopt}, out->span, out->hints);
    return out;
}

}  // namespace qtt::kernel
