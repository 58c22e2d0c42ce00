#include "qtt/nbe.hpp"

#include <stdexcept>
#include <string>

#include "qtt/teardown.hpp"

namespace qtt::kernel {

Value::~Value() {
    auto release_env = [](Env& env) {
        for (auto& v : env) detail::defer_release(std::move(v));
    };
    if (auto* p = std::get_if<vl::Pair>(&node)) {
        detail::defer_release(std::move(p->fst));
        detail::defer_release(std::move(p->snd));
    } else if (auto* c = std::get_if<vl::Cons>(&node)) {
        detail::defer_release(std::move(c->head));
        detail::defer_release(std::move(c->tail));
    } else if (auto* n = std::get_if<vl::Succ>(&node)) {
        detail::defer_release(std::move(n->pred));
    } else if (auto* l = std::get_if<vl::Lam>(&node)) {
        release_env(l->body.env);
    }
}

Val mk(decltype(Value::node) n) { return std::make_shared<const Value>(Value{std::move(n)}); }

namespace {
Val neu(vl::Neutral n, Val type) {
    return mk(vl::Neu{std::make_shared<const vl::Neutral>(std::move(n)), std::move(type)});
}

const vl::Neutral* neutral_of(const Val& v) {
    auto* n = as<vl::Neu>(v);
    return n ? n->n.get() : nullptr;
}

const Val& star_val() {
    static const Val v = mk(vl::Star{});
    return v;
}

[[noreturn]] void internal(const std::string& what) { throw std::logic_error("normalizer: " + what); }
}  // namespace

void Evaluator::tick() {
    if (fuel_ == 0) fail("Fuel", "normalization step budget exhausted");
    --fuel_;
}

Val Evaluator::fresh(std::size_t level, Val type) { return neu(vl::NVar{level}, std::move(type)); }

Val Evaluator::apply(const Closure& c, std::initializer_list<Val> args) {
    Env env = c.env;
    env.insert(env.end(), args.begin(), args.end());
    if (auto* t = std::get_if<TermPtr>(&c.body)) return eval(*t, env);
    return eval_type(std::get<TypeExprPtr>(c.body), env);
}

Val Evaluator::app(const Val& f, const Val& a) {
    if (auto* l = as<vl::Lam>(f)) return apply(l->body, {a});
    if (auto* n = as<vl::Neu>(f)) {
        auto* pi = as<vl::Pi>(n->type);
        if (!pi) internal("neutral application head does not have a function type");
        return neu(vl::NApp{f, a}, apply(pi->cod, {a}));
    }
    internal("application of a non-function value");
}

Val Evaluator::fst(const Val& p) {
    if (auto* pr = as<vl::Pair>(p)) return pr->fst;
    if (auto* n = as<vl::Neu>(p)) {
        auto* t = as<vl::Tensor>(n->type);
        if (!t) internal("projection from a neutral of non-tensor type");
        return neu(vl::NFst{p}, t->fst);
    }
    internal("projection from a non-pair value");
}

Val Evaluator::snd(const Val& p) {
    if (auto* pr = as<vl::Pair>(p)) return pr->snd;
    if (auto* n = as<vl::Neu>(p)) {
        auto* t = as<vl::Tensor>(n->type);
        if (!t) internal("projection from a neutral of non-tensor type");
        return neu(vl::NSnd{p}, apply(t->snd, {fst(p)}));
    }
    internal("projection from a non-pair value");
}

Val Evaluator::reflect_elim(const Val& v) {
    if (auto* r = as<vl::ReflIntro>(v)) return r->m;
    if (auto* n = as<vl::Neu>(v)) {
        auto* rt = as<vl::ReflectTy>(n->type);
        if (!rt) internal("R^-1 of a neutral whose type is not R(A)");
        return neu(vl::NReflElim{v}, rt->inner);
    }
    internal("R^-1 of a value that is not a reflection");
}

Val Evaluator::rec_nat(const Val& scrut, const Closure& motive, const TermPtr& zeroB, const TermPtr& succB,
                       const Env& env, bool lfpl) {
    std::vector<Val> preds;
    Val cur = scrut;
    while (auto* s = as<vl::Succ>(cur)) {
        preds.push_back(s->pred);
        cur = s->pred;
    }
    Val acc;
    if (as<vl::Zero>(cur)) {
        Env e = env;
        if (lfpl) e.push_back(star_val());
        acc = eval(zeroB, e);
    } else if (as<vl::Neu>(cur)) {
        Val type = apply(motive, {cur});
        if (lfpl) {
            acc = neu(vl::NRecL{cur, motive, Closure{env, zeroB}, Closure{env, succB}}, type);
        } else {
            Val z = eval(zeroB, env);
            acc = neu(vl::NRecCF{cur, motive, z, Closure{env, succB}}, type);
        }
    } else {
        internal("natural recursion on a non-natural value");
    }
    for (auto it = preds.rbegin(); it != preds.rend(); ++it) {
        Env e = env;
        if (lfpl) e.push_back(star_val());
        e.push_back(*it);
        e.push_back(acc);
        acc = eval(succB, e);
    }
    return acc;
}

Val Evaluator::rec_list(const Val& scrut, const Closure& motive, const TermPtr& nilB, const TermPtr& consB,
                        const Env& env) {
    std::vector<const vl::Cons*> cells;
    Val cur = scrut;
    while (auto* c = as<vl::Cons>(cur)) {
        cells.push_back(c);
        cur = c->tail;
    }
    Val acc;
    if (as<vl::Nil>(cur)) acc = eval(nilB, env);
    else if (as<vl::Neu>(cur))
        acc = neu(vl::NRecList{cur, motive, eval(nilB, env), Closure{env, consB}}, apply(motive, {cur}));
    else internal("list recursion on a non-list value");
    for (auto it = cells.rbegin(); it != cells.rend(); ++it) {
        Env e = env;
        e.push_back((*it)->head);
        e.push_back((*it)->tail);
        e.push_back(acc);
        acc = eval(consB, e);
    }
    return acc;
}

Val Evaluator::eval(const TermPtr& t, const Env& env) {
    tick();
    auto motiveOf = [&](const TypeExprPtr& m) { return Closure{env, m}; };
    return std::visit(
        [&](const auto& n) -> Val {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, tm::Var>) {
                if (n.index >= env.size()) internal("variable index out of range");
                return env[env.size() - 1 - n.index];
            } else if constexpr (std::is_same_v<N, tm::Global>) {
                if (!sig_ || n.index >= sig_->entries.size() || !sig_->entries[n.index].value)
                    fail("Scope", "reference to unavailable definition '" + n.name + "'", t->span);
                return sig_->entries[n.index].value;
            } else if constexpr (std::is_same_v<N, tm::Lam>) {
                return mk(vl::Lam{Closure{env, n.body}});
            } else if constexpr (std::is_same_v<N, tm::App>) {
                Val f = eval(n.fn, env);
                return app(f, eval(n.arg, env));
            } else if constexpr (std::is_same_v<N, tm::Pair>) {
                Val a = eval(n.fst, env);
                return mk(vl::Pair{a, eval(n.snd, env)});
            } else if constexpr (std::is_same_v<N, tm::Fst>) {
                return fst(eval(n.pair, env));
            } else if constexpr (std::is_same_v<N, tm::Snd>) {
                return snd(eval(n.pair, env));
            } else if constexpr (std::is_same_v<N, tm::LetPair>) {
                Val p = eval(n.scrut, env);
                Env e = env;
                e.push_back(fst(p));
                e.push_back(snd(p));
                return eval(n.body, e);
            } else if constexpr (std::is_same_v<N, tm::Star>) {
                return star_val();
            } else if constexpr (std::is_same_v<N, tm::LetUnit>) {
                return eval(n.body, env);
            } else if constexpr (std::is_same_v<N, tm::TrueC>) {
                return mk(vl::True{});
            } else if constexpr (std::is_same_v<N, tm::FalseC>) {
                return mk(vl::False{});
            } else if constexpr (std::is_same_v<N, tm::If>) {
                Val b = eval(n.scrut, env);
                if (as<vl::True>(b)) return eval(n.thenB, env);
                if (as<vl::False>(b)) return eval(n.elseB, env);
                if (!as<vl::Neu>(b)) internal("if on a non-boolean value");
                Closure m = motiveOf(n.motive);
                Val tv = eval(n.thenB, env);
                Val fv = eval(n.elseB, env);
                return neu(vl::NIf{b, m, tv, fv}, apply(m, {b}));
            } else if constexpr (std::is_same_v<N, tm::Nil>) {
                return mk(vl::Nil{});
            } else if constexpr (std::is_same_v<N, tm::Cons>) {
                Val h = eval(n.head, env);
                return mk(vl::Cons{h, eval(n.tail, env)});
            } else if constexpr (std::is_same_v<N, tm::MatchList>) {
                Val l = eval(n.scrut, env);
                if (as<vl::Nil>(l)) return eval(n.nilB, env);
                if (auto* c = as<vl::Cons>(l)) {
                    Env e = env;
                    e.push_back(c->head);
                    e.push_back(c->tail);
                    return eval(n.consB, e);
                }
                if (!as<vl::Neu>(l)) internal("match on a non-list value");
                Closure m = motiveOf(n.motive);
                return neu(vl::NMatch{l, m, eval(n.nilB, env), Closure{env, n.consB}}, apply(m, {l}));
            } else if constexpr (std::is_same_v<N, tm::RecList>) {
                return rec_list(eval(n.scrut, env), motiveOf(n.motive), n.nilB, n.consB, env);
            } else if constexpr (std::is_same_v<N, tm::ZeroCF>) {
                return mk(vl::Zero{});
            } else if constexpr (std::is_same_v<N, tm::SuccCF>) {
                return mk(vl::Succ{eval(n.pred, env)});
            } else if constexpr (std::is_same_v<N, tm::DupNat>) {
                Val v = eval(n.arg, env);
                return mk(vl::Pair{v, v});
            } else if constexpr (std::is_same_v<N, tm::RecNatCF>) {
                return rec_nat(eval(n.scrut, env), motiveOf(n.motive), n.zeroB, n.succB, env, false);
            } else if constexpr (std::is_same_v<N, tm::DiamondStar>) {
                return star_val();
            } else if constexpr (std::is_same_v<N, tm::ZeroL>) {
                return mk(vl::Zero{});
            } else if constexpr (std::is_same_v<N, tm::SuccL>) {
                return mk(vl::Succ{eval(n.pred, env)});
            } else if constexpr (std::is_same_v<N, tm::RecNatL>) {
                return rec_nat(eval(n.scrut, env), motiveOf(n.motive), n.zeroB, n.succB, env, true);
            } else if constexpr (std::is_same_v<N, tm::Refl>) {
                return mk(vl::Refl{eval(n.m, env)});
            } else if constexpr (std::is_same_v<N, tm::ReflectIntro>) {
                Val m = eval(n.m, env);
                if (auto* nn = neutral_of(m))
                    if (auto* e = std::get_if<vl::NReflElim>(nn)) return e->head;
                return mk(vl::ReflIntro{m});
            } else if constexpr (std::is_same_v<N, tm::ReflectElim>) {
                return reflect_elim(eval(n.m, env));
            } else if constexpr (std::is_same_v<N, tm::Code>) {
                return eval_type(n.type, env);
            } else if constexpr (std::is_same_v<N, tm::Ann>) {
                return eval(n.term, env);
            }
        },
        t->node);
}

Val Evaluator::eval_type(const TypeExprPtr& t, const Env& env) {
    tick();
    return std::visit(
        [&](const auto& n) -> Val {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, ty::Pi>) return mk(vl::Pi{n.usage, eval_type(n.dom, env), Closure{env, n.cod}});
            else if constexpr (std::is_same_v<N, ty::Tensor>)
                return mk(vl::Tensor{n.usage, eval_type(n.fst, env), Closure{env, n.snd}});
            else if constexpr (std::is_same_v<N, ty::UnitTy>) return mk(vl::UnitTy{});
            else if constexpr (std::is_same_v<N, ty::BoolTy>) return mk(vl::BoolTy{});
            else if constexpr (std::is_same_v<N, ty::ListTy>) return mk(vl::ListTy{eval_type(n.elem, env)});
            else if constexpr (std::is_same_v<N, ty::NatTy>) return mk(vl::NatTy{});
            else if constexpr (std::is_same_v<N, ty::DiamondTy>) return mk(vl::DiamondTy{});
            else if constexpr (std::is_same_v<N, ty::IdTy>) {
                Val a = eval_type(n.type, env);
                Val l = eval(n.lhs, env);
                return mk(vl::IdTy{a, l, eval(n.rhs, env)});
            } else if constexpr (std::is_same_v<N, ty::Universe>) return mk(vl::Universe{});
            else if constexpr (std::is_same_v<N, ty::El>) return eval(n.code, env);
            else if constexpr (std::is_same_v<N, ty::Reflect>) return mk(vl::ReflectTy{eval_type(n.inner, env)});
        },
        t->node);
}

// ---------------------------------------------------------------- conversion

namespace {
Val unreflect(Evaluator& ev, const Val& v) {
    if (auto* r = as<vl::ReflIntro>(v)) return r->m;
    return ev.reflect_elim(v);
}
}  // namespace

bool Evaluator::conv(std::size_t depth, const Val& a, const Val& b, const Val& type) {
    tick();
    if (auto* pi = as<vl::Pi>(type)) {
        Val x = fresh(depth, pi->dom);
        return conv(depth + 1, app(a, x), app(b, x), apply(pi->cod, {x}));
    }
    if (auto* t = as<vl::Tensor>(type)) {
        Val a1 = fst(a);
        if (!conv(depth, a1, fst(b), t->fst)) return false;
        return conv(depth, snd(a), snd(b), apply(t->snd, {a1}));
    }
    if (as<vl::UnitTy>(type) || as<vl::DiamondTy>(type)) return true;
    if (auto* r = as<vl::ReflectTy>(type)) return conv(depth, unreflect(*this, a), unreflect(*this, b), r->inner);
    if (as<vl::Universe>(type)) return conv_type(depth, a, b);
    if (as<vl::Neu>(a) && as<vl::Neu>(b)) return conv_neutral(depth, a, b);
    if (as<vl::Neu>(a) || as<vl::Neu>(b)) return false;
    if (a->node.index() != b->node.index()) return false;
    if (as<vl::True>(a) || as<vl::False>(a) || as<vl::Zero>(a) || as<vl::Nil>(a)) return true;
    if (auto* s = as<vl::Succ>(a)) {
        // Iterate along successor chains to keep recursion shallow.
        Val x = s->pred, y = as<vl::Succ>(b)->pred;
        while (as<vl::Succ>(x) && as<vl::Succ>(y)) {
            x = as<vl::Succ>(x)->pred;
            y = as<vl::Succ>(y)->pred;
        }
        return conv(depth, x, y, type);
    }
    if (auto* c = as<vl::Cons>(a)) {
        auto* lt = as<vl::ListTy>(type);
        if (!lt) internal("cons value at a non-list type");
        Val x = a, y = b;
        while (as<vl::Cons>(x) && as<vl::Cons>(y)) {
            if (!conv(depth, as<vl::Cons>(x)->head, as<vl::Cons>(y)->head, lt->elem)) return false;
            x = as<vl::Cons>(x)->tail;
            y = as<vl::Cons>(y)->tail;
        }
        (void)c;
        return conv(depth, x, y, type);
    }
    if (auto* r = as<vl::Refl>(a)) {
        auto* it = as<vl::IdTy>(type);
        if (!it) internal("refl value at a non-identity type");
        return conv(depth, r->m, as<vl::Refl>(b)->m, it->type);
    }
    internal("conversion reached an unexpected value form");
}

bool Evaluator::conv_type(std::size_t depth, const Val& a, const Val& b) {
    tick();
    if (as<vl::Neu>(a) && as<vl::Neu>(b)) return conv_neutral(depth, a, b);
    if (a->node.index() != b->node.index()) return false;
    if (auto* p = as<vl::Pi>(a)) {
        auto* q = as<vl::Pi>(b);
        if (p->usage != q->usage || !conv_type(depth, p->dom, q->dom)) return false;
        Val x = fresh(depth, p->dom);
        return conv_type(depth + 1, apply(p->cod, {x}), apply(q->cod, {x}));
    }
    if (auto* p = as<vl::Tensor>(a)) {
        auto* q = as<vl::Tensor>(b);
        if (p->usage != q->usage || !conv_type(depth, p->fst, q->fst)) return false;
        Val x = fresh(depth, p->fst);
        return conv_type(depth + 1, apply(p->snd, {x}), apply(q->snd, {x}));
    }
    if (auto* p = as<vl::ListTy>(a)) return conv_type(depth, p->elem, as<vl::ListTy>(b)->elem);
    if (auto* p = as<vl::IdTy>(a)) {
        auto* q = as<vl::IdTy>(b);
        return conv_type(depth, p->type, q->type) && conv(depth, p->lhs, q->lhs, p->type) &&
               conv(depth, p->rhs, q->rhs, p->type);
    }
    if (auto* p = as<vl::ReflectTy>(a)) return conv_type(depth, p->inner, as<vl::ReflectTy>(b)->inner);
    if (as<vl::UnitTy>(a) || as<vl::BoolTy>(a) || as<vl::NatTy>(a) || as<vl::DiamondTy>(a) || as<vl::Universe>(a))
        return true;
    return false;
}

bool Evaluator::conv_neutral(std::size_t depth, const Val& a, const Val& b) {
    const vl::Neutral& x = *as<vl::Neu>(a)->n;
    const vl::Neutral& y = *as<vl::Neu>(b)->n;
    if (x.index() != y.index()) return false;
    auto sameMotive = [&](const Closure& m1, const Closure& m2, const Val& scrutType) {
        Val z = fresh(depth, scrutType);
        return conv_type(depth + 1, apply(m1, {z}), apply(m2, {z}));
    };
    auto typeOf = [](const Val& v) { return as<vl::Neu>(v)->type; };
    Val boolTy = mk(vl::BoolTy{}), natTy = mk(vl::NatTy{}), diaTy = mk(vl::DiamondTy{});

    if (auto* p = std::get_if<vl::NVar>(&x)) return p->level == std::get<vl::NVar>(y).level;
    if (auto* p = std::get_if<vl::NApp>(&x)) {
        auto& q = std::get<vl::NApp>(y);
        if (!conv_neutral(depth, p->head, q.head)) return false;
        return conv(depth, p->arg, q.arg, as<vl::Pi>(typeOf(p->head))->dom);
    }
    if (auto* p = std::get_if<vl::NFst>(&x)) return conv_neutral(depth, p->head, std::get<vl::NFst>(y).head);
    if (auto* p = std::get_if<vl::NSnd>(&x)) return conv_neutral(depth, p->head, std::get<vl::NSnd>(y).head);
    if (auto* p = std::get_if<vl::NReflElim>(&x))
        return conv_neutral(depth, p->head, std::get<vl::NReflElim>(y).head);
    if (auto* p = std::get_if<vl::NIf>(&x)) {
        auto& q = std::get<vl::NIf>(y);
        if (!conv_neutral(depth, p->head, q.head) || !sameMotive(p->motive, q.motive, boolTy)) return false;
        return conv(depth, p->thenV, q.thenV, apply(p->motive, {mk(vl::True{})})) &&
               conv(depth, p->elseV, q.elseV, apply(p->motive, {mk(vl::False{})}));
    }
    if (auto* p = std::get_if<vl::NMatch>(&x)) {
        auto& q = std::get<vl::NMatch>(y);
        Val lt = typeOf(p->head);
        if (!conv_neutral(depth, p->head, q.head) || !sameMotive(p->motive, q.motive, lt)) return false;
        if (!conv(depth, p->nilV, q.nilV, apply(p->motive, {mk(vl::Nil{})}))) return false;
        Val h = fresh(depth, as<vl::ListTy>(lt)->elem), t = fresh(depth + 1, lt);
        return conv(depth + 2, apply(p->consB, {h, t}), apply(q.consB, {h, t}),
                    apply(p->motive, {mk(vl::Cons{h, t})}));
    }
    if (auto* p = std::get_if<vl::NRecList>(&x)) {
        auto& q = std::get<vl::NRecList>(y);
        Val lt = typeOf(p->head);
        if (!conv_neutral(depth, p->head, q.head) || !sameMotive(p->motive, q.motive, lt)) return false;
        if (!conv(depth, p->nilV, q.nilV, apply(p->motive, {mk(vl::Nil{})}))) return false;
        Val h = fresh(depth, as<vl::ListTy>(lt)->elem), t = fresh(depth + 1, lt);
        Val r = fresh(depth + 2, apply(p->motive, {t}));
        return conv(depth + 3, apply(p->consB, {h, t, r}), apply(q.consB, {h, t, r}),
                    apply(p->motive, {mk(vl::Cons{h, t})}));
    }
    if (auto* p = std::get_if<vl::NRecCF>(&x)) {
        auto& q = std::get<vl::NRecCF>(y);
        if (!conv_neutral(depth, p->head, q.head) || !sameMotive(p->motive, q.motive, natTy)) return false;
        if (!conv(depth, p->zeroV, q.zeroV, apply(p->motive, {mk(vl::Zero{})}))) return false;
        Val n = fresh(depth, natTy), r = fresh(depth + 1, apply(p->motive, {n}));
        return conv(depth + 2, apply(p->succB, {n, r}), apply(q.succB, {n, r}),
                    apply(p->motive, {mk(vl::Succ{n})}));
    }
    if (auto* p = std::get_if<vl::NRecL>(&x)) {
        auto& q = std::get<vl::NRecL>(y);
        if (!conv_neutral(depth, p->head, q.head) || !sameMotive(p->motive, q.motive, natTy)) return false;
        Val d0 = fresh(depth, diaTy);
        if (!conv(depth + 1, apply(p->zeroB, {d0}), apply(q.zeroB, {d0}), apply(p->motive, {mk(vl::Zero{})})))
            return false;
        Val d = fresh(depth, diaTy), n = fresh(depth + 1, natTy), r = fresh(depth + 2, apply(p->motive, {n}));
        return conv(depth + 3, apply(p->succB, {d, n, r}), apply(q.succB, {d, n, r}),
                    apply(p->motive, {mk(vl::Succ{n})}));
    }
    return false;
}

// ---------------------------------------------------------------- read-back

TermPtr Evaluator::quote(std::size_t depth, const Val& v, const Val& type) {
    tick();
    if (auto* pi = as<vl::Pi>(type)) {
        Val x = fresh(depth, pi->dom);
        return make(tm::Lam{quote(depth + 1, app(v, x), apply(pi->cod, {x}))});
    }
    if (auto* t = as<vl::Tensor>(type)) {
        Val a = fst(v);
        TermPtr qa = quote(depth, a, t->fst);
        return make(tm::Pair{qa, quote(depth, snd(v), apply(t->snd, {a})), std::nullopt});
    }
    if (as<vl::UnitTy>(type)) return make(tm::Star{});
    if (as<vl::DiamondTy>(type)) return make(tm::DiamondStar{});
    if (auto* r = as<vl::ReflectTy>(type)) return make(tm::ReflectIntro{quote(depth, unreflect(*this, v), r->inner)});
    if (as<vl::Universe>(type)) {
        if (as<vl::Neu>(v)) return quote_neutral(depth, v);
        return make(tm::Code{quote_type(depth, v)});
    }
    if (as<vl::Neu>(v)) return quote_neutral(depth, v);
    if (as<vl::True>(v)) return make(tm::TrueC{});
    if (as<vl::False>(v)) return make(tm::FalseC{});
    if (as<vl::Zero>(v) || as<vl::Succ>(v)) {
        std::size_t k = 0;
        Val cur = v;
        while (auto* s = as<vl::Succ>(cur)) {
            ++k;
            cur = s->pred;
        }
        TermPtr base = as<vl::Zero>(cur) ? (regime_ == Regime::ConsFree ? make(tm::ZeroCF{})
                                                                        : make(tm::ZeroL{make(tm::DiamondStar{})}))
                                         : quote_neutral(depth, cur);
        for (std::size_t i = 0; i < k; ++i)
            base = regime_ == Regime::ConsFree ? make(tm::SuccCF{base})
                                               : make(tm::SuccL{make(tm::DiamondStar{}), base});
        return base;
    }
    if (as<vl::Nil>(v) || as<vl::Cons>(v)) {
        auto* lt = as<vl::ListTy>(type);
        if (!lt) internal("list value at a non-list type");
        std::vector<TermPtr> heads;
        Val cur = v;
        while (auto* c = as<vl::Cons>(cur)) {
            heads.push_back(quote(depth, c->head, lt->elem));
            cur = c->tail;
        }
        TermPtr tail = as<vl::Nil>(cur) ? make(tm::Nil{}) : quote_neutral(depth, cur);
        for (auto it = heads.rbegin(); it != heads.rend(); ++it) tail = make(tm::Cons{*it, tail});
        return tail;
    }
    if (auto* r = as<vl::Refl>(v)) {
        auto* it = as<vl::IdTy>(type);
        if (!it) internal("refl value at a non-identity type");
        return make(tm::Refl{quote(depth, r->m, it->type)});
    }
    internal("read-back reached an unexpected value form");
}

TermPtr Evaluator::quote_neutral(std::size_t depth, const Val& v) {
    const vl::Neutral& x = *as<vl::Neu>(v)->n;
    auto typeOf = [](const Val& h) { return as<vl::Neu>(h)->type; };
    auto motive = [&](const Closure& m, const Val& scrutType) {
        return quote_type(depth + 1, apply(m, {fresh(depth, scrutType)}));
    };
    Val boolTy = mk(vl::BoolTy{}), natTy = mk(vl::NatTy{}), diaTy = mk(vl::DiamondTy{});

    if (auto* p = std::get_if<vl::NVar>(&x)) {
        if (p->level >= depth) internal("neutral variable escapes its scope");
        return var(depth - 1 - p->level);
    }
    if (auto* p = std::get_if<vl::NApp>(&x))
        return make(tm::App{quote_neutral(depth, p->head), quote(depth, p->arg, as<vl::Pi>(typeOf(p->head))->dom),
                            std::nullopt});
    if (auto* p = std::get_if<vl::NFst>(&x)) return make(tm::Fst{quote_neutral(depth, p->head)});
    if (auto* p = std::get_if<vl::NSnd>(&x)) return make(tm::Snd{quote_neutral(depth, p->head)});
    if (auto* p = std::get_if<vl::NReflElim>(&x)) return make(tm::ReflectElim{quote_neutral(depth, p->head)});
    if (auto* p = std::get_if<vl::NIf>(&x)) {
        return make(tm::If{quote_neutral(depth, p->head), quote(depth, p->thenV, apply(p->motive, {mk(vl::True{})})),
                           quote(depth, p->elseV, apply(p->motive, {mk(vl::False{})})), motive(p->motive, boolTy)});
    }
    if (auto* p = std::get_if<vl::NMatch>(&x)) {
        Val lt = typeOf(p->head);
        Val h = fresh(depth, as<vl::ListTy>(lt)->elem), t = fresh(depth + 1, lt);
        return make(tm::MatchList{quote_neutral(depth, p->head),
                                  quote(depth, p->nilV, apply(p->motive, {mk(vl::Nil{})})),
                                  quote(depth + 2, apply(p->consB, {h, t}), apply(p->motive, {mk(vl::Cons{h, t})})),
                                  motive(p->motive, lt)});
    }
    if (auto* p = std::get_if<vl::NRecList>(&x)) {
        Val lt = typeOf(p->head);
        Val h = fresh(depth, as<vl::ListTy>(lt)->elem), t = fresh(depth + 1, lt);
        Val r = fresh(depth + 2, apply(p->motive, {t}));
        return make(tm::RecList{
            quote_neutral(depth, p->head), quote(depth, p->nilV, apply(p->motive, {mk(vl::Nil{})})),
            quote(depth + 3, apply(p->consB, {h, t, r}), apply(p->motive, {mk(vl::Cons{h, t})})),
            motive(p->motive, lt)});
    }
    if (auto* p = std::get_if<vl::NRecCF>(&x)) {
        Val n = fresh(depth, natTy), r = fresh(depth + 1, apply(p->motive, {n}));
        return make(tm::RecNatCF{quote_neutral(depth, p->head),
                                 quote(depth, p->zeroV, apply(p->motive, {mk(vl::Zero{})})),
                                 quote(depth + 2, apply(p->succB, {n, r}), apply(p->motive, {mk(vl::Succ{n})})),
                                 motive(p->motive, natTy)});
    }
    if (auto* p = std::get_if<vl::NRecL>(&x)) {
        Val d0 = fresh(depth, diaTy);
        Val d = fresh(depth, diaTy), n = fresh(depth + 1, natTy), r = fresh(depth + 2, apply(p->motive, {n}));
        return make(tm::RecNatL{quote_neutral(depth, p->head),
                                quote(depth + 1, apply(p->zeroB, {d0}), apply(p->motive, {mk(vl::Zero{})})),
                                quote(depth + 3, apply(p->succB, {d, n, r}), apply(p->motive, {mk(vl::Succ{n})})),
                                motive(p->motive, natTy)});
    }
    internal("unknown neutral form");
}

TypeExprPtr Evaluator::quote_type(std::size_t depth, const Val& t) {
    tick();
    if (as<vl::Neu>(t)) return make(ty::El{quote_neutral(depth, t)});
    if (auto* p = as<vl::Pi>(t)) {
        Val x = fresh(depth, p->dom);
        return make(ty::Pi{p->usage, quote_type(depth, p->dom), quote_type(depth + 1, apply(p->cod, {x}))});
    }
    if (auto* p = as<vl::Tensor>(t)) {
        Val x = fresh(depth, p->fst);
        return make(ty::Tensor{p->usage, quote_type(depth, p->fst), quote_type(depth + 1, apply(p->snd, {x}))});
    }
    if (as<vl::UnitTy>(t)) return unit_ty();
    if (as<vl::BoolTy>(t)) return bool_ty();
    if (as<vl::NatTy>(t)) return nat_ty();
    if (as<vl::DiamondTy>(t)) return diamond_ty();
    if (as<vl::Universe>(t)) return universe();
    if (auto* p = as<vl::ListTy>(t)) return list_ty(quote_type(depth, p->elem));
    if (auto* p = as<vl::IdTy>(t))
        return make(ty::IdTy{quote_type(depth, p->type), quote(depth, p->lhs, p->type), quote(depth, p->rhs, p->type)});
    if (auto* p = as<vl::ReflectTy>(t)) return make(ty::Reflect{quote_type(depth, p->inner)});
    internal("type read-back reached a non-type value");
}

}  // namespace qtt::kernel
