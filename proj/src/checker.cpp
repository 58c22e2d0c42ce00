#include <algorithm>
#include <stdexcept>

#include "qtt/kernel.hpp"
#include "qtt/pretty.hpp"

namespace qtt::kernel {

// ---------------------------------------------------------------- usage vectors and contexts

Context ctx_zero(const Context& g) {
    Context out = g;
    for (auto& e : out) e.usage = 0;
    return out;
}

UsageVector usage_add(const UsageVector& a, const UsageVector& b) {
    if (a.size() != b.size()) throw std::logic_error("usage_add: length mismatch");
    UsageVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

UsageVector usage_scale(Usage k, const UsageVector& u) {
    UsageVector out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = k * u[i];
    return out;
}

UsageVector usage_join(const UsageVector& a, const UsageVector& b) {
    if (a.size() != b.size()) throw std::logic_error("usage_join: length mismatch");
    UsageVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
    return out;
}

void Ctx::push(std::string name, Usage usage, Val type) {
    env.push_back(Evaluator::fresh(entries.size(), type));
    entries.push_back(Entry{std::move(name), usage, std::move(type)});
}

void Ctx::pop() {
    entries.pop_back();
    env.pop_back();
}

// ---------------------------------------------------------------- helpers

namespace {
std::string hint(const TermPtr& t, std::size_t k, const std::string& fallback) {
    if (k < t->hints.size() && !t->hints[k].empty()) return t->hints[k];
    return fallback;
}

UsageVector zeros(std::size_t n) { return UsageVector(n, 0); }

// Returns a copy of an eliminator node with its motive replaced.
TermPtr with_motive(const TermPtr& t, TypeExprPtr m) {
    TermNode n = t->node;
    std::visit(
        [&](auto& x) {
            if constexpr (requires { x.motive; }) x.motive = m;
        },
        n);
    return make(std::move(n), t->span, t->hints);
}

bool has_motive_slot(const TermPtr& t, bool& present) {
    return std::visit(
        [&](const auto& x) -> bool {
            if constexpr (requires { x.motive; }) {
                present = static_cast<bool>(x.motive);
                return true;
            } else {
                return false;
            }
        },
        t->node);
}
}  // namespace

Span Checker::where(const TermPtr& t) const { return t && t->span.known() ? t->span : lastSpan_; }

std::string Checker::show(const Ctx& ctx, const Val& type) {
    try {
        std::vector<std::string> names;
        for (const auto& e : ctx.entries) names.push_back(e.name);
        return pretty::type_to_string(ev_.quote_type(ctx.depth(), type), names, sig_);
    } catch (const std::exception&) {
        return "<type>";
    }
}

void Checker::require_binder(const UsageVector& u, std::size_t level, Usage declared, const std::string& name,
                             const TermPtr& where_) {
    if (u[level] > declared)
        fail(rule::Sub,
             "variable '" + name + "' is used " + std::to_string(u[level]) + " time(s) but its binder allows " +
                 std::to_string(declared),
             where(where_));
}

void Checker::require_closed_branch(const UsageVector& u, std::size_t outerDepth, const Ctx& ctx,
                                    const TermPtr& where_, const char* which) {
    for (std::size_t i = 0; i < outerDepth; ++i)
        if (u[i] != 0)
            fail(rule::RecContext,
                 std::string("the ") + which + " branch of a recursor is checked in a zeroed context but uses '" +
                     ctx.entries[i].name + "' at runtime",
                 where(where_));
}

void Checker::require_regime(Regime r, const TermPtr& t, const char* what) {
    if (regime_ != r)
        fail(rule::Regime, std::string(what) + " is only available in the " + to_string(r) + " regime", where(t));
}

void Checker::require_sigma0(Fragment sigma, const TermPtr& t, const char* what) {
    if (sigma != Fragment::Zero)
        fail(rule::Fragment, std::string(what) + " is only usable in the sigma=0 fragment", where(t));
}

Val Checker::motive_at(const Ctx& ctx, const TypeExprPtr& motive, const Val& v) {
    Env e = ctx.env;
    e.push_back(v);
    return ev_.eval_type(motive, e);
}

TypeExprPtr Checker::check_motive(Ctx& ctx, const TypeExprPtr& motive, const Val& scrutType) {
    ctx.push("z", 0, scrutType);
    TypeExprPtr out = check_type(ctx, motive);
    ctx.pop();
    return out;
}

Ctx Checker::make_context(const Context& g) {
    Ctx ctx;
    for (const auto& e : g) {
        TypeExprPtr t = check_type(ctx, e.type);
        ctx.push(e.name, e.usage, eval_type_in(ctx, t));
    }
    return ctx;
}

// ---------------------------------------------------------------- types

TypeExprPtr Checker::check_type(Ctx& ctx, const TypeExprPtr& t) {
    if (t->span.known()) lastSpan_ = t->span;
    auto rebuild = [&](TypeNode n) { return make(std::move(n), t->span, t->hints); };
    return std::visit(
        [&](const auto& n) -> TypeExprPtr {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, ty::Pi> || std::is_same_v<N, ty::Tensor>) {
                TypeExprPtr a;
                TypeExprPtr b;
                if constexpr (std::is_same_v<N, ty::Pi>) {
                    a = check_type(ctx, n.dom);
                    ctx.push(t->hints.empty() ? "x" : t->hints[0], 0, eval_type_in(ctx, a));
                    b = check_type(ctx, n.cod);
                    ctx.pop();
                    return rebuild(ty::Pi{n.usage, a, b});
                } else {
                    a = check_type(ctx, n.fst);
                    ctx.push(t->hints.empty() ? "x" : t->hints[0], 0, eval_type_in(ctx, a));
                    b = check_type(ctx, n.snd);
                    ctx.pop();
                    return rebuild(ty::Tensor{n.usage, a, b});
                }
            } else if constexpr (std::is_same_v<N, ty::DiamondTy>) {
                if (regime_ != Regime::Lfpl)
                    fail(rule::Regime, "the diamond type is only available in the lfpl regime", where(nullptr));
                return t;
            } else if constexpr (std::is_same_v<N, ty::ListTy>) {
                return rebuild(ty::ListTy{check_type(ctx, n.elem)});
            } else if constexpr (std::is_same_v<N, ty::IdTy>) {
                TypeExprPtr a = check_type(ctx, n.type);
                Val av = eval_type_in(ctx, a);
                auto l = check(ctx, Fragment::Zero, n.lhs, av);
                auto r = check(ctx, Fragment::Zero, n.rhs, av);
                return rebuild(ty::IdTy{a, l.term, r.term});
            } else if constexpr (std::is_same_v<N, ty::El>) {
                auto c = check(ctx, Fragment::Zero, n.code, mk(vl::Universe{}));
                return rebuild(ty::El{c.term});
            } else if constexpr (std::is_same_v<N, ty::Reflect>) {
                return rebuild(ty::Reflect{check_type(ctx, n.inner)});
            } else {
                return t;  // Unit, Bool, Nat, Universe
            }
        },
        t->node);
}

// ---------------------------------------------------------------- checking

Checker::Checked Checker::check_lam(Ctx& ctx, Fragment sigma, const TermPtr& t, const Val& type) {
    const auto& lam = std::get<tm::Lam>(t->node);
    auto* pi = as<vl::Pi>(type);
    if (!pi) fail("Tm-Lam", "a lambda is checked against the non-function type " + show(ctx, type), where(t));
    const std::size_t level = ctx.depth();
    const Usage declared = usage_of(sigma) * pi->usage;
    std::string name = hint(t, 0, "x" + std::to_string(level));
    ctx.push(name, declared, pi->dom);
    Val cod = ev_.apply(pi->cod, {ctx.env.back()});
    auto body = check(ctx, sigma, lam.body, cod);
    require_binder(body.usage, level, declared, name, t);
    ctx.pop();
    body.usage.pop_back();
    return Checked{body.usage, make(tm::Lam{body.term}, t->span, t->hints)};
}

Checker::Checked Checker::check(Ctx& ctx, Fragment sigma, const TermPtr& t, const Val& type) {
    if (t->span.known()) lastSpan_ = t->span;
    const std::size_t n = ctx.depth();

    if (std::holds_alternative<tm::Lam>(t->node)) return check_lam(ctx, sigma, t, type);

    if (auto* p = std::get_if<tm::Pair>(&t->node)) {
        auto* tt = as<vl::Tensor>(type);
        if (!tt) fail("Tm-Pair", "a pair is checked against the non-tensor type " + show(ctx, type), where(t));
        Fragment s1 = (tt->usage == 0 || sigma == Fragment::Zero) ? Fragment::Zero : Fragment::One;
        auto a = check(ctx, s1, p->fst, tt->fst);
        Val av = eval_in(ctx, a.term);
        auto b = check(ctx, sigma, p->snd, ev_.apply(tt->snd, {av}));
        return Checked{usage_add(usage_scale(tt->usage, a.usage), b.usage),
                       make(tm::Pair{a.term, b.term, tt->usage}, t->span, t->hints)};
    }

    if (std::holds_alternative<tm::Nil>(t->node)) {
        if (!as<vl::ListTy>(type)) fail("Tm-Nil", "nil is checked against the non-list type " + show(ctx, type), where(t));
        return Checked{zeros(n), t};
    }

    if (auto* c = std::get_if<tm::Cons>(&t->node)) {
        if (auto* lt = as<vl::ListTy>(type)) {
            auto h = check(ctx, sigma, c->head, lt->elem);
            auto tl = check(ctx, sigma, c->tail, type);
            return Checked{usage_add(h.usage, tl.usage), make(tm::Cons{h.term, tl.term}, t->span, t->hints)};
        }
        fail("Tm-Cons", "cons is checked against the non-list type " + show(ctx, type), where(t));
    }

    if (auto* r = std::get_if<tm::ReflectIntro>(&t->node)) {
        auto* rt = as<vl::ReflectTy>(type);
        if (!rt) fail("Tm-R", "R(-) is checked against the non-reflection type " + show(ctx, type), where(t));
        auto inner = check(ctx, Fragment::One, r->m, rt->inner);
        for (std::size_t i = 0; i < n; ++i)
            if (inner.usage[i] != 0)
                fail(rule::ReflectIntro,
                     "the premise of R(-) is checked at sigma=1 in a zeroed context but uses '" +
                         ctx.entries[i].name + "'",
                     where(t));
        return Checked{zeros(n), make(tm::ReflectIntro{inner.term}, t->span, t->hints)};
    }

    bool present = false;
    if (has_motive_slot(t, present) && !present) {
        // A missing motive in checking position is the constant family at the expected type.
        TypeExprPtr m = ev_.quote_type(n + 1, type);
        auto s = synth(ctx, sigma, with_motive(t, m));
        return Checked{s.usage, s.term};
    }

    auto s = synth(ctx, sigma, t);
    if (!ev_.conv_type(n, s.type, type))
        fail(rule::Conv, "type mismatch: expected " + show(ctx, type) + " but the term has type " + show(ctx, s.type),
             where(t));
    return Checked{s.usage, s.term};
}

// ---------------------------------------------------------------- synthesis

Checker::Synthesized Checker::synth(Ctx& ctx, Fragment sigma, const TermPtr& t) {
    if (t->span.known()) lastSpan_ = t->span;
    const std::size_t n = ctx.depth();
    auto rebuild = [&](TermNode node) { return make(std::move(node), t->span, t->hints); };
    Val boolTy = mk(vl::BoolTy{}), natTy = mk(vl::NatTy{}), unitTy = mk(vl::UnitTy{}), diaTy = mk(vl::DiamondTy{});

    if (auto* v = std::get_if<tm::Var>(&t->node)) {
        if (v->index >= n) fail(rule::Scope, "variable index out of scope", where(t));
        const std::size_t level = n - 1 - v->index;
        UsageVector u = zeros(n);
        u[level] = usage_of(sigma);
        return Synthesized{u, t, ctx.entries[level].type};
    }
    if (auto* g = std::get_if<tm::Global>(&t->node)) {
        if (!sig_ || g->index >= sig_->entries.size())
            fail(rule::Scope, "unknown definition '" + g->name + "'", where(t));
        const auto& e = sig_->entries[g->index];
        if (!e.ok) fail(rule::Scope, "definition '" + g->name + "' did not check", where(t));
        if (sigma == Fragment::One && e.sigma == Fragment::Zero)
            fail(rule::Fragment, "definition '" + g->name + "' is declared at sigma=0 and cannot be used at runtime",
                 where(t));
        return Synthesized{zeros(n), t, e.typeVal};
    }
    if (auto* a = std::get_if<tm::App>(&t->node)) {
        auto f = synth(ctx, sigma, a->fn);
        auto* pi = as<vl::Pi>(f.type);
        if (!pi) fail("Tm-App", "applying a term of non-function type " + show(ctx, f.type), where(t));
        // Tm-App side condition: the argument fragment is 0 iff the usage or the outer fragment is 0.
        Fragment s1 = (pi->usage == 0 || sigma == Fragment::Zero) ? Fragment::Zero : Fragment::One;
        auto x = check(ctx, s1, a->arg, pi->dom);
        Val xv = eval_in(ctx, x.term);
        return Synthesized{usage_add(f.usage, usage_scale(pi->usage, x.usage)),
                           rebuild(tm::App{f.term, x.term, pi->usage}), ev_.apply(pi->cod, {xv})};
    }
    if (std::holds_alternative<tm::Lam>(t->node))
        fail("Tm-Lam", "cannot infer the type of a lambda; annotate it with (term : type)", where(t));
    if (std::holds_alternative<tm::Pair>(t->node))
        fail("Tm-Pair", "cannot infer the type of a pair; annotate it with (term : type)", where(t));
    if (std::holds_alternative<tm::Nil>(t->node))
        fail("Tm-Nil", "cannot infer the element type of nil; annotate it", where(t));

    if (auto* f = std::get_if<tm::Fst>(&t->node)) {
        require_sigma0(sigma, t, "fst");
        auto p = synth(ctx, sigma, f->pair);
        auto* tt = as<vl::Tensor>(p.type);
        if (!tt) fail("Tm-Fst", "fst of a term of non-tensor type " + show(ctx, p.type), where(t));
        return Synthesized{zeros(n), rebuild(tm::Fst{p.term}), tt->fst};
    }
    if (auto* f = std::get_if<tm::Snd>(&t->node)) {
        require_sigma0(sigma, t, "snd");
        auto p = synth(ctx, sigma, f->pair);
        auto* tt = as<vl::Tensor>(p.type);
        if (!tt) fail("Tm-Snd", "snd of a term of non-tensor type " + show(ctx, p.type), where(t));
        Val pv = eval_in(ctx, p.term);
        return Synthesized{zeros(n), rebuild(tm::Snd{p.term}), ev_.apply(tt->snd, {ev_.fst(pv)})};
    }
    if (std::holds_alternative<tm::Star>(t->node)) return Synthesized{zeros(n), t, unitTy};
    if (std::holds_alternative<tm::TrueC>(t->node) || std::holds_alternative<tm::FalseC>(t->node))
        return Synthesized{zeros(n), t, boolTy};
    if (auto* c = std::get_if<tm::Cons>(&t->node)) {
        auto h = synth(ctx, sigma, c->head);
        Val lt = mk(vl::ListTy{h.type});
        auto tl = check(ctx, sigma, c->tail, lt);
        return Synthesized{usage_add(h.usage, tl.usage), rebuild(tm::Cons{h.term, tl.term}), lt};
    }
    if (std::holds_alternative<tm::ZeroCF>(t->node)) {
        require_regime(Regime::ConsFree, t, "zero (without a diamond)");
        require_sigma0(sigma, t, "zero (cons-free)");
        return Synthesized{zeros(n), t, natTy};
    }
    if (auto* s = std::get_if<tm::SuccCF>(&t->node)) {
        require_regime(Regime::ConsFree, t, "succ (without a diamond)");
        require_sigma0(sigma, t, "succ (cons-free)");
        auto p = check(ctx, sigma, s->pred, natTy);
        return Synthesized{zeros(n), rebuild(tm::SuccCF{p.term}), natTy};
    }
    if (auto* d = std::get_if<tm::DupNat>(&t->node)) {
        require_regime(Regime::ConsFree, t, "dup");
        auto a = check(ctx, sigma, d->arg, natTy);
        Val ty = mk(vl::Tensor{1, natTy, Closure{{}, nat_ty()}});
        return Synthesized{a.usage, rebuild(tm::DupNat{a.term}), ty};
    }
    if (std::holds_alternative<tm::DiamondStar>(t->node)) {
        require_regime(Regime::Lfpl, t, "the diamond token <*>");
        require_sigma0(sigma, t, "the diamond token <*>");
        return Synthesized{zeros(n), t, diaTy};
    }
    if (auto* z = std::get_if<tm::ZeroL>(&t->node)) {
        require_regime(Regime::Lfpl, t, "zero(d)");
        auto d = check(ctx, sigma, z->d, diaTy);
        return Synthesized{d.usage, rebuild(tm::ZeroL{d.term}), natTy};
    }
    if (auto* s = std::get_if<tm::SuccL>(&t->node)) {
        require_regime(Regime::Lfpl, t, "succ(d, n)");
        auto d = check(ctx, sigma, s->d, diaTy);
        auto p = check(ctx, sigma, s->pred, natTy);
        return Synthesized{usage_add(d.usage, p.usage), rebuild(tm::SuccL{d.term, p.term}), natTy};
    }
    if (auto* r = std::get_if<tm::Refl>(&t->node)) {
        auto m = synth(ctx, sigma, r->m);
        Val mv = eval_in(ctx, m.term);
        return Synthesized{m.usage, rebuild(tm::Refl{m.term}), mk(vl::IdTy{m.type, mv, mv})};
    }
    if (auto* r = std::get_if<tm::ReflectIntro>(&t->node)) {
        auto m = synth(ctx, Fragment::One, r->m);
        for (std::size_t i = 0; i < n; ++i)
            if (m.usage[i] != 0)
                fail(rule::ReflectIntro,
                     "the premise of R(-) is checked at sigma=1 in a zeroed context but uses '" +
                         ctx.entries[i].name + "'",
                     where(t));
        return Synthesized{zeros(n), rebuild(tm::ReflectIntro{m.term}), mk(vl::ReflectTy{m.type})};
    }
    if (auto* r = std::get_if<tm::ReflectElim>(&t->node)) {
        auto m = synth(ctx, sigma, r->m);
        auto* rt = as<vl::ReflectTy>(m.type);
        if (!rt) fail("Tm-R-Elim", "R^-1 of a term of non-reflection type " + show(ctx, m.type), where(t));
        return Synthesized{m.usage, rebuild(tm::ReflectElim{m.term}), rt->inner};
    }
    if (auto* c = std::get_if<tm::Code>(&t->node)) {
        TypeExprPtr ty = check_type(ctx, c->type);
        return Synthesized{zeros(n), rebuild(tm::Code{ty}), mk(vl::Universe{})};
    }
    if (auto* a = std::get_if<tm::Ann>(&t->node)) {
        TypeExprPtr ty = check_type(ctx, a->type);
        Val tv = eval_type_in(ctx, ty);
        auto m = check(ctx, sigma, a->term, tv);
        return Synthesized{m.usage, rebuild(tm::Ann{m.term, ty}), tv};
    }

    bool present = false;
    if (has_motive_slot(t, present)) {
        if (!present)
            fail(rule::Motive, "this eliminator needs a motive ('return x. T') when its type cannot be pushed in",
                 where(t));
        TypeExprPtr motive = std::visit(
            [](const auto& x) -> TypeExprPtr {
                if constexpr (requires { x.motive; }) return x.motive;
                else return nullptr;
            },
            t->node);
        return synth_elim(ctx, sigma, t, motive);
    }
    throw std::logic_error("checker: unhandled term form");
}

Checker::Synthesized Checker::synth_elim(Ctx& ctx, Fragment sigma, const TermPtr& t, const TypeExprPtr& motive) {
    const std::size_t n = ctx.depth();
    const Usage s = usage_of(sigma);
    auto rebuild = [&](TermNode node) { return make(std::move(node), t->span, t->hints); };
    Val boolTy = mk(vl::BoolTy{}), natTy = mk(vl::NatTy{}), unitTy = mk(vl::UnitTy{}), diaTy = mk(vl::DiamondTy{});
    auto drop = [](UsageVector u, std::size_t k) {
        u.resize(u.size() - k);
        return u;
    };

    if (auto* lp = std::get_if<tm::LetPair>(&t->node)) {
        auto sc = synth(ctx, sigma, lp->scrut);
        auto* tt = as<vl::Tensor>(sc.type);
        if (!tt) fail("Tm-Let-Pair", "let-pair on a term of non-tensor type " + show(ctx, sc.type), where(t));
        TypeExprPtr m = check_motive(ctx, motive, sc.type);
        std::string xn = hint(t, 0, "x" + std::to_string(n)), yn = hint(t, 1, "y" + std::to_string(n + 1));
        ctx.push(xn, s * tt->usage, tt->fst);
        Val x = ctx.env.back();
        ctx.push(yn, s, ev_.apply(tt->snd, {x}));
        Val y = ctx.env.back();
        Val goal = motive_at(ctx, shift(m, 2, 1), mk(vl::Pair{x, y}));
        auto body = check(ctx, sigma, lp->body, goal);
        require_binder(body.usage, n, s * tt->usage, xn, t);
        require_binder(body.usage, n + 1, s, yn, t);
        ctx.pop();
        ctx.pop();
        Val scv = eval_in(ctx, sc.term);
        return Synthesized{usage_add(sc.usage, drop(body.usage, 2)), rebuild(tm::LetPair{sc.term, body.term, m}),
                           motive_at(ctx, m, scv)};
    }
    if (auto* lu = std::get_if<tm::LetUnit>(&t->node)) {
        auto sc = check(ctx, sigma, lu->scrut, unitTy);
        TypeExprPtr m = check_motive(ctx, motive, unitTy);
        auto body = check(ctx, sigma, lu->body, motive_at(ctx, m, mk(vl::Star{})));
        return Synthesized{usage_add(sc.usage, body.usage), rebuild(tm::LetUnit{sc.term, body.term, m}),
                           motive_at(ctx, m, eval_in(ctx, sc.term))};
    }
    if (auto* c = std::get_if<tm::If>(&t->node)) {
        auto sc = check(ctx, sigma, c->scrut, boolTy);
        TypeExprPtr m = check_motive(ctx, motive, boolTy);
        auto tb = check(ctx, sigma, c->thenB, motive_at(ctx, m, mk(vl::True{})));
        auto fb = check(ctx, sigma, c->elseB, motive_at(ctx, m, mk(vl::False{})));
        return Synthesized{usage_add(sc.usage, usage_join(tb.usage, fb.usage)),
                           rebuild(tm::If{sc.term, tb.term, fb.term, m}), motive_at(ctx, m, eval_in(ctx, sc.term))};
    }
    if (std::holds_alternative<tm::MatchList>(t->node) || std::holds_alternative<tm::RecList>(t->node)) {
        const bool isRec = std::holds_alternative<tm::RecList>(t->node);
        if (isRec) require_sigma0(sigma, t, "list recursion");
        TermPtr scrut, nilB, consB;
        if (isRec) {
            auto& r = std::get<tm::RecList>(t->node);
            scrut = r.scrut, nilB = r.nilB, consB = r.consB;
        } else {
            auto& r = std::get<tm::MatchList>(t->node);
            scrut = r.scrut, nilB = r.nilB, consB = r.consB;
        }
        auto sc = synth(ctx, sigma, scrut);
        auto* lt = as<vl::ListTy>(sc.type);
        if (!lt) fail(isRec ? "Tm-List-Rec" : "Tm-List-Match", "eliminating a term of non-list type " + show(ctx, sc.type),
                      where(t));
        TypeExprPtr m = check_motive(ctx, motive, sc.type);
        auto nb = check(ctx, sigma, nilB, motive_at(ctx, m, mk(vl::Nil{})));
        std::string hn = hint(t, 0, "h" + std::to_string(n)), tn = hint(t, 1, "t" + std::to_string(n + 1));
        ctx.push(hn, s, lt->elem);
        Val h = ctx.env.back();
        ctx.push(tn, s, sc.type);
        Val tl = ctx.env.back();
        const std::size_t k = isRec ? 3 : 2;
        std::string pn = hint(t, 2, "p" + std::to_string(n + 2));
        if (isRec) ctx.push(pn, s, motive_at(ctx, shift(m, 2, 1), tl));
        Val goal = motive_at(ctx, shift(m, static_cast<long>(k), 1), mk(vl::Cons{h, tl}));
        auto cb = check(ctx, sigma, consB, goal);
        require_binder(cb.usage, n, s, hn, t);
        require_binder(cb.usage, n + 1, s, tn, t);
        if (isRec) require_binder(cb.usage, n + 2, s, pn, t);
        for (std::size_t i = 0; i < k; ++i) ctx.pop();
        UsageVector branches = usage_join(nb.usage, drop(cb.usage, k));
        TermPtr out = isRec ? rebuild(tm::RecList{sc.term, nb.term, cb.term, m})
                            : rebuild(tm::MatchList{sc.term, nb.term, cb.term, m});
        return Synthesized{usage_add(sc.usage, branches), out, motive_at(ctx, m, eval_in(ctx, sc.term))};
    }
    if (auto* r = std::get_if<tm::RecNatCF>(&t->node)) {
        require_regime(Regime::ConsFree, t, "rec with cons-free branches");
        auto sc = check(ctx, sigma, r->scrut, natTy);
        TypeExprPtr m = check_motive(ctx, motive, natTy);
        auto zb = check(ctx, sigma, r->zeroB, motive_at(ctx, m, mk(vl::Zero{})));
        require_closed_branch(zb.usage, n, ctx, t, "zero");
        std::string nn = hint(t, 0, "n" + std::to_string(n)), pn = hint(t, 1, "p" + std::to_string(n + 1));
        ctx.push(nn, 0, natTy);
        Val nv = ctx.env.back();
        ctx.push(pn, s, motive_at(ctx, shift(m, 1, 1), nv));
        auto sb = check(ctx, sigma, r->succB, motive_at(ctx, shift(m, 2, 1), mk(vl::Succ{nv})));
        require_closed_branch(sb.usage, n, ctx, t, "succ");
        require_binder(sb.usage, n, 0, nn, t);
        require_binder(sb.usage, n + 1, s, pn, t);
        ctx.pop();
        ctx.pop();
        return Synthesized{sc.usage, rebuild(tm::RecNatCF{sc.term, zb.term, sb.term, m}),
                           motive_at(ctx, m, eval_in(ctx, sc.term))};
    }
    if (auto* r = std::get_if<tm::RecNatL>(&t->node)) {
        require_regime(Regime::Lfpl, t, "rec with diamond branches");
        auto sc = check(ctx, sigma, r->scrut, natTy);
        TypeExprPtr m = check_motive(ctx, motive, natTy);
        std::string dz = hint(t, 0, "d" + std::to_string(n));
        ctx.push(dz, s, diaTy);
        auto zb = check(ctx, sigma, r->zeroB, motive_at(ctx, shift(m, 1, 1), mk(vl::Zero{})));
        require_closed_branch(zb.usage, n, ctx, t, "zero");
        require_binder(zb.usage, n, s, dz, t);
        ctx.pop();
        std::string dn = hint(t, 1, "d" + std::to_string(n)), nn = hint(t, 2, "n" + std::to_string(n + 1)),
                    pn = hint(t, 3, "p" + std::to_string(n + 2));
        ctx.push(dn, s, diaTy);
        ctx.push(nn, 0, natTy);
        Val nv = ctx.env.back();
        ctx.push(pn, s, motive_at(ctx, shift(m, 2, 1), nv));
        auto sb = check(ctx, sigma, r->succB, motive_at(ctx, shift(m, 3, 1), mk(vl::Succ{nv})));
        require_closed_branch(sb.usage, n, ctx, t, "succ");
        require_binder(sb.usage, n, s, dn, t);
        require_binder(sb.usage, n + 1, 0, nn, t);
        require_binder(sb.usage, n + 2, s, pn, t);
        ctx.pop();
        ctx.pop();
        ctx.pop();
        return Synthesized{sc.usage, rebuild(tm::RecNatL{sc.term, zb.term, sb.term, m}),
                           motive_at(ctx, m, eval_in(ctx, sc.term))};
    }
    throw std::logic_error("checker: unhandled eliminator");
}

// ---------------------------------------------------------------- entry points

void check_type(Regime regime, const Context& g, const TypeExprPtr& t, const Signature* sig) {
    Checker c(regime, sig);
    Ctx ctx = c.make_context(ctx_zero(g));
    c.check_type(ctx, t);
}

UsageVector infer_usage_check(Regime regime, const Context& g, Fragment sigma, const TermPtr& m,
                              const TypeExprPtr& t, const Signature* sig) {
    Checker c(regime, sig);
    Ctx ctx = c.make_context(g);
    TypeExprPtr ty = c.check_type(ctx, t);
    auto r = c.check(ctx, sigma, m, c.evaluator().eval_type(ty, ctx.env));
    for (std::size_t i = 0; i < g.size(); ++i)
        if (r.usage[i] > g[i].usage)
            fail(rule::Sub,
                 "variable '" + g[i].name + "' is used " + std::to_string(r.usage[i]) +
                     " time(s) but is declared with usage " + std::to_string(g[i].usage),
                 m->span);
    return r.usage;
}

void conv_type(Regime regime, const Context& g0, const TypeExprPtr& s, const TypeExprPtr& t, const Signature* sig) {
    Checker c(regime, sig);
    Ctx ctx = c.make_context(ctx_zero(g0));
    TypeExprPtr s1 = c.check_type(ctx, s), t1 = c.check_type(ctx, t);
    auto& ev = c.evaluator();
    Val sv = ev.eval_type(s1, ctx.env), tv = ev.eval_type(t1, ctx.env);
    if (!ev.conv_type(ctx.depth(), sv, tv)) {
        std::vector<std::string> names;
        for (const auto& e : ctx.entries) names.push_back(e.name);
        fail(rule::Conv,
             "types are not convertible: " + pretty::type_to_string(ev.quote_type(ctx.depth(), sv), names, sig) +
                 " vs " + pretty::type_to_string(ev.quote_type(ctx.depth(), tv), names, sig),
             s->span);
    }
}

TermPtr normalize_sigma0(Regime regime, const Context& g0, const TermPtr& m, const Signature* sig,
                         const TypeExprPtr& type) {
    Checker c(regime, sig);
    Ctx ctx = c.make_context(ctx_zero(g0));
    auto& ev = c.evaluator();
    TermPtr elab;
    Val tv;
    if (type) {
        TypeExprPtr t1 = c.check_type(ctx, type);
        tv = ev.eval_type(t1, ctx.env);
        elab = c.check(ctx, Fragment::Zero, m, tv).term;
    } else {
        auto s = c.synth(ctx, Fragment::Zero, m);
        elab = s.term;
        tv = s.type;
    }
    return ev.quote(ctx.depth(), ev.eval(elab, ctx.env), tv);
}

void check_declaration(Signature& sig, const Declaration& d, std::optional<Fragment> sigmaOverride) {
    GlobalEntry entry;
    entry.name = d.name;
    entry.sigma = d.sigma;
    entry.span = d.span;
    sig.entries.push_back(entry);
    const std::size_t idx = sig.entries.size() - 1;
    Checker c(sig.regime, &sig);
    Ctx ctx;
    TypeExprPtr ty = c.check_type(ctx, d.type);
    Val tv = c.evaluator().eval_type(ty, ctx.env);
    auto r = c.check(ctx, sigmaOverride.value_or(d.sigma), d.body, tv);
    auto& e = sig.entries[idx];
    e.type = ty;
    e.typeVal = tv;
    e.body = r.term;
    e.value = c.evaluator().eval(r.term, {});
    e.ok = true;
}

}  // namespace qtt::kernel
