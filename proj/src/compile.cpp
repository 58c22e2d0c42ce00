#include "qtt/compile.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace qtt::compile {

namespace tm = kernel::tm;
namespace vl = kernel::vl;
namespace m = machine;
using kernel::Regime;
using kernel::TermPtr;
using potentials::poly_add;
using potentials::poly_eval;
using potentials::poly_join;
using potentials::poly_scale;
using potentials::poly_shift_up;

RecConstants rec_constants(Regime r) {
    // Loop body: LetPair on the tag pair, If on the tag. Each call costs App + LetPair + If = 3.
    // ConsFree successor: Seq(recursive App, branch) adds the Seq step.
    // LFPL successor: additionally Seq(Unit, branch) to materialise the released diamond.
    return r == Regime::ConsFree ? RecConstants{4, 3, 2} : RecConstants{6, 3, 2};
}

MonoidKind monoid_for(Regime r) { return r == Regime::ConsFree ? MonoidKind::MaxPoly : MonoidKind::PlusPoly; }

Potential rec_potential(Regime regime, const Potential& succBranch, const Potential& zeroBranch, Nat setup) {
    const MonoidKind k = monoid_for(regime);
    const RecConstants c = rec_constants(regime);
    Potential perIter = potentials::plus(k, potentials::acct(k, c.succ), succBranch);
    Potential out = potentials::raise(perIter);
    out = potentials::plus(k, out, potentials::acct(k, c.zero));
    out = potentials::plus(k, out, zeroBranch);
    return potentials::plus(k, out, potentials::acct(k, setup));
}

namespace {

struct Code {
    m::ExprPtr e;
    Polynomial cost;
};

Polynomial konst(Nat k) { return Polynomial::constant(k); }

// Machine environment layout: `depth` slots; kernel level i lives at position slot[i] (0 = leftmost).
struct Layout {
    std::size_t depth = 0;
    std::vector<std::size_t> slot;

    std::size_t index_of(std::size_t pos) const { return depth - 1 - pos; }
    Layout extend(std::size_t extraSlots) const {
        Layout l = *this;
        l.depth += extraSlots;
        return l;
    }
    Layout bind_kernel(std::size_t pos) const {
        Layout l = *this;
        l.slot.push_back(pos);
        return l;
    }
};

[[noreturn]] void internal(const std::string& msg) { throw std::logic_error("compile: " + msg); }

class Compiler {
public:
    Compiler(Regime regime, const kernel::Signature* sig) : regime_(regime), sig_(sig) {}

    Code compile(const TermPtr& t, const Layout& L) {
        return std::visit([&](const auto& n) { return node(n, t, L); }, t->node);
    }

private:
    using Cont = std::function<Code(const Layout&, std::size_t pos)>;

    // Puts the value of `t` in a slot and continues; variables are used in place.
    Code bind(const TermPtr& t, const Layout& L, const Cont& k) {
        if (auto* v = std::get_if<tm::Var>(&t->node)) return k(L, slot_of(*v, L));
        if (auto* a = std::get_if<tm::Ann>(&t->node)) return bind(a->term, L, k);
        Code c = compile(t, L);
        return seq(c, k(L.extend(1), L.depth));
    }

    Code bind_code(const Code& c, const Layout& L, const Cont& k) { return seq(c, k(L.extend(1), L.depth)); }

    static Code seq(const Code& a, const Code& b) {
        return Code{m::seq(a.e, b.e), poly_add(poly_add(a.cost, konst(1)), b.cost)};
    }

    std::size_t slot_of(const tm::Var& v, const Layout& L) const {
        if (v.index >= L.slot.size()) internal("variable out of layout");
        return L.slot[L.slot.size() - 1 - v.index];
    }

    static Code dummy() { return Code{m::unit(), konst(1)}; }

    // Builds a tagged pair (tag, slot contents).
    static Code tagged(bool tag, std::size_t pos, const Layout& L) {
        // Seq(tag, MkPair(0, pos)) with pos seen under one more binder.
        m::ExprPtr e = m::seq(tag ? m::mk_true() : m::mk_false(), m::mk_pair(0, L.index_of(pos) + 1));
        return Code{e, konst(3)};
    }

    // ---------------------------------------------------------------- nodes

    Code node(const tm::Var& v, const TermPtr&, const Layout& L) {
        return Code{m::var(L.index_of(slot_of(v, L))), konst(1)};
    }
    Code node(const tm::Global& g, const TermPtr&, const Layout& L) {
        if (!sig_ || g.index >= sig_->entries.size() || !sig_->entries[g.index].body)
            internal("unknown global " + g.name);
        // Closed bodies ignore the kernel part of the layout.
        Layout closed{L.depth, {}};
        return compile(sig_->entries[g.index].body, closed);
    }
    Code node(const tm::Lam& l, const TermPtr&, const Layout& L) {
        Layout inner = L.extend(2).bind_kernel(L.depth + 1);
        Code body = compile(l.body, inner);
        return Code{m::lam(body.e), poly_add(konst(1), body.cost)};
    }
    Code node(const tm::App& a, const TermPtr&, const Layout& L) {
        if (!a.argUsage) internal("application without elaborated usage");
        const kernel::Usage pi = *a.argUsage;
        return bind(a.fn, L, [&](const Layout& L1, std::size_t fpos) {
            auto call = [&, fpos](const Layout& L2, std::size_t apos) {
                return Code{m::app(L2.index_of(fpos), L2.index_of(apos)), konst(1)};
            };
            if (pi == 0) return bind_code(dummy(), L1, call);
            Code c = bind(a.arg, L1, call);
            // The callee may use the argument pi times; the argument's own evaluation
            // is already inside c, so only the surplus (pi - 1) copies are added.
            Code argOnly = compile_cost_only(a.arg, L1);
            if (pi > 1) c.cost = poly_add(c.cost, poly_scale(pi - 1, argOnly.cost));
            return c;
        });
    }
    // Cost of a term's code (used for usage scaling); variables cost nothing extra to share.
    Code compile_cost_only(const TermPtr& t, const Layout& L) {
        if (std::holds_alternative<tm::Var>(t->node)) return Code{nullptr, Polynomial{}};
        return compile(t, L);
    }
    Code node(const tm::Pair& p, const TermPtr&, const Layout& L) {
        if (!p.fstUsage) internal("pair without elaborated usage");
        const kernel::Usage pi = *p.fstUsage;
        auto withFst = [&](const Layout& L1, std::size_t apos) {
            return bind(p.snd, L1, [&, apos](const Layout& L2, std::size_t bpos) {
                return Code{m::mk_pair(L2.index_of(apos), L2.index_of(bpos)), konst(1)};
            });
        };
        if (pi == 0) return bind_code(dummy(), L, withFst);
        Code c = bind(p.fst, L, withFst);
        if (pi > 1) c.cost = poly_add(c.cost, poly_scale(pi - 1, compile_cost_only(p.fst, L).cost));
        return c;
    }
    Code node(const tm::Fst&, const TermPtr&, const Layout&) { internal("fst is sigma=0 only"); }
    Code node(const tm::Snd&, const TermPtr&, const Layout&) { internal("snd is sigma=0 only"); }
    Code node(const tm::LetPair& lp, const TermPtr&, const Layout& L) {
        return bind(lp.scrut, L, [&](const Layout& L1, std::size_t s) {
            Layout inner = L1.extend(2).bind_kernel(L1.depth).bind_kernel(L1.depth + 1);
            Code body = compile(lp.body, inner);
            return Code{m::let_pair(L1.index_of(s), body.e), poly_add(konst(1), body.cost)};
        });
    }
    Code node(const tm::Star&, const TermPtr&, const Layout&) { return dummy(); }
    Code node(const tm::LetUnit& lu, const TermPtr&, const Layout& L) {
        if (std::holds_alternative<tm::Var>(lu.scrut->node)) return compile(lu.body, L);
        Code s = compile(lu.scrut, L);
        Layout L1 = L.extend(1);
        return seq(s, compile(lu.body, L1));
    }
    Code node(const tm::TrueC&, const TermPtr&, const Layout&) { return Code{m::mk_true(), konst(1)}; }
    Code node(const tm::FalseC&, const TermPtr&, const Layout&) { return Code{m::mk_false(), konst(1)}; }
    Code node(const tm::If& c, const TermPtr&, const Layout& L) {
        return bind(c.scrut, L, [&](const Layout& L1, std::size_t s) {
            Code a = compile(c.thenB, L1);
            Code b = compile(c.elseB, L1);
            return Code{m::if_(L1.index_of(s), a.e, b.e), poly_add(konst(1), poly_join(a.cost, b.cost))};
        });
    }
    Code node(const tm::Nil&, const TermPtr&, const Layout& L) {
        // (false, unit)
        Code u = dummy();
        return bind_code(u, L, [](const Layout& L1, std::size_t pos) { return tagged(false, pos, L1); });
    }
    Code node(const tm::Cons& c, const TermPtr&, const Layout& L) {
        // (true, (head, tail))
        return bind(c.head, L, [&](const Layout& L1, std::size_t h) {
            return bind(c.tail, L1, [&, h](const Layout& L2, std::size_t t) {
                Code cell{m::mk_pair(L2.index_of(h), L2.index_of(t)), konst(1)};
                return bind_code(cell, L2, [](const Layout& L3, std::size_t pos) { return tagged(true, pos, L3); });
            });
        });
    }
    Code node(const tm::MatchList& ml, const TermPtr&, const Layout& L) {
        return bind(ml.scrut, L, [&](const Layout& L1, std::size_t s) {
            // LetPair(s, If(tag, LetPair(rest, cons branch), nil branch)); slots: tag, rest.
            Layout L2 = L1.extend(2);
            Code nilB = compile(ml.nilB, L2);
            Layout L3 = L2.extend(2).bind_kernel(L2.depth).bind_kernel(L2.depth + 1);
            Code consB = compile(ml.consB, L3);
            m::ExprPtr consE = m::let_pair(0, consB.e);
            m::ExprPtr e = m::let_pair(L1.index_of(s), m::if_(1, consE, nilB.e));
            Polynomial cost = poly_add(konst(2), poly_join(poly_add(konst(1), consB.cost), nilB.cost));
            return Code{e, cost};
        });
    }
    Code node(const tm::RecList&, const TermPtr&, const Layout&) { internal("list recursion is sigma=0 only"); }
    Code node(const tm::ZeroCF&, const TermPtr&, const Layout&) { internal("cons-free zero is sigma=0 only"); }
    Code node(const tm::SuccCF&, const TermPtr&, const Layout&) { internal("cons-free succ is sigma=0 only"); }
    Code node(const tm::DupNat& d, const TermPtr&, const Layout& L) {
        return bind(d.arg, L, [](const Layout& L1, std::size_t pos) {
            return Code{m::mk_pair(L1.index_of(pos), L1.index_of(pos)), konst(1)};
        });
    }
    Code node(const tm::DiamondStar&, const TermPtr&, const Layout&) { return dummy(); }

    // Evaluates a diamond argument only when it is not already a variable.
    Code with_diamond(const TermPtr& d, const Layout& L, const std::function<Code(const Layout&)>& k) {
        if (std::holds_alternative<tm::Var>(d->node)) return k(L);
        Code c = compile(d, L);
        return seq(c, k(L.extend(1)));
    }
    Code node(const tm::ZeroL& z, const TermPtr&, const Layout& L) {
        return with_diamond(z.d, L, [&](const Layout& L1) {
            return bind_code(dummy(), L1, [](const Layout& L2, std::size_t pos) { return tagged(true, pos, L2); });
        });
    }
    Code node(const tm::SuccL& s, const TermPtr&, const Layout& L) {
        return with_diamond(s.d, L, [&](const Layout& L1) {
            return bind(s.pred, L1, [](const Layout& L2, std::size_t pos) { return tagged(false, pos, L2); });
        });
    }
    Code node(const tm::RecNatCF& r, const TermPtr&, const Layout& L) {
        return rec(r.scrut, L, [&](const Layout& body) {
            // body slots: ..., self, v, tag, rest
            Code zero = compile(r.zeroB, body);
            Layout succL = body.extend(1).bind_kernel(body.depth - 1).bind_kernel(body.depth);
            Code succ = compile(r.succB, succL);
            m::ExprPtr succE = m::seq(m::app(3, 0), succ.e);
            return std::pair{zero, Code{succE, succ.cost}};
        });
    }
    Code node(const tm::RecNatL& r, const TermPtr&, const Layout& L) {
        return rec(r.scrut, L, [&](const Layout& body) {
            // The zero case reuses the unit in natValue(0)'s rest slot as its diamond.
            Code zero = compile(r.zeroB, body.bind_kernel(body.depth - 1));
            // slots: ..., self, v, tag, rest, result, diamond
            Layout succL = body.extend(2)
                               .bind_kernel(body.depth + 1)
                               .bind_kernel(body.depth - 1)
                               .bind_kernel(body.depth);
            Code succ = compile(r.succB, succL);
            m::ExprPtr succE = m::seq(m::app(3, 0), m::seq(m::unit(), succ.e));
            return std::pair{zero, Code{succE, succ.cost}};
        });
    }
    Code rec(const TermPtr& scrut, const Layout& L,
             const std::function<std::pair<Code, Code>(const Layout&)>& branches) {
        return bind(scrut, L, [&](const Layout& L1, std::size_t s) {
            Layout body = L1.extend(4);  // self, v, tag, rest
            auto [zero, succ] = branches(body);
            m::ExprPtr loop = m::lam(m::let_pair(0, m::if_(1, zero.e, succ.e)));
            m::ExprPtr e = m::seq(loop, m::app(0, L1.index_of(s) + 1));
            const RecConstants c = rec_constants(regime_);
            Potential p = rec_potential(regime_, Potential{0, succ.cost}, Potential{0, zero.cost}, c.setup);
            return Code{e, p.poly};
        });
    }
    Code node(const tm::Refl&, const TermPtr&, const Layout&) { return dummy(); }
    Code node(const tm::ReflectIntro& r, const TermPtr&, const Layout& L) { return compile(r.m, L); }
    Code node(const tm::ReflectElim& r, const TermPtr&, const Layout& L) { return compile(r.m, L); }
    Code node(const tm::Code&, const TermPtr&, const Layout&) { return dummy(); }
    Code node(const tm::Ann& a, const TermPtr&, const Layout& L) { return compile(a.term, L); }

    Regime regime_;
    const kernel::Signature* sig_;
};

Layout initial_layout(std::size_t depth) {
    Layout L{depth, {}};
    for (std::size_t i = 0; i < depth; ++i) L.slot.push_back(i);
    return L;
}

}  // namespace

CompiledProgram compile(Regime regime, const kernel::Signature* sig, const TermPtr& term, std::size_t contextDepth) {
    Compiler c(regime, sig);
    Code code = c.compile(term, initial_layout(contextDepth));
    CompiledProgram p;
    p.code = code.e;
    p.potential = Potential{0, code.cost};
    p.kind = monoid_for(regime);
    p.regime = regime;
    p.inputArity = contextDepth;
    return p;
}

CompiledProgram compile_declaration(const kernel::Signature& sig, std::size_t index) {
    const auto& e = sig.entries.at(index);
    if (!e.ok || e.sigma != kernel::Fragment::One) internal("declaration is not a checked sigma=1 definition");
    if (auto* pi = kernel::as<vl::Pi>(e.typeVal)) {
        CompiledProgram p;
        if (auto* lam = std::get_if<tm::Lam>(&e.body->node)) {
            p = compile(sig.regime, &sig, lam->body, 1);
        } else {
            // Apply the closed function value to the input slot.
            Compiler c(sig.regime, &sig);
            Code f = c.compile(e.body, Layout{1, {}});
            Code call{m::app(0, 1), Polynomial::constant(1)};
            p.code = m::seq(f.e, call.e);
            p.potential = Potential{0, poly_add(poly_add(f.cost, konst(1)), call.cost)};
            p.kind = monoid_for(sig.regime);
            p.regime = sig.regime;
            p.inputArity = 1;
        }
        p.inputUsage = pi->usage;
        return p;
    }
    return compile(sig.regime, &sig, e.body, 0);
}

Nat BoundReport::at_size(Nat size) const { return poly_eval(q, size); }

BoundReport extract_bound(const CompiledProgram& p) {
    BoundReport r;
    r.q = p.potential.poly;
    r.regime = p.regime;
    r.description = "n |-> q(n+1) where q(x) = " + potentials::to_string(r.q);
    return r;
}

// ---------------------------------------------------------------- values

namespace {

Nat combine(MonoidKind kind, Nat a, Nat b) {
    if (kind == MonoidKind::MaxPoly) return std::max(a, b);
    if (a > std::numeric_limits<Nat>::max() - b) throw std::overflow_error("input size overflow");
    return a + b;
}

Nat scale_size(MonoidKind kind, kernel::Usage pi, Nat s) {
    if (kind == MonoidKind::MaxPoly) return pi == 0 ? 0 : s;
    return pi * s;
}

std::uint64_t kernel_nat(const kernel::Val& v) {
    std::uint64_t n = 0;
    const kernel::Value* cur = v.get();
    while (auto* s = std::get_if<vl::Succ>(&cur->node)) {
        ++n;
        cur = s->pred.get();
    }
    if (!std::holds_alternative<vl::Zero>(cur->node)) throw EncodeError("natural number value is not canonical");
    return n;
}

}  // namespace

EncodedInput encode_value(kernel::Evaluator& ev, const kernel::Val& type, const kernel::Val& value,
                          MonoidKind kind) {
    if (kernel::as<vl::BoolTy>(type)) {
        if (kernel::as<vl::True>(value)) return {m::v_true(), 0};
        if (kernel::as<vl::False>(value)) return {m::v_false(), 0};
        throw EncodeError("boolean value is not canonical");
    }
    if (kernel::as<vl::UnitTy>(type)) return {m::v_unit(), 0};
    if (kernel::as<vl::DiamondTy>(type)) return {m::v_unit(), 1};
    if (kernel::as<vl::NatTy>(type)) {
        std::uint64_t n = kernel_nat(value);
        return {m::nat_value(n), n + 1};
    }
    if (auto* t = kernel::as<vl::Tensor>(type)) {
        auto* p = kernel::as<vl::Pair>(value);
        if (!p) throw EncodeError("pair value is not canonical");
        EncodedInput a{m::v_unit(), 0};
        if (t->usage != 0) {
            a = encode_value(ev, t->fst, p->fst, kind);
            a.size = scale_size(kind, t->usage, a.size);
        }
        EncodedInput b = encode_value(ev, ev.apply(t->snd, {p->fst}), p->snd, kind);
        return {m::v_pair(a.value, b.value), combine(kind, a.size, b.size)};
    }
    if (auto* l = kernel::as<vl::ListTy>(type)) {
        std::vector<m::ValuePtr> items;
        Nat size = 0;
        kernel::Val cur = value;
        while (auto* c = kernel::as<vl::Cons>(cur)) {
            EncodedInput h = encode_value(ev, l->elem, c->head, kind);
            items.push_back(h.value);
            size = combine(kind, size, h.size);
            cur = c->tail;
        }
        if (!kernel::as<vl::Nil>(cur)) throw EncodeError("list value is not canonical");
        return {m::encode_list(items), size};
    }
    if (auto* r = kernel::as<vl::ReflectTy>(type)) {
        auto* ri = kernel::as<vl::ReflIntro>(value);
        return encode_value(ev, r->inner, ri ? ri->m : value, kind);
    }
    throw EncodeError("inputs must have a first-order type (Bool, Unit, Nat, diamond, tensor, List)");
}

namespace {

const m::val::Pair* mpair(const m::ValuePtr& v) {
    auto* p = std::get_if<m::val::Pair>(&v->node);
    if (!p) throw m::DecodeError("expected a pair");
    return p;
}

}  // namespace

kernel::TermPtr decode_value(kernel::Evaluator& ev, const kernel::Val& type, const m::ValuePtr& v) {
    using kernel::make;
    if (kernel::as<vl::BoolTy>(type)) return m::decode_bool(v) ? make(tm::TrueC{}) : make(tm::FalseC{});
    if (kernel::as<vl::UnitTy>(type)) return make(tm::Star{});
    if (kernel::as<vl::DiamondTy>(type)) return make(tm::DiamondStar{});
    if (kernel::as<vl::NatTy>(type)) return kernel::nat_literal(ev.regime(), m::decode_nat(v));
    if (auto* t = kernel::as<vl::Tensor>(type)) {
        auto* p = mpair(v);
        kernel::TermPtr a = t->usage == 0 ? make(tm::Star{}) : decode_value(ev, t->fst, p->fst);
        // The second component's type may depend on the first; erased firsts leave it opaque.
        kernel::Val aval = ev.eval(a, {});
        kernel::TermPtr b = decode_value(ev, ev.apply(t->snd, {aval}), p->snd);
        return make(tm::Pair{a, b, t->usage});
    }
    if (auto* l = kernel::as<vl::ListTy>(type)) {
        auto items = m::decode_list(v);
        kernel::TermPtr acc = make(tm::Nil{});
        for (auto it = items.rbegin(); it != items.rend(); ++it)
            acc = make(tm::Cons{decode_value(ev, l->elem, *it), acc});
        return acc;
    }
    if (auto* r = kernel::as<vl::ReflectTy>(type)) return make(tm::ReflectIntro{decode_value(ev, r->inner, v)});
    throw m::DecodeError("result type is not first-order");
}

bool agrees(kernel::Evaluator& ev, const kernel::Val& type, const m::ValuePtr& v, const kernel::Val& expected) {
    try {
        if (kernel::as<vl::BoolTy>(type)) {
            bool b = m::decode_bool(v);
            return b ? static_cast<bool>(kernel::as<vl::True>(expected))
                     : static_cast<bool>(kernel::as<vl::False>(expected));
        }
        if (kernel::as<vl::UnitTy>(type) || kernel::as<vl::DiamondTy>(type)) return true;
        if (kernel::as<vl::NatTy>(type)) return m::decode_nat(v) == kernel_nat(expected);
        if (auto* t = kernel::as<vl::Tensor>(type)) {
            auto* p = mpair(v);
            auto* q = kernel::as<vl::Pair>(expected);
            if (!q) return false;
            if (t->usage != 0 && !agrees(ev, t->fst, p->fst, q->fst)) return false;
            return agrees(ev, ev.apply(t->snd, {q->fst}), p->snd, q->snd);
        }
        if (auto* l = kernel::as<vl::ListTy>(type)) {
            auto items = m::decode_list(v);
            kernel::Val cur = expected;
            for (const auto& it : items) {
                auto* c = kernel::as<vl::Cons>(cur);
                if (!c || !agrees(ev, l->elem, it, c->head)) return false;
                cur = c->tail;
            }
            return static_cast<bool>(kernel::as<vl::Nil>(cur));
        }
        if (auto* r = kernel::as<vl::ReflectTy>(type)) {
            auto* ri = kernel::as<vl::ReflIntro>(expected);
            return agrees(ev, r->inner, v, ri ? ri->m : expected);
        }
    } catch (const m::DecodeError&) {
        return false;
    } catch (const EncodeError&) {
        return false;
    }
    throw m::DecodeError("result type is not first-order");
}

// ---------------------------------------------------------------- running

namespace {

Nat saturating_add(Nat a, Nat b) { return a > std::numeric_limits<Nat>::max() - b ? std::numeric_limits<Nat>::max() : a + b; }

RunResult run(const CompiledProgram& p, const std::vector<m::ValuePtr>& env, Nat size, Nat label,
              const RunOptions& opts) {
    RunResult r;
    r.n = label;
    try {
        r.bound = poly_eval(p.potential.poly, size);
    } catch (const std::overflow_error&) {
        r.bound = std::numeric_limits<Nat>::max();
    }
    m::EvalOptions eo;
    eo.trace = opts.trace;
    r.outcome = m::eval(p.code, m::Env(env), opts.fuel.value_or(saturating_add(r.bound, kFuelSlack)), eo);
    if (auto* d = std::get_if<m::Done>(&r.outcome)) {
        r.steps = d->steps;
        r.ok = d->steps <= r.bound;
    } else if (auto* o = std::get_if<m::OutOfFuel>(&r.outcome)) {
        r.steps = o->steps_taken;
    } else {
        r.steps = std::get<m::Stuck>(r.outcome).steps_taken;
    }
    return r;
}

}  // namespace

RunResult run_and_verify(const CompiledProgram& p, Nat n, const RunOptions& opts) {
    if (p.inputArity != 1) throw std::invalid_argument("run_and_verify: program does not take one input");
    Nat size = scale_size(p.kind, p.inputUsage, n + 1);
    return run(p, {m::nat_value(n)}, size, n, opts);
}

RunResult run_and_verify(const CompiledProgram& p, const EncodedInput& input, const RunOptions& opts) {
    if (p.inputArity > 1) throw std::invalid_argument("run_and_verify: program takes more than one input");
    if (p.inputArity == 0) return run(p, {}, 1, 0, opts);
    Nat size = scale_size(p.kind, p.inputUsage, input.size);
    return run(p, {input.value}, size, input.size, opts);
}

CompiledProgram sabotage_halve(CompiledProgram p) {
    std::vector<Nat> c = p.potential.poly.coeffs();
    for (auto& x : c) x /= 2;
    p.potential.poly = Polynomial(std::move(c));
    return p;
}

}  // namespace qtt::compile
