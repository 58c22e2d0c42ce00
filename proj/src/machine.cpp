#include "qtt/machine.hpp"

#include <cctype>
#include <sstream>

#include "qtt/teardown.hpp"

namespace qtt::machine {

ExprPtr lam(ExprPtr body) { return std::make_shared<Expr>(Expr{ex::Lam{std::move(body)}}); }
ExprPtr unit() { return std::make_shared<Expr>(Expr{ex::Unit{}}); }
ExprPtr mk_pair(std::size_t i, std::size_t j) { return std::make_shared<Expr>(Expr{ex::MkPair{i, j}}); }
ExprPtr mk_true() { return std::make_shared<Expr>(Expr{ex::True{}}); }
ExprPtr mk_false() { return std::make_shared<Expr>(Expr{ex::False{}}); }
ExprPtr var(std::size_t i) { return std::make_shared<Expr>(Expr{ex::Var{i}}); }
ExprPtr seq(ExprPtr first, ExprPtr rest) {
    return std::make_shared<Expr>(Expr{ex::Seq{std::move(first), std::move(rest)}});
}
ExprPtr app(std::size_t i, std::size_t j) { return std::make_shared<Expr>(Expr{ex::App{i, j}}); }
ExprPtr let_pair(std::size_t i, ExprPtr body) {
    return std::make_shared<Expr>(Expr{ex::LetPair{i, std::move(body)}});
}
ExprPtr if_(std::size_t i, ExprPtr thenB, ExprPtr elseB) {
    return std::make_shared<Expr>(Expr{ex::If{i, std::move(thenB), std::move(elseB)}});
}

// ---------------------------------------------------------------- Env

Env::Env(const std::vector<ValuePtr>& leftToRight) {
    for (const auto& v : leftToRight) *this = push(v);
}

Env Env::push(ValuePtr v) const {
    return Env(std::make_shared<const EnvNode>(EnvNode{std::move(v), head_, size() + 1}));
}

std::optional<ValuePtr> Env::lookup(std::size_t i) const {
    const EnvNode* node = head_.get();
    while (node && i > 0) {
        node = node->parent.get();
        --i;
    }
    if (!node) return std::nullopt;
    return node->value;
}

std::vector<ValuePtr> Env::to_vector() const {
    std::vector<ValuePtr> out(size());
    std::size_t k = out.size();
    for (const EnvNode* node = head_.get(); node; node = node->parent.get()) out[--k] = node->value;
    return out;
}

EnvNode::~EnvNode() {
    detail::defer_release(std::move(value));
    detail::defer_release(std::move(parent));
}

// ---------------------------------------------------------------- values

Value::~Value() {
    if (auto* p = std::get_if<val::Pair>(&node)) {
        detail::defer_release(std::move(p->fst));
        detail::defer_release(std::move(p->snd));
    } else if (auto* c = std::get_if<val::Clo>(&node)) {
        c->env = Env();
    }
}

namespace {
const ValuePtr kUnit = std::make_shared<const Value>(Value{val::Unit{}});
const ValuePtr kTrue = std::make_shared<const Value>(Value{val::True{}});
const ValuePtr kFalse = std::make_shared<const Value>(Value{val::False{}});
}  // namespace

ValuePtr v_unit() { return kUnit; }
ValuePtr v_true() { return kTrue; }
ValuePtr v_false() { return kFalse; }
ValuePtr v_bool(bool b) { return b ? kTrue : kFalse; }
ValuePtr v_pair(ValuePtr a, ValuePtr b) {
    return std::make_shared<const Value>(Value{val::Pair{std::move(a), std::move(b)}});
}
ValuePtr v_clo(ExprPtr body, Env env) {
    return std::make_shared<const Value>(Value{val::Clo{std::move(body), std::move(env)}});
}

namespace {
bool expr_equal(const Expr& a, const Expr& b);

bool env_equal(const Env& a, const Env& b) {
    if (a.size() != b.size()) return false;
    auto va = a.to_vector(), vb = b.to_vector();
    for (std::size_t k = 0; k < va.size(); ++k)
        if (!value_equal(*va[k], *vb[k])) return false;
    return true;
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, ex::Lam>) return expr_equal(*x.body, *y.body);
            else if constexpr (std::is_same_v<T, ex::MkPair> || std::is_same_v<T, ex::App>)
                return x.i == y.i && x.j == y.j;
            else if constexpr (std::is_same_v<T, ex::Var>) return x.i == y.i;
            else if constexpr (std::is_same_v<T, ex::Seq>)
                return expr_equal(*x.first, *y.first) && expr_equal(*x.rest, *y.rest);
            else if constexpr (std::is_same_v<T, ex::LetPair>) return x.i == y.i && expr_equal(*x.body, *y.body);
            else if constexpr (std::is_same_v<T, ex::If>)
                return x.i == y.i && expr_equal(*x.thenB, *y.thenB) && expr_equal(*x.elseB, *y.elseB);
            else return true;
        },
        a.node);
}
}  // namespace

bool value_equal(const Value& a, const Value& b) {
    if (a.node.index() != b.node.index()) return false;
    if (auto* p = std::get_if<val::Pair>(&a.node)) {
        const auto& q = std::get<val::Pair>(b.node);
        return value_equal(*p->fst, *q.fst) && value_equal(*p->snd, *q.snd);
    }
    if (auto* c = std::get_if<val::Clo>(&a.node)) {
        const auto& d = std::get<val::Clo>(b.node);
        return expr_equal(*c->body, *d.body) && env_equal(c->env, d.env);
    }
    return true;
}

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::MkClo: return "MkClo";
        case Rule::MkUnit: return "MkUnit";
        case Rule::MkPair: return "MkPair";
        case Rule::MkTrue: return "MkTrue";
        case Rule::MkFalse: return "MkFalse";
        case Rule::Access: return "Access";
        case Rule::Seq: return "Seq";
        case Rule::App: return "App";
        case Rule::LetPair: return "LetPair";
        case Rule::IfTrue: return "IfTrue";
        case Rule::IfFalse: return "IfFalse";
    }
    return "?";
}

std::uint64_t CostModel::cost(Rule r) const {
    switch (r) {
        case Rule::MkClo: return mk_clo;
        case Rule::MkUnit: return mk_unit;
        case Rule::MkPair: return mk_pair;
        case Rule::MkTrue: return mk_true;
        case Rule::MkFalse: return mk_false;
        case Rule::Access: return access;
        case Rule::Seq: return seq;
        case Rule::App: return app;
        case Rule::LetPair: return let_pair;
        case Rule::IfTrue:
        case Rule::IfFalse: return if_;
    }
    return 1;
}

// ---------------------------------------------------------------- evaluation

// The evaluator keeps a control (expression + environment) and a stack of
// pending Seq continuations. App, LetPair and If are tail positions, so
// only Seq grows the stack; the step counter is charged at each rule root.
EvalOutcome eval(const ExprPtr& e0, const Env& env0, std::uint64_t fuel, const EvalOptions& opts) {
    struct Frame {
        const Expr* rest;
        Env env;
    };
    std::vector<Frame> stack;
    const Expr* ctrl = e0.get();
    Env env = env0;
    std::uint64_t steps = 0;
    ExprPtr keepAlive = e0;

    auto charge = [&](Rule r) -> bool {
        steps += opts.costs.cost(r);
        if (opts.trace) opts.trace(r, steps, env.size());
        return steps <= fuel;
    };
    auto stuck = [&](std::string why) -> EvalOutcome { return Stuck{std::move(why), steps}; };
    auto fetch = [&](std::size_t i) { return env.lookup(i); };

    while (true) {
        ValuePtr produced;
        const auto& node = ctrl->node;
        if (auto* s = std::get_if<ex::Seq>(&node)) {
            if (!charge(Rule::Seq)) return OutOfFuel{steps};
            stack.push_back(Frame{s->rest.get(), env});
            ctrl = s->first.get();
            continue;
        } else if (auto* a = std::get_if<ex::App>(&node)) {
            auto f = fetch(a->i);
            auto x = fetch(a->j);
            if (!f || !x) return stuck("App: index out of range (depth " + std::to_string(env.size()) + ")");
            auto* clo = std::get_if<val::Clo>(&(*f)->node);
            if (!clo) return stuck("App: callee at index " + std::to_string(a->i) + " is not a closure");
            if (!charge(Rule::App)) return OutOfFuel{steps};
            Env inner = clo->env.push(*f).push(*x);
            ctrl = clo->body.get();
            env = std::move(inner);
            continue;
        } else if (auto* lp = std::get_if<ex::LetPair>(&node)) {
            auto p = fetch(lp->i);
            if (!p) return stuck("LetPair: index out of range (depth " + std::to_string(env.size()) + ")");
            auto* pr = std::get_if<val::Pair>(&(*p)->node);
            if (!pr) return stuck("LetPair: value at index " + std::to_string(lp->i) + " is not a pair");
            if (!charge(Rule::LetPair)) return OutOfFuel{steps};
            env = env.push(pr->fst).push(pr->snd);
            ctrl = lp->body.get();
            continue;
        } else if (auto* c = std::get_if<ex::If>(&node)) {
            auto b = fetch(c->i);
            if (!b) return stuck("If: index out of range (depth " + std::to_string(env.size()) + ")");
            if (std::holds_alternative<val::True>((*b)->node)) {
                if (!charge(Rule::IfTrue)) return OutOfFuel{steps};
                ctrl = c->thenB.get();
            } else if (std::holds_alternative<val::False>((*b)->node)) {
                if (!charge(Rule::IfFalse)) return OutOfFuel{steps};
                ctrl = c->elseB.get();
            } else {
                return stuck("If: value at index " + std::to_string(c->i) + " is not a boolean");
            }
            continue;
        } else if (auto* l = std::get_if<ex::Lam>(&node)) {
            if (!charge(Rule::MkClo)) return OutOfFuel{steps};
            produced = v_clo(l->body, env);
        } else if (std::holds_alternative<ex::Unit>(node)) {
            if (!charge(Rule::MkUnit)) return OutOfFuel{steps};
            produced = v_unit();
        } else if (std::holds_alternative<ex::True>(node)) {
            if (!charge(Rule::MkTrue)) return OutOfFuel{steps};
            produced = v_true();
        } else if (std::holds_alternative<ex::False>(node)) {
            if (!charge(Rule::MkFalse)) return OutOfFuel{steps};
            produced = v_false();
        } else if (auto* mp = std::get_if<ex::MkPair>(&node)) {
            auto x = fetch(mp->i);
            auto y = fetch(mp->j);
            if (!x || !y) return stuck("MkPair: index out of range (depth " + std::to_string(env.size()) + ")");
            if (!charge(Rule::MkPair)) return OutOfFuel{steps};
            produced = v_pair(*x, *y);
        } else if (auto* v = std::get_if<ex::Var>(&node)) {
            auto x = fetch(v->i);
            if (!x) return stuck("Access: index " + std::to_string(v->i) + " out of range (depth " +
                                 std::to_string(env.size()) + ")");
            if (!charge(Rule::Access)) return OutOfFuel{steps};
            produced = *x;
        }

        if (stack.empty()) return Done{produced, steps};
        Frame top = std::move(stack.back());
        stack.pop_back();
        env = top.env.push(std::move(produced));
        ctrl = top.rest;
    }
}

// ---------------------------------------------------------------- encodings

ValuePtr nat_value(std::uint64_t n) {
    ValuePtr v = v_pair(v_true(), v_unit());
    for (std::uint64_t k = 0; k < n; ++k) v = v_pair(v_false(), v);
    return v;
}

std::uint64_t decode_nat(const ValuePtr& v0) {
    std::uint64_t n = 0;
    const Value* v = v0.get();
    while (true) {
        auto* p = std::get_if<val::Pair>(&v->node);
        if (!p) throw DecodeError("decode_nat: expected a tagged pair");
        if (std::holds_alternative<val::True>(p->fst->node)) {
            if (!std::holds_alternative<val::Unit>(p->snd->node))
                throw DecodeError("decode_nat: zero must carry Unit");
            return n;
        }
        if (!std::holds_alternative<val::False>(p->fst->node)) throw DecodeError("decode_nat: tag is not a boolean");
        ++n;
        v = p->snd.get();
    }
}

bool decode_bool(const ValuePtr& v) {
    if (std::holds_alternative<val::True>(v->node)) return true;
    if (std::holds_alternative<val::False>(v->node)) return false;
    throw DecodeError("decode_bool: expected True or False");
}

ValuePtr encode_list(const std::vector<ValuePtr>& items) {
    ValuePtr v = v_pair(v_false(), v_unit());
    for (auto it = items.rbegin(); it != items.rend(); ++it) v = v_pair(v_true(), v_pair(*it, v));
    return v;
}

std::vector<ValuePtr> decode_list(const ValuePtr& v0) {
    std::vector<ValuePtr> out;
    const Value* v = v0.get();
    while (true) {
        auto* p = std::get_if<val::Pair>(&v->node);
        if (!p) throw DecodeError("decode_list: expected a tagged pair");
        if (std::holds_alternative<val::False>(p->fst->node)) {
            if (!std::holds_alternative<val::Unit>(p->snd->node)) throw DecodeError("decode_list: nil must carry Unit");
            return out;
        }
        if (!std::holds_alternative<val::True>(p->fst->node)) throw DecodeError("decode_list: tag is not a boolean");
        auto* cell = std::get_if<val::Pair>(&p->snd->node);
        if (!cell) throw DecodeError("decode_list: cons must carry a pair");
        out.push_back(cell->fst);
        v = cell->snd.get();
    }
}

// ---------------------------------------------------------------- text format

namespace {
void print(std::ostringstream& os, const Expr& e);
void print(std::ostringstream& os, const Value& v);

void print(std::ostringstream& os, const Expr& e) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ex::Lam>) {
                os << "(lam ";
                print(os, *x.body);
                os << ')';
            } else if constexpr (std::is_same_v<T, ex::Unit>) os << "unit";
            else if constexpr (std::is_same_v<T, ex::MkPair>) os << "(pair " << x.i << ' ' << x.j << ')';
            else if constexpr (std::is_same_v<T, ex::True>) os << "true";
            else if constexpr (std::is_same_v<T, ex::False>) os << "false";
            else if constexpr (std::is_same_v<T, ex::Var>) os << "(var " << x.i << ')';
            else if constexpr (std::is_same_v<T, ex::Seq>) {
                os << "(seq ";
                print(os, *x.first);
                os << ' ';
                print(os, *x.rest);
                os << ')';
            } else if constexpr (std::is_same_v<T, ex::App>) os << "(app " << x.i << ' ' << x.j << ')';
            else if constexpr (std::is_same_v<T, ex::LetPair>) {
                os << "(letpair " << x.i << ' ';
                print(os, *x.body);
                os << ')';
            } else if constexpr (std::is_same_v<T, ex::If>) {
                os << "(if " << x.i << ' ';
                print(os, *x.thenB);
                os << ' ';
                print(os, *x.elseB);
                os << ')';
            }
        },
        e.node);
}

void print(std::ostringstream& os, const Value& v) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, val::Clo>) {
                os << "(clo ";
                print(os, *x.body);
                os << " (";
                bool first = true;
                for (const auto& w : x.env.to_vector()) {
                    if (!first) os << ' ';
                    first = false;
                    print(os, *w);
                }
                os << "))";
            } else if constexpr (std::is_same_v<T, val::Unit>) os << "unit";
            else if constexpr (std::is_same_v<T, val::Pair>) {
                os << "(pair ";
                print(os, *x.fst);
                os << ' ';
                print(os, *x.snd);
                os << ')';
            } else if constexpr (std::is_same_v<T, val::True>) os << "true";
            else if constexpr (std::is_same_v<T, val::False>) os << "false";
        },
        v.node);
}

class Reader {
public:
    explicit Reader(const std::string& s) : s_(s) {}

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip();
        return pos_ >= s_.size();
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    void expect(char c) {
        if (!peek(c)) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    std::string word() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a keyword");
        return s_.substr(start, pos_ - start);
    }
    std::size_t number() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an index");
        return std::stoull(s_.substr(start, pos_ - start));
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError("machine text: " + msg + " at offset " + std::to_string(pos_));
    }

    ExprPtr expr() {
        if (peek('(')) {
            ++pos_;
            std::string k = word();
            ExprPtr out;
            if (k == "lam") out = lam(expr());
            else if (k == "pair") {
                auto i = number();
                out = mk_pair(i, number());
            } else if (k == "var") out = var(number());
            else if (k == "seq") {
                auto a = expr();
                out = seq(a, expr());
            } else if (k == "app") {
                auto i = number();
                out = app(i, number());
            } else if (k == "letpair") {
                auto i = number();
                out = let_pair(i, expr());
            } else if (k == "if") {
                auto i = number();
                auto t = expr();
                out = if_(i, t, expr());
            } else fail("unknown expression form '" + k + "'");
            expect(')');
            return out;
        }
        std::string k = word();
        if (k == "unit") return unit();
        if (k == "true") return mk_true();
        if (k == "false") return mk_false();
        fail("unknown atom '" + k + "'");
    }

    ValuePtr value() {
        if (peek('(')) {
            ++pos_;
            std::string k = word();
            ValuePtr out;
            if (k == "pair") {
                auto a = value();
                out = v_pair(a, value());
            } else if (k == "clo") {
                auto body = expr();
                expect('(');
                std::vector<ValuePtr> items;
                while (!peek(')')) items.push_back(value());
                expect(')');
                out = v_clo(body, Env(items));
            } else fail("unknown value form '" + k + "'");
            expect(')');
            return out;
        }
        std::string k = word();
        if (k == "unit") return v_unit();
        if (k == "true") return v_true();
        if (k == "false") return v_false();
        fail("unknown value atom '" + k + "'");
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
};
}  // namespace

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(os, e);
    return os.str();
}

std::string to_string(const Value& v) {
    std::ostringstream os;
    print(os, v);
    return os.str();
}

std::string to_string(const EvalOutcome& o) {
    if (auto* d = std::get_if<Done>(&o)) return "Done(" + to_string(*d->value) + ", " + std::to_string(d->steps) + ")";
    if (auto* f = std::get_if<OutOfFuel>(&o)) return "OutOfFuel(after " + std::to_string(f->steps_taken) + ")";
    const auto& s = std::get<Stuck>(o);
    return "Stuck(" + s.reason + ")";
}

ExprPtr parse_expr(const std::string& text) {
    Reader r(text);
    auto e = r.expr();
    if (!r.at_end()) r.fail("trailing input");
    return e;
}

ValuePtr parse_value(const std::string& text) {
    Reader r(text);
    auto v = r.value();
    if (!r.at_end()) r.fail("trailing input");
    return v;
}

bool well_scoped(const Expr& e, std::size_t depth) {
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ex::Lam>) return well_scoped(*x.body, depth + 2);
            else if constexpr (std::is_same_v<T, ex::MkPair> || std::is_same_v<T, ex::App>)
                return x.i < depth && x.j < depth;
            else if constexpr (std::is_same_v<T, ex::Var>) return x.i < depth;
            else if constexpr (std::is_same_v<T, ex::Seq>)
                return well_scoped(*x.first, depth) && well_scoped(*x.rest, depth + 1);
            else if constexpr (std::is_same_v<T, ex::LetPair>) return x.i < depth && well_scoped(*x.body, depth + 2);
            else if constexpr (std::is_same_v<T, ex::If>)
                return x.i < depth && well_scoped(*x.thenB, depth) && well_scoped(*x.elseB, depth);
            else return true;
        },
        e.node);
}

}  // namespace qtt::machine
