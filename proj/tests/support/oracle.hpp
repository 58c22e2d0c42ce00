#pragma once
// Test-only reference implementations. None of these reuse the production
// evaluator, encoders or sorting code, so agreement with them is evidence
// rather than tautology.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qtt/machine.hpp"

namespace oracle {

namespace m = qtt::machine;

/// Direct recursive transcription of the big-step rules over a plain vector
/// environment (back() is index 0). Returns nothing when stuck or when the
/// step count would exceed `fuel`.
struct Result {
    m::ValuePtr value;
    std::uint64_t steps;
};

class Interp {
public:
    explicit Interp(std::uint64_t fuel) : fuel_(fuel) {}
    bool out_of_fuel() const { return outOfFuel_; }

    std::optional<Result> run(const m::Expr& e, const std::vector<m::ValuePtr>& env) {
        auto at = [&](std::size_t i) -> m::ValuePtr { return i < env.size() ? env[env.size() - 1 - i] : nullptr; };
        auto leaf = [&](m::ValuePtr v) -> std::optional<Result> {
            if (!v || !enter()) return std::nullopt;
            return Result{v, 1};
        };
        if (auto* l = std::get_if<m::ex::Lam>(&e.node)) return leaf(m::v_clo(l->body, m::Env(env)));
        if (std::get_if<m::ex::Unit>(&e.node)) return leaf(m::v_unit());
        if (std::get_if<m::ex::True>(&e.node)) return leaf(m::v_true());
        if (std::get_if<m::ex::False>(&e.node)) return leaf(m::v_false());
        if (auto* v = std::get_if<m::ex::Var>(&e.node)) return leaf(at(v->i));
        if (auto* p = std::get_if<m::ex::MkPair>(&e.node)) {
            auto a = at(p->i), b = at(p->j);
            if (!a || !b) return std::nullopt;
            return leaf(m::v_pair(a, b));
        }
        if (auto* s = std::get_if<m::ex::Seq>(&e.node)) {
            if (!enter()) return std::nullopt;
            auto r1 = run(*s->first, env);
            if (!r1) return std::nullopt;
            auto env2 = env;
            env2.push_back(r1->value);
            auto r2 = run(*s->rest, env2);
            if (!r2) return std::nullopt;
            return Result{r2->value, r1->steps + 1 + r2->steps};
        }
        if (auto* a = std::get_if<m::ex::App>(&e.node)) {
            auto f = at(a->i), x = at(a->j);
            if (!f || !x) return std::nullopt;
            auto* c = std::get_if<m::val::Clo>(&f->node);
            if (!c || !enter()) return std::nullopt;
            auto inner = c->env.to_vector();
            inner.push_back(f);
            inner.push_back(x);
            return one_more(run(*c->body, inner));
        }
        if (auto* lp = std::get_if<m::ex::LetPair>(&e.node)) {
            auto v = at(lp->i);
            if (!v) return std::nullopt;
            auto* p = std::get_if<m::val::Pair>(&v->node);
            if (!p || !enter()) return std::nullopt;
            auto inner = env;
            inner.push_back(p->fst);
            inner.push_back(p->snd);
            return one_more(run(*lp->body, inner));
        }
        if (auto* c = std::get_if<m::ex::If>(&e.node)) {
            auto v = at(c->i);
            if (!v) return std::nullopt;
            bool t = std::holds_alternative<m::val::True>(v->node);
            if (!t && !std::holds_alternative<m::val::False>(v->node)) return std::nullopt;
            if (!enter()) return std::nullopt;
            return one_more(run(t ? *c->thenB : *c->elseB, env));
        }
        return std::nullopt;
    }

private:
    // Each rule application is one step; the budget is checked as it is spent.
    bool enter() {
        if (++spent_ > fuel_) outOfFuel_ = true;
        return !outOfFuel_;
    }
    static std::optional<Result> one_more(std::optional<Result> r) {
        if (!r) return std::nullopt;
        return Result{r->value, r->steps + 1};
    }
    std::uint64_t spent_ = 0;
    std::uint64_t fuel_;
    bool outOfFuel_ = false;
};

/// Structural value equality written independently of machine::value_equal.
inline bool same(const m::ValuePtr& a, const m::ValuePtr& b) {
    return m::to_string(*a) == m::to_string(*b);
}

/// Insertion into a sorted vector by linear scan, used as the sort oracle.
inline std::vector<std::uint64_t> sorted_copy(std::vector<std::uint64_t> xs) {
    std::vector<std::uint64_t> out;
    for (auto x : xs) {
        std::size_t i = 0;
        while (i < out.size() && out[i] <= x) ++i;
        out.insert(out.begin() + static_cast<std::ptrdiff_t>(i), x);
    }
    return out;
}

/// Random well-scoped machine expression over `depth` variables. Closures
/// may call themselves, so callers must evaluate with fuel.
class ExprGen {
public:
    explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

    m::ExprPtr gen(std::size_t depth, int size) {
        int pick = static_cast<int>(uniform(0, size <= 0 ? 4 : 9));
        auto idx = [&] { return static_cast<std::size_t>(uniform(0, depth - 1)); };
        if (depth == 0 && pick >= 4) pick = static_cast<int>(uniform(0, 3));
        switch (pick) {
            case 0: return m::unit();
            case 1: return m::mk_true();
            case 2: return m::mk_false();
            case 3: return size > 0 ? m::lam(gen(depth + 2, size - 1)) : m::unit();
            case 4: return m::var(idx());
            case 5: return m::mk_pair(idx(), idx());
            case 6: return m::seq(gen(depth, size / 2), gen(depth + 1, size / 2));
            case 7: return m::app(idx(), idx());
            case 8: return m::let_pair(idx(), gen(depth + 2, size - 1));
            default: return m::if_(idx(), gen(depth, size / 2), gen(depth, size / 2));
        }
    }

    m::ValuePtr value(int size) {
        switch (uniform(0, size <= 0 ? 2 : 4)) {
            case 0: return m::v_unit();
            case 1: return m::v_true();
            case 2: return m::v_false();
            case 3: return m::v_pair(value(size - 1), value(size - 1));
            default: return m::v_clo(gen(2, size - 1), m::Env());
        }
    }

    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng_);
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace oracle
