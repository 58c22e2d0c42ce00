#pragma once
// Semantic domain for the sigma=0 equational theory: evaluation, typed
// conversion (with eta for functions, pairs, unit, diamond and reflection)
// and typed read-back to normal forms. Types and universe codes share one
// semantic representation, so El(code of T) and T coincide.

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "qtt/syntax.hpp"

namespace qtt::kernel {

struct Value;
using Val = std::shared_ptr<const Value>;
using Env = std::vector<Val>;  // index i is env[size - 1 - i]

struct Closure {
    Env env;
    std::variant<TermPtr, TypeExprPtr> body;
};

namespace vl {
struct Lam { Closure body; };
struct Pair { Val fst, snd; };
struct Star {};
struct True {};
struct False {};
struct Nil {};
struct Cons { Val head, tail; };
struct Zero {};
struct Succ { Val pred; };
struct Refl { Val m; };
struct ReflIntro { Val m; };

// Neutral terms. `head` is itself a neutral value.
struct NVar { std::size_t level; };
struct NApp { Val head, arg; };
struct NFst { Val head; };
struct NSnd { Val head; };
struct NIf { Val head; Closure motive; Val thenV, elseV; };
struct NMatch { Val head; Closure motive; Val nilV; Closure consB; };
struct NRecList { Val head; Closure motive; Val nilV; Closure consB; };
struct NRecCF { Val head; Closure motive; Val zeroV; Closure succB; };
struct NRecL { Val head; Closure motive; Closure zeroB, succB; };
struct NReflElim { Val head; };
using Neutral = std::variant<NVar, NApp, NFst, NSnd, NIf, NMatch, NRecList, NRecCF, NRecL, NReflElim>;
struct Neu { std::shared_ptr<const Neutral> n; Val type; };

// Types (and codes).
struct Pi { Usage usage; Val dom; Closure cod; };
struct Tensor { Usage usage; Val fst; Closure snd; };
struct UnitTy {};
struct BoolTy {};
struct ListTy { Val elem; };
struct NatTy {};
struct DiamondTy {};
struct IdTy { Val type, lhs, rhs; };
struct Universe {};
struct ReflectTy { Val inner; };
}  // namespace vl

struct Value {
    std::variant<vl::Lam, vl::Pair, vl::Star, vl::True, vl::False, vl::Nil, vl::Cons, vl::Zero, vl::Succ, vl::Refl,
                 vl::ReflIntro, vl::Neu, vl::Pi, vl::Tensor, vl::UnitTy, vl::BoolTy, vl::ListTy, vl::NatTy,
                 vl::DiamondTy, vl::IdTy, vl::Universe, vl::ReflectTy>
        node;
    ~Value();
};

template <class T>
const T* as(const Val& v) {
    return std::get_if<T>(&v->node);
}

Val mk(decltype(Value::node) n);

/// A checked module-level definition.
struct GlobalEntry {
    std::string name;
    Fragment sigma = Fragment::One;
    TypeExprPtr type;  // elaborated
    TermPtr body;      // elaborated
    Val typeVal;
    Val value;
    bool ok = false;
    Span span;
};

struct Signature {
    Regime regime = Regime::ConsFree;
    std::vector<GlobalEntry> entries;
};

inline constexpr std::uint64_t kDefaultNormalizationFuel = 400'000'000;

class Evaluator {
public:
    Evaluator(Regime regime, const Signature* sig, std::uint64_t fuel = kDefaultNormalizationFuel)
        : regime_(regime), sig_(sig), fuel_(fuel) {}

    Regime regime() const { return regime_; }
    const Signature* signature() const { return sig_; }

    Val eval(const TermPtr& t, const Env& env);
    Val eval_type(const TypeExprPtr& t, const Env& env);
    Val apply(const Closure& c, std::initializer_list<Val> args);

    Val app(const Val& f, const Val& a);
    Val fst(const Val& p);
    Val snd(const Val& p);
    Val reflect_elim(const Val& v);

    static Val fresh(std::size_t level, Val type);

    bool conv(std::size_t depth, const Val& a, const Val& b, const Val& type);
    bool conv_type(std::size_t depth, const Val& a, const Val& b);

    TermPtr quote(std::size_t depth, const Val& v, const Val& type);
    TypeExprPtr quote_type(std::size_t depth, const Val& t);

private:
    void tick();
    Val type_of_neutral_app(const Val& headType, const Val& arg);
    bool conv_neutral(std::size_t depth, const Val& a, const Val& b);
    TermPtr quote_neutral(std::size_t depth, const Val& v);
    Val rec_nat(const Val& scrut, const Closure& motive, const TermPtr& zeroB, const TermPtr& succB,
                const Env& env, bool lfpl);
    Val rec_list(const Val& scrut, const Closure& motive, const TermPtr& nilB, const TermPtr& consB,
                 const Env& env);

    Regime regime_;
    const Signature* sig_;
    std::uint64_t fuel_;
};

}  // namespace qtt::kernel
