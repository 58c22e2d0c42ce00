#pragma once
// Nameless (de Bruijn) syntax of the quantitative type theory.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qtt/diagnostic.hpp"

namespace qtt::kernel {

using Usage = std::uint64_t;
enum class Fragment { Zero, One };
enum class Regime { ConsFree, Lfpl };

inline Usage usage_of(Fragment s) { return s == Fragment::One ? 1 : 0; }
const char* to_string(Regime r);
const char* to_string(Fragment s);

struct Term;
struct TypeExpr;
using TermPtr = std::shared_ptr<const Term>;
using TypeExprPtr = std::shared_ptr<const TypeExpr>;

// Binder counts are noted per field. Motives are optional before elaboration
// and always present afterwards; each motive binds the scrutinee.
namespace tm {
struct Var { std::size_t index; };
struct Global { std::size_t index; std::string name; };
struct Lam { TermPtr body; };                                        // body: 1
struct App { TermPtr fn, arg; std::optional<Usage> argUsage; };     // argUsage filled by elaboration
struct Pair { TermPtr fst, snd; std::optional<Usage> fstUsage; };   // fstUsage filled by elaboration
struct Fst { TermPtr pair; };
struct Snd { TermPtr pair; };
struct LetPair { TermPtr scrut, body; TypeExprPtr motive; };        // body: 2, motive: 1
struct Star {};
struct LetUnit { TermPtr scrut, body; TypeExprPtr motive; };        // motive: 1
struct TrueC {};
struct FalseC {};
struct If { TermPtr scrut, thenB, elseB; TypeExprPtr motive; };     // motive: 1
struct Nil {};
struct Cons { TermPtr head, tail; };
struct MatchList { TermPtr scrut, nilB, consB; TypeExprPtr motive; };  // consB: 2 (h, t)
struct RecList { TermPtr scrut, nilB, consB; TypeExprPtr motive; };    // consB: 3 (h, t, p)
struct ZeroCF {};
struct SuccCF { TermPtr pred; };
struct DupNat { TermPtr arg; };
struct RecNatCF { TermPtr scrut, zeroB, succB; TypeExprPtr motive; };  // succB: 2 (n, p)
struct DiamondStar {};
struct ZeroL { TermPtr d; };
struct SuccL { TermPtr d, pred; };
struct RecNatL { TermPtr scrut, zeroB, succB; TypeExprPtr motive; };   // zeroB: 1 (d), succB: 3 (d, n, p)
struct Refl { TermPtr m; };
struct ReflectIntro { TermPtr m; };
struct ReflectElim { TermPtr m; };
struct Code { TypeExprPtr type; };  // universe code of a type
struct Ann { TermPtr term; TypeExprPtr type; };
}  // namespace tm

using TermNode =
    std::variant<tm::Var, tm::Global, tm::Lam, tm::App, tm::Pair, tm::Fst, tm::Snd, tm::LetPair, tm::Star,
                 tm::LetUnit, tm::TrueC, tm::FalseC, tm::If, tm::Nil, tm::Cons, tm::MatchList, tm::RecList,
                 tm::ZeroCF, tm::SuccCF, tm::DupNat, tm::RecNatCF, tm::DiamondStar, tm::ZeroL, tm::SuccL,
                 tm::RecNatL, tm::Refl, tm::ReflectIntro, tm::ReflectElim, tm::Code, tm::Ann>;

namespace ty {
struct Pi { Usage usage; TypeExprPtr dom, cod; };      // cod: 1
struct Tensor { Usage usage; TypeExprPtr fst, snd; };  // snd: 1
struct UnitTy {};
struct BoolTy {};
struct ListTy { TypeExprPtr elem; };
struct NatTy {};
struct DiamondTy {};
struct IdTy { TypeExprPtr type; TermPtr lhs, rhs; };
struct Universe {};
struct El { TermPtr code; };
struct Reflect { TypeExprPtr inner; };
}  // namespace ty

using TypeNode = std::variant<ty::Pi, ty::Tensor, ty::UnitTy, ty::BoolTy, ty::ListTy, ty::NatTy, ty::DiamondTy,
                              ty::IdTy, ty::Universe, ty::El, ty::Reflect>;

/// Binder name hints are advisory (used for printing and messages) and never
/// affect equality. They are listed in the order the node binds them.
struct Term {
    TermNode node;
    Span span{};
    std::vector<std::string> hints{};
};

struct TypeExpr {
    TypeNode node;
    Span span{};
    std::vector<std::string> hints{};
};

TermPtr make(TermNode n, Span span = {}, std::vector<std::string> hints = {});
TypeExprPtr make(TypeNode n, Span span = {}, std::vector<std::string> hints = {});

// Frequently used leaves.
TermPtr var(std::size_t i);
TypeExprPtr unit_ty();
TypeExprPtr bool_ty();
TypeExprPtr nat_ty();
TypeExprPtr diamond_ty();
TypeExprPtr universe();
TypeExprPtr pi(Usage u, TypeExprPtr dom, TypeExprPtr cod);
TypeExprPtr tensor(Usage u, TypeExprPtr fst, TypeExprPtr snd);
TypeExprPtr list_ty(TypeExprPtr elem);

/// Literal natural at sigma 0 in the regime's constructor flavour.
TermPtr nat_literal(Regime r, std::uint64_t n);

// Generic traversal: visit each direct child together with the number of
// binders it sits under. Absent motives are reported as null.
struct ChildVisitor {
    std::function<TermPtr(const TermPtr&, std::size_t binders)> term;
    std::function<TypeExprPtr(const TypeExprPtr&, std::size_t binders)> type;
};

TermPtr map_children(const Term& t, const ChildVisitor& f);
TypeExprPtr map_children(const TypeExpr& t, const ChildVisitor& f);

/// Structural equality ignoring spans, hints and elaboration annotations.
bool equal(const Term& a, const Term& b);
bool equal(const TypeExpr& a, const TypeExpr& b);
bool equal(const TermPtr& a, const TermPtr& b);
bool equal(const TypeExprPtr& a, const TypeExprPtr& b);

/// Adds d to every free index at or above cutoff.
TermPtr shift(const TermPtr& t, long d, std::size_t cutoff = 0);
TypeExprPtr shift(const TypeExprPtr& t, long d, std::size_t cutoff = 0);

/// Replaces index 0 by n (which lives in the outer context) and lowers the rest.
TermPtr subst0(const TermPtr& body, const TermPtr& n);
TypeExprPtr subst0(const TypeExprPtr& body, const TermPtr& n);

/// True when index k (relative to the root) occurs free.
bool occurs(const TermPtr& t, std::size_t k);
bool occurs(const TypeExprPtr& t, std::size_t k);

/// Removes the elaboration-only annotations (argument usages); motives are kept.
TermPtr strip_annotations(const TermPtr& t);

}  // namespace qtt::kernel
