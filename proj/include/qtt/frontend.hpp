#pragma once
// Surface syntax: lexer, parser with source spans and name resolution.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qtt/diagnostic.hpp"
#include "qtt/kernel.hpp"

namespace qtt::frontend {

/// Concrete syntax tree. Terms and types share one grammar; the resolver
/// decides which reading applies from the position.
struct Syn;
using SynPtr = std::shared_ptr<const Syn>;

enum class SynKind {
    Ident, Num, Lam, LamPair, App, Arrow, DepArrow, Prod, DepProd, Ann, Pair, Tt, True, False, Nil, ListLit,
    Cons, Zero, ZeroD, Succ, SuccD, Dup, Fst, Snd, Refl, RIntro, RElim, Id, El, ListT, CodeOf, LetPair,
    LetUnit, If, Match, Rec, RecD, RecList, DiamondStar, Diamond, Universe, BoolT, NatT, UnitT, ReflectT
};

struct Syn {
    SynKind kind;
    Span span;
    std::string name;                 // Ident
    std::uint64_t num = 0;            // Num; usage of DepArrow / DepProd
    std::vector<std::string> binders;  // names bound by this node, in binding order
    std::vector<SynPtr> kids;
    // Eliminators: optional motive (binder stored as the last entry of `binders`).
    SynPtr motive;
};

struct SourceDecl {
    std::string name;
    kernel::Fragment sigma = kernel::Fragment::One;
    SynPtr type;
    SynPtr body;
    Span span;
};

struct SourceModule {
    std::optional<kernel::Regime> regime;
    std::vector<std::string> pragmas;  // every `#word rest` line other than #regime, verbatim after '#'
    std::vector<SourceDecl> decls;
};

/// Throws DiagnosticError with rule "Syntax".
SourceModule parse(const std::string& text);

struct ResolvedModule {
    kernel::Regime regime = kernel::Regime::ConsFree;
    std::vector<std::string> pragmas;
    std::vector<kernel::Declaration> decls;
};

/// Throws DiagnosticError with rule "Scope" for unbound or duplicate names.
ResolvedModule resolve(const SourceModule& m, std::optional<kernel::Regime> regimeOverride = std::nullopt);

/// Standalone expression parsing against a list of local and global names.
kernel::TermPtr parse_term(const std::string& text, kernel::Regime regime,
                           const std::vector<std::string>& locals = {},
                           const std::vector<std::string>& globals = {});
kernel::TypeExprPtr parse_type(const std::string& text, kernel::Regime regime,
                               const std::vector<std::string>& locals = {},
                               const std::vector<std::string>& globals = {});

}  // namespace qtt::frontend
