#pragma once
// Bidirectional type and usage checker for both regimes.

#include <string>
#include <vector>

#include "qtt/nbe.hpp"
#include "qtt/syntax.hpp"

namespace qtt::kernel {

struct ContextEntry {
    std::string name;
    Usage usage = 0;
    TypeExprPtr type;
};
using Context = std::vector<ContextEntry>;

using UsageVector = std::vector<Usage>;

Context ctx_zero(const Context& g);
UsageVector usage_add(const UsageVector& a, const UsageVector& b);
UsageVector usage_scale(Usage k, const UsageVector& u);
UsageVector usage_join(const UsageVector& a, const UsageVector& b);

/// Rule labels used in diagnostics.
namespace rule {
inline constexpr const char* Sub = "Sub";
inline constexpr const char* Regime = "Regime";
inline constexpr const char* Fragment = "Fragment";
inline constexpr const char* Conv = "Conv";
inline constexpr const char* Motive = "Motive";
inline constexpr const char* RecContext = "Rec-Context";
inline constexpr const char* ReflectIntro = "R-Intro";
inline constexpr const char* Scope = "Scope";
}  // namespace rule

/// Working context of the checker: declared usages plus semantic types.
struct Ctx {
    struct Entry {
        std::string name;
        Usage usage;
        Val type;
    };
    std::vector<Entry> entries;
    Env env;  // one fresh variable per entry

    std::size_t depth() const { return entries.size(); }
    void push(std::string name, Usage usage, Val type);
    void pop();
};

class Checker {
public:
    Checker(Regime regime, const Signature* sig, std::uint64_t fuel = kDefaultNormalizationFuel)
        : ev_(regime, sig, fuel), regime_(regime), sig_(sig) {}

    struct Checked {
        UsageVector usage;
        TermPtr term;  // elaborated
    };
    struct Synthesized {
        UsageVector usage;
        TermPtr term;  // elaborated
        Val type;
    };

    Checked check(Ctx& ctx, Fragment sigma, const TermPtr& t, const Val& type);
    Synthesized synth(Ctx& ctx, Fragment sigma, const TermPtr& t);
    TypeExprPtr check_type(Ctx& ctx, const TypeExprPtr& t);

    Evaluator& evaluator() { return ev_; }
    Regime regime() const { return regime_; }

    /// Builds a checker context from a syntactic one, checking each type in the zeroed prefix.
    Ctx make_context(const Context& g);

private:
    Checked check_lam(Ctx& ctx, Fragment sigma, const TermPtr& t, const Val& type);
    Synthesized synth_elim(Ctx& ctx, Fragment sigma, const TermPtr& t, const TypeExprPtr& motive);
    TypeExprPtr check_motive(Ctx& ctx, const TypeExprPtr& motive, const Val& scrutType);
    void require_binder(const UsageVector& u, std::size_t level, Usage declared, const std::string& name,
                        const TermPtr& where);
    void require_closed_branch(const UsageVector& u, std::size_t outerDepth, const Ctx& ctx, const TermPtr& where,
                               const char* which);
    void require_regime(Regime r, const TermPtr& t, const char* what);
    void require_sigma0(Fragment sigma, const TermPtr& t, const char* what);
    Val eval_in(const Ctx& ctx, const TermPtr& t) { return ev_.eval(t, ctx.env); }
    Val eval_type_in(const Ctx& ctx, const TypeExprPtr& t) { return ev_.eval_type(t, ctx.env); }
    Val motive_at(const Ctx& ctx, const TypeExprPtr& motive, const Val& v);
    std::string show(const Ctx& ctx, const Val& type);
    Span where(const TermPtr& t) const;

    Evaluator ev_;
    Regime regime_;
    const Signature* sig_;
    Span lastSpan_{};
};

// ---------------------------------------------------------------- public entry points

void check_type(Regime regime, const Context& g, const TypeExprPtr& t, const Signature* sig = nullptr);

UsageVector infer_usage_check(Regime regime, const Context& g, Fragment sigma, const TermPtr& m,
                              const TypeExprPtr& t, const Signature* sig = nullptr);

void conv_type(Regime regime, const Context& g0, const TypeExprPtr& s, const TypeExprPtr& t,
               const Signature* sig = nullptr);

/// Normal form of a sigma=0 term; the type is synthesized unless given.
TermPtr normalize_sigma0(Regime regime, const Context& g0, const TermPtr& m, const Signature* sig = nullptr,
                         const TypeExprPtr& type = nullptr);

struct Declaration {
    std::string name;
    Fragment sigma = Fragment::One;
    TypeExprPtr type;
    TermPtr body;
    Span span;
};

/// Checks one declaration against the signature built so far and appends it.
/// `sigmaOverride` re-checks at a different fragment (used for zeroing checks).
void check_declaration(Signature& sig, const Declaration& d, std::optional<Fragment> sigmaOverride = std::nullopt);

}  // namespace qtt::kernel
