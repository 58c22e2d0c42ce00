#pragma once
// Random well-scoped kernel syntax for printer/parser round-trips. Terms are
// not necessarily well-typed; only scoping and the shape invariants of the
// syntax are respected.

#include <random>
#include <string>
#include <vector>

#include "qtt/syntax.hpp"

namespace termgen {

using namespace qtt::kernel;

class Gen {
public:
    Gen(std::uint64_t seed, Regime regime, std::size_t globals) : rng_(seed), regime_(regime), globals_(globals) {}

    TermPtr term(std::size_t depth, int fuel) {
        if (fuel <= 0) return leaf(depth);
        const int f = fuel - 1;
        switch (pick(24)) {
            case 0: return make(tm::Lam{term(depth + 1, f)}, {}, hint(1));
            case 1: return make(tm::App{term(depth, f / 2), term(depth, f / 2), std::nullopt});
            case 2: return make(tm::Pair{term(depth, f / 2), term(depth, f / 2), std::nullopt});
            case 3: return make(tm::Fst{term(depth, f)});
            case 4: return make(tm::Snd{term(depth, f)});
            case 5: {
                auto m = motive(depth, f);
                return make(tm::LetPair{term(depth, f / 2), term(depth + 2, f / 2), m}, {}, hint(m ? 3 : 2));
            }
            case 6: {
                auto m = motive(depth, f);
                return make(tm::LetUnit{term(depth, f / 2), term(depth, f / 2), m}, {}, hint(m ? 1 : 0));
            }
            case 7: {
                auto m = motive(depth, f);
                return make(tm::If{term(depth, f / 3), term(depth, f / 3), term(depth, f / 3), m}, {},
                            hint(m ? 1 : 0));
            }
            case 8: return make(tm::Cons{term(depth, f / 2), term(depth, f / 2)});
            case 9: {
                auto m = motive(depth, f);
                return make(tm::MatchList{term(depth, f / 3), term(depth, f / 3), term(depth + 2, f / 3), m}, {},
                            hint(m ? 3 : 2));
            }
            case 10: {
                auto m = motive(depth, f);
                return make(tm::RecList{term(depth, f / 3), term(depth, f / 3), term(depth + 3, f / 3), m}, {},
                            hint(m ? 4 : 3));
            }
            case 11:
                if (regime_ == Regime::ConsFree) return make(tm::SuccCF{term(depth, f)});
                return make(tm::SuccL{term(depth, f / 2), term(depth, f / 2)});
            case 12:
                if (regime_ == Regime::ConsFree) return make(tm::DupNat{term(depth, f)});
                return make(tm::ZeroL{term(depth, f)});
            case 13: {
                auto m = motive(depth, f);
                if (regime_ == Regime::ConsFree)
                    return make(tm::RecNatCF{term(depth, f / 3), term(depth, f / 3), term(depth + 2, f / 3), m}, {},
                                hint(m ? 3 : 2));
                return make(tm::RecNatL{term(depth, f / 3), term(depth + 1, f / 3), term(depth + 3, f / 3), m}, {},
                            hint(m ? 5 : 4));
            }
            case 14: return make(tm::Refl{term(depth, f)});
            case 15: return make(tm::ReflectIntro{term(depth, f)});
            case 16: return make(tm::ReflectElim{term(depth, f)});
            case 17: return make(tm::Code{type(depth, f)});
            case 18: return make(tm::Ann{term(depth, f / 2), type(depth, f / 2)});
            case 19: return nat_literal(regime_, pick(12));
            default: return leaf(depth);
        }
    }

    TypeExprPtr type(std::size_t depth, int fuel) {
        const int f = fuel - 1;
        switch (fuel <= 0 ? pick(5) : pick(11)) {
            case 0: return unit_ty();
            case 1: return bool_ty();
            case 2: return nat_ty();
            case 3: return universe();
            case 4: return regime_ == Regime::Lfpl ? diamond_ty() : bool_ty();
            case 5: return make(ty::Pi{pick(3), type(depth, f / 2), type(depth + 1, f / 2)}, {}, hint(1));
            case 6: return make(ty::Tensor{pick(3), type(depth, f / 2), type(depth + 1, f / 2)}, {}, hint(1));
            case 7: return list_ty(type(depth, f));
            case 8: return make(ty::IdTy{type(depth, f / 3), term(depth, f / 3), term(depth, f / 3)});
            case 9: return make(ty::El{term(depth, f)});
            default: return make(ty::Reflect{type(depth, f)});
        }
    }

private:
    TermPtr leaf(std::size_t depth) {
        switch (pick(9)) {
            case 0:
            case 1:
            case 2:
                if (depth > 0) return var(pick(depth));
                return make(tm::Star{});
            case 3:
                if (globals_ > 0) return make(tm::Global{pick(globals_), ""});
                return make(tm::TrueC{});
            case 4: return make(tm::Star{});
            case 5: return make(tm::TrueC{});
            case 6: return make(tm::FalseC{});
            case 7: return make(tm::Nil{});
            default:
                return regime_ == Regime::ConsFree ? make(tm::ZeroCF{}) : make(tm::DiamondStar{});
        }
    }

    TypeExprPtr motive(std::size_t depth, int fuel) {
        if (pick(2) == 0) return nullptr;
        return type(depth + 1, fuel / 3);
    }

    /// Binder hints: empty (forces fallback names), clashing or fresh.
    std::vector<std::string> hint(std::size_t n) {
        static const char* pool[] = {"x", "y", "x", "p", "fst", "n1", "tick", "", "a'", "_z"};
        std::vector<std::string> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(pool[pick(10)]);
        return out;
    }

    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

    std::mt19937_64 rng_;
    Regime regime_;
    std::size_t globals_;
};

}  // namespace termgen
