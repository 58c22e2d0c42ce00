#pragma once
// Erasure of checked sigma=1 terms to machine code in A-normal form, with a
// compositional potential in the zero-size sub-monoid and the derived step bound.

#include <cstdint>
#include <optional>
#include <string>

#include "qtt/kernel.hpp"
#include "qtt/machine.hpp"
#include "qtt/potentials.hpp"

namespace qtt::compile {

using potentials::MonoidKind;
using potentials::Nat;
using potentials::Polynomial;
using potentials::Potential;

/// Step constants of the emitted recursor shape, counted by hand from the
/// code in compile.cpp and re-measured by the unit tests.
struct RecConstants {
    Nat succ;   // per iteration, excluding the successor branch itself
    Nat zero;   // base case, excluding the zero branch itself
    Nat setup;  // closure creation and the initial call, scrutinee already in a slot
};

RecConstants rec_constants(kernel::Regime r);

MonoidKind monoid_for(kernel::Regime r);

struct CompiledProgram {
    machine::ExprPtr code;
    Potential potential;
    MonoidKind kind = MonoidKind::MaxPoly;
    kernel::Regime regime = kernel::Regime::ConsFree;
    std::size_t inputArity = 0;
    // Declared usage of the input binder; scales the input size under PlusPoly.
    kernel::Usage inputUsage = 1;
};

/// Compiles an elaborated sigma=1 term whose free variables are the first
/// `contextDepth` machine slots (kernel level i lives in slot i).
CompiledProgram compile(kernel::Regime regime, const kernel::Signature* sig, const kernel::TermPtr& term,
                        std::size_t contextDepth);

/// Compiles a checked sigma=1 declaration. Function-typed declarations take
/// their argument as the single input slot; other declarations have arity 0.
CompiledProgram compile_declaration(const kernel::Signature& sig, std::size_t index);

/// Recursor potential: raise(acct(c_s) + gs) + acct(c_z) + gz + acct(setup).
Potential rec_potential(kernel::Regime regime, const Potential& succBranch, const Potential& zeroBranch,
                        Nat setup);

struct BoundReport {
    Polynomial q;
    kernel::Regime regime = kernel::Regime::ConsFree;
    std::string description;  // human-readable n |-> q(n+1)
    /// Bound for an input whose potential has the given size.
    Nat at_size(Nat size) const;
    /// Bound for a natural-number input n, that is q(n+1).
    Nat at_n(Nat n) const { return at_size(n + 1); }
};

BoundReport extract_bound(const CompiledProgram& p);

/// Machine encoding of a closed sigma=0 value at a first-order type, with the
/// size of the potential it carries.
struct EncodedInput {
    machine::ValuePtr value;
    Nat size = 0;
};

struct EncodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

EncodedInput encode_value(kernel::Evaluator& ev, const kernel::Val& type, const kernel::Val& value,
                          MonoidKind kind);

/// Reads a machine result back as a sigma=0 normal form (erased positions become `tt`).
kernel::TermPtr decode_value(kernel::Evaluator& ev, const kernel::Val& type, const machine::ValuePtr& v);

/// True when the machine value realises the kernel value on every runtime-relevant position.
bool agrees(kernel::Evaluator& ev, const kernel::Val& type, const machine::ValuePtr& v, const kernel::Val& expected);

struct RunResult {
    Nat n = 0;  // the input as given (or its size for general inputs)
    Nat steps = 0;
    Nat bound = 0;
    machine::EvalOutcome outcome;
    bool ok = false;
};

struct RunOptions {
    std::optional<Nat> fuel;  // defaults to bound + kFuelSlack
    machine::TraceSink trace;
};

/// Runs on natValue(n); ok iff Done within the bound.
RunResult run_and_verify(const CompiledProgram& p, Nat n, const RunOptions& opts = {});
/// Same for an arbitrary encoded input.
RunResult run_and_verify(const CompiledProgram& p, const EncodedInput& input, const RunOptions& opts = {});

/// Fuel allowance beyond the bound so that overshoots are measured rather than cut off.
inline constexpr Nat kFuelSlack = 1'000'000;

/// Halves every coefficient of the program potential (forced-failure fixture).
CompiledProgram sabotage_halve(CompiledProgram p);

}  // namespace qtt::compile
