#pragma once
// Untyped call-by-value machine with exact step counting.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qtt::machine {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

namespace ex {
struct Lam { ExprPtr body; };
struct Unit {};
struct MkPair { std::size_t i, j; };
struct True {};
struct False {};
struct Var { std::size_t i; };
struct Seq { ExprPtr first, rest; };
struct App { std::size_t i, j; };
struct LetPair { std::size_t i; ExprPtr body; };
struct If { std::size_t i; ExprPtr thenB, elseB; };
}  // namespace ex

struct Expr {
    std::variant<ex::Lam, ex::Unit, ex::MkPair, ex::True, ex::False, ex::Var, ex::Seq, ex::App,
                 ex::LetPair, ex::If>
        node;
};

ExprPtr lam(ExprPtr body);
ExprPtr unit();
ExprPtr mk_pair(std::size_t i, std::size_t j);
ExprPtr mk_true();
ExprPtr mk_false();
ExprPtr var(std::size_t i);
ExprPtr seq(ExprPtr first, ExprPtr rest);
ExprPtr app(std::size_t i, std::size_t j);
ExprPtr let_pair(std::size_t i, ExprPtr body);
ExprPtr if_(std::size_t i, ExprPtr thenB, ExprPtr elseB);

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

/// Persistent environment: a cons list whose head is index 0.
struct EnvNode {
    ValuePtr value;
    std::shared_ptr<const EnvNode> parent;
    std::size_t length;
    ~EnvNode();
};

class Env {
public:
    Env() = default;
    /// Builds an environment from a left-to-right sequence (last element is index 0).
    explicit Env(const std::vector<ValuePtr>& leftToRight);

    Env push(ValuePtr v) const;
    std::size_t size() const { return head_ ? head_->length : 0; }
    /// Index counted from the right; nullopt when out of range.
    std::optional<ValuePtr> lookup(std::size_t i) const;
    std::vector<ValuePtr> to_vector() const;  // left to right

private:
    explicit Env(std::shared_ptr<const EnvNode> head) : head_(std::move(head)) {}
    std::shared_ptr<const EnvNode> head_;
};

namespace val {
struct Clo { ExprPtr body; Env env; };
struct Unit {};
struct Pair { ValuePtr fst, snd; };
struct True {};
struct False {};
}  // namespace val

struct Value {
    std::variant<val::Clo, val::Unit, val::Pair, val::True, val::False> node;
    ~Value();
};

ValuePtr v_unit();
ValuePtr v_true();
ValuePtr v_false();
ValuePtr v_bool(bool b);
ValuePtr v_pair(ValuePtr a, ValuePtr b);
ValuePtr v_clo(ExprPtr body, Env env);

bool value_equal(const Value& a, const Value& b);

enum class Rule { MkClo, MkUnit, MkPair, MkTrue, MkFalse, Access, Seq, App, LetPair, IfTrue, IfFalse };
const char* rule_name(Rule r);

/// Per-rule root cost. Every entry is 1 unless a caller deliberately overrides it.
struct CostModel {
    std::uint64_t mk_clo = 1, mk_unit = 1, mk_pair = 1, mk_true = 1, mk_false = 1, access = 1,
                  seq = 1, app = 1, let_pair = 1, if_ = 1;
    std::uint64_t cost(Rule r) const;
};

struct Done { ValuePtr value; std::uint64_t steps; };
struct OutOfFuel { std::uint64_t steps_taken; };
struct Stuck { std::string reason; std::uint64_t steps_taken; };
using EvalOutcome = std::variant<Done, OutOfFuel, Stuck>;

using TraceSink = std::function<void(Rule, std::uint64_t stepsSoFar, std::size_t envDepth)>;

struct EvalOptions {
    CostModel costs{};
    TraceSink trace{};
};

EvalOutcome eval(const ExprPtr& e, const Env& env, std::uint64_t fuel, const EvalOptions& opts = {});

// Canonical encodings of observable data.
ValuePtr nat_value(std::uint64_t n);

struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t decode_nat(const ValuePtr& v);
bool decode_bool(const ValuePtr& v);
ValuePtr encode_list(const std::vector<ValuePtr>& items);
std::vector<ValuePtr> decode_list(const ValuePtr& v);

// Round-trippable s-expression text.
std::string to_string(const Expr& e);
std::string to_string(const Value& v);
std::string to_string(const EvalOutcome& o);

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ExprPtr parse_expr(const std::string& text);
ValuePtr parse_value(const std::string& text);

/// Checks the binding discipline: every index fits the environment depth at its position.
bool well_scoped(const Expr& e, std::size_t depth);

}  // namespace qtt::machine
