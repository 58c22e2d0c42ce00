#pragma once
// Polynomial potentials and the resource monoids built from them.

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtt::potentials {

using Nat = std::uint64_t;

struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

/// Natural-coefficient polynomial, low degree first, no trailing zeros.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Nat> coeffs);
    static Polynomial constant(Nat k) { return Polynomial({k}); }

    const std::vector<Nat>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    /// Degree of the zero polynomial is reported as 0.
    std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
    Nat coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }

    bool operator==(const Polynomial&) const = default;

private:
    std::vector<Nat> c_;
};

/// Evaluates with overflow detection; throws std::overflow_error rather than wrapping.
Nat poly_eval(const Polynomial& p, Nat x);
Polynomial poly_add(const Polynomial& p, const Polynomial& q);
Polynomial poly_scale(Nat k, const Polynomial& p);
Polynomial poly_shift_up(const Polynomial& p);
/// Coefficient-wise maximum; dominates both arguments on all naturals.
Polynomial poly_join(const Polynomial& p, const Polynomial& q);
bool dominates_from(const Polynomial& p, const Polynomial& q, Nat m);
std::string to_string(const Polynomial& p);

/// Naturals extended with a bottom element.
class ExtNat {
public:
    static ExtNat fin(Nat n) { return ExtNat(n); }
    static ExtNat neg_inf() { return ExtNat(); }

    bool is_fin() const { return v_.has_value(); }
    Nat value() const;

    /// NegInf absorbs.
    ExtNat operator+(const ExtNat& o) const;
    std::strong_ordering operator<=>(const ExtNat& o) const;
    bool operator==(const ExtNat& o) const = default;

private:
    ExtNat() = default;
    explicit ExtNat(Nat n) : v_(n) {}
    std::optional<Nat> v_;
};

std::string to_string(const ExtNat& e);

struct Potential {
    Nat size = 0;
    Polynomial poly;
    bool operator==(const Potential&) const = default;
};

std::string to_string(const Potential& a);

enum class MonoidKind { NatMonoid, MaxPoly, PlusPoly };
const char* to_string(MonoidKind k);

Potential empty();
Potential plus(MonoidKind kind, const Potential& a, const Potential& b);
ExtNat diff(MonoidKind kind, const Potential& a, const Potential& b);
Potential acct(MonoidKind kind, Nat k);

// Iteration structure, polynomial monoids only.
Potential size(Nat n);
Potential raise(const Potential& a);
Potential scale(Nat m, const Potential& a);
bool in_submonoid(const Potential& a);
Potential n_action(MonoidKind kind, Nat n, const Potential& a);

}  // namespace qtt::potentials
