#include "qtt/potentials.hpp"

#include <algorithm>
#include <sstream>

namespace qtt::potentials {

namespace {
void strip(std::vector<Nat>& c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

Nat checked_mul(Nat a, Nat b) {
    Nat r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("polynomial arithmetic overflow");
    return r;
}

Nat checked_add(Nat a, Nat b) {
    Nat r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("polynomial arithmetic overflow");
    return r;
}

}  // namespace

Polynomial::Polynomial(std::vector<Nat> coeffs) : c_(std::move(coeffs)) { strip(c_); }

Nat poly_eval(const Polynomial& p, Nat x) {
    Nat acc = 0;
    const auto& c = p.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = checked_add(checked_mul(acc, x), *it);
    return acc;
}

Polynomial poly_add(const Polynomial& p, const Polynomial& q) {
    std::vector<Nat> c(std::max(p.coeffs().size(), q.coeffs().size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = checked_add(p.coeff(i), q.coeff(i));
    return Polynomial(std::move(c));
}

Polynomial poly_scale(Nat k, const Polynomial& p) {
    std::vector<Nat> c(p.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = checked_mul(k, p.coeff(i));
    return Polynomial(std::move(c));
}

Polynomial poly_shift_up(const Polynomial& p) {
    if (p.is_zero()) return p;
    std::vector<Nat> c;
    c.reserve(p.coeffs().size() + 1);
    c.push_back(0);
    c.insert(c.end(), p.coeffs().begin(), p.coeffs().end());
    return Polynomial(std::move(c));
}

Polynomial poly_join(const Polynomial& p, const Polynomial& q) {
    std::vector<Nat> c(std::max(p.coeffs().size(), q.coeffs().size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::max(p.coeff(i), q.coeff(i));
    return Polynomial(std::move(c));
}

// Taylor shift: coefficient k of p(x+m) is sum_{i>=k} p_i * C(i,k) * m^(i-k).
// Computed in 128-bit signed arithmetic; if an intermediate leaves that range
// the test answers false, which keeps it sound.
bool dominates_from(const Polynomial& p, const Polynomial& q, Nat m) {
    using I = __int128;
    const std::size_t n = std::max(p.coeffs().size(), q.coeffs().size());
    const I limit = (static_cast<I>(1) << 120);
    std::vector<I> r(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        r[i] = static_cast<I>(p.coeff(i)) - static_cast<I>(q.coeff(i));
    // Repeated synthetic division by (x - m) yields the shifted coefficients.
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = n - 1; i > k; --i) {
            I next = r[i - 1] + r[i] * static_cast<I>(m);
            if (next > limit || next < -limit) return false;
            r[i - 1] = next;
        }
    }
    return std::all_of(r.begin(), r.end(), [](I v) { return v >= 0; });
}

std::string to_string(const Polynomial& p) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) os << (i ? "," : "") << p.coeffs()[i];
    os << ']';
    return os.str();
}

Nat ExtNat::value() const {
    if (!v_) throw ContractViolation("ExtNat::value on NegInf");
    return *v_;
}

ExtNat ExtNat::operator+(const ExtNat& o) const {
    if (!v_ || !o.v_) return neg_inf();
    return fin(checked_add(*v_, *o.v_));
}

std::strong_ordering ExtNat::operator<=>(const ExtNat& o) const {
    if (!v_ && !o.v_) return std::strong_ordering::equal;
    if (!v_) return std::strong_ordering::less;
    if (!o.v_) return std::strong_ordering::greater;
    return *v_ <=> *o.v_;
}

std::string to_string(const ExtNat& e) { return e.is_fin() ? std::to_string(e.value()) : std::string("-inf"); }

std::string to_string(const Potential& a) {
    return "(" + std::to_string(a.size) + "," + to_string(a.poly) + ")";
}

const char* to_string(MonoidKind k) {
    switch (k) {
        case MonoidKind::NatMonoid: return "nat";
        case MonoidKind::MaxPoly: return "maxpoly";
        case MonoidKind::PlusPoly: return "pluspoly";
    }
    return "?";
}

Potential empty() { return Potential{}; }

Potential plus(MonoidKind kind, const Potential& a, const Potential& b) {
    switch (kind) {
        case MonoidKind::NatMonoid:
            if (!a.poly.is_zero() || !b.poly.is_zero())
                throw ContractViolation("NatMonoid potentials carry no polynomial");
            return Potential{checked_add(a.size, b.size), {}};
        case MonoidKind::MaxPoly: return Potential{std::max(a.size, b.size), poly_add(a.poly, b.poly)};
        case MonoidKind::PlusPoly: return Potential{checked_add(a.size, b.size), poly_add(a.poly, b.poly)};
    }
    throw ContractViolation("unknown monoid kind");
}

ExtNat diff(MonoidKind kind, const Potential& a, const Potential& b) {
    if (a.size < b.size) return ExtNat::neg_inf();
    if (kind == MonoidKind::NatMonoid) return ExtNat::fin(a.size - b.size);
    if (!dominates_from(a.poly, b.poly, a.size)) return ExtNat::neg_inf();
    return ExtNat::fin(poly_eval(a.poly, a.size) - poly_eval(b.poly, a.size));
}

Potential acct(MonoidKind kind, Nat k) {
    if (kind == MonoidKind::NatMonoid) return Potential{k, {}};
    return Potential{0, Polynomial::constant(k)};
}

Potential size(Nat n) { return Potential{n, {}}; }

Potential raise(const Potential& a) { return Potential{a.size, poly_shift_up(a.poly)}; }

Potential scale(Nat m, const Potential& a) { return Potential{a.size, poly_scale(m, a.poly)}; }

bool in_submonoid(const Potential& a) { return a.size == 0; }

Potential n_action(MonoidKind kind, Nat n, const Potential& a) {
    Potential acc = empty();
    for (Nat i = 0; i < n; ++i) acc = plus(kind, acc, a);
    return acc;
}

}  // namespace qtt::potentials
