#include "doctest.h"
#include "support/laws.hpp"

using namespace qtt::potentials;

namespace {
Polynomial P(std::vector<Nat> c) { return Polynomial(std::move(c)); }
constexpr MonoidKind kAll[] = {MonoidKind::NatMonoid, MonoidKind::MaxPoly, MonoidKind::PlusPoly};
constexpr MonoidKind kPoly[] = {MonoidKind::MaxPoly, MonoidKind::PlusPoly};
}  // namespace

TEST_SUITE("potentials") {

TEST_CASE("polynomials are canonical") {
    CHECK(P({1, 0, 0}).coeffs() == std::vector<Nat>{1});
    CHECK(P({0, 0}).is_zero());
    CHECK(P({}).degree() == 0);
    CHECK(P({0, 0, 3}).degree() == 2);
}

TEST_CASE("polynomial arithmetic") {
    CHECK(poly_eval(P({1, 2}), 3) == 7);
    CHECK(poly_eval(P({}), 5) == 0);
    CHECK(poly_eval(P({0, 0, 1}), 4) == 16);
    CHECK(poly_add(P({1}), P({0, 1})) == P({1, 1}));
    CHECK(poly_shift_up(P({1, 1})) == P({0, 1, 1}));
    CHECK(poly_shift_up(P({})) == P({}));
    CHECK(poly_scale(3, P({2, 1})) == P({6, 3}));
    CHECK(poly_scale(0, P({2, 1})).is_zero());
    CHECK(poly_join(P({1, 5}), P({3, 0, 2})) == P({3, 5, 2}));
    CHECK_THROWS_AS(poly_eval(P({0, 0, 0, 0, 1}), Nat{1} << 20), std::overflow_error);
    CHECK(to_string(P({2, 0, 3})) == "[2,0,3]");
}

TEST_CASE("dominance check examples") {
    CHECK(dominates_from(P({0, 1}), P({1}), 1));
    CHECK_FALSE(dominates_from(P({1}), P({0, 1}), 0));
    for (Nat k = 1; k <= 100; ++k) CHECK(poly_eval(P({0, 1}), k) >= poly_eval(P({1}), k));
    laws::PotentialGen g(3);
    for (int i = 0; i < 200; ++i) {
        auto p = g.poly(4, 16);
        CHECK(dominates_from(p, p, g.uniform(0, 50)));
    }
}

TEST_CASE("dominance check is sound") {
    laws::PotentialGen g(11);
    int positives = 0;
    for (int i = 0; i < 2000; ++i) {
        auto p = g.poly(4, 16), q = g.poly(4, 16);
        Nat m = g.uniform(0, 30);
        if (!dominates_from(p, q, m)) continue;
        ++positives;
        for (Nat k = m; k <= m + 200; ++k) REQUIRE(poly_eval(p, k) >= poly_eval(q, k));
    }
    CHECK(positives > 100);
}

TEST_CASE("extended naturals") {
    CHECK((ExtNat::neg_inf() + ExtNat::fin(3)) == ExtNat::neg_inf());
    CHECK((ExtNat::fin(3) + ExtNat::neg_inf()) == ExtNat::neg_inf());
    CHECK((ExtNat::fin(3) + ExtNat::fin(4)) == ExtNat::fin(7));
    CHECK(ExtNat::neg_inf() < ExtNat::fin(0));
    CHECK(ExtNat::fin(1) < ExtNat::fin(2));
    CHECK_THROWS(ExtNat::neg_inf().value());
}

TEST_CASE("monoid operation examples") {
    Potential a{2, P({1})}, b{3, P({0, 1})};
    CHECK(plus(MonoidKind::MaxPoly, a, b) == Potential{3, P({1, 1})});
    CHECK(plus(MonoidKind::PlusPoly, a, b) == Potential{5, P({1, 1})});
    for (auto k : kPoly) CHECK(plus(k, a, empty()) == a);
    CHECK(plus(MonoidKind::NatMonoid, Potential{4, {}}, Potential{5, {}}) == Potential{9, {}});
    CHECK_THROWS_AS(plus(MonoidKind::NatMonoid, a, b), ContractViolation);

    CHECK(diff(MonoidKind::MaxPoly, Potential{3, P({1, 2})}, empty()) == ExtNat::fin(7));
    CHECK(diff(MonoidKind::MaxPoly, Potential{1, P({1})}, Potential{2, P({1})}) == ExtNat::neg_inf());
    CHECK(diff(MonoidKind::NatMonoid, Potential{5, {}}, Potential{3, {}}) == ExtNat::fin(2));
    CHECK(diff(MonoidKind::NatMonoid, Potential{3, {}}, Potential{5, {}}) == ExtNat::neg_inf());
    // Same size, but the subtrahend overtakes later.
    CHECK(diff(MonoidKind::PlusPoly, Potential{1, P({10})}, Potential{1, P({0, 0, 1})}) == ExtNat::neg_inf());

    CHECK(acct(MonoidKind::MaxPoly, 4) == Potential{0, P({4})});
    CHECK(acct(MonoidKind::NatMonoid, 7) == Potential{7, {}});
    CHECK(acct(MonoidKind::PlusPoly, 0) == empty());
}

TEST_CASE("iteration structure examples") {
    CHECK(size(3) == Potential{3, {}});
    CHECK(raise(Potential{0, P({4})}) == Potential{0, P({0, 4})});
    CHECK(scale(2, Potential{0, P({3, 1})}) == Potential{0, P({6, 2})});
    CHECK(in_submonoid(Potential{0, P({5, 2})}));
    CHECK_FALSE(in_submonoid(Potential{1, {}}));
    for (Nat k = 0; k < 50; ++k) CHECK(in_submonoid(acct(MonoidKind::PlusPoly, k)));

    CHECK(n_action(MonoidKind::PlusPoly, 3, Potential{1, P({1})}) == Potential{3, P({3})});
    CHECK(n_action(MonoidKind::MaxPoly, 3, Potential{1, P({1})}) == Potential{1, P({3})});
    for (auto k : kAll) CHECK(n_action(k, 0, Potential{1, {}}) == empty());
}

TEST_CASE("resource monoid laws hold on random potentials") {
    for (auto kind : kAll) {
        CAPTURE(to_string(kind));
        for (const auto& r : laws::monoid_laws(kind, 1000, 42 + static_cast<int>(kind))) {
            CAPTURE(r.name);
            CHECK(r.failures == 0);
        }
    }
}

TEST_CASE("the triangle and compatibility generators reach finite differences") {
    for (auto kind : kAll) {
        auto rs = laws::monoid_laws(kind, 1000, 5);
        CHECK(rs[1].finite > 100);
        CHECK(rs[2].finite > 100);
    }
}

TEST_CASE("iteration laws hold on random potentials") {
    for (auto kind : kPoly) {
        CAPTURE(to_string(kind));
        for (const auto& r : laws::iteration_laws(kind, 1000, 99)) {
            CAPTURE(r.name);
            CHECK(r.failures == 0);
            if (r.name != "raise preserves zero size") CHECK(r.finite == r.cases);
        }
    }
}

TEST_CASE("iteration structure is undefined on the natural number monoid") {
    CHECK_THROWS_AS(n_action(MonoidKind::NatMonoid, 2, Potential{1, P({1})}), ContractViolation);
}

}  // TEST_SUITE
