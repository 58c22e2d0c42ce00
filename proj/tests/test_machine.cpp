#include "doctest.h"
#include "qtt/machine.hpp"
#include "support/oracle.hpp"

using namespace qtt::machine;

namespace {

Done done(const EvalOutcome& o) {
    REQUIRE(std::holds_alternative<Done>(o));
    return std::get<Done>(o);
}

std::uint64_t steps_of(const ExprPtr& e, const Env& env = {}) { return done(eval(e, env, 1000)).steps; }

}  // namespace

TEST_SUITE("machine") {

TEST_CASE("constructor rules cost one step") {
    CHECK(steps_of(unit()) == 1);
    CHECK(steps_of(mk_true()) == 1);
    CHECK(steps_of(mk_false()) == 1);
    CHECK(steps_of(lam(var(0))) == 1);
    Env env({v_true(), v_unit()});
    CHECK(steps_of(mk_pair(0, 1), env) == 1);
    auto v = done(eval(mk_pair(0, 1), env, 10)).value;
    CHECK(to_string(*v) == to_string(*v_pair(v_unit(), v_true())));
}

TEST_CASE("access costs one step and reads from the right") {
    Env env({v_false(), v_true()});
    auto r = done(eval(var(0), env, 10));
    CHECK(r.steps == 1);
    CHECK(decode_bool(r.value));
    CHECK_FALSE(decode_bool(done(eval(var(1), env, 10)).value));
}

TEST_CASE("seq costs k1 + 1 + k2") {
    CHECK(steps_of(seq(mk_true(), var(0))) == 3);
    // k1 = 3 (an inner seq), k2 = 1
    CHECK(steps_of(seq(seq(unit(), var(0)), mk_pair(0, 0))) == 3 + 1 + 1);
    // k1 = 1, k2 = 3
    CHECK(steps_of(seq(unit(), seq(var(0), mk_pair(0, 1)))) == 1 + 1 + 3);
}

TEST_CASE("app costs one plus the body and binds self and argument") {
    Env env({v_clo(var(0), Env()), v_unit()});
    auto r = done(eval(app(1, 0), env, 10));
    CHECK(r.steps == 2);
    CHECK(to_string(*r.value) == to_string(*v_unit()));

    // Index 1 inside the body is the closure itself.
    auto self = done(eval(app(1, 0), Env({v_clo(var(1), Env()), v_unit()}), 10));
    CHECK(self.steps == 2);
    CHECK(std::holds_alternative<val::Clo>(self.value->node));

    // The captured environment sits below self and argument.
    auto captured = done(eval(app(1, 0), Env({v_clo(var(2), Env({v_false()})), v_unit()}), 10));
    CHECK_FALSE(decode_bool(captured.value));

    // Body with k = 3.
    CHECK(done(eval(app(1, 0), Env({v_clo(seq(unit(), var(0)), Env()), v_unit()}), 10)).steps == 4);
}

TEST_CASE("let-pair costs one plus the body") {
    Env env({v_pair(v_true(), v_false())});
    auto r = done(eval(let_pair(0, var(1)), env, 10));
    CHECK(r.steps == 2);
    CHECK(decode_bool(r.value));
    CHECK(done(eval(let_pair(0, mk_pair(0, 1)), env, 10)).steps == 2);
    CHECK(done(eval(let_pair(0, seq(unit(), var(1))), env, 10)).steps == 4);
}

TEST_CASE("if costs one plus the taken branch") {
    auto branchy = if_(0, seq(unit(), var(0)), mk_false());
    CHECK(done(eval(branchy, Env({v_true()}), 10)).steps == 4);
    CHECK(done(eval(branchy, Env({v_false()}), 10)).steps == 2);
}

TEST_CASE("stuck states are reported, not undefined") {
    CHECK(std::holds_alternative<Stuck>(eval(if_(0, unit(), unit()), Env({v_unit()}), 10)));
    CHECK(std::holds_alternative<Stuck>(eval(var(3), Env({v_unit()}), 10)));
    CHECK(std::holds_alternative<Stuck>(eval(app(0, 0), Env({v_true()}), 10)));
    CHECK(std::holds_alternative<Stuck>(eval(let_pair(0, unit()), Env({v_true()}), 10)));
}

TEST_CASE("fuel bounds the total step count") {
    auto e = seq(mk_true(), var(0));  // 3 steps
    CHECK(std::holds_alternative<Done>(eval(e, {}, 3)));
    CHECK(std::holds_alternative<OutOfFuel>(eval(e, {}, 2)));
    // A self-applying closure never finishes.
    Env loop({v_clo(app(1, 0), Env()), v_unit()});
    auto r = eval(app(1, 0), loop, 10'000);
    REQUIRE(std::holds_alternative<OutOfFuel>(r));
    CHECK(std::get<OutOfFuel>(r).steps_taken > 10'000);
}

TEST_CASE("custom cost table is honoured") {
    CostModel costs;
    costs.seq = 5;
    EvalOptions opts{costs, {}};
    CHECK(std::get<Done>(eval(seq(mk_true(), var(0)), {}, 100, opts)).steps == 7);
}

TEST_CASE("trace sees every rule in order") {
    std::vector<Rule> seen;
    EvalOptions opts;
    opts.trace = [&](Rule r, std::uint64_t, std::size_t) { seen.push_back(r); };
    eval(seq(mk_true(), if_(0, unit(), unit())), {}, 100, opts);
    CHECK(seen == std::vector<Rule>{Rule::Seq, Rule::MkTrue, Rule::IfTrue, Rule::MkUnit});
}

TEST_CASE("long-running loops do not exhaust the native stack") {
    // Count down a natural number with a self-recursive closure:
    // f x = let (t, r) = x in if t then () else f r
    auto body = let_pair(0, if_(1, unit(), app(3, 0)));
    const std::uint64_t n = 200'000;
    auto r = done(eval(app(1, 0), Env({v_clo(body, Env()), nat_value(n)}), 10'000'000));
    CHECK(r.steps == 3 * n + 4);
}

TEST_CASE("agreement with the reference interpreter on random programs") {
    oracle::ExprGen gen(20261018);
    int finished = 0;
    for (int i = 0; i < 2000; ++i) {
        std::vector<ValuePtr> envv{gen.value(3), gen.value(3), gen.value(2)};
        auto e = gen.gen(envv.size(), 8);
        REQUIRE(well_scoped(*e, envv.size()));
        const std::uint64_t fuel = 500;
        oracle::Interp ref(fuel);
        auto expected = ref.run(*e, envv);
        auto got = eval(e, Env(envv), fuel);
        if (expected) {
            ++finished;
            REQUIRE(std::holds_alternative<Done>(got));
            CHECK(std::get<Done>(got).steps == expected->steps);
            CHECK(oracle::same(std::get<Done>(got).value, expected->value));
            // Determinism and fuel monotonicity.
            auto again = eval(e, Env(envv), fuel * 4);
            REQUIRE(std::holds_alternative<Done>(again));
            CHECK(std::get<Done>(again).steps == expected->steps);
            if (expected->steps > 0)
                CHECK_FALSE(std::holds_alternative<Done>(eval(e, Env(envv), expected->steps - 1)));
        } else if (ref.out_of_fuel()) {
            CHECK(std::holds_alternative<OutOfFuel>(got));
        } else {
            CHECK(std::holds_alternative<Stuck>(got));
        }
    }
    CHECK(finished > 500);
}

TEST_CASE("natural number encoding") {
    CHECK(to_string(*nat_value(0)) == to_string(*v_pair(v_true(), v_unit())));
    CHECK(to_string(*nat_value(1)) == to_string(*v_pair(v_false(), v_pair(v_true(), v_unit()))));
    CHECK(to_string(*nat_value(2)) ==
          to_string(*v_pair(v_false(), v_pair(v_false(), v_pair(v_true(), v_unit())))));
    for (std::uint64_t n = 0; n <= 1000; ++n) REQUIRE(decode_nat(nat_value(n)) == n);
    CHECK_THROWS_AS(decode_nat(v_true()), DecodeError);
    CHECK_THROWS_AS(decode_nat(v_pair(v_true(), v_true())), DecodeError);
}

TEST_CASE("list encoding") {
    CHECK(to_string(*encode_list({})) == to_string(*v_pair(v_false(), v_unit())));
    CHECK(to_string(*encode_list({v_true()})) ==
          to_string(*v_pair(v_true(), v_pair(v_true(), v_pair(v_false(), v_unit())))));
    CHECK(to_string(*encode_list({v_unit(), v_unit()})) ==
          to_string(*v_pair(v_true(), v_pair(v_unit(), v_pair(v_true(), v_pair(v_unit(), v_pair(v_false(), v_unit())))))));
    auto items = decode_list(encode_list({v_true(), v_false(), v_unit()}));
    REQUIRE(items.size() == 3);
    CHECK(decode_bool(items[0]));
    CHECK_THROWS_AS(decode_list(v_unit()), DecodeError);
}

TEST_CASE("text format round-trips") {
    oracle::ExprGen gen(7);
    for (int i = 0; i < 500; ++i) {
        auto e = gen.gen(2, 10);
        auto text = to_string(*e);
        REQUIRE(to_string(*parse_expr(text)) == text);
        auto v = gen.value(4);
        auto vt = to_string(*v);
        REQUIRE(to_string(*parse_value(vt)) == vt);
        CHECK(value_equal(*parse_value(vt), *v));
    }
    CHECK_THROWS_AS(parse_expr("(seq unit"), ParseError);
}

TEST_CASE("binding discipline check") {
    CHECK(well_scoped(*lam(var(1)), 0));
    CHECK_FALSE(well_scoped(*lam(var(2)), 0));
    CHECK(well_scoped(*seq(unit(), var(0)), 0));
    CHECK(well_scoped(*let_pair(0, var(2)), 1));
    CHECK_FALSE(well_scoped(*let_pair(0, var(3)), 1));
    CHECK_FALSE(well_scoped(*app(0, 1), 1));
}

}  // TEST_SUITE
