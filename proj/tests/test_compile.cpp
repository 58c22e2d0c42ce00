#include "doctest.h"
#include "qtt/compile.hpp"
#include "qtt/driver.hpp"
#include "qtt/frontend.hpp"
#include "support/paths.hpp"

using namespace qtt;
using compile::CompiledProgram;
using kernel::Regime;

namespace {

driver::Module load(const std::string& text) {
    auto m = driver::load_text(text, "<test>");
    for (const auto& d : m.diagnostics) INFO(d.message);
    REQUIRE(m.ok());
    return m;
}

driver::Module corpus(const std::string& file) {
    auto m = driver::load_file(source_path("corpus/" + file));
    REQUIRE(m.ok());
    return m;
}

CompiledProgram compiled(const driver::Module& m, const std::string& name) {
    auto idx = m.find(name);
    REQUIRE(idx);
    return driver::compile_decl(m, *idx);
}

compile::RunResult run(const CompiledProgram& p, potentials::Nat n) {
    auto r = compile::run_and_verify(p, n);
    REQUIRE(std::holds_alternative<machine::Done>(r.outcome));
    return r;
}

// A recursor whose branches each cost exactly one step.
const char* kUnitRecConsFree =
    "#regime consfree\n"
    "def r ^1 : Nat -> Unit = \\n. rec n { zero => tt; succ(k; p) => p }\n";
const char* kUnitRecLfpl =
    "#regime lfpl\n"
    "def r ^1 : Nat -> Unit = \\n. rec n { zero(d) => tt; succ(d, k; p) => p }\n";

}  // namespace

TEST_SUITE("compile") {

TEST_CASE("recursor constants match the emitted code") {
    for (const char* text : {kUnitRecConsFree, kUnitRecLfpl}) {
        auto m = load(text);
        auto p = compiled(m, "r");
        auto c = compile::rec_constants(p.regime);
        CAPTURE(kernel::to_string(p.regime));
        // Each branch costs one step: `tt` and the access to p.
        const potentials::Nat branch = 1;
        auto t0 = run(p, 0).steps;
        CHECK(t0 == c.setup + c.zero + branch);
        for (potentials::Nat k = 0; k < 30; ++k) CHECK(run(p, k + 1).steps - run(p, k).steps == c.succ + branch);
        // The derived bound is tight up to one iteration.
        auto b = compile::extract_bound(p);
        for (potentials::Nat k = 0; k < 30; ++k) CHECK(b.at_n(k) - run(p, k).steps == c.succ + branch);
    }
    CHECK(compile::rec_constants(Regime::ConsFree).succ == 4);
    CHECK(compile::rec_constants(Regime::ConsFree).zero == 3);
    CHECK(compile::rec_constants(Regime::ConsFree).setup == 2);
    CHECK(compile::rec_constants(Regime::Lfpl).succ == 6);
    CHECK(compile::rec_constants(Regime::Lfpl).zero == 3);
    CHECK(compile::rec_constants(Regime::Lfpl).setup == 2);
}

TEST_CASE("duplicating a natural number costs one step") {
    auto m = corpus("consfree_iterators.qtt");
    auto p = compiled(m, "dupnat");
    CHECK(machine::to_string(*p.code) == "(pair 0 0)");
    for (potentials::Nat n : {0, 1, 5, 40, 1000}) {
        auto r = run(p, n);
        CHECK(r.steps == 1);
        CHECK(r.ok);
        auto v = std::get<machine::Done>(r.outcome).value;
        auto* pr = std::get_if<machine::val::Pair>(&v->node);
        REQUIRE(pr);
        CHECK(machine::decode_nat(pr->fst) == n);
        CHECK(machine::decode_nat(pr->snd) == n);
    }
}

TEST_CASE("bound degrees of the iterators") {
    auto cf = corpus("consfree_iterators.qtt");
    CHECK(compiled(cf, "count1").potential.poly.degree() == 1);
    CHECK(compiled(cf, "count2").potential.poly.degree() == 2);
    CHECK(compiled(cf, "count3").potential.poly.degree() == 3);
    CHECK(compiled(cf, "count21").potential.poly.degree() == 2);
    CHECK(compiled(cf, "count111").potential.poly.degree() == 1);
    CHECK(compiled(cf, "idnat").potential.poly.degree() == 0);
    auto lf = corpus("lfpl_iterators.qtt");
    CHECK(compiled(lf, "lcount1").potential.poly.degree() == 1);
    CHECK(compiled(lf, "lcount2").potential.poly.degree() == 2);
    CHECK(compiled(lf, "lcount3").potential.poly.degree() == 3);
}

TEST_CASE("program potentials lie in the zero-size sub-monoid") {
    for (const char* file : {"consfree_iterators.qtt", "lfpl_iterators.qtt", "insertion_sort.qtt"}) {
        auto m = corpus(file);
        for (std::size_t i = 0; i < m.decls.size(); ++i) {
            if (m.decls[i].sigma != kernel::Fragment::One) continue;
            CAPTURE(m.decls[i].name);
            auto p = driver::compile_decl(m, i);
            CHECK(potentials::in_submonoid(p.potential));
            CHECK(p.kind == compile::monoid_for(m.sig.regime));
        }
    }
    CHECK(compile::monoid_for(Regime::ConsFree) == potentials::MonoidKind::MaxPoly);
    CHECK(compile::monoid_for(Regime::Lfpl) == potentials::MonoidKind::PlusPoly);
}

TEST_CASE("the bound is the polynomial at the input size") {
    auto m = corpus("consfree_iterators.qtt");
    auto p = compiled(m, "count2");
    auto b = compile::extract_bound(p);
    for (potentials::Nat n = 0; n <= 20; ++n) {
        CHECK(b.at_n(n) == potentials::poly_eval(p.potential.poly, n + 1));
        CHECK(run(p, n).bound == b.at_n(n));
    }
}

TEST_CASE("input encoding sizes") {
    auto cf = corpus("consfree_iterators.qtt");
    auto lf = corpus("lfpl_iterators.qtt");
    struct Case {
        const char* type;
        const char* value;
        potentials::Nat maxSize, plusSize;
    };
    const Case cases[] = {
        {"Nat", "0", 1, 1},
        {"Nat", "6", 7, 7},
        {"Bool", "true", 0, 0},
        {"Unit", "tt", 0, 0},
        {"Nat * Nat", "(3, 4)", 5, 9},
        {"(x ^0 : Nat) * Nat", "(3, 4)", 5, 5},
        {"(x ^2 : Nat) * Nat", "(3, 4)", 5, 13},
        {"List Nat", "[1, 2]", 3, 5},
        {"List Bool", "[true, false, true]", 0, 0},
        {"Nat * Bool * Nat", "(1, true, 2)", 3, 5},
    };
    for (const auto& c : cases) {
        CAPTURE(c.type);
        CAPTURE(c.value);
        for (auto* mod : {&cf, &lf}) {
            kernel::Evaluator ev(mod->sig.regime, &mod->sig);
            auto ty = ev.eval_type(frontend::parse_type(c.type, mod->sig.regime), {});
            auto v = driver::elaborate_input(*mod, c.value, ty);
            auto kind = compile::monoid_for(mod->sig.regime);
            auto enc = compile::encode_value(ev, ty, v, kind);
            CHECK(enc.size == (kind == potentials::MonoidKind::MaxPoly ? c.maxSize : c.plusSize));
            // Decoding the machine value gives back the input.
            auto back = compile::decode_value(ev, ty, enc.value);
            CHECK(compile::agrees(ev, ty, enc.value, v));
            CHECK(compile::agrees(ev, ty, enc.value, ev.eval(back, {})));
        }
    }
    // Each diamond carries one unit of size.
    kernel::Evaluator ev(lf.sig.regime, &lf.sig);
    auto dty = ev.eval_type(frontend::parse_type("<>", Regime::Lfpl), {});
    CHECK(compile::encode_value(ev, dty, ev.eval(frontend::parse_term("<*>", Regime::Lfpl), {}),
                                potentials::MonoidKind::PlusPoly)
              .size == 1);
}

TEST_CASE("higher-order inputs are refused") {
    auto cf = corpus("consfree_iterators.qtt");
    kernel::Evaluator ev(cf.sig.regime, &cf.sig);
    auto ty = ev.eval_type(frontend::parse_type("Bool -> Bool", Regime::ConsFree), {});
    auto v = driver::elaborate_input(cf, "\\b. b", ty);
    CHECK_THROWS_AS(compile::encode_value(ev, ty, v, potentials::MonoidKind::MaxPoly), compile::EncodeError);
}

TEST_CASE("machine results agree with the kernel") {
    auto cf = corpus("consfree_iterators.qtt");
    kernel::Evaluator ev(cf.sig.regime, &cf.sig);
    auto idx = *cf.find("count2");
    auto p = driver::compile_decl(cf, idx);
    for (potentials::Nat n = 0; n <= 8; ++n) {
        auto input = driver::family_input(ev, cf, std::nullopt, n);
        auto rty = driver::result_type(ev, cf, idx, input);
        auto r = run(p, n);
        auto v = std::get<machine::Done>(r.outcome).value;
        CHECK(machine::decode_list(v).size() == n * n);
        auto expected = ev.app(ev.eval(kernel::make(kernel::tm::Global{idx, "count2"}), {}), input);
        CHECK(compile::agrees(ev, rty, v, expected));
        // A result one tick short does not agree.
        auto items = machine::decode_list(v);
        if (!items.empty()) {
            items.pop_back();
            CHECK_FALSE(compile::agrees(ev, rty, machine::encode_list(items), expected));
        }
    }
}

TEST_CASE("every recursion-free program runs in a constant number of steps") {
    auto cf = corpus("consfree_iterators.qtt");
    for (const char* name : {"not", "idnat", "dupnat", "tick"}) {
        auto p = compiled(cf, name);
        CHECK(p.potential.poly.degree() == 0);
    }
    auto p = compiled(cf, "idnat");
    for (potentials::Nat n = 0; n < 10; ++n) CHECK(run(p, n).steps == run(p, 0).steps);
}

TEST_CASE("halving the potential breaks the bound") {
    auto m = corpus("consfree_iterators.qtt");
    auto p = compiled(m, "count2");
    auto bad = compile::sabotage_halve(p);
    for (std::size_t i = 0; i < p.potential.poly.coeffs().size(); ++i)
        CHECK(bad.potential.poly.coeffs()[i] == p.potential.poly.coeffs()[i] / 2);
    bool violated = false;
    for (potentials::Nat n = 0; n <= 10; ++n) {
        auto good = compile::run_and_verify(p, n);
        auto r = compile::run_and_verify(bad, n);
        CHECK(good.ok);
        CHECK(r.steps == good.steps);
        violated = violated || !r.ok;
    }
    CHECK(violated);
}

TEST_CASE("fuel cuts off long runs") {
    auto m = corpus("consfree_iterators.qtt");
    auto p = compiled(m, "count2");
    compile::RunOptions opts;
    opts.fuel = 10;
    auto r = compile::run_and_verify(p, 5, opts);
    CHECK(std::holds_alternative<machine::OutOfFuel>(r.outcome));
    CHECK_FALSE(r.ok);
}

TEST_CASE("boolean inputs carry no size") {
    auto cf = corpus("consfree_iterators.qtt");
    auto p = compiled(cf, "not");
    for (bool b : {true, false}) {
        auto r = compile::run_and_verify(p, compile::EncodedInput{b ? machine::v_true() : machine::v_false(), 0});
        REQUIRE(std::holds_alternative<machine::Done>(r.outcome));
        CHECK(machine::decode_bool(std::get<machine::Done>(r.outcome).value) == !b);
        CHECK(r.ok);
    }
}

}  // TEST_SUITE
