#include "doctest.h"
#include "tsb/module/dsl.hpp"

using namespace tsb::module;
using tsb::f2::BitVector;

namespace {

GradedModule chain3()
{
    GradedModule m("bad", 2);
    m.add_class("e0", 0);
    m.add_class("e1", 1);
    m.add_class("e2", 2);
    m.add_action(0, 0, 0, 0);
    m.add_action(0, 1, 0, 0);
    return m;
}

}  // namespace

TEST_CASE("verify_action")
{
    GradedModule f2("F2", 2);
    f2.add_class("i", 0);
    CHECK(f2.verify_action().ok);
    auto rep = chain3().verify_action();
    CHECK_FALSE(rep.ok);
    CHECK(rep.relation == "Sq^1 Sq^1 = 0");
    CHECK(rep.witness == "e0@0");
}

TEST_CASE("builtins parse, validate and round-trip")
{
    for (const auto& name : builtin_module_names()) {
        CAPTURE(name);
        const auto& text = builtin_module_text(name);
        const auto m = parse_module(text);
        CHECK(m.validated());
        CHECK(serialize_module(m) == strip_comments(text));
        CHECK(parse_module(serialize_module(m)) == m);
    }
}

TEST_CASE("parse errors are distinguished")
{
    CHECK_THROWS_AS(parse_module("module X over A(2) { class a : 0; action { Sq1 a = b; } }"), NameError);
    CHECK_THROWS_AS(parse_module("module X over A(2) { class a : 0; class b : 2; action { Sq1 a = b; } }"),
                    DegreeError);
    CHECK_THROWS_AS(parse_module("module X over A(2) { class a : 0; class b : 1; class c : 2; "
                                 "action { Sq1 a = b; Sq1 b = c; } }"),
                    AdemViolation);
    try {
        parse_module("module X over A(2) {\n  class a 0;\n}");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.col() == 11);
    }
    CHECK_THROWS_AS(parse_module("module X over A(2) { class a : 0; action { Sq8 a = 0; } }"), ParseError);
}

TEST_CASE("act")
{
    const auto c2 = builtin_module("C2");
    const auto spec = tsb::steenrod::AlgebraSpec::sub(2);
    ModuleVector x0{0, BitVector::unit(1, 0)};
    CHECK(act(c2, tsb::steenrod::SteenrodElement::unit(spec), x0).v == x0.v);
    CHECK(act(c2, tsb::steenrod::SteenrodElement(spec, 3, {3}), x0).v.size() == 0);
    auto y = act(c2, tsb::steenrod::SteenrodElement(spec, 1, {1}), x0);
    CHECK(y.degree == 1);
    CHECK(y.v == BitVector::unit(1, 0));
}

TEST_CASE("functors")
{
    const auto f2 = builtin_module("F2");
    const auto s13 = suspend(f2, 13);
    CHECK(s13.dim(13) == 1);
    CHECK(s13.total_dim() == 1);
    CHECK(direct_sum(f2, zero_module(2)) == f2);

    const auto j = builtin_module("J");
    for (int k : {0, 3})
        for (int t : {1, 2, 5})
            CHECK(truncate_above(suspend(j, k), t + k) == suspend(truncate_above(j, t), k));
}

TEST_CASE("induction")
{
    GradedModule f0("F2", 0);
    f0.add_class("i", 0);
    const auto a = induce(f0, 2);
    CHECK(a.total_dim() == 32);
    CHECK(a.verify_action().ok);
    GradedModule f1("F2", 1);
    f1.add_class("i", 0);
    const auto b = induce(f1, 2);
    CHECK(b.total_dim() == 8);
    CHECK(b.verify_action().ok);
    const auto jj = induce(builtin_module("J"), 2);
    CHECK(jj.total_dim() == 5 * 8);
    CHECK(jj.verify_action().ok);
    const auto mm = induce(builtin_module("M"), 2);
    CHECK(mm.total_dim() == 7 * 8);
    CHECK(mm.verify_action().ok);
}

TEST_CASE("module maps and short exact sequences")
{
    auto c2 = std::make_shared<GradedModule>(builtin_module("C2"));
    auto f2 = std::make_shared<GradedModule>(builtin_module("F2"));
    auto top = std::make_shared<GradedModule>(suspend(*f2, 1));
    // quotient C2 -> F2 and inclusion S^1 F2 -> C2
    auto q = map_from_generators(c2, f2, {{ModuleVector{0, BitVector::unit(1, 0)}, ModuleVector{0, BitVector::unit(1, 0)}}});
    auto i = map_from_generators(top, c2, {{ModuleVector{1, BitVector::unit(1, 0)}, ModuleVector{1, BitVector::unit(1, 0)}}});
    CHECK(q.check().empty());
    CHECK(ShortExactSequence{i, q}.check().empty());
    CHECK_FALSE(ShortExactSequence{i, ModuleMap(c2, f2)}.check().empty());
    // no map F2 -> C2 hitting x0: Sq1 x0 != 0
    CHECK_THROWS_AS(map_from_generators(f2, c2, {{ModuleVector{0, BitVector::unit(1, 0)}, ModuleVector{0, BitVector::unit(1, 0)}}}),
                    ModuleError);
    auto id = ModuleMap::identity(c2);
    CHECK(id.check().empty());
    auto ker = kernel_inclusion(q, "K");
    CHECK(ker.source().total_dim() == 1);
    CHECK(ker.source().dim(1) == 1);
}

TEST_CASE("verify_decomposition")
{
    const auto f2 = builtin_module("F2");
    const auto m = direct_sum(f2, suspend(f2, 1));
    auto res = verify_decomposition(m, {{ModuleVector{0, BitVector::unit(1, 0)}}, {ModuleVector{1, BitVector::unit(1, 0)}}});
    CHECK(res.ok);
    CHECK(res.blocks.size() == 2);
    auto bad = verify_decomposition(m, {{ModuleVector{0, BitVector::unit(1, 0)}}});
    CHECK_FALSE(bad.ok);
    CHECK(bad.failure_degree == 1);
}
