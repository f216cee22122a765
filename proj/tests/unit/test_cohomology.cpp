#include <memory>

#include "doctest.h"
#include "tsb/cohomology/models.hpp"
#include "tsb/module/dsl.hpp"

using namespace tsb::cohomology;
using tsb::module::GradedModule;
using tsb::module::ModuleMap;
using tsb::module::ModuleVector;

namespace {

std::vector<std::size_t> dims(const GradedModule& m, int top)
{
    std::vector<std::size_t> out;
    for (int d = 0; d <= top; ++d)
        out.push_back(m.dim(d));
    return out;
}

Poly named(const RingModel& r, const std::string& s) { return r.parse(s); }

}  // namespace

TEST_CASE("kz4 basis and squares")
{
    const auto r = kz4(14);
    std::vector<std::size_t> got;
    for (int d = 0; d <= 14; ++d)
        got.push_back(r.basis(d).size());
    CHECK(got == std::vector<std::size_t>{1, 0, 0, 0, 1, 0, 1, 1, 1, 0, 2, 2, 2, 2, 3});
    const Exps D = r.parse("D").begin()->first;
    const Exps F = r.parse("F").begin()->first;
    const Exps G = r.parse("G").begin()->first;
    const Exps K = r.parse("K").begin()->first;
    CHECK(r.sq(1, D).empty());
    CHECK(r.sq(2, D) == named(r, "F"));
    CHECK(r.sq(3, D) == named(r, "G"));
    CHECK(r.sq(4, D) == named(r, "D^2"));
    CHECK(r.sq(1, F) == named(r, "G"));
    CHECK(r.sq(1, G).empty());
    CHECK(r.sq(2, G).empty());
    CHECK(r.sq(4, F) == named(r, "J"));
    CHECK(r.sq(4, G) == named(r, "K"));
    CHECK(r.sq(2, K) == named(r, "L"));
    CHECK(r.sq(7, G) == named(r, "G^2"));
    CHECK(to_module(r).verify_action().ok);
    CHECK_THROWS_AS(kz4(15), ModelError);
}

TEST_CASE("bz2 squares are binomial")
{
    const auto r = bz2(16);
    for (int n = 1; n <= 8; ++n)
        for (int i = 0; i <= n && n + i <= 16; ++i) {
            const auto s = r.sq(i, {n});
            CHECK(s.empty() == !tsb::steenrod::binom2(n, i));
        }
    CHECK(to_module(r).verify_action().ok);
}

TEST_CASE("parser")
{
    const auto r = kz4(14);
    CHECK(r.parse("2c").empty());
    CHECK(r.parse("c") == r.parse("D"));
    CHECK(r.parse("DF + FD").empty());
    CHECK(r.parse("(D + F)^2") == r.parse("D^2 + F^2"));
    CHECK_THROWS_AS(r.parse("Q"), ModelError);
    CHECK_THROWS_AS(r.parse("D^4"), ModelError);
}

TEST_CASE("wreath model")
{
    auto h = std::make_shared<RingModel>(kz4(14));
    const WreathModel w(h, 14);
    CHECK(w.dim(0) == 1);
    CHECK(w.dim(1) == 1);
    CHECK(w.dim(4) == 2);
    CHECK(w.dim(8) == 3);
    for (int d = 0; d <= 14; ++d)
        CHECK(w.restriction(d).rank() == w.dim(d));
    const auto mu = w.parse("c1 + c2");
    CHECK(mu.degree == 4);
    CHECK(w.element_name(w.basis(4)[mu.v.first_set()]) == "N(D,1)");
    CHECK(w.parse("D1 + D2").v == mu.v);
    CHECK(w.parse("D1 D2").v == w.parse("P(D)").v);
    CHECK_THROWS_AS(w.parse("D1"), ModelError);
    // the norm class kills x
    const auto x = w.parse("x");
    CHECK(w.multiplication(mu, 1).column(0) == tsb::f2::BitVector(w.dim(5)));
    CHECK(w.multiplication(x, 4) * mu.v == tsb::f2::BitVector(w.dim(5)));
    CHECK(to_module(w).verify_action().ok);
}

TEST_CASE("heterotic twist decomposes into seven summands")
{
    auto h = std::make_shared<RingModel>(kz4(14));
    const WreathModel w(h, 14);
    const auto t = twist(w, "c1 + c2");
    CHECK(t.verify_action().ok);
    const auto m = tsb::module::truncate_above(t, 13);
    std::vector<std::vector<ModuleVector>> parts;
    const std::vector<std::vector<std::string>> gens = {{"U"},     {"Ux", "Ux^3", "Ux^7"}, {"UN(D^2,1)"}, {"UP(D)"},
                                                        {"UP(D)x", "UP(D)x^3"}, {"UN(DF,1)"}, {"UN(D^2,D)"}};
    for (const auto& g : gens) {
        parts.emplace_back();
        for (const auto& s : g)
            parts.back().push_back(tsb::module::parse_vector(m, s));
    }
    const auto res = tsb::module::verify_decomposition(m, parts);
    REQUIRE_MESSAGE(res.ok, res.failure);
    CHECK(dims(m, 12) == std::vector<std::size_t>{1, 1, 1, 1, 2, 1, 2, 2, 3, 2, 5, 5, 6});
    const auto block_degrees = [&](std::size_t b) {
        std::map<int, std::size_t> out;
        for (const auto& [d, n] : res.blocks[b].dims())
            if (n)
                out[d] = n;
        return out;
    };
    using D = std::map<int, std::size_t>;
    CHECK(block_degrees(0) == D{{0, 1}, {4, 1}, {6, 1}, {7, 1}, {10, 1}, {11, 1}, {13, 1}});
    D m2;
    for (int d = 1; d <= 13; ++d)
        m2[d] = 1;
    CHECK(block_degrees(1) == m2);
    CHECK(block_degrees(2) == D{{8, 1}, {12, 1}});
    CHECK(block_degrees(3) == D{{8, 1}, {10, 1}, {11, 1}, {12, 1}, {13, 1}});
    CHECK(block_degrees(4) == D{{9, 1}, {10, 1}, {11, 1}, {12, 1}, {13, 2}});
    CHECK(block_degrees(5) == D{{10, 1}, {11, 1}, {12, 1}, {13, 1}});
    CHECK(block_degrees(6) == D{{12, 1}});
}

TEST_CASE("twist by an even class is the untwisted module")
{
    const auto r = kz4(14);
    CHECK(twist(r, "2c").action(2, 4) == twist(r, "0").action(2, 4));
    CHECK(twist(r, "2c").action(2, 4) == to_module(r).action(2, 4));
}

TEST_CASE("twisted K(Z,4) matches the induced ABP module in low degrees")
{
    const int top = 14;
    auto t = std::make_shared<const GradedModule>(twist(kz4(top), "D"));
    auto ind = std::make_shared<const GradedModule>(
        tsb::module::truncate_above(tsb::module::induce(tsb::module::builtin_module("M"), 2), top));
    CHECK(dims(*t, top) == dims(*ind, top));
    // search the images of the three generators
    const ModuleVector u = tsb::module::parse_vector(*ind, "u");
    const ModuleVector w8 = tsb::module::parse_vector(*ind, "w8");
    const ModuleVector j0 = tsb::module::parse_vector(*ind, "j0");
    bool found = false;
    const std::size_t n8 = t->dim(8), n10 = t->dim(10);
    for (std::uint64_t a = 1; a < (1ULL << n8) && !found; ++a)
        for (std::uint64_t b = 1; b < (1ULL << n10) && !found; ++b) {
            tsb::f2::BitVector va(n8), vb(n10);
            for (std::size_t i = 0; i < n8; ++i)
                va.set(i, (a >> i) & 1);
            for (std::size_t i = 0; i < n10; ++i)
                vb.set(i, (b >> i) & 1);
            try {
                auto f = tsb::module::map_from_generators(
                    ind, t, {{u, {0, tsb::f2::BitVector::unit(1, 0)}}, {w8, {8, va}}, {j0, {10, vb}}});
                found = f.check().empty() && f.injective() && f.surjective();
            } catch (const std::exception&) {
            }
        }
    CHECK(found);
}

TEST_CASE("characteristic number witnesses")
{
    const auto hp2xs4 = witness_ring("hp2xs4");
    const long long v = char_number(hp2xs4, "D1 D2^2 + D1^2 D2", {{"D1", "y"}, {"D2", "x - y"}});
    CHECK(v == 1);
    const auto hp2 = witness_ring("hp2");
    CHECK(char_number(hp2, "c(P) c(Q)", {{"c(P)", "2x"}, {"c(Q)", "-x"}}) == -2);
    CHECK_THROWS_AS(char_number(hp2, "x"), ModelError);
}
