#include <random>

#include "doctest.h"
#include "tsb/f2/matrix.hpp"

using namespace tsb::f2;

namespace {

F2Matrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c)
{
    F2Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (rng() & 1)
                m.set(i, j);
    return m;
}

}  // namespace

TEST_CASE("rref small cases")
{
    auto id = rref(F2Matrix::identity(2));
    CHECK(id.reduced == F2Matrix::identity(2));
    CHECK(id.pivots == std::vector<std::size_t>{0, 1});
    CHECK(id.transform == F2Matrix::identity(2));

    auto z = rref(F2Matrix(1, 3));
    CHECK(z.reduced.is_zero());
    CHECK(z.pivots.empty());
    CHECK(z.transform == F2Matrix::identity(1));

    auto ones = rref(F2Matrix::from_rows({{1, 1}, {1, 1}}));
    CHECK(ones.rank() == 1);
    CHECK(ones.pivots == std::vector<std::size_t>{0});
}

TEST_CASE("kernel and solve small cases")
{
    CHECK(kernel_basis(F2Matrix::identity(3)).empty());
    CHECK(kernel_basis(F2Matrix(2, 2)).size() == 2);
    auto k = kernel_basis(F2Matrix::from_rows({{1, 1}}));
    REQUIRE(k.size() == 1);
    CHECK(k[0] == BitVector::from_bits({1, 1}));

    auto x = solve(F2Matrix::identity(2), BitVector::from_bits({1, 0}));
    REQUIRE(x);
    CHECK(*x == BitVector::from_bits({1, 0}));

    const auto row = F2Matrix::from_rows({{1, 1}});
    auto y = solve(row, BitVector::from_bits({1}));
    REQUIRE(y);
    CHECK(row * *y == BitVector::from_bits({1}));

    CHECK_FALSE(solve(F2Matrix(1, 2), BitVector::from_bits({1})));
    CHECK_THROWS_AS(solve(F2Matrix(2, 2), BitVector(3)), DimensionError);
}

TEST_CASE("random matrices: rref, kernel, solve")
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t r = 1 + rng() % 90;
        const std::size_t c = 1 + rng() % 150;
        const auto m = random_matrix(rng, r, c);
        const auto res = rref(m);
        CHECK(res.transform * m == res.reduced);
        for (std::size_t i = 1; i < res.pivots.size(); ++i)
            CHECK(res.pivots[i - 1] < res.pivots[i]);
        for (std::size_t i = 0; i < res.pivots.size(); ++i)
            CHECK(res.reduced.column(res.pivots[i]).popcount() == 1);
        CHECK(m.rank() == res.rank());
        CHECK(m.transpose().rank() == res.rank());

        const auto ker = kernel_basis(m);
        CHECK(ker.size() + res.rank() == c);
        EchelonBasis eb(c);
        for (const auto& v : ker) {
            CHECK((m * v).is_zero());
            CHECK(eb.insert(v));
        }

        BitVector x(c);
        for (std::size_t j = 0; j < c; ++j)
            if (rng() & 1)
                x.set(j);
        const auto b = m * x;
        auto y = solve(m, b);
        REQUIRE(y);
        CHECK(m * *y == b);
    }
}

TEST_CASE("echelon basis expresses vectors through inserted ones")
{
    std::mt19937 rng(11);
    EchelonBasis eb(40);
    std::vector<BitVector> inserted;
    for (int i = 0; i < 30; ++i) {
        BitVector v(40);
        for (int j = 0; j < 40; ++j)
            if (rng() % 5 == 0)
                v.set(j);
        eb.insert(v);
        inserted.push_back(v);
    }
    BitVector target(40);
    for (int k : {2, 5, 17})
        target ^= inserted[k];
    auto combo = eb.express(target);
    REQUIRE(combo);
    BitVector back(40);
    for (auto k : combo->support())
        back ^= inserted[k];
    CHECK(back == target);
}
